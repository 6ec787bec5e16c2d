//! Stable number formatting for machine-readable output.
//!
//! Every float leaving the library through JSON or CSV is rounded to 12
//! significant digits so that reruns produce byte-identical files.

use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest decimal text of `round_sig(x)`; infinities become `inf`/`-inf`.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{}", round_sig(x))
    }
}

/// JSON value of a float: a rounded number, or the string `"inf"`/`"-inf"`/`"nan"`.
pub fn json_float(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(round_sig(x))
            .map(Value::Number)
            .unwrap_or(Value::Null)
    } else {
        Value::String(fmt_float(x))
    }
}

pub fn json_floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_float(x)).collect())
}

/// Pretty JSON text terminated by a newline.
pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serialises");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_float(2.0), "2");
        assert_eq!(fmt_float(-0.5), "-0.5");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(json_float(f64::INFINITY), Value::String("inf".into()));
    }
}
