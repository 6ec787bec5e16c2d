use crate::curvature::EdgeFunction;
use crate::error::{Error, Result};

fn range(f: &EdgeFunction) -> Result<(f64, f64)> {
    match (f.min(), f.max()) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::Empty("edge function")),
    }
}

/// `max(|max f - min g|, |max g - min f|)`, an upper bound on the bottleneck
/// distance between the diagrams of `f` and `g` whenever that distance is
/// finite.
pub fn diagram_bound_upper(f: &EdgeFunction, g: &EdgeFunction) -> Result<f64> {
    let (f_lo, f_hi) = range(f)?;
    let (g_lo, g_hi) = range(g)?;
    Ok((f_hi - g_lo).abs().max((g_hi - f_lo).abs()))
}

/// `max_x min_y |f(x) - g(y)|`: the best sup-distance achievable by any map
/// from the edges of `f` to the edges of `g`.
pub fn diagram_bound_lower(f: &EdgeFunction, g: &EdgeFunction) -> Result<f64> {
    range(f)?;
    range(g)?;
    let targets = g.sorted_values();
    let nearest = |x: f64| {
        let i = targets.partition_point(|&y| y < x);
        let mut best = f64::INFINITY;
        if i < targets.len() {
            best = best.min((targets[i] - x).abs());
        }
        if i > 0 {
            best = best.min((x - targets[i - 1]).abs());
        }
        best
    };
    Ok(f.values().map(nearest).fold(0.0, f64::max))
}
