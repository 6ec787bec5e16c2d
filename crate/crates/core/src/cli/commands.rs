use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use curvscape::curvature::curvature;
use curvscape::graph::{
    generate_community, generate_er, load_graph_set, member_seed, named_graph, read_graph_file,
    sample_graphon_set, sample_set, to_edge_list, write_jsonl, Graph, GraphSet,
};
use curvscape::landscape::{
    distance_between_groups, prepare_landscapes, DistanceReport, PersistenceLandscape,
};
use curvscape::persistence::{diagram_of, PersistenceDiagram};
use curvscape::report::{fmt_float, json_float, to_json_text};
use curvscape::stats::{
    check_forman_bounds, check_orc_bounds, check_resistance_bounds, graphon_experiment,
    pairwise_distinguish, permutation_test_prepared, perturbation_sweep, BoundCheckReport,
    DISTINGUISH_TOLERANCE,
};

use super::args::{Command, Experiment, ExperimentArgs, Format, GenerateArgs, Model, RunConfig};
use super::Failure;

/// Fractions swept by `experiment perturb` when none are given.
const DEFAULT_FRACTIONS: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
/// Named graphs compared by `experiment distinguish` when none are given.
const DEFAULT_DISTINGUISH: [&str; 2] = ["rook4x4", "shrikhande"];
/// Redraws allowed when `experiment bounds` needs a connected ER graph.
const CONNECTED_ATTEMPTS: u64 = 1000;

/// Runs one command and returns everything destined for standard output.
pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<String, Failure> {
    match cmd {
        Command::Curvature { graph } => cmd_curvature(graph, cfg),
        Command::Diagram { graph } => cmd_diagram(graph, cfg),
        Command::Landscape { graph } => cmd_landscape(graph, cfg),
        Command::Compare {
            set_a,
            set_b,
            permutations,
        } => cmd_compare(set_a, set_b, *permutations, cfg),
        Command::Generate(args) => cmd_generate(args, cfg),
        Command::Experiment(args) => cmd_experiment(args, cfg),
    }
}

fn cmd_curvature(path: &Path, cfg: &RunConfig) -> Result<String, Failure> {
    let g = read_graph_file(path)?;
    let f = curvature(&g, cfg.pipeline.kind, &cfg.pipeline.measure)?;
    Ok(match cfg.format {
        Format::Json => to_json_text(&f.to_json()),
        Format::Csv => f.to_csv(),
    })
}

fn diagram_csv(d: &PersistenceDiagram) -> String {
    let mut out = String::from("dim,birth,death\n");
    for dim in 0..2 {
        for &(b, e) in d.dim(dim) {
            let _ = writeln!(out, "{dim},{},{}", fmt_float(b), fmt_float(e));
        }
    }
    out
}

fn cmd_diagram(path: &Path, cfg: &RunConfig) -> Result<String, Failure> {
    let g = read_graph_file(path)?;
    let f = curvature(&g, cfg.pipeline.kind, &cfg.pipeline.measure)?;
    let d = diagram_of(&g, &f)?;
    Ok(match cfg.format {
        Format::Json => to_json_text(&d.to_json()),
        Format::Csv => diagram_csv(&d),
    })
}

fn landscape_csv(l: &PersistenceLandscape) -> String {
    let mut out = String::from("dim,level,t,value\n");
    for dim in 0..2 {
        for (k, level) in l.levels(dim).iter().enumerate() {
            for (t, &v) in l.grid().points().zip(level) {
                let _ = writeln!(out, "{dim},{},{},{}", k + 1, fmt_float(t), fmt_float(v));
            }
        }
    }
    out
}

fn cmd_landscape(path: &Path, cfg: &RunConfig) -> Result<String, Failure> {
    let g = read_graph_file(path)?;
    let prepared = prepare_landscapes(&[&g], &cfg.pipeline)?;
    let l = &prepared.landscapes[0];
    Ok(match cfg.format {
        Format::Json => to_json_text(&l.to_json()),
        Format::Csv => landscape_csv(l),
    })
}

fn cmd_compare(a: &Path, b: &Path, permutations: usize, cfg: &RunConfig) -> Result<String, Failure> {
    let a = load_graph_set(a)?;
    let b = load_graph_set(b)?;
    a.ensure_non_empty()?;
    b.ensure_non_empty()?;
    let all: Vec<&Graph> = a.iter().chain(b.iter()).collect();
    let prepared = prepare_landscapes(&all, &cfg.pipeline)?;
    let ia: Vec<usize> = (0..a.len()).collect();
    let ib: Vec<usize> = (a.len()..all.len()).collect();
    let report = DistanceReport {
        distance: distance_between_groups(&prepared, &ia, &ib, &cfg.pipeline)?,
        config: cfg.pipeline,
        sizes: (a.len(), b.len()),
        grid: prepared.grid,
    };
    let test = if permutations > 0 {
        Some(permutation_test_prepared(&prepared, a.len(), &cfg.pipeline, permutations, cfg.seed)?)
    } else {
        None
    };
    Ok(match cfg.format {
        Format::Json => {
            let mut v = report.to_json();
            v["seed"] = json!(cfg.seed);
            if let Some(t) = &test {
                v["test"] = t.to_json();
            }
            to_json_text(&v)
        }
        Format::Csv => match &test {
            Some(t) => format!(
                "distance,fraction_higher,permutations\n{},{},{}\n",
                fmt_float(report.distance),
                fmt_float(t.fraction_higher),
                t.n_permutations
            ),
            None => format!("distance\n{}\n", fmt_float(report.distance)),
        },
    })
}

fn cmd_generate(args: &GenerateArgs, cfg: &RunConfig) -> Result<String, Failure> {
    let graphs = match args.model {
        Model::Er => sample_set(args.count, cfg.seed, |s| generate_er(args.n, args.p, s))?,
        Model::Community => sample_set(args.count, cfg.seed, |s| generate_community(args.n, s))?,
        Model::Graphon => {
            if args.min_n > args.max_n {
                return Err(Failure::Usage(format!(
                    "--min-n {} exceeds --max-n {}",
                    args.min_n, args.max_n
                )));
            }
            sample_graphon_set(args.graphon, args.count, args.min_n..=args.max_n, cfg.seed)?
        }
        Model::Named => {
            let name = args
                .name
                .as_deref()
                .ok_or_else(|| Failure::Usage("generate named requires --name".into()))?;
            vec![named_graph(name)?]
        }
    };
    match &cfg.out {
        None => Ok(write_jsonl(&graphs)),
        Some(dir) => {
            create_dir(dir)?;
            for (k, g) in graphs.iter().enumerate() {
                write_file(&dir.join(format!("graph_{k:04}.edges")), &to_edge_list(g))?;
            }
            Ok(format!("generated {} graphs in {}\n", graphs.len(), dir.display()))
        }
    }
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// A finished experiment: JSON report, table-shaped CSV and a one-line summary.
struct Outcome {
    name: &'static str,
    json: Value,
    csv: String,
    summary: String,
}

fn cmd_experiment(args: &ExperimentArgs, cfg: &RunConfig) -> Result<String, Failure> {
    let outcome = match args.name {
        Experiment::Perturb => exp_perturb(args, cfg)?,
        Experiment::Distinguish => exp_distinguish(args, cfg)?,
        Experiment::Graphon => exp_graphon(args, cfg)?,
        Experiment::Bounds => exp_bounds(args, cfg)?,
    };
    match &cfg.out {
        None => Ok(match cfg.format {
            Format::Json => to_json_text(&outcome.json),
            Format::Csv => outcome.csv,
        }),
        Some(dir) => {
            create_dir(dir)?;
            let json_path: PathBuf = dir.join(format!("{}.json", outcome.name));
            write_file(&json_path, &to_json_text(&outcome.json))?;
            write_file(&dir.join(format!("{}.csv", outcome.name)), &outcome.csv)?;
            Ok(format!("{}: {} -> {}\n", outcome.name, outcome.summary, json_path.display()))
        }
    }
}

fn envelope(name: &str, cfg: &RunConfig, report: Value) -> Value {
    json!({
        "experiment": name,
        "seed": cfg.seed,
        "config": cfg.pipeline.to_json(),
        "report": report,
    })
}

fn exp_perturb(args: &ExperimentArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let base = match &args.set {
        Some(path) => load_graph_set(path)?,
        None => GraphSet::new(sample_set(args.count, cfg.seed, |s| generate_community(args.n, s))?),
    };
    let fractions = if args.fractions.is_empty() {
        DEFAULT_FRACTIONS.to_vec()
    } else {
        args.fractions.clone()
    };
    let r = perturbation_sweep(&base, args.mode, &fractions, &cfg.pipeline, cfg.seed)?;
    let summary = format!(
        "mode={} pearson={}",
        r.mode,
        r.pearson.map_or("undefined".into(), fmt_float)
    );
    Ok(Outcome {
        name: "perturb",
        json: envelope("perturb", cfg, r.to_json()),
        csv: r.to_csv(),
        summary,
    })
}

fn exp_distinguish(args: &ExperimentArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let names: Vec<String> = if args.graphs.is_empty() {
        DEFAULT_DISTINGUISH.iter().map(|s| s.to_string()).collect()
    } else {
        args.graphs.clone()
    };
    let graphs = names.iter().map(|n| named_graph(n)).collect::<Result<Vec<_>, _>>()?;
    let set = GraphSet::with_labels(graphs, names.clone())?;
    let r = pairwise_distinguish(&set, args.method, &cfg.pipeline, DISTINGUISH_TOLERANCE)?;
    let mut csv = String::from("a,b,distance\n");
    for &(i, j, d) in &r.pairs {
        let _ = writeln!(csv, "{},{},{}", names[i], names[j], fmt_float(d));
    }
    Ok(Outcome {
        name: "distinguish",
        json: envelope("distinguish", cfg, r.to_json(&names)),
        csv,
        summary: format!("method={} success_rate={}", r.method, fmt_float(r.success_rate)),
    })
}

fn exp_graphon(args: &ExperimentArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let &[w_a, w_b] = args.pair.as_slice() else {
        return Err(Failure::Usage(format!(
            "--pair takes exactly two graphons, got {}",
            args.pair.len()
        )));
    };
    if args.min_n > args.max_n {
        return Err(Failure::Usage(format!(
            "--min-n {} exceeds --max-n {}",
            args.min_n, args.max_n
        )));
    }
    let r = graphon_experiment(
        (w_a, w_b),
        args.samples,
        args.permutations,
        &args.graphons,
        args.cluster_samples,
        args.min_n..=args.max_n,
        &cfg.pipeline,
        cfg.seed,
    )?;
    let mut csv = String::from("index,graphon,truth,predicted\n");
    for (i, (&t, &p)) in r.clustering.truth.iter().zip(&r.clustering.predicted).enumerate() {
        let _ = writeln!(csv, "{i},{},{t},{p}", r.clustering.graphons[t]);
    }
    let summary = format!(
        "{}-{} fraction_higher={} ari={}",
        w_a,
        w_b,
        fmt_float(r.test.result.fraction_higher),
        fmt_float(r.clustering.ari)
    );
    Ok(Outcome {
        name: "graphon",
        json: envelope("graphon", cfg, r.to_json()),
        csv,
        summary,
    })
}

/// First connected ER(n, p) sample among the seeded members, with its index.
fn connected_er(n: usize, p: f64, seed: u64) -> Result<(Graph, u64), Failure> {
    for k in 0..CONNECTED_ATTEMPTS {
        let g = generate_er(n, p, member_seed(seed, k))?;
        if g.is_connected() && g.edge_count() >= 2 {
            return Ok((g, k));
        }
    }
    Err(Failure::Compute(format!(
        "no connected ER({n}, {p}) sample in {CONNECTED_ATTEMPTS} draws"
    )))
}

fn exp_bounds(args: &ExperimentArgs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let (g, attempt) = connected_er(args.n, args.p, cfg.seed)?;
    let mut reports: Vec<BoundCheckReport> = check_forman_bounds(&g, args.trials, cfg.seed);
    reports.push(check_orc_bounds(&g, &cfg.pipeline.measure, args.trials, cfg.seed)?);
    reports.extend(check_resistance_bounds(&g, args.trials, cfg.seed)?);
    let mut csv = format!("{}\n", BoundCheckReport::CSV_HEADER);
    for r in &reports {
        let _ = writeln!(csv, "{}", r.csv_row());
    }
    let violations: usize = reports.iter().map(|r| r.violations).sum();
    let report = json!({
        "graph": {
            "n": g.n(),
            "p": json_float(args.p),
            "edges": g.edge_count(),
            "draw": attempt,
        },
        "checks": reports.iter().map(BoundCheckReport::to_json).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        name: "bounds",
        json: envelope("bounds", cfg, report),
        csv,
        summary: format!("checks={} violations={violations}", reports.len()),
    })
}
