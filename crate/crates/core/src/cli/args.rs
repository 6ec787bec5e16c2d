use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use curvscape::curvature::{CurvatureKind, MeasureConfig, MeasureKind};
use curvscape::graph::{Graphon, PerturbMode};
use curvscape::landscape::{DistanceMode, Norm, PipelineConfig, DEFAULT_MAX_DEPTH, DEFAULT_RESOLUTION};
use curvscape::stats::DistinguishMethod;

use super::Failure;

#[derive(Debug, Parser)]
#[command(name = "curvscape", version, about = "Curvature filtrations and distances between graph distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Edge curvature table of one graph.
    Curvature { graph: PathBuf },
    /// Persistence diagram of the curvature filtration of one graph.
    Diagram { graph: PathBuf },
    /// Persistence landscape of one graph.
    Landscape { graph: PathBuf },
    /// Distance between two graph sets, optionally with a permutation test.
    Compare {
        set_a: PathBuf,
        set_b: PathBuf,
        /// Number of permutations; 0 reports the distance only.
        #[arg(long, default_value_t = 0)]
        permutations: usize,
    },
    /// Sample graphs from a random model.
    Generate(GenerateArgs),
    /// Run one of the experiment harnesses.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Pipeline and execution options shared by every subcommand.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// JSON file with run options; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Curvature: frc, orc or rec.
    #[arg(long, global = true)]
    pub kind: Option<CurvatureKind>,
    /// Ollivier–Ricci measure: uniform or rw.
    #[arg(long, global = true)]
    pub measure: Option<MeasureKind>,
    #[arg(long, global = true)]
    pub rw_steps: Option<usize>,
    #[arg(long, global = true)]
    pub self_mass: Option<f64>,
    /// Landscape grid sample count.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Padding above the largest filtration value where essential classes end.
    #[arg(long, global = true)]
    pub cap_padding: Option<f64>,
    /// Landscape norm p: 1, 2 or sup.
    #[arg(long, global = true)]
    pub norm: Option<Norm>,
    /// Landscape distance: norm_of_diff or alg2.
    #[arg(long = "distance", id = "distance", global = true)]
    pub mode: Option<DistanceMode>,
    #[arg(long, global = true)]
    pub max_depth: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "CURVSCAPE_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output directory for generated graphs or experiment reports.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Contents of a `--config` file; every field is optional and enum values
/// use the same spellings as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub kind: Option<String>,
    pub measure: Option<String>,
    pub rw_steps: Option<usize>,
    pub self_mass: Option<f64>,
    pub resolution: Option<usize>,
    pub cap_padding: Option<f64>,
    #[serde(alias = "p")]
    pub norm: Option<String>,
    #[serde(alias = "distance")]
    pub mode: Option<String>,
    pub max_depth: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub format: Option<Format>,
}

fn parse_field<T: FromStr>(name: &str, value: Option<&str>) -> Result<Option<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    value
        .map(|v| v.parse().map_err(|e| Failure::Usage(format!("config field `{name}`: {e}"))))
        .transpose()
}

/// Fully resolved and validated run options.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub pipeline: PipelineConfig,
    pub seed: u64,
    pub workers: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, Failure> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<RunFile>(&text)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
            }
            None => RunFile::default(),
        };
        let kind = parse_field("kind", file.kind.as_deref())?;
        let measure = parse_field("measure", file.measure.as_deref())?;
        let norm = parse_field("norm", file.norm.as_deref())?;
        let mode = parse_field("mode", file.mode.as_deref())?;
        let defaults = MeasureConfig::default();
        let pipeline = PipelineConfig {
            kind: self.kind.or(kind).unwrap_or(CurvatureKind::Orc),
            measure: MeasureConfig {
                kind: self.measure.or(measure).unwrap_or(defaults.kind),
                steps: self.rw_steps.or(file.rw_steps).unwrap_or(defaults.steps),
                self_mass: self.self_mass.or(file.self_mass).unwrap_or(defaults.self_mass),
            },
            resolution: self.resolution.or(file.resolution).unwrap_or(DEFAULT_RESOLUTION),
            cap_padding: self.cap_padding.or(file.cap_padding),
            norm: self.norm.or(norm).unwrap_or(Norm::Sup),
            mode: self.mode.or(mode).unwrap_or(DistanceMode::NormOfDiff),
            max_depth: self.max_depth.or(file.max_depth).unwrap_or(DEFAULT_MAX_DEPTH),
        };
        pipeline
            .validate()
            .map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(RunConfig {
            pipeline,
            seed: self.seed.or(file.seed).unwrap_or(0),
            workers: self.workers.or(file.workers).unwrap_or(0),
            format: self.format.or(file.format).unwrap_or(Format::Json),
            out: self.out.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Er,
    Community,
    Graphon,
    Named,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub model: Model,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Vertex count (er, community).
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Edge probability (er).
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    #[arg(long, default_value = "W1")]
    pub graphon: Graphon,
    #[arg(long, default_value_t = 9)]
    pub min_n: usize,
    #[arg(long, default_value_t = 37)]
    pub max_n: usize,
    /// Graph name (named).
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Perturb,
    Distinguish,
    Graphon,
    Bounds,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: Experiment,

    // perturb
    /// Perturbation direction: add or delete.
    #[arg(long, default_value = "add")]
    pub mode: PerturbMode,
    /// Comma-separated fractions; default 0.0, 0.1, …, 0.9.
    #[arg(long, value_delimiter = ',')]
    pub fractions: Vec<f64>,
    /// Graph set (directory, JSON lines or edge list) instead of generated graphs.
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 20)]
    pub n: usize,

    // distinguish
    /// Comma-separated named graphs.
    #[arg(long, value_delimiter = ',')]
    pub graphs: Vec<String>,
    #[arg(long, default_value = "raw_hist")]
    pub method: DistinguishMethod,

    // graphon
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long, default_value_t = 200)]
    pub permutations: usize,
    #[arg(long, default_value_t = 15)]
    pub cluster_samples: usize,
    /// Graphons to cluster.
    #[arg(long, value_delimiter = ',', default_value = "W1,W2,W3")]
    pub graphons: Vec<Graphon>,
    /// The two graphons of the permutation test.
    #[arg(long, value_delimiter = ',', default_value = "W1,W4")]
    pub pair: Vec<Graphon>,
    #[arg(long, default_value_t = 9)]
    pub min_n: usize,
    #[arg(long, default_value_t = 37)]
    pub max_n: usize,

    // bounds
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// Edge probability of the ER test graph.
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
}
