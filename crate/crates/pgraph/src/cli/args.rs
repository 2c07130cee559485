use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "pgraph", version, about = "p-Schrödinger operators, energies and criticality on weighted graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Graph source: a file or a model window.
#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    /// JSON graph or TSV edge list.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// TSV vertex file `id m c` for a TSV edge list.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sidecar: Option<PathBuf>,
    /// nat_line, int_line, grid2d, star, complete or weighted_line.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub radius: Option<usize>,
    /// Multiplies every model edge weight.
    #[arg(long, default_value_t = 1.0)]
    pub edge_scale: f64,
    /// Constant model potential.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub potential: f64,
    /// Consecutive weights for weighted_line.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides the default verification tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub grad_tol: f64,
    /// Random restarts for nonconvex problems.
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelArg {
    Ineq2,
    GsrLike,
    CorollaryH1,
    Ineq1,
    Ineq34,
    Ineq5,
    Lindqvist,
    Cp,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Applies H to a function and checks Green's formula.
    Apply(ApplyArgs),
    /// Energy of a test function and the simplified energies.
    Energy(EnergyArgs),
    /// Ground state representation and the simplified-energy bounds.
    Gsr(GsrArgs),
    /// Minimum of the Picone residual over random test functions.
    Picone(PiconeArgs),
    /// Capacity of a vertex relative to a subset.
    Capacity(CapacityArgs),
    /// Null sequences over growing windows and the criticality verdict.
    NullSeq(NullSeqArgs),
    /// Harnack constant of a connected set.
    Harnack(HarnackArgs),
    /// Hardy weight from a positive supersolution.
    Hardy(HardyArgs),
    /// Comparison of two energies on the same exhaustion.
    Liouville(LiouvilleArgs),
    /// Grid scans of the elementary inequalities.
    IneqScan(IneqScanArgs),
    /// Structural checks of a model family.
    ModelCheck(ModelCheckArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Apply(_) => "apply",
            Command::Energy(_) => "energy",
            Command::Gsr(_) => "gsr",
            Command::Picone(_) => "picone",
            Command::Capacity(_) => "capacity",
            Command::NullSeq(_) => "null-seq",
            Command::Harnack(_) => "harnack",
            Command::Hardy(_) => "hardy",
            Command::Liouville(_) => "liouville",
            Command::IneqScan(_) => "ineq-scan",
            Command::ModelCheck(_) => "model-check",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Apply(a) => &a.common,
            Command::Energy(a) => &a.common,
            Command::Gsr(a) => &a.common,
            Command::Picone(a) => &a.common,
            Command::Capacity(a) => &a.common,
            Command::NullSeq(a) => &a.common,
            Command::Harnack(a) => &a.common,
            Command::Hardy(a) => &a.common,
            Command::Liouville(a) => &a.common,
            Command::IneqScan(a) => &a.common,
            Command::ModelCheck(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Function to apply H to: hardy, const[:v], random or a file.
    #[arg(long, default_value = "const:1")]
    pub u: String,
    /// Test function for Green's formula.
    #[arg(long)]
    pub phi: Option<String>,
    /// Subset for Green's formula and the classification; defaults to the
    /// interior.
    #[arg(long)]
    pub subset: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "random")]
    pub phi: String,
    /// Weight for the simplified energies.
    #[arg(long)]
    pub u: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GsrArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "const:1")]
    pub u: String,
    #[arg(long, default_value = "random")]
    pub phi: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PiconeArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "const:1")]
    pub u: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Pinned vertex; defaults to the model root.
    #[arg(long, allow_hyphen_values = true)]
    pub root: Option<String>,
    /// Support of the competitors; defaults to the interior.
    #[arg(long, allow_hyphen_values = true)]
    pub subset: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub pin: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NullSeqArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub root: Option<String>,
    /// Window radii; defaults to radius/8, radius/4, radius/2, radius.
    #[arg(long, value_delimiter = ',')]
    pub radii: Vec<usize>,
    /// Value of every null-sequence element at the root.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Positive supersolution for a Hardy certificate and the ground state
    /// comparison.
    #[arg(long)]
    pub u: Option<String>,
    /// Vertices for the ground state comparison; defaults to the root.
    #[arg(long, allow_hyphen_values = true)]
    pub core: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HarnackArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// The connected set K.
    #[arg(long, allow_hyphen_values = true)]
    pub subset: String,
    /// Lower bound f in Hu >= f u^(p-1).
    #[arg(long, default_value = "const:0")]
    pub f: String,
    /// Supersolution to test the bound on.
    #[arg(long)]
    pub u: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HardyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long, default_value = "hardy")]
    pub u: String,
    /// Proper subset for the capacity floor check; the weight itself lives
    /// on the interior.
    #[arg(long, allow_hyphen_values = true)]
    pub subset: Option<String>,
    /// Vertex of the subset for the floor check.
    #[arg(long, allow_hyphen_values = true)]
    pub root: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LiouvilleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long, value_delimiter = ',')]
    pub radii: Vec<usize>,
    /// Ground state of the reference energy: hardy or const[:v].
    #[arg(long, default_value = "const:1")]
    pub u: String,
    /// Subharmonic function of the comparison energy; defaults to `u`.
    #[arg(long)]
    pub u_tilde: Option<String>,
    /// Comparison weights are this multiple of the reference weights.
    #[arg(long, default_value_t = 1.0)]
    pub compare_scale: f64,
    /// Comparison potential; defaults to the reference potential.
    #[arg(long, allow_negative_numbers = true)]
    pub compare_potential: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Compares h with its simplified energy for a harmonic `u` instead.
    #[arg(long)]
    pub transfer: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IneqScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = KernelArg::Ineq2)]
    pub kernel: KernelArg,
    /// Constant for the ineq1 kernel.
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub a_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub a_max: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub a_step: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub t_step: f64,
    /// Point for the single-point checks.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelCheckArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}
