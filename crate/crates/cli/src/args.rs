use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const WINDOW_HELP: &str = "Eigenvalue window. Intervals `[x,y]` or `(x,y)` (mixed brackets allowed) \
joined by `u`, e.g. `[-1,-0.6]u[-0.2,0.2]u[0.6,1]`; or `lower:A` for [-1,-1+A), `upper:A` for \
(1-A,1], `center:A` for (ε-A,ε+A) around the input's mean value ε. Whitespace is ignored.";

#[derive(Debug, Parser)]
#[command(name = "spherelok", version, about = "Space-localized bases for band-limited functions on the sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build (or verify) a plan cache for the band (n, m).
    Plan(PlanCmd),
    /// Harmonic coefficients to localized coefficients.
    Analyze(TransformCmd),
    /// Localized coefficients to harmonic coefficients.
    Synthesize(TransformCmd),
    /// Split a function by the eigenvalues of its localized expansion.
    Filter(FilterCmd),
    /// Eigenvalue distribution diagnostics.
    Spectrum(SpectrumCmd),
    /// Sample a function or a basis function on a θ×φ grid as CSV.
    Grid(GridCmd),
    /// Time dense and fast analysis over several band limits.
    Bench(BenchCmd),
    /// Run the built-in invariant checks.
    Selftest(SelftestCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Dense,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NdctArg {
    Direct,
    Window,
}

/// Where the plan comes from: a cache file, explicit band limits, or the
/// band of the input file.
#[derive(Debug, Args)]
pub struct PlanSource {
    /// Plan cache written by `spherelok plan`.
    #[arg(long, conflicts_with_all = ["n", "m"])]
    pub plan: Option<PathBuf>,
    /// Upper band limit.
    #[arg(long)]
    pub n: Option<usize>,
    /// Lower band limit.
    #[arg(long, requires = "n")]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PlanCmd {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Cache file to write; an existing cache for the same band is verified instead.
    #[arg(long)]
    pub out: PathBuf,
    /// Replace an existing cache for a different band.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct TransformCmd {
    #[command(flatten)]
    pub source: PlanSource,
    /// Input coefficient file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output coefficient file.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Dense)]
    pub mode: ModeArg,
    /// Cosine evaluation used by the fast path.
    #[arg(long, value_enum, default_value_t = NdctArg::Direct)]
    pub ndct: NdctArg,
}

#[derive(Debug, Args)]
pub struct FilterCmd {
    #[command(flatten)]
    pub source: PlanSource,
    /// Harmonic coefficient file.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, help = WINDOW_HELP)]
    pub window: String,
    /// Kept part, harmonic coefficients.
    #[arg(long)]
    pub out: PathBuf,
    /// Removed part, harmonic coefficients.
    #[arg(long)]
    pub removed: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SpectrumCmd {
    #[command(flatten)]
    pub source: PlanSource,
    /// Histogram cells over [-1, 1].
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    /// Counting interval `a,b` for C(a,b).
    #[arg(long, default_value = "0,0.5", allow_hyphen_values = true)]
    pub interval: String,
    /// List every eigenvalue as `k i x`.
    #[arg(long)]
    pub pairs: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GridCmd {
    #[command(flatten)]
    pub source: PlanSource,
    /// Coefficient file (harmonic or localized).
    #[arg(long = "in", conflicts_with = "psi", required_unless_present = "psi")]
    pub input: Option<PathBuf>,
    /// Basis function ψ_{K,I} with one-based I.
    #[arg(long, num_args = 2, value_names = ["K", "I"], allow_negative_numbers = true)]
    pub psi: Option<Vec<i64>>,
    /// Equispaced θ samples over [0, π] (default 2n + 2).
    #[arg(long)]
    pub theta_res: Option<usize>,
    /// Equispaced φ samples over [0, 2π) (default 2n + 2).
    #[arg(long)]
    pub phi_res: Option<usize>,
    /// CSV output `theta,phi,re,im`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchCmd {
    /// Comma-separated band limits.
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// `fast` also times the fast path next to the dense one.
    #[arg(long, value_enum, default_value_t = ModeArg::Dense)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = NdctArg::Window)]
    pub ndct: NdctArg,
    /// Timed repetitions per size (median reported).
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SelftestCmd {
    #[arg(long)]
    pub json: bool,
}
