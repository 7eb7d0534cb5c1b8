use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "steptrap", version, about = "Two trapped atoms with a step-like interaction: spectra, correlations, perturbative corrections and quenches")]
pub struct Cli {
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Energy levels along a sweep of v0 or a.
    Spectrum(SpectrumArgs),
    /// Ground-state energy and average separation versus the range.
    Correlation(CorrelationArgs),
    /// Step, first-order corrected and exact energies for the smooth interaction.
    Perturb(PerturbArgs),
    /// Sudden change of the step in 1D, evolved in time.
    Quench(QuenchArgs),
    /// Re-run a previous run from its manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Vary {
    V0,
    A,
}

impl Vary {
    pub fn as_str(self) -> &'static str {
        match self {
            Vary::V0 => "v0",
            Vary::A => "a",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Dimensionality (1, 2 or 3).
    #[arg(long)]
    pub dim: u32,
    /// Swept parameter.
    #[arg(long, value_enum)]
    pub vary: Vary,
    /// The held parameter, as a=<value>, v0=<value> or a bare number.
    #[arg(long, allow_hyphen_values = true)]
    pub fixed: String,
    /// Sweep lo:hi:points.
    #[arg(long, allow_hyphen_values = true)]
    pub range: String,
    /// Levels, e.g. n=0..8 or n=0,l=0..4.
    #[arg(long, default_value = "n=0")]
    pub levels: String,
    /// Energy step of the root bracketing scan.
    #[arg(long, default_value_t = 0.01)]
    pub scan_step: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelationArgs {
    #[arg(long)]
    pub dim: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub v0: f64,
    /// Range sweep lo:hi:points.
    #[arg(long, default_value = "0:4:41")]
    pub a_range: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PerturbArgs {
    #[arg(long)]
    pub dim: u32,
    /// Step range, also used as the smooth interaction's Rc.
    #[arg(long)]
    pub a: f64,
    /// Strength sweep lo:hi:points; v0 = g.
    #[arg(long, allow_hyphen_values = true)]
    pub v0_range: String,
    #[arg(long, default_value = "n=0")]
    pub levels: String,
    /// Also write first-order corrected eigenfunctions (known to be poor).
    #[arg(long)]
    pub experimental_eigvec: bool,
    /// States in the eigenfunction correction sum.
    #[arg(long, default_value_t = 8)]
    pub basis: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct QuenchArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub v0_initial: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub v0_final: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Range after the quench (default: unchanged).
    #[arg(long)]
    pub a_final: Option<f64>,
    /// Initial 1D level.
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = steptrap::dynamics::DEFAULT_DT)]
    pub dt: f64,
    #[arg(long, default_value_t = steptrap::dynamics::DEFAULT_DX)]
    pub dx: f64,
    /// Half width of the box [-box, box].
    #[arg(long = "box", default_value_t = steptrap::dynamics::DEFAULT_HALF_WIDTH)]
    pub half_width: f64,
    /// Comma-separated snapshot times.
    #[arg(long, default_value = "0,1,2,5")]
    pub snapshots: String,
    /// Steps between recorded samples.
    #[arg(long, default_value_t = steptrap::dynamics::DEFAULT_SAMPLE_EVERY)]
    pub sample_every: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write outputs here instead of the recorded path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
