use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "zres", version, about = "Resonators, Euler-product bounds and joint large values of zeta")]
pub struct Cli {
    /// Flat JSON object of flag values; command-line flags and ZRES_* variables win.
    #[arg(long, global = true, env = "ZRES_CONFIG")]
    pub config: Option<PathBuf>,

    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "ZRES_THREADS")]
    pub threads: Option<usize>,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, env = "ZRES_OUT")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, env = "ZRES_FORMAT")]
    pub format: Option<Format>,

    /// Indent JSON output.
    #[arg(long, global = true, env = "ZRES_PRETTY")]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sieve the primes up to a limit.
    Primes(PrimesArgs),
    /// Evaluate ζ, a truncated Euler product, or a joint product over harmonic points.
    Zeta(ZetaArgs),
    /// Build a resonator and report its coefficients.
    Resonator(ResonatorArgs),
    /// Weighted moment integrals of |R(t)|² against the Gaussian kernel.
    Moments(MomentsArgs),
    /// c(σ), S(σ, ℓ) and the admissible κ range.
    Constants(ConstantsArgs),
    /// Evaluate a lower-bound formula without its error terms.
    Bound(BoundArgs),
    /// Search [T^β, T] for large joint values.
    Search(SearchArgs),
    /// Run the self-check suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct PrimesArgs {
    #[arg(long, env = "ZRES_LIMIT")]
    pub limit: Option<u64>,
    /// Report only the count.
    #[arg(long = "count-only", env = "ZRES_COUNT_ONLY")]
    pub count_only: bool,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[arg(long, env = "ZRES_SIGMA", allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Imaginary part of s.
    #[arg(long = "t", env = "ZRES_ZETA_T", allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Use the Euler product over p ≤ Y instead of the full function.
    #[arg(long, env = "ZRES_TRUNC")]
    pub trunc: Option<f64>,
    /// Multiply over σ + ijt for j = 1..ℓ.
    #[arg(long, env = "ZRES_ELL")]
    pub ell: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Line,
    Strip,
}

#[derive(Debug, Args)]
pub struct ResonatorArgs {
    #[arg(long, value_enum, env = "ZRES_MODE")]
    pub mode: Option<ModeArg>,
    #[arg(long = "X", env = "ZRES_X")]
    pub x: Option<f64>,
    /// Strip mode only.
    #[arg(long, env = "ZRES_SIGMA")]
    pub sigma: Option<f64>,
    /// Write prime,r rows to this CSV file.
    #[arg(long, env = "ZRES_DUMP")]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    One,
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Quad,
    Sum,
    Diagonal,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long = "X", env = "ZRES_X")]
    pub x: Option<f64>,
    #[arg(long = "T", env = "ZRES_T")]
    pub t_height: Option<f64>,
    #[arg(long, value_enum, env = "ZRES_OBJECTIVE")]
    pub objective: Option<ObjectiveArg>,
    #[arg(long, env = "ZRES_ELL")]
    pub ell: Option<usize>,
    #[arg(long, value_enum, env = "ZRES_METHOD")]
    pub method: Option<MethodArg>,
    #[arg(long, value_enum, env = "ZRES_MODE")]
    pub mode: Option<ModeArg>,
    /// Strip mode only.
    #[arg(long, env = "ZRES_SIGMA")]
    pub sigma: Option<f64>,
    /// Restrict the integral to [window-lo, window-hi].
    #[arg(long = "window-lo", env = "ZRES_WINDOW_LO", allow_negative_numbers = true)]
    pub window_lo: Option<f64>,
    #[arg(long = "window-hi", env = "ZRES_WINDOW_HI", allow_negative_numbers = true)]
    pub window_hi: Option<f64>,
    /// Trapezoid step; defaults to the largest admissible one.
    #[arg(long, env = "ZRES_STEP")]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, env = "ZRES_SIGMA")]
    pub sigma: Option<f64>,
    #[arg(long, env = "ZRES_ELL")]
    pub ell: Option<usize>,
    #[arg(long, env = "ZRES_BETA")]
    pub beta: Option<f64>,
    /// Use the conditional κ range in the reported binding.
    #[arg(long, env = "ZRES_RH")]
    pub rh: bool,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, env = "ZRES_THM")]
    pub thm: Option<u8>,
    #[arg(long = "T", env = "ZRES_T")]
    pub t_height: Option<f64>,
    #[arg(long, env = "ZRES_ELL")]
    pub ell: Option<usize>,
    #[arg(long, env = "ZRES_SIGMA")]
    pub sigma: Option<f64>,
    #[arg(long, env = "ZRES_BETA")]
    pub beta: Option<f64>,
    /// Defaults to 0.9 of the admissible maximum.
    #[arg(long, env = "ZRES_KAPPA")]
    pub kappa: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long = "T", env = "ZRES_T")]
    pub t_height: Option<f64>,
    #[arg(long, env = "ZRES_BETA")]
    pub beta: Option<f64>,
    #[arg(long, env = "ZRES_SIGMA")]
    pub sigma: Option<f64>,
    #[arg(long, env = "ZRES_ELL")]
    pub ell: Option<usize>,
    /// Guidance cutoff; 0 scans the joint product directly.
    #[arg(long = "X", env = "ZRES_X")]
    pub x: Option<f64>,
    #[arg(long, env = "ZRES_STEP")]
    pub step: Option<f64>,
    #[arg(long, env = "ZRES_TOP")]
    pub top: Option<usize>,
    #[arg(long, env = "ZRES_TOL")]
    pub tol: Option<f64>,
    #[arg(long, env = "ZRES_SEED")]
    pub seed: Option<u64>,
    /// Write every grid point as t,guidance_score,joint_product.
    #[arg(long = "scan-csv", env = "ZRES_SCAN_CSV")]
    pub scan_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Oracles,
    Identities,
    Trends,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, env = "ZRES_SUITE")]
    pub suite: Option<SuiteArg>,
}
