//! Command-line surface: global flags and the seven subcommands.
//!
//! Every value flag is optional at parse time so a config file can supply
//! it; the runners enforce which settings are required after the merge.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "steklov-cli",
    version,
    about = "Spectra of multi-parameter biharmonic Steklov eigenvalue problems \
             on the unit disk and unit square",
    after_help = "Exit status: 0 success, 2 failed verdict (incompatible data, \
                  violated bound), 1 error.\nConfig file: flat key=value lines \
                  (keys = long flag names); flags override it. The only \
                  environment variable honored is OUTPUT_DIR, joined to a \
                  relative --out path."
)]
pub struct Cli {
    /// Flat key=value file supplying defaults for any flag below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output destination; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<String>,

    /// Output rendering: csv, json, or both (both needs --out and writes
    /// OUT.csv and OUT.json).
    #[arg(long, global = true)]
    pub format: Option<String>,

    /// Worker-thread budget; results are independent of its value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Seed for randomized interior sample points.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Closed-form spectrum of a family on the unit ball (flat form only).
    BallSpectrum(BallSpectrumArgs),
    /// Galerkin spectrum on the disk or square.
    Solve(SolveArgs),
    /// Eigenvalue branches over a parameter grid, with monotonicity and
    /// Lipschitz verdicts.
    BranchTrace(BranchTraceArgs),
    /// Biharmonic Dirichlet solve on the disk by both Steklov series forms.
    DirichletSolve(DirichletSolveArgs),
    /// Corner compatibility check for square boundary data.
    TraceCheck(TraceCheckArgs),
    /// Eigenvalue-counting asymptotics against the closed-form law.
    WeylCheck(WeylCheckArgs),
    /// Assembled pencil matrices for one basis.
    Assemble(AssembleArgs),
}

impl Cmd {
    pub fn name(&self) -> &'static str {
        match self {
            Cmd::BallSpectrum(_) => "ball-spectrum",
            Cmd::Solve(_) => "solve",
            Cmd::BranchTrace(_) => "branch-trace",
            Cmd::DirichletSolve(_) => "dirichlet-solve",
            Cmd::TraceCheck(_) => "trace-check",
            Cmd::WeylCheck(_) => "weyl-check",
            Cmd::Assemble(_) => "assemble",
        }
    }
}

#[derive(Args)]
pub struct BallSpectrumArgs {
    /// Problem family: bsm, bsl, dbs or nbs.
    #[arg(long)]
    pub problem: Option<String>,
    /// Ambient dimension (2, 3 or 4). Default 2.
    #[arg(long)]
    pub dim: Option<u32>,
    /// Interior-form parameter; closed forms exist at 0 only. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Spectral parameter for bsm/bsl (must be negative for bsm, below 1
    /// for bsl); ignored by dbs/nbs. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
    /// Largest mode index; all branches through it are listed. Default 10.
    #[arg(long)]
    pub lmax: Option<u32>,
    /// Alternatively: the number of leading eigenvalues wanted.
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Problem family: bsm, bsl, dbs or nbs.
    #[arg(long)]
    pub problem: Option<String>,
    /// disk or square. Default disk.
    #[arg(long)]
    pub geometry: Option<String>,
    /// Interior-form parameter in (-1, 1) for the plane. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Spectral parameter for bsm/bsl. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
    /// Disk: largest angular mode. Default 8.
    #[arg(long)]
    pub lmax: Option<u32>,
    /// Disk: radial resolution per mode. Default 3.
    #[arg(long)]
    pub kmax: Option<u32>,
    /// Square: tensor polynomial degree. Default 6.
    #[arg(long)]
    pub degree: Option<u32>,
    /// Number of leading eigenvalues wanted. Default 10.
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Args)]
pub struct BranchTraceArgs {
    /// Problem family: bsm or bsl (dbs/nbs have no parameter to sweep).
    #[arg(long)]
    pub problem: Option<String>,
    /// disk or square. Default disk.
    #[arg(long)]
    pub geometry: Option<String>,
    /// Interior-form parameter. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Parameter grid a:b:steps or a:b:steps:log.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Number of branches traced. Default 5.
    #[arg(long)]
    pub jmax: Option<usize>,
    /// Lipschitz margin: the bound |v(p2)-v(p1)| <= v(p1)(p2-p1)/delta is
    /// checked on grids inside (-inf, -delta]. Default 1.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Permit grids crossing into the deflated parameter region. Default
    /// false.
    #[arg(long)]
    pub allow_deflated: Option<bool>,
}

#[derive(Args)]
pub struct DirichletSolveArgs {
    /// Boundary trace: zero or modes:l,harmonic,value;...
    #[arg(long)]
    pub f: Option<String>,
    /// Boundary normal derivative, same grammar as --f.
    #[arg(long)]
    pub g: Option<String>,
    /// Fixed-trace-weight family parameter. Default -1.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Fixed-normal-weight family parameter. Default -1.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Interior-form parameter. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Evaluation points: r,theta;... or random:N (seeded by --seed);
    /// default is a fixed 100-point interior grid.
    #[arg(long, allow_hyphen_values = true)]
    pub eval: Option<String>,
}

#[derive(Args)]
pub struct TraceCheckArgs {
    /// Must be square (the check lives at the corners). Default square.
    #[arg(long)]
    pub geometry: Option<String>,
    /// Boundary trace: zero, coord:x1 or coord:x2.
    #[arg(long)]
    pub f: Option<String>,
    /// Boundary normal derivative: zero, normal:x1 or normal:x2.
    #[arg(long)]
    pub g: Option<String>,
}

#[derive(Args)]
pub struct WeylCheckArgs {
    /// Problem family: bsm, bsl, dbs or nbs.
    #[arg(long)]
    pub problem: Option<String>,
    /// Ambient dimension (2, 3 or 4). Default 2.
    #[arg(long)]
    pub dim: Option<u32>,
    /// Interior-form parameter; closed forms exist at 0 only. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Spectral parameter for bsm/bsl. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
    /// Number of eigenvalues fitted. Default 10000.
    #[arg(long = "J")]
    pub j: Option<usize>,
    /// Relative tolerance on the fitted exponent. Default 0.005.
    #[arg(long)]
    pub tol_exponent: Option<f64>,
    /// Relative tolerance on the fitted constant. Default 0.02.
    #[arg(long)]
    pub tol_constant: Option<f64>,
}

#[derive(Args)]
pub struct AssembleArgs {
    /// Problem family: bsm, bsl, dbs or nbs.
    #[arg(long)]
    pub problem: Option<String>,
    /// disk or square. Default disk.
    #[arg(long)]
    pub geometry: Option<String>,
    /// Interior-form parameter. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Spectral parameter for bsm/bsl. Default 0.
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
    /// Disk: angular mode of the basis. Default 0.
    #[arg(long)]
    pub mode: Option<u32>,
    /// Disk: radial resolution. Default 3.
    #[arg(long)]
    pub kmax: Option<u32>,
    /// Square: tensor polynomial degree. Default 4.
    #[arg(long)]
    pub degree: Option<u32>,
    /// Coercivity shift; found automatically when absent.
    #[arg(long, allow_negative_numbers = true)]
    pub shift_b: Option<f64>,
}
