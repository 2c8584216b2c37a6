//! `elliptic-bailey`: run verification campaigns and evaluate single values.
//!
//! Exit codes: 0 all draws passed, 1 a draw failed or errored, 2 invalid
//! configuration or arguments, 3 a quadrature did not converge.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use elliptic_bailey::harness::{BcMode, ComplexArg, Identity, TestFunctionChoice};

mod eval;
mod verify;

const COMPLEX_HELP: &str = "Complex numbers are written a+bi, a-bi, bi or a, without spaces \
(for example 0.3+0.1i, -2e-3i, 0.5). Write values with a leading minus \
as --z=-0.5+0.1i.";

#[derive(Parser)]
#[command(name = "elliptic-bailey", version, about, after_help = COMPLEX_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded verification campaign for one identity.
    Verify(VerifyArgs),
    /// Evaluate a single special function or matrix entry.
    #[command(subcommand)]
    Eval(EvalCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityArg {
    SpecialFunctions,
    BetaIntegral,
    MatrixBailey,
    Inversions,
    Coxeter,
    StarTriangle,
    CauchyDeformation,
    ResidueReduction,
    FiniteDifference,
}

impl From<IdentityArg> for Identity {
    fn from(i: IdentityArg) -> Self {
        match i {
            IdentityArg::SpecialFunctions => Identity::SpecialFunctions,
            IdentityArg::BetaIntegral => Identity::BetaIntegral,
            IdentityArg::MatrixBailey => Identity::MatrixBailey,
            IdentityArg::Inversions => Identity::Inversions,
            IdentityArg::Coxeter => Identity::Coxeter,
            IdentityArg::StarTriangle => Identity::StarTriangle,
            IdentityArg::CauchyDeformation => Identity::CauchyDeformation,
            IdentityArg::ResidueReduction => Identity::ResidueReduction,
            IdentityArg::FiniteDifference => Identity::FiniteDifference,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BcModeArg {
    FromY,
    Free,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestFunctionArg {
    One,
    ZPlusInverse,
}

/// Campaign options. Every flag mirrors a config-file key and overrides it.
#[derive(Args)]
#[command(after_help = COMPLEX_HELP)]
struct VerifyArgs {
    identity: IdentityArg,
    /// TOML campaign config; flags override its values.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Emit one JSON report per line and a trailing summary line.
    #[arg(long)]
    json: bool,
    /// Print every failure in text mode.
    #[arg(short, long)]
    verbose: bool,
    /// Matrix size parameter (sets both n_min and n_max).
    #[arg(long = "N", visible_alias = "n")]
    n: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the identity's default tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum)]
    bc_mode: Option<BcModeArg>,
    #[arg(long, value_enum)]
    test_function: Option<TestFunctionArg>,
    /// Spectator points per star-triangle draw.
    #[arg(long)]
    spectators: Option<usize>,
    /// Record wall time in every report.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    fixed: FixedArgs,
}

/// Parameters to hold fixed instead of sampling them.
#[derive(Args, Default)]
struct FixedArgs {
    #[arg(long)]
    p: Option<ComplexArg>,
    #[arg(long)]
    q: Option<ComplexArg>,
    #[arg(long)]
    a: Option<ComplexArg>,
    #[arg(long)]
    k: Option<ComplexArg>,
    #[arg(long)]
    t_tilde: Option<ComplexArg>,
    #[arg(long)]
    y: Option<ComplexArg>,
    #[arg(long)]
    t: Option<ComplexArg>,
    #[arg(long)]
    s: Option<ComplexArg>,
    #[arg(long)]
    x: Option<ComplexArg>,
    #[arg(long)]
    z: Option<ComplexArg>,
    #[arg(long)]
    z0: Option<ComplexArg>,
}

#[derive(Subcommand)]
#[command(after_help = COMPLEX_HELP)]
enum EvalCommand {
    /// Elliptic gamma function Γ(z; p, q).
    Gamma {
        #[arg(long)]
        z: ComplexArg,
        #[arg(long)]
        p: ComplexArg,
        #[arg(long)]
        q: ComplexArg,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// Short theta function θ(z; p).
    Theta {
        #[arg(long)]
        z: ComplexArg,
        #[arg(long)]
        p: ComplexArg,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// Elliptic Pochhammer symbol θ(z; p; q)_n, or (z; q)∞ when --n is absent.
    Pochhammer {
        #[arg(long)]
        z: ComplexArg,
        #[arg(long)]
        q: ComplexArg,
        #[arg(long)]
        p: Option<ComplexArg>,
        #[arg(long, allow_negative_numbers = true, requires = "p")]
        n: Option<i64>,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// Bailey matrix entry M_Nm(a, k).
    MEntry {
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        a: ComplexArg,
        #[arg(long)]
        k: ComplexArg,
        #[arg(long)]
        p: ComplexArg,
        #[arg(long)]
        q: ComplexArg,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// Diagonal entry D_m(a; b, c).
    DEntry {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        a: ComplexArg,
        #[arg(long)]
        b: ComplexArg,
        #[arg(long)]
        c: ComplexArg,
        #[arg(long)]
        p: ComplexArg,
        #[arg(long)]
        q: ComplexArg,
        #[command(flatten)]
        opts: EvalOpts,
    },
}

#[derive(Args, Clone, Copy)]
struct EvalOpts {
    /// Relative truncation tolerance of the infinite products.
    #[arg(long, default_value_t = 1e-16)]
    tol: f64,
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pass = 0,
    Fail = 1,
    Config = 2,
    NonConvergence = 3,
}

impl From<BcModeArg> for BcMode {
    fn from(m: BcModeArg) -> Self {
        match m {
            BcModeArg::FromY => BcMode::FromY,
            BcModeArg::Free => BcMode::Free,
        }
    }
}

impl From<TestFunctionArg> for TestFunctionChoice {
    fn from(t: TestFunctionArg) -> Self {
        match t {
            TestFunctionArg::One => TestFunctionChoice::One,
            TestFunctionArg::ZPlusInverse => TestFunctionChoice::ZPlusInverse,
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("ELLIPTIC_BAILEY_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("ELLIPTIC_BAILEY_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(Status::Config as u8);
    }
    let status = match cli.command {
        Command::Verify(args) => verify::run(args),
        Command::Eval(cmd) => eval::run(cmd),
    };
    ExitCode::from(status as u8)
}
