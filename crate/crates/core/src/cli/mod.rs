//! Command-line front end. Every command writes its artifacts and a
//! `manifest.json` into one output directory.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::claw::{Boundary, Problem};
use crate::eno_core::GhostPolicy;
use crate::eno_sr::DEFAULT_GUARD;
use crate::error::{Error, Result};
use crate::functions::NamedFunction;
use crate::study::Method;

pub use output::{fmt_f64, RunManifest, MANIFEST_NAME};

#[derive(Debug, Parser)]
#[command(name = "enonet", version, about = "ENO interpolation, ReLU network equivalents, compression and Euler runs")]
pub struct Cli {
    /// Seed of the ChaCha8 sampler.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "ENONET_THREADS")]
    pub threads: Option<usize>,
    /// Artifact directory (default: enonet-out/<command>).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Refine sampled data level by level and report errors.
    Interpolate(InterpolateArgs),
    /// Convergence of one refinement step under grid refinement.
    OrderStudy(OrderStudyArgs),
    /// Multiresolution compression of 1D/2D data or a PGM image.
    Compress(CompressArgs),
    /// Euler shock-tube runs.
    Solve(SolveArgs),
    /// Agreement between a network and its reference algorithm.
    VerifyNet(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Interpolate(_) => "interpolate",
            Command::OrderStudy(_) => "order-study",
            Command::Compress(_) => "compress",
            Command::Solve(_) => "solve",
            Command::VerifyNet(_) => "verify-net",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GhostArg {
    Constant,
    Reflect,
    Periodic,
}

impl From<GhostArg> for GhostPolicy {
    fn from(g: GhostArg) -> Self {
        match g {
            GhostArg::Constant => GhostPolicy::ConstantExtrapolate,
            GhostArg::Reflect => GhostPolicy::Reflect,
            GhostArg::Periodic => GhostPolicy::Periodic,
        }
    }
}

fn parse_function(s: &str) -> std::result::Result<NamedFunction, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_problem(s: &str) -> std::result::Result<Problem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct InterpolateArgs {
    /// Built-in function: q62, f1, f2 (alias sin) or sine.
    #[arg(long, value_parser = parse_function, conflicts_with = "input")]
    pub function: Option<NamedFunction>,
    /// CSV of node values (last column), refined `levels` times.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// Coarsest cell count for built-in functions.
    #[arg(long = "N0", default_value_t = 16)]
    pub n0: usize,
    /// eno, enosr, net, trained or srnet.
    #[arg(long, value_parser = parse_method, default_value = "eno")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "constant")]
    pub ghost: GhostArg,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct OrderStudyArgs {
    #[arg(long, value_parser = parse_method, default_value = "eno")]
    pub method: Method,
    #[arg(long, value_parser = parse_function, default_value = "f1")]
    pub function: NamedFunction,
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    #[arg(long, default_value_t = 5)]
    pub levels: usize,
    #[arg(long = "N0", default_value_t = 16)]
    pub n0: usize,
    #[arg(long, value_enum, default_value = "constant")]
    pub ghost: GhostArg,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum CompressMode {
    #[value(name = "1d")]
    #[serde(rename = "1d")]
    OneD,
    #[value(name = "2d")]
    #[serde(rename = "2d")]
    TwoD,
    Image,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CompressArgs {
    #[arg(value_enum)]
    pub mode: CompressMode,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    /// Levels (default 5, 4 in 2d).
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Coarsest cells per direction (default 9 in 1d, 16 in 2d).
    #[arg(long = "N0")]
    pub n0: Option<usize>,
    /// 1d: q62, f1, f2 or sine (default q62). 2d always uses q64.
    #[arg(long, value_parser = parse_function)]
    pub function: Option<NamedFunction>,
    /// Input PGM (image mode; default: a built-in synthetic scene).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Decoded PGM (image mode; default: <out-dir>/decoded.pgm).
    #[arg(long = "out")]
    pub output: Option<PathBuf>,
    /// Image intensities are mapped to [0, peak].
    #[arg(long, default_value_t = 1.0)]
    pub peak: f64,
    #[arg(long, value_enum, default_value = "constant")]
    pub ghost: GhostArg,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryArg {
    Outflow,
    Periodic,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Outflow => Boundary::Outflow,
            BoundaryArg::Periodic => Boundary::Periodic,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SolveArgs {
    /// sod or shock-entropy.
    #[arg(long, value_parser = parse_problem)]
    pub problem: Problem,
    /// Cells (default 50 for sod, 200 for shock-entropy).
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub cfl: f64,
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    /// Final time (default 2 for sod, 1.8 for shock-entropy).
    #[arg(long)]
    pub tf: Option<f64>,
    /// Also run ENO-4 on 10x the cells and report L1 distances.
    #[arg(long)]
    pub reference: bool,
    #[arg(long, value_enum, default_value = "outflow")]
    pub boundary: BoundaryArg,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// interp3, interp4, interpN, rec2, rec3, sr-class, sr-reg, trained3 or trained4.
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Order of the interpN target.
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: f64,
    /// Smoothing width of the sr-reg network.
    #[arg(long, default_value_t = 1e-2)]
    pub eps: f64,
}

/// How a command ended, short of an error.
#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Ok,
    /// A verification target fell below its threshold.
    VerificationFailed,
    /// A run stopped on an invalid state; the snapshot path is included.
    Aborted(PathBuf),
}

impl Status {
    pub fn exit_code(&self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::Aborted(_) => 3,
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub out_dir: PathBuf,
    pub outputs: Vec<PathBuf>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&args).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let shown: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    execute(cli, shown)
}

/// Runs an already parsed command line.
pub fn execute(cli: Cli, args: Vec<String>) -> Result<Outcome> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidArgument("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let dir = cli
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("enonet-out").join(cli.command.name()));
    std::fs::create_dir_all(&dir)?;
    let ctx = commands::Ctx {
        dir: dir.clone(),
        seed: cli.seed,
    };
    let (status, outputs) = pool.install(|| match &cli.command {
        Command::Interpolate(a) => commands::interpolate(&ctx, a),
        Command::OrderStudy(a) => commands::order_study(&ctx, a),
        Command::Compress(a) => commands::compress(&ctx, a),
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::VerifyNet(a) => commands::verify_net(&ctx, a),
    })?;
    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        args,
        flags: serde_json::to_value(&cli.command)?,
        seed: cli.seed,
        prng: "ChaCha8 (rand_chacha), one stream per 16384-sample chunk",
        threads: cli.threads,
        versions: output::versions(),
        outputs: outputs
            .iter()
            .map(|p| p.file_name().map_or_else(|| p.display().to_string(), |f| f.to_string_lossy().into_owned()))
            .collect(),
    };
    manifest.write(&dir)?;
    Ok(Outcome {
        status,
        out_dir: dir,
        outputs,
    })
}

/// Entry point of the `enonet` binary.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let args = std::env::args().skip(1).collect();
    match execute(cli, args) {
        Ok(o) => {
            if let Status::Aborted(p) = &o.status {
                eprintln!("run aborted; diagnostic snapshot written to {}", p.display());
            }
            ExitCode::from(o.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
