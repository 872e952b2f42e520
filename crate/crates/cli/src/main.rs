//! Command-line front end: simplify, verify, generate and bench.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use limits_core::{
    codec, io as tio, sync_distance, sync_distance_detailed, Metric, TaggedTrajectory, Tolerance,
    Trajectory,
};

mod bench;

#[derive(Parser)]
#[command(name = "limits", version, about = "Error-bounded trajectory simplification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simplify trajectories under a synchronized error bound
    Simplify(SimplifyArgs),
    /// Check a simplification against the bound it claims
    Verify(VerifyArgs),
    /// Generate a seeded random-walk trajectory
    Generate(GenerateArgs),
    /// Sweep algorithms and tolerances, writing a CSV report
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Rdp,
    Opw,
    Opt,
    Di,
    Mci,
    Vi,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Rdp => "rdp",
            Algo::Opw => "opw",
            Algo::Opt => "opt",
            Algo::Di => "di",
            Algo::Mci => "mci",
            Algo::Vi => "vi",
        }
    }
}

pub enum Output {
    Plain(Trajectory),
    Tagged(TaggedTrajectory),
}

impl Output {
    pub fn plain(&self) -> limits_core::Result<Trajectory> {
        match self {
            Output::Plain(t) => Ok(t.clone()),
            Output::Tagged(t) => t.to_trajectory(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Output::Plain(t) => t.len(),
            Output::Tagged(t) => t.len(),
        }
    }
}

pub fn run_algo(
    algo: Algo,
    traj: &Trajectory,
    epsilon: f64,
    rate: u32,
) -> limits_core::Result<Output> {
    Ok(match algo {
        Algo::Rdp => Output::Plain(limits_core::rdp(traj, epsilon, Metric::Linf)?),
        Algo::Opw => Output::Plain(limits_core::opw(traj, epsilon)?),
        Algo::Opt => Output::Plain(limits_core::opt(traj, epsilon)?),
        Algo::Di => Output::Plain(limits_core::di(traj, epsilon)?),
        Algo::Mci => Output::Tagged(limits_core::mci_tagged(traj, epsilon)?),
        Algo::Vi => Output::Tagged(limits_core::vi_tagged(traj, epsilon, rate)?),
    })
}

/// Load trajectories from CSV, a GPS .plt log, or a compact .limt stream.
pub fn read_input(path: &Path, dims: Option<usize>, sanitize: bool) -> Result<Vec<Trajectory>> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let named = || format!("reading {}", path.display());
    match ext {
        "plt" => {
            let text = fs::read_to_string(path).with_context(named)?;
            let (traj, dropped) = tio::parse_plt(&text).with_context(named)?;
            if dropped > 0 {
                eprintln!("note: {}: dropped {dropped} stalled rows", path.display());
            }
            Ok(vec![traj])
        }
        "limt" => {
            let bytes = fs::read(path).with_context(named)?;
            let tagged = codec::decode_all(&bytes).with_context(named)?;
            tagged
                .iter()
                .map(|t| t.to_trajectory().with_context(named))
                .collect()
        }
        _ => {
            let text = fs::read_to_string(path).with_context(named)?;
            let (trajs, dropped) = tio::parse_csv(&text, dims, sanitize).with_context(named)?;
            if dropped > 0 {
                eprintln!("note: {}: dropped {dropped} stalled rows", path.display());
            }
            Ok(trajs)
        }
    }
}

#[derive(Args)]
struct SimplifyArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    /// Synchronized error bound, in the data's coordinate units
    #[arg(long)]
    epsilon: f64,
    /// Value quantization rate (vi only)
    #[arg(long, default_value_t = 10)]
    rate: u32,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Expected coordinate count per CSV row
    #[arg(long)]
    dims: Option<usize>,
    /// Drop rows whose timestamp does not advance instead of failing
    #[arg(long)]
    sanitize: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Compact,
}

fn run_simplify(a: SimplifyArgs) -> Result<()> {
    let trajs = read_input(&a.input, a.dims, a.sanitize)?;
    let mut plains = Vec::new();
    let mut blob = Vec::new();
    for (i, t) in trajs.iter().enumerate() {
        let out = run_algo(a.algo, t, a.epsilon, a.rate)
            .with_context(|| format!("simplifying trajectory {i}"))?;
        let plain = out.plain()?;
        let sync = sync_distance(t, &plain, Metric::Linf)?;
        let mut line = format!(
            "traj={i} algo={} eps={} in={} out={} sync={:.9e}",
            a.algo.name(),
            a.epsilon,
            t.len(),
            plain.len(),
            sync
        );
        if a.algo == Algo::Vi {
            line.push_str(&format!(" rate={}", a.rate));
        }
        println!("{line}");
        if a.format == Format::Compact {
            match &out {
                Output::Tagged(tt) => blob.extend(codec::encode(tt)?),
                Output::Plain(p) => blob.extend(
                    codec::encode_trajectory(p)
                        .with_context(|| format!("trajectory {i} is not in prefix form"))?,
                ),
            }
        }
        plains.push(plain);
    }
    match a.format {
        Format::Csv => fs::write(&a.output, tio::emit_csv(&plains))
            .with_context(|| format!("writing {}", a.output.display()))?,
        Format::Compact => fs::write(&a.output, &blob)
            .with_context(|| format!("writing {}", a.output.display()))?,
    }
    Ok(())
}

#[derive(Args)]
struct VerifyArgs {
    /// Bound the simplification claims to satisfy
    #[arg(long)]
    epsilon: f64,
    /// Original trajectories
    #[arg(long)]
    input: PathBuf,
    /// Simplified trajectories to check, paired up in file order
    #[arg(long)]
    against: PathBuf,
}

fn run_verify(a: VerifyArgs) -> u8 {
    let loaded = read_input(&a.input, None, false)
        .and_then(|s| read_input(&a.against, None, false).map(|t| (s, t)));
    let (inputs, against) = match loaded {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    if inputs.len() != against.len() {
        eprintln!(
            "error: {} trajectories in input, {} in against",
            inputs.len(),
            against.len()
        );
        return 2;
    }
    let mut code = 0;
    for (i, (s, t)) in inputs.iter().zip(&against).enumerate() {
        let tol = Tolerance::for_trajectory(s, a.epsilon);
        let bound = a.epsilon + tol.eta;
        let (sync, at) = match sync_distance_detailed(s, t, Metric::Linf) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: trajectory {i}: {e}");
                return 2;
            }
        };
        if sync <= bound {
            println!("VERIFY_OK traj={i} sync={sync:.9e} bound={bound:.9e}");
        } else {
            println!("VERIFY_FAIL traj={i} sync={sync:.9e} bound={bound:.9e} at_t={at}");
            code = 1;
        }
    }
    code
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = clap::value_parser!(usize))]
    dims: usize,
    #[arg(long)]
    count: usize,
    /// Time step between samples
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn run_generate(a: GenerateArgs) -> Result<()> {
    if a.dims == 0 || a.dims > 3 {
        bail!("--dims must be between 1 and 3 for CSV output");
    }
    if !(a.dt.is_finite() && a.dt > 0.0) {
        bail!("--dt must be positive");
    }
    let t = tio::gen_wiener(a.dims, a.count, a.dt, a.seed);
    fs::write(&a.out, tio::emit_csv(std::slice::from_ref(&t)))
        .with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "generated dims={} count={} dt={} seed={} -> {}",
        a.dims,
        a.count,
        a.dt,
        a.seed,
        a.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Simplify(a) => run_simplify(a).map(|()| 0),
        Cmd::Verify(a) => Ok(run_verify(a)),
        Cmd::Generate(a) => run_generate(a).map(|()| 0),
        Cmd::Bench(a) => bench::run(a).map(|()| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
