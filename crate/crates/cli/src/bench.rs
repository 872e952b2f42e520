//! The bench subcommand: sweep algorithms over tolerances, re-verify every
//! output, and report compression and per-point timing as CSV.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;

use limits_core::{codec, io as tio, rdp_indices, sync_distance, Metric, Tolerance, Trajectory};

use crate::{read_input, run_algo, Algo, Output};

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated algorithms; rdp always runs as the baseline
    #[arg(long, value_delimiter = ',', required = true)]
    algos: Vec<Algo>,
    /// Comma-separated tolerances in coordinate units; default is 8
    /// logarithmic steps over [1e-3, 1] times the coordinate spread
    #[arg(long, value_delimiter = ',')]
    epsilons: Vec<f64>,
    /// Quantization rates benchmarked for vi
    #[arg(long, value_delimiter = ',', default_values_t = [10u32])]
    rates: Vec<u32>,
    /// Trajectory file or directory to scan for .csv/.plt/.limt files
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Synthetic random walks, "dims:count:seeds"
    #[arg(long)]
    gen: Option<String>,
    /// Report destination
    #[arg(long)]
    out: PathBuf,
    /// Trajectory-level parallelism; each algorithm run stays single-threaded
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Skip opt on inputs above this size
    #[arg(long, default_value_t = 20_000)]
    max_points: usize,
    /// Run opt on only a leading fraction of each trajectory
    #[arg(long)]
    sample_fraction: Option<f64>,
}

struct Dataset {
    id: String,
    traj: Trajectory,
}

struct Row {
    dataset: String,
    algo: &'static str,
    epsilon: f64,
    rate: Option<u32>,
    in_pts: f64,
    out_pts: f64,
    ratio: f64,
    rel: f64,
    normal_bits: f64,
    compact_bits: Option<f64>,
    ns_per_pt: f64,
}

fn collect_files(root: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let mut entries: Vec<_> = fs::read_dir(root)
        .with_context(|| format!("listing {}", root.display()))?
        .collect::<std::io::Result<Vec<_>>>()?;
    entries.sort_by_key(|e| e.path());
    for e in entries {
        let p = e.path();
        if p.is_dir() {
            collect_files(&p, out)?;
        } else if matches!(
            p.extension().and_then(|x| x.to_str()),
            Some("csv" | "plt" | "limt")
        ) {
            out.push(p);
        }
    }
    Ok(())
}

fn load_datasets(args: &BenchArgs) -> Result<Vec<Dataset>> {
    if let Some(spec) = &args.gen {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            bail!("--gen expects dims:count:seeds");
        }
        let dims: usize = parts[0].parse().context("--gen dims")?;
        let count: usize = parts[1].parse().context("--gen count")?;
        let seeds: u64 = parts[2].parse().context("--gen seeds")?;
        if dims == 0 || dims > 3 || count < 2 || seeds == 0 {
            bail!("--gen expects dims in 1..=3, count >= 2, seeds >= 1");
        }
        Ok((0..seeds)
            .map(|s| Dataset {
                id: format!("wiener{dims}d-n{count}-s{s}"),
                traj: tio::gen_wiener(dims, count, 1.0, s),
            })
            .collect())
    } else if let Some(path) = &args.input {
        let mut files = Vec::new();
        if path.is_dir() {
            collect_files(path, &mut files)?;
        } else {
            files.push(path.clone());
        }
        if files.is_empty() {
            bail!("no trajectory files under {}", path.display());
        }
        let mut out = Vec::new();
        for f in &files {
            let trajs = read_input(f, None, true)?;
            let stem = f
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("data")
                .to_string();
            let many = trajs.len() > 1;
            for (k, t) in trajs.into_iter().enumerate() {
                if t.len() < 2 {
                    continue;
                }
                let id = if many {
                    format!("{stem}#{k}")
                } else {
                    stem.clone()
                };
                out.push(Dataset { id, traj: t });
            }
        }
        if out.is_empty() {
            bail!("no usable trajectories");
        }
        Ok(out)
    } else {
        bail!("one of --input or --gen is required");
    }
}

fn coordinate_spread(t: &Trajectory) -> f64 {
    (0..t.dims())
        .map(|d| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..t.len() {
                lo = lo.min(t.coord(i, d));
                hi = hi.max(t.coord(i, d));
            }
            hi - lo
        })
        .fold(0.0, f64::max)
}

fn prefix_of(t: &Trajectory, k: usize) -> Result<Trajectory> {
    let times = t.times()[..k].to_vec();
    let mut coords = Vec::with_capacity(k * t.dims());
    for i in 0..k {
        coords.extend_from_slice(t.point(i));
    }
    Ok(Trajectory::new(t.dims(), times, coords)?)
}

fn run_task(
    ds: &Dataset,
    eps: f64,
    algo: Algo,
    rate: Option<u32>,
    baseline_full: usize,
    args: &BenchArgs,
) -> Result<Option<Row>> {
    let mut work = &ds.traj;
    let holder;
    let mut baseline = baseline_full;
    if algo == Algo::Opt {
        if let Some(f) = args.sample_fraction {
            if !(f > 0.0 && f <= 1.0) {
                bail!("--sample-fraction must be in (0, 1]");
            }
            let keep = ((ds.traj.len() as f64 * f).ceil() as usize).clamp(2, ds.traj.len());
            if keep < ds.traj.len() {
                holder = prefix_of(&ds.traj, keep)?;
                work = &holder;
                baseline = rdp_indices(work, eps, Metric::Linf)?.len();
            }
        }
        if work.len() > args.max_points {
            eprintln!(
                "note: skipping opt on {} ({} points > cap {})",
                ds.id,
                work.len(),
                args.max_points
            );
            return Ok(None);
        }
    }
    let r = rate.unwrap_or(10);
    let mut samples = Vec::with_capacity(5);
    let mut out = None;
    for rep in 0..6 {
        let start = Instant::now();
        let o = run_algo(algo, work, eps, r)
            .with_context(|| format!("{} eps {eps} on {}", algo.name(), ds.id))?;
        let ns = start.elapsed().as_nanos() as f64;
        if rep > 0 {
            samples.push(ns);
        }
        out = Some(o);
    }
    samples.sort_by(f64::total_cmp);
    let median = samples[2];
    let out = out.expect("six repetitions ran");
    let plain = out.plain()?;
    let tol = Tolerance::for_trajectory(work, eps);
    let sync = sync_distance(work, &plain, Metric::Linf)?;
    if sync > eps + tol.eta {
        bail!(
            "{} broke the bound on {}: sync {} > {}",
            algo.name(),
            ds.id,
            sync,
            eps + tol.eta
        );
    }
    let compact = match &out {
        Output::Tagged(t) => Some(codec::payload_bits(t) as f64),
        Output::Plain(_) => None,
    };
    Ok(Some(Row {
        dataset: ds.id.clone(),
        algo: algo.name(),
        epsilon: eps,
        rate,
        in_pts: work.len() as f64,
        out_pts: plain.len() as f64,
        ratio: work.len() as f64 / plain.len() as f64,
        rel: plain.len() as f64 / baseline as f64,
        normal_bits: codec::normal_bits(plain.len(), plain.dims()) as f64,
        compact_bits: compact,
        ns_per_pt: median / work.len() as f64,
    }))
}

fn num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.4}")
    }
}

pub fn run(args: BenchArgs) -> Result<()> {
    let datasets = load_datasets(&args)?;
    let mut algos = args.algos.clone();
    if !algos.contains(&Algo::Rdp) {
        algos.insert(0, Algo::Rdp);
    }
    let mut seen = Vec::new();
    algos.retain(|a| {
        if seen.contains(a) {
            false
        } else {
            seen.push(*a);
            true
        }
    });
    let epsilons: Vec<f64> = if args.epsilons.is_empty() {
        let s = datasets
            .iter()
            .map(|d| coordinate_spread(&d.traj))
            .fold(0.0, f64::max);
        if !(s > 0.0) {
            bail!("cannot derive a default sweep from constant data; pass --epsilons");
        }
        (0..8)
            .map(|k| s * 10f64.powf(-3.0 + 3.0 * k as f64 / 7.0))
            .collect()
    } else {
        args.epsilons.clone()
    };
    for &e in &epsilons {
        if !(e.is_finite() && e >= 0.0) {
            bail!("bad epsilon {e}");
        }
    }
    if args.threads == 0 {
        bail!("--threads must be at least 1");
    }
    if args.rates.iter().any(|&r| r == 0) {
        bail!("--rates must be positive");
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .context("building thread pool")?;

    let baseline: Vec<Vec<usize>> = pool.install(|| {
        datasets
            .par_iter()
            .map(|ds| {
                epsilons
                    .iter()
                    .map(|&e| rdp_indices(&ds.traj, e, Metric::Linf).map(|v| v.len()))
                    .collect::<limits_core::Result<Vec<_>>>()
            })
            .collect::<limits_core::Result<Vec<_>>>()
    })?;

    struct Task {
        ds: usize,
        ei: usize,
        algo: Algo,
        rate: Option<u32>,
    }
    let mut tasks = Vec::new();
    for ds in 0..datasets.len() {
        for ei in 0..epsilons.len() {
            for &algo in &algos {
                if algo == Algo::Vi {
                    for &r in &args.rates {
                        tasks.push(Task { ds, ei, algo, rate: Some(r) });
                    }
                } else {
                    tasks.push(Task { ds, ei, algo, rate: None });
                }
            }
        }
    }

    let rows: Vec<Option<Row>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                run_task(
                    &datasets[t.ds],
                    epsilons[t.ei],
                    t.algo,
                    t.rate,
                    baseline[t.ds][t.ei],
                    &args,
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut final_rows: Vec<Row> = rows.into_iter().flatten().collect();

    let mut means = Vec::new();
    for &eps in &epsilons {
        for &algo in &algos {
            let rate_keys: Vec<Option<u32>> = if algo == Algo::Vi {
                args.rates.iter().map(|&r| Some(r)).collect()
            } else {
                vec![None]
            };
            for key in rate_keys {
                let group: Vec<&Row> = final_rows
                    .iter()
                    .filter(|r| r.algo == algo.name() && r.epsilon == eps && r.rate == key)
                    .collect();
                if group.is_empty() {
                    continue;
                }
                let n = group.len() as f64;
                let mean = |f: fn(&Row) -> f64| group.iter().map(|r| f(r)).sum::<f64>() / n;
                let compact = if group.iter().all(|r| r.compact_bits.is_some()) {
                    Some(group.iter().filter_map(|r| r.compact_bits).sum::<f64>() / n)
                } else {
                    None
                };
                means.push(Row {
                    dataset: "mean".into(),
                    algo: algo.name(),
                    epsilon: eps,
                    rate: key,
                    in_pts: mean(|r| r.in_pts),
                    out_pts: mean(|r| r.out_pts),
                    ratio: mean(|r| r.ratio),
                    rel: mean(|r| r.rel),
                    normal_bits: mean(|r| r.normal_bits),
                    compact_bits: compact,
                    ns_per_pt: mean(|r| r.ns_per_pt),
                });
            }
        }
    }
    final_rows.extend(means);

    let mut s =
        String::from("dataset,algo,epsilon,rate,in_pts,out_pts,ratio,rel_ratio,normal_bits,compact_bits,ns_per_pt\n");
    for r in &final_rows {
        let rate = r.rate.map(|x| x.to_string()).unwrap_or_default();
        let compact = r.compact_bits.map(num).unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{:.6},{},{},{:.2}\n",
            r.dataset,
            r.algo,
            r.epsilon,
            rate,
            num(r.in_pts),
            num(r.out_pts),
            r.ratio,
            r.rel,
            num(r.normal_bits),
            compact,
            r.ns_per_pt
        ));
    }
    fs::write(&args.out, s).with_context(|| format!("writing {}", args.out.display()))?;
    println!("wrote {} rows to {}", final_rows.len(), args.out.display());
    Ok(())
}
