//! Weak simplification: output vertices keep input timestamps but may take
//! any value within the error bound, which usually buys far fewer points
//! than any subsequence can achieve.
//!
//! All three algorithms run the corridor search of [`crate::linkpath`] per
//! dimension under the max norm. `di` treats dimensions independently and
//! unions the resulting vertex times. `mci` and `vi` process dimensions in
//! stages, forcing each stage to bend wherever the previous stage did, so
//! vertex time sets nest across dimensions and the result can be stored in
//! prefix form.

use crate::error::{Error, Result};
use crate::linkpath::{link_path_to_point, min_link_path, min_links_to_points, Source, Tube};
use crate::trajectory::{check_epsilon, lerp, TaggedPoint, TaggedTrajectory, Tolerance, Trajectory};

struct DimPath {
    idx: Vec<usize>,
    val: Vec<f64>,
}

fn full_link_path(traj: &Trajectory, tol: Tolerance, dim: usize) -> Result<DimPath> {
    let col = traj.column(dim);
    let tube = Tube::new(traj.times(), &col, tol)?;
    let res = min_link_path(&tube, 0, traj.len() - 1, Source::Gate)?;
    Ok(DimPath {
        idx: res.path.idx,
        val: res.path.val,
    })
}

fn union_indices(paths: &[DimPath]) -> Vec<usize> {
    let mut all: Vec<usize> = paths.iter().flat_map(|p| p.idx.iter().copied()).collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// Evaluate every per-dimension path at the chosen output gates. A gate a
/// path does not bend at gets the interpolation between its bracketing
/// vertices, through the one shared `lerp`, so a decoder recomputing the
/// value lands on identical bits.
fn fold(traj: &Trajectory, paths: &[DimPath], out_idx: &[usize]) -> (Vec<usize>, Vec<f64>) {
    let m = paths.len();
    let mut ptr = vec![0usize; m];
    let mut intro = Vec::with_capacity(out_idx.len());
    let mut coords = Vec::with_capacity(out_idx.len() * m);
    for &g in out_idx {
        let mut first = m;
        for d in 0..m {
            let p = &paths[d];
            while ptr[d] < p.idx.len() && p.idx[ptr[d]] < g {
                ptr[d] += 1;
            }
            if ptr[d] < p.idx.len() && p.idx[ptr[d]] == g {
                coords.push(p.val[ptr[d]]);
                if first == m {
                    first = d;
                }
            } else {
                let k = ptr[d];
                let (ia, ib) = (p.idx[k - 1], p.idx[k]);
                coords.push(lerp(
                    traj.time(ia),
                    p.val[k - 1],
                    traj.time(ib),
                    p.val[k],
                    traj.time(g),
                ));
            }
        }
        debug_assert!(first < m, "output gate not on any path");
        intro.push(first);
    }
    (intro, coords)
}

fn tagged_output(traj: &Trajectory, paths: &[DimPath], out_idx: &[usize]) -> TaggedTrajectory {
    let (intro, coords) = fold(traj, paths, out_idx);
    let m = paths.len();
    let points = out_idx
        .iter()
        .enumerate()
        .map(|(row, &g)| TaggedPoint {
            time: traj.time(g),
            intro_dim: intro[row],
            coords: coords[row * m..(row + 1) * m].to_vec(),
        })
        .collect();
    TaggedTrajectory {
        dims: m,
        points,
    }
}

fn passthrough_tagged(traj: &Trajectory) -> TaggedTrajectory {
    let points = (0..traj.len())
        .map(|i| TaggedPoint {
            time: traj.time(i),
            intro_dim: 0,
            coords: traj.point(i).to_vec(),
        })
        .collect();
    TaggedTrajectory {
        dims: traj.dims(),
        points,
    }
}

/// Dimension-independent weak simplification. Every dimension is solved on
/// its own and the vertex times are unioned, so the output generally lacks
/// the prefix property.
pub fn di(traj: &Trajectory, epsilon: f64) -> Result<Trajectory> {
    check_epsilon(epsilon)?;
    if traj.len() <= 2 {
        return Ok(traj.clone());
    }
    let tol = Tolerance::for_trajectory(traj, epsilon);
    let paths = (0..traj.dims())
        .map(|d| full_link_path(traj, tol, d))
        .collect::<Result<Vec<_>>>()?;
    let out_idx = union_indices(&paths);
    let (_, coords) = fold(traj, &paths, &out_idx);
    let times = out_idx.iter().map(|&g| traj.time(g)).collect();
    Trajectory::new(traj.dims(), times, coords)
}

/// Stage the dimensions, carrying one value across each boundary: dimension
/// d is solved piecewise between the vertices of dimension d-1, starting
/// every piece from the value the previous piece ended on.
pub fn mci_tagged(traj: &Trajectory, epsilon: f64) -> Result<TaggedTrajectory> {
    check_epsilon(epsilon)?;
    if traj.len() <= 2 {
        return Ok(passthrough_tagged(traj));
    }
    let tol = Tolerance::for_trajectory(traj, epsilon);
    let m = traj.dims();
    let mut paths: Vec<DimPath> = vec![full_link_path(traj, tol, 0)?];
    for d in 1..m {
        let col = traj.column(d);
        let tube = Tube::new(traj.times(), &col, tol)?;
        let bounds = paths[d - 1].idx.clone();
        let mut idx = Vec::new();
        let mut val = Vec::new();
        let mut carried: Option<f64> = None;
        for w in bounds.windows(2) {
            let source = match carried {
                Some(v) => Source::Point(v),
                None => Source::Gate,
            };
            let res = min_link_path(&tube, w[0], w[1], source)?;
            let skip = usize::from(!idx.is_empty());
            idx.extend_from_slice(&res.path.idx[skip..]);
            val.extend_from_slice(&res.path.val[skip..]);
            carried = Some(*res.path.val.last().unwrap());
        }
        paths.push(DimPath { idx, val });
    }
    let out_idx = paths[m - 1].idx.clone();
    Ok(tagged_output(traj, &paths, &out_idx))
}

pub fn mci(traj: &Trajectory, epsilon: f64) -> Result<Trajectory> {
    mci_tagged(traj, epsilon)?.to_trajectory()
}

/// As [`mci_tagged`], but instead of carrying a single value across each
/// boundary, `rate + 1` candidate values per boundary gate enter a shortest
/// path over boundaries, which trades extra corridor searches for smaller
/// outputs.
pub fn vi_tagged(traj: &Trajectory, epsilon: f64, rate: u32) -> Result<TaggedTrajectory> {
    check_epsilon(epsilon)?;
    if rate == 0 {
        return Err(Error::BadRate);
    }
    if traj.len() <= 2 {
        return Ok(passthrough_tagged(traj));
    }
    let tol = Tolerance::for_trajectory(traj, epsilon);
    let m = traj.dims();
    let r = rate as usize;
    let mut paths: Vec<DimPath> = vec![full_link_path(traj, tol, 0)?];
    for d in 1..m {
        let col = traj.column(d);
        let tube = Tube::new(traj.times(), &col, tol)?;
        let bounds = paths[d - 1].idx.clone();
        let k = bounds.len();
        let cand: Vec<Vec<f64>> = bounds
            .iter()
            .map(|&g| {
                (0..=r)
                    .map(|q| col[g] + (2.0 * q as f64 / r as f64 - 1.0) * epsilon)
                    .collect()
            })
            .collect();
        let mut cost = vec![vec![usize::MAX; r + 1]; k];
        let mut choice = vec![vec![usize::MAX; r + 1]; k];
        cost[0].fill(1);
        for j in 1..k {
            let (a, b) = (bounds[j - 1], bounds[j]);
            for p in 0..=r {
                let counts =
                    min_links_to_points(&tube, a, b, Source::Point(cand[j - 1][p]), &cand[j])?;
                for q in 0..=r {
                    let c = cost[j - 1][p] + counts[q];
                    if c < cost[j][q] {
                        cost[j][q] = c;
                        choice[j][q] = p;
                    }
                }
            }
        }
        let mut qstar = 0;
        for q in 1..=r {
            if cost[k - 1][q] < cost[k - 1][qstar] {
                qstar = q;
            }
        }
        let mut chain = vec![0usize; k];
        chain[k - 1] = qstar;
        for j in (1..k).rev() {
            chain[j - 1] = choice[j][chain[j]];
        }
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for j in 1..k {
            let res = link_path_to_point(
                &tube,
                bounds[j - 1],
                bounds[j],
                Source::Point(cand[j - 1][chain[j - 1]]),
                cand[j][chain[j]],
            )?;
            let skip = usize::from(!idx.is_empty());
            idx.extend_from_slice(&res.path.idx[skip..]);
            val.extend_from_slice(&res.path.val[skip..]);
        }
        debug_assert_eq!(idx.len(), cost[k - 1][qstar]);
        paths.push(DimPath { idx, val });
    }
    let out_idx = paths[m - 1].idx.clone();
    Ok(tagged_output(traj, &paths, &out_idx))
}

pub fn vi(traj: &Trajectory, epsilon: f64, rate: u32) -> Result<Trajectory> {
    vi_tagged(traj, epsilon, rate)?.to_trajectory()
}
