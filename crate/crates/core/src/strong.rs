//! Strong simplification: the output is a subsequence of the input samples,
//! and the time-synchronized distance to the input stays within the bound.
//!
//! Three classics are provided. `rdp` recursively splits at the worst
//! deviation, `opw` grows a window greedily in one pass, and `opt` finds a
//! subsequence of provably minimum size.

use crate::error::Result;
use crate::trajectory::{check_epsilon, lerp, Metric, Tolerance, Trajectory};

fn select(traj: &Trajectory, idx: &[usize]) -> Trajectory {
    let times: Vec<f64> = idx.iter().map(|&i| traj.time(i)).collect();
    let coords: Vec<f64> = idx
        .iter()
        .flat_map(|&i| traj.point(i).iter().copied())
        .collect();
    Trajectory::new(traj.dims(), times, coords).expect("subsequence of a valid trajectory")
}

/// Deviation of sample `k` from the chord spanning samples `a..=b`, taken at
/// the sample's own timestamp.
fn chord_deviation(traj: &Trajectory, a: usize, b: usize, k: usize, metric: Metric) -> f64 {
    let (ta, tb, tk) = (traj.time(a), traj.time(b), traj.time(k));
    let diff: Vec<f64> = (0..traj.dims())
        .map(|d| traj.coord(k, d) - lerp(ta, traj.coord(a, d), tb, traj.coord(b, d), tk))
        .collect();
    metric.norm(&diff)
}

/// Ramer-Douglas-Peucker with time-synchronized deviations.
pub fn rdp_indices(traj: &Trajectory, epsilon: f64, metric: Metric) -> Result<Vec<usize>> {
    check_epsilon(epsilon)?;
    let n = traj.len();
    if n <= 2 {
        return Ok((0..n).collect());
    }
    let tol = Tolerance::for_trajectory(traj, epsilon);
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    let mut stack = vec![(0usize, n - 1)];
    while let Some((a, b)) = stack.pop() {
        if b - a < 2 {
            continue;
        }
        let mut worst = (a, 0.0f64);
        for k in a + 1..b {
            let dev = chord_deviation(traj, a, b, k, metric);
            if dev > worst.1 {
                worst = (k, dev);
            }
        }
        if worst.1 > epsilon + tol.eta {
            keep[worst.0] = true;
            stack.push((a, worst.0));
            stack.push((worst.0, b));
        }
    }
    Ok((0..n).filter(|&i| keep[i]).collect())
}

pub fn rdp(traj: &Trajectory, epsilon: f64, metric: Metric) -> Result<Trajectory> {
    rdp_indices(traj, epsilon, metric).map(|idx| select(traj, &idx))
}

/// Per-dimension slope windows shared by the window-based simplifiers. A
/// chord leaving an anchor stays within the bound at every spanned sample
/// exactly when its slope lies inside all these windows.
struct SlopeWindows {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl SlopeWindows {
    fn new(dims: usize) -> Self {
        SlopeWindows {
            lo: vec![f64::NEG_INFINITY; dims],
            hi: vec![f64::INFINITY; dims],
        }
    }

    fn reset(&mut self) {
        self.lo.fill(f64::NEG_INFINITY);
        self.hi.fill(f64::INFINITY);
    }

    /// Narrow by the sector of sample `k` seen from anchor `a`.
    fn shrink(&mut self, traj: &Trajectory, a: usize, k: usize, reach: f64) {
        let dt = traj.time(k) - traj.time(a);
        for d in 0..traj.dims() {
            let base = traj.coord(k, d) - traj.coord(a, d);
            self.lo[d] = self.lo[d].max((base - reach) / dt);
            self.hi[d] = self.hi[d].min((base + reach) / dt);
        }
    }

    fn contains(&self, traj: &Trajectory, a: usize, j: usize) -> bool {
        let dt = traj.time(j) - traj.time(a);
        (0..traj.dims()).all(|d| {
            let s = (traj.coord(j, d) - traj.coord(a, d)) / dt;
            self.lo[d] <= s && s <= self.hi[d]
        })
    }

    fn is_empty(&self) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .any(|(lo, hi)| lo > hi)
    }
}

/// One-pass opening-window simplifier. The candidate chord from the anchor
/// to the newest sample is tested against the windows accumulated so far;
/// on failure the previous sample becomes a vertex and a fresh window opens.
pub fn opw_indices(traj: &Trajectory, epsilon: f64) -> Result<Vec<usize>> {
    check_epsilon(epsilon)?;
    let n = traj.len();
    if n <= 2 {
        return Ok((0..n).collect());
    }
    let tol = Tolerance::for_trajectory(traj, epsilon);
    let reach = epsilon + tol.eta;
    let mut out = vec![0usize];
    let mut anchor = 0usize;
    let mut w = SlopeWindows::new(traj.dims());
    for j in 1..n {
        if !w.contains(traj, anchor, j) {
            out.push(j - 1);
            anchor = j - 1;
            w.reset();
        }
        w.shrink(traj, anchor, j, reach);
    }
    out.push(n - 1);
    Ok(out)
}

pub fn opw(traj: &Trajectory, epsilon: f64) -> Result<Trajectory> {
    opw_indices(traj, epsilon).map(|idx| select(traj, &idx))
}

/// Sweep forward from `anchor`, relaxing best-known link counts. `dist` and
/// `from` are updated for every sample the anchor can reach with one chord.
fn relax_forward(
    traj: &Trajectory,
    anchor: usize,
    reach: f64,
    dist: &mut [usize],
    from: &mut [usize],
) {
    let n = traj.len();
    let mut w = SlopeWindows::new(traj.dims());
    for j in anchor + 1..n {
        if w.contains(traj, anchor, j) && dist[anchor] + 1 < dist[j] {
            dist[j] = dist[anchor] + 1;
            from[j] = anchor;
        }
        w.shrink(traj, anchor, j, reach);
        if w.is_empty() {
            break;
        }
    }
}

fn reversed(traj: &Trajectory) -> Trajectory {
    let n = traj.len();
    let times: Vec<f64> = (0..n).rev().map(|i| -traj.time(i)).collect();
    let coords: Vec<f64> = (0..n)
        .rev()
        .flat_map(|i| traj.point(i).iter().copied())
        .collect();
    Trajectory::new(traj.dims(), times, coords).expect("reversal preserves validity")
}

fn link_distances(traj: &Trajectory, reach: f64) -> (Vec<usize>, Vec<usize>) {
    let n = traj.len();
    let mut dist = vec![usize::MAX; n];
    let mut from = vec![usize::MAX; n];
    dist[0] = 0;
    for i in 0..n - 1 {
        relax_forward(traj, i, reach, &mut dist, &mut from);
    }
    (dist, from)
}

/// Minimum-size subsequence whose chords stay within the bound at every
/// spanned sample. Among all optima the lexicographically smallest index
/// sequence is returned.
pub fn opt_indices(traj: &Trajectory, epsilon: f64) -> Result<Vec<usize>> {
    check_epsilon(epsilon)?;
    let n = traj.len();
    if n <= 2 {
        return Ok((0..n).collect());
    }
    let tol = Tolerance::for_trajectory(traj, epsilon);
    let reach = epsilon + tol.eta;
    let (dist, from) = link_distances(traj, reach);
    let (dist_rev, _) = link_distances(&reversed(traj), reach);
    let dist_r = |j: usize| dist_rev[n - 1 - j];
    let total = dist[n - 1];
    let mut out = vec![0usize];
    let mut cur = 0usize;
    let mut rem = total;
    'walk: while cur < n - 1 {
        let mut w = SlopeWindows::new(traj.dims());
        for j in cur + 1..n {
            if w.contains(traj, cur, j) && dist_r(j) == rem - 1 {
                out.push(j);
                cur = j;
                rem -= 1;
                continue 'walk;
            }
            w.shrink(traj, cur, j, reach);
            if w.is_empty() {
                break;
            }
        }
        // tiny numerical disagreements between the two sweep directions can
        // strand the walk; the forward parent chain is always consistent
        let mut chain = vec![n - 1];
        let mut k = n - 1;
        while from[k] != usize::MAX {
            k = from[k];
            chain.push(k);
        }
        chain.reverse();
        return Ok(chain);
    }
    debug_assert_eq!(rem, 0);
    Ok(out)
}

pub fn opt(traj: &Trajectory, epsilon: f64) -> Result<Trajectory> {
    opt_indices(traj, epsilon).map(|idx| select(traj, &idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::sync_distance;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const EX_T: [f64; 6] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
    const EX_X: [f64; 6] = [0.0, 0.7, 0.2, 2.0, 1.3, 2.0];
    const EX_Y: [f64; 6] = [0.0, 1.5, 1.2, 0.9, 0.6, 0.3];

    fn one_dim(values: &[f64]) -> Trajectory {
        Trajectory::new(1, EX_T.to_vec(), values.to_vec()).unwrap()
    }

    fn random_walk(seed: u64, dims: usize, n: usize) -> Trajectory {
        let mut rng = StdRng::seed_from_u64(seed);
        let times: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let mut coords = Vec::with_capacity(n * dims);
        let mut cur = vec![0.0f64; dims];
        for _ in 0..n {
            for c in cur.iter_mut() {
                *c += rng.gen_range(-1.0..1.0);
            }
            coords.extend_from_slice(&cur);
        }
        Trajectory::new(dims, times, coords).unwrap()
    }

    #[test]
    fn fixtures_match_hand_results() {
        let x = one_dim(&EX_X);
        let y = one_dim(&EX_Y);
        assert_eq!(rdp_indices(&x, 0.5, Metric::Linf).unwrap().len(), 6);
        assert_eq!(rdp_indices(&y, 0.5, Metric::Linf).unwrap(), vec![0, 1, 5]);
        assert_eq!(opw_indices(&x, 0.5).unwrap().len(), 6);
        assert_eq!(opw_indices(&y, 0.5).unwrap(), vec![0, 1, 5]);
        assert_eq!(opt_indices(&x, 0.5).unwrap(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(opt_indices(&y, 0.5).unwrap(), vec![0, 1, 5]);
    }

    #[test]
    fn outputs_respect_the_bound() {
        for seed in 0..20u64 {
            let traj = random_walk(seed, 1 + (seed % 3) as usize, 60);
            let eps = 0.5 + (seed as f64) * 0.1;
            let slack = eps + 1e-6;
            for out in [
                rdp(&traj, eps, Metric::Linf).unwrap(),
                opw(&traj, eps).unwrap(),
                opt(&traj, eps).unwrap(),
            ] {
                let d = sync_distance(&traj, &out, Metric::Linf).unwrap();
                assert!(d <= slack, "distance {d} exceeds bound {eps}");
            }
        }
    }

    #[test]
    fn opt_never_loses_to_the_heuristics() {
        for seed in 30..50u64 {
            let traj = random_walk(seed, 2, 80);
            let eps = 1.0;
            let o = opt_indices(&traj, eps).unwrap().len();
            assert!(o <= opw_indices(&traj, eps).unwrap().len());
            assert!(o <= rdp_indices(&traj, eps, Metric::Linf).unwrap().len());
        }
    }

    #[test]
    fn rdp_honours_other_metrics() {
        let traj = random_walk(7, 3, 50);
        for metric in [Metric::L1, Metric::L2] {
            let out = rdp(&traj, 2.0, metric).unwrap();
            let d = sync_distance(&traj, &out, metric).unwrap();
            assert!(d <= 2.0 + 1e-6);
        }
    }

    #[test]
    fn tiny_inputs_pass_through() {
        let t = Trajectory::new(1, vec![0.0, 1.0], vec![0.0, 100.0]).unwrap();
        assert_eq!(opt(&t, 0.1).unwrap().len(), 2);
        assert_eq!(opw(&t, 0.1).unwrap().len(), 2);
        assert_eq!(rdp(&t, 0.1, Metric::Linf).unwrap().len(), 2);
    }
}
