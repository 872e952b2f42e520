//! Core trajectory model: timestamped points in m-dimensional space with
//! linear interpolation between samples.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Shared linear interpolation. Every place that reconstructs a coordinate
/// between two samples must go through this function so that independently
/// computed values agree bit for bit.
#[inline]
pub(crate) fn lerp(t_a: f64, v_a: f64, t_b: f64, v_b: f64, t: f64) -> f64 {
    v_a + (v_b - v_a) * ((t - t_a) / (t_b - t_a))
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::BadEpsilon(epsilon));
    }
    Ok(())
}

/// Norm used when comparing trajectories.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    L1,
    L2,
    Linf,
}

impl Metric {
    pub fn norm(self, diff: &[f64]) -> f64 {
        match self {
            Metric::L1 => diff.iter().map(|d| d.abs()).sum(),
            Metric::L2 => diff.iter().map(|d| d * d).sum::<f64>().sqrt(),
            Metric::Linf => diff.iter().fold(0.0, |m, d| m.max(d.abs())),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Metric::L1),
            "l2" => Ok(Metric::L2),
            "linf" => Ok(Metric::Linf),
            other => Err(Error::BadMetric(other.to_string())),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::L1 => write!(f, "l1"),
            Metric::L2 => write!(f, "l2"),
            Metric::Linf => write!(f, "linf"),
        }
    }
}

/// A polygonal trajectory: strictly increasing timestamps and one point of
/// `dims` coordinates per timestamp, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    dims: usize,
    times: Vec<f64>,
    coords: Vec<f64>,
}

impl Trajectory {
    pub fn new(dims: usize, times: Vec<f64>, coords: Vec<f64>) -> Result<Self> {
        if dims == 0 {
            return Err(Error::BadDimension { dim: 0, dims });
        }
        if coords.len() != times.len() * dims {
            return Err(Error::BadDimension {
                dim: coords.len(),
                dims,
            });
        }
        for (i, w) in times.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotonicTime(i + 2));
            }
        }
        if times.iter().any(|t| !t.is_finite()) || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::MalformedRow(0));
        }
        Ok(Trajectory { dims, times, coords })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn time(&self, i: usize) -> f64 {
        self.times[i]
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dims..(i + 1) * self.dims]
    }

    pub fn coord(&self, i: usize, dim: usize) -> f64 {
        self.coords[i * self.dims + dim]
    }

    pub fn start_time(&self) -> f64 {
        self.times[0]
    }

    pub fn end_time(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Largest absolute coordinate value; used to scale tolerances.
    pub fn coordinate_scale(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Index of the segment containing `t`, i.e. `i` with
    /// `times[i] <= t <= times[i+1]` (the final point maps to the last
    /// segment).
    fn segment_index(&self, t: f64) -> Result<usize> {
        if self.times.is_empty() || t < self.start_time() || t > self.end_time() {
            return Err(Error::OutOfDomain(t));
        }
        if self.times.len() == 1 {
            return Ok(0);
        }
        let i = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Ok(i.min(self.times.len() - 2))
    }

    /// Position at time `t`, linearly interpolated between samples.
    pub fn interpolate_at(&self, t: f64) -> Result<Vec<f64>> {
        let i = self.segment_index(t)?;
        if self.times.len() == 1 {
            return Ok(self.point(0).to_vec());
        }
        let (ta, tb) = (self.times[i], self.times[i + 1]);
        if t == ta {
            return Ok(self.point(i).to_vec());
        }
        if t == tb {
            return Ok(self.point(i + 1).to_vec());
        }
        let a = self.point(i);
        let b = self.point(i + 1);
        Ok((0..self.dims)
            .map(|d| lerp(ta, a[d], tb, b[d], t))
            .collect())
    }

    /// One-dimensional projection onto coordinate `dim`.
    pub fn project(&self, dim: usize) -> Result<Trajectory> {
        if dim >= self.dims {
            return Err(Error::BadDimension {
                dim,
                dims: self.dims,
            });
        }
        let values = (0..self.len()).map(|i| self.coord(i, dim)).collect();
        Trajectory::new(1, self.times.clone(), values)
    }

    /// Per-dimension values as a column vector.
    pub fn column(&self, dim: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.coord(i, dim)).collect()
    }
}

/// Error bound plus the numerical slack used for feasibility comparisons.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub epsilon: f64,
    pub eta: f64,
}

impl Tolerance {
    /// Slack scaled to the trajectory at hand. A zero bound demands exact
    /// arithmetic, so it gets zero slack.
    pub fn for_trajectory(traj: &Trajectory, epsilon: f64) -> Tolerance {
        let eta = if epsilon == 0.0 {
            0.0
        } else {
            (1e-9 * traj.coordinate_scale().max(1.0)).min(epsilon * 1e-6)
        };
        Tolerance { epsilon, eta }
    }

    pub fn with_eta(epsilon: f64, eta: f64) -> Tolerance {
        Tolerance { epsilon, eta }
    }
}

/// Time-synchronized distance between two trajectories over the same domain:
/// the largest pointwise distance, taken uniformly over time.
///
/// Both inputs are piecewise linear, so on every interval between adjacent
/// breakpoints of either input the pointwise difference is linear per
/// dimension. Each supported norm of a linear function is convex, hence the
/// maximum over the interval sits at one of its ends, and scanning the merged
/// breakpoints is exact rather than an approximation.
pub fn sync_distance(a: &Trajectory, b: &Trajectory, metric: Metric) -> Result<f64> {
    sync_distance_detailed(a, b, metric).map(|(d, _)| d)
}

/// As [`sync_distance`], but also reports a timestamp where the maximum is
/// attained.
pub fn sync_distance_detailed(
    a: &Trajectory,
    b: &Trajectory,
    metric: Metric,
) -> Result<(f64, f64)> {
    if a.dims() != b.dims() || a.is_empty() || b.is_empty() {
        return Err(Error::DomainMismatch);
    }
    if a.start_time() != b.start_time() || a.end_time() != b.end_time() {
        return Err(Error::DomainMismatch);
    }
    let mut best = (f64::NEG_INFINITY, a.start_time());
    let mut diff = vec![0.0; a.dims()];
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let t = match (a.times().get(i), b.times().get(j)) {
            (Some(&ta), Some(&tb)) if ta == tb => {
                i += 1;
                j += 1;
                ta
            }
            (Some(&ta), Some(&tb)) if ta < tb => {
                i += 1;
                ta
            }
            (Some(_), Some(&tb)) => {
                j += 1;
                tb
            }
            (Some(&ta), None) => {
                i += 1;
                ta
            }
            (None, Some(&tb)) => {
                j += 1;
                tb
            }
            (None, None) => break,
        };
        let pa = a.interpolate_at(t)?;
        let pb = b.interpolate_at(t)?;
        for d in 0..a.dims() {
            diff[d] = pa[d] - pb[d];
        }
        let dist = metric.norm(&diff);
        if dist > best.0 {
            best = (dist, t);
        }
    }
    Ok(best)
}

/// Points carrying the stage that introduced their timestamp. The first
/// `intro_dim` coordinates of a point are reconstructible by interpolating
/// between the nearest points whose `intro_dim` does not exceed the
/// coordinate's dimension; only the trailing coordinates carry information.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedPoint {
    pub time: f64,
    pub intro_dim: usize,
    pub coords: Vec<f64>,
}

/// A trajectory in prefix form, as produced by the nested weak simplifiers.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedTrajectory {
    pub dims: usize,
    pub points: Vec<TaggedPoint>,
}

impl TaggedTrajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Drop the tags, yielding a plain trajectory.
    pub fn to_trajectory(&self) -> Result<Trajectory> {
        let times = self.points.iter().map(|p| p.time).collect();
        let coords = self
            .points
            .iter()
            .flat_map(|p| p.coords.iter().copied())
            .collect();
        Trajectory::new(self.dims, times, coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn traj(dims: usize, times: &[f64], coords: &[f64]) -> Trajectory {
        Trajectory::new(dims, times.to_vec(), coords.to_vec()).unwrap()
    }

    fn random_pair(seed: u64, n: usize) -> (Trajectory, Trajectory) {
        let mut rng = StdRng::seed_from_u64(seed);
        let times: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let mk = |rng: &mut StdRng| {
            let coords: Vec<f64> = (0..n * 2).map(|_| rng.gen_range(-5.0..5.0)).collect();
            Trajectory::new(2, times.clone(), coords).unwrap()
        };
        (mk(&mut rng), mk(&mut rng))
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Trajectory::new(2, vec![0.0, 1.0], vec![0.0; 3]).is_err());
        assert!(matches!(
            Trajectory::new(1, vec![0.0, 1.0, 1.0], vec![0.0; 3]),
            Err(Error::NonMonotonicTime(3))
        ));
        assert!(Trajectory::new(0, vec![], vec![]).is_err());
        assert!(Trajectory::new(1, vec![0.0, f64::NAN], vec![0.0; 2]).is_err());
    }

    #[test]
    fn interpolation_hits_samples_and_midpoints() {
        let t = traj(2, &[0.0, 2.0, 3.0], &[0.0, 10.0, 4.0, 6.0, 8.0, 0.0]);
        assert_eq!(t.interpolate_at(0.0).unwrap(), vec![0.0, 10.0]);
        assert_eq!(t.interpolate_at(2.0).unwrap(), vec![4.0, 6.0]);
        assert_eq!(t.interpolate_at(1.0).unwrap(), vec![2.0, 8.0]);
        assert_eq!(t.interpolate_at(2.5).unwrap(), vec![6.0, 3.0]);
        assert!(t.interpolate_at(3.5).is_err());
    }

    #[test]
    fn sync_distance_matches_dense_sampling() {
        for seed in 0..4u64 {
            let (a, b) = random_pair(seed, 40);
            for metric in [Metric::L1, Metric::L2, Metric::Linf] {
                let exact = sync_distance(&a, &b, metric).unwrap();
                let mut dense = 0.0f64;
                // 512 subdivisions per unit step, so the grid contains every
                // sample time of both trajectories exactly
                let steps = (a.len() - 1) * 512;
                let (t0, t1) = (a.start_time(), a.end_time());
                for k in 0..=steps {
                    let t = t0 + (t1 - t0) * k as f64 / steps as f64;
                    let pa = a.interpolate_at(t).unwrap();
                    let pb = b.interpolate_at(t).unwrap();
                    let diff: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x - y).collect();
                    dense = dense.max(metric.norm(&diff));
                }
                assert!(dense <= exact + 1e-9, "sampling exceeded exact maximum");
                assert!(exact - dense <= 1e-9, "exact maximum missed by sampling");
            }
        }
    }

    #[test]
    fn linf_distance_equals_max_over_projections() {
        for seed in 10..16u64 {
            let (a, b) = random_pair(seed, 25);
            let joint = sync_distance(&a, &b, Metric::Linf).unwrap();
            let per_dim = (0..a.dims())
                .map(|d| {
                    sync_distance(&a.project(d).unwrap(), &b.project(d).unwrap(), Metric::Linf)
                        .unwrap()
                })
                .fold(0.0f64, f64::max);
            assert_eq!(joint, per_dim);
        }
    }

    #[test]
    fn norms_nest_as_expected() {
        for seed in 20..30u64 {
            let (a, b) = random_pair(seed, 30);
            let m = a.dims() as f64;
            let d1 = sync_distance(&a, &b, Metric::L1).unwrap();
            let d2 = sync_distance(&a, &b, Metric::L2).unwrap();
            let di = sync_distance(&a, &b, Metric::Linf).unwrap();
            let tol = 1e-12 * d1.max(1.0);
            assert!(di <= d2 + tol && d2 <= d1 + tol);
            assert!(d2 <= m.sqrt() * di + tol);
            assert!(d1 <= m * di + tol);
        }
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("linf".parse::<Metric>().unwrap(), Metric::Linf);
        assert_eq!("L2".parse::<Metric>().unwrap(), Metric::L2);
        assert!("l3".parse::<Metric>().is_err());
    }

    #[test]
    fn tolerance_scales_with_data() {
        let t = traj(1, &[0.0, 1.0], &[0.0, 2000.0]);
        let tol = Tolerance::for_trajectory(&t, 0.5);
        assert!((tol.eta - 2e-6_f64.min(0.5e-6)).abs() < 1e-18);
        let zero = Tolerance::for_trajectory(&t, 0.0);
        assert_eq!(zero.eta, 0.0);
    }
}
