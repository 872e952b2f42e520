//! Text input and output plus a seeded random-walk generator.
//!
//! The CSV dialect is one sample per line, `time,c1,...,cm`, with `#`
//! comments and blank lines separating trajectories. Floats are printed
//! with the shortest representation that parses back to the same bits, so
//! an emit/parse round trip is lossless.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::trajectory::Trajectory;

/// Mean Earth radius in metres for the flat-projection recipe.
pub const EARTH_RADIUS: f64 = 6_371_000.0;
/// Metres per foot.
pub const FOOT: f64 = 0.3048;

/// Parse the CSV dialect. `dims` fixes the expected coordinate count per
/// row; when `None` the first data row decides. With `sanitize` set, rows
/// whose timestamp does not advance are dropped instead of failing; the
/// second value returned counts dropped rows.
pub fn parse_csv(text: &str, dims: Option<usize>, sanitize: bool) -> Result<(Vec<Trajectory>, usize)> {
    let mut out = Vec::new();
    let mut dropped = 0usize;
    let mut dims = dims;
    let mut times: Vec<f64> = Vec::new();
    let mut coords: Vec<f64> = Vec::new();

    fn flush(
        out: &mut Vec<Trajectory>,
        dims: Option<usize>,
        times: &mut Vec<f64>,
        coords: &mut Vec<f64>,
    ) -> Result<()> {
        if !times.is_empty() {
            let d = dims.expect("rows imply dims");
            out.push(Trajectory::new(
                d,
                std::mem::take(times),
                std::mem::take(coords),
            )?);
        }
        Ok(())
    }

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            if raw.trim().is_empty() {
                flush(&mut out, dims, &mut times, &mut coords)?;
            }
            continue;
        }
        let fields: Vec<&str> = body.split(',').map(str::trim).collect();
        if fields.len() < 2 || fields.len() > 4 {
            return Err(Error::MalformedRow(line));
        }
        let m = fields.len() - 1;
        match dims {
            None => dims = Some(m),
            Some(d) if d != m => return Err(Error::MalformedRow(line)),
            _ => {}
        }
        let mut vals = Vec::with_capacity(fields.len());
        for f in &fields {
            let v: f64 = f.parse().map_err(|_| Error::MalformedRow(line))?;
            if !v.is_finite() {
                return Err(Error::MalformedRow(line));
            }
            vals.push(v);
        }
        if let Some(&prev) = times.last() {
            if !(vals[0] > prev) {
                if sanitize {
                    dropped += 1;
                    continue;
                }
                return Err(Error::NonMonotonicTime(line));
            }
        }
        times.push(vals[0]);
        coords.extend_from_slice(&vals[1..]);
    }
    flush(&mut out, dims, &mut times, &mut coords)?;
    Ok((out, dropped))
}

pub fn emit_csv(trajs: &[Trajectory]) -> String {
    let mut s = String::new();
    for (k, traj) in trajs.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        for i in 0..traj.len() {
            s.push_str(&traj.time(i).to_string());
            for d in 0..traj.dims() {
                s.push(',');
                s.push_str(&traj.coord(i, d).to_string());
            }
            s.push('\n');
        }
    }
    s
}

/// Parse a GPS log in the GeoLife .plt layout: six header lines, then
/// `lat,lon,flag,altitude_ft,days,date,time` records. Coordinates become
/// metres in a local tangent plane anchored at the first fix (equirectangular:
/// x east, y north, z altitude), timestamps become seconds since the first
/// fix. Rows whose timestamp does not advance are dropped and counted.
pub fn parse_plt(text: &str) -> Result<(Trajectory, usize)> {
    let mut times = Vec::new();
    let mut coords = Vec::new();
    let mut origin: Option<(f64, f64, f64)> = None;
    let mut dropped = 0usize;
    for (idx, raw) in text.lines().enumerate().skip(6) {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split(',').map(str::trim).collect();
        if fields.len() < 5 {
            return Err(Error::MalformedRow(line));
        }
        let lat: f64 = fields[0].parse().map_err(|_| Error::MalformedRow(line))?;
        let lon: f64 = fields[1].parse().map_err(|_| Error::MalformedRow(line))?;
        let alt: f64 = fields[3].parse().map_err(|_| Error::MalformedRow(line))?;
        let days: f64 = fields[4].parse().map_err(|_| Error::MalformedRow(line))?;
        if !(lat.is_finite() && lon.is_finite() && alt.is_finite() && days.is_finite()) {
            return Err(Error::MalformedRow(line));
        }
        let (lat0, lon0, days0) = *origin.get_or_insert((lat, lon, days));
        let t = (days - days0) * 86_400.0;
        if let Some(&prev) = times.last() {
            if !(t > prev) {
                dropped += 1;
                continue;
            }
        }
        times.push(t);
        coords.push(EARTH_RADIUS * (lon - lon0).to_radians() * lat0.to_radians().cos());
        coords.push(EARTH_RADIUS * (lat - lat0).to_radians());
        coords.push(alt * FOOT);
    }
    Ok((Trajectory::new(3, times, coords)?, dropped))
}

/// A Wiener process sampled at fixed steps: increments are independent
/// normals with variance `dt`, the walk starts at the origin and the same
/// seed always reproduces the same trajectory.
pub fn gen_wiener(dims: usize, count: usize, dt: f64, seed: u64) -> Trajectory {
    assert!(dims > 0 && dt.is_finite() && dt > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = Normal::new(0.0, dt.sqrt()).expect("finite std dev");
    let times: Vec<f64> = (0..count).map(|i| i as f64 * dt).collect();
    let mut coords = vec![0.0f64; count * dims];
    for i in 1..count {
        for d in 0..dims {
            coords[i * dims + d] = coords[(i - 1) * dims + d] + step.sample(&mut rng);
        }
    }
    Trajectory::new(dims, times, coords).expect("generated data is well formed")
}
