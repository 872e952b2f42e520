//! Compact binary storage for trajectories in prefix form.
//!
//! The nested weak simplifiers introduce each output timestamp at one stage,
//! and every coordinate before that stage is recoverable by interpolating
//! between neighbouring points that carry it. The encoder therefore stores
//! only the trailing coordinates of each point, preceded by a short
//! codeword saying how many leading coordinates were dropped.
//!
//! Stream layout (all multi-byte quantities big-endian):
//!
//! ```text
//! magic   4 bytes  "LIMT"
//! version 1 byte   0x01
//! dims    1 byte
//! count   8 bytes  number of points
//! payload           bit-packed, MSB first, zero-padded to a byte
//! ```
//!
//! Per point the payload holds the codeword, the timestamp, and the stored
//! coordinates as raw IEEE-754 bits. A `0` codeword marks a full point; `1`
//! followed by ceil(log2(dims-1)) bits gives the count of dropped leading
//! coordinates minus one. With three dimensions the codewords are 0, 10
//! and 11.

use crate::error::{Error, Result};
use crate::trajectory::{lerp, TaggedPoint, TaggedTrajectory, Trajectory};

pub const MAGIC: [u8; 4] = *b"LIMT";
pub const VERSION: u8 = 0x01;

/// Bits in the branch part of a non-full codeword.
fn branch_bits(dims: usize) -> usize {
    let mut b = 0;
    while (1usize << b) < dims - 1 {
        b += 1;
    }
    b
}

fn codeword_len(dims: usize, intro: usize) -> u64 {
    if intro == 0 {
        1
    } else {
        1 + branch_bits(dims) as u64
    }
}

/// Exact payload size in bits for a tagged trajectory.
pub fn payload_bits(tagged: &TaggedTrajectory) -> u64 {
    let m = tagged.dims;
    tagged
        .points
        .iter()
        .map(|p| codeword_len(m, p.intro_dim) + 64 * (1 + (m - p.intro_dim)) as u64)
        .sum()
}

/// Size in bits of the same point count stored flat.
pub fn normal_bits(points: usize, dims: usize) -> u64 {
    (points as u64) * ((1 + dims) as u64) * 64
}

struct BitWriter {
    bytes: Vec<u8>,
    cur: u8,
    fill: u8,
}

impl BitWriter {
    fn new(header: Vec<u8>) -> Self {
        BitWriter {
            bytes: header,
            cur: 0,
            fill: 0,
        }
    }

    fn push_bit(&mut self, bit: bool) {
        self.cur = (self.cur << 1) | u8::from(bit);
        self.fill += 1;
        if self.fill == 8 {
            self.bytes.push(self.cur);
            self.cur = 0;
            self.fill = 0;
        }
    }

    fn push_bits(&mut self, value: u64, n: usize) {
        for i in (0..n).rev() {
            self.push_bit((value >> i) & 1 == 1);
        }
    }

    fn finish(mut self) -> Vec<u8> {
        if self.fill > 0 {
            self.bytes.push(self.cur << (8 - self.fill));
        }
        self.bytes
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    fn read_bit(&mut self) -> Result<bool> {
        let byte = self.pos / 8;
        if byte >= self.bytes.len() {
            return Err(Error::TruncatedStream);
        }
        let bit = (self.bytes[byte] >> (7 - self.pos % 8)) & 1;
        self.pos += 1;
        Ok(bit == 1)
    }

    fn read_bits(&mut self, n: usize) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..n {
            v = (v << 1) | u64::from(self.read_bit()?);
        }
        Ok(v)
    }

    fn bytes_consumed(&self) -> usize {
        self.pos.div_ceil(8)
    }
}

/// Indices of points carrying dimension `d` under the given tags.
fn carriers(tagged: &TaggedTrajectory, d: usize) -> Vec<usize> {
    (0..tagged.len())
        .filter(|&i| tagged.points[i].intro_dim <= d)
        .collect()
}

fn validate(tagged: &TaggedTrajectory) -> Result<()> {
    let m = tagged.dims;
    if m == 0 {
        return Err(Error::BadDimension { dim: 0, dims: 0 });
    }
    for (i, p) in tagged.points.iter().enumerate() {
        if p.coords.len() != m {
            return Err(Error::BadDimension {
                dim: p.coords.len(),
                dims: m,
            });
        }
        if p.intro_dim >= m {
            return Err(Error::NotPrefixForm);
        }
        if !p.time.is_finite() || p.coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::MalformedRow(i + 1));
        }
        if i > 0 && !(p.time > tagged.points[i - 1].time) {
            return Err(Error::NonMonotonicTime(i + 1));
        }
    }
    if let (Some(first), Some(last)) = (tagged.points.first(), tagged.points.last()) {
        if first.intro_dim != 0 || last.intro_dim != 0 {
            return Err(Error::NotPrefixForm);
        }
    }
    // every dropped coordinate must be recomputable bit for bit
    for d in 0..m {
        let carry = carriers(tagged, d);
        for w in carry.windows(2) {
            let (a, b) = (tagged.points[w[0]].clone(), tagged.points[w[1]].clone());
            for i in w[0] + 1..w[1] {
                let p = &tagged.points[i];
                let expect = lerp(a.time, a.coords[d], b.time, b.coords[d], p.time);
                if expect.to_bits() != p.coords[d].to_bits() {
                    return Err(Error::NotPrefixForm);
                }
            }
        }
    }
    Ok(())
}

/// Serialize a tagged trajectory. Fails if the tags do not describe the
/// coordinates exactly.
pub fn encode(tagged: &TaggedTrajectory) -> Result<Vec<u8>> {
    validate(tagged)?;
    let m = tagged.dims;
    let bb = branch_bits(m);
    let mut header = Vec::with_capacity(14);
    header.extend_from_slice(&MAGIC);
    header.push(VERSION);
    header.push(m as u8);
    header.extend_from_slice(&(tagged.len() as u64).to_be_bytes());
    let mut w = BitWriter::new(header);
    for p in &tagged.points {
        if p.intro_dim == 0 {
            w.push_bit(false);
        } else {
            w.push_bit(true);
            w.push_bits((p.intro_dim - 1) as u64, bb);
        }
        w.push_bits(p.time.to_bits(), 64);
        for d in p.intro_dim..m {
            w.push_bits(p.coords[d].to_bits(), 64);
        }
    }
    Ok(w.finish())
}

/// Decode one trajectory, returning it with the bytes consumed.
pub fn decode_first(bytes: &[u8]) -> Result<(TaggedTrajectory, usize)> {
    if bytes.len() < 14 {
        return Err(Error::TruncatedStream);
    }
    if bytes[0..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes[4] != VERSION {
        return Err(Error::UnsupportedVersion(bytes[4]));
    }
    let m = bytes[5] as usize;
    if m == 0 {
        return Err(Error::BadDimension { dim: 0, dims: 0 });
    }
    let count = u64::from_be_bytes(bytes[6..14].try_into().unwrap()) as usize;
    let bb = branch_bits(m);
    let mut r = BitReader::new(&bytes[14..]);
    let mut points: Vec<TaggedPoint> = Vec::with_capacity(count);
    for i in 0..count {
        let intro = if r.read_bit()? {
            let k = r.read_bits(bb)? as usize + 1;
            if k >= m {
                return Err(Error::NotPrefixForm);
            }
            k
        } else {
            0
        };
        let time = f64::from_bits(r.read_bits(64)?);
        let mut coords = vec![f64::NAN; m];
        for d in intro..m {
            coords[d] = f64::from_bits(r.read_bits(64)?);
        }
        if i > 0 && !(time > points[i - 1].time) {
            return Err(Error::NonMonotonicTime(i + 1));
        }
        points.push(TaggedPoint {
            time,
            intro_dim: intro,
            coords,
        });
    }
    if let (Some(first), Some(last)) = (points.first(), points.last()) {
        if first.intro_dim != 0 || last.intro_dim != 0 {
            return Err(Error::NotPrefixForm);
        }
    }
    let mut tagged = TaggedTrajectory { dims: m, points };
    for d in 0..m {
        let carry = carriers(&tagged, d);
        for w in carry.windows(2) {
            let (ta, va) = (tagged.points[w[0]].time, tagged.points[w[0]].coords[d]);
            let (tb, vb) = (tagged.points[w[1]].time, tagged.points[w[1]].coords[d]);
            for i in w[0] + 1..w[1] {
                let t = tagged.points[i].time;
                tagged.points[i].coords[d] = lerp(ta, va, tb, vb, t);
            }
        }
    }
    Ok((tagged, 14 + r.bytes_consumed()))
}

pub fn decode(bytes: &[u8]) -> Result<TaggedTrajectory> {
    decode_first(bytes).map(|(t, _)| t)
}

/// Decode a concatenation of compact streams.
pub fn decode_all(mut bytes: &[u8]) -> Result<Vec<TaggedTrajectory>> {
    let mut out = Vec::new();
    while !bytes.is_empty() {
        let (t, used) = decode_first(bytes)?;
        out.push(t);
        bytes = &bytes[used..];
    }
    Ok(out)
}

/// Greedy longest stretch of samples whose dimension-`d` values are exactly
/// interpolable between the ends.
fn span_ok(traj: &Trajectory, a: usize, b: usize, d: usize) -> bool {
    let (ta, va) = (traj.time(a), traj.coord(a, d));
    let (tb, vb) = (traj.time(b), traj.coord(b, d));
    (a + 1..b).all(|i| {
        lerp(ta, va, tb, vb, traj.time(i)).to_bits() == traj.coord(i, d).to_bits()
    })
}

fn breakpoints(traj: &Trajectory, d: usize) -> Vec<usize> {
    let n = traj.len();
    let mut out = vec![0usize];
    let mut a = 0;
    while a < n - 1 {
        let mut j = n - 1;
        while j > a + 1 && !span_ok(traj, a, j, d) {
            j -= 1;
        }
        out.push(j);
        a = j;
    }
    out
}

/// Serialize a plain trajectory by re-detecting its prefix structure: the
/// breakpoint set of each dimension must contain the breakpoint set of the
/// dimension before it, otherwise the trajectory cannot be stored in prefix
/// form and `NotPrefixForm` is returned.
pub fn encode_trajectory(traj: &Trajectory) -> Result<Vec<u8>> {
    let m = traj.dims();
    let n = traj.len();
    let sets: Vec<Vec<usize>> = (0..m).map(|d| breakpoints(traj, d)).collect();
    for d in 0..m.saturating_sub(1) {
        let (mut i, mut j) = (0, 0);
        while i < sets[d].len() {
            while j < sets[d + 1].len() && sets[d + 1][j] < sets[d][i] {
                j += 1;
            }
            if j >= sets[d + 1].len() || sets[d + 1][j] != sets[d][i] {
                return Err(Error::NotPrefixForm);
            }
            i += 1;
        }
    }
    let mut intro = vec![m; n];
    for d in (0..m).rev() {
        for &i in &sets[d] {
            intro[i] = d;
        }
    }
    let points = (0..n)
        .map(|i| TaggedPoint {
            time: traj.time(i),
            intro_dim: if intro[i] == m { m - 1 } else { intro[i] },
            coords: traj.point(i).to_vec(),
        })
        .collect();
    encode(&TaggedTrajectory { dims: m, points })
}
