//! Minimum-link paths through a one-dimensional tolerance corridor.
//!
//! One coordinate of a trajectory, widened by the error bound, forms a
//! corridor that presents a vertical gate `[center - eps, center + eps]` at
//! every sample time. A link path is a piecewise-linear function that bends
//! only at gate times and passes through every gate it spans. The search
//! below finds a path with the fewest segments from a source condition on
//! the first gate to the last gate, by growing per-gate reachability
//! intervals breadth-first, one extra link per round.

use crate::error::{Error, Result};
use crate::trajectory::Tolerance;

/// One dimension of a trajectory seen as a corridor of half-width
/// `tol.epsilon`, with `tol.eta` of numerical slack on every gate test.
#[derive(Clone, Copy)]
pub struct Tube<'a> {
    times: &'a [f64],
    center: &'a [f64],
    tol: Tolerance,
}

impl<'a> Tube<'a> {
    pub fn new(times: &'a [f64], center: &'a [f64], tol: Tolerance) -> Result<Self> {
        if times.len() != center.len() || times.is_empty() {
            return Err(Error::DomainMismatch);
        }
        if !(tol.epsilon >= 0.0 && tol.eta >= 0.0) {
            return Err(Error::InternalGeometry("negative tolerance"));
        }
        Ok(Tube { times, center, tol })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.times[i]
    }

    pub fn center(&self, i: usize) -> f64 {
        self.center[i]
    }

    pub fn lo(&self, i: usize) -> f64 {
        self.center[i] - self.tol.epsilon
    }

    pub fn hi(&self, i: usize) -> f64 {
        self.center[i] + self.tol.epsilon
    }

    // only half the advertised slack is spent on geometry; the other half
    // absorbs rounding when a caller re-checks the output against eps + eta
    fn slack(&self) -> f64 {
        self.tol.eta * 0.5
    }

    fn slo(&self, i: usize) -> f64 {
        self.lo(i) - self.slack()
    }

    fn shi(&self, i: usize) -> f64 {
        self.hi(i) + self.slack()
    }
}

/// Constraint on the first vertex of a path.
#[derive(Clone, Copy, Debug)]
pub enum Source {
    /// Free anywhere on the first gate.
    Gate,
    /// Pinned to a given value on the first gate.
    Point(f64),
}

/// Vertices of a link path: gate indices into the tube and values there.
#[derive(Clone, Debug)]
pub struct LinkPath {
    pub idx: Vec<usize>,
    pub val: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LinkResult {
    pub path: LinkPath,
    pub links: usize,
    /// Interval of admissible last-gate values over all optimal paths from
    /// the record the path was reconstructed from.
    pub terminal: (f64, f64),
}

/// Reachability interval at some gate, remembering which launch produced it.
#[derive(Clone, Copy, Debug)]
struct Record {
    lo: f64,
    hi: f64,
    round: usize,
    parent: Option<(usize, usize)>,
}

#[derive(Clone, Default)]
struct GateState {
    records: Vec<Record>,
    covered: Vec<(f64, f64)>,
}

/// Parts of `[lo, hi]` not yet covered. Zero-width input intervals are kept
/// when uncovered; they matter for exact corridors.
fn subtract(lo: f64, hi: f64, covered: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if lo == hi {
        for &(clo, chi) in covered {
            if clo <= lo && lo <= chi {
                return Vec::new();
            }
        }
        return vec![(lo, hi)];
    }
    let mut out = Vec::new();
    let mut cur = lo;
    for &(clo, chi) in covered {
        if chi < cur {
            continue;
        }
        if clo > hi {
            break;
        }
        if clo > cur {
            out.push((cur, clo));
        }
        cur = cur.max(chi);
        if cur >= hi {
            return out;
        }
    }
    if cur < hi {
        out.push((cur, hi));
    }
    out
}

/// Insert `[lo, hi]` into a sorted disjoint list, merging overlaps.
fn insert(covered: &mut Vec<(f64, f64)>, lo: f64, hi: f64) {
    let mut i = 0;
    while i < covered.len() && covered[i].1 < lo {
        i += 1;
    }
    let mut j = i;
    let (mut nlo, mut nhi) = (lo, hi);
    while j < covered.len() && covered[j].0 <= hi {
        nlo = nlo.min(covered[j].0);
        nhi = nhi.max(covered[j].1);
        j += 1;
    }
    covered.splice(i..j, [(nlo, nhi)]);
}

/// Launch funnels live in (value-at-launch, slope) space, where every gate
/// ahead contributes a pair of half-plane constraints.
type Vertex = (f64, f64);

/// Convex clip keeping `a*u + b*s <= c`.
fn halfplane(poly: Vec<Vertex>, a: f64, b: f64, c: f64) -> Vec<Vertex> {
    let f = |p: &Vertex| a * p.0 + b * p.1 - c;
    match poly.len() {
        0 => poly,
        1 => {
            if f(&poly[0]) <= 0.0 {
                poly
            } else {
                Vec::new()
            }
        }
        2 => {
            let (p, q) = (poly[0], poly[1]);
            let (fp, fq) = (f(&p), f(&q));
            match (fp <= 0.0, fq <= 0.0) {
                (true, true) => poly,
                (false, false) => Vec::new(),
                _ => {
                    let t = fp / (fp - fq);
                    let m = (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1));
                    if fp <= 0.0 {
                        vec![p, m]
                    } else {
                        vec![m, q]
                    }
                }
            }
        }
        _ => {
            let mut out = Vec::with_capacity(poly.len() + 1);
            for i in 0..poly.len() {
                let p = poly[i];
                let q = poly[(i + 1) % poly.len()];
                let (fp, fq) = (f(&p), f(&q));
                if fp <= 0.0 {
                    out.push(p);
                }
                if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
                    let t = fp / (fp - fq);
                    out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
                }
            }
            out
        }
    }
}

struct Search<'a> {
    tube: Tube<'a>,
    first: usize,
    last: usize,
    states: Vec<GateState>,
    // per-gate image staging, kept allocated across rounds so a round only
    // pays for the gates it actually reaches
    images: Vec<Vec<(f64, f64, (usize, usize))>>,
    trace: Vec<(usize, usize, f64, f64)>,
}

impl<'a> Search<'a> {
    fn new(tube: Tube<'a>, first: usize, last: usize, source: Source) -> Result<Self> {
        let (s_lo, s_hi) = match source {
            Source::Gate => (tube.slo(first), tube.shi(first)),
            Source::Point(v) => {
                if v < tube.slo(first) || v > tube.shi(first) {
                    return Err(Error::OutOfDomain(v));
                }
                (v, v)
            }
        };
        let mut states = vec![GateState::default(); last - first + 1];
        states[0].records.push(Record {
            lo: s_lo,
            hi: s_hi,
            round: 0,
            parent: None,
        });
        states[0].covered.push((s_lo, s_hi));
        Ok(Search {
            tube,
            first,
            last,
            states,
            images: vec![Vec::new(); last - first + 1],
            trace: vec![(0, first, s_lo, s_hi)],
        })
    }

    /// Propagate every queued launch one link forward. All image intervals
    /// landing on a gate this round are pooled, their union is reduced by
    /// what earlier rounds already cover, and each novel part becomes a
    /// minimal chain of records, one per covering image. Pooling keeps the
    /// record count per gate proportional to rounds instead of launches.
    fn round(&mut self, round: usize, launches: &[(usize, usize)]) -> Vec<(usize, usize)> {
        let mut images = std::mem::take(&mut self.images);
        let mut touched: Vec<usize> = Vec::new();
        for &(g, r) in launches {
            if g == self.last {
                continue;
            }
            let (u_lo, u_hi) = {
                let rec = &self.states[g - self.first].records[r];
                (rec.lo, rec.hi)
            };
            let t0 = self.tube.time(g);
            let g1 = g + 1;
            let d1 = self.tube.time(g1) - t0;
            let (b_lo, b_hi) = (self.tube.slo(g1), self.tube.shi(g1));
            let mut poly: Vec<Vertex> = if u_lo < u_hi {
                vec![
                    (u_lo, (b_lo - u_lo) / d1),
                    (u_hi, (b_lo - u_hi) / d1),
                    (u_hi, (b_hi - u_hi) / d1),
                    (u_lo, (b_hi - u_lo) / d1),
                ]
            } else if b_lo < b_hi {
                vec![(u_lo, (b_lo - u_lo) / d1), (u_lo, (b_hi - u_lo) / d1)]
            } else {
                vec![(u_lo, (b_lo - u_lo) / d1)]
            };
            for gg in g1..=self.last {
                let dt = self.tube.time(gg) - t0;
                let image = if gg == g1 {
                    // a single link between adjacent gates is unconstrained,
                    // so the image is the whole gate, exactly
                    (b_lo, b_hi)
                } else {
                    poly = halfplane(poly, 1.0, dt, self.tube.shi(gg));
                    poly = halfplane(poly, -1.0, -dt, -self.tube.slo(gg));
                    if poly.is_empty() {
                        break;
                    }
                    let mut ilo = f64::INFINITY;
                    let mut ihi = f64::NEG_INFINITY;
                    for &(u, s) in &poly {
                        let v = u + dt * s;
                        ilo = ilo.min(v);
                        ihi = ihi.max(v);
                    }
                    (ilo.max(self.tube.slo(gg)), ihi.min(self.tube.shi(gg)))
                };
                if image.0 > image.1 {
                    continue;
                }
                let idx = gg - self.first;
                if !subtract(image.0, image.1, &self.states[idx].covered).is_empty() {
                    if images[idx].is_empty() {
                        touched.push(idx);
                    }
                    images[idx].push((image.0, image.1, (g, r)));
                }
            }
        }
        let mut next = Vec::new();
        touched.sort_unstable();
        for &k in &touched {
            let imgs = &mut images[k];
            imgs.sort_by(|a, b| {
                a.0.total_cmp(&b.0)
                    .then(a.1.total_cmp(&b.1))
                    .then(a.2.cmp(&b.2))
            });
            let mut union: Vec<(f64, f64)> = Vec::new();
            for &(lo, hi, _) in imgs.iter() {
                match union.last_mut() {
                    Some(u) if lo <= u.1 => u.1 = u.1.max(hi),
                    _ => union.push((lo, hi)),
                }
            }
            let gg = self.first + k;
            let state = &mut self.states[k];
            for &(ulo, uhi) in &union {
                for (nlo, nhi) in subtract(ulo, uhi, &state.covered) {
                    insert(&mut state.covered, nlo, nhi);
                    let mut pos = nlo;
                    loop {
                        // the widest-reaching image through `pos`, earliest
                        // launch winning ties, carries the next record
                        let mut best: Option<(f64, (usize, usize))> = None;
                        for &(ilo, ihi, p) in imgs.iter() {
                            if ilo <= pos && pos <= ihi {
                                let better = match best {
                                    None => true,
                                    Some((bhi, bp)) => ihi > bhi || (ihi == bhi && p < bp),
                                };
                                if better {
                                    best = Some((ihi, p));
                                }
                            }
                        }
                        let Some((ihi, parent)) = best else {
                            debug_assert!(false, "image union lost a novel value");
                            break;
                        };
                        let rhi = ihi.min(nhi);
                        state.records.push(Record {
                            lo: pos,
                            hi: rhi,
                            round,
                            parent: Some(parent),
                        });
                        self.trace.push((round, gg, pos, rhi));
                        next.push((gg, state.records.len() - 1));
                        if rhi >= nhi {
                            break;
                        }
                        pos = rhi;
                    }
                }
            }
            imgs.clear();
        }
        self.images = images;
        next
    }

    fn covering_record(&self, gate: usize, v: f64) -> Option<usize> {
        self.states[gate - self.first]
            .records
            .iter()
            .position(|r| r.lo <= v && v <= r.hi)
    }

    /// Walk parent pointers back to the source, fixing a vertex value at
    /// each launch gate. The feasible launch values for a fixed downstream
    /// value form an interval; its midpoint is taken.
    fn backtrack(&self, mut gate: usize, mut rec_idx: usize, v_end: f64) -> Result<(Vec<usize>, Vec<f64>)> {
        let mut idx = vec![gate];
        let mut val = vec![v_end];
        let mut v = v_end;
        loop {
            let rec = self.states[gate - self.first].records[rec_idx];
            let Some((pg, pr)) = rec.parent else { break };
            let parent = self.states[pg - self.first].records[pr];
            let (mut a, mut b) = (parent.lo, parent.hi);
            let t_j = self.tube.time(pg);
            let t_i = self.tube.time(gate);
            for gg in pg + 1..gate {
                let lam = (self.tube.time(gg) - t_j) / (t_i - t_j);
                let w = 1.0 - lam;
                a = a.max((self.tube.slo(gg) - v * lam) / w);
                b = b.min((self.tube.shi(gg) - v * lam) / w);
            }
            let slack = 4.0 * self.tube.slack() + 1e-12 * (1.0 + v.abs() + a.abs().max(b.abs()));
            if b < a - slack {
                return Err(Error::InternalGeometry("no feasible launch value on backtrack"));
            }
            let u = 0.5 * (a + b);
            idx.push(pg);
            val.push(u);
            v = u;
            gate = pg;
            rec_idx = pr;
        }
        idx.reverse();
        val.reverse();
        Ok((idx, val))
    }
}

/// Drop interior vertices that are exactly collinear with their neighbours.
fn drop_collinear(idx: &mut Vec<usize>, val: &mut Vec<f64>, tube: &Tube) {
    if idx.len() < 3 {
        return;
    }
    let mut oi: Vec<usize> = vec![idx[0]];
    let mut ov: Vec<f64> = vec![val[0]];
    for k in 1..idx.len() {
        while oi.len() >= 2 {
            let p = oi.len() - 2;
            let w = oi.len() - 1;
            let cross = (tube.time(oi[w]) - tube.time(oi[p])) * (val[k] - ov[w])
                - (ov[w] - ov[p]) * (tube.time(idx[k]) - tube.time(oi[w]));
            if cross == 0.0 {
                oi.pop();
                ov.pop();
            } else {
                break;
            }
        }
        oi.push(idx[k]);
        ov.push(val[k]);
    }
    *idx = oi;
    *val = ov;
}

fn trivial_result(tube: &Tube, first: usize, source: Source) -> LinkResult {
    let v = match source {
        Source::Gate => tube.center(first),
        Source::Point(p) => p,
    };
    LinkResult {
        path: LinkPath {
            idx: vec![first],
            val: vec![v],
        },
        links: 0,
        terminal: (tube.slo(first), tube.shi(first)),
    }
}

fn check_range(tube: &Tube, first: usize, last: usize) -> Result<()> {
    if first > last || last >= tube.len() {
        return Err(Error::InternalGeometry("gate range out of bounds"));
    }
    Ok(())
}

fn solve_gate_dest<'a>(
    tube: Tube<'a>,
    first: usize,
    last: usize,
    source: Source,
) -> Result<(LinkResult, Search<'a>)> {
    let mut search = Search::new(tube, first, last, source)?;
    if first == last {
        return Ok((trivial_result(&tube, first, source), search));
    }
    let span = last - first;
    let mut launches = vec![(first, 0)];
    for round in 1..=span {
        launches.sort_unstable();
        launches = search.round(round, &launches);
        let dest = &search.states[span];
        if !dest.records.is_empty() {
            let mut best = 0;
            for (i, r) in dest.records.iter().enumerate() {
                if r.hi - r.lo > dest.records[best].hi - dest.records[best].lo {
                    best = i;
                }
            }
            let rec = dest.records[best];
            debug_assert_eq!(rec.round, round);
            let v_end = 0.5 * (rec.lo + rec.hi);
            let (mut idx, mut val) = search.backtrack(last, best, v_end)?;
            drop_collinear(&mut idx, &mut val, &tube);
            let links = idx.len() - 1;
            debug_assert_eq!(links, round);
            let result = LinkResult {
                path: LinkPath { idx, val },
                links,
                terminal: (rec.lo, rec.hi),
            };
            return Ok((result, search));
        }
        if launches.is_empty() {
            return Err(Error::InternalGeometry("corridor search stalled"));
        }
    }
    Err(Error::InternalGeometry("corridor search did not terminate"))
}

/// Fewest-link path from `source` on gate `first` to anywhere on gate
/// `last`. The final value is the midpoint of the widest optimal terminal
/// interval.
pub fn min_link_path(tube: &Tube, first: usize, last: usize, source: Source) -> Result<LinkResult> {
    check_range(tube, first, last)?;
    solve_gate_dest(*tube, first, last, source).map(|(r, _)| r)
}

/// Fewest-link path from `source` on gate `first` to the exact value
/// `target` on gate `last`.
pub fn link_path_to_point(
    tube: &Tube,
    first: usize,
    last: usize,
    source: Source,
    target: f64,
) -> Result<LinkResult> {
    check_range(tube, first, last)?;
    if target < tube.slo(last) || target > tube.shi(last) {
        return Err(Error::OutOfDomain(target));
    }
    let mut search = Search::new(*tube, first, last, source)?;
    if first == last {
        return Ok(LinkResult {
            path: LinkPath {
                idx: vec![first],
                val: vec![target],
            },
            links: 0,
            terminal: (target, target),
        });
    }
    let span = last - first;
    let mut launches = vec![(first, 0)];
    for round in 1..=span {
        launches.sort_unstable();
        launches = search.round(round, &launches);
        if let Some(ri) = search.covering_record(last, target) {
            let rec = search.states[span].records[ri];
            let (mut idx, mut val) = search.backtrack(last, ri, target)?;
            drop_collinear(&mut idx, &mut val, tube);
            let links = idx.len() - 1;
            return Ok(LinkResult {
                path: LinkPath { idx, val },
                links,
                terminal: (rec.lo, rec.hi),
            });
        }
        if launches.is_empty() {
            return Err(Error::InternalGeometry("corridor search stalled"));
        }
    }
    Err(Error::InternalGeometry("corridor search did not terminate"))
}

/// Fewest-link counts from `source` on gate `first` to each target value on
/// gate `last`, sharing one reachability search across all targets.
pub fn min_links_to_points(
    tube: &Tube,
    first: usize,
    last: usize,
    source: Source,
    targets: &[f64],
) -> Result<Vec<usize>> {
    check_range(tube, first, last)?;
    for &t in targets {
        if t < tube.slo(last) || t > tube.shi(last) {
            return Err(Error::OutOfDomain(t));
        }
    }
    if first == last {
        return Ok(vec![0; targets.len()]);
    }
    let mut search = Search::new(*tube, first, last, source)?;
    let span = last - first;
    let mut counts = vec![usize::MAX; targets.len()];
    let mut remaining = targets.len();
    let mut launches = vec![(first, 0)];
    for round in 1..=span {
        launches.sort_unstable();
        launches = search.round(round, &launches);
        for (q, &t) in targets.iter().enumerate() {
            if counts[q] == usize::MAX && search.covering_record(last, t).is_some() {
                counts[q] = round;
                remaining -= 1;
            }
        }
        if remaining == 0 {
            return Ok(counts);
        }
        if launches.is_empty() {
            break;
        }
    }
    if remaining == 0 {
        Ok(counts)
    } else {
        Err(Error::InternalGeometry("targets unreachable in corridor"))
    }
}
