//! Exhaustive enumeration of lattice chains with few vertices whose three
//! shadows are all cycles.
//!
//! A prefix survives only if each partial shadow can still be part of a
//! simple closed curve: no crossings, no T-junctions, at most two arm
//! directions at every point. The last vertex must project into the
//! partial shadow in all three planes, which the search reads off
//! precomputed lattice masks.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use super::lattice::{on_seg2, orient2, proper_turn, segments_touch3, to_point};
use super::symmetry::{canonical_open, orbit_representatives, P3};
use super::{shadow_reports, Mode, SearchConfig, SearchError, SearchReport};
use crate::arrangement::Classification;
use crate::curve::PolyChain;

type P2 = [i64; 2];
type Seg2 = (P2, P2);

fn proj(p: P3, axis: usize) -> P2 {
    match axis {
        0 => [p[1], p[2]],
        1 => [p[0], p[2]],
        _ => [p[0], p[1]],
    }
}

fn primitive(v: P2) -> P2 {
    let g = num_integer::gcd(v[0], v[1]);
    [v[0] / g, v[1] / g]
}

/// Distinct arm directions of the union of `segs` at `p`.
fn arm_count(segs: &[Seg2], p: P2) -> usize {
    let mut arms: Vec<P2> = Vec::with_capacity(4);
    let mut push = |d: P2| {
        if !arms.contains(&d) {
            arms.push(d);
        }
    };
    for &(a, b) in segs {
        if a == b {
            continue;
        }
        let d = primitive([b[0] - a[0], b[1] - a[1]]);
        if p == a {
            push(d);
        } else if p == b {
            push([-d[0], -d[1]]);
        } else if on_seg2(a, b, p) {
            push(d);
            push([-d[0], -d[1]]);
        }
    }
    arms.len()
}

/// Whether adding `s` keeps the union free of crossings, T-junctions and
/// points with three or more arm directions, given that `segs` already is.
fn shadow_add_ok(segs: &[Seg2], s: Seg2) -> bool {
    let (s0, s1) = s;
    if s0 == s1 {
        return true;
    }
    for &(t0, t1) in segs {
        if t0 == t1 {
            continue;
        }
        let (o1, o2) = (orient2(t0, t1, s0), orient2(t0, t1, s1));
        if o1 == 0 && o2 == 0 {
            continue;
        }
        let (o3, o4) = (orient2(s0, s1, t0), orient2(s0, s1, t1));
        if o1 * o2 < 0 && o3 * o4 < 0 {
            return false;
        }
        for p in [s0, s1] {
            if p != t0 && p != t1 && on_seg2(t0, t1, p) {
                return false;
            }
        }
        for p in [t0, t1] {
            if p != s0 && p != s1 && on_seg2(s0, s1, p) {
                return false;
            }
        }
    }
    let mut all = segs.to_vec();
    all.push(s);
    arm_count(&all, s0) <= 2 && arm_count(&all, s1) <= 2
}

/// Whether a crossing-free union with at most two arms everywhere is a
/// closed curve: nonempty and no free ends.
fn closes_up(segs: &[Seg2]) -> bool {
    let live: Vec<&Seg2> = segs.iter().filter(|(a, b)| a != b).collect();
    !live.is_empty()
        && live
            .iter()
            .all(|&&(a, b)| arm_count(segs, a) == 2 && arm_count(segs, b) == 2)
}

struct Ctx {
    side: i64,
    n: usize,
    points: Vec<P3>,
    /// Lattice points of each plane on the closed segment between two of them.
    cover: Vec<u32>,
    /// For each plane and 2D lattice point, the 3D points above it.
    lift: [Vec<u128>; 3],
}

impl Ctx {
    fn new(g: i64, n: usize) -> Self {
        let side = g + 1;
        let points: Vec<P3> = (0..side)
            .flat_map(|x| (0..side).flat_map(move |y| (0..side).map(move |z| [x, y, z])))
            .collect();
        let plane: Vec<P2> = (0..side)
            .flat_map(|x| (0..side).map(move |y| [x, y]))
            .collect();
        let s2 = plane.len();
        let mut cover = vec![0u32; s2 * s2];
        for (i, &a) in plane.iter().enumerate() {
            for (j, &b) in plane.iter().enumerate() {
                let mut m = 0u32;
                for (k, &p) in plane.iter().enumerate() {
                    if on_seg2(a, b, p) {
                        m |= 1 << k;
                    }
                }
                cover[i * s2 + j] = m;
            }
        }
        let lift = std::array::from_fn(|axis| {
            let mut v = vec![0u128; s2];
            for (k, &p) in points.iter().enumerate() {
                let q = proj(p, axis);
                v[(q[0] * side + q[1]) as usize] |= 1u128 << k;
            }
            v
        });
        Ctx {
            side,
            n,
            points,
            cover,
            lift,
        }
    }

    fn idx2(&self, p: P2) -> usize {
        (p[0] * self.side + p[1]) as usize
    }

    /// 3D points whose projections all lie on the current partial shadows.
    fn last_vertex_candidates(&self, shadows: &[Vec<Seg2>; 3]) -> u128 {
        let s2 = (self.side * self.side) as usize;
        let mut out = u128::MAX;
        for (axis, segs) in shadows.iter().enumerate() {
            let mut m2 = 0u32;
            for &(a, b) in segs {
                m2 |= self.cover[self.idx2(a) * s2 + self.idx2(b)];
            }
            let mut m3 = 0u128;
            while m2 != 0 {
                let k = m2.trailing_zeros() as usize;
                m3 |= self.lift[axis][k];
                m2 &= m2 - 1;
            }
            out &= m3;
        }
        out
    }
}

#[derive(Default)]
struct Tally {
    nodes: u64,
    complete: u64,
    mismatches: u64,
    found: BTreeSet<Vec<P3>>,
}

fn can_extend(verts: &[P3], shadows: &[Vec<Seg2>; 3], q: P3) -> bool {
    let len = verts.len();
    let p = verts[len - 1];
    if q == p {
        return false;
    }
    if len >= 2 && !proper_turn(verts[len - 2], p, q) {
        return false;
    }
    if len >= 3 && (0..len - 2).any(|k| segments_touch3(verts[k], verts[k + 1], p, q)) {
        return false;
    }
    (0..3).all(|axis| shadow_add_ok(&shadows[axis], (proj(p, axis), proj(q, axis))))
}

fn push(verts: &mut Vec<P3>, shadows: &mut [Vec<Seg2>; 3], q: P3) {
    let p = *verts.last().unwrap();
    for (axis, segs) in shadows.iter_mut().enumerate() {
        segs.push((proj(p, axis), proj(q, axis)));
    }
    verts.push(q);
}

fn pop(verts: &mut Vec<P3>, shadows: &mut [Vec<Seg2>; 3]) {
    verts.pop();
    for segs in shadows.iter_mut() {
        segs.pop();
    }
}

fn search(ctx: &Ctx, verts: &mut Vec<P3>, shadows: &mut [Vec<Seg2>; 3], tally: &mut Tally) {
    tally.nodes += 1;
    if verts.len() + 1 == ctx.n {
        let mut cand = ctx.last_vertex_candidates(shadows);
        while cand != 0 {
            let q = ctx.points[cand.trailing_zeros() as usize];
            cand &= cand - 1;
            if !can_extend(verts, shadows, q) {
                continue;
            }
            push(verts, shadows, q);
            tally.complete += 1;
            if shadows.iter().all(|s| closes_up(s)) {
                accept(verts, tally);
            }
            pop(verts, shadows);
        }
        return;
    }
    for &q in &ctx.points {
        if can_extend(verts, shadows, q) {
            push(verts, shadows, q);
            search(ctx, verts, shadows, tally);
            pop(verts, shadows);
        }
    }
}

/// Confirms a candidate with the exact arrangement code before keeping it.
fn accept(verts: &[P3], tally: &mut Tally) {
    let chain = PolyChain::new(verts.iter().map(|&p| to_point(p)).collect(), false);
    let ok = chain.is_ok_and(|c| {
        shadow_reports(&c)
            .iter()
            .all(|r| r.classification == Classification::Cycle)
    });
    if ok {
        tally.found.insert(canonical_open(verts));
    } else {
        tally.mismatches += 1;
    }
}

/// All `n`-vertex lattice chains in `{0..grid_max}^3` whose three shadows are
/// cycles, one per class under the signed axis permutations, translation and
/// reversal. Vertices where the chain goes straight on are not allowed, so
/// every witness has exactly `n` corners.
pub fn enumerate_min_vertex_paths(n: usize, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.expect_mode(Mode::MinVertexPaths)?;
    if !(2..=6).contains(&n) {
        return Err(SearchError::InvalidConfig(format!("vertex count {n} outside 2..=6")));
    }
    if cfg.grid_max > 4 {
        return Err(SearchError::InvalidConfig("gridMax above 4 is not supported here".into()));
    }
    let t0 = Instant::now();
    let g = cfg.grid_max;
    let ctx = Ctx::new(g, n);
    let reps = orbit_representatives(g);
    let cells = ctx.points.len() as u64;
    let estimate = (reps.len() as u64).saturating_mul(cells.saturating_pow(n.saturating_sub(2) as u32));
    cfg.check_budget(estimate)?;

    let tasks: Vec<(P3, P3)> = reps
        .iter()
        .flat_map(|&r| ctx.points.iter().map(move |&q| (r, q)))
        .collect();
    let tallies: Vec<Tally> = tasks
        .par_iter()
        .map(|&(v1, v2)| {
            let mut tally = Tally::default();
            let mut verts = vec![v1];
            let mut shadows: [Vec<Seg2>; 3] = Default::default();
            if n == 2 || !can_extend(&verts, &shadows, v2) {
                return tally;
            }
            push(&mut verts, &mut shadows, v2);
            search(&ctx, &mut verts, &mut shadows, &mut tally);
            tally
        })
        .collect();

    let mut report = SearchReport::new(cfg);
    let mut found = BTreeSet::new();
    let (mut nodes, mut mismatches) = (0, 0);
    for t in tallies {
        report.instances_checked += t.complete;
        nodes += t.nodes;
        mismatches += t.mismatches;
        found.extend(t.found);
    }
    report.stat("vertexCount", n as u64);
    report.stat("searchNodes", nodes);
    report.stat("estimate", estimate);
    report.stat("prefilterMismatches", mismatches);
    report.bump("Cycle,Cycle,Cycle", found.len() as u64);
    report.distinct_instances = Some(found.len() as u64);
    report.witnesses = found
        .into_iter()
        .map(|v| PolyChain::new(v.into_iter().map(to_point).collect(), false).unwrap())
        .collect();
    report.elapsed = t0.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shadow_prefix_rules() {
        let a: Seg2 = ([0, 0], [2, 0]);
        assert!(!shadow_add_ok(&[a], ([1, -1], [1, 1])), "crossing");
        assert!(!shadow_add_ok(&[a], ([1, 0], [1, 1])), "T-junction");
        assert!(shadow_add_ok(&[a], ([2, 0], [2, 1])), "corner");
        assert!(shadow_add_ok(&[a], ([1, 0], [3, 0])), "collinear overlap");
        let b: Seg2 = ([2, 0], [2, 1]);
        assert!(!shadow_add_ok(&[a, b], ([2, 0], [3, 1])), "three arms");
        assert!(closes_up(&[([0, 0], [1, 0]), ([1, 0], [0, 1]), ([0, 1], [0, 0])]));
        assert!(!closes_up(&[([0, 0], [1, 0]), ([1, 0], [0, 1])]));
    }

    #[test]
    fn too_few_vertices_give_nothing() {
        for n in 2..=4 {
            let cfg = SearchConfig::new(Mode::MinVertexPaths, 2, n, 0, 0);
            let rep = enumerate_min_vertex_paths(n, &cfg).unwrap();
            assert!(rep.witnesses.is_empty(), "n = {n}");
            assert_eq!(rep.stats["prefilterMismatches"], 0);
        }
    }
}
