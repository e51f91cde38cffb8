//! Lattice cycles all of whose shadows are cycle-free.
//!
//! A unit-step closed walk is grown from its lexicographically least vertex.
//! Each shadow of the prefix is a connected lattice graph, so a step closes
//! a cycle in a shadow exactly when it projects to a new edge whose far end
//! is already in that shadow; such prefixes are cut. A closed walk on a tree
//! crosses every edge an even number of times, which bounds how far a
//! prefix can be from closing.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use super::lattice::{add, corners, walk_chain, UNIT3};
use super::symmetry::{canonical_cycle, P3};
use super::{shadow_reports, Mode, SearchConfig, SearchError, SearchReport};
use crate::arrangement::{Classification, TopologyReport};
use crate::curve::PolyChain;

#[derive(Clone, Copy, Default)]
struct Shadow {
    verts: u32,
    edges: u64,
    parity: u64,
}

struct Walker<'a> {
    g: i64,
    len: usize,
    start: P3,
    walk: Vec<P3>,
    visited: u128,
    shadows: [Shadow; 3],
    nodes: u64,
    node_cap: u64,
    visit: &'a mut dyn FnMut(&[P3]) -> bool,
}

fn proj(p: P3, axis: usize) -> [i64; 2] {
    match axis {
        0 => [p[1], p[2]],
        1 => [p[0], p[2]],
        _ => [p[0], p[1]],
    }
}

impl Walker<'_> {
    fn cell(&self, p: P3) -> u32 {
        let s = self.g + 1;
        ((p[0] * s + p[1]) * s + p[2]) as u32
    }

    fn point2(&self, q: [i64; 2]) -> u32 {
        (q[0] * (self.g + 1) + q[1]) as u32
    }

    fn edge2(&self, a: [i64; 2], b: [i64; 2]) -> u32 {
        let g = self.g;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo[0] != hi[0] {
            (lo[1] * g + lo[0]) as u32
        } else {
            (g * (g + 1) + lo[0] * g + lo[1]) as u32
        }
    }

    /// Shadow states after stepping from `p` to `q`, or `None` if a shadow
    /// would close a cycle.
    fn step(&self, p: P3, q: P3, axis_moved: usize) -> Option<[Shadow; 3]> {
        let mut out = self.shadows;
        for (i, sh) in out.iter_mut().enumerate() {
            if i == axis_moved {
                continue;
            }
            let (a, b) = (proj(p, i), proj(q, i));
            let e = 1u64 << self.edge2(a, b);
            if sh.edges & e == 0 {
                let vb = 1u32 << self.point2(b);
                if sh.verts & vb != 0 {
                    return None;
                }
                sh.verts |= vb;
                sh.edges |= e;
            }
            sh.parity ^= e;
        }
        Some(out)
    }

    fn run(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return true;
        }
        let cur = *self.walk.last().unwrap();
        let steps = self.walk.len() - 1;
        for (k, d) in UNIT3.iter().enumerate() {
            let q = add(cur, *d);
            let axis = k / 2;
            if q == self.start {
                if steps + 1 != self.len || self.walk[1] > self.walk[steps] {
                    continue;
                }
                if let Some(sh) = self.step(cur, q, axis) {
                    if sh.iter().all(|s| s.parity == 0) && (self.visit)(&self.walk) {
                        return true;
                    }
                }
                continue;
            }
            if q <= self.start || q.iter().any(|&c| c < 0 || c > self.g) {
                continue;
            }
            let bit = 1u128 << self.cell(q);
            if self.visited & bit != 0 {
                continue;
            }
            let remaining = self.len - steps - 1;
            let dist: i64 = (0..3).map(|i| (q[i] - self.start[i]).abs()).sum();
            if dist as usize > remaining {
                continue;
            }
            let Some(sh) = self.step(cur, q, axis) else {
                continue;
            };
            let odd: Vec<usize> = sh.iter().map(|s| s.parity.count_ones() as usize).collect();
            if odd.iter().any(|&c| c > remaining) || odd.iter().sum::<usize>() > 2 * remaining {
                continue;
            }
            let saved = self.shadows;
            self.shadows = sh;
            self.visited |= bit;
            self.walk.push(q);
            let stop = self.run();
            self.walk.pop();
            self.visited &= !bit;
            self.shadows = saved;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Runs the walker for one start and length. Returns the node count and
/// whether the cap was hit.
fn walk_from(
    g: i64,
    start: P3,
    len: usize,
    node_cap: u64,
    visit: &mut dyn FnMut(&[P3]) -> bool,
) -> (u64, bool) {
    let mut w = Walker {
        g,
        len,
        start,
        walk: vec![start],
        visited: 0,
        shadows: Default::default(),
        nodes: 0,
        node_cap,
        visit,
    };
    let s = w.cell(start);
    w.visited |= 1u128 << s;
    for i in 0..3 {
        let p = proj(start, i);
        w.shadows[i].verts |= 1u32 << w.point2(p);
    }
    w.run();
    (w.nodes, w.nodes > node_cap)
}

fn check_grid(cfg: &SearchConfig) -> Result<(), SearchError> {
    if cfg.grid_max > 4 {
        return Err(SearchError::InvalidConfig("gridMax above 4 is not supported here".into()));
    }
    Ok(())
}

/// Walks anchored at the origin of the x1 axis; the other coordinates of the
/// least vertex range over the box.
fn starts(g: i64) -> Vec<P3> {
    (0..=g).flat_map(|y| (0..=g).map(move |z| [0, y, z])).collect()
}

fn touches_all_floors(walk: &[P3]) -> bool {
    (0..3).all(|k| walk.iter().any(|p| p[k] == 0))
}

/// Shortest simple lattice cycle in the box whose three shadows are trees,
/// found by iterative deepening over even lengths up to `max_length`.
/// `budget` caps the search nodes per start and length; `None` means no
/// witness was found within the limits.
pub fn find_tree_shadow_cycle(cfg: &SearchConfig) -> Result<Option<PolyChain>, SearchError> {
    cfg.expect_mode(Mode::TreeShadowCycles)?;
    check_grid(cfg)?;
    let g = cfg.grid_max;
    for len in (4..=cfg.max_length).step_by(2) {
        let hits: Vec<Option<Vec<P3>>> = starts(g)
            .par_iter()
            .map(|&s| {
                let mut hit = None;
                let mut visit = |walk: &[P3]| {
                    if !touches_all_floors(walk) {
                        return false;
                    }
                    let chain = walk_chain(walk, true);
                    let trees = shadow_reports(&chain)
                        .iter()
                        .all(|r| r.classification == Classification::Tree);
                    if trees {
                        hit = Some(walk.to_vec());
                    }
                    trees
                };
                walk_from(g, s, len, cfg.budget, &mut visit);
                hit
            })
            .collect();
        if let Some(walk) = hits.into_iter().flatten().next() {
            return Ok(Some(walk_chain(&walk, true)));
        }
    }
    Ok(None)
}

fn branch_triple(reports: &[TopologyReport; 3]) -> [usize; 3] {
    std::array::from_fn(|k| reports[k].branch_point_count)
}

/// Whether some shadow is a path while the other two have at most one
/// branch point each.
pub fn forbidden_pattern(reports: &[TopologyReport; 3]) -> bool {
    (0..3).any(|j| {
        reports[j].classification == Classification::Path
            && (0..3)
                .filter(|&k| k != j)
                .all(|k| reports[k].branch_point_count <= 1)
    })
}

/// Exhaustive census of lattice cycles of length up to `max_length` whose
/// shadows are all cycle-free, keyed by their sorted branch-point triples.
///
/// Stats carry the minimum per-shadow and total branch counts; witnesses
/// are the cycles attaining the minimum total.
pub fn min_branch_point_census(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.expect_mode(Mode::BranchCensus)?;
    check_grid(cfg)?;
    let t0 = Instant::now();
    let g = cfg.grid_max;
    let jobs: Vec<(usize, P3)> = (4..=cfg.max_length)
        .step_by(2)
        .flat_map(|len| starts(g).into_iter().map(move |s| (len, s)))
        .collect();
    let results: Vec<(BTreeSet<Vec<P3>>, u64, bool)> = jobs
        .par_iter()
        .map(|&(len, s)| {
            let mut found = BTreeSet::new();
            let mut visit = |walk: &[P3]| {
                if touches_all_floors(walk) {
                    found.insert(canonical_cycle(&corners(walk, true)));
                }
                false
            };
            let (nodes, capped) = walk_from(g, s, len, cfg.budget, &mut visit);
            (found, nodes, capped)
        })
        .collect();
    let mut all = BTreeSet::new();
    let mut report = SearchReport::new(cfg);
    let mut nodes = 0;
    for (found, n, capped) in results {
        all.extend(found);
        nodes += n;
        if capped {
            return Err(SearchError::BudgetExceeded {
                estimate: n,
                budget: cfg.budget,
            });
        }
    }
    report.stat("searchNodes", nodes);
    let examined: Vec<(PolyChain, [TopologyReport; 3])> = all
        .par_iter()
        .map(|c| {
            let chain = PolyChain::new(
                c.iter().map(|&p| super::lattice::to_point(p)).collect(),
                true,
            )
            .expect("lattice cycles are simple");
            let reps = shadow_reports(&chain);
            (chain, reps)
        })
        .collect();
    let mut min_shadow = usize::MAX;
    let mut min_total = usize::MAX;
    let mut best: Vec<PolyChain> = Vec::new();
    for (chain, reps) in examined {
        report.instances_checked += 1;
        debug_assert!(reps.iter().all(|r| !r.has_cycle));
        let mut t = branch_triple(&reps);
        t.sort_unstable();
        report.bump(&format!("{},{},{}", t[0], t[1], t[2]), 1);
        if forbidden_pattern(&reps) {
            report.counterexamples.push(chain.clone());
        }
        min_shadow = min_shadow.min(t[0]);
        let total = t.iter().sum::<usize>();
        if total < min_total {
            min_total = total;
            best.clear();
        }
        if total == min_total && best.len() < 16 {
            best.push(chain);
        }
    }
    report.distinct_instances = Some(report.instances_checked);
    if report.instances_checked > 0 {
        report.stat("minBranchPerShadow", min_shadow as u64);
        report.stat("minBranchTotal", min_total as u64);
    }
    report.witnesses = best;
    report.elapsed = t0.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_box_has_no_tree_cycle() {
        let cfg = SearchConfig::new(Mode::TreeShadowCycles, 1, 8, 0, 0);
        assert_eq!(find_tree_shadow_cycle(&cfg).unwrap(), None);
    }

    #[test]
    fn unit_box_census_is_empty() {
        // Every cycle in {0,1}^3 has a shadow containing the unit square.
        let cfg = SearchConfig::new(Mode::BranchCensus, 1, 8, 0, 0);
        let rep = min_branch_point_census(&cfg).unwrap();
        assert_eq!(rep.instances_checked, 0);
    }
}
