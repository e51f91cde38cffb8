//! Voxel sets compatible with three given shadows.
//!
//! A set is compatible with bitmaps `s1, s2, s3` when its x_i-shadow equals
//! `s_i`. Compatible sets are closed under unions, so when any exists the
//! largest is the back-projection of the three bitmaps. That largest set can
//! be disconnected even when every bitmap is a path; rods sliding one unit
//! along an axis then cannot get from one component to another.

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{classify_graph, Classification};
use crate::sphere::VoxelSet;
use crate::theorem_lab::sample_rng;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CompatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("inconsistent bitmap sizes: {0}")]
    InconsistentBounds(String),
    #[error("cell {0:?} is not in the set")]
    NotInSet(Vec<i64>),
    #[error("exhaustive search needs {needed} triples, above the budget of {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
}

/// A 0/1 picture of one shadow. Shadow `s_i` lives in the plane of the two
/// remaining coordinates, in increasing order: pixel `(u, v)` of `s1` is
/// `(x2, x3)`, of `s2` is `(x1, x3)`, of `s3` is `(x1, x2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowBitmap {
    pub width: usize,
    pub height: usize,
    pub cells: BTreeSet<(i64, i64)>,
}

impl ShadowBitmap {
    pub fn new(width: usize, height: usize, cells: BTreeSet<(i64, i64)>) -> Result<Self, CompatError> {
        if let Some(c) = cells
            .iter()
            .find(|&&(u, v)| u < 0 || v < 0 || u >= width as i64 || v >= height as i64)
        {
            return Err(CompatError::InconsistentBounds(format!(
                "pixel {c:?} outside a {width}x{height} bitmap"
            )));
        }
        Ok(ShadowBitmap { width, height, cells })
    }

    /// Parses `W H` followed by H rows of W characters `0`/`1`; row `v` holds
    /// the pixels `(0, v) .. (W-1, v)`.
    pub fn parse(text: &str) -> Result<Self, CompatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (n, header) = lines.next().ok_or(CompatError::Parse {
            line: 1,
            message: "missing \"W H\" header".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| CompatError::Parse {
                line: n,
                message: format!("bad header {header:?}"),
            })?;
        let [width, height] = dims[..] else {
            return Err(CompatError::Parse {
                line: n,
                message: "header needs exactly W and H".into(),
            });
        };
        let mut cells = BTreeSet::new();
        let mut rows = 0;
        for (n, row) in lines {
            if rows == height {
                return Err(CompatError::Parse {
                    line: n,
                    message: format!("more than {height} rows"),
                });
            }
            if row.chars().count() != width {
                return Err(CompatError::Parse {
                    line: n,
                    message: format!("row has {} characters, expected {width}", row.chars().count()),
                });
            }
            for (u, ch) in row.chars().enumerate() {
                match ch {
                    '1' => {
                        cells.insert((u as i64, rows as i64));
                    }
                    '0' => {}
                    _ => {
                        return Err(CompatError::Parse {
                            line: n,
                            message: format!("unexpected character {ch:?}"),
                        })
                    }
                }
            }
            rows += 1;
        }
        if rows != height {
            return Err(CompatError::Parse {
                line: text.lines().count(),
                message: format!("expected {height} rows, found {rows}"),
            });
        }
        Ok(ShadowBitmap { width, height, cells })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.width, self.height);
        for v in 0..self.height as i64 {
            for u in 0..self.width as i64 {
                s.push(if self.cells.contains(&(u, v)) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn contains(&self, u: i64, v: i64) -> bool {
        self.cells.contains(&(u, v))
    }

    /// Topology of the pixel set, pixels joined when they share an edge.
    pub fn classification(&self) -> Classification {
        let cells: Vec<(i64, i64)> = self.cells.iter().copied().collect();
        let mut edges = Vec::new();
        for (i, &(u, v)) in cells.iter().enumerate() {
            for next in [(u + 1, v), (u, v + 1)] {
                if let Ok(j) = cells.binary_search(&next) {
                    edges.push((i, j));
                }
            }
        }
        classify_graph(cells.len(), &edges).classification
    }

    pub fn is_path(&self) -> bool {
        self.classification() == Classification::Path
    }
}

/// The box `[0, X) x [0, Y) x [0, Z)` implied by three bitmaps.
fn box_dims(s: &[&ShadowBitmap; 3]) -> Result<[usize; 3], CompatError> {
    let x = s[1].width;
    let y = s[0].width;
    let z = s[0].height;
    if s[2].width != x || s[2].height != y || s[1].height != z {
        return Err(CompatError::InconsistentBounds(format!(
            "s1 is {}x{}, s2 is {}x{}, s3 is {}x{}; need s1 = YxZ, s2 = XxZ, s3 = XxY",
            s[0].width, s[0].height, s[1].width, s[1].height, s[2].width, s[2].height
        )));
    }
    Ok([x, y, z])
}

fn voxels(dims: [usize; 3], cells: BTreeSet<Vec<i64>>) -> VoxelSet {
    let bounds = dims.iter().map(|&n| (0, n as i64 - 1)).collect();
    VoxelSet::with_bounds(3, 1, bounds, cells).expect("cells lie in the box")
}

/// All voxels whose three shadows land on set pixels.
pub fn back_project(s1: &ShadowBitmap, s2: &ShadowBitmap, s3: &ShadowBitmap) -> Result<VoxelSet, CompatError> {
    let dims = box_dims(&[s1, s2, s3])?;
    let mut cells = BTreeSet::new();
    for &(x, y) in &s3.cells {
        for z in 0..dims[2] as i64 {
            if s1.contains(y, z) && s2.contains(x, z) {
                cells.insert(vec![x, y, z]);
            }
        }
    }
    Ok(voxels(dims, cells))
}

/// The x_axis-shadow of a voxel set in Z^3 as a bitmap of the given size.
pub fn shadow_bitmap(v: &VoxelSet, axis: usize, width: usize, height: usize) -> ShadowBitmap {
    let k = axis - 1;
    let cells = v
        .cells()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.remove(k);
            (c[0], c[1])
        })
        .collect();
    ShadowBitmap { width, height, cells }
}

/// The three shadows of a voxel set inside the box `dims`.
pub fn shadows_of(v: &VoxelSet, dims: [usize; 3]) -> [ShadowBitmap; 3] {
    [
        shadow_bitmap(v, 1, dims[1], dims[2]),
        shadow_bitmap(v, 2, dims[0], dims[2]),
        shadow_bitmap(v, 3, dims[0], dims[1]),
    ]
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct CompatResult {
    #[serde(serialize_with = "cells_or_null")]
    pub largest: Option<VoxelSet>,
    pub candidate_size: usize,
    /// Face-connected components of the back-projection (the largest set
    /// whenever it exists).
    pub component_count: usize,
    pub per_shadow_exact: [bool; 3],
}

fn cells_or_null<S: serde::Serializer>(v: &Option<VoxelSet>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_seq(v.cells()),
        None => s.serialize_none(),
    }
}

/// The largest compatible set, if any compatible set exists: the
/// back-projection qualifies exactly when its shadows are the given ones.
pub fn largest_compatible(s1: &ShadowBitmap, s2: &ShadowBitmap, s3: &ShadowBitmap) -> Result<CompatResult, CompatError> {
    let dims = box_dims(&[s1, s2, s3])?;
    let candidate = back_project(s1, s2, s3)?;
    let got = shadows_of(&candidate, dims);
    let per_shadow_exact = [got[0] == *s1, got[1] == *s2, got[2] == *s3];
    let component_count = candidate.components().len();
    Ok(CompatResult {
        candidate_size: candidate.len(),
        component_count,
        largest: per_shadow_exact.iter().all(|&b| b).then_some(candidate),
        per_shadow_exact,
    })
}

/// Whether rods can slide from `a` to `b` inside `v` by unit axis steps.
pub fn reachable(v: &VoxelSet, a: &[i64], b: &[i64]) -> Result<bool, CompatError> {
    for c in [a, b] {
        if !v.contains(c) {
            return Err(CompatError::NotInSet(c.to_vec()));
        }
    }
    Ok(v.components().iter().any(|comp| {
        comp.binary_search_by(|c| c.as_slice().cmp(a)).is_ok()
            && comp.binary_search_by(|c| c.as_slice().cmp(b)).is_ok()
    }))
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct DisconnectionOutcome {
    pub size: usize,
    pub seed: u64,
    pub exhaustive: bool,
    pub triples_checked: u64,
    /// True when a random search used its whole budget without a witness.
    pub budget_exhausted: bool,
    pub witness: Option<[ShadowBitmap; 3]>,
    pub largest: Option<CompatResult>,
}

fn is_witness(s: &[ShadowBitmap; 3]) -> Option<CompatResult> {
    if !s.iter().all(ShadowBitmap::is_path) {
        return None;
    }
    let res = largest_compatible(&s[0], &s[1], &s[2]).ok()?;
    (res.largest.is_some() && res.component_count >= 2).then_some(res)
}

fn bitmap_from_bits(n: usize, bits: u32) -> ShadowBitmap {
    let cells = (0..n * n)
        .filter(|i| bits >> i & 1 == 1)
        .map(|i| ((i % n) as i64, (i / n) as i64))
        .collect();
    ShadowBitmap { width: n, height: n, cells }
}

/// A random union of two or three short lattice walks in the box `[0, n)^3`.
fn random_rods(rng: &mut ChaCha8Rng, n: usize) -> BTreeSet<Vec<i64>> {
    let mut cells = BTreeSet::new();
    let walks = rng.gen_range(2..=3);
    for _ in 0..walks {
        let mut c: Vec<i64> = (0..3).map(|_| rng.gen_range(0..n as i64)).collect();
        cells.insert(c.clone());
        for _ in 0..rng.gen_range(0..=2 * n) {
            let k = rng.gen_range(0..3);
            let step = if rng.gen_bool(0.5) { 1 } else { -1 };
            if (0..n as i64).contains(&(c[k] + step)) {
                c[k] += step;
                cells.insert(c.clone());
            }
        }
    }
    cells
}

/// Searches `n x n` bitmap triples, each a path under edge adjacency, whose
/// largest compatible set exists and is disconnected. Sizes up to 2 are
/// enumerated exhaustively (all (2^(n^2))^3 triples, refused above `budget`);
/// larger sizes draw up to `budget` shadows of random unions of lattice
/// walks. The first witness in sample order is returned.
pub fn find_disconnection_example(n: usize, budget: u64, seed: u64) -> Result<DisconnectionOutcome, CompatError> {
    let mut out = DisconnectionOutcome {
        size: n,
        seed,
        exhaustive: n <= 2,
        triples_checked: 0,
        budget_exhausted: false,
        witness: None,
        largest: None,
    };
    if n == 0 {
        return Ok(out);
    }
    if n <= 2 {
        let per = 1u64 << (n * n);
        let needed = per * per * per;
        if needed > budget {
            return Err(CompatError::BudgetExceeded { needed, budget });
        }
        let paths: Vec<ShadowBitmap> = (0..per as u32)
            .map(|b| bitmap_from_bits(n, b))
            .collect();
        for a in &paths {
            for b in &paths {
                for c in &paths {
                    out.triples_checked += 1;
                    let s = [a.clone(), b.clone(), c.clone()];
                    if let Some(res) = is_witness(&s) {
                        out.witness = Some(s);
                        out.largest = Some(res);
                        return Ok(out);
                    }
                }
            }
        }
        return Ok(out);
    }
    const CHUNK: u64 = 4096;
    let dims = [n; 3];
    let mut start = 0;
    while start < budget {
        let end = (start + CHUNK).min(budget);
        let found = (start..end).into_par_iter().find_first(|&i| {
            let mut rng = sample_rng(seed, i);
            let rods = voxels(dims, random_rods(&mut rng, n));
            is_witness(&shadows_of(&rods, dims)).is_some()
        });
        if let Some(i) = found {
            let mut rng = sample_rng(seed, i);
            let rods = voxels(dims, random_rods(&mut rng, n));
            let s = shadows_of(&rods, dims);
            out.triples_checked = i + 1;
            out.largest = is_witness(&s);
            out.witness = Some(s);
            return Ok(out);
        }
        start = end;
    }
    out.triples_checked = budget;
    out.budget_exhausted = true;
    Ok(out)
}

/// A random compatible subset of `largest`: voxels are dropped in random
/// order while every shadow pixel keeps a voxel above it.
pub fn random_compatible_subset(rng: &mut ChaCha8Rng, largest: &VoxelSet) -> VoxelSet {
    let mut cells: Vec<Vec<i64>> = largest.cells().iter().cloned().collect();
    cells.shuffle(rng);
    let keep_at_least = rng.gen_range(0..=cells.len());
    let mut counts: [std::collections::HashMap<(i64, i64), usize>; 3] = Default::default();
    for c in &cells {
        for (k, map) in counts.iter_mut().enumerate() {
            *map.entry(pixel(c, k)).or_default() += 1;
        }
    }
    let mut kept: BTreeSet<Vec<i64>> = cells.iter().cloned().collect();
    for c in cells.iter().skip(keep_at_least) {
        if (0..3).all(|k| counts[k][&pixel(c, k)] > 1) {
            for (k, map) in counts.iter_mut().enumerate() {
                *map.get_mut(&pixel(c, k)).unwrap() -= 1;
            }
            kept.remove(c);
        }
    }
    VoxelSet::with_bounds(3, 1, largest.bounds().to_vec(), kept).expect("subset of a bounded set")
}

fn pixel(c: &[i64], k: usize) -> (i64, i64) {
    match k {
        0 => (c[1], c[2]),
        1 => (c[0], c[2]),
        _ => (c[0], c[1]),
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct UnionClosureReport {
    pub pairs: u64,
    pub seed: u64,
    pub size: usize,
    /// Pairs whose union does not have the given shadows.
    pub union_violations: u64,
    /// Compatible sets found outside the largest one.
    pub maximality_violations: u64,
    pub examples: Vec<String>,
}

/// Draws `pairs` random shadow triples in `[0, n)^3` (shadows of random
/// rods), two random compatible sets for each, and checks that their union
/// is compatible and that both lie in the largest compatible set.
pub fn check_union_closure(pairs: u64, n: usize, seed: u64) -> UnionClosureReport {
    let dims = [n; 3];
    let results: Vec<(bool, bool, String)> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let rods = voxels(dims, random_rods(&mut rng, n));
            let s = shadows_of(&rods, dims);
            let res = largest_compatible(&s[0], &s[1], &s[2]).expect("consistent sizes");
            let largest = res.largest.expect("a set's own shadows are compatible with it");
            let a = random_compatible_subset(&mut rng, &largest);
            let b = random_compatible_subset(&mut rng, &largest);
            let union = voxels(dims, a.cells().union(b.cells()).cloned().collect());
            let union_ok = shadows_of(&union, dims) == s;
            let maximal_ok = [&a, &b, &rods]
                .iter()
                .all(|x| x.cells().is_subset(largest.cells()));
            let mut note = String::new();
            if !(union_ok && maximal_ok) {
                write!(note, "sample {i}: union {union_ok}, maximality {maximal_ok}").unwrap();
            }
            (union_ok, maximal_ok, note)
        })
        .collect();
    let mut report = UnionClosureReport {
        pairs,
        seed,
        size: n,
        ..Default::default()
    };
    for (u, m, note) in results {
        report.union_violations += u64::from(!u);
        report.maximality_violations += u64::from(!m);
        if !note.is_empty() && report.examples.len() < 10 {
            report.examples.push(note);
        }
    }
    report
}
