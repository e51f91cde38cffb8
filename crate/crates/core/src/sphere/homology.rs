//! Betti numbers over GF(2) of a voxel set.
//!
//! The complex lives on voxel centres: voxels are vertices, two voxels one
//! unit step apart span an edge, and a unit k-cube is present when all of its
//! 2^k corner voxels are. Its 1-skeleton is the face-adjacency graph, so b_0
//! counts face-connected components.
//!
//! Cells are keyed on the doubled lattice: voxel `c` is `2c`, and a k-cube
//! has k odd coordinates. Boundary matrices are reduced column by column; a
//! column whose cell already served as a pivot one dimension up is known to
//! reduce to zero and is skipped.

use std::collections::{HashMap, HashSet};

use super::{SphereError, VoxelSet};

/// Default cap on the number of cells in the complex.
pub const DEFAULT_CELL_CAP: usize = 20_000_000;

/// `(b_0, ..., b_{n-1})` for an n-dimensional voxel set.
pub fn betti(v: &VoxelSet) -> Result<Vec<usize>, SphereError> {
    betti_with_cap(v, DEFAULT_CELL_CAP)
}

fn xor_into(col: &mut Vec<u32>, other: &[u32]) {
    let mut out = Vec::with_capacity(col.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < col.len() && j < other.len() {
        match col[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                out.push(col[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&col[i..]);
    out.extend_from_slice(&other[j..]);
    *col = out;
}

pub fn betti_with_cap(v: &VoxelSet, cap: usize) -> Result<Vec<usize>, SphereError> {
    let n = v.dim();
    if v.is_empty() {
        return Ok(vec![0; n]);
    }
    let span = v
        .bounds()
        .iter()
        .map(|&(lo, hi)| (2 * (hi - lo) + 3) as u64)
        .max()
        .unwrap();
    let bits = 64 - span.leading_zeros();
    if bits as usize * n > 64 {
        return Err(SphereError::TooLarge {
            cells: v.len(),
            cap,
        });
    }
    let lows: Vec<i64> = v.bounds().iter().map(|&(lo, _)| lo).collect();
    let unit = |k: usize| 1u64 << (k as u32 * bits);
    let odd = |key: u64, k: usize| (key >> (k as u32 * bits)) & 1 == 1;

    // by_dim[j] holds the j-cubes; a cube is generated once, from its face
    // without its highest odd axis.
    let mut by_dim: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    by_dim[0] = v
        .cells()
        .iter()
        .map(|c| {
            c.iter()
                .zip(&lows)
                .enumerate()
                .fold(0u64, |acc, (k, (x, lo))| acc | (((2 * (x - lo)) as u64) << (k as u32 * bits)))
        })
        .collect();
    let mut total = by_dim[0].len();
    for j in 1..=n {
        let present: HashSet<u64> = by_dim[j - 1].iter().copied().collect();
        let mut next = Vec::new();
        for &key in &by_dim[j - 1] {
            let first = (0..n).rev().find(|&k| odd(key, k)).map_or(0, |k| k + 1);
            for k in first..n {
                if present.contains(&(key + 2 * unit(k))) {
                    next.push(key + unit(k));
                }
            }
        }
        next.sort_unstable();
        total += next.len();
        if total > cap {
            return Err(SphereError::TooLarge { cells: total, cap });
        }
        by_dim[j] = next;
    }
    let index: Vec<HashMap<u64, u32>> = by_dim
        .iter()
        .map(|ks| ks.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect())
        .collect();

    let mut rank = vec![0usize; n + 2];
    let mut cleared: Vec<bool> = Vec::new();
    for k in (1..=n).rev() {
        let rows = &index[k - 1];
        let mut pivot_col: Vec<u32> = vec![u32::MAX; by_dim[k - 1].len()];
        let mut reduced: Vec<Vec<u32>> = Vec::new();
        let mut next_cleared = vec![false; by_dim[k - 1].len()];
        for (j, &key) in by_dim[k].iter().enumerate() {
            if cleared.get(j).copied().unwrap_or(false) {
                continue;
            }
            let mut col: Vec<u32> = Vec::with_capacity(2 * k);
            for axis in 0..n {
                if odd(key, axis) {
                    col.push(rows[&(key - unit(axis))]);
                    col.push(rows[&(key + unit(axis))]);
                }
            }
            col.sort_unstable();
            while let Some(&low) = col.last() {
                let p = pivot_col[low as usize];
                if p == u32::MAX {
                    break;
                }
                xor_into(&mut col, &reduced[p as usize]);
            }
            if let Some(&low) = col.last() {
                pivot_col[low as usize] = reduced.len() as u32;
                next_cleared[low as usize] = true;
                reduced.push(col);
                rank[k] += 1;
            }
        }
        cleared = next_cleared;
    }
    Ok((0..n)
        .map(|k| by_dim[k].len() - rank[k] - rank[k + 1])
        .collect())
}
