//! Independent Betti oracle: cubes as (anchor, axis mask) pairs and dense
//! bit-row Gaussian elimination over GF(2).

use std::collections::{BTreeMap, BTreeSet};

type Cell = (Vec<i64>, u32);

fn rank(rows: Vec<Vec<u64>>) -> usize {
    let mut rows = rows;
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for col in 0..width {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Unit cubes spanned by voxel centres: `(anchor, mask)` is present when
/// every corner `anchor + subset(mask)` is a voxel.
pub fn betti_oracle(dim: usize, voxels: &BTreeSet<Vec<i64>>) -> Vec<usize> {
    let full = (1u32 << dim) - 1;
    let mut cells: BTreeSet<Cell> = BTreeSet::new();
    for v in voxels {
        for mask in 0..=full {
            let corners_present = (0..=full).filter(|s| s & !mask == 0).all(|s| {
                let corner: Vec<i64> = (0..dim).map(|k| v[k] + ((s >> k) & 1) as i64).collect();
                voxels.contains(&corner)
            });
            if corners_present {
                cells.insert((v.clone(), mask));
            }
        }
    }
    let mut by_dim: Vec<Vec<Cell>> = vec![Vec::new(); dim + 1];
    for c in cells {
        by_dim[c.1.count_ones() as usize].push(c);
    }
    let index: Vec<BTreeMap<Cell, usize>> = by_dim
        .iter()
        .map(|cs| cs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let mut ranks = vec![0usize; dim + 2];
    for k in 1..=dim {
        let words = by_dim[k - 1].len().div_ceil(64);
        let rows: Vec<Vec<u64>> = by_dim[k]
            .iter()
            .map(|(a, m)| {
                let mut row = vec![0u64; words];
                for axis in 0..dim {
                    if m & (1 << axis) != 0 {
                        let sub = m & !(1 << axis);
                        let mut hi = a.clone();
                        hi[axis] += 1;
                        for face in [(a.clone(), sub), (hi, sub)] {
                            let i = index[k - 1][&face];
                            row[i / 64] ^= 1 << (i % 64);
                        }
                    }
                }
                row
            })
            .collect();
        ranks[k] = rank(rows);
    }
    (0..dim)
        .map(|k| by_dim[k].len() - ranks[k] - ranks[k + 1])
        .collect()
}
