use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write;

use super::SphereError;

/// A finite set of lattice cells in Z^n at `resolution` cells per unit. Cell
/// `c` stands for the closed cube of side 1/r centred at `c / r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoxelSet {
    dim: usize,
    resolution: u32,
    bounds: Vec<(i64, i64)>,
    cells: BTreeSet<Vec<i64>>,
}

impl VoxelSet {
    /// Cells with bounds set to their bounding box (`(0, -1)` per axis when
    /// empty).
    pub fn new(dim: usize, resolution: u32, cells: BTreeSet<Vec<i64>>) -> Self {
        let bounds = (0..dim)
            .map(|k| {
                let lo = cells.iter().map(|c| c[k]).min();
                let hi = cells.iter().map(|c| c[k]).max();
                match (lo, hi) {
                    (Some(lo), Some(hi)) => (lo, hi),
                    _ => (0, -1),
                }
            })
            .collect();
        VoxelSet {
            dim,
            resolution,
            bounds,
            cells,
        }
    }

    pub fn with_bounds(
        dim: usize,
        resolution: u32,
        bounds: Vec<(i64, i64)>,
        cells: BTreeSet<Vec<i64>>,
    ) -> Result<Self, SphereError> {
        for c in &cells {
            if c.len() != dim || c.iter().zip(&bounds).any(|(&x, &(lo, hi))| x < lo || x > hi) {
                return Err(SphereError::OutOfBounds(c.clone()));
            }
        }
        Ok(VoxelSet {
            dim,
            resolution,
            bounds,
            cells,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn bounds(&self) -> &[(i64, i64)] {
        &self.bounds
    }

    pub fn cells(&self) -> &BTreeSet<Vec<i64>> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: &[i64]) -> bool {
        self.cells.contains(cell)
    }

    fn check_axis(&self, axis: usize) -> Result<(), SphereError> {
        if axis == 0 || axis > self.dim {
            return Err(SphereError::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// Image under dropping coordinate `axis` (1-based).
    pub fn shadow(&self, axis: usize) -> Result<VoxelSet, SphereError> {
        self.check_axis(axis)?;
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.remove(axis - 1);
                c
            })
            .collect();
        let mut bounds = self.bounds.clone();
        bounds.remove(axis - 1);
        Ok(VoxelSet {
            dim: self.dim - 1,
            resolution: self.resolution,
            bounds,
            cells,
        })
    }

    /// Cells with coordinate `axis` equal to `value`, that coordinate dropped.
    pub fn slice(&self, axis: usize, value: i64) -> Result<VoxelSet, SphereError> {
        self.check_axis(axis)?;
        let (lo, hi) = self.bounds[axis - 1];
        if value < lo || value > hi {
            return Err(SphereError::SliceOutOfBounds {
                axis,
                value,
                lo,
                hi,
            });
        }
        let cells: BTreeSet<Vec<i64>> = self
            .cells
            .iter()
            .filter(|c| c[axis - 1] == value)
            .map(|c| {
                let mut c = c.clone();
                c.remove(axis - 1);
                c
            })
            .collect();
        if cells.is_empty() {
            return Err(SphereError::EmptySlice { axis, value });
        }
        let mut bounds = self.bounds.clone();
        bounds.remove(axis - 1);
        Ok(VoxelSet {
            dim: self.dim - 1,
            resolution: self.resolution,
            bounds,
            cells,
        })
    }

    /// Connected components under face adjacency (one unit step along one
    /// axis), each sorted, in order of their least cell.
    pub fn components(&self) -> Vec<Vec<Vec<i64>>> {
        let mut seen: BTreeSet<&Vec<i64>> = BTreeSet::new();
        let mut out = Vec::new();
        for start in &self.cells {
            if seen.contains(start) {
                continue;
            }
            let mut comp = vec![start.clone()];
            seen.insert(start);
            let mut queue = VecDeque::from([start.clone()]);
            while let Some(c) = queue.pop_front() {
                for k in 0..self.dim {
                    for step in [-1, 1] {
                        let mut n = c.clone();
                        n[k] += step;
                        if let Some(found) = self.cells.get(&n) {
                            if seen.insert(found) {
                                comp.push(n.clone());
                                queue.push_back(n);
                            }
                        }
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// Voxel file text: `dim r`, the bounds as `lo hi` pairs, one cell per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim, self.resolution);
        let b: Vec<String> = self
            .bounds
            .iter()
            .map(|(lo, hi)| format!("{lo} {hi}"))
            .collect();
        s.push_str(&b.join(" "));
        s.push('\n');
        for c in &self.cells {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            writeln!(s, "{}", parts.join(" ")).unwrap();
        }
        s
    }
}

fn ints(line: &str, lineno: usize) -> Result<Vec<i64>, SphereError> {
    line.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| SphereError::Parse {
                line: lineno,
                message: format!("expected an integer, found {t:?}"),
            })
        })
        .collect()
}

/// Parses the voxel file format written by [`VoxelSet::to_text`]. Blank
/// lines and `#` comments are ignored.
pub fn parse_voxels(text: &str) -> Result<VoxelSet, SphereError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line, message: &str| SphereError::Parse {
        line,
        message: message.to_string(),
    };
    let (n1, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let head = ints(header, n1)?;
    if head.len() != 2 || head[0] < 1 || head[1] < 1 {
        return Err(err(n1, "header must be `dim resolution` with positive values"));
    }
    let dim = head[0] as usize;
    let resolution = u32::try_from(head[1]).map_err(|_| err(n1, "resolution too large"))?;
    let (n2, bline) = lines.next().ok_or_else(|| err(n1 + 1, "missing bounds line"))?;
    let b = ints(bline, n2)?;
    if b.len() != 2 * dim {
        return Err(err(n2, &format!("expected {} bound values", 2 * dim)));
    }
    let bounds: Vec<(i64, i64)> = b.chunks(2).map(|p| (p[0], p[1])).collect();
    let mut cells = BTreeSet::new();
    for (n, l) in lines {
        let c = ints(l, n)?;
        if c.len() != dim {
            return Err(err(n, &format!("expected {dim} coordinates")));
        }
        if c.iter().zip(&bounds).any(|(&x, &(lo, hi))| x < lo || x > hi) {
            return Err(err(n, "cell outside the declared bounds"));
        }
        cells.insert(c);
    }
    VoxelSet::with_bounds(dim, resolution, bounds, cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(cells: &[&[i64]]) -> VoxelSet {
        VoxelSet::new(cells[0].len(), 1, cells.iter().map(|c| c.to_vec()).collect())
    }

    #[test]
    fn shadow_and_slice() {
        let v = set(&[&[0, 0, 0]]);
        assert_eq!(v.shadow(2).unwrap().cells().len(), 1);
        assert_eq!(v.slice(1, 0).unwrap().cells().iter().next().unwrap(), &vec![0, 0]);
        let w = set(&[&[0, 0], &[2, 0]]);
        assert_eq!(w.slice(1, 1), Err(SphereError::EmptySlice { axis: 1, value: 1 }));
        assert!(matches!(w.slice(1, 5), Err(SphereError::SliceOutOfBounds { .. })));
        assert!(matches!(w.shadow(3), Err(SphereError::AxisOutOfRange { .. })));
        assert_eq!(w.components().len(), 2);
    }

    #[test]
    fn text_round_trip() {
        let v = set(&[&[0, 1, -2], &[3, 0, 0]]);
        let back = parse_voxels(&v.to_text()).unwrap();
        assert_eq!(back, v);
        assert!(matches!(
            parse_voxels("2 4\n0 1 0 1\n0 5\n"),
            Err(SphereError::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_voxels("2 4\n0 1\n"), Err(SphereError::Parse { line: 2, .. })));
    }
}
