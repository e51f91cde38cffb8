use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::raster::{supercover_segment, supercover_simplex};
use super::{SphereError, VoxelSet};
use crate::arrangement::{classify, shadow_complex, Classification};
use crate::curve::{parse_curve, PolyChain};
use crate::rational::Rational;

const RICKARD: &str = include_str!("../../data/tree_shadow_cycle.curve");

/// The base cycle S_1 of the suspension-scaling spheres
/// `S_{k+1} = U_{l in [-1, 1]} (1 - |l|) S_k x {l}`, together with the
/// index `d` of the sphere whose suspension gets built.
///
/// The base is translated so its first vertex is the origin. Its coordinates
/// keep their units, so a lattice base has unit-length lattice steps.
#[derive(Debug, Clone)]
pub struct SphereModel {
    d: usize,
    base: PolyChain,
}

impl SphereModel {
    pub fn new(base: &PolyChain, d: usize) -> Result<Self, SphereError> {
        if d == 0 {
            return Err(SphereError::UnsupportedDimension(0));
        }
        if !base.is_closed() || base.dim() != 3 {
            return Err(SphereError::InvalidBase("need a closed curve in R^3".into()));
        }
        let shift: Vec<Rational> = base.vertices()[0].coords().iter().map(|x| -x).collect();
        let moved = base.vertices().iter().map(|p| p.translate(&shift)).collect();
        let base = PolyChain::new(moved, true).map_err(|e| SphereError::InvalidBase(e.to_string()))?;
        for axis in 1..=3 {
            let cx = shadow_complex(&base, axis).map_err(|e| SphereError::InvalidBase(e.to_string()))?;
            let class = classify(&cx).classification;
            if class != Classification::Tree {
                return Err(SphereError::InvalidBase(format!(
                    "x{axis}-shadow is {}, not a tree",
                    class.name()
                )));
            }
        }
        Ok(SphereModel { d, base })
    }

    /// The shipped tree-shadow cycle.
    pub fn rickard(d: usize) -> Self {
        let chain = parse_curve(RICKARD).expect("shipped curve parses");
        SphereModel::new(&chain, d).expect("shipped curve has tree shadows")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn base(&self) -> &PolyChain {
        &self.base
    }
}

fn scaled(p: &[Rational], s: &Rational, extra: &[Rational]) -> Vec<Rational> {
    p.iter().map(|x| x * s).chain(extra.iter().cloned()).collect()
}

/// The triangles making up S_2 in R^4: the cone from `(0, 0, 0, +-1)` over
/// each base segment.
fn s2_triangles(base: &PolyChain) -> Vec<[Vec<Rational>; 3]> {
    let z = Rational::zero();
    let mut out = Vec::new();
    for (p, q) in base.segments() {
        for apex in [1, -1] {
            let mut top = vec![z.clone(); 3];
            top.push(Rational::from_int(apex));
            out.push([
                scaled(p.coords(), &Rational::one(), &[z.clone()]),
                scaled(q.coords(), &Rational::one(), &[z.clone()]),
                top,
            ]);
        }
    }
    out
}

/// Supercover of S_k in Z^{k+2} at resolution `r`, for k in 1..=3.
///
/// S_1 and S_2 are rasterized exactly: S_2 is a finite union of triangles.
/// S_3 stacks the scaled S_2 at the levels `j / r`, which is why its output
/// is checked for face-connectivity.
pub fn voxelize_sphere(model: &SphereModel, k: usize, r: u32) -> Result<VoxelSet, SphereError> {
    if r < 8 {
        return Err(SphereError::ResolutionTooCoarse {
            resolution: r,
            reason: "at least 8 cells per unit are needed".into(),
        });
    }
    let rr = Rational::from_int(r as i64);
    let cells: BTreeSet<Vec<i64>> = match k {
        1 => {
            let mut out = BTreeSet::new();
            for (p, q) in model.base.segments() {
                supercover_segment(&scaled(p.coords(), &rr, &[]), &scaled(q.coords(), &rr, &[]), &mut out);
            }
            out
        }
        2 => s2_triangles(&model.base)
            .par_iter()
            .map(|t| {
                let mut out = BTreeSet::new();
                let v: Vec<Vec<Rational>> = t.iter().map(|p| scaled(p, &rr, &[])).collect();
                supercover_simplex(&v, &mut out);
                out
            })
            .reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            }),
        3 => {
            let tris = s2_triangles(&model.base);
            let levels: Vec<i64> = (-(r as i64)..=r as i64).collect();
            let sets: Vec<BTreeSet<Vec<i64>>> = levels
                .par_iter()
                .map(|&j| {
                    let s = &Rational::from_int(r as i64 - j.abs()) * &Rational::one();
                    let mut out = BTreeSet::new();
                    for t in &tris {
                        let v: Vec<Vec<Rational>> =
                            t.iter().map(|p| scaled(p, &s, &[Rational::from_int(j)])).collect();
                        supercover_simplex(&v, &mut out);
                    }
                    out
                })
                .collect();
            sets.into_iter().flatten().collect()
        }
        _ => return Err(SphereError::UnsupportedDimension(k)),
    };
    let v = VoxelSet::new(k + 2, r, cells);
    if k == 3 && v.components().len() != 1 {
        return Err(SphereError::ResolutionTooCoarse {
            resolution: r,
            reason: "adjacent levels are not face-connected".into(),
        });
    }
    Ok(v)
}

/// Voxelized S_{d+1} in Z^{d+3} for the model's `d` (1 or 2).
pub fn build_sphere(model: &SphereModel, r: u32) -> Result<VoxelSet, SphereError> {
    if !(1..=2).contains(&model.d) {
        return Err(SphereError::UnsupportedDimension(model.d));
    }
    voxelize_sphere(model, model.d + 1, r)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct SliceLevel {
    pub axis: usize,
    pub level: i64,
    pub cells: usize,
    pub reference_cells: usize,
    pub symmetric_difference: usize,
    /// Cells of the difference farther than one step from the reference.
    pub far_cells: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct SliceScalingReport {
    pub levels: Vec<SliceLevel>,
    pub ok: bool,
}

fn near(cell: &[i64], reference: &BTreeSet<Vec<i64>>) -> bool {
    let n = cell.len();
    (0..3usize.pow(n as u32)).any(|code| {
        let mut r = code;
        let probe: Vec<i64> = cell
            .iter()
            .map(|&x| {
                let c = x + (r % 3) as i64 - 1;
                r /= 3;
                c
            })
            .collect();
        reference.contains(&probe)
    })
}

/// For each axis i <= k+1 of a voxelized S_{k+1} (k = model.d), compares the
/// slices of the x_i-shadow along its last axis with the supercover of
/// `pi_i(S_k)` scaled by `1 - |level| / r`.
pub fn check_slice_scaling(model: &SphereModel, sphere: &VoxelSet) -> Result<SliceScalingReport, SphereError> {
    let k = model.d;
    if k != 1 {
        return Err(SphereError::UnsupportedDimension(k));
    }
    let r = sphere.resolution() as i64;
    let mut levels = Vec::new();
    for axis in 1..=k + 2 {
        let shadow = sphere.shadow(axis)?;
        let last = shadow.dim();
        for level in -r..=r {
            let got = match shadow.slice(last, level) {
                Ok(v) => v.cells().clone(),
                Err(SphereError::EmptySlice { .. }) => BTreeSet::new(),
                Err(e) => return Err(e),
            };
            let s = Rational::from_int(r - level.abs());
            let mut want = BTreeSet::new();
            for (p, q) in model.base.segments() {
                let (p, q) = (p.drop_axis(axis), q.drop_axis(axis));
                supercover_segment(&scaled(p.coords(), &s, &[]), &scaled(q.coords(), &s, &[]), &mut want);
            }
            let diff: Vec<&Vec<i64>> = got.symmetric_difference(&want).collect();
            let far = diff.iter().filter(|c| !near(c, &want)).count();
            levels.push(SliceLevel {
                axis,
                level,
                cells: got.len(),
                reference_cells: want.len(),
                symmetric_difference: diff.len(),
                far_cells: far,
            });
        }
    }
    let ok = levels.iter().all(|l| l.far_cells == 0);
    Ok(SliceScalingReport { levels, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Point;

    #[test]
    fn model_is_normalized() {
        let m = SphereModel::rickard(1);
        assert_eq!(m.base().vertices()[0], Point::origin(3));
        assert_eq!(m.base().vertices()[1], Point::from_ints(&[0, 1, 0]));
    }

    #[test]
    fn rejects_non_tree_base() {
        let square = parse_curve("closed\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n").unwrap();
        assert!(matches!(SphereModel::new(&square, 1), Err(SphereError::InvalidBase(_))));
        let m = SphereModel::rickard(3);
        assert!(matches!(build_sphere(&m, 16), Err(SphereError::UnsupportedDimension(3))));
        let m = SphereModel::rickard(1);
        assert!(matches!(build_sphere(&m, 4), Err(SphereError::ResolutionTooCoarse { .. })));
    }

    #[test]
    fn levels_of_s2() {
        let m = SphereModel::rickard(1);
        let s1 = voxelize_sphere(&m, 1, 8).unwrap();
        let s2 = build_sphere(&m, 8).unwrap();
        assert_eq!(s2.dim(), 4);
        // Level 0 holds S_1 plus the slightly shrunk copies from
        // |l| <= 1/(2r), which sit within one cell of it.
        assert!(s2.slice(4, 0).unwrap().cells().is_superset(s1.cells()));
        let report = check_slice_scaling(&m, &s2).unwrap();
        assert!(report.ok);
        assert_eq!(report.levels.len(), 3 * 17);
        // The top level is within a cell of the apex.
        let top = s2.slice(4, 8).unwrap();
        assert!(top.contains(&[0, 0, 0]));
        assert!(top.cells().iter().all(|c| c.iter().all(|x| x.abs() <= 1)));
        for axis in 1..=4 {
            assert_eq!(crate::sphere::betti(&s2.shadow(axis).unwrap()).unwrap(), vec![1, 0, 0]);
        }
        assert_eq!(s2.components().len(), 1);
    }
}
