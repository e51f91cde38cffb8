//! Explicit deformation retractions F_{d,i} of the shadows pi_i(S_d) onto
//! the origin, evaluated in exact arithmetic.
//!
//! The base case flows each point of a tree shadow of S_1 along the tree
//! towards the origin, covering the fraction `l` of its tree distance (edge
//! lengths measured in L1). Higher shadows either shrink linearly (the cone
//! axis i = d+2) or retract every x_{d+1}-slice with F_{d-1,i} and then pull
//! the result down to the origin.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::model::{voxelize_sphere, SphereModel};
use super::raster::supercover_simplex;
use super::{SphereError, VoxelSet};
use crate::arrangement::{adjacency, shadow_complex};
use crate::curve::{Point, PolyChain};
use crate::geom::on_segment;
use crate::rational::Rational;
use crate::theorem_lab::sample_rng;

/// A tree shadow of the base cycle, rooted at the origin.
#[derive(Debug, Clone)]
struct FlowTree {
    vertices: Vec<Point>,
    edges: Vec<(usize, usize)>,
    parent: Vec<Option<usize>>,
    dist: Vec<Rational>,
}

impl FlowTree {
    fn new(base: &PolyChain, axis: usize) -> Result<Self, SphereError> {
        let cx = shadow_complex(base, axis).map_err(|e| SphereError::InvalidBase(e.to_string()))?;
        let mut vertices = cx.vertices.clone();
        let mut edges = cx.edges.clone();
        let origin = Point::origin(2);
        let root = match vertices.iter().position(|v| *v == origin) {
            Some(r) => r,
            None => {
                let k = edges
                    .iter()
                    .position(|&(a, b)| on_segment(&vertices[a], &vertices[b], &origin))
                    .ok_or_else(|| SphereError::InvalidBase("shadow misses the origin".into()))?;
                let (a, b) = edges.swap_remove(k);
                vertices.push(origin);
                let r = vertices.len() - 1;
                edges.push((a, r));
                edges.push((r, b));
                r
            }
        };
        let tree = crate::arrangement::OneComplex {
            vertices: vertices.clone(),
            edges: edges.clone(),
            isolated: Vec::new(),
        };
        let adj = adjacency(&tree);
        let mut parent = vec![None; vertices.len()];
        let mut dist = vec![Rational::zero(); vertices.len()];
        let mut seen = vec![false; vertices.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    dist[w] = &dist[v] + &vertices[v].l1_dist(&vertices[w]);
                    queue.push_back(w);
                }
            }
        }
        Ok(FlowTree {
            vertices,
            edges,
            parent,
            dist,
        })
    }

    /// The vertex next towards the root from `x`, and the tree distance of
    /// `x`; `None` when `x` is not on the tree.
    fn locate(&self, x: &Point) -> Option<(Option<usize>, Rational)> {
        if let Some(v) = self.vertices.iter().position(|v| v == x) {
            return Some((self.parent[v], self.dist[v].clone()));
        }
        let &(a, b) = self
            .edges
            .iter()
            .find(|&&(a, b)| on_segment(&self.vertices[a], &self.vertices[b], x))?;
        let next = if self.parent[a] == Some(b) { b } else { a };
        Some((Some(next), &self.dist[next] + &self.vertices[next].l1_dist(x)))
    }

    fn flow(&self, x: &Point, lambda: &Rational) -> Option<Point> {
        let (mut next, mut d) = self.locate(x)?;
        let target = &(&Rational::one() - lambda) * &d;
        let mut p = x.clone();
        while let Some(v) = next {
            if self.dist[v] <= target {
                if d == self.dist[v] {
                    return Some(p);
                }
                let t = &(&target - &self.dist[v]) / &(&d - &self.dist[v]);
                let q = &self.vertices[v];
                let coords = q.coords().iter().zip(p.coords()).map(|(a, b)| a + &(&t * &(b - a)));
                return Some(Point::new(coords.collect()));
            }
            p = self.vertices[v].clone();
            d = self.dist[v].clone();
            next = self.parent[v];
        }
        Some(p)
    }
}

/// Evaluates F_{d,i}: pi_i(S_d) x [0, 1] -> pi_i(S_d) for the shadows of the
/// suspension-scaling spheres over a model's base cycle.
#[derive(Debug, Clone)]
pub struct RetractionEvaluator {
    d: usize,
    axis: usize,
    base: PolyChain,
    trees: Vec<FlowTree>,
}

fn split_last(x: &Point) -> (Point, Rational) {
    let c = x.coords();
    (Point::new(c[..c.len() - 1].to_vec()), c[c.len() - 1].clone())
}

/// Whether `x` is in the triangle `0 p q` of R^3.
fn in_cone_triangle(x: &Point, p: &Point, q: &Point) -> bool {
    let o = Point::origin(3);
    let (p, q, xc) = (p.coords(), q.coords(), x.coords());
    let cross = [
        &(&p[1] * &q[2]) - &(&p[2] * &q[1]),
        &(&p[2] * &q[0]) - &(&p[0] * &q[2]),
        &(&p[0] * &q[1]) - &(&p[1] * &q[0]),
    ];
    if cross.iter().all(Rational::is_zero) {
        let (pp, qq) = (Point::new(p.to_vec()), Point::new(q.to_vec()));
        return on_segment(&o, &pp, x) || on_segment(&o, &qq, x) || on_segment(&pp, &qq, x);
    }
    let dot = |u: &[Rational], v: &[Rational]| u.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| &acc + &(a * b));
    if !dot(xc, &cross).is_zero() {
        return false;
    }
    // Solve x = a p + b q from the Gram system.
    let (pp, pq, qq) = (dot(p, p), dot(p, q), dot(q, q));
    let (xp, xq) = (dot(xc, p), dot(xc, q));
    let det = &(&pp * &qq) - &(&pq * &pq);
    let a = &(&(&xp * &qq) - &(&xq * &pq)) / &det;
    let b = &(&(&xq * &pp) - &(&xp * &pq)) / &det;
    !a.is_negative() && !b.is_negative() && &a + &b <= Rational::one()
}

impl RetractionEvaluator {
    /// The evaluator for the x_axis-shadow of S_d, axis in 1..=d+2.
    pub fn new(model: &SphereModel, d: usize, axis: usize) -> Result<Self, SphereError> {
        if d == 0 {
            return Err(SphereError::UnsupportedDimension(0));
        }
        if !(1..=d + 2).contains(&axis) {
            return Err(SphereError::AxisOutOfRange { axis, dim: d + 2 });
        }
        let trees = (1..=3)
            .map(|k| FlowTree::new(model.base(), k))
            .collect::<Result<_, _>>()?;
        Ok(RetractionEvaluator {
            d,
            axis,
            base: model.base().clone(),
            trees,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    /// Exact membership of `x` in pi_i(S_d).
    pub fn contains(&self, x: &Point) -> bool {
        x.dim() == self.d + 1 && self.in_shadow(self.d, x)
    }

    fn in_shadow(&self, d: usize, x: &Point) -> bool {
        if d == 1 && self.axis <= 3 {
            return self.trees[self.axis - 1].locate(x).is_some();
        }
        if self.axis == d + 2 {
            return self.in_cone(d - 1, x);
        }
        let (y, mu) = split_last(x);
        let s = &Rational::one() - &mu.abs();
        if s.is_negative() {
            return false;
        }
        if s.is_zero() {
            return y.coords().iter().all(Rational::is_zero);
        }
        self.in_shadow(d - 1, &y.scale(&s.recip()))
    }

    /// Membership in the union of t * S_k over t in [0, 1].
    fn in_cone(&self, k: usize, x: &Point) -> bool {
        if k == 1 {
            return self.base.segments().iter().any(|(p, q)| in_cone_triangle(x, p, q));
        }
        let (y, w) = split_last(x);
        let s = &Rational::one() - &w.abs();
        if s.is_negative() {
            return false;
        }
        if s.is_zero() {
            return y.coords().iter().all(Rational::is_zero);
        }
        self.in_cone(k - 1, &y.scale(&s.recip()))
    }

    /// F_{d,i}(x, lambda).
    pub fn eval(&self, x: &Point, lambda: &Rational) -> Result<Point, SphereError> {
        if lambda.is_negative() || *lambda > Rational::one() {
            return Err(SphereError::ParameterOutOfRange(lambda.to_string()));
        }
        if !self.contains(x) {
            return Err(SphereError::OutsideShadow(format!("{x:?}")));
        }
        Ok(self.f(self.d, x, lambda))
    }

    /// F'(x, lambda) on pi_i(S_d), for axis <= d+1 and d >= 2.
    pub fn eval_prime(&self, x: &Point, lambda: &Rational) -> Result<Point, SphereError> {
        if self.d < 2 || self.axis > self.d + 1 {
            return Err(SphereError::AxisOutOfRange {
                axis: self.axis,
                dim: self.d + 1,
            });
        }
        if !self.contains(x) {
            return Err(SphereError::OutsideShadow(format!("{x:?}")));
        }
        Ok(self.f_prime(self.d, x, lambda))
    }

    fn f(&self, d: usize, x: &Point, lambda: &Rational) -> Point {
        if d == 1 && self.axis <= 3 {
            return self.trees[self.axis - 1]
                .flow(x, lambda)
                .expect("point lies on the tree");
        }
        if self.axis == d + 2 {
            return x.scale(&(&Rational::one() - lambda));
        }
        let half = Rational::new(1, 2);
        if *lambda < half {
            self.f_prime(d, x, &(lambda * &Rational::from_int(2)))
        } else {
            let top = self.f_prime(d, x, &Rational::one());
            top.scale(&(&Rational::from_int(2) - &(lambda * &Rational::from_int(2))))
        }
    }

    fn f_prime(&self, d: usize, x: &Point, lambda: &Rational) -> Point {
        let (y, mu) = split_last(x);
        let s = &Rational::one() - &mu.abs();
        if s.is_zero() {
            return x.clone();
        }
        let inner = self.f(d - 1, &y.scale(&s.recip()), lambda);
        inner.scale(&s).extend(mu)
    }
}

/// Random choices behind a sampled point, replayable with small shifts of
/// the continuous parameters.
struct Recipe<'a> {
    rng: Option<&'a mut ChaCha8Rng>,
    picks: Vec<usize>,
    params: Vec<Rational>,
    cursor: (usize, usize),
    shift: Rational,
}

impl Recipe<'_> {
    fn pick(&mut self, n: usize) -> usize {
        if let Some(rng) = self.rng.as_deref_mut() {
            let k = rng.gen_range(0..n);
            self.picks.push(k);
            return k;
        }
        self.cursor.0 += 1;
        self.picks[self.cursor.0 - 1]
    }

    /// A parameter in [lo, 1]; `lo` is 0 or -1.
    fn param(&mut self, lo: i64) -> Rational {
        if let Some(rng) = self.rng.as_deref_mut() {
            let den = rng.gen_range(1..=16);
            let v = Rational::new(rng.gen_range(lo * den..=den), den);
            self.params.push(v.clone());
            return v;
        }
        self.cursor.1 += 1;
        let v = &self.params[self.cursor.1 - 1] + &self.shift;
        v.min(Rational::one()).max(Rational::from_int(lo))
    }
}

impl RetractionEvaluator {
    fn sample_full(&self, k: usize, rec: &mut Recipe) -> Point {
        if k == 1 {
            let (p, q) = self.base.segment(rec.pick(self.base.segment_count()));
            let t = rec.param(0);
            let c = p.coords().iter().zip(q.coords()).map(|(a, b)| a + &(&t * &(b - a)));
            return Point::new(c.collect());
        }
        let mu = rec.param(-1);
        self.sample_full(k - 1, rec)
            .scale(&(&Rational::one() - &mu.abs()))
            .extend(mu)
    }

    fn sample_shadow(&self, d: usize, rec: &mut Recipe) -> Point {
        if d == 1 && self.axis <= 3 {
            let tree = &self.trees[self.axis - 1];
            let (a, b) = tree.edges[rec.pick(tree.edges.len())];
            let t = rec.param(0);
            let (p, q) = (&tree.vertices[a], &tree.vertices[b]);
            let c = p.coords().iter().zip(q.coords()).map(|(a, b)| a + &(&t * &(b - a)));
            return Point::new(c.collect());
        }
        if self.axis == d + 2 {
            let t = rec.param(0);
            return self.sample_full(d - 1, rec).scale(&t);
        }
        // One sample in eight sits on a pole of the outermost suspension.
        let mu = if d == self.d && rec.pick(8) == 0 {
            Rational::from_int(if rec.pick(2) == 0 { 1 } else { -1 })
        } else {
            rec.param(-1)
        };
        self.sample_shadow(d - 1, rec)
            .scale(&(&Rational::one() - &mu.abs()))
            .extend(mu)
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct RetractionReport {
    pub d: usize,
    pub axis: usize,
    pub samples: usize,
    pub seed: u64,
    pub endpoint_violations: usize,
    pub boundary_checks: usize,
    pub boundary_violations: usize,
    pub fixed_point_checks: usize,
    pub fixed_point_violations: usize,
    pub containment_violations: usize,
    /// Resolution of the voxel containment check; absent for d >= 3.
    pub voxel_resolution: Option<u32>,
    pub voxel_violations: usize,
    /// Largest observed |F(x, l) - F(x', l)| / |x - x'| (max norm).
    pub lipschitz_estimate: f64,
    pub violations: Vec<String>,
}

impl RetractionReport {
    pub fn violation_count(&self) -> usize {
        self.endpoint_violations
            + self.boundary_violations
            + self.fixed_point_violations
            + self.containment_violations
            + self.voxel_violations
    }

    pub fn ok(&self) -> bool {
        self.violation_count() == 0
    }
}

#[derive(Default)]
struct SampleOutcome {
    endpoint: bool,
    boundary: Option<bool>,
    fixed_point: Option<bool>,
    contained: bool,
    voxel: Option<bool>,
    ratio: f64,
    note: Option<String>,
}

/// Checks the retraction on `samples` seeded random pairs (x, l): exact
/// endpoint identities, exact agreement of the two branches at l = 1/2, the
/// fixed-point branch on the poles, exact containment of F(x, l) in the
/// shadow, and containment of its supercover in the voxelized shadow at
/// resolution `ceil(1 / tol)` (for d <= 2).
pub fn verify_retraction(
    model: &SphereModel,
    ev: &RetractionEvaluator,
    samples: usize,
    seed: u64,
    tol: &Rational,
) -> Result<RetractionReport, SphereError> {
    if tol.signum() <= 0 {
        return Err(SphereError::ParameterOutOfRange(tol.to_string()));
    }
    let r = (-(-tol.recip()).floor_i64().unwrap_or(i64::MIN)).max(8) as u32;
    let voxels: Option<VoxelSet> = if ev.d <= 2 {
        Some(voxelize_sphere(model, ev.d, r)?.shadow(ev.axis)?)
    } else {
        None
    };
    let rr = Rational::from_int(r as i64);
    let zero = Point::origin(ev.d + 1);
    let outcomes: Vec<SampleOutcome> = (0..samples as u64)
        .into_par_iter()
        .map(|index| {
            let mut rng = sample_rng(seed, index);
            let mut rec = Recipe {
                rng: Some(&mut rng),
                picks: Vec::new(),
                params: Vec::new(),
                cursor: (0, 0),
                shift: Rational::zero(),
            };
            let x = ev.sample_shadow(ev.d, &mut rec);
            let (picks, params) = (rec.picks, rec.params);
            let den = rng.gen_range(1..=32);
            let lambda = Rational::new(rng.gen_range(0..=den), den);
            let mut out = SampleOutcome::default();
            debug_assert!(ev.contains(&x));

            out.endpoint = ev.f(ev.d, &x, &Rational::zero()) == x && ev.f(ev.d, &x, &Rational::one()) == zero;
            if !out.endpoint {
                out.note = Some(format!("endpoint identity fails at {x:?}"));
            }
            if ev.d >= 2 && ev.axis <= ev.d + 1 {
                let half = Rational::new(1, 2);
                let lower = ev.f_prime(ev.d, &x, &(&half * &Rational::from_int(2)));
                let upper = ev
                    .f_prime(ev.d, &x, &Rational::one())
                    .scale(&(&Rational::from_int(2) - &(&half * &Rational::from_int(2))));
                out.boundary = Some(lower == upper && ev.f(ev.d, &x, &half) == upper);
                let (_, mu) = split_last(&x);
                if mu.abs() == Rational::one() {
                    out.fixed_point = Some(ev.f_prime(ev.d, &x, &lambda) == x);
                }
            }
            let y = ev.f(ev.d, &x, &lambda);
            out.contained = ev.contains(&y);
            if !out.contained {
                out.note = Some(format!("F({x:?}, {lambda}) = {y:?} leaves the shadow"));
            }
            if let Some(v) = &voxels {
                let mut cells = BTreeSet::new();
                supercover_simplex(&[y.scale(&rr).into_coords()], &mut cells);
                out.voxel = Some(cells.iter().all(|c| v.contains(c)));
            }

            let mut replay = Recipe {
                rng: None,
                picks,
                params,
                cursor: (0, 0),
                shift: Rational::new(1, 256),
            };
            let x2 = ev.sample_shadow(ev.d, &mut replay);
            let dx = x.linf_dist(&x2);
            if !dx.is_zero() && ev.contains(&x2) {
                let dy = y.linf_dist(&ev.f(ev.d, &x2, &lambda));
                out.ratio = (&dy / &dx).to_f64();
            }
            out
        })
        .collect();

    let mut report = RetractionReport {
        d: ev.d,
        axis: ev.axis,
        samples,
        seed,
        voxel_resolution: voxels.as_ref().map(|_| r),
        ..Default::default()
    };
    for o in outcomes {
        report.endpoint_violations += usize::from(!o.endpoint);
        if let Some(ok) = o.boundary {
            report.boundary_checks += 1;
            report.boundary_violations += usize::from(!ok);
        }
        if let Some(ok) = o.fixed_point {
            report.fixed_point_checks += 1;
            report.fixed_point_violations += usize::from(!ok);
        }
        report.containment_violations += usize::from(!o.contained);
        report.voxel_violations += usize::from(o.voxel == Some(false));
        report.lipschitz_estimate = report.lipschitz_estimate.max(o.ratio);
        if let Some(n) = o.note {
            if report.violations.len() < 20 {
                report.violations.push(n);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[(i64, i64)]) -> Point {
        Point::new(c.iter().map(|&(n, d)| Rational::new(n, d)).collect())
    }

    #[test]
    fn cone_axis_is_linear() {
        let m = SphereModel::rickard(1);
        let ev = RetractionEvaluator::new(&m, 2, 4).unwrap();
        let x = p(&[(1, 2), (0, 1), (0, 1)]);
        assert_eq!(ev.eval(&x, &Rational::new(1, 2)).unwrap(), p(&[(1, 4), (0, 1), (0, 1)]));
        assert!(matches!(
            ev.eval(&p(&[(-1, 2), (1, 2), (1, 2)]), &Rational::zero()),
            Err(SphereError::OutsideShadow(_))
        ));
        assert!(matches!(
            ev.eval(&x, &Rational::from_int(2)),
            Err(SphereError::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn tree_flow_follows_the_tree() {
        let m = SphereModel::rickard(1);
        // The x3-shadow of the base, in (x1, x2). The tree path from (2, 1)
        // to the origin runs through (0, 1), three units long.
        let ev = RetractionEvaluator::new(&m, 1, 3).unwrap();
        let x = Point::from_ints(&[2, 1]);
        assert_eq!(ev.eval(&x, &Rational::new(1, 3)).unwrap(), Point::from_ints(&[1, 1]));
        assert_eq!(ev.eval(&x, &Rational::new(2, 3)).unwrap(), Point::from_ints(&[0, 1]));
        assert_eq!(ev.eval(&x, &Rational::one()).unwrap(), Point::origin(2));
    }

    #[test]
    fn poles_are_fixed_by_f_prime() {
        let m = SphereModel::rickard(1);
        let ev = RetractionEvaluator::new(&m, 2, 1).unwrap();
        let pole = Point::from_ints(&[0, 0, 1]);
        for k in 0..=4 {
            assert_eq!(ev.eval_prime(&pole, &Rational::new(k, 4)).unwrap(), pole);
        }
        assert_eq!(ev.eval(&pole, &Rational::new(3, 4)).unwrap(), Point::new(vec![Rational::zero(), Rational::zero(), Rational::new(1, 2)]));
    }

    #[test]
    fn sampled_checks_pass() {
        let m = SphereModel::rickard(1);
        for (d, axis) in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 4), (3, 5), (3, 1)] {
            let ev = RetractionEvaluator::new(&m, d, axis).unwrap();
            let rep = verify_retraction(&m, &ev, 60, 7, &Rational::new(1, 8)).unwrap();
            assert!(rep.ok(), "{rep:?}");
            assert!(rep.lipschitz_estimate.is_finite());
        }
    }
}
