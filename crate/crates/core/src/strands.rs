//! Strands: minimal subpaths of a simple curve running between its
//! coordinate extremes, plus executable checks of the strand laws.
//!
//! Parameters are vertex parameters: vertex `k` sits at `k`, and `k + f`
//! is the point a fraction `f` along segment `k`. On closed chains `u` lies
//! in `[0, m)` and `v` may exceed `m` when a strand wraps past vertex 0.

use serde::Serialize;

use crate::arrangement::{self, classify, Classification};
use crate::curve::{CurveError, Point, PolyChain};
use crate::geom;
use crate::rational::Rational;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum StrandError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("chain lies in an x{axis}-orthogonal hyperplane")]
    Degenerate { axis: usize },
    #[error("x{axis}-shadow is not a path")]
    ShadowNotPath { axis: usize },
    #[error("given strand is not a strand of the shadow")]
    NotAShadowStrand,
    #[error("shadow of a {0}-dimensional chain is not planar")]
    NotSpatial(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Strand {
    /// 1-based coordinate index in the host chain.
    pub axis: usize,
    pub u: Rational,
    pub v: Rational,
    /// Whether the `u` end attains the minimum.
    pub min_first: bool,
}

impl Strand {
    pub fn polyline(&self, host: &PolyChain) -> Vec<Point> {
        host.sub_polyline(&self.u, &self.v)
    }

    pub fn segments(&self, host: &PolyChain) -> Vec<(Point, Point)> {
        let pts = self.polyline(host);
        pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
    }

    pub fn endpoints(&self, host: &PolyChain) -> (Point, Point) {
        (host.point_at(&self.u), host.point_at(&self.v))
    }

    /// Whether the closed parameter intervals share a point.
    fn touches(&self, other: &Strand, m: &Rational, closed: bool) -> bool {
        let shifts: &[i64] = if closed { &[-1, 0, 1] } else { &[0] };
        shifts.iter().any(|&s| {
            let off = m * Rational::from_int(s);
            let (u2, v2) = (&other.u + &off, &other.v + &off);
            self.u <= v2 && u2 <= self.v
        })
    }

    /// Whether the open parameter intervals overlap.
    fn interiors_overlap(&self, other: &Strand, m: &Rational, closed: bool) -> bool {
        let shifts: &[i64] = if closed { &[-1, 0, 1] } else { &[0] };
        shifts.iter().any(|&s| {
            let off = m * Rational::from_int(s);
            let (u2, v2) = (&other.u + &off, &other.v + &off);
            self.u < v2 && u2 < self.v
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Level {
    Min,
    Max,
    Mid,
}

struct Event {
    level: Level,
    start: i64,
    end: i64,
}

/// All x_axis-strands of `chain`, sorted by `u`.
pub fn strands(chain: &PolyChain, axis: usize) -> Result<Vec<Strand>, StrandError> {
    let (lo, hi) = chain.extremes(axis)?;
    if lo == hi {
        return Err(StrandError::Degenerate { axis });
    }
    let levels: Vec<Level> = chain
        .vertices()
        .iter()
        .map(|p| {
            let x = &p[axis - 1];
            if *x == lo {
                Level::Min
            } else if *x == hi {
                Level::Max
            } else {
                Level::Mid
            }
        })
        .collect();
    let n = levels.len();
    let start = if chain.is_closed() {
        (0..n)
            .find(|&k| levels[k] != Level::Mid && levels[(k + n - 1) % n] != levels[k])
            .expect("both extremes are attained")
    } else {
        0
    };
    let mut events: Vec<Event> = Vec::new();
    for k in start..start + n {
        let level = levels[k % n];
        if level == Level::Mid {
            continue;
        }
        let k = k as i64;
        match events.last_mut() {
            Some(e) if e.level == level && e.end == k - 1 => e.end = k,
            _ => events.push(Event {
                level,
                start: k,
                end: k,
            }),
        }
    }
    let mut pairs: Vec<(&Event, i64, i64)> = events
        .windows(2)
        .map(|w| (&w[0], w[1].start, w[1].level as i64))
        .collect();
    let wrap;
    if chain.is_closed() {
        let (first, last) = (&events[0], events.last().unwrap());
        wrap = (first.start + n as i64, first.level as i64);
        pairs.push((last, wrap.0, wrap.1));
    }
    let m = n as i64;
    let mut out: Vec<Strand> = pairs
        .into_iter()
        .filter(|(e, _, lvl)| e.level as i64 != *lvl)
        .map(|(e, next_start, _)| {
            let (mut u, mut v) = (e.end, next_start);
            if chain.is_closed() {
                let shift = u.div_euclid(m) * m;
                u -= shift;
                v -= shift;
            }
            Strand {
                axis,
                u: Rational::from_int(u),
                v: Rational::from_int(v),
                min_first: e.level == Level::Min,
            }
        })
        .collect();
    out.sort_by(|a, b| a.u.cmp(&b.u));
    Ok(out)
}

/// Whether `[u, v]` on `chain` is an x_axis-strand: ends at opposite
/// extremes, everything strictly between them in the interior.
pub fn is_strand(chain: &PolyChain, axis: usize, u: &Rational, v: &Rational) -> bool {
    let Ok((lo, hi)) = chain.extremes(axis) else {
        return false;
    };
    if u >= v {
        return false;
    }
    let pts = chain.sub_polyline(u, v);
    let k = axis - 1;
    let (first, last) = (&pts[0][k], &pts[pts.len() - 1][k]);
    let ends_ok = (*first == lo && *last == hi) || (*first == hi && *last == lo);
    let inside = |x: &Rational| lo < *x && *x < hi;
    let two = Rational::from_int(2);
    ends_ok
        && pts[1..pts.len() - 1].iter().all(|p| inside(&p[k]))
        && pts.windows(2).all(|w| inside(&((&w[0][k] + &w[1][k]) / &two)))
}

/// The shadow along `axis` as a planar chain, when it is a path or cycle.
pub fn shadow_curve(chain: &PolyChain, axis: usize) -> Result<Option<PolyChain>, StrandError> {
    if chain.dim() != 3 {
        return Err(StrandError::NotSpatial(chain.dim()));
    }
    let cx = arrangement::shadow_complex(chain, axis).map_err(|e| match e {
        crate::Error::Curve(c) => StrandError::Curve(c),
        other => panic!("unexpected error projecting a valid chain: {other}"),
    })?;
    Ok(arrangement::extract_curve(&cx))
}

/// Index of R^n coordinate `axis` after dropping coordinate `dropped`.
pub fn shadow_axis(axis: usize, dropped: usize) -> usize {
    debug_assert_ne!(axis, dropped);
    if axis < dropped {
        axis
    } else {
        axis - 1
    }
}

fn preimages(gamma: &PolyChain, j: usize, c: &Point) -> Vec<Rational> {
    let mut out = Vec::new();
    for k in 0..gamma.segment_count() {
        let (a, b) = gamma.segment(k);
        let (p, q) = (a.drop_axis(j), b.drop_axis(j));
        let base = Rational::from_int(k as i64);
        if p == q {
            if &p == c {
                out.push(base.clone());
                out.push(&base + &Rational::one());
            }
        } else if geom::on_segment(&p, &q, c) {
            let dir = geom::sub(&q, &p);
            out.push(&base + &geom::param_on_line(&p, &dir, c));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Lifts an x_i-strand `sigma` of the x_j-shadow path of `gamma` to an
/// x_i-strand of `gamma` projecting onto it.
///
/// `sigma` must come from [`strands`] applied to [`shadow_curve`]`(gamma, j)`.
pub fn lift_strand(gamma: &PolyChain, j: usize, sigma: &Strand) -> Result<Strand, StrandError> {
    gamma.check_axis(j)?;
    let shadow = shadow_curve(gamma, j)?.ok_or(StrandError::ShadowNotPath { axis: j })?;
    if shadow.is_closed() {
        return Err(StrandError::ShadowNotPath { axis: j });
    }
    if !strands(&shadow, sigma.axis)
        .map(|all| all.contains(sigma))
        .unwrap_or(false)
    {
        return Err(StrandError::NotAShadowStrand);
    }
    let i = if sigma.axis < j { sigma.axis } else { sigma.axis + 1 };

    let m = Rational::from_int(gamma.segment_count() as i64);
    let a_end = &shadow.vertices()[0];
    let b_end = shadow.vertices().last().unwrap();
    let a_pre = preimages(gamma, j, a_end)[0].clone();
    let b_first = preimages(gamma, j, b_end)[0].clone();

    // gamma' runs from a' to b'; `forward` says whether that is increasing
    // parameter order. Closed chains always run forward, unwrapping b'.
    let (forward, b_pre) = if gamma.is_closed() {
        let b = if b_first > a_pre { b_first } else { &b_first + &m };
        (true, b)
    } else {
        (a_pre < b_first, b_first)
    };
    let (lo, hi) = if forward {
        (a_pre.clone(), b_pre.clone())
    } else {
        (b_pre.clone(), a_pre.clone())
    };
    let in_range = |point: &Point| -> Vec<Rational> {
        let mut ts: Vec<Rational> = preimages(gamma, j, point)
            .into_iter()
            .map(|t| {
                if gamma.is_closed() && t < lo {
                    &t + &m
                } else {
                    t
                }
            })
            .filter(|t| *t >= lo && *t <= hi)
            .collect();
        ts.sort();
        ts
    };

    let (c, d) = sigma.endpoints(&shadow);
    let cs = in_range(&c);
    let ds = in_range(&d);
    let (c_pre, d_pre) = if forward {
        let c_pre = cs.last().cloned().ok_or(StrandError::NotAShadowStrand)?;
        let d_pre = ds
            .into_iter()
            .find(|t| *t > c_pre)
            .ok_or(StrandError::NotAShadowStrand)?;
        (c_pre, d_pre)
    } else {
        let c_pre = cs.first().cloned().ok_or(StrandError::NotAShadowStrand)?;
        let d_pre = ds
            .into_iter()
            .rev()
            .find(|t| *t < c_pre)
            .ok_or(StrandError::NotAShadowStrand)?;
        (c_pre, d_pre)
    };
    let (mut u, mut v) = if forward { (c_pre, d_pre) } else { (d_pre, c_pre) };
    if gamma.is_closed() && u >= m {
        u = &u - &m;
        v = &v - &m;
    }
    if !is_strand(gamma, i, &u, &v) {
        return Err(StrandError::NotAShadowStrand);
    }
    let (lo_i, _) = gamma.extremes(i)?;
    let min_first = gamma.point_at(&u)[i - 1] == lo_i;
    Ok(Strand {
        axis: i,
        u,
        v,
        min_first,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Law {
    /// Projections of strands are strands of the projection.
    ProjectionOfStrand,
    /// Distinct strands have disjoint interiors.
    DisjointInteriors,
    /// An x1-strand and an x2-strand of a planar path meet.
    StrandUnionConnected,
    /// A planar path has a unique x1-strand or a unique x2-strand.
    UniqueStrandDirection,
    /// Two path shadows of a cycle force two strands in one of them.
    TwoStrands,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LawWitness {
    pub law: Law,
    /// `chain` or `shadow <axis>`.
    pub host: String,
    pub first: Option<Strand>,
    pub second: Option<Strand>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LawReport {
    pub obs1_ok: bool,
    pub obs2_ok: bool,
    pub lemma4_ok: bool,
    pub lemma5_ok: bool,
    pub witnesses: Vec<LawWitness>,
}

impl LawReport {
    pub fn all_ok(&self) -> bool {
        self.obs1_ok && self.obs2_ok && self.lemma4_ok && self.lemma5_ok
    }

    fn violate(&mut self, law: Law, host: &str, first: Option<Strand>, second: Option<Strand>) {
        match law {
            Law::ProjectionOfStrand => self.obs1_ok = false,
            Law::DisjointInteriors => self.obs2_ok = false,
            Law::StrandUnionConnected => self.lemma4_ok = false,
            Law::UniqueStrandDirection | Law::TwoStrands => self.lemma5_ok = false,
        }
        self.witnesses.push(LawWitness {
            law,
            host: host.to_string(),
            first,
            second,
        });
    }
}

fn check_disjoint(chain: &PolyChain, host: &str, report: &mut LawReport) {
    let m = Rational::from_int(chain.segment_count() as i64);
    for axis in 1..=chain.dim() {
        let Ok(list) = strands(chain, axis) else {
            continue;
        };
        for (k, s) in list.iter().enumerate() {
            for t in &list[k + 1..] {
                if s.interiors_overlap(t, &m, chain.is_closed()) {
                    report.violate(Law::DisjointInteriors, host, Some(s.clone()), Some(t.clone()));
                }
            }
        }
    }
}

fn check_planar_path(path: &PolyChain, host: &str, report: &mut LawReport) {
    if path.dim() != 2 || path.is_closed() {
        return;
    }
    let (Ok(xs), Ok(ys)) = (strands(path, 1), strands(path, 2)) else {
        return;
    };
    let m = Rational::from_int(path.segment_count() as i64);
    for s in &xs {
        for t in &ys {
            if !s.touches(t, &m, false) {
                report.violate(Law::StrandUnionConnected, host, Some(s.clone()), Some(t.clone()));
            }
        }
    }
    if xs.len() >= 2 && ys.len() >= 2 {
        report.violate(
            Law::UniqueStrandDirection,
            host,
            Some(xs[0].clone()),
            Some(ys[0].clone()),
        );
    }
}

/// Checks the strand laws on `chain`, and for spatial chains on every shadow
/// that is a simple curve. Checks that do not apply count as satisfied.
pub fn verify_strand_laws(chain: &PolyChain) -> LawReport {
    let mut report = LawReport {
        obs1_ok: true,
        obs2_ok: true,
        lemma4_ok: true,
        lemma5_ok: true,
        witnesses: Vec::new(),
    };
    check_disjoint(chain, "chain", &mut report);
    check_planar_path(chain, "chain", &mut report);
    if chain.dim() != 3 {
        return report;
    }
    for j in 1..=3 {
        let Ok(Some(shadow)) = shadow_curve(chain, j) else {
            continue;
        };
        let host = format!("shadow {j}");
        check_disjoint(&shadow, &host, &mut report);
        check_planar_path(&shadow, &host, &mut report);
        for i in (1..=3).filter(|&i| i != j) {
            let (Ok(ours), Ok(theirs)) = (strands(chain, i), strands(&shadow, shadow_axis(i, j)))
            else {
                continue;
            };
            let shadow_sets: Vec<Vec<(Point, Point)>> =
                theirs.iter().map(|t| t.segments(&shadow)).collect();
            for s in &ours {
                let projected: Vec<(Point, Point)> = s
                    .segments(chain)
                    .into_iter()
                    .map(|(a, b)| (a.drop_axis(j), b.drop_axis(j)))
                    .collect();
                if !shadow_sets
                    .iter()
                    .any(|set| geom::same_point_set(&projected, set))
                {
                    report.violate(Law::ProjectionOfStrand, &host, Some(s.clone()), None);
                }
            }
        }
    }
    report
}

/// Outcome of checking the two-strand lemma on a spatial cycle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoStrandOutcome {
    /// Number of (shadow pair, remaining axis) configurations where the
    /// hypothesis held.
    pub checked: usize,
    pub violations: Vec<LawWitness>,
}

/// For every pair of path shadows `j`, `k` of the cycle `gamma` (with `l`
/// the remaining axis, `gamma` not flat in `l`), the k-shadow must have at
/// least two x_l-strands.
pub fn check_two_strands(gamma: &PolyChain) -> TwoStrandOutcome {
    let mut out = TwoStrandOutcome::default();
    if !gamma.is_closed() || gamma.dim() != 3 {
        return out;
    }
    let paths: Vec<Option<PolyChain>> = (1..=3)
        .map(|a| match shadow_curve(gamma, a) {
            Ok(Some(c)) if !c.is_closed() => Some(c),
            _ => None,
        })
        .collect();
    for j in 1..=3usize {
        for k in 1..=3usize {
            if j == k {
                continue;
            }
            let (Some(_), Some(kpath)) = (&paths[j - 1], &paths[k - 1]) else {
                continue;
            };
            let l = 6 - j - k;
            let (lo, hi) = gamma.extremes(l).unwrap();
            if lo == hi {
                continue;
            }
            out.checked += 1;
            let count = strands(kpath, shadow_axis(l, k)).map(|s| s.len()).unwrap_or(0);
            if count < 2 {
                out.violations.push(LawWitness {
                    law: Law::TwoStrands,
                    host: format!("shadow {k}"),
                    first: None,
                    second: None,
                });
            }
        }
    }
    out
}

/// Classification of the `axis` shadow, for callers that only need that.
pub fn shadow_classification(chain: &PolyChain, axis: usize) -> Classification {
    arrangement::shadow_complex(chain, axis)
        .map(|c| classify(&c).classification)
        .unwrap_or(Classification::Other)
}
