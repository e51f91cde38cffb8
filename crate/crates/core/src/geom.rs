//! Exact segment predicates shared by the curve model and the arrangement.

use std::cmp::Ordering;

use crate::curve::Point;
use crate::rational::Rational;

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Meet {
    None,
    Point(Point),
    /// Collinear overlap of positive length, endpoints ordered along the first segment.
    Overlap(Point, Point),
}

pub fn sub(a: &Point, b: &Point) -> Vec<Rational> {
    a.coords().iter().zip(b.coords()).map(|(x, y)| x - y).collect()
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `a + t * dir`
pub fn along(a: &Point, dir: &[Rational], t: &Rational) -> Point {
    Point::new(a.coords().iter().zip(dir).map(|(x, d)| x + t * d).collect())
}

pub fn parallel(u: &[Rational], v: &[Rational]) -> bool {
    let n = u.len();
    for i in 0..n {
        for j in i + 1..n {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return false;
            }
        }
    }
    true
}

/// Sign of the 2D cross product `(b - a) x (c - a)`.
pub fn orient2d(a: &Point, b: &Point, c: &Point) -> Ordering {
    let (ax, ay) = (&a[0], &a[1]);
    let lhs = (&b[0] - ax) * (&c[1] - ay);
    let rhs = (&b[1] - ay) * (&c[0] - ax);
    lhs.cmp(&rhs)
}

/// Parameter of `p` along `a -> a + dir`, assuming `p` lies on that line.
pub fn param_on_line(a: &Point, dir: &[Rational], p: &Point) -> Rational {
    let k = dir
        .iter()
        .position(|d| !d.is_zero())
        .expect("degenerate direction");
    (&p[k] - &a[k]) / &dir[k]
}

/// Whether `p` lies on the closed segment `a b` (any dimension).
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if a == b {
        return a == p;
    }
    let d = sub(b, a);
    let w = sub(p, a);
    if !parallel(&d, &w) {
        return false;
    }
    let t = param_on_line(a, &d, p);
    t.signum() >= 0 && t <= Rational::one()
}

fn in_unit(t: &Rational) -> bool {
    t.signum() >= 0 && *t <= Rational::one()
}

/// Intersection of closed segments `p0 p1` and `q0 q1` in any dimension.
/// Both segments must have positive length.
pub fn meet(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> Meet {
    if p0.dim() == 2 {
        return meet2d(p0, p1, q0, q1);
    }
    let u = sub(p1, p0);
    let v = sub(q1, q0);
    let w = sub(q0, p0);
    let n = u.len();
    if parallel(&u, &v) {
        if !parallel(&u, &w) {
            return Meet::None;
        }
        return collinear_overlap(p0, &u, q0, q1);
    }
    for i in 0..n {
        for j in i + 1..n {
            let det = &v[i] * &u[j] - &u[i] * &v[j];
            if det.is_zero() {
                continue;
            }
            let t = (&v[i] * &w[j] - &w[i] * &v[j]) / &det;
            let s = (&u[i] * &w[j] - &w[i] * &u[j]) / &det;
            if !in_unit(&t) || !in_unit(&s) {
                return Meet::None;
            }
            let x = along(p0, &u, &t);
            let y = along(q0, &v, &s);
            return if x == y { Meet::Point(x) } else { Meet::None };
        }
    }
    unreachable!("non-parallel directions have a nonzero minor")
}

fn collinear_overlap(p0: &Point, u: &[Rational], q0: &Point, q1: &Point) -> Meet {
    let ta = param_on_line(p0, u, q0);
    let tb = param_on_line(p0, u, q1);
    let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
    let lo = lo.max(Rational::zero());
    let hi = hi.min(Rational::one());
    match lo.cmp(&hi) {
        Ordering::Greater => Meet::None,
        Ordering::Equal => Meet::Point(along(p0, u, &lo)),
        Ordering::Less => Meet::Overlap(along(p0, u, &lo), along(p0, u, &hi)),
    }
}

fn meet2d(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> Meet {
    // Bounding-box rejection first; most pairs in an arrangement are disjoint.
    for k in 0..2 {
        let (plo, phi) = minmax(&p0[k], &p1[k]);
        let (qlo, qhi) = minmax(&q0[k], &q1[k]);
        if phi < qlo || qhi < plo {
            return Meet::None;
        }
    }
    let o1 = orient2d(p0, p1, q0);
    let o2 = orient2d(p0, p1, q1);
    if o1 == Ordering::Equal && o2 == Ordering::Equal {
        let u = sub(p1, p0);
        return collinear_overlap(p0, &u, q0, q1);
    }
    let o3 = orient2d(q0, q1, p0);
    let o4 = orient2d(q0, q1, p1);
    if o1 == o2 || o3 == o4 {
        return Meet::None;
    }
    // Touching at an endpoint.
    if o1 == Ordering::Equal {
        return Meet::Point(q0.clone());
    }
    if o2 == Ordering::Equal {
        return Meet::Point(q1.clone());
    }
    if o3 == Ordering::Equal {
        return Meet::Point(p0.clone());
    }
    if o4 == Ordering::Equal {
        return Meet::Point(p1.clone());
    }
    let u = sub(p1, p0);
    let v = sub(q1, q0);
    let w = sub(q0, p0);
    let det = &u[0] * &v[1] - &u[1] * &v[0];
    let t = (&w[0] * &v[1] - &w[1] * &v[0]) / &det;
    Meet::Point(along(p0, &u, &t))
}

fn minmax<'a>(a: &'a Rational, b: &'a Rational) -> (&'a Rational, &'a Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Whether the union of segments `b` covers every point of the union of
/// segments `a`. Zero-length entries are treated as points.
pub fn covers(a: &[(Point, Point)], b: &[(Point, Point)]) -> bool {
    a.iter().all(|(p, q)| {
        if p == q {
            return b.iter().any(|(x, y)| on_segment(x, y, p));
        }
        let dir = sub(q, p);
        let mut intervals: Vec<(Rational, Rational)> = Vec::new();
        for (x, y) in b {
            if x == y {
                continue;
            }
            if let Meet::Overlap(s, e) = meet(p, q, x, y) {
                let ts = param_on_line(p, &dir, &s);
                let te = param_on_line(p, &dir, &e);
                intervals.push(if ts <= te { (ts, te) } else { (te, ts) });
            }
        }
        intervals.sort();
        let mut reach = Rational::zero();
        for (lo, hi) in intervals {
            if lo > reach {
                return false;
            }
            if hi > reach {
                reach = hi;
            }
        }
        reach >= Rational::one()
    })
}

/// Point-set equality of two finite unions of segments.
pub fn same_point_set(a: &[(Point, Point)], b: &[(Point, Point)]) -> bool {
    covers(a, b) && covers(b, a)
}
