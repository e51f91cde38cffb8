//! Exact supercover rasterization: every closed cell a simplex touches.
//!
//! Coordinates are in cell units, cell `c` covering `[c - 1/2, c + 1/2]` on
//! each axis. A point, segment or triangle is parametrized over a triangle
//! in the (s, t) plane; the sweep fixes one coordinate at a time, clipping
//! the parameter polygon to the slab of each candidate cell.

use std::collections::BTreeSet;

use crate::rational::Rational;

type Param = (Rational, Rational);

struct Simplex<'a> {
    origin: &'a [Rational],
    du: Vec<Rational>,
    dv: Vec<Rational>,
}

impl Simplex<'_> {
    fn coord(&self, k: usize, p: &Param) -> Rational {
        &(&self.origin[k] + &(&p.0 * &self.du[k])) + &(&p.1 * &self.dv[k])
    }
}

fn ceil(x: &Rational) -> i64 {
    -(-x).floor_i64().expect("coordinates fit in i64")
}

/// Keeps the part of `poly` where `f >= 0`; `f` is affine in the parameters.
fn clip(poly: &[Param], f: impl Fn(&Param) -> Rational) -> Vec<Param> {
    let m = poly.len();
    let vals: Vec<Rational> = poly.iter().map(&f).collect();
    let mut out: Vec<Param> = Vec::with_capacity(m + 2);
    for i in 0..m {
        let j = (i + 1) % m;
        let (fa, fb) = (&vals[i], &vals[j]);
        if !fa.is_negative() {
            out.push(poly[i].clone());
        }
        if (fa.signum() > 0 && fb.is_negative()) || (fa.is_negative() && fb.signum() > 0) {
            let t = fa / &(fa - fb);
            let (a, b) = (&poly[i], &poly[j]);
            out.push((&a.0 + &(&t * &(&b.0 - &a.0)), &a.1 + &(&t * &(&b.1 - &a.1))));
        }
    }
    out.dedup();
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn sweep(s: &Simplex, k: usize, poly: Vec<Param>, cell: &mut Vec<i64>, out: &mut BTreeSet<Vec<i64>>) {
    if k == s.origin.len() {
        out.insert(cell.clone());
        return;
    }
    let vals: Vec<Rational> = poly.iter().map(|p| s.coord(k, p)).collect();
    let lo = vals.iter().min().unwrap();
    let hi = vals.iter().max().unwrap();
    let half = Rational::new(1, 2);
    let (c_lo, c_hi) = (ceil(&(lo - &half)), (hi + &half).floor_i64().unwrap());
    for c in c_lo..=c_hi {
        let (below, above) = (
            &Rational::from_int(c) - &half,
            &Rational::from_int(c) + &half,
        );
        let piece = if *lo >= below && *hi <= above {
            poly.clone()
        } else {
            let p = clip(&poly, |q| &s.coord(k, q) - &below);
            clip(&p, |q| &above - &s.coord(k, q))
        };
        if piece.is_empty() {
            continue;
        }
        cell.push(c);
        sweep(s, k + 1, piece, cell, out);
        cell.pop();
    }
}

/// Adds to `out` every cell whose closed cube meets the convex hull of
/// `verts` (one to three points of equal dimension).
pub fn supercover_simplex(verts: &[Vec<Rational>], out: &mut BTreeSet<Vec<i64>>) {
    assert!((1..=3).contains(&verts.len()), "points, segments and triangles only");
    let a = &verts[0];
    let b = verts.get(1).unwrap_or(a);
    let c = verts.get(2).unwrap_or(b);
    let s = Simplex {
        origin: a,
        du: b.iter().zip(a).map(|(x, y)| x - y).collect(),
        dv: c.iter().zip(a).map(|(x, y)| x - y).collect(),
    };
    let (z, o) = (Rational::zero(), Rational::one());
    let poly = vec![(z.clone(), z.clone()), (o.clone(), z.clone()), (z, o)];
    let mut cell = Vec::with_capacity(a.len());
    sweep(&s, 0, poly, &mut cell, out);
}

pub fn supercover_segment(a: &[Rational], b: &[Rational], out: &mut BTreeSet<Vec<i64>>) {
    supercover_simplex(&[a.to_vec(), b.to_vec()], out);
}
