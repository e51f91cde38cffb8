//! Random rational chains checked for three convex cycle shadows.
//!
//! Uniformly random chains almost never have closed shadows, so the
//! generator mixes three sources: plain random chains, chains whose end
//! vertices are snapped onto the shadows of the rest, and images of the
//! six-vertex example under random symmetries and axis scalings.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::lattice::random_rational;
use super::symmetry::SignedPerm;
use super::{sample_rng, Mode, SearchConfig, SearchError, SearchReport};
use crate::arrangement::{classify, is_convex_cycle, shadow_complex, Classification};
use crate::curve::{parse_curve, Point, PolyChain};
use crate::rational::Rational;

const DENOMS: [i64; 4] = [1, 2, 3, 4];

fn random_point(rng: &mut ChaCha8Rng, hi: i64) -> Point {
    let den = *DENOMS.choose(rng).unwrap();
    Point::new((0..3).map(|_| random_rational(rng, hi, den)).collect())
}

/// The values `t` with `(c, t)` on the closed segment `ab` of a plane whose
/// first coordinate is fixed to `c`: nothing, one value, or an interval.
fn slice_segment(a: &Point, b: &Point, c: &Rational) -> Option<(Rational, Rational)> {
    let (a0, b0) = (&a[0], &b[0]);
    if a0 == b0 {
        if a0 == c {
            return Some((a[1].clone().min(b[1].clone()), a[1].clone().max(b[1].clone())));
        }
        return None;
    }
    let (lo, hi) = if a0 < b0 { (a0, b0) } else { (b0, a0) };
    if c < lo || c > hi {
        return None;
    }
    let t = (c - a0) / (b0 - a0);
    let v = &a[1] + &(&t * &(&b[1] - &a[1]));
    Some((v.clone(), v))
}

fn slices(shadow: &[(Point, Point)], c: &Rational) -> Vec<(Rational, Rational)> {
    shadow
        .iter()
        .filter_map(|(a, b)| slice_segment(a, b, c))
        .collect()
}

fn in_any(intervals: &[(Rational, Rational)], t: &Rational) -> bool {
    intervals.iter().any(|(lo, hi)| lo <= t && t <= hi)
}

/// A point whose three projections lie on the projections of `segs`, or
/// `None` if the random choice of the (x1, x2) part admits no x3.
fn snapped_point(rng: &mut ChaCha8Rng, segs: &[(Point, Point)]) -> Option<Point> {
    let (a, b) = segs.choose(rng)?;
    let den = *DENOMS.choose(rng).unwrap();
    let t = Rational::new(rng.gen_range(0..=den), den);
    let p = &a.drop_axis(3);
    let q = &b.drop_axis(3);
    let xy: Vec<Rational> = (0..2).map(|k| &p[k] + &(&t * &(&q[k] - &p[k]))).collect();
    let s1: Vec<(Point, Point)> = segs.iter().map(|(a, b)| (a.drop_axis(1), b.drop_axis(1))).collect();
    let s2: Vec<(Point, Point)> = segs.iter().map(|(a, b)| (a.drop_axis(2), b.drop_axis(2))).collect();
    // In the x1-shadow the fixed coordinate is x2; in the x2-shadow it is x1.
    let z1 = slices(&s1, &xy[1]);
    let z2 = slices(&s2, &xy[0]);
    let mut cands: Vec<Rational> = Vec::new();
    for (lo, hi) in z1.iter().chain(z2.iter()) {
        for z in [lo, hi] {
            if in_any(&z1, z) && in_any(&z2, z) && !cands.contains(z) {
                cands.push(z.clone());
            }
        }
    }
    cands.sort();
    let z = cands.choose(rng)?.clone();
    Some(Point::new(vec![xy[0].clone(), xy[1].clone(), z]))
}

fn chain_segments(pts: &[Point]) -> Vec<(Point, Point)> {
    pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

fn random_chain(rng: &mut ChaCha8Rng) -> Option<PolyChain> {
    let n = rng.gen_range(3..=8);
    let pts: Vec<Point> = (0..n).map(|_| random_point(rng, 3)).collect();
    PolyChain::new(pts, false).ok()
}

fn snapped_chain(rng: &mut ChaCha8Rng) -> Option<PolyChain> {
    let n = rng.gen_range(4..=8);
    let mut mid: Vec<Point> = (0..n - 2).map(|_| random_point(rng, 3)).collect();
    let first = snapped_point(rng, &chain_segments(&mid[1..]))?;
    mid.insert(0, first);
    let last = snapped_point(rng, &chain_segments(&mid[..mid.len() - 1]))?;
    mid.push(last);
    PolyChain::new(mid, false).ok()
}

fn transformed_example(rng: &mut ChaCha8Rng) -> Option<PolyChain> {
    let base = parse_curve(crate::SIX_VERTEX_EXAMPLE).unwrap();
    let group = SignedPerm::all();
    let g = group.choose(rng).unwrap();
    let scale: Vec<Rational> = (0..3)
        .map(|_| Rational::new(rng.gen_range(1..=4), *DENOMS.choose(rng).unwrap()))
        .collect();
    let shift: Vec<Rational> = (0..3).map(|_| random_rational(rng, 2, 4)).collect();
    let pts = base
        .vertices()
        .iter()
        .map(|p| {
            let ints: [i64; 3] = std::array::from_fn(|k| p[k].to_i64().unwrap());
            let q = g.apply(ints);
            Point::new((0..3).map(|k| &(&Rational::from_int(q[k]) * &scale[k]) + &shift[k]).collect())
        })
        .collect();
    PolyChain::new(pts, false).ok()
}

/// One generated instance; retries until a simple chain comes out.
pub(crate) fn generate(rng: &mut ChaCha8Rng) -> PolyChain {
    loop {
        let kind = rng.gen_range(0..4);
        let made = match kind {
            0 => random_chain(rng),
            1 | 2 => snapped_chain(rng),
            _ => transformed_example(rng),
        };
        if let Some(c) = made {
            return c;
        }
    }
}

struct Outcome {
    chain: PolyChain,
    cycles: usize,
    convex: usize,
}

fn examine(chain: PolyChain) -> Outcome {
    let (mut cycles, mut convex) = (0, 0);
    for axis in 1..=3 {
        let cx = shadow_complex(&chain, axis).expect("valid spatial chain");
        if classify(&cx).classification == Classification::Cycle {
            cycles += 1;
            if is_convex_cycle(&cx) {
                convex += 1;
            }
        }
    }
    Outcome {
        chain,
        cycles,
        convex,
    }
}

/// Samples rational open chains and looks for one whose three shadows are
/// convex cycles. The histogram counts convex cycle shadows per instance.
pub fn search_convex_shadow_paths(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.expect_mode(Mode::ConvexShadowPaths)?;
    if cfg.sample_count == 0 {
        return Err(SearchError::InvalidConfig(
            "this search is sampled only; sampleCount must be positive".into(),
        ));
    }
    let t0 = Instant::now();
    let outcomes: Vec<Outcome> = (0..cfg.sample_count)
        .into_par_iter()
        .map(|i| examine(generate(&mut sample_rng(cfg.seed, i))))
        .collect();
    let mut report = SearchReport::new(cfg);
    for k in 0..=3 {
        report.bump(&k.to_string(), 0);
    }
    report.stat("allCycleInstances", 0);
    for o in outcomes {
        report.instances_checked += 1;
        report.bump(&o.convex.to_string(), 1);
        if o.cycles == 3 {
            report.stat("allCycleInstances", 1);
            if o.convex == 3 {
                report.counterexamples.push(o.chain);
            }
        }
    }
    report.elapsed = t0.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn snapped_points_lie_on_all_shadows() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut hits = 0;
        for _ in 0..200 {
            let pts: Vec<Point> = (0..4).map(|_| random_point(&mut rng, 3)).collect();
            let segs = chain_segments(&pts);
            if let Some(p) = snapped_point(&mut rng, &segs) {
                hits += 1;
                for axis in 1..=3 {
                    let q = p.drop_axis(axis);
                    assert!(segs
                        .iter()
                        .any(|(a, b)| crate::geom::on_segment(&a.drop_axis(axis), &b.drop_axis(axis), &q)));
                }
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn transformed_examples_keep_three_cycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let c = transformed_example(&mut rng).unwrap();
            let o = examine(c);
            assert_eq!(o.cycles, 3);
            assert_eq!(o.convex, 2);
        }
    }

    #[test]
    fn planar_convex_path_is_not_a_counterexample() {
        let c = parse_curve("open\n0 0 0\n2 0 0\n2 2 0\n0 2 0").unwrap();
        let o = examine(c);
        assert_eq!(o.convex, 0);
        assert!(o.cycles < 3);
    }
}
