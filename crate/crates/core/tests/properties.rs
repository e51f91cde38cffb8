mod support;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shadowlab::arrangement::{build_complex, classify, shadow_complex, Classification, OneComplex};
use shadowlab::compat::{back_project, shadow_bitmap, ShadowBitmap};
use shadowlab::curve::{project, Point, PolyChain, SegmentSet};
use shadowlab::geom::{on_segment, same_point_set};
use shadowlab::strands::strands;
use shadowlab::theorem_lab::{sample_closed_walk, shadow_reports, walk_chain};
use shadowlab::Rational;
use support::simple::is_simple;

fn chain_strategy(dim: usize, max_len: usize, closed: bool) -> impl Strategy<Value = Vec<Vec<i64>>> {
    let min = if closed { 3 } else { 2 };
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), min..=max_len)
}

fn to_chain(verts: &[Vec<i64>], closed: bool) -> Result<PolyChain, shadowlab::CurveError> {
    PolyChain::new(verts.iter().map(|v| Point::from_ints(v)).collect(), closed)
}

fn edges_and_points(cx: &OneComplex) -> Vec<(Point, Point)> {
    cx.edges
        .iter()
        .map(|&(a, b)| (cx.vertices[a].clone(), cx.vertices[b].clone()))
        .chain(cx.isolated.iter().map(|p| (p.clone(), p.clone())))
        .collect()
}

fn on_union(segs: &[(Point, Point)], p: &Point) -> bool {
    segs.iter().any(|(a, b)| on_segment(a, b, p))
}

fn drop_both(segs: &[(Point, Point)], axis: usize) -> Vec<(Point, Point)> {
    segs.iter().map(|(a, b)| (a.drop_axis(axis), b.drop_axis(axis))).collect()
}

fn subdivide(cx: &OneComplex, edge: usize) -> OneComplex {
    let mut out = cx.clone();
    let (a, b) = out.edges.remove(edge);
    let half = Rational::new(1, 2);
    let mid = Point::new(
        cx.vertices[a]
            .coords()
            .iter()
            .zip(cx.vertices[b].coords())
            .map(|(x, y)| &(x + y) * &half)
            .collect(),
    );
    out.vertices.push(mid);
    let m = out.vertices.len() - 1;
    out.edges.push((a, m));
    out.edges.push((b, m));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplicity_matches_brute_force(verts in chain_strategy(2, 7, false), closed in any::<bool>()) {
        prop_assume!(!closed || verts.len() >= 3);
        prop_assert_eq!(to_chain(&verts, closed).is_ok(), is_simple(&verts, closed));
    }

    #[test]
    fn simplicity_matches_brute_force_3d(verts in chain_strategy(3, 6, false), closed in any::<bool>()) {
        prop_assume!(!closed || verts.len() >= 3);
        prop_assert_eq!(to_chain(&verts, closed).is_ok(), is_simple(&verts, closed));
    }

    #[test]
    fn complex_keeps_the_point_set(
        segs in prop::collection::vec((-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4), 1..8),
        probes in prop::collection::vec((-16i64..=16, -16i64..=16), 60),
    ) {
        let segs: Vec<(Point, Point)> = segs
            .into_iter()
            .map(|(a, b, c, d)| (Point::from_ints(&[a, b]), Point::from_ints(&[c, d])))
            .filter(|(p, q)| p != q)
            .collect();
        prop_assume!(!segs.is_empty());
        let cx = build_complex(&SegmentSet::new(segs.clone())).unwrap();
        let after = edges_and_points(&cx);
        prop_assert!(same_point_set(&segs, &after));
        // Probes on a quarter grid hit vertices, edge interiors and misses.
        for (x, y) in probes {
            let p = Point::new(vec![Rational::new(x, 4), Rational::new(y, 4)]);
            prop_assert_eq!(on_union(&segs, &p), on_union(&after, &p));
        }
        // Endpoints and midpoints of input segments stay covered.
        for (a, b) in &segs {
            let mid = Point::new(a.coords().iter().zip(b.coords()).map(|(x, y)| &(x + y) * &Rational::new(1, 2)).collect());
            prop_assert!(on_union(&after, a) && on_union(&after, &mid));
        }
    }

    #[test]
    fn euler_relation_and_subdivision(
        segs in prop::collection::vec((-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3), 1..7),
        pick in any::<prop::sample::Index>(),
    ) {
        let segs: Vec<(Point, Point)> = segs
            .into_iter()
            .map(|(a, b, c, d)| (Point::from_ints(&[a, b]), Point::from_ints(&[c, d])))
            .filter(|(p, q)| p != q)
            .collect();
        prop_assume!(!segs.is_empty());
        let cx = build_complex(&SegmentSet::new(segs)).unwrap();
        let r = classify(&cx);
        if r.component_count == 1 {
            prop_assert_eq!(r.has_cycle, r.edge_count >= r.vertex_count);
        }
        let sub = subdivide(&cx, pick.index(cx.edges.len()));
        let s = classify(&sub);
        prop_assert_eq!(s.classification, r.classification);
        prop_assert_eq!(s.branch_point_count, r.branch_point_count);
        prop_assert_eq!(s.has_cycle, r.has_cycle);
    }

    #[test]
    fn projection_of_subchain_is_contained(verts in chain_strategy(3, 7, false), axis in 1usize..=3, cut in 1usize..6) {
        let Ok(chain) = to_chain(&verts, false) else { return Ok(()) };
        let cut = cut.min(verts.len() - 1);
        let sub = to_chain(&verts[..=cut], false).unwrap();
        let whole = project(&chain, axis).unwrap();
        let part = project(&sub, axis).unwrap();
        let w = build_complex(&whole).unwrap();
        let p = build_complex(&part).unwrap();
        prop_assert!(shadowlab::geom::covers(&edges_and_points(&p), &edges_and_points(&w)));
    }

    #[test]
    fn double_projection_commutes(verts in chain_strategy(4, 6, false), p in 1usize..=4, q in 1usize..=4) {
        prop_assume!(p != q);
        let Ok(chain) = to_chain(&verts, false) else { return Ok(()) };
        let (lo, hi) = (p.min(q), p.max(q));
        // Dropping `lo` first shifts `hi` down by one.
        let a = drop_both(&drop_both(&chain.segments(), lo), hi - 1);
        let b = drop_both(&drop_both(&chain.segments(), hi), lo);
        prop_assert!(same_point_set(&a, &b));
    }

    #[test]
    fn strands_mirror_under_reversal(verts in chain_strategy(2, 7, false), axis in 1usize..=2) {
        let Ok(chain) = to_chain(&verts, false) else { return Ok(()) };
        let Ok(fwd) = strands(&chain, axis) else { return Ok(()) };
        let back = strands(&chain.reversed(), axis).unwrap();
        let end = Rational::from_int(verts.len() as i64 - 1);
        let mut mirrored: Vec<_> = back
            .iter()
            .map(|s| (&end - &s.v, &end - &s.u, !s.min_first))
            .collect();
        mirrored.sort();
        let fwd: Vec<_> = fwd.iter().map(|s| (s.u.clone(), s.v.clone(), s.min_first)).collect();
        prop_assert_eq!(fwd, mirrored);
    }

    #[test]
    fn back_projection_monotone_and_contained(
        a in prop::collection::btree_set((0i64..4, 0i64..4), 0..10),
        b in prop::collection::btree_set((0i64..4, 0i64..4), 0..10),
        c in prop::collection::btree_set((0i64..4, 0i64..4), 0..10),
        extra in (0i64..4, 0i64..4),
        which in 0usize..3,
    ) {
        let bm = |s: &BTreeSet<(i64, i64)>| ShadowBitmap::new(4, 4, s.clone()).unwrap();
        let base = [bm(&a), bm(&b), bm(&c)];
        let v = back_project(&base[0], &base[1], &base[2]).unwrap();
        for (k, s) in base.iter().enumerate() {
            let got = shadow_bitmap(&v, k + 1, 4, 4);
            prop_assert!(got.cells.is_subset(&s.cells));
        }
        let mut grown = base.clone();
        grown[which].cells.insert(extra);
        let w = back_project(&grown[0], &grown[1], &grown[2]).unwrap();
        prop_assert!(v.cells().is_subset(w.cells()));
    }
}

/// No sampled lattice cycle has three path shadows, and the sampled cycles
/// are accepted by the independent simplicity check.
#[test]
fn cycles_never_have_three_path_shadows() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..2000 {
        let walk = sample_closed_walk(&mut rng, 3, 20);
        let chain = walk_chain(&walk, true);
        let verts: Vec<Vec<i64>> = chain
            .vertices()
            .iter()
            .map(|p| p.coords().iter().map(|x| x.to_i64().unwrap()).collect())
            .collect();
        assert!(is_simple(&verts, true));
        let reps = shadow_reports(&chain);
        assert!(reps.iter().any(|r| r.classification != Classification::Path));
    }
}

#[test]
fn symmetry_maps_witnesses_to_witnesses() {
    use shadowlab::theorem_lab::symmetry::SignedPerm;
    let chain = shadowlab::parse_curve(include_str!("../data/tree_shadow_cycle.curve")).unwrap();
    let pts: Vec<[i64; 3]> = chain
        .vertices()
        .iter()
        .map(|p| std::array::from_fn(|k| p.coords()[k].to_i64().unwrap()))
        .collect();
    let before = shadow_reports(&chain);
    for g in SignedPerm::all() {
        let image: Vec<Point> = pts.iter().map(|&p| Point::from_ints(&g.apply(p))).collect();
        let moved = PolyChain::new(image, true).unwrap();
        let after = shadow_reports(&moved);
        for axis in 0..3 {
            let r = &after[g.image_axis(axis)];
            assert_eq!(r.classification, before[axis].classification);
            assert_eq!(r.branch_point_count, before[axis].branch_point_count);
        }
        // Shadows of the image are the images of the shadows.
        for axis in 1..=3 {
            let cx = shadow_complex(&moved, axis).unwrap();
            assert_eq!(classify(&cx).classification, Classification::Tree);
        }
    }
}
