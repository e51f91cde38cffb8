//! Lattice walks: seeded samplers, conversion to chains, and small integer
//! geometry used by the enumerators.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{Point, PolyChain};
use crate::rational::Rational;

use super::symmetry::P3;

pub const UNIT3: [P3; 6] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
];

pub fn add<const D: usize>(a: [i64; D], b: [i64; D]) -> [i64; D] {
    std::array::from_fn(|k| a[k] + b[k])
}

pub fn sub<const D: usize>(a: [i64; D], b: [i64; D]) -> [i64; D] {
    std::array::from_fn(|k| a[k] - b[k])
}

fn in_box<const D: usize>(p: [i64; D], g: i64) -> bool {
    p.iter().all(|&c| (0..=g).contains(&c))
}

fn same_direction<const D: usize>(u: [i64; D], v: [i64; D]) -> bool {
    let dot: i64 = (0..D).map(|k| u[k] * v[k]).sum();
    let uu: i64 = (0..D).map(|k| u[k] * u[k]).sum();
    let vv: i64 = (0..D).map(|k| v[k] * v[k]).sum();
    dot > 0 && dot * dot == uu * vv
}

/// Drops vertices where the walk continues straight on.
pub fn corners<const D: usize>(walk: &[[i64; D]], closed: bool) -> Vec<[i64; D]> {
    let n = walk.len();
    (0..n)
        .filter(|&k| {
            if !closed && (k == 0 || k == n - 1) {
                return true;
            }
            let prev = walk[(k + n - 1) % n];
            let next = walk[(k + 1) % n];
            !same_direction(sub(walk[k], prev), sub(next, walk[k]))
        })
        .map(|k| walk[k])
        .collect()
}

pub fn to_point<const D: usize>(p: [i64; D]) -> Point {
    Point::from_ints(&p)
}

/// Chain through the corners of a lattice walk.
pub fn walk_chain<const D: usize>(walk: &[[i64; D]], closed: bool) -> PolyChain {
    let pts = corners(walk, closed).into_iter().map(to_point).collect();
    PolyChain::new(pts, closed).expect("self-avoiding walks are simple")
}

/// Integer coordinates of a 3-dimensional chain, if it has them.
pub fn lattice_vertices(chain: &PolyChain) -> Option<Vec<P3>> {
    if chain.dim() != 3 {
        return None;
    }
    chain
        .vertices()
        .iter()
        .map(|p| {
            Some([
                p[0].to_i64().filter(|_| p[0].is_integer())?,
                p[1].to_i64().filter(|_| p[1].is_integer())?,
                p[2].to_i64().filter(|_| p[2].is_integer())?,
            ])
        })
        .collect()
}

struct Occupancy {
    g: i64,
    cells: Vec<bool>,
}

impl Occupancy {
    fn new(g: i64) -> Self {
        let side = (g + 1) as usize;
        Occupancy {
            g,
            cells: vec![false; side * side * side],
        }
    }

    fn idx(&self, p: P3) -> usize {
        let side = self.g + 1;
        ((p[0] * side + p[1]) * side + p[2]) as usize
    }

    fn free(&self, p: P3) -> bool {
        in_box(p, self.g) && !self.cells[self.idx(p)]
    }

    fn set(&mut self, p: P3, v: bool) {
        let i = self.idx(p);
        self.cells[i] = v;
    }
}

/// A self-avoiding closed unit-step walk in `{0..g}^3` of length at most
/// `max_len`, produced by local corner, bump-out and bump-in moves from a
/// random unit square.
pub fn sample_closed_walk(rng: &mut ChaCha8Rng, g: i64, max_len: usize) -> Vec<P3> {
    assert!(g >= 1 && max_len >= 4);
    let base = [rng.gen_range(0..g), rng.gen_range(0..g), rng.gen_range(0..g)];
    let (a, b) = match rng.gen_range(0..3) {
        0 => (0, 1),
        1 => (0, 2),
        _ => (1, 2),
    };
    let mut ea = [0; 3];
    ea[a] = 1;
    let mut eb = [0; 3];
    eb[b] = 1;
    let mut pts = vec![base, add(base, ea), add(add(base, ea), eb), add(base, eb)];
    let mut occ = Occupancy::new(g);
    for &p in &pts {
        occ.set(p, true);
    }
    let target = 4 + 2 * rng.gen_range(0..=(max_len - 4) / 2);
    let moves = 20 * max_len + 50;
    for _ in 0..moves {
        let len = pts.len();
        let k = rng.gen_range(0..len);
        pts.rotate_left(k);
        let (p, q, next, prev) = (pts[0], pts[1], pts[2], pts[len - 1]);
        let e = sub(q, p);
        let perp: Vec<P3> = UNIT3
            .iter()
            .copied()
            .filter(|f| (0..3).all(|i| f[i] * e[i] == 0))
            .collect();
        let f = perp[rng.gen_range(0..perp.len())];
        let (p2, q2) = (add(p, f), add(q, f));
        if prev == p2 && next == q2 {
            if len > 4 && (len > target || rng.gen_bool(0.5)) {
                occ.set(p, false);
                occ.set(q, false);
                pts.drain(0..2);
            }
        } else if prev == p2 {
            if occ.free(q2) {
                occ.set(p, false);
                occ.set(q2, true);
                pts[0] = q2;
            }
        } else if next == q2 {
            if occ.free(p2) {
                occ.set(q, false);
                occ.set(p2, true);
                pts[1] = p2;
            }
        } else if len + 2 <= max_len && len < target && occ.free(p2) && occ.free(q2) {
            occ.set(p2, true);
            occ.set(q2, true);
            pts.insert(1, p2);
            pts.insert(2, q2);
        }
    }
    pts
}

/// A self-avoiding open unit-step walk with 1 to `max_steps` steps in
/// `{0..g}^D`, grown at random until it reaches its target length or gets
/// stuck.
pub fn sample_open_walk<const D: usize>(
    rng: &mut ChaCha8Rng,
    g: i64,
    max_steps: usize,
) -> Vec<[i64; D]> {
    let steps = rng.gen_range(1..=max_steps);
    let start: [i64; D] = std::array::from_fn(|_| rng.gen_range(0..=g));
    let mut walk = vec![start];
    for _ in 0..steps {
        let cur = *walk.last().unwrap();
        let options: Vec<[i64; D]> = (0..2 * D)
            .map(|k| {
                let mut p = cur;
                p[k / 2] += if k % 2 == 0 { 1 } else { -1 };
                p
            })
            .filter(|&p| in_box(p, g) && !walk.contains(&p))
            .collect();
        if options.is_empty() {
            break;
        }
        walk.push(options[rng.gen_range(0..options.len())]);
    }
    if walk.len() == 1 {
        let k = rng.gen_range(0..D);
        let mut p = start;
        p[k] += if start[k] < g { 1 } else { -1 };
        walk.push(p);
    }
    walk
}

/// A random planar lattice path as a chain.
pub fn sample_planar_path(rng: &mut ChaCha8Rng, g: i64, max_steps: usize) -> PolyChain {
    walk_chain(&sample_open_walk::<2>(rng, g, max_steps), false)
}

/// A rational value `k / den` with `k` uniform in `0..=hi * den`.
pub fn random_rational(rng: &mut ChaCha8Rng, hi: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(0..=hi * den), den)
}

pub fn orient2(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> i64 {
    ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).signum()
}

/// Whether `p` lies on the closed segment `ab`.
pub fn on_seg2(a: [i64; 2], b: [i64; 2], p: [i64; 2]) -> bool {
    orient2(a, b, p) == 0
        && p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

fn cross3(u: P3, v: P3) -> P3 {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn dot3(u: P3, v: P3) -> i64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Whether the closed segments `p0p1` and `q0q1` share a point.
pub fn segments_touch3(p0: P3, p1: P3, q0: P3, q1: P3) -> bool {
    let d1 = sub(p1, p0);
    let d2 = sub(q1, q0);
    let w = sub(q0, p0);
    let n = cross3(d1, d2);
    if n == [0, 0, 0] {
        if cross3(w, d1) != [0, 0, 0] {
            return false;
        }
        let (a, b) = (dot3(w, d1), dot3(add(w, d2), d1));
        let (lo, hi) = (a.min(b), a.max(b));
        return lo <= dot3(d1, d1) && hi >= 0;
    }
    if dot3(w, n) != 0 {
        return false;
    }
    let nn = dot3(n, n);
    let t = dot3(cross3(w, d2), n);
    let s = dot3(cross3(w, d1), n);
    (0..=nn).contains(&t) && (0..=nn).contains(&s)
}

/// Whether the turn at `b` on the way `a -> b -> c` is a proper corner
/// (neither straight on nor reversing).
pub fn proper_turn(a: P3, b: P3, c: P3) -> bool {
    cross3(sub(b, a), sub(c, b)) != [0, 0, 0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{meet, Meet};
    use rand::SeedableRng;

    #[test]
    fn sampled_closed_walks_are_valid() {
        for i in 0..300u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(i);
            let w = sample_closed_walk(&mut rng, 3, 20);
            assert!(w.len() >= 4 && w.len() <= 20 && w.len() % 2 == 0);
            for k in 0..w.len() {
                let d = sub(w[(k + 1) % w.len()], w[k]);
                assert_eq!(d.iter().map(|x| x.abs()).sum::<i64>(), 1);
                assert!(in_box(w[k], 3));
            }
            let mut s = w.clone();
            s.sort();
            s.dedup();
            assert_eq!(s.len(), w.len());
            walk_chain(&w, true);
        }
    }

    #[test]
    fn corners_drop_straight_vertices() {
        let w = [[0, 0], [1, 0], [2, 0], [2, 1], [1, 1], [0, 1]];
        assert_eq!(corners(&w, true), vec![[0, 0], [2, 0], [2, 1], [0, 1]]);
        assert_eq!(corners(&w, false), vec![[0, 0], [2, 0], [2, 1], [0, 1]]);
        let v = [[0, 0], [1, 0], [2, 0]];
        assert_eq!(corners(&v, false), vec![[0, 0], [2, 0]]);
    }

    #[test]
    fn integer_touch_matches_rational_meet() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..3000 {
            let mut r = || -> P3 { std::array::from_fn(|_| rng.gen_range(0..3)) };
            let (a, b, c, d) = (r(), r(), r(), r());
            if a == b || c == d {
                continue;
            }
            let exact = !matches!(
                meet(&to_point(a), &to_point(b), &to_point(c), &to_point(d)),
                Meet::None
            );
            assert_eq!(segments_touch3(a, b, c, d), exact, "{a:?}{b:?} {c:?}{d:?}");
        }
    }
}
