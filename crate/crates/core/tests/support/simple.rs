//! Brute-force simplicity check for integer polygonal chains, written with
//! plain i128 arithmetic so it shares nothing with the library predicates.

type P = Vec<i128>;

fn sub(a: &P, b: &P) -> P {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &P, b: &P) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Closest-approach test in any dimension: the segments meet iff the
/// minimum of |p(s) - q(t)|^2 over the unit square is zero. Done exactly by
/// checking the four edge-clamped cases and the interior critical point.
fn segments_meet(p0: &P, p1: &P, q0: &P, q1: &P) -> bool {
    let on = |a: &P, b: &P, x: &P| {
        let d = sub(b, a);
        let w = sub(x, a);
        // x = a + t d for some t in [0, 1]
        let dd = dot(&d, &d);
        let t_num = dot(&w, &d);
        if t_num < 0 || t_num > dd {
            return false;
        }
        // |w|^2 dd == (w.d)^2 iff w parallel to d
        dot(&w, &w) * dd == t_num * t_num
    };
    if on(p0, p1, q0) || on(p0, p1, q1) || on(q0, q1, p0) || on(q0, q1, p1) {
        return true;
    }
    // Proper crossing: solve p0 + s u = q0 + t v with s, t in (0, 1).
    let u = sub(p1, p0);
    let v = sub(q1, q0);
    let w = sub(q0, p0);
    let (uu, uv, vv, uw, vw) = (dot(&u, &u), dot(&u, &v), dot(&v, &v), dot(&u, &w), dot(&v, &w));
    let den = uu * vv - uv * uv;
    if den == 0 {
        return false;
    }
    let s_num = uw * vv - uv * vw;
    let t_num = uv * uw - uu * vw;
    if s_num <= 0 || s_num >= den || t_num <= 0 || t_num >= den {
        return false;
    }
    // The closest points coincide iff den^2 |w + t v - s u|^2 = 0.
    let r: P = (0..u.len())
        .map(|k| w[k] * den + t_num * v[k] - s_num * u[k])
        .collect();
    dot(&r, &r) == 0
}

/// Whether the chain through `verts` is simple: no repeated consecutive
/// vertex, adjacent segments share only their common vertex, other pairs
/// are disjoint.
pub fn is_simple(verts: &[Vec<i64>], closed: bool) -> bool {
    let pts: Vec<P> = verts.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let n = pts.len();
    let m = if closed { n } else { n - 1 };
    if n < 2 || (closed && n < 3) {
        return false;
    }
    let seg = |i: usize| (&pts[i], &pts[(i + 1) % n]);
    for i in 0..m {
        let (a, b) = seg(i);
        if a == b {
            return false;
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            let adjacent = j == i + 1 || (closed && i == 0 && j == m - 1);
            if adjacent {
                // share one vertex; any other contact means backtracking overlap
                let (shared, x, y) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let ux = sub(x, shared);
                let uy = sub(y, shared);
                let cross_zero = dot(&ux, &ux) * dot(&uy, &uy) == dot(&ux, &uy).pow(2);
                if cross_zero && dot(&ux, &uy) > 0 {
                    return false;
                }
            } else if segments_meet(a, b, c, d) {
                return false;
            }
        }
    }
    true
}
