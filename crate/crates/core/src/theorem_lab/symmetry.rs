//! The 48 signed axis permutations of Z^3 and canonical forms of lattice
//! chains under them plus translation.

pub type P3 = [i64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    perm: [usize; 3],
    flip: [bool; 3],
}

impl SignedPerm {
    pub fn identity() -> Self {
        SignedPerm {
            perm: [0, 1, 2],
            flip: [false; 3],
        }
    }

    /// All 48 elements, identity first.
    pub fn all() -> Vec<SignedPerm> {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::with_capacity(48);
        for perm in PERMS {
            for bits in 0..8u8 {
                let flip = [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0];
                out.push(SignedPerm { perm, flip });
            }
        }
        out
    }

    /// Image of `p`; flipped coordinates are negated.
    pub fn apply(&self, p: P3) -> P3 {
        let mut q = [0; 3];
        for k in 0..3 {
            let x = p[self.perm[k]];
            q[k] = if self.flip[k] { -x } else { x };
        }
        q
    }

    /// Image of `p` inside the box `{0..g}^3`, flipping by `x -> g - x`.
    pub fn apply_in_box(&self, p: P3, g: i64) -> P3 {
        let mut q = self.apply(p);
        for k in 0..3 {
            if self.flip[k] {
                q[k] += g;
            }
        }
        q
    }

    /// Output position of input axis `axis` (0-based).
    pub fn image_axis(&self, axis: usize) -> usize {
        self.perm.iter().position(|&a| a == axis).unwrap()
    }
}

fn translate_to_origin(pts: &mut [P3]) {
    for k in 0..3 {
        let lo = pts.iter().map(|p| p[k]).min().unwrap_or(0);
        for p in pts.iter_mut() {
            p[k] -= lo;
        }
    }
}

/// Lexicographically least vertex sequence of an open chain over the group,
/// translations and reversal.
pub fn canonical_open(pts: &[P3]) -> Vec<P3> {
    let mut best: Option<Vec<P3>> = None;
    for g in SignedPerm::all() {
        let mut img: Vec<P3> = pts.iter().map(|&p| g.apply(p)).collect();
        translate_to_origin(&mut img);
        let rev: Vec<P3> = img.iter().rev().copied().collect();
        for cand in [img, rev] {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Like [`canonical_open`] for cycles, also minimizing over the starting
/// vertex; the least vertex comes first, followed by its lesser neighbour.
pub fn canonical_cycle(pts: &[P3]) -> Vec<P3> {
    let n = pts.len();
    let mut best: Option<Vec<P3>> = None;
    for g in SignedPerm::all() {
        let mut img: Vec<P3> = pts.iter().map(|&p| g.apply(p)).collect();
        translate_to_origin(&mut img);
        let s = (0..n).min_by_key(|&k| img[k]).unwrap();
        let forward = img[(s + 1) % n] < img[(s + n - 1) % n];
        let cand: Vec<P3> = (0..n)
            .map(|k| {
                if forward {
                    img[(s + k) % n]
                } else {
                    img[(s + n - k) % n]
                }
            })
            .collect();
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.unwrap_or_default()
}

/// Points of `{0..g}^3` that are lexicographically least in their orbit.
pub fn orbit_representatives(g: i64) -> Vec<P3> {
    let group = SignedPerm::all();
    let mut out = Vec::new();
    for x in 0..=g {
        for y in 0..=g {
            for z in 0..=g {
                let p = [x, y, z];
                if group.iter().all(|s| s.apply_in_box(p, g) >= p) {
                    out.push(p);
                }
            }
        }
    }
    out
}
