//! Planar 1-complexes: the point-set union of a [`SegmentSet`] as a graph,
//! and its topological classification.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::curve::{Point, PolyChain, SegmentSet};
use crate::geom::{self, Meet};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("segment set lives in dimension {0}, expected 2")]
    NotPlanar(usize),
}

/// Embedded planar graph. Vertices are sorted lexicographically, edges are
/// `(i, j)` with `i < j` and sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OneComplex {
    pub vertices: Vec<Point>,
    pub edges: Vec<(usize, usize)>,
    pub isolated: Vec<Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    Empty,
    Point,
    Path,
    Cycle,
    Tree,
    Other,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Empty => "Empty",
            Classification::Point => "Point",
            Classification::Path => "Path",
            Classification::Cycle => "Cycle",
            Classification::Tree => "Tree",
            Classification::Other => "Other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TopologyReport {
    pub component_count: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub branch_point_count: usize,
    pub has_cycle: bool,
    pub classification: Classification,
}

fn dedup_points(points: &mut Vec<Point>) {
    points.sort();
    points.dedup();
}

/// Builds the 1-complex whose point set is the union of `segs`.
pub fn build_complex(segs: &SegmentSet) -> Result<OneComplex, ArrangementError> {
    if let Some(dim) = segs
        .segments
        .iter()
        .map(|s| s.0.dim())
        .chain(segs.isolated.iter().map(|p| p.dim()))
        .find(|&d| d != 2)
    {
        return Err(ArrangementError::NotPlanar(dim));
    }
    let segments: Vec<&(Point, Point)> = segs.segments.iter().filter(|(a, b)| a != b).collect();
    let m = segments.len();
    let mut splits: Vec<Vec<Point>> = segments
        .iter()
        .map(|(a, b)| vec![a.clone(), b.clone()])
        .collect();

    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = segments[i];
            let (c, d) = segments[j];
            match geom::meet(a, b, c, d) {
                Meet::None => {}
                Meet::Point(p) => {
                    splits[i].push(p.clone());
                    splits[j].push(p);
                }
                Meet::Overlap(p, q) => {
                    splits[i].push(p.clone());
                    splits[i].push(q.clone());
                    splits[j].push(p);
                    splits[j].push(q);
                }
            }
        }
    }

    let mut isolated = Vec::new();
    for p in &segs.isolated {
        let mut covered = false;
        for (k, (a, b)) in segments.iter().enumerate() {
            if geom::on_segment(a, b, p) {
                splits[k].push(p.clone());
                covered = true;
            }
        }
        if !covered {
            isolated.push(p.clone());
        }
    }
    dedup_points(&mut isolated);

    // Along a line, lexicographic order of points is monotone.
    let mut vertex_set = BTreeSet::new();
    for pts in &mut splits {
        dedup_points(pts);
        vertex_set.extend(pts.iter().cloned());
    }
    let vertices: Vec<Point> = vertex_set.into_iter().collect();
    let index: HashMap<&Point, usize> = vertices.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut edges = BTreeSet::new();
    for pts in &splits {
        for w in pts.windows(2) {
            let (i, j) = (index[&w[0]], index[&w[1]]);
            edges.insert((i.min(j), i.max(j)));
        }
    }
    Ok(OneComplex {
        vertices,
        edges: edges.into_iter().collect(),
        isolated,
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Classifies an abstract simple graph on `n` vertices.
pub fn classify_graph(n: usize, edges: &[(usize, usize)]) -> TopologyReport {
    let mut degree = vec![0usize; n];
    let mut uf = UnionFind::new(n);
    for &(a, b) in edges {
        degree[a] += 1;
        degree[b] += 1;
        uf.union(a, b);
    }
    let component_count = (0..n).filter(|&v| uf.find(v) == v).count();
    let mut degree_histogram = BTreeMap::new();
    for &d in &degree {
        *degree_histogram.entry(d).or_insert(0) += 1;
    }
    let branch_point_count = degree.iter().filter(|&&d| d >= 3).count();
    let e = edges.len();
    let has_cycle = e + component_count > n;
    let classification = if e == 0 {
        match n {
            0 => Classification::Empty,
            1 => Classification::Point,
            _ => Classification::Other,
        }
    } else if component_count != 1 {
        Classification::Other
    } else if !has_cycle {
        if branch_point_count == 0 {
            Classification::Path
        } else {
            Classification::Tree
        }
    } else if degree.iter().all(|&d| d == 2) {
        Classification::Cycle
    } else {
        Classification::Other
    };
    TopologyReport {
        component_count,
        vertex_count: n,
        edge_count: e,
        degree_histogram,
        branch_point_count,
        has_cycle,
        classification,
    }
}

/// Topology of a complex. Isolated points count as degree-0 vertices.
pub fn classify(cx: &OneComplex) -> TopologyReport {
    classify_graph(cx.vertices.len() + cx.isolated.len(), &cx.edges)
}

pub fn shadow_complex(chain: &PolyChain, axis: usize) -> Result<OneComplex, crate::Error> {
    let segs = crate::curve::project(chain, axis)?;
    Ok(build_complex(&segs)?)
}

pub(crate) fn adjacency(cx: &OneComplex) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); cx.vertices.len()];
    for &(a, b) in &cx.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

/// Walks a Path- or Cycle-classified complex into a planar chain. Paths start
/// at their lexicographically smaller endpoint; cycles start at the smallest
/// vertex and leave towards its smaller neighbour.
pub fn extract_curve(cx: &OneComplex) -> Option<PolyChain> {
    let report = classify(cx);
    let adj = adjacency(cx);
    let (start, closed) = match report.classification {
        Classification::Path => (adj.iter().position(|l| l.len() == 1)?, false),
        Classification::Cycle => (0, true),
        _ => return None,
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = adj[cur].iter().copied().find(|&n| n != prev);
        match next {
            Some(n) if n != start && order.len() < cx.vertices.len() => {
                order.push(n);
                prev = cur;
                cur = n;
            }
            _ => break,
        }
    }
    let pts = order.into_iter().map(|k| cx.vertices[k].clone()).collect();
    PolyChain::new(pts, closed).ok()
}

/// A Cycle whose vertices are in convex position with no turn reversal
/// (collinear degree-2 vertices allowed).
pub fn is_convex_cycle(cx: &OneComplex) -> bool {
    let Some(cycle) = extract_curve(cx) else {
        return false;
    };
    if !cycle.is_closed() {
        return false;
    }
    let v = cycle.vertices();
    let n = v.len();
    let mut turn = Ordering::Equal;
    for k in 0..n {
        let o = geom::orient2d(&v[k], &v[(k + 1) % n], &v[(k + 2) % n]);
        if o == Ordering::Equal {
            continue;
        }
        if turn == Ordering::Equal {
            turn = o;
        } else if o != turn {
            return false;
        }
    }
    if turn == Ordering::Equal {
        return false;
    }
    // Hull membership: every vertex lies weakly on the inner side of every edge.
    (0..n).all(|k| {
        let (a, b) = (&v[k], &v[(k + 1) % n]);
        v.iter().all(|w| {
            let o = geom::orient2d(a, b, w);
            o == Ordering::Equal || o == turn
        })
    })
}
