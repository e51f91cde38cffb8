//! Polygonal curves with exact rational vertices, their coordinate-hyperplane
//! projections, and the plain-text curve file format.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::geom::{self, Meet};
use crate::rational::Rational;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
}

/// A point in R^n; `coords[k]` is the (k+1)-th coordinate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    /// Drops coordinate `axis` (1-based).
    pub fn drop_axis(&self, axis: usize) -> Point {
        let mut c = self.0.clone();
        c.remove(axis - 1);
        Point(c)
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|x| x * s).collect())
    }

    pub fn translate(&self, by: &[Rational]) -> Point {
        Point(self.0.iter().zip(by).map(|(x, d)| x + d).collect())
    }

    /// Appends one coordinate.
    pub fn extend(&self, last: Rational) -> Point {
        let mut c = self.0.clone();
        c.push(last);
        Point(c)
    }

    pub fn l1_dist(&self, other: &Point) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + (a - b).abs())
    }

    pub fn linf_dist(&self, other: &Point) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_default()
    }
}

impl Index<usize> for Point {
    type Output = Rational;
    fn index(&self, k: usize) -> &Rational {
        &self.0[k]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Simple polygonal path (`closed == false`) or cycle in R^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PolyChain {
    vertices: Vec<Point>,
    closed: bool,
}

impl<'de> Deserialize<'de> for PolyChain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Point>,
            closed: bool,
        }
        let raw = Raw::deserialize(d)?;
        PolyChain::new(raw.vertices, raw.closed).map_err(serde::de::Error::custom)
    }
}

impl PolyChain {
    /// Validates dimension, vertex count, distinct consecutive vertices and
    /// simplicity.
    pub fn new(vertices: Vec<Point>, closed: bool) -> Result<Self, CurveError> {
        let chain = PolyChain { vertices, closed };
        chain.validate()?;
        Ok(chain)
    }

    fn validate(&self) -> Result<(), CurveError> {
        let v = &self.vertices;
        let min = if self.closed { 3 } else { 2 };
        if v.len() < min {
            return Err(CurveError::Validation(format!(
                "{} chain needs at least {min} vertices, got {}",
                if self.closed { "closed" } else { "open" },
                v.len()
            )));
        }
        let dim = v[0].dim();
        if dim < 2 {
            return Err(CurveError::Validation(format!("dimension {dim} < 2")));
        }
        if let Some(k) = v.iter().position(|p| p.dim() != dim) {
            return Err(CurveError::Validation(format!(
                "vertex {k} has dimension {}, expected {dim}",
                v[k].dim()
            )));
        }
        let m = self.segment_count();
        for k in 0..m {
            let (a, b) = self.segment(k);
            if a == b {
                return Err(CurveError::Validation(format!(
                    "duplicate consecutive vertex at vertices {k} and {}",
                    (k + 1) % v.len()
                )));
            }
        }
        if let Some((i, j)) = self.first_crossing() {
            return Err(CurveError::Validation(format!(
                "segments {i} and {j} intersect"
            )));
        }
        Ok(())
    }

    /// First pair of segments violating simplicity, if any.
    fn first_crossing(&self) -> Option<(usize, usize)> {
        let m = self.segment_count();
        for i in 0..m {
            let (a, b) = self.segment(i);
            for j in i + 1..m {
                let (c, d) = self.segment(j);
                let meet = geom::meet(a, b, c, d);
                let shared = if j == i + 1 {
                    Some(b)
                } else if self.closed && i == 0 && j == m - 1 {
                    Some(a)
                } else {
                    None
                };
                let ok = match (&meet, shared) {
                    (Meet::None, None) => true,
                    (Meet::Point(p), Some(s)) => p == s,
                    _ => false,
                };
                if !ok {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    pub fn segment(&self, k: usize) -> (&Point, &Point) {
        let n = self.vertices.len();
        (&self.vertices[k], &self.vertices[(k + 1) % n])
    }

    pub fn segments(&self) -> Vec<(Point, Point)> {
        (0..self.segment_count())
            .map(|k| {
                let (a, b) = self.segment(k);
                (a.clone(), b.clone())
            })
            .collect()
    }

    pub fn check_axis(&self, axis: usize) -> Result<(), CurveError> {
        if axis == 0 || axis > self.dim() {
            Err(CurveError::AxisOutOfRange {
                axis,
                dim: self.dim(),
            })
        } else {
            Ok(())
        }
    }

    /// The point at vertex parameter `t`: vertex `floor(t)` plus the fractional
    /// part along the following segment. Closed chains wrap modulo their length.
    pub fn point_at(&self, t: &Rational) -> Point {
        let m = self.segment_count() as i64;
        let mut k = t.floor_i64().expect("parameter out of range");
        let mut frac = t - Rational::from_int(k);
        if self.closed {
            k = k.rem_euclid(m);
        } else if k >= m {
            k = m - 1;
            frac = Rational::one();
        }
        let (a, b) = self.segment(k as usize);
        let dir = geom::sub(b, a);
        geom::along(a, &dir, &frac)
    }

    /// Sub-curve between parameters `u <= v` as a polyline (closed chains may
    /// pass `v` beyond the segment count to wrap around).
    pub fn sub_polyline(&self, u: &Rational, v: &Rational) -> Vec<Point> {
        let mut pts = vec![self.point_at(u)];
        let start = u.floor_i64().unwrap() + 1;
        let end = v.floor_i64().unwrap();
        let mut k = start;
        while k <= end {
            let t = Rational::from_int(k);
            if &t < v {
                pts.push(self.point_at(&t));
            }
            k += 1;
        }
        let last = self.point_at(v);
        if pts.last() != Some(&last) {
            pts.push(last);
        }
        pts
    }

    pub fn reversed(&self) -> PolyChain {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyChain {
            vertices: v,
            closed: self.closed,
        }
    }

    /// Coordinate range `(min, max)` along `axis` (1-based).
    pub fn extremes(&self, axis: usize) -> Result<(Rational, Rational), CurveError> {
        self.check_axis(axis)?;
        let vals = self.vertices.iter().map(|p| &p[axis - 1]);
        let lo = vals.clone().min().unwrap().clone();
        let hi = vals.max().unwrap().clone();
        Ok((lo, hi))
    }

    /// Curve file text for this chain.
    pub fn to_curve_text(&self) -> String {
        let mut s = String::from(if self.closed { "closed\n" } else { "open\n" });
        for p in &self.vertices {
            let line: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Projected segments of a curve plus any isolated points.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SegmentSet {
    pub segments: Vec<(Point, Point)>,
    pub isolated: Vec<Point>,
}

impl SegmentSet {
    pub fn new(segments: Vec<(Point, Point)>) -> Self {
        SegmentSet {
            segments: segments.into_iter().filter(|(a, b)| a != b).collect(),
            isolated: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty() && self.isolated.is_empty()
    }
}

/// Orthogonal projection into the coordinate hyperplane of `axis` (1-based).
pub fn project(chain: &PolyChain, axis: usize) -> Result<SegmentSet, CurveError> {
    chain.check_axis(axis)?;
    let mut out = SegmentSet::default();
    for (a, b) in chain.segments() {
        let (pa, pb) = (a.drop_axis(axis), b.drop_axis(axis));
        if pa != pb {
            out.segments.push((pa, pb));
        }
    }
    if out.segments.is_empty() {
        out.isolated.push(chain.vertices[0].drop_axis(axis));
    }
    Ok(out)
}

/// Parses the curve file format: a header line `open` or `closed`, then one
/// vertex per line as whitespace-separated rationals. `#` starts a comment.
pub fn parse_curve(text: &str) -> Result<PolyChain, CurveError> {
    let mut closed = None;
    let mut vertices = Vec::new();
    let mut lines_of = Vec::new();
    let mut dim = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if closed.is_none() {
            closed = Some(match line {
                "open" => false,
                "closed" => true,
                other => {
                    return Err(CurveError::Parse {
                        line: line_no,
                        message: format!("expected `open` or `closed`, found {other:?}"),
                    })
                }
            });
            continue;
        }
        let coords: Vec<Rational> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse().map_err(|_| CurveError::Parse {
                    line: line_no,
                    message: format!("malformed rational {tok:?}"),
                })
            })
            .collect::<Result<_, _>>()?;
        let n = *dim.get_or_insert(coords.len());
        if coords.len() != n {
            return Err(CurveError::Parse {
                line: line_no,
                message: format!("expected {n} coordinates, found {}", coords.len()),
            });
        }
        vertices.push(Point::new(coords));
        lines_of.push(line_no);
    }
    let closed = closed.ok_or(CurveError::Parse {
        line: 1,
        message: "missing `open`/`closed` header".into(),
    })?;
    PolyChain::new(vertices, closed).map_err(|e| match e {
        CurveError::Validation(msg) => {
            CurveError::Validation(annotate_lines(&msg, &lines_of))
        }
        other => other,
    })
}

fn annotate_lines(msg: &str, lines_of: &[usize]) -> String {
    let nums: Vec<usize> = msg
        .split(|c: char| !c.is_ascii_digit())
        .filter_map(|s| s.parse().ok())
        .collect();
    if msg.starts_with("duplicate") && nums.len() >= 2 {
        if let (Some(a), Some(b)) = (lines_of.get(nums[0]), lines_of.get(nums[1])) {
            return format!("{msg} (lines {a} and {b})");
        }
    }
    if msg.starts_with("segments") && nums.len() >= 2 {
        let seg = |k: usize| {
            let a = lines_of.get(k).copied().unwrap_or(0);
            let b = lines_of
                .get(k + 1)
                .or(lines_of.first())
                .copied()
                .unwrap_or(0);
            format!("lines {a}-{b}")
        };
        return format!("{msg} ({} and {})", seg(nums[0]), seg(nums[1]));
    }
    msg.to_string()
}
