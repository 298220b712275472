//! Points, polygonal curves and finite point sets in ℝ^d, plus the two
//! Euclidean primitives every metric is built from.

use serde::{Deserialize, Serialize};

use crate::error::{Error, ObjectKind, Result};

/// Absolute tolerance for geometric comparisons.
pub const GEOM_EPS: f64 = 1e-12;

/// A point in ℝ^d with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

fn check_dims(p: &Point, q: &Point) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    Ok(())
}

fn check_uniform_dim(points: &[Point]) -> Result<usize> {
    let d = points[0].dim();
    for p in &points[1..] {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: p.dim(),
            });
        }
    }
    Ok(d)
}

/// l₂ distance between two points.
pub fn euclidean(p: &Point, q: &Point) -> Result<f64> {
    check_dims(p, q)?;
    Ok(dist(p.coords(), q.coords()))
}

/// Distance from `x` to the closed segment `ab`. `a` and `b` may coincide.
pub fn point_segment_distance(x: &Point, a: &Point, b: &Point) -> Result<f64> {
    check_dims(x, a)?;
    check_dims(x, b)?;
    Ok(seg_dist(x.coords(), a.coords(), b.coords()))
}

#[inline]
pub(crate) fn dist(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn seg_dist(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut uu = 0.0;
    let mut xu = 0.0;
    for i in 0..x.len() {
        let u = b[i] - a[i];
        uu += u * u;
        xu += (x[i] - a[i]) * u;
    }
    if uu == 0.0 {
        return dist(x, a);
    }
    let t = (xu / uu).clamp(0.0, 1.0);
    x.iter()
        .zip(a.iter().zip(b))
        .map(|(&xi, (&ai, &bi))| {
            let d = xi - (ai + t * (bi - ai));
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// An ordered, nonempty sequence of vertices of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    vertices: Vec<Point>,
}

impl Curve {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Empty("curve"));
        }
        check_uniform_dim(&vertices)?;
        Ok(Curve { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

/// A nonempty finite point set. Exact duplicates are collapsed on
/// construction, keeping first occurrences in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("point set"));
        }
        check_uniform_dim(&points)?;
        let mut unique: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        Ok(PointSet { points: unique })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }
}

/// An element of an instance or a center: either a curve or a point set.
#[derive(Debug, Clone, PartialEq)]
pub enum GeomObject {
    Curve(Curve),
    PointSet(PointSet),
}

impl GeomObject {
    pub fn kind(&self) -> ObjectKind {
        match self {
            GeomObject::Curve(_) => ObjectKind::Curve,
            GeomObject::PointSet(_) => ObjectKind::PointSet,
        }
    }

    /// Vertices of a curve or the members of a point set.
    pub fn points(&self) -> &[Point] {
        match self {
            GeomObject::Curve(c) => c.vertices(),
            GeomObject::PointSet(s) => s.points(),
        }
    }

    /// Number of points (the object's complexity).
    pub fn len(&self) -> usize {
        self.points().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.points()[0].dim()
    }

    /// Rebuilds an object of the same kind from new points.
    pub fn with_points(&self, points: Vec<Point>) -> Result<GeomObject> {
        match self {
            GeomObject::Curve(_) => Curve::new(points).map(GeomObject::Curve),
            GeomObject::PointSet(_) => PointSet::new(points).map(GeomObject::PointSet),
        }
    }

    pub fn from_kind(kind: ObjectKind, points: Vec<Point>) -> Result<GeomObject> {
        match kind {
            ObjectKind::Curve => Curve::new(points).map(GeomObject::Curve),
            ObjectKind::PointSet => PointSet::new(points).map(GeomObject::PointSet),
        }
    }

    /// Multiplies every coordinate by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<GeomObject> {
        let pts = self
            .points()
            .iter()
            .map(|p| {
                let mut p = p.clone();
                p.coords_mut().iter_mut().for_each(|c| *c *= factor);
                p
            })
            .collect();
        self.with_points(pts)
    }
}

impl From<Curve> for GeomObject {
    fn from(c: Curve) -> Self {
        GeomObject::Curve(c)
    }
}

impl From<PointSet> for GeomObject {
    fn from(s: PointSet) -> Self {
        GeomObject::PointSet(s)
    }
}

/// Convenience constructor used throughout tests and generators.
pub fn pt(coords: &[f64]) -> Point {
    Point::new(coords.to_vec()).expect("finite, nonempty coordinates")
}
