//! Discrete Fréchet, continuous Fréchet and Hausdorff distances.
//!
//! The continuous Fréchet distance is decided with the free-space diagram of
//! the two curves and evaluated by bisecting on the leash length between the
//! endpoint lower bound and the discrete Fréchet upper bound.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ObjectKind, Result};
use crate::geometry::{dist, Curve, GeomObject, Point, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "frechet")]
    ContinuousFrechet,
    #[serde(rename = "discrete-frechet")]
    DiscreteFrechet,
    #[serde(rename = "hausdorff")]
    Hausdorff,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [
        MetricKind::ContinuousFrechet,
        MetricKind::DiscreteFrechet,
        MetricKind::Hausdorff,
    ];

    /// The object kind this metric is defined on.
    pub fn object_kind(self) -> ObjectKind {
        match self {
            MetricKind::ContinuousFrechet | MetricKind::DiscreteFrechet => ObjectKind::Curve,
            MetricKind::Hausdorff => ObjectKind::PointSet,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::ContinuousFrechet => "frechet",
            MetricKind::DiscreteFrechet => "discrete-frechet",
            MetricKind::Hausdorff => "hausdorff",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frechet" | "continuous-frechet" => Ok(MetricKind::ContinuousFrechet),
            "discrete-frechet" => Ok(MetricKind::DiscreteFrechet),
            "hausdorff" => Ok(MetricKind::Hausdorff),
            other => Err(Error::InvalidParameter(format!("unknown metric '{other}'"))),
        }
    }
}

/// Stopping precision for the continuous Fréchet bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetTolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl FrechetTolerance {
    pub fn new(relative: f64, absolute: f64) -> Result<Self> {
        if !(relative > 0.0 && absolute > 0.0) || !relative.is_finite() || !absolute.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Fréchet tolerance must be positive (relative {relative}, absolute {absolute})"
            )));
        }
        Ok(FrechetTolerance { relative, absolute })
    }
}

impl Default for FrechetTolerance {
    fn default() -> Self {
        FrechetTolerance {
            relative: 1e-9,
            absolute: 1e-12,
        }
    }
}

fn check_curve_dims(c1: &Curve, c2: &Curve) -> Result<()> {
    if c1.dim() != c2.dim() {
        return Err(Error::DimensionMismatch {
            left: c1.dim(),
            right: c2.dim(),
        });
    }
    Ok(())
}

pub fn discrete_frechet(c1: &Curve, c2: &Curve) -> Result<f64> {
    check_curve_dims(c1, c2)?;
    Ok(discrete_frechet_raw(c1.vertices(), c2.vertices()))
}

pub(crate) fn discrete_frechet_raw(p: &[Point], q: &[Point]) -> f64 {
    let m = q.len();
    let mut prev = vec![0.0; m];
    let mut cur = vec![0.0; m];
    for (i, pi) in p.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            let d = dist(pi.coords(), qj.coords());
            cur[j] = match (i, j) {
                (0, 0) => d,
                (0, _) => d.max(cur[j - 1]),
                (_, 0) => d.max(prev[0]),
                _ => d.max(prev[j].min(cur[j - 1]).min(prev[j - 1])),
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

// Tolerance on free-space interval endpoints, in segment parameter units.
const PARAM_EPS: f64 = 1e-9;

type Interval = Option<(f64, f64)>;

/// Parameters t ∈ [0,1] with ‖a + t(b−a) − x‖ ≤ r.
fn free_interval(x: &[f64], a: &[f64], b: &[f64], r: f64) -> Interval {
    let mut uu = 0.0;
    let mut wu = 0.0;
    let mut ww = 0.0;
    for i in 0..x.len() {
        let u = b[i] - a[i];
        let w = a[i] - x[i];
        uu += u * u;
        wu += w * u;
        ww += w * w;
    }
    let c = ww - r * r;
    if uu == 0.0 {
        return if c <= 0.0 { Some((0.0, 1.0)) } else { None };
    }
    let disc = wu * wu - uu * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // numerically stable roots of uu·t² + 2wu·t + c
    let q = -(wu + wu.signum() * sq);
    let (t1, t2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / uu, c / q)
    };
    let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    clip_unit(lo, hi)
}

fn clip_unit(lo: f64, hi: f64) -> Interval {
    let lo = lo.max(0.0);
    let hi = hi.min(1.0);
    if lo > hi + PARAM_EPS {
        return None;
    }
    let lo = if lo <= PARAM_EPS { 0.0 } else { lo.min(hi) };
    let hi = if hi >= 1.0 - PARAM_EPS { 1.0 } else { hi };
    Some((lo, hi.max(lo)))
}

fn restrict_from(iv: Interval, from: f64) -> Interval {
    let (lo, hi) = iv?;
    let lo = lo.max(from);
    if lo > hi + PARAM_EPS {
        None
    } else {
        Some((lo.min(hi), hi))
    }
}

/// Decides whether the continuous Fréchet distance is at most `r`.
pub fn continuous_frechet_decision(c1: &Curve, c2: &Curve, r: f64) -> Result<bool> {
    check_curve_dims(c1, c2)?;
    if r < 0.0 || r.is_nan() {
        return Err(Error::NegativeRadius(r));
    }
    Ok(frechet_decide_raw(c1.vertices(), c2.vertices(), r))
}

pub(crate) fn frechet_decide_raw(p: &[Point], q: &[Point], r: f64) -> bool {
    // Slack below the bisection precision absorbs rounding at tangencies.
    let r = r * (1.0 + 1e-13) + 1e-14;
    let n = p.len();
    let m = q.len();
    if n == 1 || m == 1 {
        let (single, other) = if n == 1 { (&p[0], q) } else { (&q[0], p) };
        return other.iter().all(|v| dist(single.coords(), v.coords()) <= r);
    }
    if dist(p[0].coords(), q[0].coords()) > r || dist(p[n - 1].coords(), q[m - 1].coords()) > r {
        return false;
    }

    // left[i*(m-1)+j]: free part of the edge at vertex p_i along segment q_j q_{j+1}
    // bottom[i*m+j]: free part of the edge at vertex q_j along segment p_i p_{i+1}
    let left_free = |i: usize, j: usize| free_interval(p[i].coords(), q[j].coords(), q[j + 1].coords(), r);
    let bottom_free = |i: usize, j: usize| free_interval(q[j].coords(), p[i].coords(), p[i + 1].coords(), r);

    let mut left: Vec<Interval> = vec![None; n * (m - 1)];
    let mut bottom: Vec<Interval> = vec![None; (n - 1) * m];

    // Along the boundary a free interval is reachable only if it starts at
    // 0 and everything before it was fully free.
    for j in 0..m - 1 {
        if j > 0 && !matches!(left[j - 1], Some((_, hi)) if hi == 1.0) {
            break;
        }
        left[j] = left_free(0, j).filter(|&(lo, _)| lo == 0.0);
    }
    for i in 0..n - 1 {
        if i > 0 && !matches!(bottom[(i - 1) * m], Some((_, hi)) if hi == 1.0) {
            break;
        }
        bottom[i * m] = bottom_free(i, 0).filter(|&(lo, _)| lo == 0.0);
    }

    for i in 0..n - 1 {
        for j in 0..m - 1 {
            let l = left[i * (m - 1) + j];
            let b = bottom[i * m + j];
            if l.is_none() && b.is_none() {
                continue;
            }
            let right = if b.is_some() {
                left_free(i + 1, j)
            } else {
                restrict_from(left_free(i + 1, j), l.unwrap().0)
            };
            let top = if l.is_some() {
                bottom_free(i, j + 1)
            } else {
                restrict_from(bottom_free(i, j + 1), b.unwrap().0)
            };
            left[(i + 1) * (m - 1) + j] = right;
            bottom[i * m + j + 1] = top;
        }
    }
    let via_right = matches!(left[(n - 1) * (m - 1) + m - 2], Some((_, hi)) if hi == 1.0);
    let via_top = matches!(bottom[(n - 2) * m + m - 1], Some((_, hi)) if hi == 1.0);
    via_right || via_top
}

/// Continuous Fréchet distance, to within `tol`.
pub fn continuous_frechet(c1: &Curve, c2: &Curve, tol: FrechetTolerance) -> Result<f64> {
    check_curve_dims(c1, c2)?;
    Ok(continuous_frechet_raw(c1.vertices(), c2.vertices(), tol))
}

pub(crate) fn continuous_frechet_raw(p: &[Point], q: &[Point], tol: FrechetTolerance) -> f64 {
    let lb = dist(p[0].coords(), q[0].coords())
        .max(dist(p[p.len() - 1].coords(), q[q.len() - 1].coords()));
    if frechet_decide_raw(p, q, lb) {
        return lb;
    }
    let mut lo = lb;
    let mut hi = discrete_frechet_raw(p, q);
    while hi - lo > tol.relative * hi + tol.absolute {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if frechet_decide_raw(p, q, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn hausdorff(s1: &PointSet, s2: &PointSet) -> Result<f64> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            left: s1.dim(),
            right: s2.dim(),
        });
    }
    Ok(hausdorff_raw(s1.points(), s2.points()))
}

/// Largest distance from a point of `a` to its nearest neighbor in `b`.
pub(crate) fn directed_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    a.iter()
        .map(|p| {
            b.iter()
                .map(|q| dist(p.coords(), q.coords()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

pub(crate) fn hausdorff_raw(a: &[Point], b: &[Point]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Checks that `obj` can be measured with `kind`.
pub fn check_kind(kind: MetricKind, obj: &GeomObject) -> Result<()> {
    if obj.kind() != kind.object_kind() {
        return Err(Error::KindMismatch {
            metric: kind,
            object: obj.kind(),
        });
    }
    Ok(())
}

/// Distance between two objects under `kind`.
pub fn distance(kind: MetricKind, a: &GeomObject, b: &GeomObject, tol: FrechetTolerance) -> Result<f64> {
    check_kind(kind, a)?;
    check_kind(kind, b)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(distance_unchecked(kind, a, b, tol))
}

/// Dispatch without kind or dimension checks; callers validate up front.
pub(crate) fn distance_unchecked(kind: MetricKind, a: &GeomObject, b: &GeomObject, tol: FrechetTolerance) -> f64 {
    let (p, q) = (a.points(), b.points());
    match kind {
        MetricKind::ContinuousFrechet => continuous_frechet_raw(p, q, tol),
        MetricKind::DiscreteFrechet => discrete_frechet_raw(p, q),
        MetricKind::Hausdorff => hausdorff_raw(p, q),
    }
}
