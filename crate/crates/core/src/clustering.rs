//! Clustering instances, the (k,C)-median cost, Voronoi assignment,
//! l-simplification and a seeding + local-search bicriteria approximation.

use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dist, GeomObject, Point};
use crate::metrics::{
    check_kind, continuous_frechet_raw, discrete_frechet_raw, distance_unchecked,
    FrechetTolerance, MetricKind,
};
use crate::rng::{stage_rng, Stage};

/// Tolerance on the sum of normalized weights.
pub const WEIGHT_SUM_EPS: f64 = 1e-9;

/// Worst-case ratio between the error of [`simplify`] on a curve and the
/// best error of any vertex subsequence of the same size.
pub const CURVE_SIMPLIFICATION_FACTOR: f64 = 4.0;

/// Same, for point sets (farthest-point traversal).
pub const POINTSET_SIMPLIFICATION_FACTOR: f64 = 2.0;

/// Default declared approximation factor of [`bicriteria`].
pub const DEFAULT_ALPHA: f64 = 16.0;

/// Default center multiplier of [`bicriteria`].
pub const DEFAULT_BETA: f64 = 2.0;

/// Largest candidate pool the local search keeps a full distance matrix for.
/// Bigger instances search over a seeded subsample of this many inputs.
pub const LOCAL_SEARCH_POOL_CAP: usize = 1024;

/// A weighted multiset of curves or point sets together with the
/// clustering parameters.
#[derive(Debug, Clone)]
pub struct ClusteringInstance {
    objects: Vec<GeomObject>,
    weights: Vec<f64>,
    metric: MetricKind,
    k: usize,
    l: usize,
    m: usize,
    d: usize,
    tol: FrechetTolerance,
}

impl ClusteringInstance {
    /// Builds an instance. Weights are normalized to sum to one; `None`
    /// means uniform.
    pub fn new(
        objects: Vec<GeomObject>,
        weights: Option<Vec<f64>>,
        metric: MetricKind,
        k: usize,
        l: usize,
    ) -> Result<Self> {
        let weights = match weights {
            Some(w) => {
                if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                    return Err(Error::InvalidInstance(format!("nonpositive weight {bad}")));
                }
                let total: f64 = w.iter().sum();
                Some(w.into_iter().map(|x| x / total).collect())
            }
            None => None,
        };
        Self::new_normalized(objects, weights, metric, k, l)
    }

    /// Like [`ClusteringInstance::new`] but keeps weights as given once they
    /// already sum to one within [`WEIGHT_SUM_EPS`].
    pub fn new_normalized(
        objects: Vec<GeomObject>,
        weights: Option<Vec<f64>>,
        metric: MetricKind,
        k: usize,
        l: usize,
    ) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::Empty("instance"));
        }
        if k < 1 || l < 1 {
            return Err(Error::InvalidParameter(format!("k and l must be ≥ 1 (k={k}, l={l})")));
        }
        let d = objects[0].dim();
        for o in &objects {
            check_kind(metric, o)?;
            if o.dim() != d {
                return Err(Error::DimensionMismatch { left: d, right: o.dim() });
            }
        }
        let n = objects.len();
        let weights = match weights {
            None => vec![1.0 / n as f64; n],
            Some(w) => {
                if w.len() != n {
                    return Err(Error::InvalidInstance(format!(
                        "{} weights for {} objects",
                        w.len(),
                        n
                    )));
                }
                if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                    return Err(Error::InvalidInstance(format!("nonpositive weight {bad}")));
                }
                let total: f64 = w.iter().sum();
                if (total - 1.0).abs() > WEIGHT_SUM_EPS {
                    return Err(Error::InvalidInstance(format!("weights sum to {total}, not 1")));
                }
                w
            }
        };
        let m = objects.iter().map(GeomObject::len).max().unwrap_or(1);
        Ok(ClusteringInstance {
            objects,
            weights,
            metric,
            k,
            l,
            m,
            d,
            tol: FrechetTolerance::default(),
        })
    }

    pub fn with_tolerance(mut self, tol: FrechetTolerance) -> Self {
        self.tol = tol;
        self
    }

    /// Raises the declared maximum complexity `m` above the observed one.
    pub fn with_max_complexity(mut self, m: usize) -> Result<Self> {
        if m < self.m {
            return Err(Error::InvalidInstance(format!(
                "an object has {} points, more than m={m}",
                self.m
            )));
        }
        self.m = m;
        Ok(self)
    }

    /// Same objects and weights with different clustering parameters.
    pub fn with_params(&self, k: usize, l: usize) -> Result<Self> {
        if k < 1 || l < 1 {
            return Err(Error::InvalidParameter(format!("k and l must be ≥ 1 (k={k}, l={l})")));
        }
        Ok(ClusteringInstance { k, l, ..self.clone() })
    }

    pub fn objects(&self) -> &[GeomObject] {
        &self.objects
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tol(&self) -> FrechetTolerance {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn dist(&self, a: &GeomObject, b: &GeomObject) -> f64 {
        distance_unchecked(self.metric, a, b, self.tol)
    }

    /// Checks kind, dimension and the complexity bound `l` for every center.
    pub fn check_centers(&self, centers: &CenterSet) -> Result<()> {
        for c in centers.centers() {
            self.check_center(c)?;
        }
        Ok(())
    }

    pub(crate) fn check_center(&self, c: &GeomObject) -> Result<()> {
        check_kind(self.metric, c)?;
        if c.dim() != self.d {
            return Err(Error::DimensionMismatch { left: self.d, right: c.dim() });
        }
        if c.len() > self.l {
            return Err(Error::InvalidParameter(format!(
                "center has {} points, more than l={}",
                c.len(),
                self.l
            )));
        }
        Ok(())
    }
}

/// A nonempty list of centers.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSet {
    centers: Vec<GeomObject>,
}

impl CenterSet {
    pub fn new(centers: Vec<GeomObject>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::Empty("center set"));
        }
        Ok(CenterSet { centers })
    }

    pub fn centers(&self) -> &[GeomObject] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_inner(self) -> Vec<GeomObject> {
        self.centers
    }
}

/// Nearest center per object. Ties go to the lowest center index.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub owner: Vec<usize>,
    pub dist: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BicriteriaSolution {
    pub centers: CenterSet,
    pub alpha: f64,
    pub beta: f64,
}

pub(crate) fn nearest(inst: &ClusteringInstance, obj: &GeomObject, centers: &[GeomObject]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, c) in centers.iter().enumerate() {
        let d = inst.dist(obj, c);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

pub fn assign(inst: &ClusteringInstance, centers: &CenterSet) -> Result<Assignment> {
    inst.check_centers(centers)?;
    let (owner, dist) = inst
        .objects
        .par_iter()
        .map(|o| nearest(inst, o, centers.centers()))
        .unzip();
    Ok(Assignment { owner, dist })
}

/// Weighted (k,C)-median cost Σ μ(p)·min_c d(p,c).
pub fn cost(inst: &ClusteringInstance, centers: &CenterSet) -> Result<f64> {
    let a = assign(inst, centers)?;
    Ok(weighted_sum(&inst.weights, &a.dist))
}

/// Σ w_i·x_i in index order.
pub(crate) fn weighted_sum(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Reduces `obj` to at most `l` points.
///
/// Curves keep a vertex subsequence including both endpoints that minimizes
/// the largest per-shortcut Fréchet error; point sets keep the first `l`
/// points of a farthest-point traversal.
pub fn simplify(obj: &GeomObject, l: usize, kind: MetricKind, tol: FrechetTolerance) -> Result<GeomObject> {
    if l < 1 {
        return Err(Error::InvalidParameter("l must be ≥ 1".into()));
    }
    check_kind(kind, obj)?;
    if obj.len() <= l {
        return Ok(obj.clone());
    }
    let pts = obj.points();
    let kept: Vec<Point> = match kind {
        MetricKind::Hausdorff => farthest_point_subset(pts, l),
        MetricKind::DiscreteFrechet | MetricKind::ContinuousFrechet => {
            simplify_curve(pts, l, kind, tol).into_iter().map(|i| pts[i].clone()).collect()
        }
    };
    obj.with_points(kept)
}

fn farthest_point_subset(pts: &[Point], l: usize) -> Vec<Point> {
    let mut chosen = vec![0usize];
    let mut gap: Vec<f64> = pts.iter().map(|p| dist(p.coords(), pts[0].coords())).collect();
    while chosen.len() < l {
        let (next, far) = gap
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &g)| if g > acc.1 { (i, g) } else { acc });
        if far <= 0.0 {
            break;
        }
        chosen.push(next);
        for (g, p) in gap.iter_mut().zip(pts) {
            *g = g.min(dist(p.coords(), pts[next].coords()));
        }
    }
    chosen.into_iter().map(|i| pts[i].clone()).collect()
}

/// Error of replacing vertices `i..=j` by the segment from `i` to `j`.
fn shortcut_error(pts: &[Point], i: usize, j: usize, kind: MetricKind, tol: FrechetTolerance) -> f64 {
    let seg = [pts[i].clone(), pts[j].clone()];
    match kind {
        MetricKind::DiscreteFrechet => discrete_frechet_raw(&seg, &pts[i..=j]),
        _ => {
            // cheap lower bound first: every skipped vertex must be near the segment
            let lb = pts[i + 1..j]
                .iter()
                .map(|v| crate::geometry::seg_dist(v.coords(), pts[i].coords(), pts[j].coords()))
                .fold(0.0, f64::max);
            if lb == 0.0 && is_monotone_along(pts, i, j) {
                return 0.0;
            }
            continuous_frechet_raw(&seg, &pts[i..=j], tol)
        }
    }
}

// True when vertices i..=j lie on segment ij in order.
fn is_monotone_along(pts: &[Point], i: usize, j: usize) -> bool {
    let a = pts[i].coords();
    let b = pts[j].coords();
    let uu: f64 = a.iter().zip(b).map(|(x, y)| (y - x) * (y - x)).sum();
    if uu == 0.0 {
        return pts[i..=j].iter().all(|p| p.coords() == a);
    }
    let mut last = 0.0;
    for p in &pts[i..=j] {
        let t: f64 = p.coords().iter().zip(a).zip(b).map(|((x, ai), bi)| (x - ai) * (bi - ai)).sum::<f64>() / uu;
        if t < last {
            return false;
        }
        last = t;
    }
    true
}

/// Vertex indices of the simplified curve.
fn simplify_curve(pts: &[Point], l: usize, kind: MetricKind, tol: FrechetTolerance) -> Vec<usize> {
    let n = pts.len();
    if l == 1 {
        // a single point sits at distance max_v ‖v − x‖ from the curve
        let best = (0..n)
            .map(|i| {
                let e = pts.iter().map(|v| dist(v.coords(), pts[i].coords())).fold(0.0, f64::max);
                (i, e)
            })
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        return vec![best.0];
    }
    let mut err = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 2..n {
            err[i * n + j] = shortcut_error(pts, i, j, kind, tol);
        }
    }
    let mut candidates: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| err[i * n + j])
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // smallest candidate error admitting a path with ≤ l vertices
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if fewest_vertices(&err, n, candidates[mid]).len() <= l {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    fewest_vertices(&err, n, candidates[lo])
}

/// Shortest (in vertex count) path from the first to the last vertex using
/// shortcuts with error ≤ r.
fn fewest_vertices(err: &[f64], n: usize, r: f64) -> Vec<usize> {
    let mut hops = vec![usize::MAX; n];
    let mut parent = vec![0usize; n];
    hops[0] = 0;
    for i in 0..n {
        if hops[i] == usize::MAX {
            continue;
        }
        for j in i + 1..n {
            if err[i * n + j] <= r && hops[i] + 1 < hops[j] {
                hops[j] = hops[i] + 1;
                parent[j] = i;
            }
        }
    }
    let mut path = vec![n - 1];
    let mut v = n - 1;
    while v != 0 {
        v = parent[v];
        path.push(v);
    }
    path.reverse();
    path
}

/// Key for exact-equality deduplication of objects.
fn object_key(o: &GeomObject) -> Vec<u64> {
    o.points().iter().flat_map(|p| p.coords().iter().map(|c| c.to_bits())).chain([o.len() as u64]).collect()
}

/// Simplified inputs and their distances to every input object; shared by
/// repeated bicriteria runs on the same instance.
pub(crate) struct SwapPool {
    pub(crate) candidates: Vec<GeomObject>,
    // candidate index per object when the object's simplification is pooled
    source: Vec<Option<usize>>,
    // row-major objects × candidates
    dist: Vec<f64>,
}

impl SwapPool {
    pub(crate) fn build(inst: &ClusteringInstance, seed: u64) -> Result<Self> {
        let n = inst.len();
        let members: Vec<usize> = if n <= LOCAL_SEARCH_POOL_CAP {
            (0..n).collect()
        } else {
            let mut rng = stage_rng(seed, Stage::CandidateSubsample);
            let mut idx = sample_indices(&mut rng, n, LOCAL_SEARCH_POOL_CAP).into_vec();
            idx.sort_unstable();
            idx
        };
        let simplified: Vec<GeomObject> = members
            .par_iter()
            .map(|&i| simplify(&inst.objects[i], inst.l, inst.metric, inst.tol))
            .collect::<Result<_>>()?;
        let mut candidates = Vec::new();
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut source = vec![None; n];
        for (&i, s) in members.iter().zip(simplified) {
            let idx = *seen.entry(object_key(&s)).or_insert_with(|| {
                candidates.push(s);
                candidates.len() - 1
            });
            source[i] = Some(idx);
        }
        let c = candidates.len();
        let dist: Vec<f64> = (0..n * c)
            .into_par_iter()
            .map(|x| inst.dist(&inst.objects[x / c], &candidates[x % c]))
            .collect();
        Ok(SwapPool { candidates, source, dist })
    }

    fn row(&self, p: usize) -> &[f64] {
        let c = self.candidates.len();
        &self.dist[p * c..(p + 1) * c]
    }

    /// D¹ seeding followed by single-swap local search.
    pub(crate) fn solve(&self, inst: &ClusteringInstance, beta: f64, alpha: f64, seed: u64) -> Result<BicriteriaSolution> {
        let n = inst.len();
        let c = self.candidates.len();
        let target = ((beta * inst.k as f64).ceil() as usize).max(1).min(c);
        let mut rng = stage_rng(seed, Stage::Bicriteria);
        let mu = &inst.weights;

        let mut chosen: Vec<usize> = Vec::with_capacity(target);
        let mut gap = vec![f64::INFINITY; n];
        while chosen.len() < target {
            let mut pick_weight = vec![0.0; c];
            for p in 0..n {
                if let Some(j) = self.source[p] {
                    let g = if chosen.is_empty() { 1.0 } else { gap[p] };
                    pick_weight[j] += mu[p] * g;
                }
            }
            for &j in &chosen {
                pick_weight[j] = 0.0;
            }
            let next = match WeightedIndex::new(&pick_weight) {
                Ok(w) => w.sample(&mut rng),
                // every pooled object already sits on a center: fill with
                // unused candidates in index order
                Err(_) => match (0..c).find(|j| !chosen.contains(j)) {
                    Some(j) => j,
                    None => break,
                },
            };
            chosen.push(next);
            for (p, g) in gap.iter_mut().enumerate() {
                *g = g.min(self.row(p)[next]);
            }
        }

        self.local_search(inst, &mut chosen);
        let centers = chosen.iter().map(|&j| self.candidates[j].clone()).collect();
        Ok(BicriteriaSolution {
            centers: CenterSet::new(centers)?,
            alpha,
            beta,
        })
    }

    fn local_search(&self, inst: &ClusteringInstance, chosen: &mut [usize]) {
        let n = inst.len();
        let c = self.candidates.len();
        let mu = &inst.weights;
        let threshold = 1.0 - 1.0 / (4.0 * inst.k as f64);
        let budget = 50 * inst.k;

        for _ in 0..budget {
            // best and second-best slot distances per object
            let mut best = vec![(usize::MAX, f64::INFINITY); n];
            let mut second = vec![f64::INFINITY; n];
            for p in 0..n {
                let row = self.row(p);
                for (s, &j) in chosen.iter().enumerate() {
                    let d = row[j];
                    if d < best[p].1 {
                        second[p] = best[p].1;
                        best[p] = (s, d);
                    } else if d < second[p] {
                        second[p] = d;
                    }
                }
            }
            let current: f64 = (0..n).map(|p| mu[p] * best[p].1).sum();
            if current <= 0.0 {
                return;
            }
            let swap = (0..c)
                .into_par_iter()
                .filter(|j| !chosen.contains(j))
                .flat_map_iter(|j| {
                    let (best, second) = (&best, &second);
                    (0..chosen.len()).map(move |s| {
                        let total: f64 = (0..n)
                            .map(|p| {
                                let keep = if best[p].0 == s { second[p] } else { best[p].1 };
                                mu[p] * keep.min(self.row(p)[j])
                            })
                            .sum();
                        (total, s, j)
                    })
                })
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
            match swap {
                Some((total, s, j)) if total < threshold * current => chosen[s] = j,
                _ => return,
            }
        }
    }
}

/// (α,β)-bicriteria approximation: at most ⌈β·k⌉ simplified inputs as
/// centers, with `alpha_declared` as the assumed approximation factor.
pub fn bicriteria(inst: &ClusteringInstance, beta: f64, alpha_declared: f64, seed: u64) -> Result<BicriteriaSolution> {
    if !(beta >= 1.0) || !(alpha_declared >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "bicriteria needs alpha ≥ 1 and beta ≥ 1 (alpha={alpha_declared}, beta={beta})"
        )));
    }
    SwapPool::build(inst, seed)?.solve(inst, beta, alpha_declared, seed)
}
