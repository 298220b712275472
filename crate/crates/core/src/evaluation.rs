//! Empirical checks of the coreset guarantee: finite candidate pools,
//! certification reports, the adversarial lower-bound instance and the
//! fixed-function concentration trial.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Normal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{cost, CenterSet, ClusteringInstance, SwapPool, DEFAULT_ALPHA, DEFAULT_BETA};
use crate::coreset::{coreset_cost_with, distances_to_centers, draw_sample, WeightedCoreset};
use crate::error::{Error, Result};
use crate::geometry::{pt, Curve, GeomObject, Point, PointSet};
use crate::metrics::MetricKind;
use crate::rng::{stage_rng, Stage};
use crate::sensitivity::{sampling_distribution, SensitivityProfile};

/// Costs at or below this are treated as zero by [`certify`].
pub const ZERO_COST_EPS: f64 = 1e-12;

/// Default spacing of the lower-bound construction.
pub const DEFAULT_LOWER_BOUND_DELTA: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    RandomSubset,
    Perturbed,
    BicriteriaDerived,
}

#[derive(Debug, Clone)]
pub struct CandidatePool {
    pub center_sets: Vec<CenterSet>,
    pub provenance: Vec<Provenance>,
}

impl CandidatePool {
    pub fn len(&self) -> usize {
        self.center_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.center_sets.is_empty()
    }

    /// Every center multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<CandidatePool> {
        let center_sets = self
            .center_sets
            .iter()
            .map(|cs| {
                let scaled = cs.centers().iter().map(|c| c.scaled(factor)).collect::<Result<_>>()?;
                CenterSet::new(scaled)
            })
            .collect::<Result<_>>()?;
        Ok(CandidatePool {
            center_sets,
            provenance: self.provenance.clone(),
        })
    }
}

/// Diagonal of the bounding box of all points in the instance.
pub fn instance_diameter(inst: &ClusteringInstance) -> f64 {
    let d = inst.d();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in inst.objects().iter().flat_map(|o| o.points()) {
        for (i, &c) in p.coords().iter().enumerate() {
            lo[i] = lo[i].min(c);
            hi[i] = hi[i].max(c);
        }
    }
    lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
}

fn random_subset<R: Rng>(candidates: &[GeomObject], k: usize, rng: &mut R) -> Vec<GeomObject> {
    if candidates.len() >= k {
        candidates.choose_multiple(rng, k).cloned().collect()
    } else {
        (0..k).map(|_| candidates.choose(rng).unwrap().clone()).collect()
    }
}

fn perturb<R: Rng>(obj: &GeomObject, noise: &Normal<f64>, rng: &mut R) -> Result<GeomObject> {
    let pts = obj
        .points()
        .iter()
        .map(|p| Point::new(p.coords().iter().map(|c| c + rng.sample(noise)).collect()))
        .collect::<Result<Vec<_>>>()?;
    obj.with_points(pts)
}

/// `count` center sets of exactly `k` centers with at most `l` points each,
/// cycling through random subsets of simplified inputs, Gaussian
/// perturbations of such subsets (σ = 10% of the instance diameter) and
/// bicriteria solutions under distinct seeds cut or padded to `k`.
pub fn candidate_pool(inst: &ClusteringInstance, k: usize, l: usize, count: usize, seed: u64) -> Result<CandidatePool> {
    if count < 1 {
        return Err(Error::InvalidParameter("candidate count must be ≥ 1".into()));
    }
    let inst = inst.with_params(k, l)?;
    let pool = SwapPool::build(&inst, seed)?;
    let sigma = 0.1 * instance_diameter(&inst);
    let noise = Normal::new(0.0, sigma.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = stage_rng(seed, Stage::Pool);

    let mut center_sets = Vec::with_capacity(count);
    let mut provenance = Vec::with_capacity(count);
    for i in 0..count {
        let (centers, tag) = match i % 3 {
            0 => (random_subset(&pool.candidates, k, &mut rng), Provenance::RandomSubset),
            1 => {
                let base = random_subset(&pool.candidates, k, &mut rng);
                let moved = base.iter().map(|c| perturb(c, &noise, &mut rng)).collect::<Result<_>>()?;
                (moved, Provenance::Perturbed)
            }
            _ => {
                let run_seed = seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1));
                let bic = pool.solve(&inst, DEFAULT_BETA, DEFAULT_ALPHA, run_seed)?;
                let mut centers = bic.centers.into_inner();
                centers.truncate(k);
                while centers.len() < k {
                    centers.push(pool.candidates.choose(&mut rng).unwrap().clone());
                }
                (centers, Provenance::BicriteriaDerived)
            }
        };
        center_sets.push(CenterSet::new(centers)?);
        provenance.push(tag);
    }
    Ok(CandidatePool { center_sets, provenance })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateError {
    pub provenance: Provenance,
    pub cost: f64,
    pub estimate: f64,
    /// |estimate − cost|/cost; absent when the cost is zero.
    pub relative_error: Option<f64>,
    pub absolute_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub candidates: Vec<CandidateError>,
    /// Largest relative error over candidates with positive cost.
    pub max_error: f64,
    pub mean_error: f64,
    pub eps: f64,
    pub zero_cost_candidates: usize,
    /// Largest absolute error over zero-cost candidates.
    pub zero_cost_max_abs_error: f64,
    pub pass: bool,
}

/// Compares the coreset estimate with the true cost on every candidate.
pub fn certify(inst: &ClusteringInstance, cs: &WeightedCoreset, pool: &CandidatePool) -> Result<ErrorReport> {
    let mut candidates = Vec::with_capacity(pool.len());
    for (centers, &provenance) in pool.center_sets.iter().zip(&pool.provenance) {
        let c = cost(inst, centers)?;
        let est = coreset_cost_with(cs, centers, inst.metric(), inst.tol())?;
        let abs = (est - c).abs();
        candidates.push(CandidateError {
            provenance,
            cost: c,
            estimate: est,
            relative_error: (c > ZERO_COST_EPS).then(|| abs / c),
            absolute_error: abs,
        });
    }
    let rel: Vec<f64> = candidates.iter().filter_map(|c| c.relative_error).collect();
    let max_error = rel.iter().copied().fold(0.0, f64::max);
    let mean_error = if rel.is_empty() {
        0.0
    } else {
        rel.iter().sum::<f64>() / rel.len() as f64
    };
    let zero: Vec<f64> = candidates
        .iter()
        .filter(|c| c.relative_error.is_none())
        .map(|c| c.absolute_error)
        .collect();
    let zero_cost_max_abs_error = zero.iter().copied().fold(0.0, f64::max);
    Ok(ErrorReport {
        pass: max_error <= cs.meta.eps && zero_cost_max_abs_error <= ZERO_COST_EPS,
        candidates,
        max_error,
        mean_error,
        eps: cs.meta.eps,
        zero_cost_candidates: zero.len(),
        zero_cost_max_abs_error,
    })
}

/// Object ids used for the lower-bound instance: `tau_r`, `tau_1`, …
pub fn lower_bound_ids(n: usize) -> Vec<String> {
    std::iter::once("tau_r".to_string())
        .chain((1..=n).map(|i| format!("tau_{i}")))
        .collect()
}

/// The n+1 objects {τ_r, τ_1, …, τ_n} in the plane: τ_r runs along the
/// x-axis with vertex spacing `delta`; τ_i sits at y = −1 except for its
/// i-th vertex, lifted to y = +1. Any two τ_i are at distance 2 and each is
/// at distance 1 from τ_r.
pub fn lower_bound_instance(n: usize, delta: f64, metric: MetricKind) -> Result<ClusteringInstance> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("lower-bound instance needs n ≥ 2, got {n}")));
    }
    if !(delta >= 4.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("lower-bound spacing must be ≥ 4, got {delta}")));
    }
    let x = |j: usize| j as f64 * delta;
    let reference: Vec<Point> = (0..n).map(|j| pt(&[x(j), 0.0])).collect();
    let mut rows = vec![reference];
    for i in 0..n {
        rows.push((0..n).map(|j| pt(&[x(j), if j == i { 1.0 } else { -1.0 }])).collect());
    }
    let objects = rows
        .into_iter()
        .map(|pts| match metric {
            MetricKind::Hausdorff => PointSet::new(pts).map(GeomObject::PointSet),
            _ => Curve::new(pts).map(GeomObject::Curve),
        })
        .collect::<Result<Vec<_>>>()?;
    ClusteringInstance::new(objects, None, metric, 1, n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub failure_rate: f64,
    pub failures: usize,
    pub trials: usize,
    /// Draws per trial.
    pub a: usize,
    pub total_sensitivity: f64,
    pub cost: f64,
    /// True when ⌈2(S−1)/ε²⌉ was below 1 and the sample size was raised to 1.
    pub clamped: bool,
}

/// ⌈2(S−1)/ε²⌉, at least 1. The flag reports whether clamping happened.
pub fn concentration_sample_size(total_sensitivity: f64, eps: f64) -> (usize, bool) {
    let raw = (2.0 * (total_sensitivity - 1.0) / (eps * eps)).ceil();
    if raw < 1.0 {
        (1, true)
    } else {
        (raw as usize, false)
    }
}

/// Fraction of `trials` importance-sampling estimates of cost(inst, centers)
/// that miss by at least ε·cost, with a = ⌈2(S−1)/ε²⌉ draws per trial.
pub fn concentration_trial(
    inst: &ClusteringInstance,
    profile: &SensitivityProfile,
    centers: &CenterSet,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<TrialOutcome> {
    let (a, clamped) = concentration_sample_size(profile.total, eps);
    let mut out = concentration_trial_with_size(inst, profile, centers, eps, trials, a, seed)?;
    out.clamped = clamped;
    Ok(out)
}

/// [`concentration_trial`] with an explicit number of draws per trial.
pub fn concentration_trial_with_size(
    inst: &ClusteringInstance,
    profile: &SensitivityProfile,
    centers: &CenterSet,
    eps: f64,
    trials: usize,
    a: usize,
    seed: u64,
) -> Result<TrialOutcome> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0,1), got {eps}")));
    }
    if trials < 1 || a < 1 {
        return Err(Error::InvalidParameter("trials and sample size must be ≥ 1".into()));
    }
    inst.check_centers(centers)?;
    let f = distances_to_centers(inst, centers);
    let exact: f64 = inst.weights().iter().zip(&f).map(|(m, d)| m * d).sum();
    let q = sampling_distribution(profile, inst)?;
    let s_total = profile.total;
    let failed: Vec<bool> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let trial_seed = stage_rng(seed, Stage::Trial(t)).gen::<u64>();
            let draws = draw_sample(inst, &q, a, trial_seed)?;
            let estimate: f64 = draws
                .iter()
                .map(|&p| s_total / (a as f64 * profile.s[p]) * f[p])
                .sum();
            Ok((estimate - exact).abs() >= eps * exact && exact > 0.0)
        })
        .collect::<Result<_>>()?;
    let failures = failed.iter().filter(|&&x| x).count();
    Ok(TrialOutcome {
        failure_rate: failures as f64 / trials as f64,
        failures,
        trials,
        a,
        total_sensitivity: s_total,
        cost: exact,
        clamped: false,
    })
}
