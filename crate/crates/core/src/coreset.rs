//! Sample-size rule, importance sampling and coreset assembly.

use rand::distributions::{Distribution, WeightedIndex};
use rayon::prelude::*;

use crate::clustering::{bicriteria, nearest, CenterSet, ClusteringInstance, DEFAULT_ALPHA, DEFAULT_BETA};
use crate::error::{Error, Result};
use crate::geometry::GeomObject;
use crate::metrics::{check_kind, distance_unchecked, FrechetTolerance, MetricKind};
use crate::rng::{stage_rng, Stage};
use crate::sensitivity::{sampling_distribution, sensitivity_upper_bounds};

/// Tolerance on Σq = 1 accepted by [`draw_sample`].
pub const PROBABILITY_SUM_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CoresetConfig {
    pub eps: f64,
    /// Exponent δ on the maximum input complexity m.
    pub delta_exponent: f64,
    /// Constant in front of the asymptotic size bound.
    pub size_constant: f64,
    /// Fixed sample count, bypassing the size formula.
    pub size_override: Option<usize>,
    pub seed: u64,
    /// Declared bicriteria approximation factor.
    pub alpha: f64,
    /// Bicriteria center multiplier.
    pub beta: f64,
}

impl CoresetConfig {
    pub fn new(eps: f64, seed: u64) -> Self {
        CoresetConfig {
            eps,
            delta_exponent: 0.5,
            size_constant: 1.0,
            size_override: None,
            seed,
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
        }
    }

    pub fn with_size(mut self, a: usize) -> Self {
        self.size_override = Some(a);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidParameter(what));
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps must lie in (0,1), got {}", self.eps));
        }
        if !(self.delta_exponent > 0.0 && self.delta_exponent.is_finite()) {
            return bad(format!("delta must be positive, got {}", self.delta_exponent));
        }
        if !(self.size_constant > 0.0 && self.size_constant.is_finite()) {
            return bad(format!("size constant must be positive, got {}", self.size_constant));
        }
        if self.size_override == Some(0) {
            return bad("sample size must be ≥ 1".into());
        }
        if !(self.alpha >= 1.0 && self.beta >= 1.0) {
            return bad(format!("alpha and beta must be ≥ 1 (alpha={}, beta={})", self.alpha, self.beta));
        }
        Ok(())
    }
}

/// size_constant · k³ · l · m^δ · d / ε², the size bound before the log factor.
pub fn size_prefactor(k: usize, l: usize, m: usize, d: usize, cfg: &CoresetConfig) -> f64 {
    let k = k as f64;
    cfg.size_constant * k * k * k * l as f64 * (m as f64).powf(cfg.delta_exponent) * d as f64
        / (cfg.eps * cfg.eps)
}

/// Number of samples a coreset draws.
///
/// ⌈size_constant · k³ l m^δ d / ε² · ln(kl/ε + e)⌉, or the override.
pub fn sample_size(k: usize, l: usize, m: usize, d: usize, cfg: &CoresetConfig) -> usize {
    if let Some(a) = cfg.size_override {
        return a;
    }
    let log = ((k * l) as f64 / cfg.eps + std::f64::consts::E).ln();
    let a = (size_prefactor(k, l, m, d, cfg) * log).ceil();
    if a >= usize::MAX as f64 {
        usize::MAX
    } else {
        (a as usize).max(1)
    }
}

/// `a` independent draws from `q` on the sampling stream of `seed`.
pub fn draw_sample(inst: &ClusteringInstance, q: &[f64], a: usize, seed: u64) -> Result<Vec<usize>> {
    if a < 1 {
        return Err(Error::InvalidParameter("sample size must be ≥ 1".into()));
    }
    if q.len() != inst.len() {
        return Err(Error::InvalidParameter(format!(
            "{} probabilities for {} objects",
            q.len(),
            inst.len()
        )));
    }
    if q.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::InvalidParameter("probabilities must be finite and nonnegative".into()));
    }
    let total: f64 = q.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_EPS {
        return Err(Error::InvalidParameter(format!("probabilities sum to {total}, not 1")));
    }
    let dist = WeightedIndex::new(q).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = stage_rng(seed, Stage::Sampling);
    Ok((0..a).map(|_| dist.sample(&mut rng)).collect())
}

/// One sampled object. Repeated draws of the same object are separate entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CoresetEntry {
    /// Index of the object in the source instance.
    pub index: usize,
    pub object: GeomObject,
    pub weight: f64,
    /// The bound s(p) the weight was derived from.
    pub sensitivity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoresetMeta {
    pub metric: MetricKind,
    pub k: usize,
    pub l: usize,
    pub eps: f64,
    /// Number of draws a.
    pub a: usize,
    /// Total sensitivity S.
    pub total_sensitivity: f64,
    pub seed: u64,
    pub size_constant: f64,
    pub delta_exponent: f64,
    pub alpha: f64,
    pub beta: f64,
    pub opt_prime: f64,
    pub num_centers: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCoreset {
    pub entries: Vec<CoresetEntry>,
    pub meta: CoresetMeta,
}

impl WeightedCoreset {
    /// The whole instance with weights μ. Recorded bounds are 1/(n·μ(p)) with
    /// S = 1, so the weight rule ω = S/(a·s) still holds.
    pub fn identity(inst: &ClusteringInstance, eps: f64) -> Self {
        let n = inst.len();
        let entries = inst
            .objects()
            .iter()
            .zip(inst.weights())
            .enumerate()
            .map(|(index, (o, &mu))| CoresetEntry {
                index,
                object: o.clone(),
                weight: mu,
                sensitivity: 1.0 / (n as f64 * mu),
            })
            .collect();
        WeightedCoreset {
            entries,
            meta: CoresetMeta {
                metric: inst.metric(),
                k: inst.k(),
                l: inst.l(),
                eps,
                a: n,
                total_sensitivity: 1.0,
                seed: 0,
                size_constant: 1.0,
                delta_exponent: 1.0,
                alpha: 1.0,
                beta: 1.0,
                opt_prime: 0.0,
                num_centers: 0,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }
}

/// Builds a coreset: bicriteria → sensitivity bounds → q → sample size →
/// draws, with weight S/(a·s(p)) per draw.
pub fn build_coreset(inst: &ClusteringInstance, cfg: &CoresetConfig) -> Result<WeightedCoreset> {
    cfg.validate()?;
    let bic = bicriteria(inst, cfg.beta, cfg.alpha, cfg.seed)?;
    let profile = sensitivity_upper_bounds(inst, &bic)?;
    let q = sampling_distribution(&profile, inst)?;
    let a = sample_size(inst.k(), inst.l(), inst.m(), inst.d(), cfg);
    let draws = draw_sample(inst, &q, a, cfg.seed)?;
    let total = profile.total;
    let entries = draws
        .into_iter()
        .map(|index| {
            let s = profile.s[index];
            CoresetEntry {
                index,
                object: inst.objects()[index].clone(),
                weight: total / (a as f64 * s),
                sensitivity: s,
            }
        })
        .collect();
    Ok(WeightedCoreset {
        entries,
        meta: CoresetMeta {
            metric: inst.metric(),
            k: inst.k(),
            l: inst.l(),
            eps: cfg.eps,
            a,
            total_sensitivity: total,
            seed: cfg.seed,
            size_constant: cfg.size_constant,
            delta_exponent: cfg.delta_exponent,
            alpha: cfg.alpha,
            beta: cfg.beta,
            opt_prime: profile.stats.opt_prime,
            num_centers: bic.centers.len(),
        },
    })
}

/// Σ ω·d(object, centers) over the coreset entries.
pub fn coreset_cost(cs: &WeightedCoreset, centers: &CenterSet, metric: MetricKind) -> Result<f64> {
    coreset_cost_with(cs, centers, metric, FrechetTolerance::default())
}

pub fn coreset_cost_with(
    cs: &WeightedCoreset,
    centers: &CenterSet,
    metric: MetricKind,
    tol: FrechetTolerance,
) -> Result<f64> {
    if metric != cs.meta.metric {
        return Err(Error::InvalidParameter(format!(
            "coreset was built for {}, asked for {metric}",
            cs.meta.metric
        )));
    }
    for c in centers.centers() {
        check_kind(metric, c)?;
        if c.len() > cs.meta.l {
            return Err(Error::InvalidParameter(format!(
                "center has {} points, more than l={}",
                c.len(),
                cs.meta.l
            )));
        }
    }
    let d: Vec<f64> = cs
        .entries
        .par_iter()
        .map(|e| {
            centers
                .centers()
                .iter()
                .map(|c| distance_unchecked(metric, &e.object, c, tol))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(cs.entries.iter().zip(&d).map(|(e, d)| e.weight * d).sum())
}

/// Per-object distances to the nearest center; used by estimators that
/// evaluate a fixed center set many times.
pub(crate) fn distances_to_centers(inst: &ClusteringInstance, centers: &CenterSet) -> Vec<f64> {
    inst.objects()
        .par_iter()
        .map(|o| nearest(inst, o, centers.centers()).1)
        .collect()
}
