//! Per-object sensitivity upper bounds derived from a bicriteria solution.
//!
//! For an object x in the Voronoi cell of bicriteria center c_i,
//!
//! ```text
//! s(x) = 2α(2·m_i + d(x, c_i)) / opt′ + 4 / μ_i
//! ```
//!
//! where μ_i is the cell's probability mass, m_i the μ-average distance of
//! its members to c_i and opt′ the bicriteria cost. The μ-weighted total
//! S = Σ μ(x)s(x) is at most 6α + 4·(number of centers).

use crate::clustering::{assign, weighted_sum, Assignment, BicriteriaSolution, CenterSet, ClusteringInstance};
use crate::error::{Error, Result};

/// Statistics of the nonempty Voronoi cells of a center set.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterStats {
    /// Center index of each nonempty cell.
    pub center: Vec<usize>,
    /// Probability mass μ_i of each cell.
    pub mass: Vec<f64>,
    /// μ-average distance m_i of the cell's members to its center.
    pub mean_dist: Vec<f64>,
    /// Σ_i μ_i·m_i, the cost of the center set.
    pub opt_prime: f64,
}

#[derive(Debug, Clone)]
pub struct SensitivityProfile {
    /// Upper bound s(p) per object.
    pub s: Vec<f64>,
    /// S = Σ μ(p)·s(p).
    pub total: f64,
    pub stats: ClusterStats,
    /// Cell (index into `stats`) of each object.
    pub cell: Vec<usize>,
    pub assignment: Assignment,
    pub alpha: f64,
    /// Number of centers the bounds were computed from.
    pub num_centers: usize,
}

impl SensitivityProfile {
    /// The guaranteed ceiling 6α + 4·(number of centers) on `total`.
    pub fn total_bound(&self) -> f64 {
        6.0 * self.alpha + 4.0 * self.num_centers as f64
    }
}

fn stats_from_assignment(inst: &ClusteringInstance, num_centers: usize, a: &Assignment) -> (ClusterStats, Vec<usize>) {
    let mu = inst.weights();
    let mut mass = vec![0.0; num_centers];
    let mut weighted = vec![0.0; num_centers];
    for (p, &c) in a.owner.iter().enumerate() {
        mass[c] += mu[p];
        weighted[c] += mu[p] * a.dist[p];
    }
    let mut cell_of_center = vec![usize::MAX; num_centers];
    let mut stats = ClusterStats {
        center: Vec::new(),
        mass: Vec::new(),
        mean_dist: Vec::new(),
        opt_prime: 0.0,
    };
    for c in 0..num_centers {
        if mass[c] > 0.0 {
            cell_of_center[c] = stats.center.len();
            stats.center.push(c);
            stats.mass.push(mass[c]);
            stats.mean_dist.push(weighted[c] / mass[c]);
        }
    }
    stats.opt_prime = weighted_sum(&stats.mass, &stats.mean_dist);
    let cell = a.owner.iter().map(|&c| cell_of_center[c]).collect();
    (stats, cell)
}

pub fn cluster_stats(inst: &ClusteringInstance, bic: &BicriteriaSolution) -> Result<ClusterStats> {
    let a = assign(inst, &bic.centers)?;
    Ok(stats_from_assignment(inst, bic.centers.len(), &a).0)
}

pub fn sensitivity_upper_bounds(inst: &ClusteringInstance, bic: &BicriteriaSolution) -> Result<SensitivityProfile> {
    sensitivity_for_centers(inst, &bic.centers, bic.alpha)
}

/// Sensitivity bounds for an arbitrary center set assumed to cost at most
/// `alpha` times the optimum.
pub fn sensitivity_for_centers(inst: &ClusteringInstance, centers: &CenterSet, alpha: f64) -> Result<SensitivityProfile> {
    if !(alpha >= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must be ≥ 1, got {alpha}")));
    }
    let assignment = assign(inst, centers)?;
    let (stats, cell) = stats_from_assignment(inst, centers.len(), &assignment);
    let opt = stats.opt_prime;
    let s: Vec<f64> = cell
        .iter()
        .zip(&assignment.dist)
        .map(|(&i, &d)| {
            // opt′ = 0 puts every object on its center; only the mass term remains
            let spread = if opt > 0.0 {
                2.0 * alpha * (2.0 * stats.mean_dist[i] + d) / opt
            } else {
                0.0
            };
            spread + 4.0 / stats.mass[i]
        })
        .collect();
    let total = weighted_sum(inst.weights(), &s);
    Ok(SensitivityProfile {
        s,
        total,
        stats,
        cell,
        assignment,
        alpha,
        num_centers: centers.len(),
    })
}

/// Importance-sampling distribution q(p) = s(p)·μ(p)/S.
pub fn sampling_distribution(profile: &SensitivityProfile, inst: &ClusteringInstance) -> Result<Vec<f64>> {
    if profile.s.len() != inst.len() {
        return Err(Error::InvalidParameter(format!(
            "profile covers {} objects, instance has {}",
            profile.s.len(),
            inst.len()
        )));
    }
    Ok(profile
        .s
        .iter()
        .zip(inst.weights())
        .map(|(s, mu)| s * mu / profile.total)
        .collect())
}
