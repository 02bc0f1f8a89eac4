//! Empirical received-symbol counts and pseudoinverse prior recovery.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::probability::{l2_distance, ProbabilityVector, SUM_TOLERANCE};
use crate::system::SemanticSystem;

/// Streaming occurrence counts of received messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationCounter {
    counts: Vec<u64>,
    total: u64,
}

impl ObservationCounter {
    pub fn new(messages: usize) -> Self {
        Self {
            counts: vec![0; messages],
            total: 0,
        }
    }

    pub fn record(&mut self, symbol: usize) -> Result<()> {
        let len = self.counts.len();
        let slot = self
            .counts
            .get_mut(symbol)
            .ok_or(Error::IndexOutOfRange { index: symbol, len })?;
        *slot += 1;
        self.total += 1;
        Ok(())
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `p̂_T(ŝ_m) = N_m / T`
    pub fn empirical_distribution(&self) -> Result<ProbabilityVector> {
        if self.total == 0 {
            return Err(Error::EmptyCounter);
        }
        let t = self.total as f64;
        ProbabilityVector::new(self.counts.iter().map(|&c| c as f64 / t).collect())
    }
}

/// A prior estimate: the raw least-squares solution and its projection onto
/// the simplex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PriorEstimate {
    /// `A† p̂_T(ŝ)`; may have negative entries at small `T`.
    pub raw: Vec<f64>,
    pub projected: ProbabilityVector,
    #[serde(rename = "t")]
    pub sample_count: u64,
}

/// Recovers the meaning prior from an observed received-symbol distribution.
///
/// The returned `sample_count` is zero; see [`estimate_from_counts`] for the
/// streaming variant.
pub fn estimate_prior(system: &SemanticSystem, empirical: &ProbabilityVector) -> Result<PriorEstimate> {
    if !system.is_learnable() {
        return Err(Error::NotLearnable {
            rank: system.spectral().numerical_rank,
            required: system.meanings(),
        });
    }
    if empirical.len() != system.messages() {
        return Err(Error::DimensionMismatch {
            what: "empirical distribution length vs messages",
            expected: system.messages(),
            found: empirical.len(),
        });
    }
    let raw = pseudoinverse_apply(system, empirical.as_slice());
    let projected = project_simplex(&raw);
    Ok(PriorEstimate {
        raw,
        projected,
        sample_count: 0,
    })
}

pub fn estimate_from_counts(system: &SemanticSystem, counter: &ObservationCounter) -> Result<PriorEstimate> {
    let empirical = counter.empirical_distribution()?;
    let mut estimate = estimate_prior(system, &empirical)?;
    estimate.sample_count = counter.total();
    Ok(estimate)
}

fn pseudoinverse_apply(system: &SemanticSystem, y: &[f64]) -> Vec<f64> {
    let pinv = system.pseudoinverse();
    let n = pinv.nrows();
    let mut out = vec![0.0; n];
    // column-major: accumulate column m scaled by y[m]
    for (m, &ym) in y.iter().enumerate() {
        if ym == 0.0 {
            continue;
        }
        for (o, &a) in out.iter_mut().zip(pinv.column(m).iter()) {
            *o += a * ym;
        }
    }
    out
}

/// `‖estimate − truth‖₂`
pub fn estimation_error(estimate: &[f64], truth: &ProbabilityVector) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            what: "estimate length vs truth",
            expected: truth.len(),
            found: estimate.len(),
        });
    }
    Ok(l2_distance(estimate, truth.as_slice()))
}

/// Upper bound on `E‖p̂_T(w) − p(w)‖₂`: `√M / (2 σ_min √T)`.
pub fn convergence_bound(messages: usize, sigma_min: f64, samples: u64) -> Result<f64> {
    if sigma_min.is_nan() || sigma_min <= 0.0 {
        return Err(Error::SingularSystem { sigma_min });
    }
    if messages == 0 || samples == 0 {
        return Err(Error::BadParams("M and T must be at least 1".into()));
    }
    Ok((messages as f64).sqrt() / (2.0 * sigma_min * (samples as f64).sqrt()))
}

/// Euclidean projection onto the probability simplex (sort-and-threshold).
///
/// Vectors already on the simplex are returned unchanged.
///
/// # Panics
///
/// Panics if `v` is empty or contains non-finite values.
pub fn project_simplex(v: &[f64]) -> ProbabilityVector {
    assert!(!v.is_empty(), "cannot project an empty vector");
    assert!(v.iter().all(|x| x.is_finite()), "cannot project non-finite values");

    let sum: f64 = v.iter().sum();
    if v.iter().all(|&x| x >= 0.0) && (sum - 1.0).abs() <= SUM_TOLERANCE {
        return ProbabilityVector::from_simplex_unchecked(v.to_vec());
    }

    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    let mut projected: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    // Remove the residual rounding error so the result sums to one.
    let total: f64 = projected.iter().sum();
    projected.iter_mut().for_each(|x| *x /= total);
    ProbabilityVector::from_simplex_unchecked(projected)
}
