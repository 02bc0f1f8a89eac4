//! Points on the probability simplex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum allowed deviation of a probability sum from 1.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Entries in `[-NEGATIVE_TOLERANCE, 0)` are treated as round-off and clamped to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;

/// A validated probability vector: non-negative entries summing to one.
///
/// Used for meaning priors `p(w)`, received-symbol distributions `p(ŝ)` and
/// projected prior estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates `raw` as a distribution.
    ///
    /// Entries that are negative only by round-off (`>= -1e-12`) are clamped to 0.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        let mut entries = raw;
        for (index, value) in entries.iter_mut().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if *value < -NEGATIVE_TOLERANCE {
                return Err(Error::NegativeEntry {
                    index,
                    value: *value,
                });
            }
            if *value < 0.0 {
                *value = 0.0;
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self(entries))
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one outcome");
        Self(vec![1.0 / n as f64; n])
    }

    pub fn point_mass(n: usize, index: usize) -> Self {
        assert!(index < n, "point mass index out of range");
        let mut entries = vec![0.0; n];
        entries[index] = 1.0;
        Self(entries)
    }

    /// Wraps entries already known to lie on the simplex.
    pub(crate) fn from_simplex_unchecked(entries: Vec<f64>) -> Self {
        debug_assert!(Self::new(entries.clone()).is_ok());
        Self(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }
}

impl std::ops::Index<usize> for ProbabilityVector {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

impl AsRef<[f64]> for ProbabilityVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl<'de> Deserialize<'de> for ProbabilityVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<f64>::deserialize(deserializer)?;
        Self::new(raw).map_err(serde::de::Error::custom)
    }
}

/// Euclidean norm of `a - b`.
pub(crate) fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
