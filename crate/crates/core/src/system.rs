//! The encoder/channel composition `A = CU` and its spectral statistics.

use nalgebra::{DMatrix, DVector, SVD};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::probability::ProbabilityVector;
use crate::stochastic::StochasticMatrix;

/// Relative factor in the numerical rank threshold `σ_max · max(M, N) · RANK_EPS`.
pub const RANK_EPS: f64 = 1e-12;

/// Singular-value summary of an `M × N` effective matrix.
///
/// `singular_values` always has `N` entries, sorted descending. When `M < N`
/// the trailing entries are zero, so `sigma_min` is zero and the condition
/// number is infinite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralStats {
    pub singular_values: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub condition_number: f64,
    pub numerical_rank: usize,
}

impl SpectralStats {
    fn from_sorted(singular_values: Vec<f64>, rows: usize, cols: usize) -> Self {
        let sigma_max = singular_values.first().copied().unwrap_or(0.0);
        let sigma_min = singular_values.last().copied().unwrap_or(0.0);
        let tol = rank_tolerance(sigma_max, rows, cols);
        let numerical_rank = singular_values.iter().filter(|&&s| s > tol).count();
        let condition_number = if sigma_min > 0.0 {
            sigma_max / sigma_min
        } else {
            f64::INFINITY
        };
        Self {
            singular_values,
            sigma_min,
            sigma_max,
            condition_number,
            numerical_rank,
        }
    }
}

fn rank_tolerance(sigma_max: f64, rows: usize, cols: usize) -> f64 {
    sigma_max * rows.max(cols) as f64 * RANK_EPS
}

/// SVD of `a` with zero rows appended up to `max(M, N)`, so the right
/// singular basis is always complete. Factors are sorted by descending
/// singular value.
struct PaddedSvd {
    /// `max(M,N) × N`
    u: DMatrix<f64>,
    singular_values: Vec<f64>,
    /// `N × N`, columns are right singular vectors
    v: DMatrix<f64>,
}

fn padded_svd(a: &DMatrix<f64>) -> PaddedSvd {
    let (m, n) = a.shape();
    let rows = m.max(n);
    let padded = if rows == m {
        a.clone()
    } else {
        let mut p = DMatrix::zeros(rows, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    };
    let svd = SVD::new(padded, true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    PaddedSvd {
        u: DMatrix::from_fn(rows, n, |i, k| u[(i, order[k])]),
        singular_values: order.iter().map(|&k| svd.singular_values[k].max(0.0)).collect(),
        v: DMatrix::from_fn(n, n, |i, k| v_t[(order[k], i)]),
    }
}

/// Singular values (descending) and numerical rank of an arbitrary matrix.
pub fn spectral_stats(a: &DMatrix<f64>) -> SpectralStats {
    let svd = padded_svd(a);
    SpectralStats::from_sorted(svd.singular_values, a.nrows(), a.ncols())
}

pub fn numerical_rank(a: &DMatrix<f64>) -> usize {
    spectral_stats(a).numerical_rank
}

/// A fixed encoder `U` (M × N) and channel `C` (M × M) with the effective
/// matrix `A = CU` and everything derived from its SVD cached.
#[derive(Clone, Debug)]
pub struct SemanticSystem {
    encoder: StochasticMatrix,
    channel: StochasticMatrix,
    effective: DMatrix<f64>,
    spectral: SpectralStats,
    right_singular: DMatrix<f64>,
    pseudoinverse: DMatrix<f64>,
    #[cfg(test)]
    left_singular: DMatrix<f64>,
}

impl SemanticSystem {
    pub fn new(encoder: StochasticMatrix, channel: StochasticMatrix) -> Result<Self> {
        let m = encoder.outputs();
        if channel.inputs() != m {
            return Err(Error::DimensionMismatch {
                what: "channel inputs vs encoder outputs",
                expected: m,
                found: channel.inputs(),
            });
        }
        if channel.outputs() != m {
            return Err(Error::DimensionMismatch {
                what: "channel outputs (channel must be square)",
                expected: m,
                found: channel.outputs(),
            });
        }
        let effective = channel.matrix() * encoder.matrix();
        let n = effective.ncols();
        let svd = padded_svd(&effective);
        let spectral = SpectralStats::from_sorted(svd.singular_values.clone(), m, n);

        let tol = rank_tolerance(spectral.sigma_max, m, n);
        let mut pseudoinverse = DMatrix::zeros(n, m);
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > tol {
                let v_k = svd.v.column(k);
                let u_k = svd.u.view((0, k), (m, 1));
                pseudoinverse += (v_k * u_k.transpose()) / s;
            }
        }

        Ok(Self {
            encoder,
            channel,
            effective,
            spectral,
            #[cfg(test)]
            left_singular: svd.u.clone(),
            right_singular: svd.v,
            pseudoinverse,
        })
    }

    /// Identity channel.
    pub fn with_perfect_channel(encoder: StochasticMatrix) -> Result<Self> {
        let m = encoder.outputs();
        Self::new(encoder, StochasticMatrix::identity(m))
    }

    pub fn encoder(&self) -> &StochasticMatrix {
        &self.encoder
    }

    pub fn channel(&self) -> &StochasticMatrix {
        &self.channel
    }

    /// `A = CU`, `M × N`.
    pub fn effective(&self) -> &DMatrix<f64> {
        &self.effective
    }

    /// Column `w` of `A`: the received-symbol distribution for meaning `w`.
    pub fn effective_column(&self, meaning: usize) -> &[f64] {
        let m = self.messages();
        &self.effective.as_slice()[meaning * m..(meaning + 1) * m]
    }

    pub fn spectral(&self) -> &SpectralStats {
        &self.spectral
    }

    /// Number of meanings `N`.
    pub fn meanings(&self) -> usize {
        self.effective.ncols()
    }

    /// Number of (received) messages `M`.
    pub fn messages(&self) -> usize {
        self.effective.nrows()
    }

    pub fn is_learnable(&self) -> bool {
        self.spectral.numerical_rank == self.meanings()
    }

    /// Moore-Penrose pseudoinverse of `A` (N × M), built from the SVD
    /// restricted to singular values above the rank threshold.
    pub fn pseudoinverse(&self) -> &DMatrix<f64> {
        &self.pseudoinverse
    }

    /// Right singular vector for the smallest singular value.
    pub(crate) fn smallest_right_singular_vector(&self) -> DVector<f64> {
        self.right_singular.column(self.meanings() - 1).into_owned()
    }

    /// Observable distribution `p(ŝ) = A p(w)`.
    pub fn observe(&self, prior: &ProbabilityVector) -> Result<ProbabilityVector> {
        let image = self.apply(prior.as_slice())?;
        ProbabilityVector::new(image)
    }

    /// `A x` for an arbitrary (possibly signed) vector of length N.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.meanings() {
            return Err(Error::DimensionMismatch {
                what: "vector length vs meanings",
                expected: self.meanings(),
                found: x.len(),
            });
        }
        let v = DVector::from_column_slice(x);
        Ok((&self.effective * v).iter().copied().collect())
    }
}
