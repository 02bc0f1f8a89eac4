//! Encoder constructions with controlled conditioning.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use super::sampling::SimRng;
use crate::stochastic::StochasticMatrix;

/// Standard deviation of the Gaussian perturbation in [`build_well_conditioned`].
pub const WELL_PERTURBATION: f64 = 0.02;

/// Weight on adjacent meanings in [`build_moderate`].
pub const MODERATE_COUPLING: f64 = 0.3;

/// `0.6 I + 0.4 11ᵀ` before normalization in [`build_ill_conditioned`].
pub const ILL_DIAGONAL: f64 = 0.6;
pub const ILL_SHARED: f64 = 0.4;

/// Near-identity encoder: `I + 0.02 ε` with `ε ~ N(0, 1)` entrywise,
/// clipped and column-normalized.
pub fn build_well_conditioned(n: usize, seed: u64) -> StochasticMatrix {
    build_well_conditioned_with(n, WELL_PERTURBATION, &mut SimRng::seed_from_u64(seed))
}

/// As [`build_well_conditioned`] with an explicit scale and generator.
/// Perturbations are drawn in column-major order.
pub fn build_well_conditioned_with<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> StochasticMatrix {
    assert!(n >= 2, "encoder needs at least two meanings");
    let mut raw = DMatrix::<f64>::identity(n, n);
    for v in raw.iter_mut() {
        let e: f64 = rng.sample(StandardNormal);
        *v += scale * e;
    }
    // Diagonal entries stay near 1, so no column can vanish.
    StochasticMatrix::normalize_columns(raw).expect("near-identity columns keep positive mass")
}

/// Adjacent meanings share encodings: identity plus 0.3 on both
/// off-diagonals, column-normalized. Interior columns are
/// `(0.3, 1, 0.3) / 1.6`, boundary columns `(1, 0.3) / 1.3`.
pub fn build_moderate(n: usize) -> StochasticMatrix {
    assert!(n >= 2, "encoder needs at least two meanings");
    let raw = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else if i.abs_diff(j) == 1 {
            MODERATE_COUPLING
        } else {
            0.0
        }
    });
    StochasticMatrix::normalize_columns(raw).expect("tridiagonal columns are positive")
}

/// Tridiagonal variant where the diagonal absorbs the remainder: 0.3 to each
/// neighbour, diagonal 0.4 inside and 0.7 at the boundary.
///
/// Its spectrum `0.4 + 0.6 cos θ` crosses zero, so for most `n` it is close
/// to singular (σ_min ≈ 1.5e-3 at `n = 30`).
pub fn build_moderate_absorbed(n: usize) -> StochasticMatrix {
    assert!(n >= 2, "encoder needs at least two meanings");
    let raw = DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            MODERATE_COUPLING
        } else if i == j {
            let neighbours = usize::from(j > 0) + usize::from(j + 1 < n);
            1.0 - MODERATE_COUPLING * neighbours as f64
        } else {
            0.0
        }
    });
    StochasticMatrix::new(raw).expect("columns sum to one by construction")
}

/// Every meaning overlaps every other: `0.6 I + 0.4 11ᵀ`, column-normalized
/// to diagonal `1 / (0.6 + 0.4n)` and off-diagonal `0.4 / (0.6 + 0.4n)`.
pub fn build_ill_conditioned(n: usize) -> StochasticMatrix {
    assert!(n >= 2, "encoder needs at least two meanings");
    let raw = DMatrix::from_fn(n, n, |i, j| ILL_SHARED + if i == j { ILL_DIAGONAL } else { 0.0 });
    StochasticMatrix::normalize_columns(raw).expect("all entries positive")
}
