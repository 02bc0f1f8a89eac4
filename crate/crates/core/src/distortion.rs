use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Distortion table `d(w, ŵ)`; rows index the sent meaning, columns the
/// decoded one.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionMatrix {
    entries: DMatrix<f64>,
    d_max: f64,
}

impl DistortionMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                what: "distortion matrix must be square",
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        let mut d_max = 0.0_f64;
        for (index, &value) in entries.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
            d_max = d_max.max(value);
        }
        Ok(Self { entries, d_max })
    }

    /// 0-1 loss: zero on the diagonal, one elsewhere.
    pub fn zero_one(n: usize) -> Self {
        assert!(n > 0);
        Self {
            entries: DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 }),
            d_max: 1.0,
        }
    }

    pub fn meanings(&self) -> usize {
        self.entries.nrows()
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn get(&self, sent: usize, decoded: usize) -> f64 {
        self.entries[(sent, decoded)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }
}
