//! Column-stochastic matrices: encoders `U` and channels `C`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::probability::{NEGATIVE_TOLERANCE, SUM_TOLERANCE};

/// A matrix whose columns are conditional distributions.
///
/// Rows index outputs and columns index inputs, so entry `(i, j)` is the
/// probability of output `i` given input `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix(DMatrix<f64>);

impl StochasticMatrix {
    /// Validates `raw` as column-stochastic.
    pub fn new(raw: DMatrix<f64>) -> Result<Self> {
        check_shape(&raw)?;
        let mut m = raw;
        for (index, value) in m.iter_mut().enumerate() {
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
        for (column, col) in m.column_iter().enumerate() {
            let sum = col.sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::ColumnNotNormalized { column, sum });
            }
        }
        Ok(Self(m))
    }

    /// Builds from row-major nested rows, e.g. `[[0.9, 0.1], [0.1, 0.9]]`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    /// Clips negative entries to zero, then divides each column by its sum.
    pub fn normalize_columns(raw: DMatrix<f64>) -> Result<Self> {
        check_shape(&raw)?;
        let mut m = raw;
        if let Some(index) = m.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        m.apply(|v| *v = v.max(0.0));
        for (column, mut col) in m.column_iter_mut().enumerate() {
            let sum = col.sum();
            if sum <= 0.0 {
                return Err(Error::ZeroColumn { column });
            }
            col /= sum;
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0);
        Self(DMatrix::identity(n, n))
    }

    /// Binary symmetric channel with crossover probability `flip`.
    pub fn binary_symmetric(flip: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&flip) {
            return Err(Error::BadParams(format!("flip probability {flip} outside [0, 1]")));
        }
        Self::new(DMatrix::from_row_slice(2, 2, &[1.0 - flip, flip, flip, 1.0 - flip]))
    }

    /// Number of outputs (rows).
    pub fn outputs(&self) -> usize {
        self.0.nrows()
    }

    /// Number of inputs (columns).
    pub fn inputs(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Conditional distribution of outputs given input `j`.
    pub fn column(&self, j: usize) -> &[f64] {
        let rows = self.0.nrows();
        &self.0.as_slice()[j * rows..(j + 1) * rows]
    }

    pub fn get(&self, output: usize, input: usize) -> f64 {
        self.0[(output, input)]
    }

    /// Row-major nested rows.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }
}

fn check_shape(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::Empty);
    }
    Ok(())
}

/// Row-major nested rows to a dense matrix, rejecting ragged input.
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let Some(first) = rows.first() else {
        return Err(Error::Empty);
    };
    let cols = first.len();
    if cols == 0 {
        return Err(Error::Empty);
    }
    for (row, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(Error::Ragged {
                row,
                expected: cols,
                found: r.len(),
            });
        }
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}
