//! Log-log slope fits of learning curves.

use super::experiment::ConvergenceCurve;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlopeField {
    Error,
    ProjectedError,
    Gap,
}

/// Ordinary least-squares slope of `log10(value)` against `log10(t)`.
pub fn loglog_slope(t: &[f64], values: &[f64]) -> Result<f64> {
    if t.len() != values.len() {
        return Err(Error::DimensionMismatch {
            what: "slope fit abscissa vs values",
            expected: t.len(),
            found: values.len(),
        });
    }
    if t.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            found: t.len(),
        });
    }
    for (index, &value) in t.iter().chain(values).enumerate() {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::NonPositiveValue {
                index: index % t.len(),
                value,
            });
        }
    }
    let xs: Vec<f64> = t.iter().map(|v| v.log10()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.log10()).collect();
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - x_mean) * (y - y_mean);
        sxx += (x - x_mean) * (x - x_mean);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidConfig("all T values are equal".into()));
    }
    Ok(sxy / sxx)
}

pub fn fit_loglog_slope(curve: &ConvergenceCurve, field: SlopeField) -> Result<f64> {
    let t: Vec<f64> = curve.t_values.iter().map(|&t| t as f64).collect();
    let values = match field {
        SlopeField::Error => &curve.error.mean,
        SlopeField::ProjectedError => &curve.projected_error.mean,
        SlopeField::Gap => &curve.gap.mean,
    };
    loglog_slope(&t, values)
}
