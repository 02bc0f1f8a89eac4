//! File formats for matrices, vectors and system descriptions.
//!
//! Matrices are either JSON `{"rows": M, "cols": K, "data": [[...], ...]}`
//! (row-major) or CSV with one matrix row per line. Vectors are a JSON array
//! or a single CSV column. The format is sniffed from the first
//! non-whitespace character, so file extensions do not matter.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::distortion::DistortionMatrix;
use crate::error::{Error, Result};
use crate::probability::ProbabilityVector;
use crate::stochastic::{matrix_from_rows, StochasticMatrix};
use crate::system::SemanticSystem;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<f64>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data: m.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        if self.data.len() != self.rows {
            return Err(Error::DimensionMismatch {
                what: "matrix document rows",
                expected: self.rows,
                found: self.data.len(),
            });
        }
        let m = matrix_from_rows(&self.data)?;
        if m.ncols() != self.cols {
            return Err(Error::DimensionMismatch {
                what: "matrix document cols",
                expected: self.cols,
                found: m.ncols(),
            });
        }
        Ok(m)
    }
}

/// Channel entry of a system file: an explicit matrix or the literal `"identity"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelDoc {
    Keyword(String),
    Matrix(MatrixDoc),
}

/// `{"U": matrix, "C": matrix | "identity"}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemDoc {
    #[serde(rename = "U")]
    pub encoder: MatrixDoc,
    #[serde(rename = "C")]
    pub channel: ChannelDoc,
}

impl SystemDoc {
    pub fn from_system(system: &SemanticSystem) -> Self {
        Self {
            encoder: MatrixDoc::from_matrix(system.encoder().matrix()),
            channel: ChannelDoc::Matrix(MatrixDoc::from_matrix(system.channel().matrix())),
        }
    }

    pub fn build(&self) -> Result<SemanticSystem> {
        let encoder = StochasticMatrix::new(self.encoder.to_matrix()?)?;
        let channel = match &self.channel {
            ChannelDoc::Keyword(k) if k == "identity" => StochasticMatrix::identity(encoder.outputs()),
            ChannelDoc::Keyword(k) => {
                return Err(Error::InvalidConfig(format!(
                    "channel must be a matrix or \"identity\", got {k:?}"
                )))
            }
            ChannelDoc::Matrix(doc) => StochasticMatrix::new(doc.to_matrix()?)?,
        };
        SemanticSystem::new(encoder, channel)
    }
}

fn bad_file(path: &Path, reason: impl ToString) -> Error {
    Error::BadFile {
        path: path.display().to_string(),
        reason: reason.to_string(),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| bad_file(path, e))
}

fn looks_like_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{') | Some('['))
}

pub fn parse_csv_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("not a number: {f:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    if looks_like_json(text) {
        let doc: MatrixDoc = serde_json::from_str(text)?;
        doc.to_matrix()
    } else {
        matrix_from_rows(&parse_csv_rows(text)?)
    }
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    if looks_like_json(text) {
        return Ok(serde_json::from_str::<Vec<f64>>(text)?);
    }
    let rows = parse_csv_rows(text)?;
    if rows.iter().any(|r| r.len() != 1) {
        return Err(Error::InvalidConfig(
            "vector CSV must have exactly one value per line".into(),
        ));
    }
    Ok(rows.into_iter().map(|r| r[0]).collect())
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    let path = path.as_ref();
    parse_matrix(&read_text(path)?).map_err(|e| bad_file(path, e))
}

pub fn read_stochastic_matrix(path: impl AsRef<Path>) -> Result<StochasticMatrix> {
    let path = path.as_ref();
    StochasticMatrix::new(read_matrix(path)?).map_err(|e| bad_file(path, e))
}

pub fn read_probability_vector(path: impl AsRef<Path>) -> Result<ProbabilityVector> {
    let path = path.as_ref();
    let raw = parse_vector(&read_text(path)?).map_err(|e| bad_file(path, e))?;
    ProbabilityVector::new(raw).map_err(|e| bad_file(path, e))
}

pub fn read_distortion(path: impl AsRef<Path>) -> Result<DistortionMatrix> {
    let path = path.as_ref();
    DistortionMatrix::new(read_matrix(path)?).map_err(|e| bad_file(path, e))
}

pub fn read_system(path: impl AsRef<Path>) -> Result<SemanticSystem> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let doc: SystemDoc = serde_json::from_str(&text).map_err(|e| bad_file(path, e))?;
    doc.build().map_err(|e| bad_file(path, e))
}

pub fn write_system(path: impl AsRef<Path>, system: &SemanticSystem) -> Result<()> {
    let text = serde_json::to_string_pretty(&SystemDoc::from_system(system))?;
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_json_and_csv_agree() {
        let json = r#"{"rows": 2, "cols": 3, "data": [[0.5, 1.0, 0.0], [0.5, 0.0, 1.0]]}"#;
        let csv = "0.5, 1.0, 0.0\n0.5, 0.0, 1.0\n";
        assert_eq!(parse_matrix(json).unwrap(), parse_matrix(csv).unwrap());
    }

    #[test]
    fn matrix_json_dimensions_checked() {
        let json = r#"{"rows": 3, "cols": 2, "data": [[0.5, 1.0], [0.5, 0.0]]}"#;
        assert!(parse_matrix(json).is_err());
    }

    #[test]
    fn vectors_from_json_or_column() {
        assert_eq!(parse_vector("[0.25, 0.75]").unwrap(), vec![0.25, 0.75]);
        assert_eq!(parse_vector("0.25\n0.75\n").unwrap(), vec![0.25, 0.75]);
        assert!(parse_vector("0.25,0.75\n").is_err());
    }

    #[test]
    fn system_doc_identity_keyword() {
        let doc: SystemDoc = serde_json::from_str(
            r#"{"U": {"rows": 2, "cols": 2, "data": [[1, 0], [0, 1]]}, "C": "identity"}"#,
        )
        .unwrap();
        let sys = doc.build().unwrap();
        assert!(sys.is_learnable());

        let bad: SystemDoc = serde_json::from_str(
            r#"{"U": {"rows": 2, "cols": 2, "data": [[1, 0], [0, 1]]}, "C": "noisy"}"#,
        )
        .unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn system_doc_roundtrip() {
        let sys = SemanticSystem::new(
            StochasticMatrix::identity(2),
            StochasticMatrix::binary_symmetric(0.2).unwrap(),
        )
        .unwrap();
        let doc = SystemDoc::from_system(&sys);
        let text = serde_json::to_string(&doc).unwrap();
        let back: SystemDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap().effective(), sys.effective());
    }
}
