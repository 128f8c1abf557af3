//! JSON documents read and written by the command line.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use su3_forge::report::ReportEntry;
use su3_forge::Mat3;

use crate::fail::{invalid, Failure};

pub const VERSION: &str = "su3-forge/1";

/// Unitarity tolerance for matrices read from files.
pub const INPUT_UNITARITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub rows: [[[f64; 2]; 3]; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixDocument {
    pub fn from_mat(m: &Mat3, label: Option<String>) -> Self {
        let rows = std::array::from_fn(|i| std::array::from_fn(|j| pair(m[(i, j)])));
        Self { rows, label }
    }

    pub fn to_mat(&self) -> Result<Mat3, Failure> {
        let m = self.rows.map(|r| r.map(|[re, im]| Complex64::new(re, im)));
        Mat3::try_from_rows(m).map_err(|e| invalid(format!("matrix entries: {e}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Discrepancy {
    #[serde(flatten)]
    pub entry: ReportEntry,
    /// Listed in the known-discrepancy fixture; never fails a run.
    pub documented: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explanation: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub discrepancies: Vec<Discrepancy>,
    pub version: String,
}

impl ReportDocument {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            results,
            discrepancies: Vec::new(),
            version: VERSION.to_string(),
        }
    }
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| invalid(format!("malformed JSON in {}: {e}", path.display())))
}

/// A matrix from a `MatrixDocument` file, or from the first matrix of a
/// `random` report.
pub fn read_matrix(path: &Path) -> Result<Mat3, Failure> {
    let v = read_json(path)?;
    let doc = match v.pointer("/results/matrices/0") {
        Some(m) => m.clone(),
        None => v,
    };
    let doc: MatrixDocument = serde_json::from_value(doc)
        .map_err(|e| invalid(format!("{} is not a matrix document: {e}", path.display())))?;
    doc.to_mat()
}

pub fn require_unitary(m: &Mat3) -> Result<(), Failure> {
    let dev = m.unitarity_deviation();
    if dev > INPUT_UNITARITY_TOL {
        return Err(invalid(format!(
            "input is not unitary: deviation {dev:.3e} exceeds {INPUT_UNITARITY_TOL:e}"
        )));
    }
    Ok(())
}
