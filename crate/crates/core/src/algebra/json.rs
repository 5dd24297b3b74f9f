//! JSON wire format for matrices over R, C and H.
//!
//! ```text
//! {"field":"C","N":2,"entries":[[[1.0,0.0],[0.0,1.0]],[[0.0,-1.0],[2.0,0.0]]]}
//! ```
//!
//! Each entry lists its `c` leading components `[re, i, j, k]`; the trailing ones
//! are omitted. Frames and projections add `"n"`.

use serde::{Deserialize, Serialize};

use super::{Field, HermitianMatrix, Matrix, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: Field,
    #[serde(rename = "N")]
    pub big_n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub entries: Vec<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(field: Field, mat: &Matrix, n: Option<usize>) -> Self {
        let c = field.c();
        let entries = (0..mat.rows())
            .map(|r| {
                mat.row(r)
                    .iter()
                    .map(|x| x.components()[..c].to_vec())
                    .collect()
            })
            .collect();
        Self {
            field,
            big_n: mat.rows(),
            n,
            entries,
        }
    }

    pub fn from_hermitian(h: &HermitianMatrix, n: Option<usize>) -> Self {
        Self::from_matrix(h.field(), h.matrix(), n)
    }

    /// Decodes the entry grid, checking the row count against `N` and component counts
    /// against the field.
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.entries.len() != self.big_n {
            return Err(Error::DimensionMismatch {
                expected: self.big_n,
                found: self.entries.len(),
            });
        }
        let cols = self.entries.first().map_or(0, Vec::len);
        let mut mat = Matrix::zeros(self.big_n, cols);
        for (r, row) in self.entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, comps) in row.iter().enumerate() {
                if comps.is_empty() || comps.len() > 4 {
                    return Err(Error::Contract(format!(
                        "entry ({r},{c}) has {} components",
                        comps.len()
                    )));
                }
                let mut q = [0.0; 4];
                q[..comps.len()].copy_from_slice(comps);
                let s = Scalar::from_components(q);
                if !self.field.contains(s) {
                    return Err(Error::NotInField {
                        field: self.field,
                        value: s.to_string(),
                    });
                }
                mat[(r, c)] = s;
            }
        }
        Ok(mat)
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.field, self.to_matrix()?)
    }
}

pub fn hermitian_from_json(text: &str) -> Result<HermitianMatrix> {
    serde_json::from_str::<MatrixJson>(text)?.to_hermitian()
}
