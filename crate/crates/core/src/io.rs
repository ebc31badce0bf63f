//! JSON file formats: matrices, blocks and factor lists.
//!
//! A matrix is `{"n": int, "re": [[...]], "im": [[...]]}` with row-major real
//! and imaginary parts; a missing `"im"` means the matrix is real.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::blocks::{FactorList, PsdBlock};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, ToleranceCfg};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    /// Omits `"im"` when every imaginary part is exactly zero.
    pub fn from_matrix<T: Real>(m: &Matrix<T>) -> Self {
        let n = m.dim();
        let re = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].re.as_f64()).collect())
            .collect();
        let im = (!m.is_real()).then(|| {
            (0..n)
                .map(|i| (0..n).map(|j| m[(i, j)].im.as_f64()).collect())
                .collect()
        });
        Self { n, re, im }
    }

    pub fn to_matrix<T: Real>(&self) -> Result<Matrix<T>> {
        let n = self.n;
        let check = |rows: &Vec<Vec<f64>>, what: &str| -> Result<()> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Malformed(format!("\"{what}\" is not {n}x{n}")));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        if let Some(im) = &self.im {
            check(im, "im")?;
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
                data.push(Complex::new(T::lit(self.re[i][j]), T::lit(im)));
            }
        }
        Matrix::from_vec(n, data)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "X")]
    pub x: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
}

impl BlockJson {
    pub fn from_block<T: Real>(blk: &PsdBlock<T>) -> Self {
        Self {
            a: MatrixJson::from_matrix(blk.a().matrix()),
            x: MatrixJson::from_matrix(blk.x()),
            b: MatrixJson::from_matrix(blk.b().matrix()),
        }
    }

    /// Validates positivity of the assembled matrix.
    pub fn to_block<T: Real>(&self, tol: &ToleranceCfg<T>) -> Result<PsdBlock<T>> {
        PsdBlock::new(self.a.to_matrix()?, self.x.to_matrix()?, self.b.to_matrix()?, tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorPairJson {
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorListJson {
    pub pairs: Vec<FactorPairJson>,
}

impl FactorListJson {
    pub fn to_factor_list<T: Real>(&self) -> Result<FactorList<T>> {
        let pairs = self
            .pairs
            .iter()
            .map(|p| Ok((p.a.to_matrix()?, p.b.to_matrix()?)))
            .collect::<Result<Vec<_>>>()?;
        FactorList::new(pairs)
    }

    pub fn from_factor_list<T: Real>(f: &FactorList<T>) -> Self {
        Self {
            pairs: f
                .pairs()
                .iter()
                .map(|(a, b)| FactorPairJson {
                    a: MatrixJson::from_matrix(a),
                    b: MatrixJson::from_matrix(b),
                })
                .collect(),
        }
    }
}

pub fn parse_matrix<T: Real>(s: &str) -> Result<Matrix<T>> {
    let j: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
    j.to_matrix()
}

pub fn parse_block<T: Real>(s: &str, tol: &ToleranceCfg<T>) -> Result<PsdBlock<T>> {
    let j: BlockJson = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
    j.to_block(tol)
}

pub fn parse_factor_list<T: Real>(s: &str) -> Result<FactorList<T>> {
    let j: FactorListJson = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
    j.to_factor_list()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_matrix_omits_im() {
        let m = Matrix::<f64>::from_diag(&[1.0, 2.0]);
        let j = serde_json::to_string(&MatrixJson::from_matrix(&m)).unwrap();
        assert_eq!(j, r#"{"n":2,"re":[[1.0,0.0],[0.0,2.0]]}"#);
        assert_eq!(parse_matrix::<f64>(&j).unwrap(), m);
    }

    #[test]
    fn complex_round_trip() {
        let s = r#"{"n":1,"re":[[1.5]],"im":[[-2.0]]}"#;
        let m = parse_matrix::<f64>(s).unwrap();
        assert_eq!(m[(0, 0)], Complex::new(1.5, -2.0));
        assert_eq!(MatrixJson::from_matrix(&m).im, Some(vec![vec![-2.0]]));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_matrix::<f64>(r#"{"n":2,"re":[[1.0]]}"#), Err(Error::Malformed(_))));
        assert!(matches!(parse_matrix::<f64>("{not json"), Err(Error::Malformed(_))));
    }

    #[test]
    fn block_loader_rejects_non_psd() {
        let s = r#"{"A":{"n":1,"re":[[1.0]]},"X":{"n":1,"re":[[2.0]]},"B":{"n":1,"re":[[1.0]]}}"#;
        let r = parse_block::<f64>(s, &ToleranceCfg::default());
        assert!(matches!(r, Err(Error::NotPsd { .. })));
    }
}
