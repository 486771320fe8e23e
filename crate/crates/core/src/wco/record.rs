//! Declarative TOML description of an operator.
//!
//! ```toml
//! dimension = 3
//!
//! [phi]
//! kind = "ball"
//! center = [0.5, 0.0, 0.0]
//! givens = [[1, 2, 0.3]]
//!
//! [psi]
//! form = "jacobian-power"
//! constant = 1.0
//! ```
//!
//! Givens planes are 1-based `[i, j, theta]` triples applied in order. A canonical
//! symbol uses `kind = "canonical"` with `translation`, `scale`, `pole`, `epsilon`
//! and either `givens` or an explicit orthogonal `matrix` (rows).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BallMoebius, Branch, CanonicalMoebius};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

use super::{SymbolMap, WcoOperator, Weight};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorRecord {
    pub dimension: usize,
    pub phi: PhiRecord,
    pub psi: PsiRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PhiRecord {
    Ball {
        center: Vec<f64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        givens: Vec<(usize, usize, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
    },
    Canonical {
        translation: Vec<f64>,
        scale: f64,
        pole: Vec<f64>,
        epsilon: u8,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        givens: Vec<(usize, usize, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PsiRecord {
    JacobianPower { constant: f64 },
    Constant { value: f64 },
}

fn orthogonal<T: Scalar>(n: usize, givens: &[(usize, usize, f64)], matrix: &Option<Vec<Vec<f64>>>) -> Result<Matrix<T>> {
    match matrix {
        Some(rows) => {
            if !givens.is_empty() {
                return Err(Error::Parse("give either `givens` or `matrix`, not both".into()));
            }
            let rows: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|&v| T::of(v)).collect()).collect();
            let m = Matrix::from_rows(&rows)?;
            if m.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: m.dim() });
            }
            Ok(m)
        }
        None => {
            let planes = givens
                .iter()
                .map(|&(i, j, t)| {
                    if i == 0 || j == 0 {
                        Err(Error::Parse("Givens planes are 1-based".into()))
                    } else {
                        Ok((i - 1, j - 1, T::of(t)))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Matrix::from_givens(n, &planes)
        }
    }
}

fn vector<T: Scalar>(n: usize, v: &[f64]) -> Result<Vector<T>> {
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    Ok(Vector::from_f64(v))
}

fn rows_f64<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<f64>> {
    m.rows().into_iter().map(|r| r.into_iter().map(|v| v.to_f64_lossy()).collect()).collect()
}

fn vec_f64<T: Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(|c| c.to_f64_lossy()).collect()
}

impl OperatorRecord {
    pub fn from_text(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_operator<T: Scalar>(&self) -> Result<WcoOperator<T>> {
        let n = self.dimension;
        let phi = match &self.phi {
            PhiRecord::Ball { center, givens, matrix } => {
                SymbolMap::Ball(BallMoebius::new(orthogonal(n, givens, matrix)?, vector(n, center)?)?)
            }
            PhiRecord::Canonical { translation, scale, pole, epsilon, givens, matrix } => {
                SymbolMap::Canonical(CanonicalMoebius::new(
                    vector(n, translation)?,
                    T::of(*scale),
                    orthogonal(n, givens, matrix)?,
                    vector(n, pole)?,
                    Branch::from_epsilon(*epsilon)?,
                )?)
            }
        };
        let psi = match self.psi {
            PsiRecord::JacobianPower { constant } => Weight::JacobianPower { constant: T::of(constant) },
            PsiRecord::Constant { value } => Weight::Constant(Complex::new(T::of(value), T::zero())),
        };
        WcoOperator::new(phi, psi)
    }

    /// Records an operator with a Möbius symbol and a real constant or Jacobian-power weight.
    pub fn from_operator<T: Scalar>(w: &WcoOperator<T>) -> Result<Self> {
        let phi = match w.phi() {
            SymbolMap::Ball(m) => PhiRecord::Ball {
                center: vec_f64(m.center()),
                givens: Vec::new(),
                matrix: Some(rows_f64(m.rotation())),
            },
            SymbolMap::Canonical(m) => PhiRecord::Canonical {
                translation: vec_f64(m.translation()),
                scale: m.scale().to_f64_lossy(),
                pole: vec_f64(m.pole()),
                epsilon: m.branch().epsilon(),
                givens: Vec::new(),
                matrix: Some(rows_f64(m.rotation())),
            },
            SymbolMap::General { label, .. } => {
                return Err(Error::InvalidParameter(format!("symbol {label} has no declarative form")))
            }
        };
        let psi = match w.psi() {
            Weight::JacobianPower { constant } => PsiRecord::JacobianPower { constant: constant.to_f64_lossy() },
            Weight::Constant(c) if c.im == T::zero() => PsiRecord::Constant { value: c.re.to_f64_lossy() },
            other => return Err(Error::InvalidParameter(format!("weight {other:?} has no declarative form"))),
        };
        Ok(Self { dimension: w.dim(), phi, psi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BALL: &str = r#"
dimension = 3

[phi]
kind = "ball"
center = [0.5, 0.0, 0.0]
givens = [[1, 2, 0.3]]

[psi]
form = "jacobian-power"
constant = 2.0
"#;

    #[test]
    fn parses_ball_record() {
        let rec = OperatorRecord::from_text(BALL).unwrap();
        let w = rec.to_operator::<f64>().unwrap();
        let (m, c) = w.matched_ball().unwrap();
        assert_eq!(c, 2.0);
        assert!((m.rotation().get(1, 0) - 0.3f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn round_trips_through_text() {
        let w = OperatorRecord::from_text(BALL).unwrap().to_operator::<f64>().unwrap();
        let rec = OperatorRecord::from_operator(&w).unwrap();
        let again = OperatorRecord::from_text(&rec.to_text().unwrap()).unwrap();
        assert_eq!(rec, again);
        let w2 = again.to_operator::<f64>().unwrap();
        let x = [0.1, -0.3, 0.2];
        assert_eq!(w.phi().eval(&x).unwrap(), w2.phi().eval(&x).unwrap());
    }

    #[test]
    fn canonical_record() {
        let text = r#"
dimension = 3
[phi]
kind = "canonical"
translation = [3.0, 0.0, 0.0]
scale = 8.0
pole = [3.0, 0.0, 0.0]
epsilon = 2
[psi]
form = "constant"
value = 1.0
"#;
        let w = OperatorRecord::from_text(text).unwrap().to_operator::<f64>().unwrap();
        let img = w.phi().eval(&[1.0, 0.0, 0.0]).unwrap();
        assert!((img[0] - (3.0 - 8.0 / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_records() {
        assert!(OperatorRecord::from_text("dimension = 3").is_err());
        let wrong_dim = BALL.replace("center = [0.5, 0.0, 0.0]", "center = [0.5, 0.0]");
        assert!(OperatorRecord::from_text(&wrong_dim).unwrap().to_operator::<f64>().is_err());
        let outside = BALL.replace("0.5, 0.0, 0.0", "1.5, 0.0, 0.0");
        assert!(OperatorRecord::from_text(&outside).unwrap().to_operator::<f64>().is_err());
        let typo = BALL.replace("constant", "konstant");
        assert!(OperatorRecord::from_text(&typo).is_err());
    }
}
