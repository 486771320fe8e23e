use crate::error::{Error, Result};
use crate::linalg::{check_dim, dist_sq, Matrix, Vector};
use crate::scalar::Scalar;

use super::PointMap;

/// Exponent `ε` of the canonical form: `0` for similarities, `2` for inversions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Similarity,
    Inversion,
}

impl Branch {
    pub fn epsilon(self) -> u8 {
        match self {
            Branch::Similarity => 0,
            Branch::Inversion => 2,
        }
    }

    pub fn from_epsilon(eps: u8) -> Result<Self> {
        match eps {
            0 => Ok(Branch::Similarity),
            2 => Ok(Branch::Inversion),
            other => Err(Error::InvalidParameter(format!("epsilon must be 0 or 2, got {other}"))),
        }
    }
}

/// Canonical form `φ(x) = b + α A (x − a)/|x − a|^ε` of a Möbius map of `R̂^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalMoebius<T> {
    translation: Vector<T>,
    scale: T,
    rotation: Matrix<T>,
    pole: Vector<T>,
    branch: Branch,
}

impl<T: Scalar> CanonicalMoebius<T> {
    pub fn new(
        translation: Vector<T>,
        scale: T,
        rotation: Matrix<T>,
        pole: Vector<T>,
        branch: Branch,
    ) -> Result<Self> {
        let n = rotation.dim();
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        check_dim(&translation, n)?;
        check_dim(&pole, n)?;
        if scale == T::zero() || !scale.is_finite() {
            return Err(Error::InvalidParameter("alpha must be finite and nonzero".into()));
        }
        let defect = rotation.orthogonality_defect();
        if defect > T::of(T::UNIT_TOL) {
            return Err(Error::NotOrthogonal(defect.to_f64_lossy()));
        }
        Ok(Self { translation, scale, rotation, pole, branch })
    }

    /// Reflection in the sphere `S(a, r)`: `b = a`, `α = r²`, `A = I`, `ε = 2`.
    pub fn sphere_reflection(center: Vector<T>, radius: T) -> Result<Self> {
        let n = center.dim();
        Self::new(center.clone(), radius * radius, Matrix::identity(n), center, Branch::Inversion)
    }

    /// Reflection in the hyperplane `x·e = t`: `x ↦ (I − 2eeᵗ)x + 2te`.
    pub fn hyperplane_reflection(normal: Vector<T>, offset: T) -> Result<Self> {
        let len = normal.norm();
        if (len - T::one()).abs() > T::of(T::UNIT_TOL) {
            return Err(Error::InvalidNormal(len.to_f64_lossy()));
        }
        let n = normal.dim();
        let two = T::two();
        let householder = Matrix::from_fn(n, |i, j| {
            let delta = if i == j { T::one() } else { T::zero() };
            delta - two * normal[i] * normal[j]
        });
        Self::new(normal.scaled(two * offset), T::one(), householder, Vector::zeros(n), Branch::Similarity)
    }

    /// Sphere reflection whose mirror `S(a, √(|a|²−1))` is orthogonal to the unit
    /// sphere, hence maps the ball onto itself; requires `|a| > 1`.
    pub fn orthogonal_sphere_reflection(center: Vector<T>) -> Result<Self> {
        let a2 = center.norm_sq();
        if !(a2 > T::one()) {
            return Err(Error::InvalidParameter("orthogonal mirror needs |a| > 1".into()));
        }
        Self::sphere_reflection(center, (a2 - T::one()).sqrt())
    }

    pub fn dim(&self) -> usize {
        self.rotation.dim()
    }

    pub fn translation(&self) -> &Vector<T> {
        &self.translation
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn rotation(&self) -> &Matrix<T> {
        &self.rotation
    }

    pub fn pole(&self) -> &Vector<T> {
        &self.pole
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn eval(&self, x: &[T]) -> Result<Vector<T>> {
        check_dim(x, self.dim())?;
        let u: Vec<T> = x.iter().zip(self.pole.iter()).map(|(&xi, &ai)| xi - ai).collect();
        let factor = match self.branch {
            Branch::Similarity => self.scale,
            Branch::Inversion => {
                let d2 = dist_sq(x, &self.pole);
                if d2 == T::zero() {
                    return Err(Error::Pole);
                }
                self.scale / d2
            }
        };
        let au = self.rotation.mul_vec(&u);
        Ok(Vector::from_vec(
            self.translation.iter().zip(au.iter()).map(|(&b, &v)| b + factor * v).collect(),
        ))
    }

    /// `|Dφ(x)|`: `|α|` or `|α|/|x − a|²`.
    pub fn conformal_factor(&self, x: &[T]) -> Result<T> {
        match self.branch {
            Branch::Similarity => Ok(self.scale.abs()),
            Branch::Inversion => {
                let d2 = dist_sq(x, &self.pole);
                if d2 == T::zero() {
                    return Err(Error::Pole);
                }
                Ok(self.scale.abs() / d2)
            }
        }
    }

    /// Exact Jacobian: `αA` or `α/|x−a|² · A (I − 2Q(x−a))` with `Q(u) = uuᵗ/|u|²`.
    pub fn jacobian_matrix(&self, x: &[T]) -> Result<Matrix<T>> {
        match self.branch {
            Branch::Similarity => Ok(self.rotation.scaled(self.scale)),
            Branch::Inversion => {
                let d2 = dist_sq(x, &self.pole);
                if d2 == T::zero() {
                    return Err(Error::Pole);
                }
                let n = self.dim();
                let u: Vec<T> = x.iter().zip(self.pole.iter()).map(|(&xi, &ai)| xi - ai).collect();
                let two = T::two();
                let refl = Matrix::from_fn(n, |i, j| {
                    let delta = if i == j { T::one() } else { T::zero() };
                    delta - two * u[i] * u[j] / d2
                });
                Ok(self.rotation.matmul(&refl).scaled(self.scale / d2))
            }
        }
    }

    pub fn cast<U: Scalar>(&self) -> CanonicalMoebius<U> {
        CanonicalMoebius {
            translation: self.translation.cast(),
            scale: U::of(self.scale.to_f64_lossy()),
            rotation: self.rotation.cast(),
            pole: self.pole.cast(),
            branch: self.branch,
        }
    }
}

impl<T: Scalar> PointMap<T> for CanonicalMoebius<T> {
    fn dim(&self) -> usize {
        CanonicalMoebius::dim(self)
    }

    fn apply(&self, x: &[T]) -> Result<Vector<T>> {
        self.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::jacobian_matrix_fd;
    use crate::geometry::reflect_sphere;
    use crate::linalg::max_abs_diff;

    fn v(c: &[f64]) -> Vector<f64> {
        Vector::from_slice(c)
    }

    #[test]
    fn identity_similarity() {
        let m = CanonicalMoebius::new(v(&[0.0; 3]), 1.0, Matrix::identity(3), v(&[0.0; 3]), Branch::Similarity)
            .unwrap();
        let x = [0.3, -0.7, 2.0];
        assert_eq!(m.eval(&x).unwrap().as_slice(), &x);
    }

    #[test]
    fn unit_inversion() {
        let m = CanonicalMoebius::new(v(&[0.0; 3]), 1.0, Matrix::identity(3), v(&[0.0; 3]), Branch::Inversion)
            .unwrap();
        assert!(max_abs_diff(&m.eval(&[0.5, 0.0, 0.0]).unwrap(), &[2.0, 0.0, 0.0]) < 1e-15);
        assert_eq!(m.eval(&[0.0; 3]), Err(Error::Pole));
    }

    #[test]
    fn canonical_form_of_sphere_reflection() {
        let a = v(&[3.0, 0.0, 0.0]);
        let m = CanonicalMoebius::new(a.clone(), 4.0, Matrix::identity(3), a.clone(), Branch::Inversion).unwrap();
        let x = [1.0, 0.0, 0.0];
        let img = m.eval(&x).unwrap();
        assert!(max_abs_diff(&img, &[1.0, 0.0, 0.0]) < 1e-15);
        assert!(max_abs_diff(&img, &reflect_sphere(&a, 2.0, &x).unwrap()) < 1e-15);
        let origin = m.eval(&[0.0; 3]).unwrap();
        assert!(max_abs_diff(&origin, &[3.0 - 4.0 / 3.0, 0.0, 0.0]) < 1e-15);
    }

    #[test]
    fn rejects_invalid_parameters() {
        let bad = Matrix::diagonal(&[1.0, 2.0]);
        assert!(matches!(
            CanonicalMoebius::new(v(&[0.0, 0.0]), 1.0, bad, v(&[0.0, 0.0]), Branch::Similarity),
            Err(Error::NotOrthogonal(_))
        ));
        assert!(CanonicalMoebius::new(v(&[0.0, 0.0]), 0.0, Matrix::identity(2), v(&[0.0, 0.0]), Branch::Similarity)
            .is_err());
        assert!(Branch::from_epsilon(1).is_err());
    }

    #[test]
    fn orthogonal_reflection_preserves_sphere() {
        let m = CanonicalMoebius::orthogonal_sphere_reflection(v(&[1.5, 0.0, 0.0])).unwrap();
        for z in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [-0.6, 0.0, 0.8]] {
            assert!((m.eval(&z).unwrap().norm() - 1.0).abs() < 1e-14);
        }
        assert!(m.eval(&[0.2, 0.1, -0.3]).unwrap().norm() < 1.0);
    }

    #[test]
    fn exact_jacobian_matches_fd() {
        let rot = Matrix::from_givens(3, &[(0, 1, 0.4)]).unwrap();
        let m = CanonicalMoebius::new(v(&[0.1, 0.0, 0.2]), -2.5, rot, v(&[2.0, 1.0, 0.5]), Branch::Inversion).unwrap();
        let x = [0.3, -0.2, 0.1];
        let exact = m.jacobian_matrix(&x).unwrap();
        let fd = jacobian_matrix_fd(&m, &x, 1e-4).unwrap();
        assert!(exact.sub(&fd).max_abs() < 1e-7);
        let s = crate::geometry::scale_of(&exact);
        assert!((s - m.conformal_factor(&x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn hyperplane_reflection_in_canonical_form() {
        let m = CanonicalMoebius::hyperplane_reflection(v(&[1.0, 0.0, 0.0]), 1.0).unwrap();
        assert!(max_abs_diff(&m.eval(&[3.0, 0.0, 0.0]).unwrap(), &[-1.0, 0.0, 0.0]) < 1e-15);
    }
}
