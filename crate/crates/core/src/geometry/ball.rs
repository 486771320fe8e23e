use crate::error::{Error, Result};
use crate::linalg::{check_dim, dot, norm_sq, Matrix, Vector};
use crate::scalar::Scalar;

use super::{bracket_sq, PointMap};

fn check_center<T: Scalar>(a: &[T]) -> Result<T> {
    let a2 = norm_sq(a);
    if !(a2 < T::one()) {
        return Err(Error::InvalidCenter(a2.sqrt().to_f64_lossy()));
    }
    Ok(a2)
}

/// The involutive ball automorphism swapping `0` and `a`:
/// `φ_a(x) = (|x−a|² a − (1−|a|²)(x−a)) / [x,a]²`.
pub fn eval_phi_a<T: Scalar>(a: &[T], x: &[T]) -> Result<Vector<T>> {
    check_dim(x, a.len())?;
    let a2 = check_center(a)?;
    let den = bracket_sq(x, a);
    if den == T::zero() {
        return Err(Error::Pole);
    }
    let u2 = x.iter().zip(a).fold(T::zero(), |acc, (&xi, &ai)| acc + (xi - ai) * (xi - ai));
    let k = T::one() - a2;
    Ok(Vector::from_vec(
        x.iter().zip(a).map(|(&xi, &ai)| (u2 * ai - k * (xi - ai)) / den).collect(),
    ))
}

/// Exact Jacobian matrix of `φ_a` by the quotient rule.
pub fn phi_a_jacobian<T: Scalar>(a: &[T], x: &[T]) -> Result<Matrix<T>> {
    check_dim(x, a.len())?;
    let a2 = check_center(a)?;
    let n = a.len();
    let k = T::one() - a2;
    let two = T::two();
    let u: Vec<T> = x.iter().zip(a).map(|(&xi, &ai)| xi - ai).collect();
    let u2 = norm_sq(&u);
    let den = T::one() - two * dot(x, a) + norm_sq(x) * a2;
    if den == T::zero() {
        return Err(Error::Pole);
    }
    let num: Vec<T> = (0..n).map(|i| u2 * a[i] - k * u[i]).collect();
    let grad_den: Vec<T> = (0..n).map(|j| two * (a2 * x[j] - a[j])).collect();
    let den2 = den * den;
    Ok(Matrix::from_fn(n, |i, j| {
        let dnum = two * u[j] * a[i] - if i == j { k } else { T::zero() };
        (dnum * den - num[i] * grad_den[j]) / den2
    }))
}

/// A Möbius automorphism of the ball written as `A∘φ_a`, with `A` orthogonal and `|a| < 1`.
///
/// `φ⁻¹(0) = a` and `φ(0) = A·a`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallMoebius<T> {
    rotation: Matrix<T>,
    center: Vector<T>,
}

impl<T: Scalar> BallMoebius<T> {
    pub fn new(rotation: Matrix<T>, center: Vector<T>) -> Result<Self> {
        check_dim(&center, rotation.dim())?;
        if center.dim() < 2 {
            return Err(Error::UnsupportedDimension(center.dim()));
        }
        let defect = rotation.orthogonality_defect();
        if defect > T::of(T::UNIT_TOL) {
            return Err(Error::NotOrthogonal(defect.to_f64_lossy()));
        }
        check_center(&center)?;
        Ok(Self { rotation, center })
    }

    /// `φ_a` itself.
    pub fn from_center(center: Vector<T>) -> Result<Self> {
        let n = center.dim();
        Self::new(Matrix::identity(n), center)
    }

    /// The orthogonal map `x ↦ −A x` written as `A∘φ_0`.
    pub fn from_rotation(rotation: Matrix<T>) -> Result<Self> {
        let n = rotation.dim();
        Self::new(rotation, Vector::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self { rotation: Matrix::identity(n).scaled(-T::one()), center: Vector::zeros(n) }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn rotation(&self) -> &Matrix<T> {
        &self.rotation
    }

    /// `a = φ⁻¹(0)`.
    pub fn center(&self) -> &Vector<T> {
        &self.center
    }

    /// `φ(0) = A·a`.
    pub fn image_of_origin(&self) -> Vector<T> {
        self.rotation.mul_vec(&self.center)
    }

    /// `|φ(0)| = |φ⁻¹(0)| = |a|`.
    pub fn origin_displacement(&self) -> T {
        self.center.norm()
    }

    pub fn eval(&self, x: &[T]) -> Result<Vector<T>> {
        Ok(self.rotation.mul_vec(&eval_phi_a(&self.center, x)?))
    }

    /// `(A∘φ_a)⁻¹ = φ_a∘Aᵗ = Aᵗ∘φ_{A a}`.
    pub fn inverse(&self) -> Self {
        Self { rotation: self.rotation.transpose(), center: self.image_of_origin() }
    }

    /// `|Dφ(x)| = (1 − |a|²)/[x,a]²`.
    pub fn jacobian_scalar(&self, x: &[T]) -> T {
        (T::one() - self.center.norm_sq()) / bracket_sq(x, &self.center)
    }

    /// Exact Jacobian matrix `A·Dφ_a(x)`.
    pub fn jacobian_matrix(&self, x: &[T]) -> Result<Matrix<T>> {
        Ok(self.rotation.matmul(&phi_a_jacobian(&self.center, x)?))
    }

    /// Sign of the Jacobian determinant, constant on the ball.
    pub fn orientation(&self) -> T {
        // det Dφ_a is continuous in a and never vanishes, so it has the sign of det(−I) = (−1)^n.
        let parity = if self.dim() % 2 == 0 { T::one() } else { -T::one() };
        parity * self.rotation.det().signum()
    }

    pub fn cast<U: Scalar>(&self) -> BallMoebius<U> {
        BallMoebius { rotation: self.rotation.cast(), center: self.center.cast() }
    }
}

impl<T: Scalar> PointMap<T> for BallMoebius<T> {
    fn dim(&self) -> usize {
        BallMoebius::dim(self)
    }

    fn apply(&self, x: &[T]) -> Result<Vector<T>> {
        self.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::jacobian_matrix_fd;
    use crate::linalg::max_abs_diff;
    use crate::quadrature::uniform_ball_points;

    fn v(c: &[f64]) -> Vector<f64> {
        Vector::from_slice(c)
    }

    #[test]
    fn phi_zero_is_antipodal_map() {
        let x = [0.2, -0.3, 0.4];
        let img = eval_phi_a(&[0.0; 3], &x).unwrap();
        assert!(max_abs_diff(&img, &[-0.2, 0.3, -0.4]) < 1e-15);
    }

    #[test]
    fn phi_swaps_origin_and_center() {
        let a = [0.5, 0.1, -0.2];
        assert!(max_abs_diff(&eval_phi_a(&a, &[0.0; 3]).unwrap(), &a) < 1e-15);
        assert!(eval_phi_a(&a, &a).unwrap().norm() < 1e-15);
        let x = [0.5, 0.0, 0.0];
        let a = [0.5, 0.0, 0.0];
        let twice = eval_phi_a(&a, &eval_phi_a(&a, &x).unwrap()).unwrap();
        assert!(max_abs_diff(&twice, &x) < 1e-15);
    }

    #[test]
    fn phi_rejects_outside_center() {
        assert!(matches!(eval_phi_a(&[1.0, 0.0], &[0.0, 0.0]), Err(Error::InvalidCenter(_))));
        assert!(matches!(BallMoebius::from_center(v(&[0.6, 0.8])), Err(Error::InvalidCenter(_))));
    }

    #[test]
    fn involution_on_sampled_points() {
        let a = [0.4, -0.5, 0.3];
        for x in uniform_ball_points::<f64>(3, 500, 0.99, 7) {
            let back = eval_phi_a(&a, &eval_phi_a(&a, &x).unwrap()).unwrap();
            assert!(max_abs_diff(&back, &x) < 1e-12);
        }
    }

    #[test]
    fn ball_eval_examples() {
        let id = BallMoebius::<f64>::from_center(v(&[0.0, 0.0, 0.0])).unwrap();
        assert!(max_abs_diff(&id.eval(&[0.1, 0.2, 0.3]).unwrap(), &[-0.1, -0.2, -0.3]) < 1e-15);
        let rot = Matrix::from_givens(3, &[(0, 1, 0.7), (1, 2, -0.4)]).unwrap();
        let m = BallMoebius::new(rot, v(&[0.2, 0.3, -0.1])).unwrap();
        let at0 = m.eval(&[0.0; 3]).unwrap();
        assert!(max_abs_diff(&at0, &m.image_of_origin()) < 1e-15);
        assert!((at0.norm() - m.origin_displacement()).abs() < 1e-15);
    }

    #[test]
    fn inverse_examples() {
        let m = BallMoebius::from_center(v(&[0.3, -0.2, 0.5])).unwrap();
        assert_eq!(m.inverse(), m);
        let rot = Matrix::from_givens(3, &[(0, 2, 1.1)]).unwrap();
        let r = BallMoebius::from_rotation(rot.clone()).unwrap();
        assert_eq!(r.inverse().rotation(), &rot.transpose());
    }

    #[test]
    fn inverse_round_trip_on_random_maps() {
        let rot = Matrix::from_givens(4, &[(0, 1, 0.3), (2, 3, 2.1), (1, 3, -0.8)]).unwrap();
        let m = BallMoebius::new(rot, v(&[0.1, -0.6, 0.2, 0.3])).unwrap();
        let inv = m.inverse();
        for x in uniform_ball_points::<f64>(4, 1000, 0.99, 11) {
            let back = inv.eval(&m.eval(&x).unwrap()).unwrap();
            assert!(max_abs_diff(&back, &x) < 1e-12);
        }
    }

    #[test]
    fn jacobian_scalar_examples() {
        let m = BallMoebius::from_center(v(&[0.5, 0.0, 0.0])).unwrap();
        assert!((m.jacobian_scalar(&[0.0; 3]) - 0.75).abs() < 1e-15);
        let fd = jacobian_matrix_fd(&m, &[0.0; 3], 1e-4).unwrap();
        assert!((fd.det().abs().cbrt() - 0.75).abs() < 1e-8);
        let rot = BallMoebius::from_rotation(Matrix::<f64>::givens(3, 0, 1, 0.3).unwrap()).unwrap();
        assert!((rot.jacobian_scalar(&[0.4, 0.1, -0.3]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        let rot = Matrix::from_givens(3, &[(0, 1, 0.3)]).unwrap();
        let m = BallMoebius::new(rot, v(&[0.3, 0.4, -0.2])).unwrap();
        for x in uniform_ball_points::<f64>(3, 100, 0.9, 3) {
            let exact = m.jacobian_matrix(&x).unwrap();
            let fd = jacobian_matrix_fd(&m, &x, 1e-4).unwrap();
            assert!(exact.sub(&fd).max_abs() < 1e-6);
            let s = crate::geometry::scale_of(&exact);
            assert!((s - m.jacobian_scalar(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn scalar_type_f32_evaluates() {
        let m = BallMoebius::<f32>::from_center(Vector::from_slice(&[0.5f32, 0.0])).unwrap();
        let y = m.eval(&[0.25, 0.0]).unwrap();
        let back = m.eval(&y).unwrap();
        assert!((back[0] - 0.25).abs() < 1e-6);
    }
}
