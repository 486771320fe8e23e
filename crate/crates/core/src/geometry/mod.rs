//! Möbius transformations of `R̂^n` and of the unit ball.

mod ball;
mod canonical;
mod cone;
mod identities;

use std::sync::Arc;

pub use ball::{eval_phi_a, phi_a_jacobian, BallMoebius};
pub use canonical::{Branch, CanonicalMoebius};
pub use cone::{cone_image_aperture, Cone};
pub use identities::{identity_residuals, IdentityResiduals};

use crate::diff::jacobian_matrix_fd;
use crate::error::{Error, Result};
use crate::linalg::{dist_sq, dot, norm, norm_sq, Matrix, Vector};
use crate::scalar::Scalar;

/// A map `R^n → R^n` that may fail at isolated points (poles).
pub trait PointMap<T: Scalar> {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[T]) -> Result<Vector<T>>;
}

impl<T: Scalar> PointMap<T> for Matrix<T> {
    fn dim(&self) -> usize {
        Matrix::dim(self)
    }

    fn apply(&self, x: &[T]) -> Result<Vector<T>> {
        Ok(self.mul_vec(x))
    }
}

impl<T: Scalar, M: PointMap<T> + ?Sized> PointMap<T> for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[T]) -> Result<Vector<T>> {
        (**self).apply(x)
    }
}

impl<T: Scalar, M: PointMap<T> + ?Sized> PointMap<T> for Arc<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[T]) -> Result<Vector<T>> {
        (**self).apply(x)
    }
}

/// Adapts a closure into a [`PointMap`].
#[derive(Clone)]
pub struct FnMap<F> {
    dim: usize,
    f: F,
}

impl<F> FnMap<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<T: Scalar, F: Fn(&[T]) -> Result<Vector<T>>> PointMap<T> for FnMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[T]) -> Result<Vector<T>> {
        (self.f)(x)
    }
}

/// `outer ∘ inner`.
#[derive(Clone, Debug)]
pub struct Compose<A, B> {
    pub outer: A,
    pub inner: B,
}

impl<T: Scalar, A: PointMap<T>, B: PointMap<T>> PointMap<T> for Compose<A, B> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[T]) -> Result<Vector<T>> {
        self.outer.apply(&self.inner.apply(x)?)
    }
}

/// Reflection in the sphere `S(a, r)`: `x ↦ a + r²(x − a)/|x − a|²`.
pub fn reflect_sphere<T: Scalar>(center: &[T], radius: T, x: &[T]) -> Result<Vector<T>> {
    if !(radius > T::zero()) {
        return Err(Error::InvalidParameter(format!("sphere radius {radius} must be positive")));
    }
    let d2 = dist_sq(x, center);
    if d2 == T::zero() {
        return Err(Error::Pole);
    }
    let s = radius * radius / d2;
    Ok(Vector::from_vec(center.iter().zip(x).map(|(&a, &xi)| a + s * (xi - a)).collect()))
}

/// Reflection in the hyperplane `{x : x·a = t}` with unit normal `a`.
pub fn reflect_hyperplane<T: Scalar>(normal: &[T], offset: T, x: &[T]) -> Result<Vector<T>> {
    let len = norm(normal);
    if (len - T::one()).abs() > T::of(T::UNIT_TOL) {
        return Err(Error::InvalidNormal(len.to_f64_lossy()));
    }
    let s = T::two() * (dot(x, normal) - offset);
    Ok(Vector::from_vec(x.iter().zip(normal).map(|(&xi, &ai)| xi - s * ai).collect()))
}

/// `[x,a]² = 1 − 2x·a + |x|²|a|²`, evaluated as `| |a|x − a/|a| |²` to avoid cancellation.
pub fn bracket_sq<T: Scalar>(x: &[T], a: &[T]) -> T {
    let a2 = norm_sq(a);
    if a2 == T::zero() {
        return T::one();
    }
    let ra = a2.sqrt();
    x.iter().zip(a).fold(T::zero(), |acc, (&xi, &ai)| {
        let d = ra * xi - ai / ra;
        acc + d * d
    })
}

/// `[x,a] = (1 − 2x·a + |x|²|a|²)^{1/2}`.
pub fn bracket<T: Scalar>(x: &[T], a: &[T]) -> Result<T> {
    let radicand = T::one() - T::two() * dot(x, a) + norm_sq(x) * norm_sq(a);
    if !radicand.is_finite() || radicand < -T::of(T::UNIT_TOL) * (T::one() + norm_sq(x) * norm_sq(a)) {
        return Err(Error::NegativeRadicand(radicand.to_f64_lossy()));
    }
    Ok(bracket_sq(x, a).sqrt())
}

/// Conformal scale `|Dφ| = |det Dφ|^{1/n}` of a matrix.
pub fn scale_of<T: Scalar>(jac: &Matrix<T>) -> T {
    jac.det().abs().powf(T::one() / T::of_usize(jac.dim()))
}

/// Max entry of `Dφ·Dφᵗ − |Dφ|² I` with a central-difference Jacobian.
pub fn cr_residual<T: Scalar, M: PointMap<T> + ?Sized>(map: &M, x: &[T], h: T) -> Result<T> {
    let jac = jacobian_matrix_fd(map, x, h)?;
    Ok(cr_defect(&jac))
}

/// Max entry of `J·Jᵗ − |det J|^{2/n} I` for a given Jacobian.
pub fn cr_defect<T: Scalar>(jac: &Matrix<T>) -> T {
    let s = scale_of(jac);
    jac.matmul(&jac.transpose()).sub(&Matrix::identity(jac.dim()).scaled(s * s)).max_abs()
}

/// Whether `sign(det Dφ)` is the same at every sample point (finite-difference Jacobian).
pub fn jacobian_sign_is_constant<T: Scalar, M: PointMap<T> + ?Sized>(
    map: &M,
    points: &[Vector<T>],
    h: T,
) -> Result<bool> {
    let mut sign = None;
    for x in points {
        let d = jacobian_matrix_fd(map, x, h)?.det();
        if d == T::zero() {
            return Ok(false);
        }
        let s = d > T::zero();
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}
