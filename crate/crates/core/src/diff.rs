//! Central finite differences for maps `R^n → R^n` and scalar fields `R^n → C`.
//!
//! First derivatives default to `h = 1e-4`, second derivatives to `h = 1e-3`.

use num_complex::Complex;

use crate::error::Result;
use crate::geometry::PointMap;
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

pub const DEFAULT_FIRST_STEP: f64 = 1e-4;
pub const DEFAULT_SECOND_STEP: f64 = 1e-3;

/// Step sizes for first and second derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdSteps<T> {
    pub first: T,
    pub second: T,
}

impl<T: Scalar> Default for FdSteps<T> {
    fn default() -> Self {
        Self { first: T::of(DEFAULT_FIRST_STEP), second: T::of(DEFAULT_SECOND_STEP) }
    }
}

fn shifted<T: Scalar>(x: &[T], i: usize, delta: T) -> Vec<T> {
    let mut y = x.to_vec();
    y[i] += delta;
    y
}

/// Central-difference Jacobian; entry `(i, j)` approximates `∂φ_i/∂x_j`.
pub fn jacobian_matrix_fd<T: Scalar, M: PointMap<T> + ?Sized>(
    map: &M,
    x: &[T],
    h: T,
) -> Result<Matrix<T>> {
    let n = x.len();
    let mut jac = Matrix::zeros(n);
    let two_h = T::two() * h;
    for j in 0..n {
        let fp = map.apply(&shifted(x, j, h))?;
        let fm = map.apply(&shifted(x, j, -h))?;
        for i in 0..n {
            jac.set(i, j, (fp[i] - fm[i]) / two_h);
        }
    }
    Ok(jac)
}

/// Componentwise Laplacian `(Δφ_1, …, Δφ_n)` of a vector-valued map.
pub fn vector_laplacian_fd<T: Scalar, M: PointMap<T> + ?Sized>(
    map: &M,
    x: &[T],
    h: T,
) -> Result<Vector<T>> {
    let n = x.len();
    let center = map.apply(x)?;
    let mut lap = vec![T::zero(); n];
    let h2 = h * h;
    for j in 0..n {
        let fp = map.apply(&shifted(x, j, h))?;
        let fm = map.apply(&shifted(x, j, -h))?;
        for i in 0..n {
            lap[i] += (fp[i] - T::two() * center[i] + fm[i]) / h2;
        }
    }
    Ok(Vector::from_vec(lap))
}

pub fn gradient_fd<T: Scalar>(
    g: impl Fn(&[T]) -> Result<Complex<T>>,
    x: &[T],
    h: T,
) -> Result<Vec<Complex<T>>> {
    let two_h = T::two() * h;
    (0..x.len())
        .map(|j| Ok((g(&shifted(x, j, h))? - g(&shifted(x, j, -h))?) / two_h))
        .collect()
}

/// `Σ_i (g(x+h e_i) − 2 g(x) + g(x−h e_i)) / h²`.
pub fn laplacian_fd<T: Scalar>(
    g: impl Fn(&[T]) -> Result<Complex<T>>,
    x: &[T],
    h: T,
) -> Result<Complex<T>> {
    let center = g(x)?;
    let h2 = h * h;
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..x.len() {
        acc = acc + (g(&shifted(x, i, h))? + g(&shifted(x, i, -h))? - center * T::two()) / h2;
    }
    Ok(acc)
}

/// Richardson combination `(4 L(h/2) − L(h))/3` of [`laplacian_fd`]; error `O(h⁴)`.
pub fn laplacian_fd_extrapolated<T: Scalar>(
    g: impl Fn(&[T]) -> Result<Complex<T>>,
    x: &[T],
    h: T,
) -> Result<Complex<T>> {
    let coarse = laplacian_fd(&g, x, h)?;
    let fine = laplacian_fd(&g, x, h * T::half())?;
    Ok((fine * T::of(4.0) - coarse) / T::of(3.0))
}

/// Componentwise Richardson combination of [`vector_laplacian_fd`].
pub fn vector_laplacian_fd_extrapolated<T: Scalar, M: PointMap<T> + ?Sized>(
    map: &M,
    x: &[T],
    h: T,
) -> Result<Vector<T>> {
    let coarse = vector_laplacian_fd(map, x, h)?;
    let fine = vector_laplacian_fd(map, x, h * T::half())?;
    let three = T::of(3.0);
    Ok(Vector::from_vec(fine.iter().zip(coarse.iter()).map(|(&f, &c)| (T::of(4.0) * f - c) / three).collect()))
}

/// Full Hessian by central differences (mixed entries use the four-point stencil).
pub fn hessian_fd<T: Scalar>(
    g: impl Fn(&[T]) -> Result<Complex<T>>,
    x: &[T],
    h: T,
) -> Result<Vec<Vec<Complex<T>>>> {
    let n = x.len();
    let center = g(x)?;
    let h2 = h * h;
    let four_h2 = T::of(4.0) * h2;
    let mut hess = vec![vec![Complex::new(T::zero(), T::zero()); n]; n];
    for i in 0..n {
        hess[i][i] = (g(&shifted(x, i, h))? + g(&shifted(x, i, -h))? - center * T::two()) / h2;
        for j in i + 1..n {
            let pp = g(&shifted(&shifted(x, i, h), j, h))?;
            let pm = g(&shifted(&shifted(x, i, h), j, -h))?;
            let mp = g(&shifted(&shifted(x, i, -h), j, h))?;
            let mm = g(&shifted(&shifted(x, i, -h), j, -h))?;
            let v = (pp - pm - mp + mm) / four_h2;
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    Ok(hess)
}
