//! The harmonicity-preservation system `Δψ = 0`, `ψΔφ + 2(Dφ)∇ψ = 0`,
//! `Dφ(Dφ)ᵗ = |Dφ|²I` and closed-form derivatives of sphere reflections.

use num_complex::Complex;

use crate::diff::{
    gradient_fd, jacobian_matrix_fd, laplacian_fd, laplacian_fd_extrapolated, vector_laplacian_fd, FdSteps,
};
use crate::error::{Error, Result};
use crate::geometry::{cr_defect, reflect_sphere, FnMap};
use crate::hardy::HarmonicFn;
use crate::linalg::{check_dim, dist_sq, Matrix, Vector};
use crate::scalar::Scalar;

use super::WcoOperator;

/// Finite-difference stencil for Laplacians.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Three-point central differences, `O(h²)`.
    #[default]
    Plain,
    /// Richardson extrapolation of two plain stencils, `O(h⁴)`.
    Richardson,
}

/// Residuals of the three conditions at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdeResiduals<T> {
    /// `|Δψ|`.
    pub laplacian_psi: T,
    /// `max_i |ψΔφ_i + 2(Dφ∇ψ)_i|`.
    pub transport: T,
    /// `max |Dφ(Dφ)ᵗ − |Dφ|²I|`.
    pub conformality: T,
}

impl<T: Scalar> PdeResiduals<T> {
    pub fn max(&self) -> T {
        self.laplacian_psi.max(self.transport).max(self.conformality)
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.laplacian_psi, self.transport, self.conformality]
    }
}

/// All three residuals by central differences: Laplacians with `steps.second`, first derivatives with `steps.first`.
pub fn pde_conditions_check<T: Scalar>(w: &WcoOperator<T>, x: &[T], steps: FdSteps<T>) -> Result<PdeResiduals<T>> {
    check_dim(x, w.dim())?;
    let psi = |z: &[T]| w.psi_at(z);
    let laplacian_psi = laplacian_fd(psi, x, steps.second)?.norm();

    let lap_phi = vector_laplacian_fd(w.phi(), x, steps.second)?;
    let jac = jacobian_matrix_fd(w.phi(), x, steps.first)?;
    let grad_psi = gradient_fd(psi, x, steps.first)?;
    let psi0 = w.psi_at(x)?;
    let two = T::two();
    let mut transport = T::zero();
    for i in 0..x.len() {
        let mut v = psi0 * lap_phi[i];
        for (j, g) in grad_psi.iter().enumerate() {
            v = v + *g * (two * jac.get(i, j));
        }
        transport = transport.max(v.norm());
    }
    Ok(PdeResiduals { laplacian_psi, transport, conformality: cr_defect(&jac) })
}

/// `max_x |Δ(W f)(x)|` over `points`.
pub fn harmonicity_preservation_check<T: Scalar>(
    w: &WcoOperator<T>,
    f: &HarmonicFn<T>,
    points: &[Vector<T>],
    h: T,
    stencil: Stencil,
) -> Result<T> {
    let g = |x: &[T]| w.apply(f, x);
    let mut worst = T::zero();
    for x in points {
        let lap: Complex<T> = match stencil {
            Stencil::Plain => laplacian_fd(g, x, h)?,
            Stencil::Richardson => laplacian_fd_extrapolated(g, x, h)?,
        };
        worst = worst.max(lap.norm());
    }
    Ok(worst)
}

/// Closed-form derivatives of the reflection `φ(x) = a + r²(x−a)/|x−a|²` and of `ψ = |Dφ|^{(n−2)/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionDerivatives<T> {
    /// `ψ(x) = r^{n−2}/|x−a|^{n−2}`.
    pub psi: T,
    /// `Δφ = 2(2−n)r²(x−a)/|x−a|⁴`.
    pub laplacian: Vector<T>,
    /// `∇ψ = (2−n)r^{n−2}(x−a)/|x−a|^n`.
    pub grad_psi: Vector<T>,
    /// `Dφ = r²/|x−a|²·(I − 2Q(x−a))`, `Q(u) = uuᵗ/|u|²`.
    pub jacobian: Matrix<T>,
}

pub fn sphere_reflection_derivatives<T: Scalar>(center: &[T], radius: T, x: &[T]) -> Result<ReflectionDerivatives<T>> {
    check_dim(x, center.len())?;
    let d2 = dist_sq(x, center);
    if d2 == T::zero() {
        return Err(Error::Pole);
    }
    let n = T::of_usize(x.len());
    let two = T::two();
    let u: Vec<T> = x.iter().zip(center).map(|(&xi, &ai)| xi - ai).collect();
    let r2 = radius * radius;
    let rn2 = radius.powf(n - two);
    let d = d2.sqrt();
    let lap_c = two * (two - n) * r2 / (d2 * d2);
    let grad_c = (two - n) * rn2 / d.powf(n);
    let jacobian = Matrix::from_fn(x.len(), |i, j| {
        let delta = if i == j { T::one() } else { T::zero() };
        r2 / d2 * (delta - two * u[i] * u[j] / d2)
    });
    Ok(ReflectionDerivatives {
        psi: rn2 / d.powf(n - two),
        laplacian: Vector::from_vec(u.iter().map(|&c| lap_c * c).collect()),
        grad_psi: Vector::from_vec(u.iter().map(|&c| grad_c * c).collect()),
        jacobian,
    })
}

/// Largest discrepancy between the closed forms and central differences with step `h`.
pub fn reflection_derivatives_defect<T: Scalar>(center: &[T], radius: T, x: &[T], h: T) -> Result<T> {
    let exact = sphere_reflection_derivatives(center, radius, x)?;
    let n = x.len();
    let map = FnMap::new(n, |z: &[T]| reflect_sphere(center, radius, z));
    let e = (T::of_usize(n) - T::two()) * T::half();
    let psi = |z: &[T]| -> Result<Complex<T>> {
        let d2 = dist_sq(z, center);
        Ok(Complex::new((radius * radius / d2).powf(e), T::zero()))
    };
    let lap = vector_laplacian_fd(&map, x, h)?;
    let jac = jacobian_matrix_fd(&map, x, h)?;
    let grad = gradient_fd(psi, x, h)?;
    let mut worst = (psi(x)?.re - exact.psi).abs();
    for i in 0..n {
        worst = worst.max((lap[i] - exact.laplacian[i]).abs());
        worst = worst.max((grad[i].re - exact.grad_psi[i]).abs());
    }
    Ok(worst.max(jac.sub(&exact.jacobian).max_abs()))
}
