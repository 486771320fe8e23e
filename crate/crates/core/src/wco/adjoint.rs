//! The adjoint of `W` on extended Poisson kernels and as an explicit integral.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hardy::{poisson_kernel, BoundaryData, HarmonicFn};
use crate::linalg::check_dim;
use crate::quadrature::{integrate_par, SphericalRule};
use crate::scalar::Scalar;

use super::WcoOperator;

fn nan<T: Scalar>() -> Complex<T> {
    Complex::new(T::nan(), T::nan())
}

/// `W* P_y = ψ(y)·P_{φ(y)}`.
pub fn adjoint_on_kernel<T: Scalar>(w: &WcoOperator<T>, y: &[T]) -> Result<HarmonicFn<T>> {
    let (m, _) = w.require_matched_ball()?;
    let center = m.eval(y)?;
    HarmonicFn::extended_poisson(center)?.scaled(w.psi_at(y)?)
}

/// `(W* f)(y) = ∫ f*(ζ) ψ(ζ) P(y, φ(ζ)) dσ(ζ)`.
pub fn adjoint_integral<T: Scalar>(
    w: &WcoOperator<T>,
    f: &BoundaryData<T>,
    y: &[T],
    rule: &SphericalRule<T>,
) -> Result<Complex<T>> {
    check_dim(y, w.dim())?;
    w.require_matched_ball()?;
    integrate_par(rule, |z| {
        let val = || -> Result<Complex<T>> { Ok(f.eval(z) * w.psi_at(z)? * poisson_kernel(y, &w.phi().eval(z)?)?) };
        val().unwrap_or_else(|_| nan())
    })
}

/// `(⟨W f, P_y⟩, ⟨f, W* P_y⟩)` for the bilinear boundary pairing:
/// `∫ ψ(ζ) f*(φ(ζ)) P(y,ζ) dσ` and `ψ(y) ∫ f*(ζ) P(φ(y),ζ) dσ`.
pub fn duality_check<T: Scalar>(
    w: &WcoOperator<T>,
    f: &HarmonicFn<T>,
    y: &[T],
    rule: &SphericalRule<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    check_dim(y, w.dim())?;
    let (m, _) = w.require_matched_ball()?;
    if matches!(f, HarmonicFn::PoissonOfMeasure(_)) {
        return Err(Error::InvalidParameter("duality needs boundary values".into()));
    }
    let lhs = integrate_par(rule, |z| {
        let val = || -> Result<Complex<T>> { Ok(w.apply_boundary(f, z)? * poisson_kernel(y, z)?) };
        val().unwrap_or_else(|_| nan())
    })?;
    let fy = m.eval(y)?;
    let psi_y = w.psi_at(y)?;
    let rhs = integrate_par(rule, |z| {
        let val = || -> Result<Complex<T>> {
            let fz = f.boundary_value(z).ok_or(Error::InvalidParameter("no boundary value".into()))?;
            Ok(fz * poisson_kernel(&fy, z)?)
        };
        val().unwrap_or_else(|_| nan())
    })?;
    Ok((lhs, psi_y * rhs))
}
