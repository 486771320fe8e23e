//! The weighted composition operator `W f = ψ·(f∘φ)`.

mod adjoint;
mod cases;
mod norm;
mod pde;
mod record;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

pub use adjoint::{adjoint_integral, adjoint_on_kernel, duality_check};
pub use cases::{negative_witnesses, positive_cases, NamedOperator, NegativeWitness};
pub use norm::{
    boundary_norm_ratio, essential_norm_formula, norm_exponent, norm_formula, poisson_sup_inequality_check,
    ratio_curve, ratio_curve_max, sweep_test_functions, upper_bound_h1, upper_bound_hp, upper_sweep,
    weak_null_probe, RatioCurveMax, SweepEntry,
};
pub use pde::{
    harmonicity_preservation_check, pde_conditions_check, reflection_derivatives_defect,
    sphere_reflection_derivatives, PdeResiduals, ReflectionDerivatives, Stencil,
};
pub use record::{OperatorRecord, PhiRecord, PsiRecord};

use crate::diff::{jacobian_matrix_fd, DEFAULT_FIRST_STEP};
use crate::error::{Error, Result};
use crate::geometry::{jacobian_sign_is_constant, scale_of, BallMoebius, CanonicalMoebius, PointMap};
use crate::hardy::HarmonicFn;
use crate::linalg::{check_dim, Matrix, Vector};
use crate::quadrature::{integrate_par, uniform_ball_points, SphericalRule};
use crate::scalar::Scalar;

type DynMap<T> = dyn PointMap<T> + Send + Sync;
type DynWeight<T> = dyn Fn(&[T]) -> Complex<T> + Send + Sync;

/// The symbol `φ` of the operator.
#[derive(Clone)]
pub enum SymbolMap<T: Scalar> {
    Ball(BallMoebius<T>),
    Canonical(CanonicalMoebius<T>),
    /// Any other map; derivatives come from finite differences.
    General { label: String, map: Arc<DynMap<T>> },
}

impl<T: Scalar> fmt::Debug for SymbolMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolMap::Ball(m) => f.debug_tuple("Ball").field(m).finish(),
            SymbolMap::Canonical(m) => f.debug_tuple("Canonical").field(m).finish(),
            SymbolMap::General { label, .. } => f.debug_tuple("General").field(label).finish(),
        }
    }
}

impl<T: Scalar> SymbolMap<T> {
    pub fn general(label: impl Into<String>, map: impl PointMap<T> + Send + Sync + 'static) -> Self {
        SymbolMap::General { label: label.into(), map: Arc::new(map) }
    }

    pub fn dim(&self) -> usize {
        match self {
            SymbolMap::Ball(m) => m.dim(),
            SymbolMap::Canonical(m) => m.dim(),
            SymbolMap::General { map, .. } => map.dim(),
        }
    }

    pub fn eval(&self, x: &[T]) -> Result<Vector<T>> {
        match self {
            SymbolMap::Ball(m) => m.eval(x),
            SymbolMap::Canonical(m) => m.eval(x),
            SymbolMap::General { map, .. } => map.apply(x),
        }
    }

    /// Exact Jacobian for Möbius symbols, central differences (`h = 1e-4`) otherwise.
    pub fn jacobian_matrix(&self, x: &[T]) -> Result<Matrix<T>> {
        match self {
            SymbolMap::Ball(m) => m.jacobian_matrix(x),
            SymbolMap::Canonical(m) => m.jacobian_matrix(x),
            SymbolMap::General { map, .. } => jacobian_matrix_fd(map, x, T::of(DEFAULT_FIRST_STEP)),
        }
    }

    /// `|Dφ(x)| = |det Dφ(x)|^{1/n}`.
    pub fn conformal_scale(&self, x: &[T]) -> Result<T> {
        match self {
            SymbolMap::Ball(m) => Ok(m.jacobian_scalar(x)),
            SymbolMap::Canonical(m) => m.conformal_factor(x),
            SymbolMap::General { .. } => Ok(scale_of(&self.jacobian_matrix(x)?)),
        }
    }

    pub fn as_ball(&self) -> Option<&BallMoebius<T>> {
        match self {
            SymbolMap::Ball(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_moebius(&self) -> bool {
        !matches!(self, SymbolMap::General { .. })
    }

    pub fn label(&self) -> String {
        match self {
            SymbolMap::Ball(m) => format!("ball(|a|={:.4})", m.origin_displacement().to_f64_lossy()),
            SymbolMap::Canonical(m) => {
                format!("canonical(eps={}, alpha={:.4})", m.branch().epsilon(), m.scale().to_f64_lossy())
            }
            SymbolMap::General { label, .. } => label.clone(),
        }
    }
}

impl<T: Scalar> PointMap<T> for SymbolMap<T> {
    fn dim(&self) -> usize {
        SymbolMap::dim(self)
    }

    fn apply(&self, x: &[T]) -> Result<Vector<T>> {
        self.eval(x)
    }
}

/// The multiplier `ψ`.
#[derive(Clone)]
pub enum Weight<T: Scalar> {
    /// `C·|Dφ|^{(n−2)/2}` for the operator's own symbol.
    JacobianPower { constant: T },
    Constant(Complex<T>),
    Custom { label: String, f: Arc<DynWeight<T>> },
}

impl<T: Scalar> fmt::Debug for Weight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::JacobianPower { constant } => f.debug_struct("JacobianPower").field("constant", constant).finish(),
            Weight::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Weight::Custom { label, .. } => f.debug_tuple("Custom").field(label).finish(),
        }
    }
}

impl<T: Scalar> Weight<T> {
    pub fn custom(label: impl Into<String>, f: impl Fn(&[T]) -> Complex<T> + Send + Sync + 'static) -> Self {
        Weight::Custom { label: label.into(), f: Arc::new(f) }
    }
}

/// Quadrature-free facts sampled from the standing assumptions on `φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandingAssumptions<T> {
    /// Largest `|φ(x)|` over the sampled points; must not exceed 1.
    pub max_image_radius: T,
    pub orientation_constant: bool,
}

impl<T: Scalar> StandingAssumptions<T> {
    pub fn hold(&self) -> bool {
        self.max_image_radius <= T::one() + T::of(1e-9) && self.orientation_constant
    }
}

/// `W_{φ,ψ} f = ψ·(f∘φ)`.
#[derive(Clone, Debug)]
pub struct WcoOperator<T: Scalar> {
    phi: SymbolMap<T>,
    psi: Weight<T>,
}

impl<T: Scalar> WcoOperator<T> {
    pub fn new(phi: SymbolMap<T>, psi: Weight<T>) -> Result<Self> {
        if phi.dim() < 2 {
            return Err(Error::UnsupportedDimension(phi.dim()));
        }
        Ok(Self { phi, psi })
    }

    /// `ψ = C|Dφ|^{(n−2)/2}`.
    pub fn matched(phi: SymbolMap<T>, constant: T) -> Result<Self> {
        Self::new(phi, Weight::JacobianPower { constant })
    }

    /// `ψ = |Dφ|^{(n−2)/2}` for a ball automorphism.
    pub fn moebius(m: BallMoebius<T>) -> Self {
        Self { phi: SymbolMap::Ball(m), psi: Weight::JacobianPower { constant: T::one() } }
    }

    pub fn identity(n: usize) -> Self {
        Self::moebius(BallMoebius::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    pub fn phi(&self) -> &SymbolMap<T> {
        &self.phi
    }

    pub fn psi(&self) -> &Weight<T> {
        &self.psi
    }

    /// The ball automorphism together with `C` when `ψ = C|Dφ|^{(n−2)/2}`.
    pub fn matched_ball(&self) -> Option<(&BallMoebius<T>, T)> {
        match (&self.phi, &self.psi) {
            (SymbolMap::Ball(m), Weight::JacobianPower { constant }) => Some((m, *constant)),
            _ => None,
        }
    }

    pub(crate) fn require_matched_ball(&self) -> Result<(&BallMoebius<T>, T)> {
        self.matched_ball()
            .ok_or_else(|| Error::InvalidParameter("needs a ball automorphism with ψ = C|Dφ|^((n-2)/2)".into()))
    }

    pub fn psi_at(&self, x: &[T]) -> Result<Complex<T>> {
        check_dim(x, self.dim())?;
        match &self.psi {
            Weight::JacobianPower { constant } => {
                let e = (T::of_usize(self.dim()) - T::two()) * T::half();
                Ok(Complex::new(*constant * self.phi.conformal_scale(x)?.powf(e), T::zero()))
            }
            Weight::Constant(c) => Ok(*c),
            Weight::Custom { f, .. } => Ok(f(x)),
        }
    }

    /// `ψ(x)·f(φ(x))`.
    pub fn apply(&self, f: &HarmonicFn<T>, x: &[T]) -> Result<Complex<T>> {
        let y = self.phi.eval(x)?;
        Ok(self.psi_at(x)? * f.eval(&y)?)
    }

    /// Boundary function `ψ(ζ)·f*(φ(ζ))` of `W f`, for symbols preserving the sphere.
    pub fn apply_boundary(&self, f: &HarmonicFn<T>, zeta: &[T]) -> Result<Complex<T>> {
        let y = self.phi.eval(zeta)?;
        let v = f.boundary_value(&y).ok_or_else(|| Error::InvalidParameter("no boundary values".into()))?;
        Ok(self.psi_at(zeta)? * v)
    }

    /// Samples `|φ(x)| ≤ 1` at `count` points of the ball and the sign of `det Dφ` at 100 points of `|x| ≤ 0.9`.
    pub fn standing_assumptions(&self, count: usize, seed: u64) -> Result<StandingAssumptions<T>> {
        let n = self.dim();
        let mut max_image_radius = T::zero();
        for x in uniform_ball_points::<T>(n, count, 1.0, seed) {
            max_image_radius = max_image_radius.max(self.phi.eval(&x)?.norm());
        }
        let interior = uniform_ball_points::<T>(n, 100, 0.9, seed.wrapping_add(1));
        let orientation_constant = jacobian_sign_is_constant(&self.phi, &interior, T::of(DEFAULT_FIRST_STEP))?;
        Ok(StandingAssumptions { max_image_radius, orientation_constant })
    }

    /// `(∫ (W f)(rζ) dσ(ζ), ψ(0) f(φ(0)))`; equal for harmonic `W f` by the mean-value property.
    pub fn mean_value_check(&self, f: &HarmonicFn<T>, r: T, rule: &SphericalRule<T>) -> Result<(Complex<T>, Complex<T>)> {
        let lhs = integrate_par(rule, |z| {
            let x: Vec<T> = z.iter().map(|&c| r * c).collect();
            self.apply(f, &x).unwrap_or_else(|_| Complex::new(T::nan(), T::nan()))
        })?;
        let rhs = self.apply(f, &vec![T::zero(); self.dim()])?;
        Ok((lhs, rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::HarmonicPolynomial;
    use crate::linalg::Vector;

    #[test]
    fn identity_operator_is_identity() {
        let w = WcoOperator::<f64>::identity(3);
        let f = HarmonicFn::extended_poisson(Vector::from_f64(&[0.2, 0.1, -0.3])).unwrap();
        let x = [0.3, -0.2, 0.5];
        assert!((w.apply(&f, &x).unwrap() - f.eval(&x).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn constant_function_maps_to_weight() {
        let m = BallMoebius::from_center(Vector::from_f64(&[0.5, 0.0, 0.0])).unwrap();
        let w = WcoOperator::matched(SymbolMap::Ball(m), 2.0).unwrap();
        let one = HarmonicFn::polynomial(3, HarmonicPolynomial::Constant).unwrap();
        let x = [0.1, 0.4, -0.2];
        assert!((w.apply(&one, &x).unwrap() - w.psi_at(&x).unwrap()).norm() < 1e-15);
        // ψ(0) = C(1 − |a|²)^{1/2}
        assert!((w.psi_at(&[0.0; 3]).unwrap().re - 2.0 * 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mean_value_property_of_weighted_image() {
        let m = BallMoebius::new(
            Matrix::from_givens(3, &[(0, 1, 0.6)]).unwrap(),
            Vector::from_f64(&[0.3, -0.2, 0.4]),
        )
        .unwrap();
        let w = WcoOperator::moebius(m);
        let f = HarmonicFn::extended_poisson(Vector::from_f64(&[0.0, 0.3, 0.2])).unwrap();
        let rule = SphericalRule::product(3, 48).unwrap();
        let (lhs, rhs) = w.mean_value_check(&f, 0.7, &rule).unwrap();
        assert!((lhs - rhs).norm() < 1e-8 * rhs.norm(), "{lhs} vs {rhs}");
    }

    #[test]
    fn standing_assumptions_sampled() {
        let m = BallMoebius::<f64>::from_center(Vector::from_f64(&[0.0, 0.6, 0.0])).unwrap();
        let s = WcoOperator::moebius(m).standing_assumptions(1000, 7).unwrap();
        assert!(s.hold(), "{s:?}");
        let out = SymbolMap::general("scale-2", Matrix::<f64>::identity(3).scaled(2.0));
        let s = WcoOperator::new(out, Weight::Constant(Complex::new(1.0, 0.0))).unwrap().standing_assumptions(1000, 7).unwrap();
        assert!(!s.hold());
    }
}
