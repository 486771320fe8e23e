//! Poisson kernels, Poisson integrals and harmonic Hardy space norms on the unit ball.

mod expr;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

pub use expr::{Atom, BoundaryExpr};

use crate::error::{Error, Result};
use crate::geometry::{bracket_sq, BallMoebius};
use crate::linalg::{check_dim, dist_sq, norm, norm_sq, Vector};
use crate::quadrature::{integrate_par, RuleKind, SphericalRule};
use crate::scalar::Scalar;
use crate::specfun::{check_exponent, conjugate_exponent, phi_p, PhiSpec};

fn real<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn nan<T: Scalar>() -> Complex<T> {
    Complex::new(T::nan(), T::nan())
}

fn inside<T: Scalar>(x: &[T]) -> Result<T> {
    let r2 = norm_sq(x);
    if r2 < T::one() {
        Ok(r2)
    } else {
        Err(Error::OutsideBall(r2.sqrt().to_f64_lossy()))
    }
}

/// `P(x,ζ) = (1 − |x|²)/|x − ζ|^n`.
pub fn poisson_kernel<T: Scalar>(x: &[T], zeta: &[T]) -> Result<T> {
    check_dim(zeta, x.len())?;
    let r2 = inside(x)?;
    Ok((T::one() - r2) / dist_sq(x, zeta).powf(T::of_usize(x.len()) * T::half()))
}

/// `P_y(x) = (1 − |x|²|y|²)/(1 − 2x·y + |x|²|y|²)^{n/2}`; harmonic in `x`, equal to `P(y,·)` on the sphere.
pub fn extended_poisson<T: Scalar>(y: &[T], x: &[T]) -> Result<T> {
    check_dim(x, y.len())?;
    let y2 = inside(y)?;
    let x2 = norm_sq(x);
    if x2 > T::one() + T::of(T::UNIT_TOL) {
        return Err(Error::OutsideBall(x2.sqrt().to_f64_lossy()));
    }
    let den = bracket_sq(x, y).powf(T::of_usize(y.len()) * T::half());
    Ok((T::one() - x2 * y2) / den)
}

type BoundaryFn<T> = dyn Fn(&[T]) -> Complex<T> + Send + Sync;

/// A boundary function `f*: S^{n−1} → C`.
#[derive(Clone)]
pub struct BoundaryData<T> {
    label: String,
    f: Arc<BoundaryFn<T>>,
}

impl<T> fmt::Debug for BoundaryData<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryData").field("label", &self.label).finish()
    }
}

impl<T: Scalar> BoundaryData<T> {
    pub fn from_fn(label: impl Into<String>, f: impl Fn(&[T]) -> Complex<T> + Send + Sync + 'static) -> Self {
        Self { label: label.into(), f: Arc::new(f) }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::from_fn(format!("{c}"), move |_| c)
    }

    /// `ζ ↦ ζ_i` (zero based).
    pub fn coordinate(i: usize) -> Self {
        Self::from_fn(format!("z{}", i + 1), move |z: &[T]| real(z[i]))
    }

    /// `ζ ↦ P(y, ζ)`.
    pub fn poisson(y: Vector<T>) -> Result<Self> {
        inside(&y)?;
        let label = format!("P({})", y.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(","));
        Ok(Self::from_fn(label, move |z: &[T]| {
            poisson_kernel(&y, z).map(real).unwrap_or_else(|_| nan())
        }))
    }

    pub fn from_expr(e: &BoundaryExpr, n: usize) -> Result<Self> {
        e.validate(n)?;
        let terms: Vec<(T, Atom)> = e.terms.iter().map(|(c, a)| (T::of(*c), a.clone())).collect();
        let centers: Vec<Vector<T>> = e.poisson_centers().collect();
        let label = format!("{e:?}");
        Ok(Self::from_fn(label, move |z: &[T]| {
            let mut acc = T::zero();
            let mut k = 0;
            for (c, a) in &terms {
                let v = match a {
                    Atom::One => T::one(),
                    Atom::Coordinate(i) => z[*i],
                    Atom::Poisson(_) => {
                        k += 1;
                        poisson_kernel(&centers[k - 1], z).unwrap_or_else(|_| T::nan())
                    }
                };
                acc += *c * v;
            }
            real(acc)
        }))
    }

    pub fn parse(src: &str, n: usize) -> Result<Self> {
        Self::from_expr(&BoundaryExpr::parse(src)?, n)
    }

    /// `Σ cᵢ fᵢ`.
    pub fn linear_combination(parts: Vec<(Complex<T>, BoundaryData<T>)>) -> Self {
        let label = parts.iter().map(|(c, d)| format!("{c}*{}", d.label)).collect::<Vec<_>>().join(" + ");
        Self::from_fn(label, move |z: &[T]| parts.iter().map(|(c, d)| *c * d.eval(z)).sum())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, zeta: &[T]) -> Complex<T> {
        (self.f)(zeta)
    }
}

/// A finite complex measure `Σ wᵢ δ_{ζᵢ}` on the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure<T> {
    atoms: Vec<(Vector<T>, Complex<T>)>,
}

impl<T: Scalar> DiscreteMeasure<T> {
    pub fn new(atoms: Vec<(Vector<T>, Complex<T>)>) -> Result<Self> {
        let n = atoms.first().map(|(z, _)| z.dim()).ok_or(Error::ZeroMeasure)?;
        for (z, _) in &atoms {
            check_dim(z, n)?;
            let len = z.norm();
            if (len - T::one()).abs() > T::of(1e-12) {
                return Err(Error::InvalidParameter(format!("atom off the sphere (|ζ| = {len})")));
            }
        }
        let m = Self { atoms };
        if !(m.total_variation() > T::zero()) {
            return Err(Error::ZeroMeasure);
        }
        Ok(m)
    }

    pub fn point_mass(zeta: Vector<T>) -> Result<Self> {
        Self::new(vec![(zeta, real(T::one()))])
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].0.dim()
    }

    pub fn atoms(&self) -> &[(Vector<T>, Complex<T>)] {
        &self.atoms
    }

    /// `‖μ‖ = Σ|wᵢ|`.
    pub fn total_variation(&self) -> T {
        self.atoms.iter().map(|(_, w)| w.norm()).sum()
    }

    /// `P[μ](x) = Σ wᵢ P(x, ζᵢ)`.
    pub fn poisson_integral(&self, x: &[T]) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (z, w) in &self.atoms {
            acc += *w * poisson_kernel(x, z)?;
        }
        Ok(acc)
    }
}

/// The harmonic polynomial test families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarmonicPolynomial {
    Constant,
    Coordinate(usize),
    /// `x_i x_j`, `i ≠ j`.
    Product(usize, usize),
    /// `x_i² − x_j²`.
    DifferenceOfSquares(usize, usize),
}

impl HarmonicPolynomial {
    pub fn eval<T: Scalar>(self, x: &[T]) -> T {
        match self {
            HarmonicPolynomial::Constant => T::one(),
            HarmonicPolynomial::Coordinate(i) => x[i],
            HarmonicPolynomial::Product(i, j) => x[i] * x[j],
            HarmonicPolynomial::DifferenceOfSquares(i, j) => x[i] * x[i] - x[j] * x[j],
        }
    }

    fn validate(self, n: usize) -> Result<()> {
        let ok = match self {
            HarmonicPolynomial::Constant => true,
            HarmonicPolynomial::Coordinate(i) => i < n,
            HarmonicPolynomial::Product(i, j) | HarmonicPolynomial::DifferenceOfSquares(i, j) => {
                i < n && j < n && i != j
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{self:?} invalid in dimension {n}")))
        }
    }
}

/// A harmonic function on the ball given by one of the supported representations.
#[derive(Clone, Debug)]
pub enum HarmonicFn<T: Scalar> {
    ExtendedPoisson { center: Vector<T>, scale: Complex<T> },
    PoissonOfBoundary { data: BoundaryData<T>, rule: Arc<SphericalRule<T>> },
    PoissonOfMeasure(DiscreteMeasure<T>),
    Polynomial { dim: usize, kind: HarmonicPolynomial, scale: Complex<T> },
}

impl<T: Scalar> HarmonicFn<T> {
    pub fn extended_poisson(center: Vector<T>) -> Result<Self> {
        inside(&center)?;
        Ok(HarmonicFn::ExtendedPoisson { center, scale: real(T::one()) })
    }

    pub fn polynomial(dim: usize, kind: HarmonicPolynomial) -> Result<Self> {
        kind.validate(dim)?;
        Ok(HarmonicFn::Polynomial { dim, kind, scale: real(T::one()) })
    }

    pub fn poisson_of_boundary(data: BoundaryData<T>, rule: Arc<SphericalRule<T>>) -> Self {
        HarmonicFn::PoissonOfBoundary { data, rule }
    }

    pub fn dim(&self) -> usize {
        match self {
            HarmonicFn::ExtendedPoisson { center, .. } => center.dim(),
            HarmonicFn::PoissonOfBoundary { rule, .. } => rule.dim(),
            HarmonicFn::PoissonOfMeasure(m) => m.dim(),
            HarmonicFn::Polynomial { dim, .. } => *dim,
        }
    }

    /// Multiplies by a constant; variants without a stored scale are rejected.
    pub fn scaled(self, s: Complex<T>) -> Result<Self> {
        match self {
            HarmonicFn::ExtendedPoisson { center, scale } => Ok(HarmonicFn::ExtendedPoisson { center, scale: scale * s }),
            HarmonicFn::Polynomial { dim, kind, scale } => Ok(HarmonicFn::Polynomial { dim, kind, scale: scale * s }),
            HarmonicFn::PoissonOfMeasure(m) => Ok(HarmonicFn::PoissonOfMeasure(DiscreteMeasure {
                atoms: m.atoms.into_iter().map(|(z, w)| (z, w * s)).collect(),
            })),
            HarmonicFn::PoissonOfBoundary { data, rule } => {
                let f = data.clone();
                let label = format!("{s}*{}", data.label());
                Ok(HarmonicFn::PoissonOfBoundary { data: BoundaryData::from_fn(label, move |z| s * f.eval(z)), rule })
            }
        }
    }

    pub fn eval(&self, x: &[T]) -> Result<Complex<T>> {
        check_dim(x, self.dim())?;
        match self {
            HarmonicFn::ExtendedPoisson { center, scale } => Ok(*scale * extended_poisson(center, x)?),
            HarmonicFn::PoissonOfBoundary { data, rule } => {
                poisson_integral(&PoissonSource::Boundary(data), x, Some(rule))
            }
            HarmonicFn::PoissonOfMeasure(m) => m.poisson_integral(x),
            HarmonicFn::Polynomial { kind, scale, .. } => Ok(*scale * kind.eval(x)),
        }
    }

    /// Boundary function `f*` at `ζ`; `None` for measures, which have no pointwise boundary values.
    pub fn boundary_value(&self, zeta: &[T]) -> Option<Complex<T>> {
        match self {
            HarmonicFn::ExtendedPoisson { center, scale } => poisson_kernel(center, zeta).ok().map(|v| *scale * v),
            HarmonicFn::PoissonOfBoundary { data, .. } => Some(data.eval(zeta)),
            HarmonicFn::PoissonOfMeasure(_) => None,
            HarmonicFn::Polynomial { kind, scale, .. } => Some(*scale * kind.eval(zeta)),
        }
    }
}

/// What a Poisson integral is taken of.
#[derive(Clone, Copy, Debug)]
pub enum PoissonSource<'a, T: Scalar> {
    Boundary(&'a BoundaryData<T>),
    Measure(&'a DiscreteMeasure<T>),
}

/// `P[f](x) = ∫ P(x,ζ) f(ζ) dσ(ζ)` by quadrature, or the exact atom sum for a measure.
pub fn poisson_integral<T: Scalar>(
    source: &PoissonSource<'_, T>,
    x: &[T],
    rule: Option<&SphericalRule<T>>,
) -> Result<Complex<T>> {
    inside(x)?;
    match source {
        PoissonSource::Measure(m) => m.poisson_integral(x),
        PoissonSource::Boundary(d) => {
            let rule = rule.ok_or_else(|| Error::InvalidParameter("boundary data needs a rule".into()))?;
            check_dim(x, rule.dim())?;
            integrate_par(rule, |z| match poisson_kernel(x, z) {
                Ok(p) => d.eval(z) * p,
                Err(_) => nan(),
            })
        }
    }
}

/// Radii `0` and `1 − 2^{−k}`, `k = 1…10`, with the last capped at `0.999`.
pub fn default_radius_grid<T: Scalar>() -> Vec<T> {
    let mut r = vec![T::zero()];
    r.extend((1..=10).map(|k| T::of((1.0 - 0.5f64.powi(k)).min(0.999))));
    r
}

/// `{∫ |g(ζ)|^p dσ}^{1/p}`, or the maximum over nodes for `p = ∞`.
pub fn lp_norm_of<T: Scalar, F>(g: F, p: T, rule: &SphericalRule<T>) -> Result<T>
where
    F: Fn(&[T]) -> Complex<T> + Sync,
{
    check_exponent(p)?;
    if p.is_infinite() {
        let mut best = T::zero();
        for (i, z) in rule.nodes().enumerate() {
            let v = g(z).norm();
            if !v.is_finite() {
                return Err(Error::IntegrationFailure(i));
            }
            best = best.max(v);
        }
        return Ok(best);
    }
    let m = integrate_par(rule, |z| real(g(z).norm().powf(p)))?;
    Ok(m.re.powf(T::one() / p))
}

/// `{∫ |f(rζ)|^p dσ(ζ)}^{1/p}`.
pub fn lp_mean<T: Scalar>(f: &HarmonicFn<T>, p: T, r: T, rule: &SphericalRule<T>) -> Result<T> {
    if !(r >= T::zero() && r < T::one()) {
        return Err(Error::OutsideBall(r.to_f64_lossy()));
    }
    lp_norm_of(
        |z| {
            let x: Vec<T> = z.iter().map(|&c| r * c).collect();
            f.eval(&x).unwrap_or_else(|_| nan())
        },
        p,
        rule,
    )
}

/// `max_{r ∈ radii} lp_mean(f, p, r)`: a lower estimate of `‖f‖_{h^p}`.
pub fn hp_norm_estimate<T: Scalar>(f: &HarmonicFn<T>, p: T, radii: &[T], rule: &SphericalRule<T>) -> Result<T> {
    check_exponent(p)?;
    let mut best = T::zero();
    for &r in radii {
        best = best.max(lp_mean(f, p, r, rule)?);
    }
    Ok(best)
}

/// `max_r {∫ |P_y(rζ)|^p dσ}^{1/p}` over `radii` and the boundary sphere `r = 1`, with the rule on
/// each sphere fitted to the kernel.
///
/// `P_y(rζ) = P(ry, ζ)` depends on `ζ·ŷ` only, so a product rule is turned to put its polar axis on
/// `ŷ`. Any other rule is Möbius-adapted at `c ∥ y` chosen so that the peak-to-trough ratio of
/// `|Dφ_c|^{n−1}` matches that of `P(ry,·)^p`: `atanh|c| = atanh(r|y|)·np/(2(n−1))`.
pub fn kernel_norm_estimate<T: Scalar>(y: &[T], p: T, radii: &[T], base: &SphericalRule<T>) -> Result<T> {
    check_exponent(p)?;
    check_dim(y, base.dim())?;
    inside(y)?;
    let rho = norm(y);
    let n = T::of_usize(y.len());
    let stretch = if p.is_finite() { n * p / (T::of(2.0) * (n - T::one())) } else { T::one() };
    if rho > T::zero() && matches!(base.kind(), RuleKind::Product { .. }) {
        let aligned = base.aligned_to(y)?;
        let mut best = T::zero();
        for &r in radii.iter().chain(std::iter::once(&T::one())) {
            let ry: Vec<T> = y.iter().map(|&v| r * v).collect();
            best = best.max(lp_norm_of(|z| poisson_kernel(&ry, z).map(real).unwrap_or_else(|_| nan()), p, &aligned)?);
        }
        return Ok(best);
    }
    let mut best = T::zero();
    for &r in radii.iter().chain(std::iter::once(&T::one())) {
        if !(r >= T::zero() && r <= T::one()) {
            return Err(Error::OutsideBall(r.to_f64_lossy()));
        }
        let ry: Vec<T> = y.iter().map(|&v| r * v).collect();
        let kernel = |z: &[T]| poisson_kernel(&ry, z).map(real).unwrap_or_else(|_| nan());
        let m = if r * rho > T::zero() {
            let t = ((r * rho).atanh() * stretch).tanh().min(T::of(0.9999)) / rho;
            let c: Vec<T> = y.iter().map(|&v| t * v).collect();
            lp_norm_of(kernel, p, &base.moebius_adapted(&c)?)?
        } else {
            lp_norm_of(kernel, p, base)?
        };
        best = best.max(m);
    }
    Ok(best)
}

/// `‖f*‖_{L^p(S)}` from the boundary function, which equals `‖f‖_{h^p}` for `1 < p ≤ ∞`
/// and for `p = 1` whenever `f` is the Poisson integral of an `L¹` function.
pub fn boundary_lp_norm<T: Scalar>(f: &HarmonicFn<T>, p: T, rule: &SphericalRule<T>) -> Result<T> {
    if matches!(f, HarmonicFn::PoissonOfMeasure(_)) {
        return Err(Error::InvalidParameter("measures have no boundary function".into()));
    }
    lp_norm_of(|z| f.boundary_value(z).unwrap_or_else(nan), p, rule)
}

/// `Φ_p(ρ²)` for finite `p`, `(1 + ρ)^n` for `p = ∞`: the `|y|`-dependent factor of `‖P_y‖_{h^p}`.
pub fn poisson_norm_factor<T: Scalar>(p: T, n: usize, rho: T) -> Result<T> {
    if p.is_infinite() {
        return Ok((T::one() + rho).powi(n as i32));
    }
    phi_p(&PhiSpec::new(p, n, rho * rho)?)
}

/// `‖P_y‖_{h^p} = Φ_p(|y|²)(1 − |y|²)^{(1−n)/p′}`; for `p = ∞` this is `(1 + |y|)/(1 − |y|)^{n−1}`.
pub fn hp_norm_py_closed<T: Scalar>(y: &[T], p: T, n: usize) -> Result<T> {
    check_dim(y, n)?;
    check_exponent(p)?;
    let r2 = inside(y)?;
    let rho = r2.sqrt();
    let q = conjugate_exponent(p);
    let exponent = (T::one() - T::of_usize(n)) / q;
    Ok(poisson_norm_factor(p, n, rho)? * (T::one() - r2).powf(exponent))
}

/// `k_y^{(p)} = P_y/‖P_y‖_{h^p}`.
pub fn normalized_kernel<T: Scalar>(y: &[T], p: T, n: usize) -> Result<HarmonicFn<T>> {
    let norm = hp_norm_py_closed(y, p, n)?;
    Ok(HarmonicFn::ExtendedPoisson { center: Vector::from_slice(y), scale: real(T::one() / norm) })
}

/// `|∫ f(φ(ζ)) dσ − ∫ f(ζ)|Dφ⁻¹(ζ)|^{n−1} dσ|` with the same rule on both sides.
pub fn change_of_variables_check<T: Scalar>(
    m: &BallMoebius<T>,
    f: &BoundaryData<T>,
    rule: &SphericalRule<T>,
) -> Result<T> {
    check_dim(m.center(), rule.dim())?;
    let inv = m.inverse();
    let e = T::of_usize(rule.dim() - 1);
    let lhs = integrate_par(rule, |z| m.eval(z).map(|w| f.eval(&w)).unwrap_or_else(|_| nan()))?;
    let rhs = integrate_par(rule, |z| f.eval(z) * inv.jacobian_scalar(z).powf(e))?;
    Ok((lhs - rhs).norm())
}

/// Bilinear pairing `⟨f, g⟩ = ∫ f g dσ` of boundary functions.
pub fn pairing<T: Scalar, F, G>(f: F, g: G, rule: &SphericalRule<T>) -> Result<Complex<T>>
where
    F: Fn(&[T]) -> Complex<T> + Sync,
    G: Fn(&[T]) -> Complex<T> + Sync,
{
    integrate_par(rule, |z| f(z) * g(z))
}

/// `|x|` helper re-exported for callers that only hold slices.
pub fn radius<T: Scalar>(x: &[T]) -> T {
    norm(x)
}
