//! Operator and essential norms: closed forms, the analytic lower-bound curve and quadrature upper estimates.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::BallMoebius;
use crate::hardy::{
    hp_norm_estimate, lp_norm_of, normalized_kernel, poisson_kernel, poisson_norm_factor, DiscreteMeasure,
    HarmonicFn, HarmonicPolynomial,
};
use crate::linalg::{check_dim, Vector};
use crate::quadrature::{integrate_real_par, SphericalRule};
use crate::scalar::Scalar;
use crate::specfun::{check_exponent, conjugate_exponent};

use super::WcoOperator;

/// `|(n−1)/p − (n−2)/2|`.
pub fn norm_exponent<T: Scalar>(p: T, n: usize) -> T {
    let n = T::of_usize(n);
    ((n - T::one()) / p - (n - T::two()) * T::half()).abs()
}

/// `((1+|φ(0)|)/(1−|φ(0)|))^{|(n−1)/p − (n−2)/2|}`, the norm on `h^p` when `ψ = |Dφ|^{(n−2)/2}`.
pub fn norm_formula<T: Scalar>(m: &BallMoebius<T>, p: T) -> Result<T> {
    check_exponent(p)?;
    let r = m.origin_displacement();
    Ok(((T::one() + r) / (T::one() - r)).powf(norm_exponent(p, m.dim())))
}

/// Same closed form as [`norm_formula`], established only for `1 < p < ∞`.
pub fn essential_norm_formula<T: Scalar>(m: &BallMoebius<T>, p: T) -> Result<T> {
    if !(p > T::one() && p.is_finite()) {
        return Err(Error::OutOfScope(p.to_f64_lossy()));
    }
    norm_formula(m, p)
}

/// `‖W*P_y‖/‖P_y‖ = Φ_{p′}(|φ(y)|²)/Φ_{p′}(|y|²)·|Dφ(y)|^{(n−2)/2 − (n−1)/p}`, norms in `h^{p′}`.
pub fn ratio_curve<T: Scalar>(m: &BallMoebius<T>, p: T, y: &[T]) -> Result<T> {
    check_exponent(p)?;
    check_dim(y, m.dim())?;
    let n = m.dim();
    let q = conjugate_exponent(p);
    let fy = m.eval(y)?;
    let rho = Vector::from_slice(y).norm();
    let num = poisson_norm_factor(q, n, fy.norm().min(T::one()))?;
    let den = poisson_norm_factor(q, n, rho)?;
    let nn = T::of_usize(n);
    let e = (nn - T::two()) * T::half() - (nn - T::one()) / p;
    Ok(num / den * m.jacobian_scalar(y).powf(e))
}

/// Maximum of [`ratio_curve`] over `y = ±t b`, `t = t_max·k/steps`, with `b = φ⁻¹(0)/|φ⁻¹(0)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioCurveMax<T> {
    pub value: T,
    /// Signed abscissa `±t` of the maximizer.
    pub at: T,
}

pub fn ratio_curve_max<T: Scalar>(m: &BallMoebius<T>, p: T, t_max: T, steps: usize) -> Result<RatioCurveMax<T>> {
    let n = m.dim();
    let b = m.center().normalized().unwrap_or_else(|| Vector::basis(n, 0));
    let mut best = RatioCurveMax { value: T::neg_infinity(), at: T::zero() };
    let steps = steps.max(1);
    for k in 0..=steps {
        let t = t_max * T::of_usize(k) / T::of_usize(steps);
        for s in [T::one(), -T::one()] {
            let v = ratio_curve(m, p, &b.scaled(s * t))?;
            if v > best.value {
                best = RatioCurveMax { value: v, at: s * t };
            }
        }
    }
    Ok(best)
}

fn origin_bound<T: Scalar>(w: &WcoOperator<T>) -> Result<T> {
    let n = w.dim();
    let zero = vec![T::zero(); n];
    let r = w.phi().eval(&zero)?.norm();
    let psi0 = w.psi_at(&zero)?.norm();
    Ok((T::one() + r) / (T::one() - r).powi(n as i32 - 1) * psi0)
}

/// `(∫ P(φ(rζ),η)|ψ(rζ)| dσ(ζ), (1+|φ(0)|)/(1−|φ(0)|)^{n−1}·|ψ(0)|)`.
pub fn poisson_sup_inequality_check<T: Scalar>(
    w: &WcoOperator<T>,
    rule: &SphericalRule<T>,
    r: T,
    eta: &[T],
) -> Result<(T, T)> {
    check_dim(eta, w.dim())?;
    let lhs = integrate_real_par(rule, |z| {
        let x: Vec<T> = z.iter().map(|&c| r * c).collect();
        let val = || -> Result<T> { Ok(poisson_kernel(&w.phi().eval(&x)?, eta)? * w.psi_at(&x)?.norm()) };
        val().unwrap_or(T::nan())
    })?;
    Ok((lhs, origin_bound(w)?))
}

/// `(max_r ∫|W(P[μ])(rζ)| dσ / ‖μ‖, (1+|φ(0)|)/(1−|φ(0)|)^{n−1}·|ψ(0)|)`.
pub fn upper_bound_h1<T: Scalar>(
    w: &WcoOperator<T>,
    mu: &DiscreteMeasure<T>,
    rule: &SphericalRule<T>,
    radii: &[T],
) -> Result<(T, T)> {
    let tv = mu.total_variation();
    if !(tv > T::zero()) {
        return Err(Error::ZeroMeasure);
    }
    let f = HarmonicFn::PoissonOfMeasure(mu.clone());
    let mut best = T::zero();
    for &r in radii {
        best = best.max(image_mean(w, &f, T::one(), r, rule)?);
    }
    Ok((best / tv, origin_bound(w)?))
}

fn image_mean<T: Scalar>(w: &WcoOperator<T>, f: &HarmonicFn<T>, p: T, r: T, rule: &SphericalRule<T>) -> Result<T> {
    lp_norm_of(
        |z| {
            let x: Vec<T> = z.iter().map(|&c| r * c).collect();
            w.apply(f, &x).unwrap_or_else(|_| Complex::new(T::nan(), T::nan()))
        },
        p,
        rule,
    )
}

fn psi_sup<T: Scalar>(w: &WcoOperator<T>, rule: &SphericalRule<T>) -> Result<T> {
    if let Some((m, c)) = w.matched_ball() {
        let r = m.origin_displacement();
        let e = (T::of_usize(m.dim()) - T::two()) * T::half();
        return Ok(c.abs() * ((T::one() + r) / (T::one() - r)).powf(e));
    }
    let mut best = T::zero();
    for z in rule.nodes() {
        best = best.max(w.psi_at(z)?.norm());
    }
    Ok(best)
}

/// `(max_r ‖(W f)(r·)‖_p / ‖f‖_{h^p}, {(1+|φ(0)|)/(1−|φ(0)|)^{n−1}|ψ(0)|}^{1/p}·‖ψ‖_∞^{1−1/p})`.
pub fn upper_bound_hp<T: Scalar>(
    w: &WcoOperator<T>,
    f: &HarmonicFn<T>,
    p: T,
    rule: &SphericalRule<T>,
    radii: &[T],
) -> Result<(T, T)> {
    if !(p > T::one() && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("upper estimate needs 1 < p < ∞, got {p}")));
    }
    let mut best = T::zero();
    for &r in radii {
        best = best.max(image_mean(w, f, p, r, rule)?);
    }
    let fnorm = hp_norm_estimate(f, p, radii, rule)?;
    let inv = T::one() / p;
    let bound = origin_bound(w)?.powf(inv) * psi_sup(w, rule)?.powf(T::one() - inv);
    Ok((best / fnorm, bound))
}

/// `‖W f‖_p/‖f‖_p` from boundary values, transported to the sphere of `f*`:
/// `‖W f‖_p^p = ∫ |f*(η)|^p |ψ(φ⁻¹η)|^p |Dφ⁻¹(η)|^{n−1} dσ(η)`.
///
/// `rule` should resolve `f*`; the transported weight is smooth.
pub fn boundary_norm_ratio<T: Scalar>(
    w: &WcoOperator<T>,
    f: &HarmonicFn<T>,
    p: T,
    rule: &SphericalRule<T>,
) -> Result<T> {
    check_exponent(p)?;
    let m = w
        .phi()
        .as_ball()
        .ok_or_else(|| Error::InvalidParameter("transport needs a ball automorphism".into()))?;
    let inv = m.inverse();
    let e = T::of_usize(w.dim() - 1);
    let weight = |eta: &[T]| -> Result<T> {
        let pre = inv.eval(eta)?;
        Ok(w.psi_at(&pre)?.norm() * inv.jacobian_scalar(eta).powf(e / p))
    };
    let fstar = |eta: &[T]| f.boundary_value(eta).map(|v| v.norm()).unwrap_or(T::nan());
    if p.is_infinite() {
        let (mut num, mut den) = (T::zero(), T::zero());
        for eta in rule.nodes() {
            let v = fstar(eta);
            num = num.max(v * w.psi_at(&inv.eval(eta)?)?.norm());
            den = den.max(v);
        }
        return Ok(num / den);
    }
    let num = integrate_real_par(rule, |eta| (fstar(eta) * weight(eta).unwrap_or(T::nan())).powf(p))?;
    let den = integrate_real_par(rule, |eta| fstar(eta).powf(p))?;
    Ok((num / den).powf(T::one() / p))
}

/// One test function of the upper sweep and its norm ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepEntry<T> {
    pub label: String,
    pub ratio: T,
}

/// Twenty test functions in dimension `n ≥ 3`: extended Poisson kernels `P_y` with `|y| ∈ {0.5, 0.9, 0.99}`
/// along `b`, `−b`, a direction `u ⊥ b` and `(b+u)/√2`, plus eight harmonic polynomials.
pub fn sweep_test_functions<T: Scalar>(b: &[T]) -> Result<Vec<(String, HarmonicFn<T>)>> {
    let n = b.len();
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let b = Vector::from_slice(b).normalized().unwrap_or_else(|| Vector::basis(n, 0));
    let k = (0..n).min_by(|&i, &j| b[i].abs().partial_cmp(&b[j].abs()).unwrap()).unwrap_or(0);
    let ek = Vector::basis(n, k);
    let u = (&ek - &b.scaled(b[k])).normalized().expect("basis vector not parallel to b");
    let diag = (&b + &u).scaled(T::of(std::f64::consts::FRAC_1_SQRT_2));
    let mut out = Vec::with_capacity(20);
    for (name, dir) in [("+b", b.clone()), ("-b", -&b), ("u", u), ("b+u", diag)] {
        for t in [0.5, 0.9, 0.99] {
            let y = dir.scaled(T::of(t));
            out.push((format!("P_y[{name},{t}]"), HarmonicFn::extended_poisson(y)?));
        }
    }
    let polys = [
        HarmonicPolynomial::Constant,
        HarmonicPolynomial::Coordinate(0),
        HarmonicPolynomial::Coordinate(1),
        HarmonicPolynomial::Coordinate(n - 1),
        HarmonicPolynomial::Product(0, 1),
        HarmonicPolynomial::Product(1, 2),
        HarmonicPolynomial::DifferenceOfSquares(0, 1),
        HarmonicPolynomial::DifferenceOfSquares(1, 2),
    ];
    for kind in polys {
        out.push((format!("{kind:?}"), HarmonicFn::polynomial(n, kind)?));
    }
    Ok(out)
}

/// [`boundary_norm_ratio`] over [`sweep_test_functions`] oriented along `φ(0)`; kernels use `base`
/// adapted at their center.
pub fn upper_sweep<T: Scalar>(w: &WcoOperator<T>, p: T, base: &SphericalRule<T>) -> Result<Vec<SweepEntry<T>>> {
    let (m, _) = w.require_matched_ball()?;
    let fns = sweep_test_functions(&m.image_of_origin())?;
    let mut out = Vec::with_capacity(fns.len());
    for (label, f) in fns {
        let ratio = match &f {
            HarmonicFn::ExtendedPoisson { center, .. } => {
                boundary_norm_ratio(w, &f, p, &base.moebius_adapted(center)?)?
            }
            _ => boundary_norm_ratio(w, &f, p, base)?,
        };
        out.push(SweepEntry { label, ratio });
    }
    Ok(out)
}

/// `sup_{|x| ≤ c} |k_y^{(p)}(x)|` for `y = ρ e_1`, `ρ ∈ radii`.
///
/// `P_y` is positive and harmonic, so the sup sits on `|x| = c`; it is taken over `c·ζ` for the rule
/// nodes together with `c·ŷ`, where it is attained.
pub fn weak_null_probe<T: Scalar>(
    p: T,
    n: usize,
    radii: &[T],
    compact_radius: T,
    rule: &SphericalRule<T>,
) -> Result<Vec<T>> {
    if !(compact_radius >= T::zero() && compact_radius < T::one()) {
        return Err(Error::OutsideBall(compact_radius.to_f64_lossy()));
    }
    check_dim(&vec![T::zero(); rule.dim()], n)?;
    let mut out = Vec::with_capacity(radii.len());
    for &rho in radii {
        let y = Vector::basis(n, 0).scaled(rho);
        let k = normalized_kernel(&y, p, n)?;
        let mut best = k.eval(&Vector::basis(n, 0).scaled(compact_radius))?.norm();
        for z in rule.nodes() {
            let x: Vec<T> = z.iter().map(|&c| compact_radius * c).collect();
            best = best.max(k.eval(&x)?.norm());
        }
        out.push(best);
    }
    Ok(out)
}
