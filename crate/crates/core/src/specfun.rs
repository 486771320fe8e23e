//! Gamma, digamma and the Gauss hypergeometric function on `[0, 1]`.
//!
//! `₂F₁(a, b; c; z)` is summed from its power series for `z ≤ 0.7`. Above
//! that the Euler transformation `₂F₁(a,b;c;z) = (1−z)^{c−a−b} ₂F₁(c−a,c−b;c;z)`
//! is tried first (it turns many of the `Φ_p` parameter sets into terminating
//! polynomials); otherwise the function is continued to `z → 1` with the
//! `1 − z` connection formulas, including the logarithmic ones for integer
//! `c − a − b`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Cap on the number of power-series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;
/// Relative size of the last term at which the series is truncated.
pub const SERIES_REL_TOL: f64 = 1e-16;
/// Above this argument the Euler transformation / `1 − z` continuation is used.
pub const EULER_SWITCH: f64 = 0.7;
/// `c − a − b` closer than this to an integer takes the logarithmic branch.
const INTEGER_SNAP: f64 = 1e-10;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer<T: Scalar>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// `sin(πx)` with the argument reduced to `[−1, 1]` first.
fn sin_pi<T: Scalar>(x: T) -> T {
    let two = T::two();
    let r = x - two * (x / two).round();
    (T::PI() * r).sin()
}

fn lanczos_sum<T: Scalar>(xm1: T) -> T {
    LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(T::of(LANCZOS_COEF[0]), |acc, (i, &c)| acc + T::of(c) / (xm1 + T::of_usize(i + 1)))
}

/// Euler gamma function; errors at the poles `0, −1, −2, …`.
pub fn gamma<T: Scalar>(x: T) -> Result<T> {
    if is_nonpositive_integer(x) || x.is_nan() {
        return Err(Error::GammaPole(x.to_f64_lossy()));
    }
    if x < T::half() {
        return Ok(T::PI() / (sin_pi(x) * gamma(T::one() - x)?));
    }
    let xm1 = x - T::one();
    let t = xm1 + T::of(LANCZOS_G) + T::half();
    // t^(x − 1/2) split in two halves so that the power does not overflow before e^{−t} applies.
    let half_pow = t.powf((xm1 + T::half()) * T::half());
    Ok((T::two() * T::PI()).sqrt() * half_pow * (half_pow * (-t).exp()) * lanczos_sum(xm1))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Scalar>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::InvalidParameter(format!("ln_gamma needs x > 0, got {x}")));
    }
    if x < T::half() {
        return Ok((T::PI() / sin_pi(x)).ln() - ln_gamma(T::one() - x)?);
    }
    let xm1 = x - T::one();
    let t = xm1 + T::of(LANCZOS_G) + T::half();
    Ok(T::half() * (T::two() * T::PI()).ln() + (xm1 + T::half()) * t.ln() - t + lanczos_sum(xm1).ln())
}

/// `1/Γ(x)`, which vanishes at the poles of `Γ`.
pub fn recip_gamma<T: Scalar>(x: T) -> T {
    gamma(x).map(|g| T::one() / g).unwrap_or_else(|_| T::zero())
}

/// Digamma `ψ = Γ'/Γ`.
pub fn digamma<T: Scalar>(x: T) -> Result<T> {
    if is_nonpositive_integer(x) || x.is_nan() {
        return Err(Error::GammaPole(x.to_f64_lossy()));
    }
    if x < T::half() {
        // ψ(x) = ψ(1 − x) − π cot(πx)
        let cot = (T::PI() * (x - x.round())).cos() / sin_pi(x);
        return Ok(digamma(T::one() - x)? - T::PI() * cot);
    }
    let mut acc = T::zero();
    let mut y = x;
    while y < T::of(10.0) {
        acc -= T::one() / y;
        y += T::one();
    }
    let inv2 = T::one() / (y * y);
    // Asymptotic expansion with Bernoulli numbers B_2 … B_14.
    let coeffs = [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0];
    let mut tail = T::zero();
    let mut pow = inv2;
    for &c in &coeffs {
        tail += T::of(c) * pow;
        pow *= inv2;
    }
    Ok(acc + y.ln() - T::half() / y - tail)
}

/// Parameters of `₂F₁(a, b; c; z)` restricted to `z ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyp2F1Params<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub z: T,
}

impl<T: Scalar> Hyp2F1Params<T> {
    pub fn new(a: T, b: T, c: T, z: T) -> Result<Self> {
        let p = Self { a, b, c, z };
        p.validate()?;
        Ok(p)
    }

    fn not_summable(&self) -> Error {
        Error::NotSummable {
            a: self.a.to_f64_lossy(),
            b: self.b.to_f64_lossy(),
            c: self.c.to_f64_lossy(),
            z: self.z.to_f64_lossy(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite hypergeometric parameter".into()));
        }
        if !(self.z >= T::zero() && self.z <= T::one()) {
            return Err(Error::InvalidParameter(format!("z = {} outside [0, 1]", self.z)));
        }
        if is_nonpositive_integer(self.c) {
            return Err(Error::InvalidParameter(format!("c = {} is a non-positive integer", self.c)));
        }
        if self.z == T::one()
            && terminating_degree(self.a).or(terminating_degree(self.b)).is_none()
            && !(self.c - self.a - self.b > T::zero())
        {
            return Err(self.not_summable());
        }
        Ok(())
    }
}

/// Degree at which the series truncates if `a` is a non-positive integer.
fn terminating_degree<T: Scalar>(a: T) -> Option<usize> {
    let r = a.round();
    let tol = T::of(1e-12) * T::one().max(a.abs());
    if r <= T::zero() && (a - r).abs() <= tol {
        (-r).to_usize()
    } else {
        None
    }
}

fn polynomial<T: Scalar>(a: T, b: T, c: T, z: T, degree: usize) -> T {
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..degree {
        let kk = T::of_usize(k);
        term = term * (a + kk) * (b + kk) / ((c + kk) * (kk + T::one())) * z;
        sum += term;
    }
    sum
}

/// Raw power series `Σ (a)_k (b)_k / ((c)_k k!) z^k` for `0 ≤ z < 1`.
///
/// Stops once two consecutive terms fall below `1e-16·|partial sum|`, or errors
/// after [`MAX_SERIES_TERMS`] terms.
pub fn hyp2f1_series<T: Scalar>(a: T, b: T, c: T, z: T) -> Result<T> {
    if is_nonpositive_integer(c) {
        return Err(Error::InvalidParameter(format!("c = {c} is a non-positive integer")));
    }
    if let Some(d) = terminating_degree(a).or(terminating_degree(b)) {
        let d = match (terminating_degree(a), terminating_degree(b)) {
            (Some(x), Some(y)) => x.min(y),
            _ => d,
        };
        return Ok(polynomial(a, b, c, z, d));
    }
    let tol = T::of(SERIES_REL_TOL);
    let mut term = T::one();
    let mut sum = T::one();
    let mut quiet = 0;
    for k in 0..MAX_SERIES_TERMS {
        let kk = T::of_usize(k);
        term = term * (a + kk) * (b + kk) / ((c + kk) * (kk + T::one())) * z;
        sum += term;
        if term.abs() <= tol * sum.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NotConverged(MAX_SERIES_TERMS))
}

/// Gauss summation `₂F₁(a,b;c;1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b))`, valid for `c − a − b > 0`.
pub fn gauss_at_one<T: Scalar>(a: T, b: T, c: T) -> Result<T> {
    let s = c - a - b;
    if !(s > T::zero()) {
        return Err(Error::NotSummable { a: a.to_f64_lossy(), b: b.to_f64_lossy(), c: c.to_f64_lossy(), z: 1.0 });
    }
    if is_nonpositive_integer(c) {
        return Err(Error::GammaPole(c.to_f64_lossy()));
    }
    let (ca, cb) = (c - a, c - b);
    if c > T::zero() && ca > T::zero() && cb > T::zero() {
        return Ok((ln_gamma(c)? + ln_gamma(s)? - ln_gamma(ca)? - ln_gamma(cb)?).exp());
    }
    Ok(gamma(c)? * gamma(s)? * recip_gamma(ca) * recip_gamma(cb))
}

/// `₂F₁(a, b; c; z)` for `z ∈ [0, 1]`.
pub fn hyp2f1<T: Scalar>(p: &Hyp2F1Params<T>) -> Result<T> {
    p.validate()?;
    let Hyp2F1Params { a, b, c, z } = *p;
    if z == T::zero() {
        return Ok(T::one());
    }
    match (terminating_degree(a), terminating_degree(b)) {
        (Some(x), Some(y)) => return Ok(polynomial(a, b, c, z, x.min(y))),
        (Some(d), None) | (None, Some(d)) => return Ok(polynomial(a, b, c, z, d)),
        _ => {}
    }
    if z == T::one() {
        return gauss_at_one(a, b, c);
    }
    if z <= T::of(EULER_SWITCH) {
        return hyp2f1_series(a, b, c, z);
    }
    near_one(a, b, c, z)
}

fn near_one<T: Scalar>(a: T, b: T, c: T, z: T) -> Result<T> {
    let s = c - a - b;
    let w = T::one() - z;
    let (ca, cb) = (c - a, c - b);
    match (terminating_degree(ca), terminating_degree(cb)) {
        (Some(x), Some(y)) => return Ok(w.powf(s) * polynomial(ca, cb, c, z, x.min(y))),
        (Some(d), None) | (None, Some(d)) => return Ok(w.powf(s) * polynomial(ca, cb, c, z, d)),
        _ => {}
    }
    let m = s.round();
    if (s - m).abs() < T::of(INTEGER_SNAP) {
        let mi = m.abs().to_usize().expect("integer gap");
        return if m >= T::zero() {
            integer_gap(a, b, mi, w)
        } else {
            Ok(w.powf(s) * integer_gap(ca, cb, mi, w)?)
        };
    }
    // Non-integer gap.
    let g_c = gamma(c)?;
    let first = g_c * gamma(s)? * recip_gamma(ca) * recip_gamma(cb);
    let second = g_c * gamma(-s)? * recip_gamma(a) * recip_gamma(b);
    let mut value = T::zero();
    if first != T::zero() {
        value += first * hyp2f1_series(a, b, T::one() - s, w)?;
    }
    if second != T::zero() {
        value += second * w.powf(s) * hyp2f1_series(ca, cb, T::one() + s, w)?;
    }
    Ok(value)
}

/// `₂F₁(a, b; a+b+m; 1−w)` for integer `m ≥ 0` and small `w > 0` (logarithmic case).
fn integer_gap<T: Scalar>(a: T, b: T, m: usize, w: T) -> Result<T> {
    let mm = T::of_usize(m);
    let c = a + b + mm;
    let ln_w = w.ln();
    let tol = T::of(SERIES_REL_TOL);

    let mut finite = T::zero();
    if m > 0 {
        let prefactor = gamma(mm)? * gamma(c)? * recip_gamma(a + mm) * recip_gamma(b + mm);
        let mut term = T::one();
        let mut sum = T::one();
        for k in 0..m - 1 {
            let kk = T::of_usize(k);
            term = term * (a + kk) * (b + kk) / ((kk + T::one()) * (T::one() - mm + kk)) * w;
            sum += term;
        }
        finite = prefactor * sum;
    }

    let prefactor = gamma(c)? * recip_gamma(a) * recip_gamma(b);
    if prefactor == T::zero() {
        return Ok(finite);
    }
    // k-th term: (a+m)_k (b+m)_k / (k! (k+m)!) w^k [ln w − ψ(k+1) − ψ(k+m+1) + ψ(a+k+m) + ψ(b+k+m)].
    let mut coef = T::one() / gamma(mm + T::one())?;
    let mut psi_k1 = digamma(T::one())?;
    let mut psi_km1 = digamma(mm + T::one())?;
    let mut psi_a = digamma(a + mm)?;
    let mut psi_b = digamma(b + mm)?;
    let mut sum = T::zero();
    let mut quiet = 0;
    let mut converged = false;
    for k in 0..MAX_SERIES_TERMS {
        let kk = T::of_usize(k);
        let term = coef * (ln_w - psi_k1 - psi_km1 + psi_a + psi_b);
        sum += term;
        if term.abs() <= tol * sum.abs() {
            quiet += 1;
            if quiet >= 2 {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
        coef = coef * (a + mm + kk) * (b + mm + kk) / ((kk + T::one()) * (kk + mm + T::one())) * w;
        psi_k1 += T::one() / (kk + T::one());
        psi_km1 += T::one() / (kk + mm + T::one());
        psi_a += T::one() / (a + mm + kk);
        psi_b += T::one() / (b + mm + kk);
    }
    if !converged {
        return Err(Error::NotConverged(MAX_SERIES_TERMS));
    }
    // (z − 1)^m = (−w)^m
    let sign = if m % 2 == 0 { T::one() } else { -T::one() };
    Ok(finite - sign * w.powi(m as i32) * prefactor * sum)
}

/// `p′ = p/(p−1)`, with `1′ = ∞` and `∞′ = 1`.
pub fn conjugate_exponent<T: Scalar>(p: T) -> T {
    if p.is_infinite() {
        T::one()
    } else if p == T::one() {
        T::infinity()
    } else {
        p / (p - T::one())
    }
}

/// Arguments of `Φ_p(r)`: exponent `p ∈ [1, ∞]`, dimension `n ≥ 2`, `r ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiSpec<T> {
    pub p: T,
    pub n: usize,
    pub r: T,
}

impl<T: Scalar> PhiSpec<T> {
    pub fn new(p: T, n: usize, r: T) -> Result<Self> {
        check_exponent(p)?;
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(r >= T::zero() && r <= T::one()) {
            return Err(Error::InvalidParameter(format!("r = {r} outside [0, 1]")));
        }
        Ok(Self { p, n, r })
    }
}

pub(crate) fn check_exponent<T: Scalar>(p: T) -> Result<()> {
    if p >= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("exponent p = {p} must satisfy p ≥ 1")))
    }
}

/// Hypergeometric parameters `(n(1−p)/2, (2n−2−np)/2; n/2)` behind `Φ_p`.
pub fn phi_p_parameters<T: Scalar>(p: T, n: usize) -> (T, T, T) {
    let nn = T::of_usize(n);
    let two = T::two();
    (nn * (T::one() - p) / two, (two * nn - two - nn * p) / two, nn / two)
}

/// `Φ_p(r) = ₂F₁(n(1−p)/2, (2n−2−np)/2; n/2; r)^{1/p}`, and `(1+r)^n` for `p = ∞`.
pub fn phi_p<T: Scalar>(s: &PhiSpec<T>) -> Result<T> {
    let PhiSpec { p, n, r } = PhiSpec::new(s.p, s.n, s.r)?;
    if p.is_infinite() {
        return Ok((T::one() + r).powi(n as i32));
    }
    let (a, b, c) = phi_p_parameters(p, n);
    let f = hyp2f1(&Hyp2F1Params::new(a, b, c, r)?)?;
    if !(f > T::zero()) {
        return Err(Error::InvalidParameter(format!("Φ_p base {f} not positive")));
    }
    Ok(f.powf(T::one() / p))
}

/// `lim_{r→1⁻} Φ_p(r)`: `{Γ(n/2)Γ(np+1−n)/(Γ(np/2)Γ((np+2−n)/2))}^{1/p}`, or `2^n` for `p = ∞`.
pub fn phi_p_limit<T: Scalar>(p: T, n: usize) -> Result<T> {
    check_exponent(p)?;
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if p.is_infinite() {
        return Ok(T::two().powi(n as i32));
    }
    let nn = T::of_usize(n);
    let two = T::two();
    let log = ln_gamma(nn / two)? + ln_gamma(nn * p + T::one() - nn)?
        - ln_gamma(nn * p / two)?
        - ln_gamma((nn * p + two - nn) / two)?;
    Ok((log / p).exp())
}
