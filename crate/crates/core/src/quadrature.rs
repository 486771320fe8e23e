//! Quadrature on `S^{n-1}` against the normalized surface measure `σ` (`σ(S) = 1`).
//!
//! Two families are provided:
//!
//! * seeded Monte Carlo (`ChaCha8` stream, isotropic Gaussians normalized onto the
//!   sphere), any dimension;
//! * deterministic product rules for `n ∈ {2,…,5}` built recursively from
//!   `ζ = (t, √(1−t²) η)`, `η ∈ S^{n−2}`, where `t = ζ₁` carries the weight
//!   `(1−t²)^{(n−3)/2}`: Gauss–Legendre for `n = 3`, Gauss–Chebyshev of the second
//!   kind for `n = 4`, and Gauss–Legendre times `1 − t²` for `n = 5`. The circle
//!   `S¹` uses `2·order` equispaced angles.
//!
//! Summation is done over fixed chunks whose partial sums are added in order, so
//! [`integrate`] and [`integrate_par`] return bit-identical results.

use std::fmt::Write as _;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{eval_phi_a, BallMoebius};
use crate::linalg::{norm_sq, Matrix, Vector};
use crate::scalar::Scalar;
use crate::specfun::{hyp2f1, Hyp2F1Params};

const CHUNK: usize = 4096;

/// How a rule was produced.
#[derive(Clone, Debug, PartialEq)]
pub enum RuleKind {
    MonteCarlo { seed: u64, count: usize },
    Product { order: usize },
    /// Any rule pushed forward by a rotation or a Möbius change of variables.
    Transformed(Box<RuleKind>),
    /// Read back from text; the producing kind is kept as a label.
    Loaded(String),
}

impl RuleKind {
    fn label(&self) -> String {
        match self {
            RuleKind::MonteCarlo { seed, count } => format!("monte_carlo(seed={seed},count={count})"),
            RuleKind::Product { order } => format!("product(order={order})"),
            RuleKind::Transformed(inner) => format!("transformed({})", inner.label()),
            RuleKind::Loaded(s) => s.clone(),
        }
    }
}

/// Nodes on `S^{n-1}` (stored flat, `n` coordinates each) with positive weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalRule<T> {
    dim: usize,
    nodes: Vec<T>,
    weights: Vec<T>,
    kind: RuleKind,
}

fn gaussian_direction<T: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    loop {
        let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm_sq(&g).sqrt();
        if r > 1e-150 {
            return g.iter().map(|&c| T::of(c / r)).collect();
        }
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on `P_m`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        x[m - 1 - i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// Nodes in `t = ζ₁` and weights for the density `(1−t²)^{(n−3)/2}` on `[−1,1]`, normalized to sum 1.
fn polar_rule(n: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (t, mut w) = match n {
        3 => gauss_legendre(order),
        4 => {
            let h = std::f64::consts::PI / (order as f64 + 1.0);
            let t = (1..=order).map(|k| (k as f64 * h).cos()).collect();
            let w = (1..=order).map(|k| (k as f64 * h).sin().powi(2)).collect();
            (t, w)
        }
        5 => {
            let (t, w) = gauss_legendre(order);
            let w = t.iter().zip(&w).map(|(ti, wi)| wi * (1.0 - ti * ti)).collect();
            (t, w)
        }
        _ => unreachable!("polar rule only for n in 3..=5"),
    };
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|wi| *wi /= total);
    (t, w)
}

fn product_nodes(n: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 2 {
        let m = 2 * order;
        let mut nodes = Vec::with_capacity(2 * m);
        for k in 0..m {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / m as f64;
            nodes.push(th.cos());
            nodes.push(th.sin());
        }
        return (nodes, vec![1.0 / m as f64; m]);
    }
    let (inner_nodes, inner_w) = product_nodes(n - 1, order);
    let (t, wt) = polar_rule(n, order);
    let mut nodes = Vec::with_capacity(n * t.len() * inner_w.len());
    let mut weights = Vec::with_capacity(t.len() * inner_w.len());
    for (&ti, &wi) in t.iter().zip(&wt) {
        let s = (1.0 - ti * ti).max(0.0).sqrt();
        for (eta, &we) in inner_nodes.chunks_exact(n - 1).zip(&inner_w) {
            nodes.push(ti);
            nodes.extend(eta.iter().map(|&e| s * e));
            weights.push(wi * we);
        }
    }
    (nodes, weights)
}

impl<T: Scalar> SphericalRule<T> {
    /// `count` i.i.d. uniform nodes with weights `1/count`.
    pub fn monte_carlo(n: usize, count: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if count == 0 {
            return Err(Error::InvalidParameter("Monte Carlo rule needs count ≥ 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nodes = Vec::with_capacity(n * count);
        for _ in 0..count {
            nodes.extend(gaussian_direction::<T>(&mut rng, n));
        }
        let w = T::one() / T::of_usize(count);
        Ok(Self { dim: n, nodes, weights: vec![w; count], kind: RuleKind::MonteCarlo { seed, count } })
    }

    /// Deterministic tensor rule; exact for spherical polynomials of degree `< 2·order − 2`.
    pub fn product(n: usize, order: usize) -> Result<Self> {
        if !(2..=5).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if order < 2 {
            return Err(Error::InvalidParameter(format!("product rule order must be ≥ 2, got {order}")));
        }
        let (nodes, weights) = product_nodes(n, order);
        let total = weights.iter().fold(Compensated::new(), |mut acc, &w| {
            acc.add(w);
            acc
        });
        let total = total.value();
        Ok(Self {
            dim: n,
            nodes: nodes.into_iter().map(T::of).collect(),
            weights: weights.into_iter().map(|w| T::of(w / total)).collect(),
            kind: RuleKind::Product { order },
        })
    }

    /// Builds a rule from explicit data. Nodes must be unit vectors to within `1e-12`;
    /// weights are rescaled to sum to one when they do not already.
    pub fn from_parts(dim: usize, nodes: Vec<Vector<T>>, weights: Vec<T>, kind: RuleKind) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidParameter("rule needs matching, nonempty nodes and weights".into()));
        }
        if weights.iter().any(|&w| !(w > T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidParameter("rule weights must be positive".into()));
        }
        let total = weight_total(&weights);
        let mut flat = Vec::with_capacity(dim * nodes.len());
        for v in &nodes {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
            }
            let len = v.norm();
            if (len - T::one()).abs() > T::of(1e-12) {
                return Err(Error::InvalidParameter(format!("rule node has length {len}")));
            }
            flat.extend_from_slice(v);
        }
        let weights = if (total - T::one()).abs() > T::of(1e-15) {
            weights.into_iter().map(|w| w / total).collect()
        } else {
            weights
        };
        Ok(Self { dim, nodes: flat, weights, kind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn kind(&self) -> &RuleKind {
        &self.kind
    }

    pub fn node(&self, i: usize) -> &[T] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[T]> {
        self.nodes.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Nodes `R ζ_i`, same weights.
    pub fn rotated(&self, r: &Matrix<T>) -> Result<Self> {
        if r.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: r.dim() });
        }
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for z in self.nodes() {
            nodes.extend_from_slice(&r.mul_vec(z));
        }
        Ok(Self { dim: self.dim, nodes, weights: self.weights.clone(), kind: RuleKind::Transformed(Box::new(self.kind.clone())) })
    }

    /// Rotates the pole axis `e₁` of the rule onto `direction`.
    pub fn aligned_to(&self, direction: &[T]) -> Result<Self> {
        self.rotated(&Matrix::reflector_from_e1(direction)?)
    }

    /// Change of variables by `φ_c`: nodes `φ_c(ζ_i)` and weights `w_i |Dφ_c(ζ_i)|^{n−1}`.
    ///
    /// Nodes gather near `c/|c|`, where kernels peaked near `c` live. The weights are not
    /// renormalized, so their sum carries the base rule's error for `|Dφ_c|^{n−1}`.
    pub fn moebius_adapted(&self, center: &[T]) -> Result<Self> {
        let m = BallMoebius::from_center(Vector::from_slice(center))?;
        let e = T::of_usize(self.dim - 1);
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut weights = Vec::with_capacity(self.len());
        for (z, &w) in self.nodes().zip(&self.weights) {
            let img = eval_phi_a(center, z)?;
            let u = img.normalized().ok_or(Error::Pole)?;
            nodes.extend_from_slice(&u);
            weights.push(w * m.jacobian_scalar(z).powf(e));
        }
        Ok(Self { dim: self.dim, nodes, weights, kind: RuleKind::Transformed(Box::new(self.kind.clone())) })
    }

    /// `|Σ w_i − 1|`.
    pub fn weight_defect(&self) -> T {
        (weight_total(&self.weights) - T::one()).abs()
    }

    /// `max_i ||ζ_i| − 1|`.
    pub fn node_defect(&self) -> T {
        self.nodes().map(|z| (norm_sq(z).sqrt() - T::one()).abs()).fold(T::zero(), T::max)
    }

    /// Columnar text: a `#` header, then one node per line followed by its weight.
    pub fn to_text(&self) -> String {
        let mut out = format!("# spherical_rule n={} count={} kind={}\n", self.dim, self.len(), self.kind.label());
        for (z, w) in self.nodes().zip(&self.weights) {
            for c in z {
                let _ = write!(out, "{c:e} ");
            }
            let _ = writeln!(out, "{w:e}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut label = String::from("loaded");
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                for field in header.split_whitespace() {
                    if let Some(v) = field.strip_prefix("n=") {
                        dim = Some(v.parse::<usize>().map_err(|e| Error::Parse(format!("header n: {e}")))?);
                    } else if let Some(v) = field.strip_prefix("kind=") {
                        label = v.to_string();
                    }
                }
                continue;
            }
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1))))
                .collect::<Result<_>>()?;
            let n = *dim.get_or_insert(vals.len().saturating_sub(1));
            if vals.len() != n + 1 {
                return Err(Error::Parse(format!("line {}: expected {} columns, got {}", lineno + 1, n + 1, vals.len())));
            }
            nodes.push(Vector::from_vec(vals[..n].iter().map(|&v| T::of(v)).collect()));
            weights.push(T::of(vals[n]));
        }
        let dim = dim.ok_or_else(|| Error::Parse("empty rule".into()))?;
        Self::from_parts(dim, nodes, weights, RuleKind::Loaded(label))
    }

    pub fn cast<U: Scalar>(&self) -> SphericalRule<U> {
        SphericalRule {
            dim: self.dim,
            nodes: self.nodes.iter().map(|&c| U::of(c.to_f64_lossy())).collect(),
            weights: self.weights.iter().map(|&c| U::of(c.to_f64_lossy())).collect(),
            kind: self.kind.clone(),
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy)]
struct Compensated<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> Compensated<T> {
    fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }

    fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> T {
        self.sum + self.carry
    }
}

fn chunk_sum<T: Scalar, F>(rule: &SphericalRule<T>, f: &F, start: usize, end: usize) -> Result<Complex<T>>
where
    F: Fn(&[T]) -> Complex<T>,
{
    let (mut re, mut im) = (Compensated::new(), Compensated::new());
    for i in start..end {
        let v = f(rule.node(i));
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::IntegrationFailure(i));
        }
        re.add(v.re * rule.weights[i]);
        im.add(v.im * rule.weights[i]);
    }
    Ok(Complex::new(re.value(), im.value()))
}

fn combine<T: Scalar>(partials: impl IntoIterator<Item = Result<Complex<T>>>) -> Result<Complex<T>> {
    let (mut re, mut im) = (Compensated::new(), Compensated::new());
    for p in partials {
        let p = p?;
        re.add(p.re);
        im.add(p.im);
    }
    Ok(Complex::new(re.value(), im.value()))
}

fn weight_total<T: Scalar>(w: &[T]) -> T {
    w.iter()
        .fold(Compensated::new(), |mut acc, &v| {
            acc.add(v);
            acc
        })
        .value()
}

fn chunk_bounds(len: usize) -> Vec<(usize, usize)> {
    (0..len.div_ceil(CHUNK)).map(|k| (k * CHUNK, ((k + 1) * CHUNK).min(len))).collect()
}

/// `Σ w_i f(ζ_i)`; a non-finite value at a node is an [`Error::IntegrationFailure`].
pub fn integrate<T: Scalar, F>(rule: &SphericalRule<T>, f: F) -> Result<Complex<T>>
where
    F: Fn(&[T]) -> Complex<T>,
{
    combine(chunk_bounds(rule.len()).into_iter().map(|(s, e)| chunk_sum(rule, &f, s, e)))
}

/// Same as [`integrate`], with chunks evaluated on the rayon pool.
pub fn integrate_par<T: Scalar, F>(rule: &SphericalRule<T>, f: F) -> Result<Complex<T>>
where
    F: Fn(&[T]) -> Complex<T> + Sync,
{
    let partials: Vec<Result<Complex<T>>> =
        chunk_bounds(rule.len()).into_par_iter().map(|(s, e)| chunk_sum(rule, &f, s, e)).collect();
    combine(partials)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<T: Scalar, F>(rule: &SphericalRule<T>, f: F) -> Result<T>
where
    F: Fn(&[T]) -> T,
{
    integrate(rule, |z| Complex::new(f(z), T::zero())).map(|c| c.re)
}

/// Real-valued convenience wrapper around [`integrate_par`].
pub fn integrate_real_par<T: Scalar, F>(rule: &SphericalRule<T>, f: F) -> Result<T>
where
    F: Fn(&[T]) -> T + Sync,
{
    integrate_par(rule, |z| Complex::new(f(z), T::zero())).map(|c| c.re)
}

/// `∫ |x−ζ|^{−2s} dσ(ζ) = ₂F₁(s, s − n/2 + 1; n/2; |x|²)`.
pub fn riesz_closed_form<T: Scalar>(n: usize, s: T, radius: T) -> Result<T> {
    let half_n = T::of_usize(n) * T::half();
    hyp2f1(&Hyp2F1Params::new(s, s - half_n + T::one(), half_n, radius * radius)?)
}

/// `|quadrature − closed form|` for the Riesz integral with `x = |x| e₁`.
pub fn riesz_integral_check<T: Scalar>(n: usize, s: T, radius: T, rule: &SphericalRule<T>) -> Result<T> {
    if rule.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: rule.dim() });
    }
    if !(radius >= T::zero() && radius < T::one()) {
        return Err(Error::OutsideBall(radius.to_f64_lossy()));
    }
    let closed = riesz_closed_form(n, s, radius)?;
    let quad = integrate_real(rule, |z| {
        let d2 = (T::one() - T::two() * radius * z[0] + radius * radius).max(T::zero());
        d2.powf(-s)
    })?;
    Ok((quad - closed).abs())
}

/// `count` seeded points uniformly distributed in the ball of radius `radius_max`.
pub fn uniform_ball_points<T: Scalar>(n: usize, count: usize, radius_max: f64, seed: u64) -> Vec<Vector<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dir: Vec<f64> = gaussian_direction(&mut rng, n);
            let u: f64 = rng.random();
            let r = radius_max * u.powf(1.0 / n as f64);
            Vector::from_vec(dir.iter().map(|&c| T::of(r * c)).collect())
        })
        .collect()
}

/// `count` seeded points uniformly distributed on the unit sphere.
pub fn uniform_sphere_points<T: Scalar>(n: usize, count: usize, seed: u64) -> Vec<Vector<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Vector::from_vec(gaussian_direction(&mut rng, n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one<T: Scalar>(_: &[T]) -> T {
        T::one()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn constant_and_odd_moments() {
        for n in 2..=5 {
            let rule = SphericalRule::<f64>::product(n, 8).unwrap();
            assert!((integrate_real(&rule, one).unwrap() - 1.0).abs() < 1e-14);
            assert!(integrate_real(&rule, |z| z[0] * z[1]).unwrap().abs() < 1e-14);
            assert!(rule.weight_defect() < 1e-12);
            assert!(rule.node_defect() < 1e-14);
        }
    }

    #[test]
    fn second_moments_are_one_over_n() {
        for n in 2..=5 {
            let rule = SphericalRule::<f64>::product(n, 6).unwrap();
            for i in 0..n {
                let m = integrate_real(&rule, |z| z[i] * z[i]).unwrap();
                assert!((m - 1.0 / n as f64).abs() < 1e-13, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn fourth_moment_on_s2() {
        // ∫ζ₁⁴ dσ = 3/(n(n+2)) and ∫ζ₁²ζ₂² dσ = 1/(n(n+2)).
        for n in 2..=5 {
            let rule = SphericalRule::<f64>::product(n, 6).unwrap();
            let nn = (n * (n + 2)) as f64;
            let m4 = integrate_real(&rule, |z| z[1].powi(4)).unwrap();
            let m22 = integrate_real(&rule, |z| z[0] * z[0] * z[1] * z[1]).unwrap();
            assert!((m4 - 3.0 / nn).abs() < 1e-13);
            assert!((m22 - 1.0 / nn).abs() < 1e-13);
        }
    }

    #[test]
    fn monte_carlo_basic_properties() {
        let rule = SphericalRule::<f64>::monte_carlo(3, 20_000, 42).unwrap();
        assert_eq!(integrate_real(&rule, one).unwrap(), 1.0);
        assert!(integrate_real(&rule, |z| z[0]).unwrap().abs() < 3.0 / (20_000f64).sqrt());
        let m2 = integrate_real(&rule, |z| z[0] * z[0]).unwrap();
        // Var(ζ₁²) = 1/5 − 1/9 for n = 3.
        let sd = ((0.2 - 1.0 / 9.0) / 20_000.0f64).sqrt();
        assert!((m2 - 1.0 / 3.0).abs() < 4.0 * sd);
        assert!(rule.node_defect() < 1e-14);
        assert_eq!(rule, SphericalRule::monte_carlo(3, 20_000, 42).unwrap());
        assert!(SphericalRule::<f64>::monte_carlo(3, 0, 1).is_err());
    }

    #[test]
    fn unsupported_product_dimension() {
        assert!(matches!(SphericalRule::<f64>::product(6, 4), Err(Error::UnsupportedDimension(6))));
        assert!(SphericalRule::<f64>::product(3, 1).is_err());
    }

    #[test]
    fn nan_propagates_as_failure() {
        let rule = SphericalRule::<f64>::product(3, 4).unwrap();
        assert!(matches!(integrate_real(&rule, |z| if z[0] > 0.5 { f64::NAN } else { 1.0 }), Err(Error::IntegrationFailure(_))));
    }

    #[test]
    fn riesz_examples() {
        let rule = SphericalRule::<f64>::product(3, 32).unwrap();
        assert!(riesz_integral_check(3, 1.0, 0.0, &rule).unwrap() < 1e-14);
        let closed = riesz_closed_form(3, 1.0, 0.5).unwrap();
        assert!((closed - 3f64.ln()).abs() < 1e-14);
        assert!(riesz_integral_check(3, 1.0, 0.5, &rule).unwrap() < 1e-10);
    }

    #[test]
    fn poisson_kernel_has_unit_mass() {
        let rule = SphericalRule::<f64>::product(4, 24).unwrap();
        let x = [0.3, -0.2, 0.1, 0.25];
        let mass = integrate_real(&rule, |z| {
            let d2: f64 = z.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum();
            (1.0 - norm_sq(&x)) / d2.powi(2)
        })
        .unwrap();
        assert!((mass - 1.0).abs() < 1e-10);
    }

    #[test]
    fn parallel_matches_serial_bitwise() {
        let rule = SphericalRule::<f64>::monte_carlo(4, 50_000, 9).unwrap();
        let f = |z: &[f64]| (z[0] * 3.0).sin() + z[3] * z[2];
        assert_eq!(integrate_real(&rule, f).unwrap(), integrate_real_par(&rule, f).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let rule = SphericalRule::<f64>::product(3, 5).unwrap();
        let back = SphericalRule::<f64>::from_text(&rule.to_text()).unwrap();
        assert_eq!(back.len(), rule.len());
        for i in 0..rule.len() {
            assert_eq!(back.node(i), rule.node(i));
            assert!((back.weights()[i] - rule.weights()[i]).abs() < 1e-16);
        }
        assert!(SphericalRule::<f64>::from_text("1 0 0\n0 1\n").is_err());
    }

    #[test]
    fn moebius_adapted_rule_integrates_peaked_kernel() {
        let base = SphericalRule::<f64>::product(3, 24).unwrap();
        let c = [0.0, 0.7, 0.0];
        let adapted = base.moebius_adapted(&c).unwrap();
        assert!(adapted.weight_defect() < 1e-6);
        let y = [0.0, 0.85, 0.0];
        let mass = integrate_real(&adapted, |z| {
            let d2: f64 = z.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
            (1.0 - norm_sq(&y)) / d2.powf(1.5)
        })
        .unwrap();
        assert!((mass - 1.0).abs() < 1e-5, "{mass}");
    }

    #[test]
    fn ball_points_stay_inside() {
        let pts = uniform_ball_points::<f64>(4, 2000, 0.7, 3);
        assert!(pts.iter().all(|p| p.norm() <= 0.7));
        let sph = uniform_sphere_points::<f32>(3, 100, 3);
        assert!(sph.iter().all(|p| (p.norm() - 1.0).abs() < 1e-6));
    }
}
