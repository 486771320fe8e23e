//! Library operators for the characterization checks.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{BallMoebius, CanonicalMoebius, FnMap};
use crate::hardy::{HarmonicFn, HarmonicPolynomial};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

use super::{SymbolMap, WcoOperator, Weight};

#[derive(Clone, Debug)]
pub struct NamedOperator<T: Scalar> {
    pub label: String,
    pub op: WcoOperator<T>,
}

/// An operator that must fail the system, with a harmonic `f` for which `W f` is not harmonic.
#[derive(Clone, Debug)]
pub struct NegativeWitness<T: Scalar> {
    pub label: String,
    pub op: WcoOperator<T>,
    pub harmonic: HarmonicFn<T>,
}

fn padded<T: Scalar>(n: usize, head: &[f64]) -> Vector<T> {
    let mut v = vec![T::zero(); n];
    for (slot, &c) in v.iter_mut().zip(head) {
        *slot = T::of(c);
    }
    Vector::from_vec(v)
}

fn need_three(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

/// Three ball automorphisms, two sphere reflections orthogonal to the unit sphere
/// (`|a| = 1.5` and `|a| = 3`) and the identity, each with `ψ = |Dφ|^{(n−2)/2}`.
pub fn positive_cases<T: Scalar>(n: usize) -> Result<Vec<NamedOperator<T>>> {
    need_three(n)?;
    let t = T::of;
    let balls = [
        ("ball a=0.5e1", Matrix::identity(n), padded(n, &[0.5])),
        ("ball rotated a=(0.2,-0.4,0.1)", Matrix::givens(n, 0, 1, t(0.7))?, padded(n, &[0.2, -0.4, 0.1])),
        (
            "ball rotated a=(0,0.3,0.6)",
            Matrix::from_givens(n, &[(1, 2, t(-1.2)), (0, 2, t(0.4))])?,
            padded(n, &[0.0, 0.3, 0.6]),
        ),
    ];
    let mut out = Vec::with_capacity(6);
    for (label, rot, a) in balls {
        out.push(NamedOperator { label: label.into(), op: WcoOperator::moebius(BallMoebius::new(rot, a)?) });
    }
    let s3 = 3.0 / 3f64.sqrt();
    for (label, a) in [("reflection |a|=1.5", padded(n, &[1.5])), ("reflection |a|=3", padded(n, &[s3, s3, s3]))] {
        let refl = CanonicalMoebius::orthogonal_sphere_reflection(a)?;
        out.push(NamedOperator { label: label.into(), op: WcoOperator::matched(SymbolMap::Canonical(refl), T::one())? });
    }
    out.push(NamedOperator { label: "identity".into(), op: WcoOperator::identity(n) });
    Ok(out)
}

/// An anisotropic linear map, a Möbius map with unmatched `ψ ≡ 1`, and a quadratic map into the ball.
pub fn negative_witnesses<T: Scalar>(n: usize) -> Result<Vec<NegativeWitness<T>>> {
    need_three(n)?;
    let one = Weight::Constant(Complex::new(T::one(), T::zero()));
    let mut diag = vec![T::half(); n];
    diag[0] = T::one();
    let quarter = T::of(0.25);
    let quadratic = FnMap::new(n, move |x: &[T]| {
        let mut y: Vec<T> = x.iter().map(|&c| T::half() * c).collect();
        y[0] += quarter * x[1] * x[1];
        Ok(Vector::from_vec(y))
    });
    Ok(vec![
        NegativeWitness {
            label: "anisotropic diag(1,1/2,..)".into(),
            op: WcoOperator::new(SymbolMap::general("diag(1,1/2,..)", Matrix::diagonal(&diag)), one.clone())?,
            harmonic: HarmonicFn::polynomial(n, HarmonicPolynomial::DifferenceOfSquares(0, 1))?,
        },
        NegativeWitness {
            label: "moebius a=0.5e1 with psi=1".into(),
            op: WcoOperator::new(SymbolMap::Ball(BallMoebius::from_center(padded(n, &[0.5]))?), one.clone())?,
            harmonic: HarmonicFn::polynomial(n, HarmonicPolynomial::Coordinate(0))?,
        },
        NegativeWitness {
            label: "quadratic x/2+(x2^2/4)e1".into(),
            op: WcoOperator::new(SymbolMap::general("x/2+(x2^2/4)e1", quadratic), one)?,
            harmonic: HarmonicFn::polynomial(n, HarmonicPolynomial::Coordinate(0))?,
        },
    ])
}
