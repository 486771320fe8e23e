//! Weighted composition operators `W f = ψ·(f∘φ)` on harmonic Hardy spaces of
//! the unit ball in `R^n`.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`]: reflections, Möbius maps of `R̂^n` and of the ball, the
//!   bracket `[x,a]`, conformal factors and nontangential cones.
//! * [`specfun`]: gamma, digamma, the Gauss function `₂F₁` on `[0,1]` and the
//!   factor `Φ_p` entering the Hardy norm of the extended Poisson kernel.
//! * [`quadrature`]: rules on `S^{n-1}` for the normalized surface measure.
//! * [`hardy`]: Poisson kernels, Poisson integrals and `h^p` norms.
//! * [`wco`]: the operator itself, the harmonicity-preservation PDE system,
//!   norm and essential-norm formulas and their numerical verification.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

pub mod diff;
pub mod error;
pub mod geometry;
pub mod hardy;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod specfun;
pub mod wco;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use num_complex::Complex;

pub type VectorF64 = linalg::Vector<f64>;
pub type MatrixF64 = linalg::Matrix<f64>;
pub type BallMoebiusF64 = geometry::BallMoebius<f64>;
pub type CanonicalMoebiusF64 = geometry::CanonicalMoebius<f64>;
pub type ConeF64 = geometry::Cone<f64>;
pub type SphericalRuleF64 = quadrature::SphericalRule<f64>;
pub type HarmonicFnF64 = hardy::HarmonicFn<f64>;
pub type BoundaryDataF64 = hardy::BoundaryData<f64>;
pub type DiscreteMeasureF64 = hardy::DiscreteMeasure<f64>;
pub type WcoOperatorF64 = wco::WcoOperator<f64>;

pub type VectorF32 = linalg::Vector<f32>;
pub type MatrixF32 = linalg::Matrix<f32>;
pub type BallMoebiusF32 = geometry::BallMoebius<f32>;
pub type CanonicalMoebiusF32 = geometry::CanonicalMoebius<f32>;
pub type SphericalRuleF32 = quadrature::SphericalRule<f32>;

pub type ComplexF64 = Complex<f64>;
