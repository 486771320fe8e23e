//! Residuals of the standard identities satisfied by every `φ ∈ Möb(B)`.

use crate::error::Result;
use crate::linalg::{dist, norm_sq};
use crate::scalar::Scalar;

use super::{scale_of, BallMoebius};

/// Residuals at one pair `(x, y)` of the closed ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResiduals<T> {
    /// `| |Dφ(x)| − |det Dφ(x)|^{1/n} |` with the analytic Jacobian matrix.
    pub jacobian: T,
    /// `| 1 − |φ(x)|² − |Dφ(x)|(1 − |x|²) |`.
    pub boundary_distance: T,
    /// `| |φ(x) − φ(y)| − |Dφ(x)|^{1/2}|Dφ(y)|^{1/2}|x − y| |`.
    pub distance: T,
    /// Whether `(1−|a|)/(1+|a|) ≤ |Dφ(x)| ≤ (1+|a|)/(1−|a|)` holds (relative slack `1e-12`).
    pub scale_bounds_hold: bool,
    /// Whether `|Dφ(y)|/|Dφ(x)| ≤ ((1+|a|)/(1−|a|))²` holds (relative slack `1e-12`).
    pub ratio_bound_holds: bool,
}

impl<T: Scalar> IdentityResiduals<T> {
    pub fn max_residual(&self) -> T {
        self.jacobian.max(self.boundary_distance).max(self.distance)
    }

    pub fn bounds_hold(&self) -> bool {
        self.scale_bounds_hold && self.ratio_bound_holds
    }
}

/// Evaluates every identity and bound at `x` and `y`.
pub fn identity_residuals<T: Scalar>(m: &BallMoebius<T>, x: &[T], y: &[T]) -> Result<IdentityResiduals<T>> {
    let one = T::one();
    let slack = one + T::of(1e-12);
    let jx = m.jacobian_scalar(x);
    let jy = m.jacobian_scalar(y);
    let fx = m.eval(x)?;
    let fy = m.eval(y)?;

    let jacobian = (jx - scale_of(&m.jacobian_matrix(x)?)).abs();
    let boundary_distance = ((one - fx.norm_sq()) - jx * (one - norm_sq(x))).abs();
    let distance = (dist(&fx, &fy) - (jx * jy).sqrt() * dist(x, y)).abs();

    let r = m.origin_displacement();
    let k = (one + r) / (one - r);
    let scale_bounds_hold = jx * slack >= one / k && jx <= k * slack;
    let ratio_bound_holds = jy / jx <= k * k * slack;
    Ok(IdentityResiduals { jacobian, boundary_distance, distance, scale_bounds_hold, ratio_bound_holds })
}
