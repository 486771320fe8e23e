use crate::error::{Error, Result};
use crate::linalg::{dist, norm_sq, Vector};
use crate::scalar::Scalar;

use super::BallMoebius;

/// Nontangential approach region `Γ_δ(ζ) = {x : |x − ζ| < (δ/2)(1 − |x|²)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone<T> {
    vertex: Vector<T>,
    aperture: T,
}

impl<T: Scalar> Cone<T> {
    pub fn new(vertex: Vector<T>, aperture: T) -> Result<Self> {
        let len = vertex.norm();
        if (len - T::one()).abs() > T::of(T::UNIT_TOL) {
            return Err(Error::InvalidParameter(format!("cone vertex must be a unit vector (|ζ| = {len})")));
        }
        if !(aperture > T::one()) {
            return Err(Error::InvalidParameter(format!("cone aperture must exceed 1, got {aperture}")));
        }
        Ok(Self { vertex, aperture })
    }

    pub fn vertex(&self) -> &Vector<T> {
        &self.vertex
    }

    pub fn aperture(&self) -> T {
        self.aperture
    }

    pub fn contains(&self, x: &[T]) -> bool {
        dist(x, &self.vertex) < self.aperture * T::half() * (T::one() - norm_sq(x))
    }
}

/// `δ̃ = (1 + |φ(0)|)/(1 − |φ(0)|) · δ`, so that `φ(Γ_δ(ζ)) ⊆ Γ_δ̃(φ(ζ))`.
pub fn cone_image_aperture<T: Scalar>(m: &BallMoebius<T>, aperture: T) -> T {
    let r = m.origin_displacement();
    (T::one() + r) / (T::one() - r) * aperture
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn radial_approach_stays_inside() {
        let cone = Cone::new(Vector::from_slice(&[0.0, 1.0, 0.0]), 1.01).unwrap();
        for r in [0.99, 0.999, 0.9999] {
            assert!(cone.contains(&[0.0, r, 0.0]));
        }
    }

    #[test]
    fn origin_membership_threshold() {
        let zeta = Vector::from_slice(&[1.0, 0.0]);
        assert!(!Cone::new(zeta.clone(), 1.5).unwrap().contains(&[0.0, 0.0]));
        assert!(!Cone::new(zeta.clone(), 2.0).unwrap().contains(&[0.0, 0.0]));
        assert!(Cone::new(zeta, 2.1).unwrap().contains(&[0.0, 0.0]));
    }

    #[test]
    fn tangential_point_threshold() {
        // Point x = (t, 0.3) on the curve |x − ζ| = 1 − |x|², ζ = e1, found by bisection.
        let zeta = Vector::from_slice(&[1.0, 0.0]);
        let gap = |t: f64| dist(&[t, 0.3], &zeta) - (1.0 - t * t - 0.09);
        let (mut lo, mut hi) = (0.0, 0.5);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = [lo, 0.3];
        assert!(!Cone::new(zeta.clone(), 1.99).unwrap().contains(&x));
        assert!(Cone::new(zeta, 2.01).unwrap().contains(&x));
    }

    #[test]
    fn image_aperture_values() {
        let m = BallMoebius::from_center(Vector::from_slice(&[0.0, 0.0, 0.0])).unwrap();
        assert_eq!(cone_image_aperture(&m, 1.7), 1.7);
        let m = BallMoebius::from_center(Vector::from_slice(&[0.0, 0.5, 0.0])).unwrap();
        assert!((cone_image_aperture(&m, 1.7) - 5.1f64).abs() < 1e-14);
    }

    #[test]
    fn sampled_cone_maps_into_enlarged_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rot = Matrix::from_givens(3, &[(0, 1, 0.9), (1, 2, 0.3)]).unwrap();
        let m = BallMoebius::new(rot, Vector::from_slice(&[0.3, -0.4, 0.2])).unwrap();
        let zeta = Vector::from_slice(&[0.0, 0.6, 0.8]);
        let delta = 1.5;
        let cone = Cone::new(zeta.clone(), delta).unwrap();
        let image = Cone::new(m.eval(&zeta).unwrap().normalized().unwrap(), cone_image_aperture(&m, delta)).unwrap();
        let mut accepted = 0;
        while accepted < 10_000 {
            let x: Vec<f64> = (0..3).map(|i| zeta[i] + rng.random_range(-0.5..0.5)).collect();
            if norm_sq(&x) >= 1.0 || !cone.contains(&x) {
                continue;
            }
            accepted += 1;
            assert!(image.contains(&m.eval(&x).unwrap()), "{x:?}");
        }
    }
}
