use proptest::prelude::*;

use wco_lab::diff::{jacobian_matrix_fd, laplacian_fd_extrapolated};
use wco_lab::geometry::{
    eval_phi_a, identity_residuals, reflect_hyperplane, reflect_sphere, BallMoebius, FnMap,
};
use wco_lab::hardy::{extended_poisson, lp_mean, poisson_kernel};
use wco_lab::linalg::{dist, norm, Matrix, Vector};
use wco_lab::quadrature::{integrate_real, SphericalRule};
use wco_lab::specfun::{gamma, gauss_at_one, hyp2f1, recip_gamma, hyp2f1_series, phi_p, Hyp2F1Params, PhiSpec};
use wco_lab::wco::{
    duality_check, essential_norm_formula, harmonicity_preservation_check, norm_formula, pde_conditions_check,
    ratio_curve, Stencil, WcoOperator,
};
use wco_lab::diff::FdSteps;
use wco_lab::hardy::HarmonicFn;
use wco_lab::Complex;

fn point_in_ball(n: usize, rmax: f64) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(-1.0f64..1.0, n), 0.0f64..rmax).prop_filter_map("zero direction", move |(d, r)| {
        let len = norm(&d);
        (len > 1e-3).then(|| d.iter().map(|c| c * r / len).collect())
    })
}

fn unit_vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n).prop_filter_map("zero direction", |d| {
        let len = norm(&d);
        (len > 1e-3).then(|| d.iter().map(|c| c / len).collect())
    })
}

fn rotation(n: usize) -> impl Strategy<Value = Matrix<f64>> {
    prop::collection::vec((0..n, 0..n, -3.2f64..3.2), 0..4).prop_map(move |planes| {
        let planes: Vec<_> = planes.into_iter().filter(|(i, j, _)| i != j).collect();
        Matrix::from_givens(n, &planes).expect("valid planes")
    })
}

fn moebius(n: usize, amax: f64) -> impl Strategy<Value = BallMoebius<f64>> {
    (rotation(n), point_in_ball(n, amax)).prop_map(|(r, a)| BallMoebius::new(r, Vector::from_vec(a)).unwrap())
}

fn dim_and<S: Strategy, F: Fn(usize) -> S>(f: F) -> impl Strategy<Value = (usize, S::Value)> {
    (2usize..=5).prop_flat_map(move |n| (Just(n), f(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moebius_identities_and_bounds(
        (_, (m, x, y)) in dim_and(|n| (moebius(n, 0.95), point_in_ball(n, 0.99), point_in_ball(n, 0.99)))
    ) {
        let r = identity_residuals(&m, &x, &y).unwrap();
        prop_assert!(r.max_residual() < 1e-10, "{r:?}");
        prop_assert!(r.bounds_hold());
    }

    #[test]
    fn phi_a_is_an_involution((_, (a, x)) in dim_and(|n| (point_in_ball(n, 0.95), point_in_ball(n, 0.99)))) {
        let back = eval_phi_a(&a, &eval_phi_a(&a, &x).unwrap()).unwrap();
        prop_assert!(dist(&back, &x) < 1e-12);
    }

    #[test]
    fn jacobian_scalar_matches_fd_determinant((n, (m, x)) in dim_and(|n| (moebius(n, 0.8), point_in_ball(n, 0.8)))) {
        let map = FnMap::new(n, |z: &[f64]| m.eval(z));
        let det = jacobian_matrix_fd(&map, &x, 1e-4).unwrap().det().abs();
        let scale = m.jacobian_scalar(&x);
        prop_assert!((det.powf(1.0 / n as f64) - scale).abs() < 1e-6 * scale.max(1.0));
    }

    #[test]
    fn sphere_reflection_is_involution_fixing_its_sphere(
        (_, (c, r, x, u)) in dim_and(|n| (point_in_ball(n, 2.0), 0.2f64..2.0, point_in_ball(n, 3.0), unit_vector(n)))
    ) {
        prop_assume!(dist(&x, &c) > 1e-2);
        let back = reflect_sphere(&c, r, &reflect_sphere(&c, r, &x).unwrap()).unwrap();
        prop_assert!(dist(&back, &x) < 1e-9 * (1.0 + norm(&x)));
        let on: Vec<f64> = c.iter().zip(&u).map(|(a, b)| a + r * b).collect();
        prop_assert!(dist(&reflect_sphere(&c, r, &on).unwrap(), &on) < 1e-12 * (1.0 + norm(&on)));
    }

    #[test]
    fn hyperplane_reflection_is_involution_fixing_its_plane(
        (_, (a, t, x)) in dim_and(|n| (unit_vector(n), -1.0f64..1.0, point_in_ball(n, 3.0)))
    ) {
        let back = reflect_hyperplane(&a, t, &reflect_hyperplane(&a, t, &x).unwrap()).unwrap();
        prop_assert!(dist(&back, &x) < 1e-12);
        let s = wco_lab::linalg::dot(&x, &a) - t;
        let on: Vec<f64> = x.iter().zip(&a).map(|(xi, ai)| xi - s * ai).collect();
        prop_assert!(dist(&reflect_hyperplane(&a, t, &on).unwrap(), &on) < 1e-12);
    }

    #[test]
    fn euler_transformation_consistency(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.5f64..5.0, z in 0.0f64..0.95) {
        let direct = hyp2f1_series(a, b, c, z).unwrap();
        let euler = (1.0 - z).powf(c - a - b) * hyp2f1_series(c - a, c - b, c, z).unwrap();
        prop_assert!((direct - euler).abs() < 1e-9 * direct.abs().max(1.0), "{direct} vs {euler}");
    }

    #[test]
    fn gauss_value_plus_connection_term_is_the_limit_at_one(a in -2.0f64..2.0, b in -2.0f64..2.0, excess in 0.5f64..3.0) {
        let c = a + b + excess;
        prop_assume!(c > 0.1 && (excess - excess.round()).abs() > 0.05);
        let delta = 1e-8;
        let near = hyp2f1(&Hyp2F1Params::new(a, b, c, 1.0 - delta).unwrap()).unwrap();
        let exact = gauss_at_one(a, b, c).unwrap();
        let tail = gamma(c).unwrap() * gamma(-excess).unwrap() * recip_gamma(a) * recip_gamma(b) * delta.powf(excess);
        prop_assert!((near - exact - tail).abs() < 1e-5 * exact.abs().max(1.0), "{near} vs {exact} + {tail}");
    }

    #[test]
    fn phi_p_is_positive_and_continuous_in_p(n in 2usize..=6, r in 0.0f64..1.0, p in 1.0f64..8.0) {
        let at = |q: f64| phi_p(&PhiSpec::new(q, n, r).unwrap()).unwrap();
        let (v, w) = (at(p), at(p + 1e-6));
        prop_assert!(v.is_finite() && v > 0.0);
        prop_assert!((v - w).abs() < 1e-3 * v);
    }

    #[test]
    fn product_rule_is_rotation_invariant_for_smooth_functions((n, r) in (3usize..=4).prop_flat_map(|n| (Just(n), rotation(n)))) {
        let rule = SphericalRule::<f64>::product(n, 16).unwrap();
        let f = |z: &[f64]| (z[0] - 0.3 * z[1]).powi(4) + z[n - 1] * z[0] + 0.5;
        let plain = integrate_real(&rule, f).unwrap();
        let turned = integrate_real(&rule.rotated(&r).unwrap(), f).unwrap();
        prop_assert!((plain - turned).abs() < 1e-10);
    }

    #[test]
    fn poisson_kernel_has_unit_mass((n, x) in (3usize..=4).prop_flat_map(|n| (Just(n), point_in_ball(n, 0.9)))) {
        let rule = SphericalRule::<f64>::product(n, 48).unwrap().moebius_adapted(&x).unwrap();
        let mass = integrate_real(&rule, |z| poisson_kernel(&x, z).unwrap()).unwrap();
        prop_assert!((mass - 1.0).abs() < 1e-6, "{mass}");
    }

    #[test]
    fn extended_poisson_is_harmonic((_, (y, x)) in dim_and(|n| (point_in_ball(n, 0.8), point_in_ball(n, 0.8)))) {
        let g = |z: &[f64]| extended_poisson(&y, z).map(|v| Complex::new(v, 0.0));
        let lap = laplacian_fd_extrapolated(g, &x, 1e-3).unwrap();
        prop_assert!(lap.norm() < 1e-5 * extended_poisson(&y, &x).unwrap().max(1.0), "{lap}");
    }

    #[test]
    fn kernel_means_increase_with_radius(
        (_, (y, p)) in (3usize..=4).prop_flat_map(|n| (Just(n), (point_in_ball(n, 0.8), 1.0f64..6.0)))
    ) {
        let n = y.len();
        let rule = SphericalRule::<f64>::product(n, 24).unwrap().aligned_to(&unit_direction(&y)).unwrap();
        let f = HarmonicFn::extended_poisson(Vector::from_vec(y)).unwrap();
        let means: Vec<f64> = [0.0, 0.3, 0.6, 0.9].iter().map(|&r| lp_mean(&f, p, r, &rule).unwrap()).collect();
        prop_assert!(means.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9)), "{means:?}");
    }

    #[test]
    fn matched_moebius_operators_preserve_harmonicity((_, (m, x)) in (3usize..=4).prop_flat_map(|n| (Just(n), (moebius(n, 0.6), point_in_ball(n, 0.7))))) {
        let w = WcoOperator::moebius(m);
        let r = pde_conditions_check(&w, &x, FdSteps::default()).unwrap();
        prop_assert!(r.max() < 1e-4, "{r:?}");
        let f = HarmonicFn::polynomial(x.len(), wco_lab::hardy::HarmonicPolynomial::Product(0, 1)).unwrap();
        let pts = [Vector::from_vec(x.clone())];
        prop_assert!(harmonicity_preservation_check(&w, &f, &pts, 1e-3, Stencil::Plain).unwrap() < 1e-4);
    }

    #[test]
    fn essential_norm_equals_norm((_, (m, p)) in dim_and(|n| (moebius(n, 0.99), 1.001f64..50.0))) {
        prop_assert_eq!(essential_norm_formula(&m, p).unwrap(), norm_formula(&m, p).unwrap());
    }

    #[test]
    fn ratio_curve_never_exceeds_norm((_, (m, y, p)) in dim_and(|n| (moebius(n, 0.9), point_in_ball(n, 0.999), 1.0f64..8.0))) {
        prop_assert!(ratio_curve(&m, p, &y).unwrap() <= norm_formula(&m, p).unwrap() * (1.0 + 1e-9));
    }

    #[test]
    fn duality_for_kernel_pairs((m, z, y) in (moebius(3, 0.5), point_in_ball(3, 0.5), point_in_ball(3, 0.5))) {
        let rule = SphericalRule::<f64>::product(3, 32).unwrap();
        let w = WcoOperator::moebius(m);
        let (lhs, rhs) = duality_check(&w, &HarmonicFn::extended_poisson(Vector::from_vec(z)).unwrap(), &y, &rule).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-2 * rhs.norm());
    }
}

fn unit_direction(y: &[f64]) -> Vec<f64> {
    let len = norm(y);
    if len > 0.0 {
        y.iter().map(|c| c / len).collect()
    } else {
        let mut e = vec![0.0; y.len()];
        e[0] = 1.0;
        e
    }
}

#[test]
fn monte_carlo_error_decays_like_inverse_square_root() {
    let counts = [1_000usize, 10_000, 100_000, 1_000_000];
    let points: Vec<(f64, f64)> = counts
        .iter()
        .map(|&count| {
            let sq: f64 = (0..8u64)
                .map(|seed| {
                    let rule = SphericalRule::<f64>::monte_carlo(3, count, 100 + seed).unwrap();
                    let e = integrate_real(&rule, |z| z[0] * z[0]).unwrap() - 1.0 / 3.0;
                    e * e
                })
                .sum();
            ((count as f64).ln(), (sq / 8.0).sqrt().ln())
        })
        .collect();
    let k = points.len() as f64;
    let (mx, my) = (points.iter().map(|p| p.0).sum::<f64>() / k, points.iter().map(|p| p.1).sum::<f64>() / k);
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() < 0.15, "slope {slope}");
}
