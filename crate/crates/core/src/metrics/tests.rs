use std::f64::consts::{FRAC_PI_2, PI, TAU};

use approx::assert_abs_diff_eq;
use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::deformation::HolDiff;

fn catalog() -> Vec<FinslerModel> {
    vec![
        FinslerModel::hyperbolic(),
        FinslerModel::parse("conformal").unwrap(),
        FinslerModel::parse("randers:eps=0.01").unwrap(),
        FinslerModel::parse("randers:eps=0.02,beta=closed").unwrap(),
        FinslerModel::parse("randers:eps=0.05,beta=bump").unwrap(),
    ]
}

fn random_points(n: usize, seed: u64) -> Vec<UPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| UPoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU)).unwrap())
        .collect()
}

#[test]
fn hyperbolic_lagrangian_values() {
    let m = FinslerModel::hyperbolic();
    let e = m.eval_finsler(0.0, 2.0, 0.0).unwrap();
    assert_abs_diff_eq!(e.l, 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(e.l_p, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(e.l_pp, 0.5, epsilon = 1e-15);
    let e = m.eval_finsler(0.0, 1.0, 0.0).unwrap();
    assert_eq!((e.l, e.l_p, e.l_pp), (1.0, 0.0, 1.0));
    // sqrt(1 + p^2)/y exactly
    let e = m.eval_finsler(0.3, 1.7, 0.8).unwrap();
    assert_eq!(e.l, 0.8f64.hypot(1.0) / 1.7);
}

#[test]
fn lagrangian_derivatives_match_differences() {
    let h = 1e-5;
    for model in catalog() {
        for u in random_points(20, 1) {
            let p = u.phi.tan().clamp(-3.0, 3.0);
            let (x, y) = (u.x, u.y);
            let l = |x: f64, y: f64, p: f64| model.eval_finsler(x, y, p).unwrap();
            let e = l(x, y, p);
            let d = |f: &dyn Fn(f64) -> f64| (f(h) - f(-h)) / (2.0 * h);
            assert_abs_diff_eq!(e.l_p, d(&|s| l(x, y, p + s).l), epsilon = 1e-8);
            assert_abs_diff_eq!(e.l_pp, d(&|s| l(x, y, p + s).l_p), epsilon = 1e-8);
            assert_abs_diff_eq!(e.l_x, d(&|s| l(x + s, y, p).l), epsilon = 1e-8);
            assert_abs_diff_eq!(e.l_y, d(&|s| l(x, y + s, p).l), epsilon = 1e-8);
            assert_abs_diff_eq!(e.l_px, d(&|s| l(x + s, y, p).l_p), epsilon = 1e-8);
            assert_abs_diff_eq!(e.l_py, d(&|s| l(x, y + s, p).l_p), epsilon = 1e-8);
        }
    }
}

#[test]
fn zero_amplitude_randers_is_hyperbolic() {
    let r =
        FinslerModel::randers(ScalarField::bump(1.0, 0.2, 0.0, 0.0, 1.0, 1.0).unwrap(), ScalarField::Const(0.3), 0.0)
            .unwrap();
    let h = FinslerModel::hyperbolic();
    for u in random_points(30, 2) {
        let p = u.phi.tan();
        let (a, b) = (r.eval_finsler(u.x, u.y, p).unwrap(), h.eval_finsler(u.x, u.y, p).unwrap());
        for (x, y) in [
            (a.l, b.l),
            (a.l_p, b.l_p),
            (a.l_pp, b.l_pp),
            (a.l_x, b.l_x),
            (a.l_y, b.l_y),
            (a.l_px, b.l_px),
            (a.l_py, b.l_py),
        ] {
            assert_abs_diff_eq!(x, y, epsilon = 1e-14 * (1.0 + y.abs()));
        }
    }
}

#[test]
fn lagrangian_domain_errors() {
    let m = FinslerModel::hyperbolic();
    assert!(matches!(m.eval_finsler(0.0, 0.0, 0.0), Err(crate::Error::Validation(_))));
    assert!(matches!(m.eval_finsler(0.0, -1.0, 0.0), Err(crate::Error::Validation(_))));
    assert!(FinslerModel::randers_magnetic(0.06).is_err());
    assert!(FinslerModel::parse("randers:eps=0.01,colour=red").is_err());
    assert!(FinslerModel::parse("elliptic").is_err());
}

#[test]
fn hyperbolic_frame_at_base_point() {
    let f = frame_and_coframe(&FinslerModel::hyperbolic(), UPoint::new(0.0, 1.0, 0.0).unwrap()).unwrap();
    for (v, e) in [(f.x_vec, [1.0, 0.0, -1.0]), (f.y_vec, [0.0, 1.0, 0.0]), (f.z_vec, [0.0, 0.0, 1.0])] {
        for i in 0..3 {
            assert_abs_diff_eq!(v[i], e[i], epsilon = 1e-6);
        }
    }
}

#[test]
fn hyperbolic_invariants_from_differences() {
    let m = FinslerModel::hyperbolic();
    for u in random_points(25, 3) {
        let f = frame_and_coframe(&m, u).unwrap();
        assert_abs_diff_eq!(f.s, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(f.c, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(f.k, -1.0, epsilon = 1e-6);
        let exact = hyperbolic_frame(u);
        assert!((f.eta - exact.eta).norm() < 1e-7);
        assert!((f.x_vec - exact.x_vec).norm() < 1e-7);
    }
}

#[test]
fn conformal_curvature_oracle() {
    let sigma = ScalarField::bump(0.05, 0.3, -0.1, 0.1, 1.1, 0.9).unwrap();
    let m = FinslerModel::conformal(sigma.clone());
    for u in random_points(15, 4) {
        let j = sigma.jet(u.x, u.y);
        let k = -(-2.0 * j.v).exp() * (1.0 + u.y * u.y * j.laplacian());
        let f = frame_and_coframe_with(&m, u, &FdConfig::accurate()).unwrap();
        assert_abs_diff_eq!(f.k, k, epsilon = 1e-8);
        assert_abs_diff_eq!(f.c, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(f.s, 0.0, epsilon = 1e-8);
    }
}

#[test]
fn duality_on_all_models() {
    for model in catalog() {
        for u in random_points(100, 5) {
            let f = frame_and_coframe(&model, u).unwrap();
            let d = f.duality() - nalgebra::Matrix3::identity();
            assert!(d.amax() <= 1e-6, "{} at {u:?}", model.name());
            assert!(f.omega.dot(&f.y_vec).abs() < 1e-12);
            assert!(f.theta.dot(&f.x_vec).abs() < 1e-12);
        }
    }
}

fn bracket_coefficients(model: &FinslerModel, u: UPoint) -> Vector3<f64> {
    // [Z, Y]^i = Z^j d_j Y^i - Y^j d_j Z^i, expressed in the frame
    let h = 1e-3;
    let f0 = model.frame(u).unwrap();
    let field = |q: Vector3<f64>| model.frame(UPoint::from_vec(&q)).unwrap();
    let dir = |v: Vector3<f64>, pick: fn(&FrameData) -> Vector3<f64>| {
        let q = u.as_vec();
        (pick(&field(q + v * h)) - pick(&field(q - v * h))) / (2.0 * h)
    };
    let br = dir(f0.z_vec, |f| f.y_vec) - dir(f0.y_vec, |f| f.z_vec);
    Vector3::new(f0.omega.dot(&br), f0.theta.dot(&br), f0.eta.dot(&br))
}

#[test]
fn randers_bracket_oracle() {
    let m = FinslerModel::parse("randers:eps=0.01").unwrap();
    let mut max_c: f64 = 0.0;
    for u in random_points(8, 6) {
        let f = m.frame(u).unwrap();
        let b = bracket_coefficients(&m, u);
        assert_abs_diff_eq!(b[0], -1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(b[1], f.s, epsilon = 1e-6);
        assert_abs_diff_eq!(b[2], f.c, epsilon = 1e-6);
        max_c = max_c.max(f.c.abs());
    }
    assert!(max_c > 1e-3, "C vanishes for a non-closed beta: {max_c}");
}

#[test]
fn residuals_converge_quadratically() {
    for model in catalog() {
        for u in random_points(3, 7) {
            let r = |h: f64| frame_and_coframe_with(&model, u, &FdConfig::central(h)).unwrap().residuals;
            let (a, b) = (r(4e-2), r(2e-2));
            for i in 0..3 {
                if a[i] > 1e-9 {
                    let ratio = a[i] / b[i];
                    assert!((3.0..5.0).contains(&ratio), "{} residual {i}: ratio {ratio}", model.name());
                }
            }
        }
    }
}

#[test]
fn riemannian_reversibility() {
    for model in [FinslerModel::hyperbolic(), FinslerModel::parse("conformal").unwrap()] {
        for u in random_points(10, 8) {
            let f = frame_and_coframe(&model, u).unwrap();
            let g = frame_and_coframe(&model, UPoint::new(u.x, u.y, u.phi + PI).unwrap()).unwrap();
            assert!((g.x_vec + f.x_vec).norm() < 1e-6);
            assert!((g.y_vec + f.y_vec).norm() < 1e-6);
            assert!((g.z_vec - f.z_vec).norm() < 1e-6);
            assert_abs_diff_eq!(f.s, 0.0, epsilon = 1e-6);
        }
    }
}

#[test]
fn catalog_models_are_valid() {
    for model in catalog() {
        model.validate().unwrap();
    }
    FinslerModel::hk_deformed(HolDiff::unit(3).unwrap(), 1e-3).validate().unwrap();
}

#[test]
fn dual_embedding_values() {
    let m = FinslerModel::hyperbolic();
    let d = dual_embedding(&m, UPoint::new(0.0, 2.0, 0.0).unwrap());
    assert_abs_diff_eq!(d.xi1, 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(d.xi2, 0.0, epsilon = 1e-15);
    let d = dual_embedding(&m, UPoint::new(0.0, 1.0, 0.0).unwrap());
    assert_eq!((d.xi1, d.xi2), (1.0, 0.0));
    for model in catalog() {
        for u in random_points(10, 9) {
            let xi = dual_embedding(&model, u);
            assert_abs_diff_eq!(dual_norm(&model, u.x, u.y, xi), 1.0, epsilon = 1e-9);
            if u.phi.cos() > 0.3 {
                let p = u.phi.tan();
                let e = model.eval_finsler(u.x, u.y, p).unwrap();
                assert_abs_diff_eq!(xi.xi1, e.l - p * e.l_p, epsilon = 1e-12);
                assert_abs_diff_eq!(xi.xi2, e.l_p, epsilon = 1e-12);
            }
        }
    }
    // vertical directions need no special chart
    let xi =
        dual_embedding(&FinslerModel::parse("randers:eps=0.03").unwrap(), UPoint::new(0.1, 1.3, FRAC_PI_2).unwrap());
    assert!(xi.xi1.is_finite() && xi.xi2 > 0.0);
}

/// Re(c * a(z) e^{i(m-1)phi} y^{m-1} dz) as (dx, dy) components.
fn hk_omega_dot(a: Complex64, m: i32, phase: Complex64) -> impl Fn(f64, f64, f64) -> (f64, f64) {
    move |_x, y, phi| {
        let w = phase * a * Complex64::from_polar(1.0, (m - 1) as f64 * phi) * y.powi(m - 1);
        (w.re, (Complex64::i() * w).re)
    }
}

#[test]
fn variation_of_norm() {
    let m = FinslerModel::hyperbolic();
    let zero = |_: f64, _: f64, _: f64| (0.0, 0.0);
    for u in random_points(5, 10) {
        assert_eq!(variation_of_l(&m, &zero, u).unwrap().relative, 0.0);
    }
    let a = Complex64::new(0.7, -0.4);
    let (a1, a2) = (a.re, a.im);
    let rotated = hk_omega_dot(a, 2, Complex64::i());
    let unrotated = hk_omega_dot(a, 2, Complex64::new(1.0, 0.0));
    for u in random_points(10, 11) {
        let v = variation_of_l(&m, &rotated, u).unwrap();
        let expect = -u.y.powi(2) * (a1 * (2.0 * u.phi).sin() + a2 * (2.0 * u.phi).cos());
        assert_abs_diff_eq!(v.relative, expect, epsilon = 1e-9);
        assert_abs_diff_eq!(v.psi_star, u.phi, epsilon = 1e-6);
        // the unrotated one-form gives y^m Re(a e^{i m phi}) instead
        let w = variation_of_l(&m, &unrotated, u).unwrap();
        let expect = u.y.powi(2) * (a1 * (2.0 * u.phi).cos() - a2 * (2.0 * u.phi).sin());
        assert_abs_diff_eq!(w.relative, expect, epsilon = 1e-9);
    }
}
