use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::flows::FrameField;
use crate::metrics::FdConfig;

fn pt(x: f64, y: f64, phi: f64) -> UPoint {
    UPoint::new(x, y, phi).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_points(n: usize, seed: u64) -> Vec<UPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| pt(rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU))).collect()
}

fn catalog(m: i32) -> Vec<HolDiff> {
    vec![
        HolDiff::unit(m).unwrap(),
        HolDiff::new(m, vec![c(0.3, -0.2), c(1.0, 0.5)]).unwrap(),
        HolDiff::new(m, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.4, 0.1)]).unwrap(),
    ]
}

fn cr_defect(a: &HolDiff, u: UPoint, h: f64) -> f64 {
    let d = FrameDiff::new(h);
    let f = |p: UPoint| cr_field(a, p);
    (d.d1(f, FrameField::X, u) + d.d1(f, FrameField::Y, u) * Complex64::i()).norm()
}

#[test]
fn cr_field_values() {
    assert!((cr_field(&HolDiff::unit(2).unwrap(), pt(0.0, 1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
    let a = HolDiff::new(1, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!((cr_field(&a, pt(0.0, 2.0, FRAC_PI_2)) - c(-4.0, 0.0)).norm() < 1e-14);
}

#[test]
fn cr_equation_converges_at_second_order() {
    for m in 1..=4 {
        for a in catalog(m) {
            for u in random_points(50, 11) {
                let (coarse, fine) = (cr_defect(&a, u, 2e-2), cr_defect(&a, u, 1e-2));
                let scale = cr_field(&a, u).norm().max(1.0);
                let tight = cr_defect(&a, u, FD_STEP);
                assert!(tight < 1e-6 * scale * (m * m * m) as f64, "m={m} defect {tight}");
                if coarse > 1e-9 * scale {
                    let ratio = coarse / fine;
                    assert!((3.0..5.0).contains(&ratio), "m={m} ratio {ratio}");
                }
            }
        }
    }
}

#[test]
fn cr_field_has_weight_m_and_casimir_eigenvalue() {
    let (d1, d2) = (FrameDiff::new(1e-4), FrameDiff::new(1e-3));
    for m in 1..=5 {
        let a = &catalog(m)[1];
        for u in random_points(10, 3) {
            let f = |p: UPoint| cr_field(a, p);
            let h = f(u);
            let zh = d1.d1(f, FrameField::Z, u);
            assert!((zh - h * Complex64::i() * m as f64).norm() < 1e-6 * h.norm().max(1.0));
            let op = d2.d2(f, FrameField::X, u) + d2.d2(f, FrameField::Y, u) - d2.d2(f, FrameField::Z, u);
            let target = h * (m * (m - 1)) as f64;
            assert!((op - target).norm() < 1e-3 * h.norm().max(1.0), "m={m}");
        }
    }
}

#[test]
fn symbolic_derivatives_match_differences() {
    let d = FrameDiff::new(1e-4);
    let a = &catalog(3)[2];
    let e = Expr::monomial(0, 3, 3);
    for u in random_points(10, 5) {
        let f = |p: UPoint| e.eval(a, p);
        for (field, sym) in [(FrameField::X, e.x()), (FrameField::Y, e.y()), (FrameField::Z, e.z())] {
            let fd = d.d1(f, field, u);
            let exact = sym.eval(a, u);
            assert!((fd - exact).norm() < 1e-6 * exact.norm().max(1.0), "{field}");
        }
    }
}

#[test]
fn d_a_scalar_examples() {
    let u = pt(0.3, 1.2, 0.4);
    assert_eq!(d_a_scalar(|_, _| 2.5, u, 0.7, FD_STEP), (0.0, 0.0));
    let (w, th) = d_a_scalar(|_, t| t * t, u, 0.7, FD_STEP);
    assert!(w.abs() < 1e-12 && (th + 1.4).abs() < 1e-8);
    for u in random_points(5, 9) {
        let (w, th) = d_a_scalar(|_, t| t.sinh(), u, -0.4, FD_STEP);
        assert!(w.abs() < 1e-12 && (th + (-0.4f64).cosh()).abs() < 1e-7);
    }
    // X = y cos phi d/dx + y sin phi d/dy - cos phi d/dphi
    let (w, _) = d_a_scalar(|p, _| p.phi.sin(), pt(0.0, 1.0, 0.3), 0.5, FD_STEP);
    let expected = -(0.3f64).cos().powi(2) + 0.5f64.tanh() * 0.3f64.cos();
    assert!((w - expected).abs() < 1e-7);
}

#[test]
fn cr_deformation_closes() {
    let a = HolDiff::unit(2).unwrap();
    assert!(closure_residual(&a, pt(0.0, 1.0, 0.0), 0.7).abs() < 1e-6);
    let zero = HolDiff::new(3, vec![c(0.0, 0.0)]).unwrap();
    assert_eq!(closure_residual(&zero, pt(0.2, 1.0, 0.5), 0.3), 0.0);
    for m in 1..=5 {
        for a in catalog(m) {
            for (k, u) in random_points(10, 21).into_iter().enumerate() {
                let u = pt(u.x, u.y + 0.5, u.phi);
                let t = -2.0 + 0.4 * k as f64;
                assert!(closure_residual(&a, u, t).abs() < 1e-6, "m={m}");
            }
        }
    }
}

#[test]
fn non_cr_control_does_not_close() {
    // b1 = y, b2 = 0 leaves y (cos phi cosh t + sinh t) cosh^-2 t
    for u in random_points(10, 4) {
        let t = 0.7;
        let r = closure_residual_fields(|p| p.y, |_| 0.0, 1, u, t, FD_STEP);
        let exact = u.y * (u.phi.cos() * t.cosh() + t.sinh()) / t.cosh().powi(2);
        assert!((r - exact).abs() < 1e-7);
    }
    let r = closure_residual_fields(|p| p.y, |_| 0.0, 1, pt(0.0, 1.0, 0.0), 0.7, FD_STEP);
    assert!(r > 0.5);
}

#[test]
fn cr_deformation_weight() {
    let cr = CrDeformation::new(catalog(3)[1].clone());
    let d = FrameDiff::new(1e-4);
    for u in random_points(10, 6) {
        let b = cr.b(u);
        let zb = d.d1(|p| cr.b(p), FrameField::Z, u);
        assert!((zb + b * Complex64::i() * 3.0).norm() < 1e-6 * b.norm().max(1.0));
        let t = 1.3;
        let (a1, a2) = cr.components(u, t);
        assert!((a1 - cr.b1(u) * t.cosh().powi(-4)).abs() < 1e-15);
        assert!((a2 - cr.b2(u) * t.cosh().powi(-4)).abs() < 1e-15);
    }
}

#[test]
fn hk_variation_examples() {
    for a in catalog(2) {
        for u in random_points(20, 1) {
            let s = hk_variation(&a, u);
            assert!(s.delta_c.abs() < 1e-12 && s.delta_k.abs() < 1e-12);
        }
    }
    for a in catalog(1) {
        for u in random_points(20, 2) {
            assert!(hk_variation(&a, u).delta_eta[0].abs() < 1e-12);
        }
    }
    let a = HolDiff::unit(3).unwrap();
    let u = pt(0.0, 1.0, FRAC_PI_6);
    let s = hk_variation(&a, u);
    assert!((s.u + 1.0).abs() < 1e-14);
    let hk = HkDeformation::new(a);
    let errs: Vec<f64> = [2e-3, 1e-3]
        .iter()
        .map(|&h| (s.delta_c - 7.5 * FrameDiff::new(h).d1(|p| hk.u(p), FrameField::Y, u)).abs())
        .collect();
    assert!(errs[1] < 1e-4, "{errs:?}");
    assert!((errs[0] / errs[1] - 4.0).abs() < 0.2, "{errs:?}");
}

#[test]
fn deformation_field_relations() {
    let d = FrameDiff::new(1e-4);
    for m in 1..=5 {
        let hk = HkDeformation::new(catalog(m)[2].clone());
        for u in random_points(10, 8) {
            let s = hk.sample(u, d);
            let zu = d.d1(|p| hk.u(p), FrameField::Z, u);
            let zv = d.d1(|p| hk.sample(p, d).v, FrameField::Z, u);
            let scale = s.u.abs().max(1.0) * (m * m) as f64;
            assert!((s.v - zu).abs() < 1e-6 * scale);
            assert!((zv - 2.0 * (s.w - s.u)).abs() < 1e-6 * scale);
            assert!(s.casimir_residual.abs() < 1e-5 * scale, "m={m} {}", s.casimir_residual);
        }
    }
}

#[test]
fn casimir_identity_converges_at_second_order() {
    for m in 1..=6 {
        let hk = HkDeformation::new(catalog(m)[1].clone());
        let worst = |h: f64| {
            random_points(100, 13)
                .into_iter()
                .map(|u| hk.casimir_residual(u, FrameDiff::new(h)).abs())
                .fold(0.0, f64::max)
        };
        let (coarse, fine) = (worst(2e-2), worst(1e-2));
        let ratio = coarse / fine;
        assert!((3.5..4.5).contains(&ratio), "m={m} ratio {ratio}");
    }
}

#[test]
fn invariant_variations_match_direct_computation() {
    let cfg = FdConfig::accurate();
    for m in 1..=4 {
        let a = &catalog(m)[1];
        let hk = HkDeformation::new(a.clone());
        for u in random_points(5, 17) {
            let v = invariant_variation_fd(a, u, 1e-5, &cfg).unwrap();
            let dk = hk.delta_k_direct(u);
            let scale = v.dc_formula.abs().max(dk.abs()).max(1.0);
            assert!((v.dc_fd - v.dc_formula).abs() < 1e-4 * scale, "m={m} {v:?}");
            assert!((v.dk_fd - dk).abs() < 1e-4 * scale, "m={m} {v:?} {dk}");
            let gap = v.dk_formula + 0.5 * (4.0 - (m * m) as f64) * hk.u(u) - dk;
            assert!(gap.abs() < 1e-9 * scale);
        }
    }
}

#[test]
fn closed_randers_curvature_variation() {
    // m = 1, a = 1 is the metric |v|/y - eps dy; a projective change by a
    // closed form gives dK = 2u - X^2 u / 2
    let hk = HkDeformation::new(HolDiff::unit(1).unwrap());
    let d = FrameDiff::new(1e-3);
    for u in random_points(10, 19) {
        let xx = d.d2(|p| hk.u(p), FrameField::X, u);
        assert!((hk.delta_k_direct(u) - (2.0 * hk.u(u) - 0.5 * xx)).abs() < 1e-5);
    }
}

#[test]
fn transport_of_constant_curvature_variation() {
    let u = pt(0.2, 1.1, 0.9);
    for t in [-2.0, -0.5, 0.0, 0.8, 3.0] {
        let h = transport_h(|_| 0.7, |_| 0.0, u, t, 1e-12).unwrap();
        assert!((h + 0.35 * t.sinh().powi(2)).abs() < 1e-10 * t.cosh().powi(2));
        assert_eq!(transport_h(|_| 0.0, |_| 0.0, u, t, 1e-12).unwrap(), 0.0);
    }
    let hk = HkDeformation::new(catalog(2)[2].clone());
    for u in random_points(5, 31) {
        let h = transport_h(|p| hk.delta_k(p), |p| hk.delta_c(p), u, 1.5, 1e-10).unwrap();
        assert!(h.abs() < 1e-10);
    }
}

#[test]
fn variation_equations_reproduce_transport() {
    for m in [1, 3, 4] {
        let hk = HkDeformation::new(catalog(m)[1].clone());
        for u in random_points(4, 41) {
            for t in [-1.5, 0.6, 2.0] {
                let h = transport_h(|p| hk.delta_k(p), |p| hk.delta_c(p), u, t, 1e-11).unwrap();
                let (f1, f2) = delta_f(|p| hk.delta_k(p), |p| hk.delta_c(p), u, t, 1e-11).unwrap();
                let from_ode = f1 * t.cosh() + f2 * t.sinh();
                assert!((h - from_ode).abs() < 1e-7 * h.abs().max(1.0), "m={m} t={t} {h} {from_ode}");
            }
        }
    }
}

#[test]
fn transport_solves_characteristic_equation() {
    // Y h - h' = dK sinh t cosh t + dC sinh^2 t
    let hk = HkDeformation::new(catalog(3)[1].clone());
    let (dk, dc) = (|p: UPoint| hk.delta_k(p), |p: UPoint| hk.delta_c(p));
    let h = |p: UPoint, t: f64| transport_h(dk, dc, p, t, 1e-12).unwrap();
    let d = FrameDiff::new(1e-4);
    for u in random_points(4, 43) {
        let t = 0.9;
        let yh = d.d1(|p| h(p, t), FrameField::Y, u);
        let ht = (h(u, t + 1e-4) - h(u, t - 1e-4)) / 2e-4;
        let rhs = dk(u) * t.sinh() * t.cosh() + dc(u) * t.sinh().powi(2);
        assert!((yh - ht - rhs).abs() < 1e-5 * rhs.abs().max(1.0));
    }
}

#[test]
fn class_representative_grows_at_most_exponentially() {
    // h itself grows like cosh^2 t, h / cosh t like e^|t|
    for m in 2..=4 {
        let hk = HkDeformation::new(catalog(m)[1].clone());
        for u in random_points(3, 51) {
            let mut worst: f64 = 0.0;
            for k in 0..=16 {
                let t = -8.0 + k as f64;
                let (w, th) = class_representative(&hk, u, t, 1e-10).unwrap();
                worst = worst.max(w.abs().max(th.abs()) * (-t.abs()).exp());
            }
            let (w0, th0) = class_representative(&hk, u, 0.0, 1e-10).unwrap();
            let base = w0.abs().max(th0.abs()).max(1.0);
            assert!(worst < 50.0 * base * (m * m * m) as f64, "m={m} {worst}");
        }
    }
}

#[test]
fn circle_checks() {
    let p = (0.3, 1.4);
    let r = parity_and_orthogonality_checks(&catalog(2)[1], &catalog(3)[1], p.0, p.1);
    assert!(r.riemannian.abs() < 1e-10);
    let r = parity_and_orthogonality_checks(&catalog(3)[1], &catalog(5)[2], p.0, p.1);
    assert!(r.deformation.abs() < 1e-10);
    // u = -sin 2 phi and b2 = sin 2 phi at (0, 1)
    let one = HolDiff::unit(2).unwrap();
    let r = parity_and_orthogonality_checks(&one, &one, 0.0, 1.0);
    assert!((r.deformation + PI).abs() < 1e-12);
    // constant coefficients pair to -pi Re(a b)
    let (a, b) = (c(0.5, 1.0), c(2.0, -0.3));
    let r = parity_and_orthogonality_checks(
        &HolDiff::new(2, vec![a]).unwrap(),
        &HolDiff::new(2, vec![b]).unwrap(),
        0.7,
        1.9,
    );
    assert!((r.deformation + PI * (a * b).re).abs() < 1e-12);
}

#[test]
fn lie_derivative_identity() {
    assert_eq!(lie_triviality_residual(&SurfaceField::zero(), pt(0.1, 1.0, 0.2), 0.4), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for w in [SurfaceField::translation(), SurfaceField::vertical_stretch()] {
        for u in random_points(10, 62) {
            let t = rng.gen_range(-2.0..2.0);
            let r = lie_triviality_residual(&w, u, t);
            assert!(r < 1e-6, "{w:?} {r}");
        }
    }
    let bent = SurfaceField::new("sin", |x, y| [y * x.sin(), x * y * y]);
    assert!(lie_triviality_residual(&bent, pt(0.4, 1.3, 2.0), 1.0) < 1e-6);
}

#[test]
fn deformation_table_header() {
    let hk = HkDeformation::new(catalog(3)[0].clone());
    let t = deformation_table(&hk, &[(pt(0.0, 1.0, 0.0), 0.5), (pt(0.1, 2.0, 1.0), -1.0)], 1e-10).unwrap();
    let csv = t.render();
    assert!(csv.starts_with("x,y,phi,t,u,v,w,dC,dK,h\n"));
    assert_eq!(csv.lines().count(), 3);
}
