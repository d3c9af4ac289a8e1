use num_complex::Complex64;

use super::{FrameDiff, HolDiff, FD_STEP};
use crate::flows::FrameField;
use crate::metrics::UPoint;

/// h = a(z) y^m e^{i m phi}, a CR function: (X + iY) h = 0, Z h = i m h.
pub fn cr_field(a: &HolDiff, u: UPoint) -> Complex64 {
    let m = a.m;
    a.a(Complex64::new(u.x, u.y)) * u.y.powi(m) * Complex64::from_polar(1.0, m as f64 * u.phi)
}

/// The CR deformation (b1 omega + b2 theta)(cosh t)^{-(m+1)} with
/// b1 - i b2 = a(z) y^{-m} e^{-i m phi}.
#[derive(Debug, Clone, PartialEq)]
pub struct CrDeformation {
    pub diff: HolDiff,
}

impl CrDeformation {
    pub fn new(diff: HolDiff) -> Self {
        CrDeformation { diff }
    }

    pub fn m(&self) -> i32 {
        self.diff.m
    }

    /// b1 - i b2 at u.
    pub fn b(&self, u: UPoint) -> Complex64 {
        let m = self.diff.m;
        self.diff.a(Complex64::new(u.x, u.y)) * u.y.powi(-m) * Complex64::from_polar(1.0, -(m as f64) * u.phi)
    }

    pub fn b1(&self, u: UPoint) -> f64 {
        self.b(u).re
    }

    pub fn b2(&self, u: UPoint) -> f64 {
        -self.b(u).im
    }

    pub fn profile(&self, t: f64) -> f64 {
        t.cosh().powi(-(self.diff.m + 1))
    }

    /// (a1, a2) at (u, t).
    pub fn components(&self, u: UPoint, t: f64) -> (f64, f64) {
        let p = self.profile(t);
        let b = self.b(u);
        (b.re * p, -b.im * p)
    }
}

/// Components (omega, theta) of d_A f = (Xf + tanh t Zf) omega + (Yf - f_t) theta
/// by central differences with step h.
pub fn d_a_scalar<F>(f: F, u: UPoint, t: f64, h: f64) -> (f64, f64)
where
    F: Fn(UPoint, f64) -> f64,
{
    let d = FrameDiff::new(h);
    let xf = d.d1(|p| f(p, t), FrameField::X, u);
    let yf = d.d1(|p| f(p, t), FrameField::Y, u);
    let zf = d.d1(|p| f(p, t), FrameField::Z, u);
    let ft = (f(u, t + h) - f(u, t - h)) / (2.0 * h);
    (xf + t.tanh() * zf, yf - ft)
}

/// Left side of the closure equation
/// (X a2 - Y a1) f2' - (Z a2 + a1) f1' + a1' f2' with f1 = cosh t,
/// f2 = -sinh t, for a_i = b_i (cosh t)^{-(m+1)}; all derivatives by
/// central differences with step h.
pub fn closure_residual_fields<B1, B2>(b1: B1, b2: B2, m: i32, u: UPoint, t: f64, h: f64) -> f64
where
    B1: Fn(UPoint) -> f64,
    B2: Fn(UPoint) -> f64,
{
    let profile = |s: f64| s.cosh().powi(-(m + 1));
    let d = FrameDiff::new(h);
    let p = profile(t);
    let xa2 = d.d1(&b2, FrameField::X, u) * p;
    let ya1 = d.d1(&b1, FrameField::Y, u) * p;
    let za2 = d.d1(&b2, FrameField::Z, u) * p;
    let a1 = b1(u) * p;
    let a1p = b1(u) * (profile(t + h) - profile(t - h)) / (2.0 * h);
    let (f1p, f2p) = (t.sinh(), -t.cosh());
    (xa2 - ya1) * f2p - (za2 + a1) * f1p + a1p * f2p
}

/// Signed closure residual of the CR deformation of `a` at step 1e-4.
pub fn closure_residual(a: &HolDiff, u: UPoint, t: f64) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let cr = CrDeformation::new(a.clone());
    closure_residual_fields(|p| cr.b1(p), |p| cr.b2(p), a.m, u, t, FD_STEP)
}
