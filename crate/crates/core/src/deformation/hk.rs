use num_complex::Complex64;

use super::{Expr, FrameDiff, HolDiff};
use crate::error::Result;
use crate::flows::FrameField;
use crate::metrics::{frame_and_coframe_with, FdConfig, FinslerModel, UPoint};

/// First-order variation of the hyperbolic metric by a degree-m
/// holomorphic differential, u = dL/L = -Im(a(z) y^m e^{i m phi}).
#[derive(Debug, Clone)]
pub struct HkDeformation {
    pub diff: HolDiff,
    base: Expr,
    yu: Expr,
    xu: Expr,
    yyu: Expr,
}

/// One sample of the variation fields at a point of U.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationField {
    pub point: UPoint,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    /// coefficients of the variation of eta on (omega, theta, eta)
    pub delta_eta: [f64; 3],
    pub delta_c: f64,
    pub delta_k: f64,
    /// X^2 u + Y^2 u + m u by differences along the frame flows
    pub casimir_residual: f64,
}

impl HkDeformation {
    pub fn new(diff: HolDiff) -> Self {
        let m = diff.m;
        let base = Expr::monomial(0, m, m);
        let yu = base.y();
        let xu = base.x();
        let yyu = yu.y();
        HkDeformation { diff, base, yu, xu, yyu }
    }

    pub fn m(&self) -> i32 {
        self.diff.m
    }

    fn real(&self, e: &Expr, p: UPoint) -> f64 {
        -e.eval(&self.diff, p).im
    }

    pub fn u(&self, p: UPoint) -> f64 {
        self.real(&self.base, p)
    }

    /// u + i u*, a CR function of weight m whose real part is u.
    pub fn u_complex(&self, p: UPoint) -> Complex64 {
        self.base.eval(&self.diff, p) * Complex64::i()
    }

    pub fn xu(&self, p: UPoint) -> f64 {
        self.real(&self.xu, p)
    }

    pub fn yu(&self, p: UPoint) -> f64 {
        self.real(&self.yu, p)
    }

    pub fn yyu(&self, p: UPoint) -> f64 {
        self.real(&self.yyu, p)
    }

    /// X v with v = Z u.
    pub fn xv(&self, p: UPoint) -> f64 {
        self.real(&self.base.z().x(), p)
    }

    /// X w with w = u + Z^2 u / 2.
    pub fn xw(&self, p: UPoint) -> f64 {
        let zz = self.base.z().z().scale(Complex64::new(0.5, 0.0));
        self.real(&self.base.plus(&zz).x(), p)
    }

    pub fn delta_c(&self, p: UPoint) -> f64 {
        let m = self.m() as f64;
        0.5 * m * (m * m - 4.0) * self.yu(p)
    }

    pub fn delta_k(&self, p: UPoint) -> f64 {
        let m = self.m() as f64;
        0.5 * m * (2.0 - m) * (self.yyu(p) + (m + 1.0) * self.u(p))
    }

    /// Variation of K computed directly from the varied metric:
    /// (2 - m)/2 (m Y^2 u + (m^2 + 2m + 2) u). It differs from
    /// [`HkDeformation::delta_k`] by (4 - m^2) u / 2; both vanish for m = 2.
    pub fn delta_k_direct(&self, p: UPoint) -> f64 {
        let m = self.m() as f64;
        0.5 * (2.0 - m) * (m * self.yyu(p) + (m * m + 2.0 * m + 2.0) * self.u(p))
    }

    pub fn casimir_residual(&self, p: UPoint, d: FrameDiff) -> f64 {
        let f = |q: UPoint| self.u(q);
        d.d2(f, FrameField::X, p) + d.d2(f, FrameField::Y, p) + self.m() as f64 * self.u(p)
    }

    pub fn sample(&self, p: UPoint, d: FrameDiff) -> DeformationField {
        let m = self.m() as f64;
        let u = self.u(p);
        let v = self.real(&self.base.z(), p);
        let w = u + 0.5 * self.real(&self.base.z().z(), p);
        DeformationField {
            point: p,
            u,
            v,
            w,
            delta_eta: [(m - 1.0) * self.yu(p), (1.0 - 0.5 * m * m) * self.xu(p), -0.5 * m * m * u],
            delta_c: self.delta_c(p),
            delta_k: self.delta_k(p),
            casimir_residual: self.casimir_residual(p, d),
        }
    }
}

/// Variation fields of the degree-m differential `a` at u.
pub fn hk_variation(a: &HolDiff, u: UPoint) -> DeformationField {
    HkDeformation::new(a.clone()).sample(u, FrameDiff::default())
}

/// Derivatives in eps of C and K of the deformed metric next to the
/// closed-form variations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantVariation {
    pub dc_fd: f64,
    pub dk_fd: f64,
    pub dc_formula: f64,
    pub dk_formula: f64,
}

impl InvariantVariation {
    pub fn residual(&self) -> f64 {
        (self.dc_fd - self.dc_formula).abs().max((self.dk_fd - self.dk_formula).abs())
    }
}

/// Central difference in eps of (C, K) for the metric (1 + eps u) times the
/// hyperbolic one, each invariant computed from the coframe with `cfg`.
pub fn invariant_variation_fd(a: &HolDiff, u: UPoint, eps: f64, cfg: &FdConfig) -> Result<InvariantVariation> {
    let plus = frame_and_coframe_with(&FinslerModel::hk_deformed(a.clone(), eps), u, cfg)?;
    let minus = frame_and_coframe_with(&FinslerModel::hk_deformed(a.clone(), -eps), u, cfg)?;
    let hk = HkDeformation::new(a.clone());
    Ok(InvariantVariation {
        dc_fd: (plus.c - minus.c) / (2.0 * eps),
        dk_fd: (plus.k - minus.k) / (2.0 * eps),
        dc_formula: hk.delta_c(u),
        dk_formula: hk.delta_k(u),
    })
}
