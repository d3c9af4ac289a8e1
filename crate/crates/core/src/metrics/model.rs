use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::Vector3;
use num_complex::Complex64;

use super::{FdConfig, ScalarField, UPoint};
use crate::deformation::HolDiff;
use crate::error::{Error, Result};

/// Largest accepted Randers amplitude.
pub const MAX_RANDERS_EPS: f64 = 0.05;

/// Kinds of surface metric on the upper half-plane.
///
/// Every kind is described by its norm in polar form: a tangent vector of
/// Euclidean length r and direction angle phi has norm r * G(x, y, phi).
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// G = 1/y
    Hyperbolic,
    /// G = exp(sigma)/y
    ConformalRiemannian { sigma: ScalarField },
    /// G = (1 + eps (b1 cos phi + b2 sin phi))/y, i.e. the hyperbolic norm plus eps*beta
    /// with beta = (b1 dx + b2 dy)/y
    Randers { beta1: ScalarField, beta2: ScalarField, eps: f64 },
    /// G = (1 + eps u)/y with u = -y^m Im(a(z) e^{i m phi}), the first-order
    /// hyperkahler-boundary variation of the hyperbolic norm
    HkDeformed { diff: HolDiff, eps: f64 },
}

/// Rectangle of the half-plane on which a model is sampled and validated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Default for Window {
    fn default() -> Self {
        Window { x: (-1.0, 1.0), y: (0.5, 2.0) }
    }
}

/// G and its derivatives in (x, y, phi); `_p` stands for d/dphi.
#[derive(Debug, Clone, Copy, Default)]
pub struct PolarJet {
    pub g: f64,
    pub g_p: f64,
    pub g_pp: f64,
    pub g_x: f64,
    pub g_y: f64,
    pub g_xp: f64,
    pub g_yp: f64,
}

/// L(x, y, p) and partial derivatives in the slope chart, L = norm of (1, p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinslerEval {
    pub l: f64,
    pub l_p: f64,
    pub l_pp: f64,
    pub l_x: f64,
    pub l_y: f64,
    pub l_px: f64,
    pub l_py: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinslerModel {
    pub kind: ModelKind,
    pub window: Window,
}

impl FinslerModel {
    pub fn hyperbolic() -> Self {
        FinslerModel { kind: ModelKind::Hyperbolic, window: Window::default() }
    }

    pub fn conformal(sigma: ScalarField) -> Self {
        FinslerModel { kind: ModelKind::ConformalRiemannian { sigma }, window: Window::default() }
    }

    pub fn randers(beta1: ScalarField, beta2: ScalarField, eps: f64) -> Result<Self> {
        if !(0.0..=MAX_RANDERS_EPS).contains(&eps.abs()) {
            return Err(Error::Validation(format!("Randers eps = {eps} exceeds {MAX_RANDERS_EPS}")));
        }
        let m = FinslerModel { kind: ModelKind::Randers { beta1, beta2, eps }, window: Window::default() };
        // |beta| < 1 in the hyperbolic norm keeps the unit circle convex
        for (x, y) in m.grid(9) {
            let (b1, b2) = match &m.kind {
                ModelKind::Randers { beta1, beta2, .. } => (beta1.value(x, y), beta2.value(x, y)),
                _ => unreachable!(),
            };
            if eps.abs() * b1.hypot(b2) >= 1.0 {
                return Err(Error::ModelInvalid(format!("|eps beta| >= 1 at ({x}, {y})")));
            }
        }
        Ok(m)
    }

    /// Randers model with beta = dx/y, which is not closed.
    pub fn randers_magnetic(eps: f64) -> Result<Self> {
        Self::randers(ScalarField::Const(1.0), ScalarField::zero(), eps)
    }

    /// Randers model with beta = dy/y = d(log y).
    pub fn randers_closed(eps: f64) -> Result<Self> {
        Self::randers(ScalarField::zero(), ScalarField::Const(1.0), eps)
    }

    pub fn hk_deformed(diff: HolDiff, eps: f64) -> Self {
        FinslerModel { kind: ModelKind::HkDeformed { diff, eps }, window: Window::default() }
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn is_riemannian(&self) -> bool {
        matches!(self.kind, ModelKind::Hyperbolic | ModelKind::ConformalRiemannian { .. })
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self.kind, ModelKind::Hyperbolic)
    }

    pub fn name(&self) -> String {
        match &self.kind {
            ModelKind::Hyperbolic => "hyperbolic".into(),
            ModelKind::ConformalRiemannian { .. } => "conformal".into(),
            ModelKind::Randers { eps, .. } => format!("randers(eps={eps})"),
            ModelKind::HkDeformed { diff, eps } => format!("hk(m={},eps={eps})", diff.m),
        }
    }

    pub fn polar(&self, x: f64, y: f64, phi: f64) -> PolarJet {
        let (s, c) = phi.sin_cos();
        match &self.kind {
            ModelKind::Hyperbolic => PolarJet { g: 1.0 / y, g_y: -1.0 / (y * y), ..PolarJet::default() },
            ModelKind::ConformalRiemannian { sigma } => {
                let j = sigma.jet(x, y);
                let g = j.v.exp() / y;
                PolarJet { g, g_x: j.dx * g, g_y: g * (j.dy - 1.0 / y), ..PolarJet::default() }
            }
            ModelKind::Randers { beta1, beta2, eps } => {
                let (b1, b2) = (beta1.jet(x, y), beta2.jet(x, y));
                let lin = b1.v * c + b2.v * s;
                let lin_p = -b1.v * s + b2.v * c;
                let g = (1.0 + eps * lin) / y;
                let g_p = eps * lin_p / y;
                PolarJet {
                    g,
                    g_p,
                    g_pp: -eps * lin / y,
                    g_x: eps * (b1.dx * c + b2.dx * s) / y,
                    g_y: eps * (b1.dy * c + b2.dy * s) / y - g / y,
                    g_xp: eps * (-b1.dx * s + b2.dx * c) / y,
                    g_yp: eps * (-b1.dy * s + b2.dy * c) / y - g_p / y,
                }
            }
            ModelKind::HkDeformed { diff, eps } => {
                let m = diff.m;
                let z = Complex64::new(x, y);
                let e = Complex64::from_polar(1.0, m as f64 * phi);
                let ym = y.powi(m);
                let a = diff.a(z);
                let a1 = diff.a_deriv(z, 1);
                let alpha = a * ym * e;
                let alpha_x = a1 * ym * e;
                let alpha_y = (Complex64::i() * a1 * ym + a * (m as f64) * y.powi(m - 1)) * e;
                let mf = m as f64;
                let u = -alpha.im;
                let u_p = -mf * alpha.re;
                let g = (1.0 + eps * u) / y;
                PolarJet {
                    g,
                    g_p: eps * u_p / y,
                    g_pp: eps * mf * mf * alpha.im / y,
                    g_x: -eps * alpha_x.im / y,
                    g_y: -eps * alpha_y.im / y - g / y,
                    g_xp: -eps * mf * alpha_x.re / y,
                    g_yp: -eps * mf * alpha_y.re / y - eps * u_p / (y * y),
                }
            }
        }
    }

    /// Norm of the tangent vector (vx, vy) at (x, y).
    pub fn norm(&self, x: f64, y: f64, vx: f64, vy: f64) -> f64 {
        let r = vx.hypot(vy);
        if r == 0.0 {
            return 0.0;
        }
        r * self.polar(x, y, vy.atan2(vx)).g
    }

    /// Coframe (omega, theta) at (x, y, phi) as (dx, dy, dphi) components.
    ///
    /// omega is the gradient of the norm at the unit direction e, and theta is
    /// sqrt(G (G + G'')) times the Euclidean normal form, which is the angular
    /// version of the slope-chart formulas and has no chart breakdown.
    pub fn coframe(&self, q: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
        let j = self.polar(q[0], q[1], q[2]);
        let (s, c) = q[2].sin_cos();
        let omega = Vector3::new(j.g * c - j.g_p * s, j.g * s + j.g_p * c, 0.0);
        let w = (j.g * (j.g + j.g_pp)).sqrt();
        (omega, Vector3::new(-w * s, w * c, 0.0))
    }

    /// L(x, y, p) with partial derivatives.
    pub fn eval_finsler(&self, x: f64, y: f64, p: f64) -> Result<FinslerEval> {
        if !(y > 0.0) {
            return Err(Error::Validation(format!("y = {y} is not in the upper half-plane")));
        }
        let r = p.hypot(1.0);
        let (c, s) = (1.0 / r, p / r);
        let j = self.polar(x, y, p.atan());
        let e = FinslerEval {
            l: r * j.g,
            l_p: j.g * s + j.g_p * c,
            l_pp: (j.g + j.g_pp) * c * c * c,
            l_x: r * j.g_x,
            l_y: r * j.g_y,
            l_px: j.g_x * s + j.g_xp * c,
            l_py: j.g_y * s + j.g_yp * c,
        };
        if !(e.l > 0.0) || !(e.l * e.l_pp > 0.0) {
            return Err(Error::ModelInvalid(format!("convexity fails at ({x}, {y}, p = {p})")));
        }
        Ok(e)
    }

    fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = self.window.x.0 + (self.window.x.1 - self.window.x.0) * i as f64 / (n - 1) as f64;
                let y = self.window.y.0 + (self.window.y.1 - self.window.y.0) * j as f64 / (n - 1) as f64;
                pts.push((x, y));
            }
        }
        pts
    }

    /// Checks positivity, strong convexity and K < 0 on a grid of the window.
    pub fn validate(&self) -> Result<()> {
        for (x, y) in self.grid(5) {
            for k in 0..8 {
                let phi = TAU * k as f64 / 8.0 + 0.1;
                let j = self.polar(x, y, phi);
                if !(j.g > 0.0) || !(j.g + j.g_pp > 0.0) {
                    return Err(Error::ModelInvalid(format!(
                        "{}: norm not positive and strongly convex at ({x}, {y}, {phi})",
                        self.name()
                    )));
                }
                let f = super::frame_and_coframe_with(self, UPoint::new(x, y, phi)?, &FdConfig::default())?;
                if !(f.k < 0.0) {
                    return Err(Error::ModelInvalid(format!(
                        "{}: K = {} is not negative at ({x}, {y}, {phi})",
                        self.name(),
                        f.k
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parses catalog identifiers such as `hyperbolic`, `randers:eps=0.01,beta=magnetic`,
    /// `conformal:amp=0.05,r=1` or `hk:m=3,eps=0.001,are=1,aim=0`.
    pub fn parse(id: &str) -> Result<Self> {
        let (name, rest) = id.split_once(':').unwrap_or((id, ""));
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("model parameter '{kv}' is not key=value")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let model = match name.trim() {
            "hyperbolic" => FinslerModel::hyperbolic(),
            "conformal" => {
                let sigma = ScalarField::bump(
                    take(&mut params, "amp", 0.05)?,
                    take(&mut params, "px", 0.0)?,
                    take(&mut params, "py", 0.0)?,
                    take(&mut params, "x0", 0.0)?,
                    take(&mut params, "y0", 1.0)?,
                    take(&mut params, "r", 1.0)?,
                )?;
                FinslerModel::conformal(sigma)
            }
            "randers" => {
                let eps = take(&mut params, "eps", 0.01)?;
                let beta = params.remove("beta").unwrap_or_else(|| "magnetic".into());
                match beta.as_str() {
                    "magnetic" => FinslerModel::randers_magnetic(eps)?,
                    "closed" => FinslerModel::randers_closed(eps)?,
                    "bump" => FinslerModel::randers(
                        ScalarField::bump(1.0, 0.0, 0.0, 0.0, 1.0, 1.0)?,
                        ScalarField::bump(0.5, 0.3, 0.0, 0.2, 1.1, 0.8)?,
                        eps,
                    )?,
                    other => return Err(Error::Validation(format!("unknown Randers beta '{other}'"))),
                }
            }
            "hk" => {
                let m = take(&mut params, "m", 3.0)?;
                let eps = take(&mut params, "eps", 1e-3)?;
                let a = Complex64::new(take(&mut params, "are", 1.0)?, take(&mut params, "aim", 0.0)?);
                if m.fract() != 0.0 {
                    return Err(Error::Validation(format!("hk degree m = {m} is not an integer")));
                }
                FinslerModel::hk_deformed(HolDiff::new(m as i32, vec![a])?, eps)
            }
            other => return Err(Error::Validation(format!("unknown model '{other}'"))),
        };
        if let Some(k) = params.keys().next() {
            return Err(Error::Validation(format!("unknown model parameter '{k}' for {name}")));
        }
        Ok(model)
    }
}

fn take(params: &mut BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match params.remove(key) {
        Some(v) => {
            v.parse::<f64>().map_err(|_| Error::Validation(format!("model parameter {key} = '{v}' is not a number")))
        }
        None => Ok(default),
    }
}
