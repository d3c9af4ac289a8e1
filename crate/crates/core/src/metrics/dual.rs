use std::f64::consts::TAU;

use nalgebra::Vector3;

use super::{FinslerModel, UPoint};
use crate::error::{Error, Result};

/// Image of a unit tangent direction in the cotangent space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPoint {
    pub xi1: f64,
    pub xi2: f64,
}

/// Covector dual to the unit direction at `u`; equals (L - p L_p, L_p) in the
/// slope chart, computed here in angular form so that vertical directions
/// need no separate chart.
pub fn dual_embedding(model: &FinslerModel, u: UPoint) -> DualPoint {
    let (omega, _) = model.coframe(&u.as_vec());
    DualPoint { xi1: omega[0], xi2: omega[1] }
}

/// Dual norm max over unit vectors v of xi(v), by fibre scan plus golden-section refinement.
pub fn dual_norm(model: &FinslerModel, x: f64, y: f64, xi: DualPoint) -> f64 {
    let f = |psi: f64| {
        let (s, c) = psi.sin_cos();
        (xi.xi1 * c + xi.xi2 * s) / model.polar(x, y, psi).g
    };
    maximize_on_circle(&f).1
}

fn maximize_on_circle(f: &dyn Fn(f64) -> f64) -> (f64, f64) {
    let n = 720;
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0.0);
    for k in 0..n {
        let psi = TAU * k as f64 / n as f64;
        let v = f(psi);
        if v > best {
            best = v;
            arg = psi;
        }
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (arg - TAU / n as f64, arg + TAU / n as f64);
    while b - a > 1e-12 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    // polish with Newton steps on the derivative; golden section alone stops near sqrt(eps)
    let mut psi = 0.5 * (a + b);
    let h = 1e-5;
    for _ in 0..3 {
        let (fp, f0, fm) = (f(psi + h), f(psi), f(psi - h));
        let d2 = (fp - 2.0 * f0 + fm) / (h * h);
        if d2 >= 0.0 {
            break;
        }
        let step = (fp - fm) / (2.0 * h) / d2;
        if step.abs() > 1e-6 {
            break;
        }
        psi -= step;
    }
    (psi.rem_euclid(TAU), f(psi))
}

/// First-order change of the norm at one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variation {
    /// fibre point where omega(e) is maximal
    pub psi_star: f64,
    /// change of the slope-chart function L(x, y, tan phi), i.e. of the norm of (1, p)
    pub delta_l: f64,
    /// delta L / L
    pub relative: f64,
}

/// Change of the norm when omega moves by `omega_dot`.
///
/// The norm of e is the maximum over the fibre of omega(e); the maximizer
/// moves as well but, being critical, contributes nothing at first order, so
/// the variation is omega_dot(e) at the maximizing fibre point.
pub fn variation_of_l(
    model: &FinslerModel,
    omega_dot: &dyn Fn(f64, f64, f64) -> (f64, f64),
    u: UPoint,
) -> Result<Variation> {
    let (s, c) = u.phi.sin_cos();
    let pairing = |psi: f64| {
        let (w, _) = model.coframe(&Vector3::new(u.x, u.y, psi));
        w[0] * c + w[1] * s
    };
    let (psi, top) = maximize_on_circle(&pairing);
    let h = 1e-4;
    let second = (pairing(psi + h) - 2.0 * top + pairing(psi - h)) / (h * h);
    if !(second < -1e-6 * top.abs().max(1.0)) {
        return Err(Error::DegenerateSupport(format!(
            "maximizer at psi = {psi} is not transverse (second derivative {second:e})"
        )));
    }
    let (da, db) = omega_dot(u.x, u.y, psi);
    let d_norm = da * c + db * s;
    Ok(Variation { psi_star: psi, delta_l: d_norm / c.abs().max(f64::MIN_POSITIVE), relative: d_norm / top })
}
