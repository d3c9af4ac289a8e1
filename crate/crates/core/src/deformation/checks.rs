use std::f64::consts::TAU;
use std::fmt;

use nalgebra::{Matrix4, Vector4};

use super::{CrDeformation, HkDeformation, HolDiff};
use crate::metrics::{hyperbolic_frame, UPoint};

/// Trapezoidal rule over [0, 2 pi) with n nodes; exact for trigonometric
/// polynomials of degree below n.
pub fn circle_integral<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let h = TAU / n as f64;
    (0..n).map(|k| f(k as f64 * h)).sum::<f64>() * h
}

const CIRCLE_NODES: usize = 128;

/// Fibre-circle integrals of u b2 over the point (x, y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleChecks {
    /// u = y^2 cos^2 phi, a Riemannian variation, against the CR data of `b`
    pub riemannian: f64,
    /// the degree-m variation of `a` against the CR data of `b`
    pub deformation: f64,
}

/// Angular pairings of variations against the CR deformation of `b`.
///
/// Both vanish when the Fourier modes differ: a Riemannian variation only
/// has even modes, the degree-m variation only the modes +-m.
pub fn parity_and_orthogonality_checks(a: &HolDiff, b: &HolDiff, x: f64, y: f64) -> CircleChecks {
    let cr = CrDeformation::new(b.clone());
    let hk = HkDeformation::new(a.clone());
    let at = |phi: f64| UPoint { x, y, phi };
    CircleChecks {
        riemannian: circle_integral(|phi| y * y * phi.cos().powi(2) * cr.b2(at(phi)), CIRCLE_NODES),
        deformation: circle_integral(|phi| hk.u(at(phi)) * cr.b2(at(phi)), CIRCLE_NODES),
    }
}

type PlaneField = dyn Fn(f64, f64) -> [f64; 2] + Send + Sync;

/// Vector field V on the half-plane, lifted to U by its action on
/// directions: W = (V1, V2, e_perp . DV e) with e = (cos phi, sin phi).
pub struct SurfaceField {
    name: String,
    field: Box<PlaneField>,
}

impl fmt::Debug for SurfaceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurfaceField({})", self.name)
    }
}

const PLANE_STEP: f64 = 1e-5;

impl SurfaceField {
    pub fn new<F>(name: &str, field: F) -> Self
    where
        F: Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static,
    {
        SurfaceField { name: name.to_string(), field: Box::new(field) }
    }

    pub fn zero() -> Self {
        SurfaceField::new("0", |_, _| [0.0, 0.0])
    }

    /// d/dx, an isometry of the half-plane.
    pub fn translation() -> Self {
        SurfaceField::new("d/dx", |_, _| [1.0, 0.0])
    }

    /// y d/dy, not an isometry.
    pub fn vertical_stretch() -> Self {
        SurfaceField::new("y d/dy", |_, y| [0.0, y])
    }

    pub fn value(&self, x: f64, y: f64) -> [f64; 2] {
        (self.field)(x, y)
    }

    /// The lift W at (x, y, phi), with DV by central differences.
    pub fn lift(&self, x: f64, y: f64, phi: f64) -> [f64; 3] {
        let v = self.value(x, y);
        let h = PLANE_STEP;
        let (vxp, vxm) = (self.value(x + h, y), self.value(x - h, y));
        let (vyp, vym) = (self.value(x, y + h), self.value(x, y - h));
        let dv = [
            [(vxp[0] - vxm[0]) / (2.0 * h), (vyp[0] - vym[0]) / (2.0 * h)],
            [(vxp[1] - vxm[1]) / (2.0 * h), (vyp[1] - vym[1]) / (2.0 * h)],
        ];
        let (s, c) = phi.sin_cos();
        let dve = [dv[0][0] * c + dv[0][1] * s, dv[1][0] * c + dv[1][1] * s];
        [v[0], v[1], -s * dve[0] + c * dve[1]]
    }
}

fn beta(p: &Vector4<f64>) -> Vector4<f64> {
    let f = hyperbolic_frame(UPoint { x: p[0], y: p[1], phi: p[2] });
    let v = f.omega * p[3].cosh() - f.eta * p[3].sinh();
    Vector4::new(v[0], v[1], v[2], 0.0)
}

fn lift4(w: &SurfaceField, p: &Vector4<f64>) -> Vector4<f64> {
    let l = w.lift(p[0], p[1], p[2]);
    Vector4::new(l[0], l[1], l[2], 0.0)
}

const STEP: f64 = 1e-3;

/// Richardson-refined central-difference Jacobian, entry (i, j) = d f_i / d p_j.
fn jacobian<F: Fn(&Vector4<f64>) -> Vector4<f64>>(f: F, p: &Vector4<f64>) -> Matrix4<f64> {
    let at = |h: f64| {
        let mut m = Matrix4::zeros();
        for j in 0..4 {
            let (mut pp, mut pm) = (*p, *p);
            pp[j] += h;
            pm[j] -= h;
            m.set_column(j, &((f(&pp) - f(&pm)) / (2.0 * h)));
        }
        m
    };
    (at(0.5 * STEP) * 4.0 - at(STEP)) / 3.0
}

fn gradient<F: Fn(&Vector4<f64>) -> f64>(f: F, p: &Vector4<f64>) -> Vector4<f64> {
    jacobian(|q| Vector4::new(f(q), 0.0, 0.0, 0.0), p).row(0).transpose()
}

/// Size of the 3-form alpha ^ (L_W beta - d(i_W beta)) on the hyperbolic
/// U x R, beta = cosh t omega - sinh t eta and alpha = d beta.
///
/// The Lie derivative uses the coordinate formula
/// (L_W beta)_i = W^j d_j beta_i + beta_j d_i W^j; returns the largest
/// coordinate coefficient of the 3-form.
pub fn lie_triviality_residual(w: &SurfaceField, u: UPoint, t: f64) -> f64 {
    let p = Vector4::new(u.x, u.y, u.phi, t);
    let jb = jacobian(beta, &p);
    let alpha = jb.transpose() - jb;
    let wv = lift4(w, &p);
    let jw = jacobian(|q| lift4(w, q), &p);
    let lie = jb * wv + jw.transpose() * beta(&p);
    let d_iw = gradient(|q| lift4(w, q).dot(&beta(q)), &p);
    let gamma = lie - d_iw;
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in (j + 1)..4 {
                let c = alpha[(i, j)] * gamma[k] + alpha[(j, k)] * gamma[i] + alpha[(k, i)] * gamma[j];
                worst = worst.max(c.abs());
            }
        }
    }
    worst
}
