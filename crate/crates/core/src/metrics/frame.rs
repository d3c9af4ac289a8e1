use nalgebra::{Matrix3, Vector3};

use super::{FinslerModel, UPoint};
use crate::error::{Error, Result};

/// Finite-difference settings for exterior derivatives of coframe fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub step: f64,
    /// combine steps h and h/2 to cancel the h^2 error term
    pub richardson: bool,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { step: 1e-4, richardson: false }
    }
}

impl FdConfig {
    pub fn central(step: f64) -> Self {
        FdConfig { step, richardson: false }
    }

    /// Fourth-order setting used inside flows and Jacobi solves.
    pub fn accurate() -> Self {
        FdConfig { step: 2e-3, richardson: true }
    }
}

/// Frame, coframe and structure scalars at a point of U.
///
/// Vectors hold (d/dx, d/dy, d/dphi) components, covectors (dx, dy, dphi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData {
    pub x_vec: Vector3<f64>,
    pub y_vec: Vector3<f64>,
    pub z_vec: Vector3<f64>,
    pub omega: Vector3<f64>,
    pub theta: Vector3<f64>,
    pub eta: Vector3<f64>,
    pub s: f64,
    pub c: f64,
    pub k: f64,
    /// norms of d(omega) - eta^theta, d(theta) + eta^(omega + S theta),
    /// d(eta) + (K omega + C eta)^theta
    pub residuals: [f64; 3],
}

impl FrameData {
    /// Pairing matrix <coframe, frame>; the identity for a consistent frame.
    pub fn duality(&self) -> Matrix3<f64> {
        let co = [self.omega, self.theta, self.eta];
        let fr = [self.x_vec, self.y_vec, self.z_vec];
        Matrix3::from_fn(|i, j| co[i].dot(&fr[j]))
    }
}

/// Central-difference Jacobian, column j = d f / d q_j.
fn jacobian<const N: usize, F>(f: &F, q: &Vector3<f64>, cfg: &FdConfig) -> [[Vector3<f64>; 3]; N]
where
    F: Fn(&Vector3<f64>) -> [Vector3<f64>; N],
{
    let central = |h: f64| {
        let mut out = [[Vector3::zeros(); 3]; N];
        for j in 0..3 {
            let mut qp = *q;
            let mut qm = *q;
            qp[j] += h;
            qm[j] -= h;
            let (fp, fm) = (f(&qp), f(&qm));
            for n in 0..N {
                out[n][j] = (fp[n] - fm[n]) / (2.0 * h);
            }
        }
        out
    };
    let coarse = central(cfg.step);
    if !cfg.richardson {
        return coarse;
    }
    let fine = central(0.5 * cfg.step);
    let mut out = fine;
    for n in 0..N {
        for j in 0..3 {
            out[n][j] = (fine[n][j] * 4.0 - coarse[n][j]) / 3.0;
        }
    }
    out
}

/// Exterior derivative of a 1-form field, as the axial vector
/// (d_y a_phi - d_phi a_y, d_phi a_x - d_x a_phi, d_x a_y - d_y a_x).
/// With this identification a ^ b corresponds to the cross product.
fn curl(cols: &[Vector3<f64>; 3]) -> Vector3<f64> {
    Vector3::new(cols[1][2] - cols[2][1], cols[2][0] - cols[0][2], cols[0][1] - cols[1][0])
}

fn lsq2(v1: &Vector3<f64>, v2: &Vector3<f64>, r: &Vector3<f64>) -> Result<(f64, f64)> {
    let (a, b, d) = (v1.dot(v1), v1.dot(v2), v2.dot(v2));
    let det = a * d - b * b;
    if !(det.abs() > 1e-14 * a * d) {
        return Err(Error::Frame("degenerate coframe: structure-equation system is singular".into()));
    }
    let (r1, r2) = (v1.dot(r), v2.dot(r));
    Ok(((d * r1 - b * r2) / det, (a * r2 - b * r1) / det))
}

struct FirstOrder {
    omega: Vector3<f64>,
    theta: Vector3<f64>,
    eta: Vector3<f64>,
    s: f64,
    res: [f64; 2],
}

/// eta and S from d(omega) = eta^theta and d(theta) = -eta^(omega + S theta).
fn first_order(model: &FinslerModel, q: &Vector3<f64>, cfg: &FdConfig) -> Result<FirstOrder> {
    let cof = |p: &Vector3<f64>| {
        let (w, t) = model.coframe(p);
        [w, t]
    };
    let [omega, theta] = cof(q);
    let [jw, jt] = jacobian(&cof, q, cfg);
    let (d_omega, d_theta) = (curl(&jw), curl(&jt));
    if !omega.iter().chain(theta.iter()).all(|v| v.is_finite()) || theta.norm() == 0.0 {
        return Err(Error::Frame(format!("coframe undefined at {q:?}")));
    }
    // eta = theta x d(omega)/|theta|^2 + mu theta solves eta x theta = d(omega) up to
    // the component of d(omega) along theta
    let eta0 = theta.cross(&d_omega) / theta.norm_squared();
    let v1 = -theta.cross(&omega);
    let v2 = -d_omega;
    let rhs = d_theta + eta0.cross(&omega);
    let (mu, s) = lsq2(&v1, &v2, &rhs)?;
    let eta = eta0 + theta * mu;
    let res_omega = (d_omega - eta.cross(&theta)).norm();
    let res_theta = (d_theta + eta.cross(&(omega + theta * s))).norm();
    Ok(FirstOrder { omega, theta, eta, s, res: [res_omega, res_theta] })
}

/// Frame data from finite differences of the coframe with the default step.
pub fn frame_and_coframe(model: &FinslerModel, u: UPoint) -> Result<FrameData> {
    frame_and_coframe_with(model, u, &FdConfig::default())
}

/// Frame data from finite differences of the coframe.
///
/// omega and theta come from the norm; eta, S, C, K are the least-squares
/// solutions of the three structure equations, whose exterior derivatives
/// are evaluated by central differences (nested once for d(eta)).
pub fn frame_and_coframe_with(model: &FinslerModel, u: UPoint, cfg: &FdConfig) -> Result<FrameData> {
    let q = u.as_vec();
    let fo = first_order(model, &q, cfg)?;
    let eta_field = |p: &Vector3<f64>| [first_order(model, p, cfg).map(|f| f.eta).unwrap_or(Vector3::repeat(f64::NAN))];
    let [je] = jacobian(&eta_field, &q, cfg);
    let d_eta = curl(&je);
    let w1 = -fo.omega.cross(&fo.theta);
    let w2 = -fo.eta.cross(&fo.theta);
    let (k, c) = lsq2(&w1, &w2, &d_eta)?;
    let res_eta = (d_eta + (fo.omega * k + fo.eta * c).cross(&fo.theta)).norm();
    assemble(fo.omega, fo.theta, fo.eta, fo.s, c, k, [fo.res[0], fo.res[1], res_eta])
}

fn assemble(
    omega: Vector3<f64>,
    theta: Vector3<f64>,
    eta: Vector3<f64>,
    s: f64,
    c: f64,
    k: f64,
    residuals: [f64; 3],
) -> Result<FrameData> {
    let co = Matrix3::from_rows(&[omega.transpose(), theta.transpose(), eta.transpose()]);
    let inv = co
        .try_inverse()
        .filter(|m| m.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::Frame("coframe is not invertible".into()))?;
    if ![s, c, k].iter().all(|v| v.is_finite()) {
        return Err(Error::Frame("structure scalars are not finite".into()));
    }
    Ok(FrameData {
        x_vec: inv.column(0).into_owned(),
        y_vec: inv.column(1).into_owned(),
        z_vec: inv.column(2).into_owned(),
        omega,
        theta,
        eta,
        s,
        c,
        k,
        residuals,
    })
}

/// Closed-form frame of the hyperbolic plane.
pub fn hyperbolic_frame(u: UPoint) -> FrameData {
    let (s, c) = u.phi.sin_cos();
    let y = u.y;
    FrameData {
        x_vec: Vector3::new(y * c, y * s, -c),
        y_vec: Vector3::new(-y * s, y * c, s),
        z_vec: Vector3::new(0.0, 0.0, 1.0),
        omega: Vector3::new(c / y, s / y, 0.0),
        theta: Vector3::new(-s / y, c / y, 0.0),
        eta: Vector3::new(1.0 / y, 0.0, 1.0),
        s: 0.0,
        c: 0.0,
        k: -1.0,
        residuals: [0.0; 3],
    }
}

/// Frame vectors (X, Y, Z) only; needs first derivatives of the coframe
/// and none of the curvature data.
pub fn frame_vectors(model: &FinslerModel, u: UPoint) -> Result<[Vector3<f64>; 3]> {
    if model.is_hyperbolic() {
        let f = hyperbolic_frame(u);
        return Ok([f.x_vec, f.y_vec, f.z_vec]);
    }
    let fo = first_order(model, &u.as_vec(), &FdConfig::accurate())?;
    let f = assemble(fo.omega, fo.theta, fo.eta, fo.s, 0.0, 0.0, [0.0; 3])?;
    Ok([f.x_vec, f.y_vec, f.z_vec])
}

impl FinslerModel {
    /// Most accurate frame available: closed form for the hyperbolic plane,
    /// Richardson-refined differences otherwise.
    pub fn frame(&self, u: UPoint) -> Result<FrameData> {
        if self.is_hyperbolic() {
            Ok(hyperbolic_frame(u))
        } else {
            frame_and_coframe_with(self, u, &FdConfig::accurate())
        }
    }
}
