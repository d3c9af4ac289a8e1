use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::flows::jacobi_state;
use crate::metrics::{FinslerModel, UPoint};
use crate::ode::{solve, OdeOptions};

/// A point (phi, t) of the fibre S^1 x R; phi is not reduced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberPoint {
    pub phi: f64,
    pub t: f64,
}

impl FiberPoint {
    /// Distance on the fibre, with the angle taken mod 2 pi.
    pub fn distance(&self, other: &FiberPoint) -> f64 {
        let dphi = (self.phi - other.phi + PI).rem_euclid(TAU) - PI;
        dphi.hypot(self.t - other.t)
    }
}

type PathSample = Result<((f64, f64), (f64, f64))>;
type CurveFn = dyn Fn(f64) -> PathSample + Send + Sync;

/// A path in the half-plane.
pub enum SurfacePath {
    /// straight segments between consecutive vertices
    Polyline(Vec<(f64, f64)>),
    /// parameter range [0, s_end]; the closure returns (position, velocity)
    Smooth { s_end: f64, curve: Box<CurveFn> },
}

impl fmt::Debug for SurfacePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfacePath::Polyline(v) => f.debug_tuple("Polyline").field(v).finish(),
            SurfacePath::Smooth { s_end, .. } => f.debug_struct("Smooth").field("s_end", s_end).finish_non_exhaustive(),
        }
    }
}

impl SurfacePath {
    pub fn smooth<F>(s_end: f64, curve: F) -> Self
    where
        F: Fn(f64) -> Result<((f64, f64), (f64, f64))> + Send + Sync + 'static,
    {
        SurfacePath::Smooth { s_end, curve: Box::new(curve) }
    }

    /// Closed axis-parallel square with lower-left corner (x0, y0).
    pub fn square(x0: f64, y0: f64, side: f64) -> Self {
        SurfacePath::Polyline(vec![(x0, y0), (x0 + side, y0), (x0 + side, y0 + side), (x0, y0 + side), (x0, y0)])
    }

    pub fn start(&self) -> Result<(f64, f64)> {
        match self {
            SurfacePath::Polyline(v) => v.first().copied().ok_or_else(|| Error::Validation("empty polyline".into())),
            SurfacePath::Smooth { curve, .. } => Ok(curve(0.0)?.0),
        }
    }

    pub fn is_closed(&self) -> Result<bool> {
        match self {
            SurfacePath::Polyline(v) => Ok(v.first() == v.last()),
            SurfacePath::Smooth { s_end, curve } => {
                let (a, b) = (curve(0.0)?.0, curve(*s_end)?.0);
                Ok((a.0 - b.0).hypot(a.1 - b.1) < 1e-12)
            }
        }
    }
}

/// d(phi, t)/ds of the horizontal lift over the point `pos` moving with
/// velocity `vel`.
///
/// The lift W has omega(W) = a and theta(W) = b fixed by the base velocity;
/// alpha = eta_bar ^ theta_bar with eta_bar = -(f1' omega + f2' eta) and
/// theta_bar = theta + dt + c omega + e eta, and W lies in the kernel of both.
fn lift_rate(model: &FinslerModel, pos: (f64, f64), vel: (f64, f64), fp: [f64; 2], tol: f64) -> Result<[f64; 2]> {
    if !(pos.1 > crate::flows::Y_MIN) {
        return Err(Error::Transport(format!("path leaves the half-plane at {pos:?}")));
    }
    let u = UPoint::from_vec(&Vector3::new(pos.0, pos.1, fp[0]));
    let frame = model.frame(u)?;
    let j = jacobi_state(model, u, fp[1], tol)?;
    let v = Vector3::new(vel.0, vel.1, 0.0);
    let (a, b, eta_v) = (frame.omega.dot(&v), frame.theta.dot(&v), frame.eta.dot(&v));
    let eta_phi = frame.eta[2];
    if j.f2p.abs() < 1e-300 || eta_phi.abs() < 1e-12 {
        return Err(Error::Transport(format!("horizontal lift is singular at {u:?}, t = {}", fp[1])));
    }
    let eta_w = -j.f1p * a / j.f2p;
    let t_dot = -(b + j.theta_c * a + j.theta_e * eta_w);
    let phi_dot = (eta_w - eta_v) / eta_phi;
    Ok([phi_dot, t_dot])
}

/// Parallel transport of a fibre point along a path.
pub fn parallel_transport(model: &FinslerModel, path: &SurfacePath, start: FiberPoint, tol: f64) -> Result<FiberPoint> {
    if !(tol > 0.0) {
        return Err(Error::Validation("transport tolerance must be positive".into()));
    }
    let inner = (tol * 1e-2).max(1e-14);
    let opts = OdeOptions::new(tol);
    let mut state = [start.phi, start.t];
    let run = |state: [f64; 2], s_end: f64, at: &dyn Fn(f64) -> PathSample| -> Result<[f64; 2]> {
        let rhs = |s: f64, fp: &[f64; 2]| {
            let (pos, vel) = at(s)?;
            lift_rate(model, pos, vel, *fp, inner)
        };
        let sol = solve(rhs, 0.0, state, s_end, &opts)?;
        if let Some(t) = sol.truncated_at {
            return Err(Error::Transport(format!("transport stopped at s = {t}")));
        }
        Ok(sol.last())
    };
    match path {
        SurfacePath::Polyline(v) => {
            for w in v.windows(2) {
                let (p, q) = (w[0], w[1]);
                if p == q {
                    continue;
                }
                let vel = (q.0 - p.0, q.1 - p.1);
                let at = move |s: f64| Ok(((p.0 + s * vel.0, p.1 + s * vel.1), vel));
                state = run(state, 1.0, &at)?;
            }
        }
        SurfacePath::Smooth { s_end, curve } => {
            state = run(state, *s_end, curve.as_ref())?;
        }
    }
    Ok(FiberPoint { phi: state[0], t: state[1] })
}

/// `n` fibre points spread over the circle and over t in [-1, 1].
pub fn default_probes(n: usize) -> Vec<FiberPoint> {
    (0..n)
        .map(|k| {
            let s = (k as f64 + 0.5) / n as f64;
            FiberPoint { phi: TAU * s, t: (TAU * 3.0 * s).sin() }
        })
        .collect()
}

/// Largest fibre displacement of the probes after transport around a closed loop.
pub fn holonomy_loop(model: &FinslerModel, lp: &SurfacePath, probes: &[FiberPoint], tol: f64) -> Result<f64> {
    if !lp.is_closed()? {
        return Err(Error::Validation("holonomy loop is not closed".into()));
    }
    let mut worst: f64 = 0.0;
    for p in probes {
        let end = parallel_transport(model, lp, *p, tol)?;
        worst = worst.max(end.distance(p));
    }
    Ok(worst)
}
