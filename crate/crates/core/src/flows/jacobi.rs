use nalgebra::Vector3;

use super::Y_MIN;
use crate::error::{Error, Result};
use crate::metrics::{FinslerModel, UPoint};
use crate::ode::{solve, OdeOptions, OdeSolution};
use crate::report::CsvTable;

/// Jacobi data at flow time t along the Y-line through an anchor.
///
/// `theta_c`, `theta_e` are the coefficients of omega and eta in the pulled
/// back theta; they vanish for Riemannian metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiState {
    pub t: f64,
    pub point: UPoint,
    pub f1: f64,
    pub f1p: f64,
    pub f2: f64,
    pub f2p: f64,
    pub theta_c: f64,
    pub theta_e: f64,
}

impl JacobiState {
    fn from_raw(t: f64, s: &[f64; 9]) -> Self {
        JacobiState {
            t,
            point: UPoint::from_vec(&Vector3::new(s[0], s[1], s[2])),
            f1: s[3],
            f1p: s[4],
            f2: s[5],
            f2p: s[6],
            theta_c: s[7],
            theta_e: s[8],
        }
    }

    /// f1 f2' - f1' f2, constant when C = 0.
    pub fn wronskian(&self) -> f64 {
        self.f1 * self.f2p - self.f1p * self.f2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiSample {
    pub state: JacobiState,
    pub c_bar: f64,
    pub k_bar: f64,
    pub s_bar: f64,
}

/// Solutions of f'' - C f' + K f = 0 along a Y-line with f1 = 1, f1' = 0 and
/// f2 = 0, f2' = -1 at the anchor.
#[derive(Debug, Clone)]
pub struct JacobiPair {
    pub anchor: UPoint,
    pub tolerance: f64,
    /// accepted integration nodes, t increasing
    pub samples: Vec<JacobiSample>,
    forward: OdeSolution<9>,
    backward: OdeSolution<9>,
}

impl JacobiPair {
    /// Dense output at any t in the integrated range.
    pub fn at(&self, t: f64) -> Option<JacobiState> {
        let sol = if t >= 0.0 { &self.forward } else { &self.backward };
        sol.eval(t).map(|s| JacobiState::from_raw(t, &s))
    }

    pub fn range(&self) -> (f64, f64) {
        (self.backward.t_end(), self.forward.t_end())
    }

    /// CSV with header `t,x,y,phi,f1,f2,f1p,f2p,C,K`.
    pub fn to_csv(&self) -> String {
        let mut table = CsvTable::new(&["t", "x", "y", "phi", "f1", "f2", "f1p", "f2p", "C", "K"]);
        for s in &self.samples {
            let j = &s.state;
            table.push(&[j.t, j.point.x, j.point.y, j.point.phi, j.f1, j.f2, j.f1p, j.f2p, s.c_bar, s.k_bar]);
        }
        table.render()
    }
}

fn rhs(model: &FinslerModel, t: f64, s: &[f64; 9]) -> Result<[f64; 9]> {
    if !(s[1] > Y_MIN) {
        return Err(Error::DomainExit { t });
    }
    let f = model.frame(UPoint::from_vec(&Vector3::new(s[0], s[1], s[2])))?;
    if !(f.k < 0.0) {
        return Err(Error::CurvatureSign { k: f.k, t });
    }
    let y = f.y_vec;
    Ok([y[0], y[1], y[2], s[4], f.c * s[4] - f.k * s[3], s[6], f.c * s[6] - f.k * s[5], -f.s * s[4], -f.s * s[6]])
}

fn initial(anchor: UPoint) -> [f64; 9] {
    [anchor.x, anchor.y, anchor.phi, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0]
}

fn integrate(model: &FinslerModel, anchor: UPoint, t: f64, tol: f64) -> Result<OdeSolution<9>> {
    if !(tol > 0.0) || !t.is_finite() {
        return Err(Error::Validation("Jacobi solve needs tol > 0 and a finite range".into()));
    }
    let sol = solve(|t, s: &[f64; 9]| rhs(model, t, s), 0.0, initial(anchor), t, &OdeOptions::new(tol))?;
    match sol.truncated_at {
        Some(t) => Err(Error::DomainExit { t }),
        None => Ok(sol),
    }
}

/// Jacobi data at a single time t.
pub fn jacobi_state(model: &FinslerModel, anchor: UPoint, t: f64, tol: f64) -> Result<JacobiState> {
    let sol = integrate(model, anchor, t, tol)?;
    Ok(JacobiState::from_raw(t, &sol.last()))
}

/// Integrates the Y-flow together with the Jacobi pair over [t_lo, t_hi],
/// which must contain 0.
pub fn jacobi(model: &FinslerModel, anchor: UPoint, range: (f64, f64), tol: f64) -> Result<JacobiPair> {
    let (lo, hi) = range;
    if !(lo <= 0.0 && hi >= 0.0) {
        return Err(Error::Validation(format!("Jacobi range [{lo}, {hi}] must contain 0")));
    }
    let forward = integrate(model, anchor, hi, tol)?;
    let backward = integrate(model, anchor, lo, tol)?;
    let mut nodes: Vec<(f64, [f64; 9])> = backward.t.iter().copied().zip(backward.y.iter().copied()).skip(1).collect();
    nodes.reverse();
    nodes.extend(forward.t.iter().copied().zip(forward.y.iter().copied()));
    let mut samples = Vec::with_capacity(nodes.len());
    for (t, s) in nodes {
        let state = JacobiState::from_raw(t, &s);
        let f = model.frame(state.point)?;
        samples.push(JacobiSample { state, c_bar: f.c, k_bar: f.k, s_bar: f.s });
    }
    Ok(JacobiPair { anchor, tolerance: tol, samples, forward, backward })
}
