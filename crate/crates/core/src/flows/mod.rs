//! Flows of the frame fields X, Y, Z on the unit circle bundle and the
//! Jacobi pair f1, f2 along Y-flow lines.

mod jacobi;

pub use jacobi::{jacobi, jacobi_state, JacobiPair, JacobiSample, JacobiState};

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::metrics::{frame_vectors, FinslerModel, UPoint};
use crate::ode::{solve, OdeOptions, OdeSolution};
use crate::report::CsvTable;

/// Points with y at or below this are treated as leaving the half-plane.
pub const Y_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameField {
    X,
    Y,
    Z,
}

impl FrameField {
    fn index(self) -> usize {
        match self {
            FrameField::X => 0,
            FrameField::Y => 1,
            FrameField::Z => 2,
        }
    }
}

impl fmt::Display for FrameField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FrameField::X => "X",
            FrameField::Y => "Y",
            FrameField::Z => "Z",
        };
        f.write_str(s)
    }
}

impl FromStr for FrameField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "X" | "x" => Ok(FrameField::X),
            "Y" | "y" => Ok(FrameField::Y),
            "Z" | "z" => Ok(FrameField::Z),
            other => Err(Error::Validation(format!("unknown frame field '{other}'"))),
        }
    }
}

/// Value of a frame field at raw coordinates, with the half-plane guard.
pub(crate) fn field_at(model: &FinslerModel, field: FrameField, t: f64, q: &[f64; 3]) -> Result<[f64; 3]> {
    if !(q[1] > Y_MIN) {
        return Err(Error::DomainExit { t });
    }
    let u = UPoint::from_vec(&Vector3::new(q[0], q[1], q[2]));
    let v = frame_vectors(model, u)?[field.index()];
    Ok([v[0], v[1], v[2]])
}

/// A sampled flow line of X, Y or Z.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub field: FrameField,
    pub tolerance: f64,
    /// (t, point) with t strictly increasing
    pub samples: Vec<(f64, UPoint)>,
    /// set when the flow left the half-plane before reaching t_end
    pub truncated_at: Option<f64>,
    solution: OdeSolution<3>,
}

impl Trajectory {
    /// Point at flow time t, by dense output.
    pub fn point_at(&self, t: f64) -> Option<UPoint> {
        self.solution.eval(t).map(|q| UPoint::from_vec(&Vector3::new(q[0], q[1], q[2])))
    }

    /// Point reached at the far end of the integration.
    pub fn end(&self) -> UPoint {
        let q = self.solution.last();
        UPoint::from_vec(&Vector3::new(q[0], q[1], q[2]))
    }

    /// Unwrapped angle at the far end (phi is not reduced mod 2 pi).
    pub fn end_raw(&self) -> [f64; 3] {
        self.solution.last()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated_at.is_some()
    }

    /// Largest deviation between consecutive samples and a re-integration of
    /// each segment at a hundredth of the tolerance.
    pub fn step_residual(&self, model: &FinslerModel) -> Result<f64> {
        let opts = OdeOptions::new(self.tolerance * 1e-2);
        let mut worst: f64 = 0.0;
        for i in 0..self.solution.t.len() - 1 {
            let (t0, t1) = (self.solution.t[i], self.solution.t[i + 1]);
            let f = |t: f64, q: &[f64; 3]| field_at(model, self.field, t, q);
            let end = solve(f, t0, self.solution.y[i], t1, &opts)?.last();
            for (e, y) in end.iter().zip(&self.solution.y[i + 1]) {
                worst = worst.max((e - y).abs());
            }
        }
        Ok(worst)
    }

    /// CSV with header `t,x,y,phi`.
    pub fn to_csv(&self) -> String {
        let mut table = CsvTable::new(&["t", "x", "y", "phi"]);
        for (t, p) in &self.samples {
            table.push(&[*t, p.x, p.y, p.phi]);
        }
        table.render()
    }
}

/// Integrates the flow of a frame field from `start` for time `t_end`
/// (negative times flow backwards) with an adaptive 5(4) pair.
pub fn flow(model: &FinslerModel, field: FrameField, start: UPoint, t_end: f64, tol: f64) -> Result<Trajectory> {
    if !(tol > 0.0) || !t_end.is_finite() {
        return Err(Error::Validation("flow needs tol > 0 and a finite end time".into()));
    }
    let f = |t: f64, q: &[f64; 3]| field_at(model, field, t, q);
    let q0 = [start.x, start.y, start.phi];
    let solution = solve(f, 0.0, q0, t_end, &OdeOptions::new(tol))?;
    let mut samples: Vec<(f64, UPoint)> = solution
        .t
        .iter()
        .zip(&solution.y)
        .map(|(&t, q)| (t, UPoint::from_vec(&Vector3::new(q[0], q[1], q[2]))))
        .collect();
    if t_end < 0.0 {
        samples.reverse();
    }
    Ok(Trajectory { field, tolerance: tol, samples, truncated_at: solution.truncated_at, solution })
}
