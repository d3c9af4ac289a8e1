//! Surface metric models on the upper half-plane and the canonical frame,
//! coframe and structure scalars on their unit circle bundles.

mod dual;
mod field;
mod frame;
mod model;

pub use dual::{dual_embedding, dual_norm, variation_of_l, DualPoint, Variation};
pub use field::{Jet, ScalarField};
pub use frame::{frame_and_coframe, frame_and_coframe_with, frame_vectors, hyperbolic_frame, FdConfig, FrameData};
pub use model::{FinslerEval, FinslerModel, ModelKind, PolarJet, Window, MAX_RANDERS_EPS};

use std::f64::consts::TAU;

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Point (x, y, phi) of the unit circle bundle; phi is the direction angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UPoint {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
}

impl UPoint {
    /// Validated point with phi reduced to [0, 2 pi).
    pub fn new(x: f64, y: f64, phi: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() || !phi.is_finite() {
            return Err(Error::Validation(format!("({x}, {y}, {phi}) is not a point of the bundle")));
        }
        Ok(UPoint { x, y, phi: phi.rem_euclid(TAU) })
    }

    /// Point from raw coordinates; phi is reduced but y is not checked.
    pub fn from_vec(q: &Vector3<f64>) -> Self {
        UPoint { x: q[0], y: q[1], phi: q[2].rem_euclid(TAU) }
    }

    pub fn as_vec(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.phi)
    }
}

#[cfg(test)]
mod tests;
