//! First-order deformations of the hyperbolic connection.
//!
//! Sign convention: [`cr_field`] returns h = a(z) y^m e^{i m phi}, which
//! satisfies (X + iY) h = 0 and Z h = +i m h. A CR function of weight -m
//! (Z h = -i m h) is obtained by conjugating the phase; the CR deformations
//! below use b1 - i b2 = a(z) y^{-m} e^{-i m phi}, the weight for which the
//! profile (cosh t)^{-(m+1)} closes.

mod checks;
mod cr;
mod hk;
mod holdiff;
mod symbolic;
mod transport;

pub use checks::{
    circle_integral, lie_triviality_residual, parity_and_orthogonality_checks, CircleChecks, SurfaceField,
};
pub use cr::{closure_residual, closure_residual_fields, cr_field, d_a_scalar, CrDeformation};
pub use hk::{hk_variation, invariant_variation_fd, DeformationField, HkDeformation, InvariantVariation};
pub use holdiff::HolDiff;
pub use symbolic::Expr;
pub use transport::{class_representative, deformation_table, delta_f, transport_h};

use std::ops::{Add, Mul, Sub};

use nalgebra::Vector3;

use crate::flows::FrameField;
use crate::hyperbolic::{geodesic_flow, y_flow};
use crate::metrics::UPoint;

/// Default step for frame derivatives.
pub const FD_STEP: f64 = 1e-4;

/// Flow of a hyperbolic frame field for time s, in closed form.
pub fn frame_flow(field: FrameField, u: UPoint, s: f64) -> UPoint {
    match field {
        FrameField::X => geodesic_flow(u, s),
        FrameField::Y => y_flow(u, s),
        FrameField::Z => UPoint::from_vec(&Vector3::new(u.x, u.y, u.phi + s)),
    }
}

/// Central differences along the exact flows of the hyperbolic frame, so
/// that second differences approximate X^2 f rather than a Hessian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameDiff {
    pub h: f64,
}

impl Default for FrameDiff {
    fn default() -> Self {
        FrameDiff { h: FD_STEP }
    }
}

impl FrameDiff {
    pub fn new(h: f64) -> Self {
        FrameDiff { h }
    }

    pub fn d1<T, F>(&self, f: F, field: FrameField, u: UPoint) -> T
    where
        T: Copy + Sub<Output = T> + Mul<f64, Output = T>,
        F: Fn(UPoint) -> T,
    {
        let h = self.h;
        (f(frame_flow(field, u, h)) - f(frame_flow(field, u, -h))) * (0.5 / h)
    }

    pub fn d2<T, F>(&self, f: F, field: FrameField, u: UPoint) -> T
    where
        T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
        F: Fn(UPoint) -> T,
    {
        let h = self.h;
        (f(frame_flow(field, u, h)) + f(frame_flow(field, u, -h)) - f(u) * 2.0) * (1.0 / (h * h))
    }
}

#[cfg(test)]
mod tests;
