//! Flat symplectic connections built from negatively curved Riemannian and
//! Finsler metrics on the upper half-plane.
//!
//! The crate computes the canonical frame on the unit circle bundle, flows
//! and Jacobi pairs along it, the connection 2-form with its parallel
//! transport, Crofton lengths, first-order deformations, and an exact
//! rational-plus-pi kernel for the pairing coefficient.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod connection;
pub mod deformation;
pub mod error;
pub mod exact;
pub mod flows;
pub mod hyperbolic;
pub mod metrics;
pub mod ode;
pub mod quad;
pub mod report;

pub use error::{Error, Result};
