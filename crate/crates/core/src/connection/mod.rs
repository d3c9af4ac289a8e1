//! The flat symplectic connection on U x R: its 2-form, parallel transport,
//! holonomy, Crofton lengths and the reduction by the fibre involution.

mod crofton;
mod reduction;
mod transport;

pub use crofton::{crofton_measure, crofton_measure_with, CroftonResult, DEFAULT_MARGIN};
pub use reduction::{averaged_form, so_reduction, tau_at, ReductionData, ReductionSample, TauRoot};
pub use transport::{default_probes, holonomy_loop, parallel_transport, FiberPoint, SurfacePath};

use nalgebra::{Matrix4, Vector3, Vector4};

use crate::error::Result;
use crate::flows::{jacobi_state, JacobiState};
use crate::metrics::{FinslerModel, FrameData, UPoint};

/// Names of the 2-form components in the order stored by [`ConnectionForm`].
pub const ALPHA_BASIS: [&str; 6] = ["omega^theta", "omega^eta", "omega^dt", "theta^eta", "theta^dt", "eta^dt"];

/// The connection 2-form at a point (u, t) of U x R.
///
/// alpha = d(f1 omega + f2 eta) = -(f1' omega + f2' eta)^(theta + dt + c omega + e eta)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionForm {
    pub point: UPoint,
    pub t: f64,
    /// coefficients on [`ALPHA_BASIS`]
    pub components: [f64; 6],
    /// -f2', the density of the restriction dt^eta to a fibre
    pub fiber_density: f64,
    /// (f1, f2), the potential being f1 omega + f2 eta
    pub potential: (f64, f64),
    pub jacobi: JacobiState,
    pub frame: FrameData,
}

impl ConnectionForm {
    pub fn from_parts(point: UPoint, frame: FrameData, j: JacobiState) -> Self {
        let (f1p, f2p, c, e) = (j.f1p, j.f2p, j.theta_c, j.theta_e);
        ConnectionForm {
            point,
            t: j.t,
            components: [-f1p, -f1p * e + f2p * c, -f1p, f2p, 0.0, -f2p],
            fiber_density: -f2p,
            potential: (j.f1, j.f2),
            jacobi: j,
            frame,
        }
    }

    /// Coefficient of omega^theta^eta^dt in alpha^alpha.
    pub fn self_wedge(&self) -> f64 {
        let a = &self.components;
        2.0 * (a[0] * a[5] - a[1] * a[4] + a[2] * a[3])
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// alpha as an antisymmetric matrix in coordinates (x, y, phi, t), so that
    /// alpha(V, W) = V^T A W.
    pub fn coordinate_matrix(&self) -> Matrix4<f64> {
        let lift = |v: &Vector3<f64>| Vector4::new(v[0], v[1], v[2], 0.0);
        let basis =
            [lift(&self.frame.omega), lift(&self.frame.theta), lift(&self.frame.eta), Vector4::new(0.0, 0.0, 0.0, 1.0)];
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut m = Matrix4::zeros();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            m += (basis[i] * basis[j].transpose() - basis[j] * basis[i].transpose()) * self.components[k];
        }
        m
    }

    /// Coordinate components of the potential f1 omega + f2 eta.
    pub fn potential_covector(&self) -> Vector4<f64> {
        let (f1, f2) = self.potential;
        let v = self.frame.omega * f1 + self.frame.eta * f2;
        Vector4::new(v[0], v[1], v[2], 0.0)
    }
}

/// Coefficient of dx^dy^dphi^dt in A^B for 2-forms given as antisymmetric
/// coordinate matrices.
pub fn wedge4(a: &Matrix4<f64>, b: &Matrix4<f64>) -> f64 {
    let c = |m: &Matrix4<f64>, i: usize, j: usize| m[(i, j)];
    c(a, 0, 1) * c(b, 2, 3) - c(a, 0, 2) * c(b, 1, 3) + c(a, 0, 3) * c(b, 1, 2) + c(a, 1, 2) * c(b, 0, 3)
        - c(a, 1, 3) * c(b, 0, 2)
        + c(a, 2, 3) * c(b, 0, 1)
}

/// Exterior derivative of a 1-form field on U x R by central differences
/// in (x, y, phi, t), with one Richardson refinement.
pub fn exterior_derivative<F>(beta: F, p: &Vector4<f64>, h: f64) -> Result<Matrix4<f64>>
where
    F: Fn(&Vector4<f64>) -> Result<Vector4<f64>>,
{
    let jac = |h: f64| -> Result<Matrix4<f64>> {
        // column j holds d beta / d p_j
        let mut m = Matrix4::zeros();
        for j in 0..4 {
            let (mut pp, mut pm) = (*p, *p);
            pp[j] += h;
            pm[j] -= h;
            let col = (beta(&pp)? - beta(&pm)?) / (2.0 * h);
            m.set_column(j, &col);
        }
        Ok(m)
    };
    let (coarse, fine) = (jac(h)?, jac(0.5 * h)?);
    let j = (fine * 4.0 - coarse) / 3.0;
    // (d beta)_{ij} = d_i beta_j - d_j beta_i, and j[(k, i)] = d_i beta_k
    Ok(j.transpose() - j)
}

/// Connection form at (u, t), with the Jacobi pair integrated to tolerance tol.
pub fn alpha_at(model: &FinslerModel, u: UPoint, t: f64, tol: f64) -> Result<ConnectionForm> {
    let j = jacobi_state(model, u, t, tol)?;
    Ok(ConnectionForm::from_parts(u, model.frame(u)?, j))
}

#[cfg(test)]
mod tests;
