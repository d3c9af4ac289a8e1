use super::HkDeformation;
use crate::error::{Error, Result};
use crate::hyperbolic::y_flow;
use crate::metrics::UPoint;
use crate::ode::{solve, OdeOptions};
use crate::quad;
use crate::report::CsvTable;

/// h(u, t) = df1 cosh t + df2 sinh t for the variation (dK, dC) of the
/// curvature invariants.
///
/// h solves Y h - h' = dK sinh t cosh t + dC sinh^2 t with h(u, 0) = 0, so
/// along the characteristic through (u, t)
/// h(u, t) = -int_0^t [dK sinh r cosh r + dC sinh^2 r](psi_{t-r} u) dr
/// with psi the Y flow. The quadrature tolerance is relative to cosh^2 t,
/// the growth rate of h.
pub fn transport_h<K, C>(delta_k: K, delta_c: C, u: UPoint, t: f64, tol: f64) -> Result<f64>
where
    K: Fn(UPoint) -> f64,
    C: Fn(UPoint) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::Validation(format!("tolerance {tol} must be positive")));
    }
    let integrand = |r: f64| {
        let p = y_flow(u, t - r);
        let (s, c) = (r.sinh(), r.cosh());
        delta_k(p) * s * c + delta_c(p) * s * s
    };
    Ok(-quad::integrate(integrand, 0.0, t, tol * t.cosh().powi(2))?.value)
}

/// (df1, df2) at (u, t) from the variation equations
/// Y df1 - df1' = dK sinh t + df2, Y df2 - df2' = df1 + dC sinh t,
/// integrated along the characteristic r -> (psi_{t-r} u, r).
pub fn delta_f<K, C>(delta_k: K, delta_c: C, u: UPoint, t: f64, tol: f64) -> Result<(f64, f64)>
where
    K: Fn(UPoint) -> f64,
    C: Fn(UPoint) -> f64,
{
    let rhs = |r: f64, g: &[f64; 2]| -> Result<[f64; 2]> {
        let p = y_flow(u, t - r);
        let s = r.sinh();
        Ok([-delta_k(p) * s - g[1], -g[0] - delta_c(p) * s])
    };
    let sol = solve(rhs, 0.0, [0.0, 0.0], t, &OdeOptions::new(tol))?;
    let g = sol.last();
    Ok((g[0], g[1]))
}

/// Coefficients (omega, theta) of the class representative
/// (df1 + df2 tanh t) omega + cosh t d(omega) - sinh t d(eta), restricted
/// to omega and theta.
pub fn class_representative(hk: &HkDeformation, u: UPoint, t: f64, tol: f64) -> Result<(f64, f64)> {
    let h = transport_h(|p| hk.delta_k(p), |p| hk.delta_c(p), u, t, tol)?;
    let s = hk.sample(u, Default::default());
    let global = h / t.cosh();
    let omega = global + s.u * t.cosh() - (hk.xv(u) - hk.yu(u)) * t.sinh() + (s.w - s.u) * t.tanh();
    let theta = s.v * t.cosh() - hk.xw(u) * t.sinh();
    Ok((omega, theta))
}

/// Field samples with header `x,y,phi,t,u,v,w,dC,dK,h`.
pub fn deformation_table(hk: &HkDeformation, points: &[(UPoint, f64)], tol: f64) -> Result<CsvTable> {
    let mut table = CsvTable::new(&["x", "y", "phi", "t", "u", "v", "w", "dC", "dK", "h"]);
    for &(p, t) in points {
        let s = hk.sample(p, Default::default());
        let h = transport_h(|q| hk.delta_k(q), |q| hk.delta_c(q), p, t, tol)?;
        table.push(&[p.x, p.y, p.phi, t, s.u, s.v, s.w, s.delta_c, s.delta_k, h]);
    }
    Ok(table)
}
