use nalgebra::{Matrix4, Vector3, Vector4};

use super::{exterior_derivative, wedge4};
use crate::error::{Error, Result};
use crate::flows::jacobi_state;
use crate::metrics::{FinslerModel, UPoint};

/// Step of the differences taken in (x, y, phi, t) for the averaged form.
const FD_STEP: f64 = 1e-3;

/// Solution tau of f2(tau) = -f2(t) on the Y-line through an anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauRoot {
    pub tau: f64,
    /// |f2(tau) + f2(t)| at the returned root
    pub residual: f64,
    /// f2'(tau), used for the derivative tau' = -f2'(t)/f2'(tau)
    pub f2p_tau: f64,
    pub f1_tau: f64,
    pub f1p_tau: f64,
}

/// The fibre involution t -> tau(t), found by Newton steps kept inside a
/// bisection bracket until the bracket or the step is below 1e-12.
pub fn tau_at(model: &FinslerModel, u: UPoint, t: f64, tol: f64) -> Result<TauRoot> {
    let at = |s: f64| jacobi_state(model, u, s, tol);
    if t == 0.0 {
        return Ok(TauRoot { tau: 0.0, residual: 0.0, f2p_tau: -1.0, f1_tau: 1.0, f1p_tau: 0.0 });
    }
    let target = -at(t)?.f2;
    // g(s) = f2(s) - target is decreasing; keep g(a) > 0 >= g(b)
    let g = |s: f64| at(s).map(|j| (j.f2 - target, j));
    let (mut a, mut b) = if t > 0.0 { (-t, 0.0) } else { (0.0, -t) };
    loop {
        let far = if t > 0.0 { a } else { b };
        let (gv, _) = g(far)?;
        let ok = if t > 0.0 { gv > 0.0 } else { gv <= 0.0 };
        if ok {
            break;
        }
        if far.abs() > 64.0 {
            return Err(Error::Range(format!("f2 does not reach {target} on the sampled range")));
        }
        if t > 0.0 {
            b = a;
            a *= 2.0;
        } else {
            a = b;
            b *= 2.0;
        }
    }
    let mut s = -t;
    s = s.clamp(a, b);
    for _ in 0..200 {
        let (gv, j) = g(s)?;
        if gv == 0.0 {
            return Ok(TauRoot { tau: s, residual: 0.0, f2p_tau: j.f2p, f1_tau: j.f1, f1p_tau: j.f1p });
        }
        if gv > 0.0 {
            a = s;
        } else {
            b = s;
        }
        let newton = s - gv / j.f2p;
        let next = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
        let step = (next - s).abs();
        if step < 1e-12 || b - a < 1e-12 {
            let (gv, j) = g(next)?;
            return Ok(TauRoot { tau: next, residual: gv.abs(), f2p_tau: j.f2p, f1_tau: j.f1, f1p_tau: j.f1p });
        }
        s = next;
    }
    Err(Error::Range(format!("tau iteration did not converge for t = {t}")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionSample {
    pub t: f64,
    pub tau: f64,
    pub tau_residual: f64,
    pub f1: f64,
    pub f1_tau: f64,
    /// F1 = (f1(t) + f1(tau(t)))/2
    pub big_f1: f64,
    pub big_f1_prime: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionData {
    pub anchor: UPoint,
    pub samples: Vec<ReductionSample>,
    pub lambda_at_zero: f64,
    /// size of the contractions of X and Y with the averaged 2-form at t = 0
    pub horizontality_residual_at_0: f64,
}

/// The forms entering the average of alpha1 = alpha and alpha2 = -tau^*alpha,
/// as coordinate matrices in (x, y, phi, t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedForm {
    pub alpha0: Matrix4<f64>,
    pub alpha1: Matrix4<f64>,
    pub alpha2: Matrix4<f64>,
    /// alpha1^alpha2 = 2 lambda alpha0^alpha1
    pub lambda: f64,
    pub average: Matrix4<f64>,
}

fn lift(v: &Vector3<f64>) -> Vector4<f64> {
    Vector4::new(v[0], v[1], v[2], 0.0)
}

/// Averaged connection at (u, t), with exterior derivatives of the
/// potentials f1 omega + f2 eta and -(f1(tau) omega - f2 eta) by differences.
pub fn averaged_form(model: &FinslerModel, u: UPoint, t: f64, tol: f64) -> Result<AveragedForm> {
    let p = Vector4::new(u.x, u.y, u.phi, t);
    let point = |q: &Vector4<f64>| UPoint::from_vec(&Vector3::new(q[0], q[1], q[2]));
    let beta1 = |q: &Vector4<f64>| -> Result<Vector4<f64>> {
        let v = point(q);
        let f = model.frame(v)?;
        let j = jacobi_state(model, v, q[3], tol)?;
        Ok(lift(&(f.omega * j.f1 + f.eta * j.f2)))
    };
    let beta2 = |q: &Vector4<f64>| -> Result<Vector4<f64>> {
        let v = point(q);
        let f = model.frame(v)?;
        let j = jacobi_state(model, v, q[3], tol)?;
        let r = tau_at(model, v, q[3], tol)?;
        Ok(lift(&(f.eta * j.f2 - f.omega * r.f1_tau)))
    };
    let alpha1 = exterior_derivative(beta1, &p, FD_STEP)?;
    let alpha2 = exterior_derivative(beta2, &p, FD_STEP)?;
    let f = model.frame(u)?;
    let (w, th) = (lift(&f.omega), lift(&f.theta));
    let alpha0 = w * th.transpose() - th * w.transpose();
    let denom = 2.0 * wedge4(&alpha0, &alpha1);
    if denom.abs() < 1e-300 {
        return Err(Error::Frame("alpha0 ^ alpha1 vanishes".into()));
    }
    let lambda = wedge4(&alpha1, &alpha2) / denom;
    Ok(AveragedForm { alpha0, alpha1, alpha2, lambda, average: alpha1 + alpha2 - alpha0 * lambda })
}

/// Involution, half-sum F1 and averaged-connection checks on the Y-line
/// through `anchor`, with `n` samples of t in [0, t_max].
pub fn so_reduction(model: &FinslerModel, anchor: UPoint, t_max: f64, n: usize, tol: f64) -> Result<ReductionData> {
    if !(t_max > 0.0) || n == 0 {
        return Err(Error::Validation("reduction needs t_max > 0 and at least one sample".into()));
    }
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = t_max * k as f64 / n as f64;
        let j = jacobi_state(model, anchor, t, tol)?;
        let r = tau_at(model, anchor, t, tol)?;
        let tau_p = -j.f2p / r.f2p_tau;
        samples.push(ReductionSample {
            t,
            tau: r.tau,
            tau_residual: r.residual,
            f1: j.f1,
            f1_tau: r.f1_tau,
            big_f1: 0.5 * (j.f1 + r.f1_tau),
            big_f1_prime: 0.5 * (r.f1p_tau * tau_p + j.f1p),
        });
    }
    let avg = averaged_form(model, anchor, 0.0, tol)?;
    let f = model.frame(anchor)?;
    let res = |v: &Vector3<f64>| (lift(v).transpose() * avg.average).norm();
    let horizontality = res(&f.x_vec).max(res(&f.y_vec));
    Ok(ReductionData { anchor, samples, lambda_at_zero: avg.lambda, horizontality_residual_at_0: horizontality })
}
