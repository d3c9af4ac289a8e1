//! Adaptive Dormand-Prince 5(4) integration with cubic Hermite dense output.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// mixed absolute/relative local error bound per step
    pub tol: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn new(tol: f64) -> Self {
        OdeOptions { tol, h_min: 1e-12, max_steps: 200_000 }
    }
}

/// Accepted steps of an integration, with derivatives for dense output.
#[derive(Debug, Clone)]
pub struct OdeSolution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub dy: Vec<[f64; N]>,
    /// time at which the right-hand side reported leaving its domain
    pub truncated_at: Option<f64>,
}

impl<const N: usize> OdeSolution<N> {
    pub fn last(&self) -> [f64; N] {
        *self.y.last().expect("solution has its initial point")
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().expect("solution has its initial point")
    }

    /// Cubic Hermite interpolation between accepted steps.
    pub fn eval(&self, t: f64) -> Option<[f64; N]> {
        let n = self.t.len();
        let forward = self.t[n - 1] >= self.t[0];
        let key = |v: f64| if forward { v } else { -v };
        if key(t) < key(self.t[0]) - 1e-14 || key(t) > key(self.t[n - 1]) + 1e-14 {
            return None;
        }
        if n == 1 {
            return Some(self.y[0]);
        }
        let i = self.t.partition_point(|&s| key(s) <= key(t)).clamp(1, n - 1) - 1;
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (h00, h10) = (2.0 * s.powi(3) - 3.0 * s * s + 1.0, s.powi(3) - 2.0 * s * s + s);
        let (h01, h11) = (-2.0 * s.powi(3) + 3.0 * s * s, s.powi(3) - s * s);
        let mut out = [0.0; N];
        for (k, o) in out.iter_mut().enumerate() {
            *o = h00 * self.y[i][k] + h10 * h * self.dy[i][k] + h01 * self.y[i + 1][k] + h11 * h * self.dy[i + 1][k];
        }
        Some(out)
    }
}

/// Integrates y' = f(t, y) from t0 to t1 (either direction).
///
/// A right-hand side returning `Error::DomainExit` stops the integration and
/// yields a truncated solution; other errors are passed through.
pub fn solve<const N: usize, F>(mut f: F, t0: f64, y0: [f64; N], t1: f64, opts: &OdeOptions) -> Result<OdeSolution<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    if !(opts.tol > 0.0) {
        return Err(Error::Validation("tolerance must be positive".into()));
    }
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let k0 = f(t0, &y0)?;
    let mut sol = OdeSolution { t: vec![t0], y: vec![y0], dy: vec![k0], truncated_at: None };
    if span == 0.0 {
        return Ok(sol);
    }
    let (mut t, mut y, mut k1) = (t0, y0, k0);
    let mut h = (0.01 * span).min(0.1 * opts.tol.powf(0.2)).max(opts.h_min);
    let mut steps = 0;
    while dir * (t1 - t) > 1e-15 * span.max(1.0) {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Stiffness { t });
        }
        let last = h >= (t1 - t).abs();
        if last {
            h = (t1 - t).abs();
        }
        let hs = dir * h;
        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        let mut failed = None;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += hs * a * kj[i];
                    }
                }
            }
            match f(t + C[s] * hs, &ys) {
                Ok(v) => k[s] = v,
                Err(Error::DomainExit { .. }) => {
                    failed = Some(t + C[s] * hs);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(tf) = failed {
            // shrink towards the boundary; give up once the step is tiny
            if h <= opts.h_min * 4.0 {
                sol.truncated_at = Some(tf);
                return Ok(sol);
            }
            h *= 0.25;
            continue;
        }
        let mut y_new = y;
        for i in 0..N {
            y_new[i] += hs * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>();
        }
        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = hs * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let sc = opts.tol * (1.0 + y[i].abs().max(y_new[i].abs()));
            let r = e.abs() / sc;
            err = if r.is_nan() { f64::INFINITY } else { err.max(r) };
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.25;
            if h < opts.h_min {
                return Err(Error::Stiffness { t });
            }
            continue;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + hs };
            y = y_new;
            k1 = k[6];
            sol.t.push(t);
            sol.y.push(y);
            sol.dy.push(k1);
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= grow;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h < opts.h_min {
                return Err(Error::Stiffness { t });
            }
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let sol = solve(|_, y: &[f64; 1]| Ok([y[0]]), 0.0, [1.0], 2.0, &OdeOptions::new(1e-12)).unwrap();
        assert!((sol.last()[0] - 2f64.exp()).abs() < 1e-10);
        let mid = sol.eval(1.3).unwrap()[0];
        assert!((mid - 1.3f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn backward_harmonic() {
        let sol = solve(|_, y: &[f64; 2]| Ok([y[1], -y[0]]), 0.0, [0.0, 1.0], -3.0, &OdeOptions::new(1e-11)).unwrap();
        assert!((sol.last()[0] - (-3f64).sin()).abs() < 1e-9);
        assert!((sol.eval(-1.0).unwrap()[0] - (-1f64).sin()).abs() < 1e-8);
        assert!(sol.eval(0.5).is_none());
    }

    #[test]
    fn domain_exit_truncates() {
        let f = |t: f64, y: &[f64; 1]| {
            if t > 1.0 {
                Err(Error::DomainExit { t })
            } else {
                Ok([y[0]])
            }
        };
        let sol = solve(f, 0.0, [1.0], 3.0, &OdeOptions::new(1e-10)).unwrap();
        let tt = sol.truncated_at.unwrap();
        assert!(tt > 0.99 && tt < 1.01 && sol.t_end() <= 1.0);
    }

    #[test]
    fn blow_up_is_reported() {
        let r = solve(|_, y: &[f64; 1]| Ok([y[0] * y[0]]), 0.0, [1.0], 2.0, &OdeOptions::new(1e-10));
        assert!(matches!(r, Err(Error::Stiffness { .. })));
    }

    #[test]
    fn tolerance_halving_reproduces_endpoint() {
        let f = |_: f64, y: &[f64; 2]| Ok([y[1], -(y[0]).sin()]);
        let a = solve(f, 0.0, [1.0, 0.0], 5.0, &OdeOptions::new(1e-9)).unwrap().last();
        let b = solve(f, 0.0, [1.0, 0.0], 5.0, &OdeOptions::new(5e-10)).unwrap().last();
        assert!((a[0] - b[0]).abs() < 1e-8);
    }
}
