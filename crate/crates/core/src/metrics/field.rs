use crate::error::{Error, Result};

/// Value, gradient and Hessian of a scalar field at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl Jet {
    pub fn laplacian(&self) -> f64 {
        self.dxx + self.dyy
    }
}

/// Closed-form scalar fields on the half-plane.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    Const(f64),
    /// amp * (1 + px x + py y) * exp(-((x-x0)^2 + (y-y0)^2) / r^2)
    Bump {
        amp: f64,
        px: f64,
        py: f64,
        x0: f64,
        y0: f64,
        r: f64,
    },
}

impl ScalarField {
    pub fn zero() -> Self {
        ScalarField::Const(0.0)
    }

    pub fn bump(amp: f64, px: f64, py: f64, x0: f64, y0: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Validation(format!("bump radius must be positive, got {r}")));
        }
        Ok(ScalarField::Bump { amp, px, py, x0, y0, r })
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.jet(x, y).v
    }

    pub fn jet(&self, x: f64, y: f64) -> Jet {
        match *self {
            ScalarField::Const(c) => Jet { v: c, ..Jet::default() },
            ScalarField::Bump { amp, px, py, x0, y0, r } => {
                let r2 = r * r;
                let (ex, ey) = (x - x0, y - y0);
                let b = (-(ex * ex + ey * ey) / r2).exp();
                let bx = -2.0 * ex / r2 * b;
                let by = -2.0 * ey / r2 * b;
                let bxx = (4.0 * ex * ex / (r2 * r2) - 2.0 / r2) * b;
                let byy = (4.0 * ey * ey / (r2 * r2) - 2.0 / r2) * b;
                let bxy = 4.0 * ex * ey / (r2 * r2) * b;
                let p = amp * (1.0 + px * x + py * y);
                let (ppx, ppy) = (amp * px, amp * py);
                Jet {
                    v: p * b,
                    dx: ppx * b + p * bx,
                    dy: ppy * b + p * by,
                    dxx: 2.0 * ppx * bx + p * bxx,
                    dxy: ppx * by + ppy * bx + p * bxy,
                    dyy: 2.0 * ppy * by + p * byy,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_derivatives_match_differences() {
        let f = ScalarField::bump(0.3, 0.5, -0.2, 0.1, 1.2, 0.8).unwrap();
        let h = 1e-5;
        for &(x, y) in &[(0.0, 1.0), (0.4, 0.7), (-0.5, 1.6)] {
            let j = f.jet(x, y);
            let dx = (f.value(x + h, y) - f.value(x - h, y)) / (2.0 * h);
            let dy = (f.value(x, y + h) - f.value(x, y - h)) / (2.0 * h);
            assert!((dx - j.dx).abs() < 1e-9 && (dy - j.dy).abs() < 1e-9);
            let dxx = (f.jet(x + h, y).dx - f.jet(x - h, y).dx) / (2.0 * h);
            let dxy = (f.jet(x, y + h).dx - f.jet(x, y - h).dx) / (2.0 * h);
            let dyy = (f.jet(x, y + h).dy - f.jet(x, y - h).dy) / (2.0 * h);
            assert!((dxx - j.dxx).abs() < 1e-8 && (dxy - j.dxy).abs() < 1e-8 && (dyy - j.dyy).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(ScalarField::bump(1.0, 0.0, 0.0, 0.0, 1.0, 0.0).is_err());
    }
}
