use std::collections::BTreeMap;

use num_complex::Complex64;

use super::HolDiff;
use crate::metrics::UPoint;

/// Finite sum of terms c a^{(p)}(z) y^j e^{i k phi}, closed under the
/// hyperbolic frame fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Expr {
    terms: BTreeMap<(usize, i32, i32), Complex64>,
}

impl Expr {
    /// a^{(p)}(z) y^j e^{i k phi}
    pub fn monomial(p: usize, j: i32, k: i32) -> Self {
        let mut e = Expr::default();
        e.add(p, j, k, Complex64::new(1.0, 0.0));
        e
    }

    fn add(&mut self, p: usize, j: i32, k: i32, c: Complex64) {
        if c != Complex64::new(0.0, 0.0) {
            *self.terms.entry((p, j, k)).or_default() += c;
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Expr::default();
        for (&(p, j, k), &c) in &self.terms {
            out.add(p, j, k, c * s);
        }
        out
    }

    pub fn plus(&self, o: &Expr) -> Self {
        let mut out = self.clone();
        for (&(p, j, k), &c) in &o.terms {
            out.add(p, j, k, c);
        }
        out
    }

    pub fn x(&self) -> Self {
        let i = Complex64::i();
        let mut out = Expr::default();
        for (&(p, j, k), &c) in &self.terms {
            let (jf, kf) = (j as f64, k as f64);
            out.add(p + 1, j + 1, k + 1, c);
            out.add(p, j, k + 1, -c * i * (0.5 * (jf + kf)));
            out.add(p, j, k - 1, c * i * (0.5 * (jf - kf)));
        }
        out
    }

    pub fn y(&self) -> Self {
        let i = Complex64::i();
        let mut out = Expr::default();
        for (&(p, j, k), &c) in &self.terms {
            let (jf, kf) = (j as f64, k as f64);
            out.add(p + 1, j + 1, k + 1, c * i);
            out.add(p, j, k + 1, c * (0.5 * (jf + kf)));
            out.add(p, j, k - 1, c * (0.5 * (jf - kf)));
        }
        out
    }

    pub fn z(&self) -> Self {
        let i = Complex64::i();
        let mut out = Expr::default();
        for (&(p, j, k), &c) in &self.terms {
            out.add(p, j, k, c * i * k as f64);
        }
        out
    }

    pub fn eval(&self, a: &HolDiff, u: UPoint) -> Complex64 {
        let z = Complex64::new(u.x, u.y);
        self.terms
            .iter()
            .map(|(&(p, j, k), &c)| c * a.a_deriv(z, p) * u.y.powi(j) * Complex64::from_polar(1.0, k as f64 * u.phi))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}
