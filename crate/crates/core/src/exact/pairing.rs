use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::{cmn_exact, cmn_quad, int, pow2, rat, QPi};
use crate::error::{Error, Result};
use crate::quad;

/// The two ways of closing the unbalanced parenthesis in the closed-form
/// pairing combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reading {
    /// m(m-1) c(m-2, m+1) is a separate additive term
    R1,
    /// m(m-1) c(m-2, m+1) sits inside the factor multiplied by 2^(m-1) m (m-2)
    R2,
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reading::R1 => write!(f, "R1"),
            Reading::R2 => write!(f, "R2"),
        }
    }
}

impl std::str::FromStr for Reading {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "R1" => Ok(Reading::R1),
            "R2" => Ok(Reading::R2),
            _ => Err(Error::Validation(format!("unknown reading '{s}' (expected R1 or R2)"))),
        }
    }
}

fn check_m(m: i64) -> Result<()> {
    if m < 3 {
        return Err(Error::OutOfRange(format!("pairing formula needs m > 2, got {m}")));
    }
    Ok(())
}

/// The closed-form pairing combination of c(m, n) values.
pub fn pairing_coefficient_exact(m: i64, reading: Reading) -> Result<QPi> {
    check_m(m)?;
    let c = cmn_exact;
    let bracket =
        c(m - 1, m - 1)?.scale(&int(2)) - c(m - 1, m + 1)? - c(m, m + 1)? - c(m, m - 1)? - c(m, m - 3)?.scale(&int(2));
    let extra = c(m - 2, m + 1)?.scale(&int(m * (m - 1)));
    let lead = pow2(m - 1) * int(m * (m - 2));
    let main = match reading {
        Reading::R1 => bracket.scale(&lead) + extra,
        Reading::R2 => (bracket + extra).scale(&lead),
    };
    Ok(main + c(0, m - 1)?.scale(&int(m * m * (m - 4)))
        - c(0, m + 1)?.scale(&int(m * (m * m - 4 * m + 2)))
        - c(0, m)?.scale(&int(2)))
}

/// Pieces of the mode-reduced pairing integral.
#[derive(Debug, Clone, Copy)]
pub struct PairingParts {
    /// angular pairing of the local terms b1 v cosh t - b2 u cosh t
    pub local: f64,
    /// curvature-variation part of the transported term
    pub ih_k: f64,
    /// C-variation part of the transported term
    pub ih_c: f64,
}

impl PairingParts {
    pub fn total(&self) -> f64 {
        self.local - self.ih_k - self.ih_c
    }
}

struct Kernel {
    m: f64,
    two_m: f64,
}

impl Kernel {
    fn f(&self, z: f64) -> f64 {
        self.two_m * (1.0 + z.cosh()).powf(-self.m)
    }
    fn f1(&self, z: f64) -> f64 {
        -self.m * self.two_m * z.sinh() * (1.0 + z.cosh()).powf(-self.m - 1.0)
    }
    fn f2(&self, z: f64) -> f64 {
        -self.m * self.two_m * (1.0 + z.cosh()).powf(-self.m - 1.0) * ((self.m + 1.0) - self.m * z.cosh())
    }
}

/// Double-quadrature evaluation of the pairing coefficient.
///
/// The fibre mode of exp(zY) acting on the weight-m data is the kernel
/// F(z) = 2^m (1 + cosh z)^(-m); the transported function is
/// h(t) = int_0^t [kK (F'' + (m+1) F)(t-s) sinh s cosh s + kC F'(t-s) sinh^2 s] ds
/// and it enters against cosh(t)^(-m-1). The local terms pair to
/// (m - 1) c(0, m-1) under the circle convention of the deformation module.
pub fn pairing_numeric_parts(m: i64, tol: f64) -> Result<PairingParts> {
    check_m(m)?;
    let mf = m as f64;
    let k = Kernel { m: mf, two_m: 2f64.powi(m as i32) };
    let k_k = mf * (2.0 - mf) / 2.0;
    let k_c = mf * (mf * mf - 4.0) / 2.0;
    // h grows like e^{2t} while its weight decays like e^{-(m+1)t}; the inner
    // tolerance is scaled so that the weighted error stays below tol/10
    let mut cutoff = 5.0;
    while (-(mf - 1.0) * cutoff).exp() * 2f64.powi(m as i32 + 4) * mf.powi(3) > 0.01 * tol {
        cutoff += 1.0;
    }
    let h_parts = |t: f64| -> Result<(f64, f64)> {
        let inner_tol = 0.1 * tol * t.cosh().powf(mf + 1.0) / cutoff;
        let hk = quad::integrate(|s| (k.f2(t - s) + (mf + 1.0) * k.f(t - s)) * s.sinh() * s.cosh(), 0.0, t, inner_tol)?;
        let hc = quad::integrate(|s| k.f1(t - s) * s.sinh().powi(2), 0.0, t, inner_tol)?;
        Ok((k_k * hk.value, k_c * hc.value))
    };
    let failure = std::cell::RefCell::new(None);
    let integrand = |pick: usize| {
        let failure = &failure;
        let h_parts = &h_parts;
        move |t: f64| match h_parts(t) {
            Ok(p) => (if pick == 0 { p.0 } else { p.1 }) * t.cosh().powf(-mf - 1.0),
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };
    let ih_k = 2.0 * quad::integrate(integrand(0), 0.0, cutoff, 0.25 * tol)?.value;
    let ih_c = 2.0 * quad::integrate(integrand(1), 0.0, cutoff, 0.25 * tol)?.value;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let local = (mf - 1.0) * cmn_quad(0, m - 1, 0.25 * tol)?.value;
    Ok(PairingParts { local, ih_k, ih_c })
}

/// Numeric pairing coefficient, see [`pairing_numeric_parts`].
pub fn pairing_coefficient_numeric(m: i64, tol: f64) -> Result<f64> {
    Ok(pairing_numeric_parts(m, tol)?.total())
}

/// Linear combination of (1 + cosh t)^(-a) cosh(t)^b over t >= 0.
#[derive(Default)]
struct HalfLine(BTreeMap<(i64, i64), BigRational>);

impl HalfLine {
    fn add(&mut self, a: i64, b: i64, c: BigRational) {
        *self.0.entry((a, b)).or_insert_with(BigRational::zero) += c;
    }

    fn value(&self) -> Result<QPi> {
        let mut out = QPi::zero();
        for ((a, b), c) in &self.0 {
            if !c.is_zero() {
                out = out + cmn_exact(*a, -*b)?.scale(&(c * rat(1, 2)));
            }
        }
        Ok(out)
    }
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

/// int_1^{cosh t} N(c) (1 + c)^(-k) dc, with N given by powers of c.
/// Returns coefficients of (1 + cosh t)^(-a) and a constant.
fn antiderivative(numer: &[(i64, BigRational)], k: i64) -> (Vec<(i64, BigRational)>, BigRational) {
    let mut in_w: BTreeMap<i64, BigRational> = BTreeMap::new();
    for (p, co) in numer {
        for j in 0..=*p {
            let sign = if (p - j) % 2 == 0 { 1 } else { -1 };
            *in_w.entry(j).or_insert_with(BigRational::zero) += co * int(binom(*p, j) * sign);
        }
    }
    let mut terms = Vec::new();
    let mut constant = BigRational::zero();
    for (j, co) in in_w {
        let e = j - k + 1;
        assert!(e != 0, "logarithmic term");
        let coef = co / int(e);
        constant -= &coef * pow2(e);
        terms.push((-e, coef));
    }
    (terms, constant)
}

/// Exact value of the transported-term integral, from integrating the
/// double integral by parts down to c(a, n) values.
pub fn ih_exact(m: i64) -> Result<QPi> {
    check_m(m)?;
    let k_k = rat(m * (2 - m), 2);
    let k_c = rat(m * (m * m - 4), 2);
    let two_m = pow2(m);
    let two_over = rat(2, m - 1);
    let mut t = HalfLine::default();

    // F'' + (m+1) F = 2^m (1 + cosh)^(-m-1) (al cosh + be)
    let al = int(m * m + m + 1);
    let be = int((m + 1) * (1 - m));
    for (p, cp) in [(1, &al), (0, &be)] {
        for (q, cq) in [(2, 2), (0, -1)] {
            t.add(m + 1, p + q - (m - 1), &k_k * &two_m * cp * int(cq) * &two_over);
        }
    }
    let nk = [(2, int(2) * &al * &two_m), (1, int(2) * &be * &two_m)];
    let (terms, constant) = antiderivative(&nk, m + 1);
    for (a, co) in terms.iter().chain(std::iter::once(&(0, constant))) {
        t.add(*a, -(m - 1), -(&k_k * co * int(2)));
        t.add(*a, -(m + 1), &k_k * co);
    }

    let nr = [(2, int(-2 * m) * &two_m), (0, int(m) * &two_m)];
    let (terms, constant) = antiderivative(&nr, m + 1);
    for (a, co) in terms.iter().chain(std::iter::once(&(0, constant))) {
        t.add(*a, -(m - 1), &k_c * co * int(2));
        t.add(*a, -(m + 1), -(&k_c * co));
    }
    for (q, cq) in [(2, 1), (0, -1)] {
        t.add(m + 1, q + 1 - (m - 1), -(&k_c * &two_over * int(-2 * m) * &two_m * int(cq)));
    }
    t.add(m, -(m + 1), -(&k_c * &two_m));
    t.add(0, -(m + 1), k_c.clone());
    t.value()
}

/// Exact pairing coefficient from the by-parts reduction; matches
/// [`pairing_coefficient_numeric`].
pub fn pairing_coefficient_derived(m: i64) -> Result<QPi> {
    Ok(cmn_exact(0, m - 1)?.scale(&int(m - 1)) - ih_exact(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_m() {
        assert!(pairing_coefficient_exact(2, Reading::R1).is_err());
        assert!(pairing_coefficient_numeric(2, 1e-8).is_err());
    }

    #[test]
    fn readings_parse() {
        assert_eq!("r2".parse::<Reading>().unwrap(), Reading::R2);
        assert!("R3".parse::<Reading>().is_err());
    }

    #[test]
    fn kernel_derivatives_match_differences() {
        let k = Kernel { m: 4.0, two_m: 16.0 };
        let h = 1e-5;
        for z in [-1.3, 0.2, 2.5] {
            let d1 = (k.f(z + h) - k.f(z - h)) / (2.0 * h);
            let d2 = (k.f(z + h) - 2.0 * k.f(z) + k.f(z - h)) / (h * h);
            assert!((d1 - k.f1(z)).abs() < 1e-8);
            assert!((d2 - k.f2(z)).abs() < 1e-4);
        }
    }

    #[test]
    fn local_part_matches_exact() {
        for m in 3..7 {
            let p = pairing_numeric_parts(m, 1e-9).unwrap();
            let e = cmn_exact(0, m - 1).unwrap().scale(&int(m - 1)).to_f64();
            assert!((p.local - e).abs() < 1e-9);
        }
    }

    #[test]
    fn by_parts_value_for_three() {
        // -473 + 150 pi
        assert_eq!(ih_exact(3).unwrap(), QPi::new(int(-473), int(150)));
    }
}
