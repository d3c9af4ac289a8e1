use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{int, pow2, rat, QPi, RatPoly};
use crate::error::{Error, Result};
use crate::quad;
use crate::report::sig;

/// Quadrature value of c(m, n) with its error budget.
#[derive(Debug, Clone, Copy)]
pub struct CmnQuad {
    pub value: f64,
    /// quadrature error estimate on the truncated range
    pub abs_error: f64,
    /// bound on the neglected tails beyond +-cutoff
    pub tail_bound: f64,
    pub cutoff: f64,
}

fn check_integrable(m: i64, n: i64) -> Result<()> {
    if m < 0 {
        return Err(Error::OutOfRange(format!("m = {m} must be non-negative")));
    }
    if m + n < 1 {
        return Err(Error::Divergent { m, n });
    }
    Ok(())
}

/// c(m, n) = integral over the real line of cosh(t)^(-n) (1 + cosh t)^(-m).
///
/// `n` may be negative as long as m + n >= 1.
pub fn cmn_quad(m: i64, n: i64, tol: f64) -> Result<CmnQuad> {
    check_integrable(m, n)?;
    if tol <= 0.0 {
        return Err(Error::Validation("tolerance must be positive".into()));
    }
    let decay = (m + n) as f64;
    // integrand <= 2^(m + max(n,0)) e^{-(m+n) t} for t >= 0
    let log_c = (m + n.max(0)) as f64 * std::f64::consts::LN_2;
    let tail = |t: f64| 2.0 * (log_c - decay * t).exp() / decay;
    let mut cutoff = 1.0;
    while tail(cutoff) > 0.1 * tol {
        cutoff += 1.0;
    }
    let f = |t: f64| {
        let c = t.cosh();
        (-(n as f64) * c.ln() - (m as f64) * (1.0 + c).ln()).exp()
    };
    let est = quad::integrate(f, 0.0, cutoff, 0.4 * tol)?;
    Ok(CmnQuad { value: 2.0 * est.value, abs_error: 2.0 * est.abs_error, tail_bound: tail(cutoff), cutoff })
}

/// I_k = integral over [-1, 1] of (1 + x^2)^(-k).
fn i_base(k: i64, memo: &mut HashMap<(i64, i64), QPi>) -> QPi {
    if let Some(v) = memo.get(&(0, k)) {
        return v.clone();
    }
    let v = if k == 1 {
        QPi::pi_times(rat(1, 2))
    } else {
        let j = k - 1;
        let prev = i_base(j, memo);
        QPi::rational(BigRational::new(1.into(), (num_bigint::BigInt::from(j)) << j as usize))
            + prev.scale(&rat(2 * j - 1, 2 * j))
    };
    memo.insert((0, k), v.clone());
    v
}

/// J(j, n) = integral over [-1, 1] of x^(2j) (1 + x^2)^(-n), n >= 0.
fn j_int(j: i64, n: i64, memo: &mut HashMap<(i64, i64), QPi>) -> QPi {
    if n == 0 {
        return QPi::rational(rat(2, 2 * j + 1));
    }
    if j == 0 {
        return i_base(n, memo);
    }
    if let Some(v) = memo.get(&(j, n)) {
        return v.clone();
    }
    // x^{2j} = x^{2j-2}(1 + x^2) - x^{2j-2}
    let v = j_int(j - 1, n - 1, memo) - j_int(j - 1, n, memo);
    memo.insert((j, n), v.clone());
    v
}

fn integrate_even_poly(p: &RatPoly) -> BigRational {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(k, _)| k % 2 == 0)
        .fold(BigRational::zero(), |acc, (k, c)| acc + c * rat(2, k as i64 + 1))
}

/// Exact c(m, n) as a + b*pi.
///
/// Under x = tanh(t/2) the integrand becomes 2^(1-m) (1-x^2)^(m+n-1) (1+x^2)^(-n)
/// on [-1, 1]. The numerator is divided by (1+x^2)^n; the quotient integrates
/// to a rational and the remainder reduces to the J(j, n) recursion.
pub fn cmn_exact(m: i64, n: i64) -> Result<QPi> {
    check_integrable(m, n)?;
    let one_minus_x2 = RatPoly::new(vec![int(1), int(0), int(-1)]);
    let one_plus_x2 = RatPoly::new(vec![int(1), int(0), int(1)]);
    let num = one_minus_x2.pow((m + n - 1) as u32);
    let pre = pow2(1 - m);
    if n <= 0 {
        let p = &num * &one_plus_x2.pow((-n) as u32);
        return Ok(QPi::rational(integrate_even_poly(&p) * pre));
    }
    let (q, r) = num.div_rem(&one_plus_x2.pow(n as u32));
    let mut memo = HashMap::new();
    let mut total = QPi::rational(integrate_even_poly(&q));
    for (k, c) in r.coeffs().iter().enumerate() {
        if k % 2 == 0 && !c.is_zero() {
            total = total + j_int(k as i64 / 2, n, &mut memo).scale(c);
        }
    }
    Ok(total.scale(&pre))
}

/// Same value through J(j, n) applied term by term, without long division.
#[cfg(test)]
fn cmn_exact_direct(m: i64, n: i64) -> QPi {
    let num = RatPoly::new(vec![int(1), int(0), int(-1)]).pow((m + n - 1) as u32);
    let mut memo = HashMap::new();
    let mut total = QPi::zero();
    for (k, c) in num.coeffs().iter().enumerate() {
        if k % 2 == 0 && !c.is_zero() {
            total = total + j_int(k as i64 / 2, n, &mut memo).scale(c);
        }
    }
    total.scale(&pow2(1 - m))
}

/// CSV table `m,n,a_rational,b_rational,float_image` for all 1 <= m+n <= max_sum.
pub fn cmn_table_csv(max_sum: i64) -> Result<String> {
    let mut out = String::from("m,n,a_rational,b_rational,float_image\n");
    for s in 1..=max_sum {
        for m in 0..=s {
            let n = s - m;
            let v = cmn_exact(m, n)?;
            out.push_str(&format!("{m},{n},{},{},{}\n", v.a, v.b, sig(v.to_f64())));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn spot_values() {
        assert_eq!(cmn_exact(0, 1).unwrap(), QPi::pi_times(int(1)));
        assert_eq!(cmn_exact(1, 0).unwrap(), QPi::rational(int(2)));
        assert_eq!(cmn_exact(1, 1).unwrap(), QPi::new(int(-2), int(1)));
    }

    #[test]
    fn antiderivative_oracles() {
        // 2 arctan(tanh(t/2)) and tanh(t/2) evaluated at the ends of the line
        let q01 = cmn_quad(0, 1, 1e-12).unwrap().value;
        assert!((q01 - PI).abs() < 1e-11);
        let q10 = cmn_quad(1, 0, 1e-12).unwrap().value;
        assert!((q10 - 2.0).abs() < 1e-11);
        let q11 = cmn_quad(1, 1, 1e-12).unwrap().value;
        assert!((q11 - (PI - 2.0)).abs() < 1e-11);
    }

    #[test]
    fn division_and_direct_routes_agree() {
        for m in 0..6 {
            for n in 0..6 {
                if m + n >= 1 {
                    assert_eq!(cmn_exact(m, n).unwrap(), cmn_exact_direct(m, n), "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn negative_n_against_quadrature() {
        for (m, n) in [(4, -2), (5, -3), (3, -1)] {
            let e = cmn_exact(m, n).unwrap().to_f64();
            let q = cmn_quad(m, n, 1e-12).unwrap().value;
            assert!((e - q).abs() < 1e-10, "m={m} n={n}: {e} vs {q}");
        }
    }

    #[test]
    fn base_recursion() {
        // I_2 = 1/2 + pi/4
        let mut memo = HashMap::new();
        assert_eq!(i_base(2, &mut memo), QPi::new(rat(1, 2), rat(1, 4)));
    }

    #[test]
    fn divergent_inputs() {
        assert_eq!(cmn_exact(0, 0), Err(Error::Divergent { m: 0, n: 0 }));
        assert!(cmn_quad(0, 0, 1e-9).is_err());
        assert!(cmn_quad(2, -2, 1e-9).is_err());
    }

    #[test]
    fn table_has_header_and_rows() {
        let t = cmn_table_csv(2).unwrap();
        assert!(t.starts_with("m,n,a_rational,b_rational,float_image\n"));
        assert_eq!(t.lines().count(), 1 + 2 + 3);
    }
}
