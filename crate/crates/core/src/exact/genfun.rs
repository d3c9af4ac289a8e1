use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{int, rat, RatPoly};
use crate::error::{Error, Result};

/// a_k = D^k 1 with D = m x + ((x^2 - 1)/2) d/dx.
pub fn d_recursion(m: i64, k: usize) -> Result<RatPoly> {
    if m < 1 {
        return Err(Error::OutOfRange(format!("degree m = {m} must be at least 1")));
    }
    let mx = RatPoly::monomial(int(m), 1);
    let half_x2m1 = RatPoly::new(vec![rat(-1, 2), int(0), rat(1, 2)]);
    let mut a = RatPoly::constant(int(1));
    for _ in 0..k {
        a = &(&mx * &a) + &(&half_x2m1 * &a.derivative());
    }
    Ok(a)
}

fn truncated_mul(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Generalized binomial coefficient C(-e, r) for e >= 0.
fn neg_binomial(e: i64, r: usize) -> BigRational {
    let mut c = BigRational::one();
    for j in 0..r {
        c = c * int(-e - j as i64) / int(j as i64 + 1);
    }
    c
}

/// (1 + s)^(-e) for a series s with zero constant term, truncated to n terms.
fn one_plus_pow_neg(s: &[BigRational], e: i64, n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    let mut power = vec![BigRational::zero(); n];
    power[0] = BigRational::one();
    for r in 0..n {
        let c = neg_binomial(e, r);
        for (o, p) in out.iter_mut().zip(&power) {
            *o += &c * p;
        }
        power = truncated_mul(&power, s, n);
        if power.iter().all(|p| p.is_zero()) {
            break;
        }
    }
    out
}

/// Taylor coefficients of cosh(z/2)^(-2m) through z^order, exact.
pub fn taylor_cosh_power(m: i64, order: usize) -> Vec<BigRational> {
    let n = order + 1;
    // cosh(z/2) - 1 = sum_{j>=1} z^{2j} / (4^j (2j)!)
    let s: Vec<BigRational> = (0..n)
        .map(|k| {
            if k == 0 || k % 2 == 1 {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::one(), factorial(k) * (BigInt::one() << k))
            }
        })
        .collect();
    one_plus_pow_neg(&s, 2 * m, n)
}

/// Taylor coefficients of 2^m (1 + cosh z)^(-m), equal to cosh(z/2)^(-2m).
pub fn taylor_one_plus_cosh(m: i64, order: usize) -> Vec<BigRational> {
    let n = order + 1;
    // (cosh z - 1)/2
    let s: Vec<BigRational> = (0..n)
        .map(|k| {
            if k == 0 || k % 2 == 1 {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::one(), factorial(k) * BigInt::from(2))
            }
        })
        .collect();
    one_plus_pow_neg(&s, m, n)
}

/// Differences constcoeff(a_k)/k! - [z^k] cosh(z/2)^(-2m) for k = 0..=order.
pub fn genfun_check(m: i64, order: usize) -> Result<Vec<BigRational>> {
    if m < 1 {
        return Err(Error::OutOfRange(format!("degree m = {m} must be at least 1")));
    }
    if order > 16 {
        return Err(Error::OutOfRange(format!("order {order} exceeds 16")));
    }
    let target = taylor_cosh_power(m, order);
    let mut a = d_recursion(m, 0)?;
    let mx = RatPoly::monomial(int(m), 1);
    let half_x2m1 = RatPoly::new(vec![rat(-1, 2), int(0), rat(1, 2)]);
    let mut out = Vec::with_capacity(order + 1);
    for (k, t) in target.iter().enumerate() {
        let lhs = a.coeff(0) / BigRational::from_integer(factorial(k));
        out.push(lhs - t);
        a = &(&mx * &a) + &(&half_x2m1 * &a.derivative());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        for m in 1..6 {
            assert_eq!(d_recursion(m, 0).unwrap(), RatPoly::constant(int(1)));
            assert_eq!(d_recursion(m, 1).unwrap(), RatPoly::monomial(int(m), 1));
            let a2 = d_recursion(m, 2).unwrap();
            let expect = RatPoly::new(vec![rat(-m, 2), int(0), int(m * m) + rat(m, 2)]);
            assert_eq!(a2, expect);
        }
        assert!(d_recursion(3, 1).unwrap().coeff(0).is_zero());
    }

    #[test]
    fn degree_and_leading_sign() {
        for m in 1..5 {
            for k in 0..=20 {
                let a = d_recursion(m, k).unwrap();
                assert_eq!(a.degree(), Some(k));
                assert!(a.leading() > BigRational::zero());
            }
        }
    }

    #[test]
    fn second_order_coefficient() {
        for m in 1..8 {
            let t = taylor_cosh_power(m, 2);
            assert_eq!(t[1], BigRational::zero());
            assert_eq!(t[2], rat(-m, 4));
            let r = genfun_check(m, 2).unwrap();
            assert!(r.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn two_target_forms_agree() {
        for m in 1..6 {
            assert_eq!(taylor_cosh_power(m, 12), taylor_one_plus_cosh(m, 12));
        }
    }

    #[test]
    fn float_cross_check() {
        let t = taylor_cosh_power(3, 12);
        let z: f64 = 0.05;
        let s: f64 =
            t.iter().enumerate().map(|(k, c)| num_traits::ToPrimitive::to_f64(c).unwrap() * z.powi(k as i32)).sum();
        assert!((s - (z / 2.0).cosh().powi(-6)).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(genfun_check(0, 4).is_err());
        assert!(genfun_check(2, 17).is_err());
    }
}
