//! Exact rational and rational-plus-pi arithmetic: the D-operator recursion,
//! its generating function, closed forms of the c(m, n) integrals and the
//! pairing coefficient.

mod cmn;
mod genfun;
mod pairing;
mod qpi;
mod ratpoly;

pub use cmn::{cmn_exact, cmn_quad, cmn_table_csv, CmnQuad};
pub use genfun::{d_recursion, genfun_check, taylor_cosh_power, taylor_one_plus_cosh};
pub use pairing::{
    ih_exact, pairing_coefficient_derived, pairing_coefficient_exact, pairing_coefficient_numeric,
    pairing_numeric_parts, PairingParts, Reading,
};
pub use qpi::QPi;
pub use ratpoly::RatPoly;

use num_bigint::BigInt;
use num_rational::BigRational;

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// 2^e for any integer exponent.
pub(crate) fn pow2(e: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::from(1) << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        num_traits::Inv::inv(p)
    }
}
