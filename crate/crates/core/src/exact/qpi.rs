use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// pi to 60 decimals; used so that cancellation between a and b*pi happens
/// in exact arithmetic before the final rounding.
const PI_DIGITS: &str = "3141592653589793238462643383279502884197169399375105820974944";

/// Exact number a + b*pi with rational a, b.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPi {
    pub a: BigRational,
    pub b: BigRational,
}

impl QPi {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QPi { a, b }
    }

    pub fn zero() -> Self {
        QPi { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn rational(a: BigRational) -> Self {
        QPi { a, b: BigRational::zero() }
    }

    pub fn pi_times(b: BigRational) -> Self {
        QPi { a: BigRational::zero(), b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        QPi { a: &self.a * s, b: &self.b * s }
    }

    /// Floating image, correctly rounded up to the 60-digit pi approximation.
    pub fn to_f64(&self) -> f64 {
        let num: BigInt = PI_DIGITS.parse().expect("pi digits");
        let den = BigInt::from(10).pow((PI_DIGITS.len() - 1) as u32);
        let pi = BigRational::new(num, den);
        (&self.a + &self.b * pi).to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for QPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}*pi", self.a, -&self.b)
        } else {
            write!(f, "{} + {}*pi", self.a, self.b)
        }
    }
}

impl Add for QPi {
    type Output = QPi;
    fn add(self, o: QPi) -> QPi {
        QPi { a: self.a + o.a, b: self.b + o.b }
    }
}

impl<'a> Add<&'a QPi> for &'a QPi {
    type Output = QPi;
    fn add(self, o: &QPi) -> QPi {
        QPi { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for QPi {
    type Output = QPi;
    fn sub(self, o: QPi) -> QPi {
        QPi { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for QPi {
    type Output = QPi;
    fn neg(self) -> QPi {
        QPi { a: -self.a, b: -self.b }
    }
}

impl Mul<BigRational> for QPi {
    type Output = QPi;
    fn mul(self, s: BigRational) -> QPi {
        self.scale(&s)
    }
}

impl std::iter::Sum for QPi {
    fn sum<I: Iterator<Item = QPi>>(iter: I) -> QPi {
        iter.fold(QPi::zero(), |acc, x| acc + x)
    }
}
