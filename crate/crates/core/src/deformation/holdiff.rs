use num_complex::Complex64;

use crate::error::{Error, Result};

/// Holomorphic m-differential a(z) dz^m on the half-plane, with a(z) a
/// complex polynomial (`coeffs[k]` multiplies z^k).
#[derive(Debug, Clone, PartialEq)]
pub struct HolDiff {
    pub m: i32,
    pub coeffs: Vec<Complex64>,
}

impl HolDiff {
    pub fn new(m: i32, coeffs: Vec<Complex64>) -> Result<Self> {
        if m < 1 {
            return Err(Error::Validation(format!("degree m = {m} must be at least 1")));
        }
        Ok(HolDiff { m, coeffs })
    }

    /// a(z) = 1
    pub fn unit(m: i32) -> Result<Self> {
        HolDiff::new(m, vec![Complex64::new(1.0, 0.0)])
    }

    /// k-th derivative of a at z.
    pub fn a_deriv(&self, z: Complex64, k: usize) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(k)
            .map(|(j, c)| {
                let fall: f64 = ((j - k + 1)..=j).map(|v| v as f64).product();
                c * fall * z.powu((j - k) as u32)
            })
            .sum()
    }

    pub fn a(&self, z: Complex64) -> Complex64 {
        self.a_deriv(z, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }
}
