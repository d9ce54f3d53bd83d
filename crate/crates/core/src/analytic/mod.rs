//! Complex evaluators for Γ, ζ and the completed function ξ, together with the
//! functional-equation check and the critical-line zero search.

mod gamma;
mod xi;
mod zeros;
mod zeta;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gamma::{gamma, LANCZOS_COEFFICIENTS, LANCZOS_G};
pub use xi::xi;
pub use zeros::{critical_zero_brackets, find_critical_zeros, ZeroBracket, ZERO_SCAN_STEP};
pub use zeta::{functional_equation_residual, zeta, zeta_euler_maclaurin};

/// A finite point of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::domain(format!("non-finite point {re} + {im}i")));
        }
        Ok(ComplexPoint { re, im })
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    /// `1 − s`.
    pub fn reflect(self) -> Self {
        ComplexPoint {
            re: 1.0 - self.re,
            im: -self.im,
        }
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.as_complex()
    }
}

/// A computed value with the error bound claimed by the evaluation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexEvalReport {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
}

impl ComplexEvalReport {
    pub(crate) fn new(value: Complex64, abs_error_estimate: f64, terms_used: usize) -> Self {
        ComplexEvalReport {
            value,
            abs_error_estimate,
            terms_used,
        }
    }

    pub(crate) fn require(self, target: f64) -> Result<Self> {
        if self.abs_error_estimate <= target {
            Ok(self)
        } else {
            Err(Error::PrecisionUnreachable {
                target,
                achieved: self.abs_error_estimate,
            })
        }
    }
}

pub(crate) fn check_target(target: f64) -> Result<()> {
    if target > 0.0 && target.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("target error must be positive, got {target}")))
    }
}
