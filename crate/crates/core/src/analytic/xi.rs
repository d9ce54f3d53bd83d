//! The completed function ξ(s) = ½ π^{−s/2} s(s−1) Γ(s/2) ζ(s).
//!
//! Writing `½ s Γ(s/2) = Γ(1 + s/2)` gives ξ(s) = π^{−s/2} Γ(1+s/2) (s−1)ζ(s),
//! where both the pole of Γ(s/2) at 0 and the pole of ζ at 1 are already
//! cancelled. Left of the imaginary axis ζ(s) is expanded by the functional
//! equation and `Γ(1+s/2) sin(πs/2) = −π / Γ(−s/2)` removes the remaining
//! zero-times-pole products at the trivial zeros.

use num_complex::Complex64;

use super::gamma::gamma_unchecked;
use super::zeta::{s_minus_one_zeta_right, zeta_eval, INTERNAL_TRUNCATION};
use super::{ComplexEvalReport, ComplexPoint};
use crate::error::Result;
use crate::numeric::EPS;

const FACTOR_REL_ERROR: f64 = 4e-14;

/// ξ(s); entire, so every finite point is admissible.
pub fn xi(s: ComplexPoint) -> Result<ComplexEvalReport> {
    let e = xi_unchecked(s.as_complex())?;
    Ok(ComplexEvalReport::new(e.0, e.1, e.2))
}

/// `(value, abs error, terms)`.
pub(crate) fn xi_unchecked(z: Complex64) -> Result<(Complex64, f64, usize)> {
    let ln_pi = std::f64::consts::PI.ln();
    let pi_pow = (-0.5 * z * ln_pi).exp();
    let rel = FACTOR_REL_ERROR + 8.0 * EPS * (1.0 + z.norm());

    if z.re > 0.0 {
        let prefactor = pi_pow * gamma_unchecked(1.0 + 0.5 * z);
        let e = s_minus_one_zeta_right(z, INTERNAL_TRUNCATION);
        let value = prefactor * e.value;
        return Ok((value, prefactor.norm() * e.err + value.norm() * rel, e.terms));
    }
    if z.norm() < 0.5 {
        let prefactor = pi_pow * gamma_unchecked(1.0 + 0.5 * z) * (z - 1.0);
        let e = zeta_eval(z, INTERNAL_TRUNCATION)?;
        let value = prefactor * e.value;
        return Ok((value, prefactor.norm() * e.err + value.norm() * rel, e.terms));
    }
    // Re s ≤ 0, |s| ≥ 1/2:
    // ξ(s) = π^{−s/2} (s−1) (−π/Γ(−s/2)) 2^s π^{s−1} Γ(1−s) ζ(1−s)
    let pi = std::f64::consts::PI;
    let two_pi_pow = (z * std::f64::consts::LN_2 + (z - 1.0) * ln_pi).exp();
    let prefactor = pi_pow * (z - 1.0) * (-pi) / gamma_unchecked(-0.5 * z) * two_pi_pow * gamma_unchecked(1.0 - z);
    let e = zeta_eval(1.0 - z, INTERNAL_TRUNCATION)?;
    let value = prefactor * e.value;
    Ok((value, prefactor.norm() * e.err + value.norm() * rel, e.terms))
}
