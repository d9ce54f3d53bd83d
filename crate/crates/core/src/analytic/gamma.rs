use num_complex::Complex64;

use super::{ComplexEvalReport, ComplexPoint};
use crate::error::{Error, Result};
use crate::numeric::{sin_pi_c, EPS};

/// Lanczos shift `g`.
pub const LANCZOS_G: f64 = 7.0;

/// Lanczos coefficients for `g = 7`, nine terms (the set published with the
/// GNU Scientific Library).
#[allow(clippy::excessive_precision)]
pub const LANCZOS_COEFFICIENTS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Relative accuracy claimed for the Lanczos evaluation on `|Re s| ≤ 30`,
/// `|Im s| ≤ 50`.
const GAMMA_REL_ERROR: f64 = 2e-14;

/// Γ(s) with an error estimate. Poles at `0, −1, −2, …` are rejected.
pub fn gamma(s: ComplexPoint) -> Result<ComplexEvalReport> {
    let z = s.as_complex();
    let nearest = z.re.round();
    let tol = 1e-12 * z.re.abs().max(1.0);
    if nearest <= 0.0 && (z.re - nearest).abs() < tol && z.im.abs() < tol {
        return Err(Error::PoleAtNonPositiveInteger(nearest as i64));
    }
    let value = gamma_unchecked(z);
    let ln_size = value.norm().ln().abs();
    let rel = GAMMA_REL_ERROR + 4.0 * EPS * (ln_size + z.norm());
    Ok(ComplexEvalReport::new(
        value,
        value.norm() * rel,
        LANCZOS_COEFFICIENTS.len(),
    ))
}

/// Γ(z) without pole checks; reflects for `Re z < 1/2`.
pub(crate) fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = std::f64::consts::PI;
        Complex64::new(pi, 0.0) / (sin_pi_c(z) * ln_gamma_right(1.0 - z).exp())
    } else {
        ln_gamma_right(z).exp()
    }
}

/// log Γ(z) for `Re z ≥ 1/2` (branch irrelevant: only exponentiated).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFICIENTS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFICIENTS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + series.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im).unwrap()
    }

    #[test]
    fn factorial_values() {
        let v = gamma(pt(5.0, 0.0)).unwrap().value;
        assert!((v.re - 24.0).abs() < 24.0 * 1e-13);
        assert!(v.im.abs() < 1e-12);
        let v = gamma(pt(1.0, 0.0)).unwrap().value;
        assert!((v.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn half_integer_value() {
        let v = gamma(pt(0.5, 0.0)).unwrap().value;
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        let v = gamma(pt(-0.5, 0.0)).unwrap().value;
        assert!((v.re + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn recurrence_holds_off_axis() {
        let s = Complex64::new(2.0, 3.0);
        let lhs = gamma_unchecked(s) * s;
        let rhs = gamma_unchecked(s + 1.0);
        assert!((lhs - rhs).norm() < 1e-13 * rhs.norm());
    }

    #[test]
    fn poles_are_rejected() {
        assert_eq!(gamma(pt(0.0, 0.0)), Err(Error::PoleAtNonPositiveInteger(0)));
        assert_eq!(gamma(pt(-3.0, 0.0)), Err(Error::PoleAtNonPositiveInteger(-3)));
        assert!(gamma(pt(-3.0, 1e-3)).is_ok());
    }
}
