use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bernoulli_even, CompensatedSum, EPS};

/// Euler–Maclaurin correction terms used for γ (up to `B_16`).
const GAMMA_CORRECTION_TERMS: usize = 8;

/// The two harmonic cut-offs whose γ estimates must agree.
const GAMMA_CUTOFFS: [u32; 2] = [10, 25];

/// γ with a certified bound on the error.
///
/// `γ = H_n − ln n − 1/(2n) + Σ_{k=1}^{M} B_{2k} / (2k n^{2k}) − R`, where the
/// remainder is bounded by the first omitted term. Two cut-offs are evaluated
/// and must agree within their combined bounds.
pub fn euler_gamma(target_abs_error: f64) -> Result<f64> {
    if !(target_abs_error > 0.0) {
        return Err(Error::domain(format!(
            "target error must be positive, got {target_abs_error}"
        )));
    }
    let (a, err_a) = gamma_at_cutoff(GAMMA_CUTOFFS[0]);
    let (b, err_b) = gamma_at_cutoff(GAMMA_CUTOFFS[1]);
    if (a - b).abs() > err_a + err_b {
        return Err(Error::PrecisionUnreachable {
            target: target_abs_error,
            achieved: (a - b).abs(),
        });
    }
    let err = err_a.min(err_b);
    if err > target_abs_error {
        return Err(Error::PrecisionUnreachable {
            target: target_abs_error,
            achieved: err,
        });
    }
    Ok(if err_a <= err_b { a } else { b })
}

/// `(estimate, bound)` for a single cut-off `n`.
pub(crate) fn gamma_at_cutoff(n: u32) -> (f64, f64) {
    let nf = n as f64;
    let mut sum = CompensatedSum::default();
    for k in (1..=n).rev() {
        sum.add(1.0 / k as f64);
    }
    sum.add(-nf.ln());
    sum.add(-0.5 / nf);
    let inv2 = 1.0 / (nf * nf);
    let mut pow = inv2;
    for k in 1..=GAMMA_CORRECTION_TERMS {
        sum.add(bernoulli_even(k) / (2 * k) as f64 * pow);
        pow *= inv2;
    }
    let m = GAMMA_CORRECTION_TERMS + 1;
    let omitted = (bernoulli_even(m) / (2 * m) as f64 * pow).abs();
    (sum.value(), omitted + 4.0 * EPS)
}

/// `λ = 1 − γ`, computed once.
pub fn lambda() -> f64 {
    static LAMBDA: OnceLock<f64> = OnceLock::new();
    *LAMBDA.get_or_init(|| 1.0 - euler_gamma(1e-14).expect("γ is certified to 1e-14"))
}

/// `λ_n = ln n − (1/2 + 1/3 + … + 1/n)`, which increases to `λ` inside `(0, 1/2)`.
pub fn lambda_n(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("λ_n needs n ≥ 2, got {n}")));
    }
    let mut sum = CompensatedSum::default();
    for k in (2..=n).rev() {
        sum.add(-1.0 / k as f64);
    }
    sum.add((n as f64).ln());
    Ok(sum.value())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub gamma: f64,
    pub lambda: f64,
    pub lambda_n_trace: Vec<(u64, f64)>,
}

/// γ, λ and `λ_n` along the given `n` values.
pub fn constants_report(target_abs_error: f64, trace: &[u64]) -> Result<ConstantsReport> {
    let gamma = euler_gamma(target_abs_error)?;
    let lambda_n_trace = trace
        .iter()
        .map(|&n| lambda_n(n).map(|v| (n, v)))
        .collect::<Result<_>>()?;
    Ok(ConstantsReport {
        gamma,
        lambda: 1.0 - gamma,
        lambda_n_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_reference_digits() {
        let g = euler_gamma(1e-12).unwrap();
        assert!((g - 0.577_215_664_901_532_9).abs() < 1e-15);
        assert!((euler_gamma(1e-3).unwrap() - 0.577).abs() < 1e-3);
    }

    #[test]
    fn gamma_rejects_impossible_targets() {
        assert!(matches!(euler_gamma(1e-20), Err(Error::PrecisionUnreachable { .. })));
        assert!(matches!(euler_gamma(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn lambda_n_small_cases() {
        assert!((lambda_n(2).unwrap() - (2f64.ln() - 0.5)).abs() < 1e-16);
        assert!((lambda_n(3).unwrap() - 0.265_278_955_334_776_4).abs() < 1e-15);
        assert!(lambda_n(1).is_err());
    }

    #[test]
    fn lambda_is_one_minus_gamma() {
        assert!((lambda() - 0.422_784_335_098_467_1).abs() < 1e-15);
    }
}
