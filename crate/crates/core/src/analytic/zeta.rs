//! ζ(s) on the whole plane.
//!
//! For `Re s > 0` the alternating series for η(s) = (1 − 2^{1−s}) ζ(s) is
//! summed with Chebyshev-type weights, which carries an explicit truncation
//! bound. Near the zeros of `1 − 2^{1−s}` off the real axis the division is
//! ill-conditioned and Euler–Maclaurin summation is used instead. For
//! `Re s ≤ 0` the value comes from the functional equation.

use num_complex::Complex64;

use super::gamma::gamma_unchecked;
use super::{check_target, ComplexEvalReport, ComplexPoint};
use crate::error::{Error, Result};
use crate::numeric::{bernoulli_even, cos_pi_c, expm1_c, expm1_over_z, sin_pi_c, BERNOULLI_TERMS, EPS};

const LN_2: f64 = std::f64::consts::LN_2;
const MAX_ETA_TERMS: usize = 340;
/// Relative accuracy assumed for Γ inside reflection factors.
const FACTOR_REL_ERROR: f64 = 2e-14;
/// Truncation budget used by the best-effort internal evaluators.
pub(crate) const INTERNAL_TRUNCATION: f64 = 1e-17;

/// A raw evaluation: value, claimed absolute error, work done.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Eval {
    pub value: Complex64,
    pub err: f64,
    pub terms: usize,
}

/// ζ(s) to absolute accuracy `target_abs_error`.
pub fn zeta(s: ComplexPoint, target_abs_error: f64) -> Result<ComplexEvalReport> {
    check_target(target_abs_error)?;
    let e = zeta_eval(s.as_complex(), 0.25 * target_abs_error)?;
    ComplexEvalReport::new(e.value, e.err, e.terms).require(target_abs_error)
}

/// ζ(s) by Euler–Maclaurin summation alone. Practical for `Re s > −1`;
/// further left the partial sums cancel and the rounding estimate grows.
pub fn zeta_euler_maclaurin(s: ComplexPoint, target_abs_error: f64) -> Result<ComplexEvalReport> {
    check_target(target_abs_error)?;
    let z = s.as_complex();
    if is_pole(z) {
        return Err(Error::PoleAtOne);
    }
    let p = euler_maclaurin(z, 0.25 * target_abs_error);
    let w = z - 1.0;
    let value = p.regular + p.pole / w;
    let err = p.err * (1.0 + 1.0 / w.norm());
    ComplexEvalReport::new(value, err, p.terms).require(target_abs_error)
}

/// Relative residual `|ζ(s) − χ(s) ζ(1−s)| / (1 + |ζ(s)|)` of the functional
/// equation, with `χ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s)`.
pub fn functional_equation_residual(s: ComplexPoint) -> Result<f64> {
    let z = s.as_complex();
    let lhs = zeta_eval(z, INTERNAL_TRUNCATION)?.value;
    let rhs = if let Some(k) = odd_integer_at_least_three(z) {
        // χ has a pole where ζ(1−s) = ζ(1−k) vanishes; the limit of the
        // product is χ(s)χ(1−s)ζ(s) = ζ(s).
        debug_assert!(k >= 3);
        zeta_eval(Complex64::new(k as f64, 0.0), INTERNAL_TRUNCATION)?.value
    } else {
        chi(z) * zeta_eval(1.0 - z, INTERNAL_TRUNCATION)?.value
    };
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm()))
}

fn is_pole(z: Complex64) -> bool {
    (z - 1.0).norm() < 1e-12
}

fn odd_integer_at_least_three(z: Complex64) -> Option<i64> {
    let k = z.re.round();
    let odd = (k as i64).rem_euclid(2) == 1;
    (k >= 3.0 && odd && (z.re - k).abs() < 1e-12 && z.im.abs() < 1e-12).then_some(k as i64)
}

/// ζ(z) with an absolute truncation budget `trunc`.
pub(crate) fn zeta_eval(z: Complex64, trunc: f64) -> Result<Eval> {
    if is_pole(z) {
        return Err(Error::PoleAtOne);
    }
    if z.re > 0.0 {
        let w = z - 1.0;
        let e = s_minus_one_zeta_right(z, trunc * w.norm());
        let value = e.value / w;
        return Ok(Eval {
            value,
            err: e.err / w.norm() + 2.0 * EPS * value.norm(),
            terms: e.terms,
        });
    }
    if z.norm() < 1e-6 {
        // χ(s)ζ(1−s) is 0·∞ at the origin; summation is well conditioned here.
        let p = euler_maclaurin(z, trunc);
        let w = z - 1.0;
        return Ok(Eval {
            value: p.regular + p.pole / w,
            err: p.err * 2.0,
            terms: p.terms,
        });
    }
    let factor = chi(z);
    let inner_trunc = if factor.norm() > 0.0 {
        trunc / factor.norm()
    } else {
        trunc
    };
    let inner = zeta_eval(1.0 - z, inner_trunc)?;
    let value = factor * inner.value;
    let err = factor.norm() * inner.err + value.norm() * (FACTOR_REL_ERROR + 8.0 * EPS * (1.0 + z.norm()));
    Ok(Eval {
        value,
        err,
        terms: inner.terms,
    })
}

/// `χ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s)`, so that ζ(s) = χ(s) ζ(1−s).
///
/// For `Re s ≥ 1/2` the equivalent form `2^{s−1} π^s / (cos(πs/2) Γ(s))` is
/// used, which stays regular at the positive even integers where
/// `sin(πs/2) = 0` meets a pole of `Γ(1−s)`.
pub(crate) fn chi(z: Complex64) -> Complex64 {
    let ln_pi = std::f64::consts::PI.ln();
    if z.re < 0.5 {
        let pre = (z * LN_2 + (z - 1.0) * ln_pi).exp();
        pre * sin_pi_c(0.5 * z) * gamma_unchecked(1.0 - z)
    } else {
        let pre = ((z - 1.0) * LN_2 + z * ln_pi).exp();
        pre / (cos_pi_c(0.5 * z) * gamma_unchecked(z))
    }
}

/// `(s−1) ζ(s)` for `Re s > 0`, regular at `s = 1`.
pub(crate) fn s_minus_one_zeta_right(z: Complex64, trunc: f64) -> Eval {
    debug_assert!(z.re > 0.0);
    let u = (1.0 - z) * LN_2;
    // 1 − 2^{1−s} = −expm1(u) vanishes at u = 2πik.
    let denominator = -expm1_c(u);
    let w = z - 1.0;
    if denominator.norm() < 0.05 && w.norm() > 0.5 {
        let p = euler_maclaurin(z, trunc / w.norm().max(1.0));
        let value = w * p.regular + p.pole;
        return Eval {
            value,
            err: p.err * (1.0 + w.norm()),
            terms: p.terms,
        };
    }
    // (1 − 2^{1−s})/(s − 1) = ln 2 · expm1(u)/u
    let q = LN_2 * expm1_over_z(u);
    let eta = eta_borwein(z, trunc * q.norm());
    let value = eta.value / q;
    Eval {
        value,
        err: eta.err / q.norm() + 4.0 * EPS * value.norm(),
        terms: eta.terms,
    }
}

/// η(s) = Σ (−1)^{k} (k+1)^{−s} for `Re s > 0`, accelerated with the weights
/// `(d_n − d_k)/d_n` where `d_n = T_n(3)`. The truncation error is at most
/// `Γ(σ) / (|Γ(s)| d_n)`.
fn eta_borwein(z: Complex64, trunc: f64) -> Eval {
    let sigma = z.re;
    let gamma_ratio = gamma_unchecked(Complex64::new(sigma, 0.0)).re / gamma_unchecked(z).norm();
    let rate = (3.0 + 8f64.sqrt()).ln();
    let needed = ((2.0 * gamma_ratio / trunc.max(1e-300)).ln() / rate).ceil();
    let n = if needed.is_finite() {
        (needed.max(8.0) as usize).min(MAX_ETA_TERMS)
    } else {
        MAX_ETA_TERMS
    };

    // e_i = n (n+i−1)! 4^i / ((n−i)! (2i)!), d_k = Σ_{i≤k} e_i.
    let mut e = Vec::with_capacity(n + 1);
    let mut term = 1.0f64;
    e.push(term);
    for i in 0..n {
        let (fi, fnn) = (i as f64, n as f64);
        term *= 2.0 * (fnn + fi) * (fnn - fi) / ((fi + 1.0) * (2.0 * fi + 1.0));
        e.push(term);
    }
    let d_n: f64 = e.iter().sum();
    // tail[k] = d_n − d_k = Σ_{i>k} e_i
    let mut tails = vec![0.0; n + 1];
    for k in (0..n).rev() {
        tails[k] = tails[k + 1] + e[k + 1];
    }

    let mut sum = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for (k, &tail) in tails.iter().enumerate().take(n) {
        let weight = tail / d_n;
        let power = (-z * ((k + 1) as f64).ln()).exp();
        let t = power * weight;
        magnitude += t.norm();
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    let truncation = gamma_ratio / d_n;
    let rounding = magnitude * EPS * (8.0 + z.norm() * ((n + 1) as f64).ln());
    Eval {
        value: sum,
        err: truncation + rounding,
        terms: n,
    }
}

/// Euler–Maclaurin pieces: ζ(s) = regular + pole/(s − 1).
#[derive(Debug, Clone, Copy)]
pub(crate) struct EulerMaclaurin {
    pub regular: Complex64,
    pub pole: Complex64,
    pub err: f64,
    pub terms: usize,
}

/// ζ(s) = Σ_{n<N} n^{−s} + N^{1−s}/(s−1) + N^{−s}/2
///        + Σ_k B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1} + R,
/// with `|R| ≤ |s+2M+1|/(σ+2M+1) · |first omitted term|`.
pub(crate) fn euler_maclaurin(z: Complex64, trunc: f64) -> EulerMaclaurin {
    let cutoff = (2.0 * z.norm()).ceil() as usize + 20;
    let big_n = cutoff as f64;
    let ln_n = big_n.ln();

    let mut partial = Complex64::new(0.0, 0.0);
    let mut rounding = 0.0;
    for n in (1..cutoff).rev() {
        let ln = (n as f64).ln();
        let t = (-z * ln).exp();
        partial += t;
        rounding += t.norm() * (3.0 + z.norm() * ln);
    }
    let n_pow = (-z * ln_n).exp();
    let pole = n_pow * big_n;
    let mut regular = partial + 0.5 * n_pow;

    // rising = s(s+1)…(s+2k−2), n_k = N^{−s−2k+1}, factorial = (2k)!
    let mut rising = z;
    let mut n_k = n_pow / big_n;
    let mut factorial = 2.0f64;
    let mut err = f64::INFINITY;
    let mut used = 0;
    for k in 1..BERNOULLI_TERMS {
        let t = rising * n_k * (bernoulli_even(k) / factorial);
        regular += t;
        used = k;
        // first omitted term and the remainder bound
        let k1 = k + 1;
        let next_rising = rising * (z + (2 * k - 1) as f64) * (z + (2 * k) as f64);
        let next_n = n_k / (big_n * big_n);
        let next_fact = factorial * ((2 * k1 - 1) * 2 * k1) as f64;
        let omitted = (next_rising * next_n * (bernoulli_even(k1) / next_fact)).norm();
        let m = (2 * k + 1) as f64;
        let denom = z.re + m;
        err = if denom > 0.0 {
            (z + m).norm() / denom * omitted
        } else {
            f64::INFINITY
        };
        if err < trunc {
            break;
        }
        rising = next_rising;
        n_k = next_n;
        factorial = next_fact;
    }
    let rounding = EPS * (rounding + pole.norm() * (4.0 + z.norm() * ln_n));
    EulerMaclaurin {
        regular,
        pole,
        err: err + rounding,
        terms: cutoff + used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_two_and_four() {
        let pi2 = std::f64::consts::PI.powi(2);
        let r = zeta(ComplexPoint::real(2.0).unwrap(), 1e-13).unwrap();
        assert!((r.value.re - pi2 / 6.0).abs() < 1e-13);
        assert!(r.abs_error_estimate <= 1e-13);
        let r = zeta(ComplexPoint::real(4.0).unwrap(), 1e-13).unwrap();
        assert!((r.value.re - pi2 * pi2 / 90.0).abs() < 1e-13);
    }

    #[test]
    fn zeta_at_zero_and_negative_integers() {
        let r = zeta_eval(c(0.0, 0.0), INTERNAL_TRUNCATION).unwrap();
        assert!((r.value.re + 0.5).abs() < 1e-14);
        let r = zeta_eval(c(-1.0, 0.0), INTERNAL_TRUNCATION).unwrap();
        assert!((r.value.re + 1.0 / 12.0).abs() < 1e-14);
        let r = zeta_eval(c(-3.0, 0.0), INTERNAL_TRUNCATION).unwrap();
        assert!((r.value.re - 1.0 / 120.0).abs() < 1e-14);
        for n in 1..=10 {
            let r = zeta_eval(c(-2.0 * n as f64, 0.0), INTERNAL_TRUNCATION).unwrap();
            assert_eq!(r.value.norm(), 0.0);
        }
    }

    #[test]
    fn pole_is_rejected() {
        assert_eq!(zeta(ComplexPoint::real(1.0).unwrap(), 1e-10), Err(Error::PoleAtOne));
    }

    #[test]
    fn eta_and_euler_maclaurin_agree() {
        for &(re, im) in &[(0.5, 3.0), (0.2, 25.0), (3.0, -7.0), (1.0, 40.0), (0.7, 0.1)] {
            let z = c(re, im);
            let a = s_minus_one_zeta_right(z, 1e-17).value / (z - 1.0);
            let p = euler_maclaurin(z, 1e-17);
            let b = p.regular + p.pole / (z - 1.0);
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()), "s = {z}: {a} vs {b}");
        }
    }

    #[test]
    fn fallback_near_zero_of_two_factor() {
        // 1 − 2^{1−s} = 0 at s = 1 + 2πi/ln 2.
        let z = c(1.0, 2.0 * std::f64::consts::PI / LN_2);
        let r = zeta_eval(z, 1e-15).unwrap();
        let p = euler_maclaurin(z, 1e-17);
        let b = p.regular + p.pole / (z - 1.0);
        assert!((r.value - b).norm() < 1e-13);
        assert!(r.err < 1e-12);
    }

    #[test]
    fn chi_forms_agree_across_the_switch() {
        for &im in &[0.0, 1.0, -12.0] {
            let z = c(0.5, im);
            let a = {
                let pre = (z * LN_2 + (z - 1.0) * std::f64::consts::PI.ln()).exp();
                pre * sin_pi_c(0.5 * z) * gamma_unchecked(1.0 - z)
            };
            let b = chi(z);
            assert!((a - b).norm() < 1e-13 * b.norm());
        }
    }

    #[test]
    fn residual_at_special_points() {
        for &(re, im) in &[(2.0, 0.0), (3.0, 0.0), (-1.5, 0.0), (0.5, 3.0), (5.0, 0.0)] {
            let r = functional_equation_residual(ComplexPoint::new(re, im).unwrap()).unwrap();
            assert!(r < 1e-12, "s = {re}+{im}i residual {r}");
        }
        assert_eq!(
            functional_equation_residual(ComplexPoint::real(0.0).unwrap()),
            Err(Error::PoleAtOne)
        );
    }
}
