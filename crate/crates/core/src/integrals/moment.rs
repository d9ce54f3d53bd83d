use serde::{Deserialize, Serialize};

use super::constants::lambda;
use super::segments::{fractional_tail, walk_segments, weighted_moments};
use crate::bstar::BStarFunction;
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, GaussLegendre, EPS};

/// Upper limit on the number of intervals walked by one truncated integral.
pub const MAX_SEGMENTS: u64 = 100_000_000;

/// Gauss–Legendre order used for `|φ|^p` on sloped intervals when `p ≠ 2`.
pub const NORM_GAUSS_ORDER: usize = 8;

/// `∫₁^∞ {t/l} dt/t² = (λ + ln l)/l` with `λ = 1 − γ`.
///
/// Accepts `l = 1`, where the same telescoping gives `λ`.
pub fn lemma1_moment(l: f64) -> Result<f64> {
    if !(l >= 1.0) || !l.is_finite() {
        return Err(Error::domain(format!("dilation must be ≥ 1, got {l}")));
    }
    Ok((lambda() + l.ln()) / l)
}

/// First moment of a constrained B* function, by closed form and by direct
/// segment integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// `∫₁^∞ φ dt/t²` by segment integration plus an analytic tail.
    pub integral_value: f64,
    pub integral_error: f64,
    /// `Σ Θ_k ln l_k`.
    pub closed_form: f64,
    pub lambda_used: f64,
    /// `Σ Θ_k`.
    pub constraint_sum: f64,
    /// `Σ Θ_k ln l_k` (same as `closed_form`).
    pub theta_log_sum: f64,
    /// Truncation point of the segment integration.
    pub truncation: f64,
    /// Some dilation equals 1, outside the strict hypothesis `l > 1`.
    pub includes_unit_dilation: bool,
}

pub fn bstar_moment(phi: &BStarFunction) -> Result<MomentReport> {
    if !phi.is_constrained() {
        return Err(Error::NotConstrained);
    }
    let constraint_sum = phi.constraint_sum();
    let theta_log_sum: f64 = phi.terms().iter().map(|t| t.h / t.l * t.l.ln()).sum();
    let (integral_value, integral_error, truncation) = first_moment_by_segments(phi, 1e-13)?;
    Ok(MomentReport {
        integral_value,
        integral_error,
        closed_form: theta_log_sum,
        lambda_used: lambda(),
        constraint_sum,
        theta_log_sum,
        truncation,
        includes_unit_dilation: phi.terms().iter().any(|t| t.l == 1.0),
    })
}

/// `∫₁^∞ φ dt/t²` for any B* function: exact on `(1, T]`, then the tail of
/// each `{t/l_k}` from [`fractional_tail`]. Returns `(value, error, T)`.
pub(crate) fn first_moment_by_segments(phi: &BStarFunction, tail_budget: f64) -> Result<(f64, f64, f64)> {
    let dilations = phi.dilations();
    let coefficients = phi.coefficients();
    let l_max = dilations.iter().cloned().fold(1.0, f64::max);
    let weight: f64 = phi.terms().iter().map(|t| t.h.abs() * t.l * t.l / 6.0).sum();
    let t_end = (8.0 * l_max).max((weight / tail_budget).cbrt()).max(16.0);
    let expected: f64 = dilations.iter().map(|l| t_end / l).sum();
    if expected > MAX_SEGMENTS as f64 {
        return Err(Error::PrecisionUnreachable {
            target: tail_budget,
            achieved: weight / (MAX_SEGMENTS as f64).powi(3),
        });
    }
    let slope = phi.constraint_sum();
    let mut sum = CompensatedSum::default();
    walk_segments(&dilations, 1.0, t_end, |u, v, local| {
        let at_u: f64 = coefficients.iter().zip(local).map(|(h, x)| h * x).sum();
        let [m0, m1, _] = weighted_moments(u, v);
        sum.add(at_u * m0 + slope * m1);
    });
    let mut err = 0.0;
    for t in phi.terms() {
        let (tail, bound) = fractional_tail(t.l, t_end);
        sum.add(t.h * tail);
        err += t.h.abs() * bound;
    }
    err += 16.0 * EPS * phi.abs_coefficient_sum();
    Ok((sum.value(), err, t_end))
}

/// `m*(E) = ∫_E dt/t²` for a finite union of disjoint intervals in `[1, ∞]`.
pub fn mstar_measure(intervals: &[(f64, f64)]) -> Result<f64> {
    let mut sorted = intervals.to_vec();
    for &(a, b) in &sorted {
        if a.is_nan() || b.is_nan() || a < 1.0 || b < a {
            return Err(Error::domain(format!("interval [{a}, {b}] is not inside (1, ∞)")));
        }
    }
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    for w in sorted.windows(2) {
        if w[1].0 < w[0].1 {
            return Err(Error::domain(format!(
                "intervals [{}, {}] and [{}, {}] overlap",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    Ok(sorted
        .iter()
        .map(|&(a, b)| 1.0 / a - if b.is_infinite() { 0.0 } else { 1.0 / b })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub p: f64,
    /// `‖φ‖*_p`.
    pub norm: f64,
    /// `∫₁^∞ |φ|^p dt/t²`.
    pub integral: f64,
    /// Bound on the error of `integral`.
    pub integral_error: f64,
    pub truncation: f64,
}

/// `‖φ‖*_p = (∫₁^∞ |φ|^p dt/t²)^{1/p}` for `p ∈ (1, 2]`.
///
/// The integral is exact on `(1, T]` (closed form for flat intervals and for
/// `p = 2`, otherwise [`NORM_GAUSS_ORDER`]-point Gauss–Legendre split at sign
/// changes). Since `|φ| ≤ Σ|h_k| =: H`, the tail lies in `[0, H^p/T]`; its
/// midpoint is added and half its width goes into the error.
pub fn mstar_norm(phi: &BStarFunction, p: f64, target_abs_error: f64) -> Result<NormReport> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::domain(format!("p must lie in (1, 2], got {p}")));
    }
    if !(target_abs_error > 0.0) {
        return Err(Error::domain(format!(
            "target error must be positive, got {target_abs_error}"
        )));
    }
    let h_sum = phi.abs_coefficient_sum();
    if h_sum == 0.0 {
        return Ok(NormReport {
            p,
            norm: 0.0,
            integral: 0.0,
            integral_error: 0.0,
            truncation: 1.0,
        });
    }
    let bound = h_sum.powf(p);
    let dilations = phi.dilations();
    let t_end = (bound / target_abs_error).max(16.0);
    let expected: f64 = dilations.iter().map(|l| t_end / l).sum();
    if expected > MAX_SEGMENTS as f64 {
        let reachable = MAX_SEGMENTS as f64 / dilations.iter().map(|l| 1.0 / l).sum::<f64>();
        return Err(Error::PrecisionUnreachable {
            target: target_abs_error,
            achieved: bound / reachable,
        });
    }

    let coefficients = phi.coefficients();
    let slope = phi.constraint_sum();
    let flat = phi.is_constrained() || slope == 0.0;
    let gauss = GaussLegendre::new(NORM_GAUSS_ORDER);
    let mut sum = CompensatedSum::default();
    walk_segments(&dilations, 1.0, t_end, |u, v, local| {
        let at_u: f64 = coefficients.iter().zip(local).map(|(h, x)| h * x).sum();
        let [m0, m1, m2] = weighted_moments(u, v);
        if flat {
            sum.add(at_u.abs().powf(p) * m0);
        } else if p == 2.0 {
            sum.add(at_u * at_u * m0 + 2.0 * at_u * slope * m1 + slope * slope * m2);
        } else {
            let value = |t: f64| (at_u + slope * (t - u)).abs().powf(p) / (t * t);
            let root = u - at_u / slope;
            if root > u && root < v {
                sum.add(gauss.integrate(u, root, value));
                sum.add(gauss.integrate(root, v, value));
            } else {
                sum.add(gauss.integrate(u, v, value));
            }
        }
    });
    sum.add(0.5 * bound / t_end);
    let integral = sum.value();
    let integral_error = 0.5 * bound / t_end + 16.0 * EPS * bound;
    Ok(NormReport {
        p,
        norm: integral.max(0.0).powf(1.0 / p),
        integral,
        integral_error,
        truncation: t_end,
    })
}

/// `‖c‖*_p = |c|` for a constant function, since `m*((1, ∞)) = 1`.
pub fn mstar_norm_of_constant(c: f64, p: f64) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::domain(format!("p must lie in (1, 2], got {p}")));
    }
    Ok(c.abs() * mstar_measure(&[(1.0, f64::INFINITY)])?.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma1_values() {
        assert!((lemma1_moment(1.0).unwrap() - 0.422_784_335_098_467_1).abs() < 1e-15);
        assert!((lemma1_moment(2.0).unwrap() - 0.557_965_757_829_206_2).abs() < 1e-15);
        let e = std::f64::consts::E;
        assert!((lemma1_moment(e).unwrap() - (lambda() + 1.0) / e).abs() < 1e-15);
        assert!(lemma1_moment(0.5).is_err());
    }

    #[test]
    fn moment_examples() {
        let phi = BStarFunction::constrained(&[(-1.0, 1.0), (2.0, 2.0)]).unwrap();
        let r = bstar_moment(&phi).unwrap();
        assert!((r.closed_form - 2f64.ln()).abs() < 1e-15);
        assert!((r.integral_value - 2f64.ln()).abs() < 1e-9);
        assert!(r.includes_unit_dilation);

        let zero = BStarFunction::constrained(&[(-1.0, 1.0), (1.0, 1.0)]).unwrap();
        let r = bstar_moment(&zero).unwrap();
        assert_eq!(r.closed_form, 0.0);
        assert!(r.integral_value.abs() < 1e-12);

        let phi = BStarFunction::constrained(&[(-3.0, 1.0), (2.0, 2.0), (4.0, 2.0)]).unwrap();
        let r = bstar_moment(&phi).unwrap();
        assert!((r.closed_form - 3.0 * 2f64.ln()).abs() < 1e-14);
        assert!((r.integral_value - 3.0 * 2f64.ln()).abs() < 1e-9);

        let free = BStarFunction::unconstrained(&[(1.0, 2.0)]).unwrap();
        assert_eq!(bstar_moment(&free), Err(Error::NotConstrained));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(mstar_measure(&[(1.0, f64::INFINITY)]).unwrap(), 1.0);
        assert_eq!(mstar_measure(&[(2.0, 4.0)]).unwrap(), 0.25);
        let v = mstar_measure(&[(5.0, 10.0), (2.0, 3.0)]).unwrap();
        assert!((v - (1.0 / 6.0 + 0.1)).abs() < 1e-16);
        assert!(mstar_measure(&[(0.5, 2.0)]).is_err());
        assert!(mstar_measure(&[(2.0, 4.0), (3.0, 5.0)]).is_err());
    }

    #[test]
    fn norm_examples() {
        let zero = BStarFunction::constrained(&[(-1.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(mstar_norm(&zero, 1.5, 1e-6).unwrap().norm, 0.0);
        assert_eq!(mstar_norm_of_constant(1.0, 2.0).unwrap(), 1.0);
        assert!(mstar_norm(&zero, 2.5, 1e-6).is_err());
        let phi = BStarFunction::constrained(&[(-1.0, 1.0), (2.0, 2.0)]).unwrap();
        let r = mstar_norm(&phi, 2.0, 1e-6).unwrap();
        assert!(r.norm > 0.0 && r.integral_error <= 1e-6);
    }

    #[test]
    fn norm_of_single_dilation_matches_known_square_integral() {
        // ∫₁^∞ {t}² dt/t² = ln 2π − γ − 1
        let phi = BStarFunction::unconstrained(&[(1.0, 1.0)]).unwrap();
        let r = mstar_norm(&phi, 2.0, 1e-6).unwrap();
        let expected = (2.0 * std::f64::consts::PI).ln() - 0.577_215_664_901_532_9 - 1.0;
        assert!((r.integral - expected).abs() <= r.integral_error);
        let r15 = mstar_norm(&phi, 1.5, 1e-6).unwrap();
        assert!(r15.integral > r.integral);
    }
}
