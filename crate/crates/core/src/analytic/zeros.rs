use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::xi::xi_unchecked;
use crate::error::{Error, Result};
use crate::numeric::EPS;

/// Grid step of the sign-change scan on the critical line.
pub const ZERO_SCAN_STEP: f64 = 0.05;

/// A refined sign change of `t ↦ ξ(1/2 + it)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroBracket {
    pub lo: f64,
    pub hi: f64,
    /// Midpoint of the final bracket; the reported ordinate.
    pub t: f64,
    /// `|ξ(1/2 + it)|` at the reported ordinate.
    pub xi_abs: f64,
    /// `max(|ξ(lo)|, |ξ(hi)|)`; `xi_abs` stays below this for a simple zero.
    pub threshold: f64,
}

/// Ordinates `0 < t₁ < … ≤ t_max` of sign changes of ξ on the critical line,
/// each refined to a bracket of width at most `tol`.
pub fn find_critical_zeros(t_max: f64, tol: f64) -> Result<Vec<f64>> {
    Ok(critical_zero_brackets(t_max, tol)?.into_iter().map(|b| b.t).collect())
}

/// Same search as [`find_critical_zeros`], keeping the brackets.
pub fn critical_zero_brackets(t_max: f64, tol: f64) -> Result<Vec<ZeroBracket>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::domain(format!("t_max must be positive, got {t_max}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tol must be positive, got {tol}")));
    }
    let floor = 8.0 * EPS * t_max.max(1.0);
    if tol < floor {
        return Err(Error::PrecisionUnreachable {
            target: tol,
            achieved: floor,
        });
    }

    let steps = (t_max / ZERO_SCAN_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| (i as f64 * ZERO_SCAN_STEP).min(t_max)).collect();
    let values = grid
        .par_iter()
        .map(|&t| critical_value(t))
        .collect::<Result<Vec<f64>>>()?;

    let brackets: Vec<(f64, f64, f64, f64)> = grid
        .windows(2)
        .zip(values.windows(2))
        .filter(|(t, _)| t[1] > t[0])
        .filter(|(_, v)| v[0] != 0.0 && v[0].signum() != v[1].signum())
        .map(|(t, v)| (t[0], t[1], v[0], v[1]))
        .collect();

    brackets
        .into_par_iter()
        .map(|(lo, hi, f_lo, f_hi)| bisect(lo, hi, f_lo, f_hi, tol))
        .collect()
}

fn critical_value(t: f64) -> Result<f64> {
    Ok(xi_unchecked(Complex64::new(0.5, t))?.0.re)
}

fn bisect(mut lo: f64, mut hi: f64, mut f_lo: f64, mut f_hi: f64, tol: f64) -> Result<ZeroBracket> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::PrecisionUnreachable {
                target: tol,
                achieved: hi - lo,
            });
        }
        let f_mid = critical_value(mid)?;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            f_lo = 0.0;
            f_hi = 0.0;
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok(ZeroBracket {
        lo,
        hi,
        t,
        xi_abs: critical_value(t)?.abs(),
        threshold: f_lo.abs().max(f_hi.abs()),
    })
}
