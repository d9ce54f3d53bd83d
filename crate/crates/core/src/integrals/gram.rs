//! Gram systems of the basis `b_k(t) = {t/l_k}` under `dt/t²`.
//!
//! For a commensurable pair `l_j/l_i = P/Q` the product `{t/l_i}{t/l_j}` has
//! period `L = P·l_i = Q·l_j`. The entry is then the exact segment integral
//! over `(1, L]` plus the periodic remainder
//!
//! `∫_L^∞ g(t) dt/t² = L^{-2} ∫_0^L g(x) ψ₁(1 + x/L) dx`,
//!
//! which follows from `Σ_{j≥1} (j + y)^{-2} = ψ₁(1 + y)`. The smooth factor
//! ψ₁ is integrated per segment by Gauss–Legendre at two orders; their
//! difference is the quadrature error bound.
//!
//! Otherwise the integral is truncated at `T`. The tails of the linear parts
//! are known analytically and the centred product `({t/a}−½)({t/b}−½)` is
//! bounded by `1/4`, so its tail contributes at most `1/(4T)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde_json::json;

use super::constants::lambda;
use super::moment::{lemma1_moment, MAX_SEGMENTS};
use super::segments::{fractional_tail, walk_segments, weighted_moments};
use crate::bstar::{COINCIDENCE_TOLERANCE, COMMENSURABILITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::numeric::{rational_approximation, trigamma, CompensatedSum, GaussLegendre, EPS};

/// Largest `P + Q` for which the periodic route is used.
pub const MAX_PERIOD_SEGMENTS: u64 = 2_000_000;

const PERIOD_GAUSS_ORDERS: (usize, usize) = (12, 20);

/// Certified Gram system for a list of distinct dilations.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSystem {
    pub dilations: Vec<f64>,
    /// `G_ij = ∫₁^∞ {t/l_i}{t/l_j} dt/t²`.
    pub gram: DMatrix<f64>,
    /// `g_k = ⟨1, b_k⟩ = (λ + ln l_k)/l_k`.
    pub g: DVector<f64>,
    /// `c_k = 1/l_k`.
    pub c: DVector<f64>,
    pub entry_error_bounds: DMatrix<f64>,
    pub lambda: f64,
}

/// Value and certified absolute error of one Gram entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramEntry {
    pub value: f64,
    pub error: f64,
    pub periodic: bool,
}

pub fn gram_system(dilations: &[f64], target_entry_error: f64) -> Result<GramSystem> {
    if !(target_entry_error > 0.0) {
        return Err(Error::domain(format!(
            "target error must be positive, got {target_entry_error}"
        )));
    }
    validate_dilations(dilations)?;
    let n = dilations.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let entries = pairs
        .par_iter()
        .map(|&(i, j)| gram_entry(dilations[i], dilations[j], target_entry_error))
        .collect::<Result<Vec<GramEntry>>>()?;

    let mut gram = DMatrix::zeros(n, n);
    let mut errors = DMatrix::zeros(n, n);
    for (&(i, j), e) in pairs.iter().zip(&entries) {
        gram[(i, j)] = e.value;
        gram[(j, i)] = e.value;
        errors[(i, j)] = e.error;
        errors[(j, i)] = e.error;
    }
    let g = DVector::from_iterator(n, dilations.iter().map(|&l| lemma1_moment(l).expect("validated")));
    let c = DVector::from_iterator(n, dilations.iter().map(|&l| 1.0 / l));
    Ok(GramSystem {
        dilations: dilations.to_vec(),
        gram,
        g,
        c,
        entry_error_bounds: errors,
        lambda: lambda(),
    })
}

pub(crate) fn validate_dilations(dilations: &[f64]) -> Result<()> {
    if dilations.is_empty() {
        return Err(Error::domain("no dilations given"));
    }
    for &l in dilations {
        if !(l >= 1.0) || !l.is_finite() {
            return Err(Error::domain(format!("dilation must be ≥ 1, got {l}")));
        }
    }
    for w in dilations.windows(2) {
        if (w[1] - w[0]).abs() <= COINCIDENCE_TOLERANCE * w[1].abs() {
            return Err(Error::DuplicateDilation(w[1]));
        }
        if w[1] < w[0] {
            return Err(Error::domain(format!(
                "dilations must be ascending ({} after {})",
                w[1], w[0]
            )));
        }
    }
    Ok(())
}

/// `∫₁^∞ {t/a}{t/b} dt/t²`.
pub fn gram_entry(a: f64, b: f64, target: f64) -> Result<GramEntry> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if let Some((p, q)) = rational_approximation(b / a, MAX_PERIOD_SEGMENTS, COMMENSURABILITY_TOLERANCE) {
        if p + q <= MAX_PERIOD_SEGMENTS {
            let e = periodic_entry(a, b, p, q);
            if e.error <= target {
                return Ok(e);
            }
        }
    }
    truncated_entry(a, b, target)
}

fn periodic_entry(a: f64, b: f64, p: u64, q: u64) -> GramEntry {
    let period = a * p as f64;
    let b_eff = period / q as f64;
    let dil = [a, b_eff];

    let mut head = CompensatedSum::default();
    let mut head_mag = 0.0;
    if period > 1.0 {
        walk_segments(&dil, 1.0, period, |u, v, x| {
            let part = product_segment(x[0], x[1], a, b_eff, u, v);
            head_mag += part.abs();
            head.add(part);
        });
    }

    let (lo, hi) = PERIOD_GAUSS_ORDERS;
    let gauss_lo = GaussLegendre::new(lo);
    let gauss_hi = GaussLegendre::new(hi);
    let mut tail_lo = CompensatedSum::default();
    let mut tail_hi = CompensatedSum::default();
    let mut tail_mag = 0.0;
    let inv_period = 1.0 / period;
    walk_segments(&dil, 0.0, period, |u, v, x| {
        let (x0, y0) = (x[0], x[1]);
        let f = |s: f64| {
            let w = s - u;
            (x0 + w / a) * (y0 + w / b_eff) * trigamma(1.0 + s * inv_period)
        };
        let ql = gauss_lo.integrate(u, v, f);
        let qh = gauss_hi.integrate(u, v, f);
        tail_lo.add(ql);
        tail_hi.add(qh);
        tail_mag += qh.abs();
    });
    let scale = inv_period * inv_period;
    let tail = tail_hi.value() * scale;
    let quadrature = (tail_hi.value() - tail_lo.value()).abs() * scale;
    let rounding = 32.0 * EPS * (head_mag + tail_mag * scale);
    // b is replaced by L/Q; moving breakpoints by a relative δ changes the
    // entry by O(δ log L).
    let perturbation = 4.0 * ((b - b_eff) / b).abs() * (2.0 + period.ln());
    GramEntry {
        value: head.value() + tail,
        error: quadrature + rounding + perturbation,
        periodic: true,
    }
}

/// `∫_u^v (x + (t−u)/a)(y + (t−u)/b) dt/t²`.
fn product_segment(x: f64, y: f64, a: f64, b: f64, u: f64, v: f64) -> f64 {
    let [m0, m1, m2] = weighted_moments(u, v);
    x * y * m0 + (x / b + y / a) * m1 + m2 / (a * b)
}

fn truncated_entry(a: f64, b: f64, target: f64) -> Result<GramEntry> {
    // centred-product tail 1/(4T) must fit in half the budget
    let t_end = (0.5 / target).max(16.0 * b);
    let rate = 1.0 / a + 1.0 / b;
    if t_end * rate > MAX_SEGMENTS as f64 {
        let reachable = MAX_SEGMENTS as f64 / rate;
        return Err(Error::PrecisionUnreachable {
            target,
            achieved: 0.25 / reachable,
        });
    }
    let mut head = CompensatedSum::default();
    let mut head_mag = 0.0;
    walk_segments(&[a, b], 1.0, t_end, |u, v, x| {
        let part = product_segment(x[0], x[1], a, b, u, v);
        head_mag += part.abs();
        head.add(part);
    });
    // {a}{b} = (ã)(b̃) + (ã + b̃)/2 + 1/4 with ã = {t/a} − 1/2
    let (ta, ea) = fractional_tail(a, t_end);
    let (tb, eb) = fractional_tail(b, t_end);
    let half = 0.5 / t_end;
    let tail = 0.5 * (ta - half) + 0.5 * (tb - half) + 0.25 / t_end;
    let error = 0.25 / t_end + 0.5 * (ea + eb) + 32.0 * EPS * head_mag;
    if error > target {
        return Err(Error::PrecisionUnreachable {
            target,
            achieved: error,
        });
    }
    Ok(GramEntry {
        value: head.value() + tail,
        error,
        periodic: false,
    })
}

impl GramSystem {
    pub fn len(&self) -> usize {
        self.dilations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dilations.is_empty()
    }

    /// The system restricted to the first `n` dilations.
    pub fn leading(&self, n: usize) -> GramSystem {
        GramSystem {
            dilations: self.dilations[..n].to_vec(),
            gram: self.gram.view((0, 0), (n, n)).into_owned(),
            g: self.g.rows(0, n).into_owned(),
            c: self.c.rows(0, n).into_owned(),
            entry_error_bounds: self.entry_error_bounds.view((0, 0), (n, n)).into_owned(),
            lambda: self.lambda,
        }
    }

    /// `hᵀ G h`.
    pub fn quadratic_form(&self, h: &DVector<f64>) -> f64 {
        h.dot(&(&self.gram * h))
    }

    /// `Σ |h_i||h_j| E_ij`, the certified error of [`Self::quadratic_form`]
    /// (plus rounding).
    pub fn quadratic_form_error(&self, h: &DVector<f64>) -> f64 {
        let abs = h.abs();
        let abs_gram = self.gram.abs();
        abs.dot(&(&self.entry_error_bounds * &abs)) + 4.0 * EPS * (self.len() as f64) * abs.dot(&(abs_gram * &abs))
    }

    pub fn max_entry_error(&self) -> f64 {
        self.entry_error_bounds.max()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
            (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
        };
        json!({
            "dilations": self.dilations,
            "gram": rows(&self.gram),
            "g": self.g.iter().copied().collect::<Vec<f64>>(),
            "c": self.c.iter().copied().collect::<Vec<f64>>(),
            "entry_error_bounds": rows(&self.entry_error_bounds),
            "lambda": self.lambda,
        })
    }

    /// One row per dilation: `i,l,g,c,G_1..G_N,E_1..E_N`.
    pub fn to_csv(&self) -> String {
        let n = self.len();
        let mut out = String::from("i,l,g,c");
        for j in 1..=n {
            out.push_str(&format!(",G_{j}"));
        }
        for j in 1..=n {
            out.push_str(&format!(",E_{j}"));
        }
        out.push('\n');
        for i in 0..n {
            out.push_str(&format!(
                "{},{:?},{:?},{:?}",
                i + 1,
                self.dilations[i],
                self.g[i],
                self.c[i]
            ));
            for j in 0..n {
                out.push_str(&format!(",{:?}", self.gram[(i, j)]));
            }
            for j in 0..n {
                out.push_str(&format!(",{:?}", self.entry_error_bounds[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}
