//! Finite combinations of dilated fractional parts.
//!
//! `BStarFunction` is `φ(t) = Σ h_k {t/l_k}` on `(1, ∞)` with `l_k ≥ 1`;
//! `BFunction` is `φ(t) = Σ c_k {θ_k/t}` on `(0, 1)` with `θ_k ∈ (0, 1]`.
//! The map `t ↦ 1/t` with `h_k = c_k`, `l_k = 1/θ_k` carries one onto the
//! other. A function flagged `constrained` satisfies `Σ h_k/l_k = 0`, which
//! makes it a right-continuous step function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::EPS;

/// Tolerance on `Σ h_k/l_k` (relative to `max(1, Σ |h_k/l_k|)`).
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;

/// Relative tolerance for treating two breakpoints or dilations as equal.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-12;

/// Relative tolerance for recognising a ratio of dilations as rational.
pub const COMMENSURABILITY_TOLERANCE: f64 = 64.0 * f64::EPSILON;

/// `{x} = x − ⌊x⌋`, with arguments within rounding of an integer sent to 0.
pub fn frac(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 4.0 * EPS * x.abs().max(1.0) {
        return 0.0;
    }
    x - x.floor()
}

fn same_point(a: f64, b: f64) -> bool {
    (a - b).abs() <= COINCIDENCE_TOLERANCE * a.abs().max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BStarTerm {
    pub h: f64,
    pub l: f64,
}

/// `φ(t) = Σ h_k {t/l_k}` on `(1, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BStarWire", into = "BStarWire")]
pub struct BStarFunction {
    terms: Vec<BStarTerm>,
    constrained: bool,
}

#[derive(Serialize, Deserialize)]
struct BStarWire {
    terms: Vec<BStarTerm>,
    constrained: bool,
}

impl TryFrom<BStarWire> for BStarFunction {
    type Error = Error;

    fn try_from(w: BStarWire) -> Result<Self> {
        BStarFunction::new(w.terms, w.constrained)
    }
}

impl From<BStarFunction> for BStarWire {
    fn from(f: BStarFunction) -> Self {
        BStarWire {
            terms: f.terms,
            constrained: f.constrained,
        }
    }
}

impl BStarFunction {
    /// Sorts by dilation and merges equal dilations by adding coefficients.
    pub fn new(terms: impl IntoIterator<Item = BStarTerm>, constrained: bool) -> Result<Self> {
        let mut terms: Vec<BStarTerm> = terms.into_iter().collect();
        if terms.is_empty() {
            return Err(Error::domain("a B* function needs at least one term"));
        }
        for t in &terms {
            if !t.h.is_finite() || !t.l.is_finite() {
                return Err(Error::domain(format!("non-finite term (h = {}, l = {})", t.h, t.l)));
            }
            if t.l < 1.0 {
                return Err(Error::domain(format!("dilation {} is below 1", t.l)));
            }
        }
        terms.sort_by(|a, b| a.l.total_cmp(&b.l));
        let mut merged: Vec<BStarTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if same_point(last.l, t.l) => last.h += t.h,
                _ => merged.push(t),
            }
        }
        let f = BStarFunction {
            terms: merged,
            constrained,
        };
        if constrained {
            let scale = f.terms.iter().map(|t| (t.h / t.l).abs()).sum::<f64>().max(1.0);
            let sum = f.constraint_sum();
            if sum.abs() > CONSTRAINT_TOLERANCE * scale {
                return Err(Error::ConstraintViolated(sum));
            }
        }
        Ok(f)
    }

    pub fn constrained(terms: &[(f64, f64)]) -> Result<Self> {
        Self::new(terms.iter().map(|&(h, l)| BStarTerm { h, l }), true)
    }

    pub fn unconstrained(terms: &[(f64, f64)]) -> Result<Self> {
        Self::new(terms.iter().map(|&(h, l)| BStarTerm { h, l }), false)
    }

    /// Builds a constrained function from arbitrary coefficients by removing
    /// their component along `c = (1/l_k)`.
    pub fn projected(terms: &[(f64, f64)]) -> Result<Self> {
        let raw = Self::unconstrained(terms)?;
        let c: Vec<f64> = raw.terms.iter().map(|t| 1.0 / t.l).collect();
        let cc: f64 = c.iter().map(|x| x * x).sum();
        let ch: f64 = raw.terms.iter().zip(&c).map(|(t, ck)| t.h * ck).sum();
        let projected = raw.terms.iter().zip(&c).map(|(t, ck)| BStarTerm {
            h: t.h - ch / cc * ck,
            l: t.l,
        });
        Self::new(projected, true)
    }

    pub fn terms(&self) -> &[BStarTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constrained(&self) -> bool {
        self.constrained
    }

    pub fn dilations(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.l).collect()
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.h).collect()
    }

    /// `Θ_k = h_k / l_k`.
    pub fn thetas(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.h / t.l).collect()
    }

    /// `Σ h_k / l_k`, the slope of φ between breakpoints.
    pub fn constraint_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.h / t.l).sum()
    }

    /// `Σ |h_k|`, a bound on `|φ|`.
    pub fn abs_coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.h.abs()).sum()
    }

    /// φ(t) for `t > 1`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 1.0) || !t.is_finite() {
            return Err(Error::domain(format!("B* functions live on (1, ∞), got t = {t}")));
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.h * frac(t / term.l)).sum()
    }

    /// `φ(1+0) = Σ_{l_k > 1} h_k / l_k`; terms with `l_k = 1` vanish at 1⁺.
    pub fn limit_at_one(&self) -> f64 {
        self.terms.iter().filter(|t| t.l > 1.0).map(|t| t.h / t.l).sum()
    }

    /// Same terms with `θ_k = 1/l_k`, so that the result at `t` equals `self` at `1/t`.
    pub fn to_b(&self) -> BFunction {
        BFunction {
            terms: self
                .terms
                .iter()
                .map(|t| BTerm {
                    c: t.h,
                    theta: 1.0 / t.l,
                })
                .collect(),
            constrained: self.constrained,
        }
    }

    /// Piecewise-constant structure on `(1, T]`.
    pub fn step_profile(&self, t_max: f64) -> Result<StepProfile> {
        step_profile(self, t_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BTerm {
    pub c: f64,
    pub theta: f64,
}

/// `φ(t) = Σ c_k {θ_k/t}` on `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BFunction {
    terms: Vec<BTerm>,
    constrained: bool,
}

impl BFunction {
    pub fn new(terms: impl IntoIterator<Item = BTerm>, constrained: bool) -> Result<Self> {
        let terms: Vec<BTerm> = terms.into_iter().collect();
        if terms.is_empty() {
            return Err(Error::domain("a B function needs at least one term"));
        }
        for t in &terms {
            if !t.c.is_finite() || !t.theta.is_finite() {
                return Err(Error::domain(format!("non-finite term (c = {}, θ = {})", t.c, t.theta)));
            }
            if !(t.theta > 0.0 && t.theta <= 1.0) {
                return Err(Error::domain(format!("θ = {} is outside (0, 1]", t.theta)));
            }
        }
        let f = BFunction { terms, constrained };
        if constrained {
            let scale = f.terms.iter().map(|t| (t.c * t.theta).abs()).sum::<f64>().max(1.0);
            let sum = f.constraint_sum();
            if sum.abs() > CONSTRAINT_TOLERANCE * scale {
                return Err(Error::ConstraintViolated(sum));
            }
        }
        Ok(f)
    }

    pub fn from_pairs(terms: &[(f64, f64)], constrained: bool) -> Result<Self> {
        Self::new(terms.iter().map(|&(c, theta)| BTerm { c, theta }), constrained)
    }

    pub fn terms(&self) -> &[BTerm] {
        &self.terms
    }

    pub fn is_constrained(&self) -> bool {
        self.constrained
    }

    /// `Σ c_k θ_k`.
    pub fn constraint_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.c * t.theta).sum()
    }

    /// φ(t) for `0 < t < 1`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::domain(format!("B functions live on (0, 1), got t = {t}")));
        }
        Ok(self.terms.iter().map(|term| term.c * frac(term.theta / t)).sum())
    }

    /// The B* function ψ with `ψ(t) = φ(1/t)`.
    pub fn to_bstar(&self) -> Result<BStarFunction> {
        transform_b_to_bstar(self)
    }
}

/// Change of variables `t ↦ 1/t`: `h_k = c_k`, `l_k = 1/θ_k`.
pub fn transform_b_to_bstar(phi: &BFunction) -> Result<BStarFunction> {
    let terms = phi.terms.iter().map(|t| BStarTerm {
        h: t.c,
        l: 1.0 / t.theta,
    });
    BStarFunction::new(terms, phi.constrained)
}

/// Right-continuous step structure of a constrained B* function on `(1, T]`.
///
/// `values[0]` is the value on `(1, b_0)`, and `values[i + 1]` the value on
/// `[b_i, b_{i+1})` (the last interval ends at `T`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepProfile {
    pub t_max: f64,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    /// `(b_i, −Σ h_k)` over the terms with a breakpoint at `b_i`.
    pub jumps: Vec<(f64, f64)>,
}

impl StepProfile {
    /// Interval value containing `t` (right-continuous).
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        self.values[idx]
    }
}

/// Breakpoints `m·l_k ∈ (1, T]` with coincident points merged.
pub fn step_profile(phi: &BStarFunction, t_max: f64) -> Result<StepProfile> {
    if !(t_max > 1.0) || !t_max.is_finite() {
        return Err(Error::domain(format!("profile end must exceed 1, got {t_max}")));
    }
    if !phi.is_constrained() {
        return Err(Error::NotConstrained);
    }

    let mut events: Vec<(f64, usize)> = Vec::new();
    for (k, term) in phi.terms.iter().enumerate() {
        let count = (t_max / term.l).floor() as u64 + 1;
        for m in 1..=count {
            let point = m as f64 * term.l;
            if point > 1.0 && (point <= t_max || same_point(point, t_max)) {
                events.push((point, k));
            }
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut breakpoints: Vec<f64> = Vec::new();
    let mut jumps: Vec<(f64, f64)> = Vec::new();
    for (point, k) in events {
        let h = phi.terms[k].h;
        match breakpoints.last() {
            Some(&last) if same_point(last, point) => jumps.last_mut().expect("paired").1 -= h,
            _ => {
                breakpoints.push(point);
                jumps.push((point, -h));
            }
        }
    }

    let mut values = Vec::with_capacity(breakpoints.len() + 1);
    let mut left = 1.0;
    for &b in breakpoints.iter().chain(std::iter::once(&t_max)) {
        if b > left {
            values.push(phi.eval_unchecked(0.5 * (left + b)));
        } else {
            // Degenerate last interval [T, T]: right limit at T.
            values.push(phi.eval_unchecked(b));
        }
        left = b;
    }
    Ok(StepProfile {
        t_max,
        breakpoints,
        values,
        jumps,
    })
}
