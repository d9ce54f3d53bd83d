//! Best approximation of the constant `1` by constrained combinations
//! `φ = Σ h_k {t/l_k}` with `Σ h_k/l_k = 0`, in the norm of `L²(dt/t²)`.
//!
//! The constraint `cᵀh = 0` is eliminated with a Householder reflection whose
//! trailing columns span `c⊥`. The reduced normal equations `ZᵀGZ y = Zᵀg` are
//! solved through a symmetric eigendecomposition; when their condition number
//! exceeds [`CONDITION_LIMIT`] the eigenvalues below `SPECTRAL_CUTOFF · λ_max`
//! are dropped. The bordered system `[G c; cᵀ 0] [h; μ] = [g; 0]` is solved by
//! LU as a cross-check.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrals::{gram_system, GramSystem};
use crate::numeric::EPS;

/// Reduced Gram condition numbers above this trigger spectral cut-off.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative eigenvalue cut-off applied beyond [`CONDITION_LIMIT`].
pub const SPECTRAL_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationResult {
    pub dilations: Vec<f64>,
    pub h_star: Vec<f64>,
    /// `‖1 − φ*‖`.
    pub distance: f64,
    /// `Σ (h_k/l_k) ln l_k`, the first moment of `φ*`.
    pub theta_log_sum: f64,
    /// `|Σ h_k/l_k|`.
    pub constraint_residual: f64,
    /// Condition number of the reduced Gram matrix `ZᵀGZ`.
    pub gram_condition: f64,
    /// Bound on `|distance² − (1 − 2gᵀh + hᵀGh)|` from the Gram entry
    /// errors and rounding.
    pub certified_error: f64,
    /// `max_k |g_k − (Gh)_k − μ c_k|`.
    pub kkt_residual: f64,
    /// Lagrange multiplier `μ`, so that `⟨1 − φ*, b_k⟩ = μ/l_k`.
    pub multiplier: f64,
    /// Absolute eigenvalue cut-off, when regularization was applied.
    pub spectral_cutoff: Option<f64>,
    /// `max_k |h_k − h_k^KKT|` against the bordered LU solve, if it succeeded.
    pub kkt_crosscheck: Option<f64>,
}

/// Solves the constrained problem over `dilations` (ascending, distinct, ≥ 2).
/// Gram entries are certified to `target_error`, and the distance must be
/// certified to it as well; the rounding part of that bound grows with `N`
/// and `|h*|`, so `1e-12` is out of reach beyond roughly a dozen integers.
pub fn best_approximation(dilations: &[f64], target_error: f64) -> Result<ApproximationResult> {
    if dilations.len() < 2 {
        return Err(Error::domain("the constraint needs at least two dilations"));
    }
    let system = gram_system(dilations, target_error)?;
    let result = solve_on_system(&system)?;
    let achieved = distance_error(&result);
    if achieved > target_error {
        return Err(Error::PrecisionUnreachable {
            target: target_error,
            achieved,
        });
    }
    Ok(result)
}

/// Certified error on `distance` implied by the error on `distance²`.
fn distance_error(result: &ApproximationResult) -> f64 {
    let e = result.certified_error;
    if result.distance > 0.0 {
        (e / result.distance).min(e.sqrt())
    } else {
        e.sqrt()
    }
}

/// Solves the constrained problem on an assembled Gram system.
pub fn solve_on_system(system: &GramSystem) -> Result<ApproximationResult> {
    let n = system.len();
    if n < 2 {
        return Ok(trivial_result(system));
    }
    let z = null_space_basis(&system.c);
    let reduced = z.transpose() * &system.gram * &z;
    let reduced = 0.5 * (&reduced + reduced.transpose());
    let rhs = z.transpose() * &system.g;

    let eigen = SymmetricEigen::new(reduced);
    let lambda_max = eigen.eigenvalues.max();
    let lambda_min = eigen.eigenvalues.min();
    if !(lambda_max > 0.0) {
        return Err(Error::SingularSystem(format!(
            "reduced Gram has no positive eigenvalue ({lambda_max:e})"
        )));
    }
    let condition = if lambda_min > 0.0 {
        lambda_max / lambda_min
    } else {
        f64::INFINITY
    };
    let floor = if condition > CONDITION_LIMIT {
        Some(SPECTRAL_CUTOFF * lambda_max)
    } else {
        None
    };

    let projected = eigen.eigenvectors.transpose() * &rhs;
    let mut y = DVector::zeros(n - 1);
    for (k, &ev) in eigen.eigenvalues.iter().enumerate() {
        if floor.is_some_and(|f| ev <= f) {
            continue;
        }
        y += eigen.eigenvectors.column(k) * (projected[k] / ev);
    }
    let h = &z * y;
    if h.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularSystem("non-finite solution".into()));
    }
    Ok(assemble(system, h, condition, floor))
}

fn trivial_result(system: &GramSystem) -> ApproximationResult {
    let h = DVector::zeros(system.len());
    assemble(system, h, 1.0, None)
}

fn assemble(system: &GramSystem, h: DVector<f64>, condition: f64, floor: Option<f64>) -> ApproximationResult {
    let gh = &system.gram * &h;
    let g_dot_h = system.g.dot(&h);
    let h_g_h = h.dot(&gh);
    let d2 = 1.0 - 2.0 * g_dot_h + h_g_h;
    let abs_h = h.abs();
    let rounding = 8.0 * EPS * (1.0 + 2.0 * system.g.abs().dot(&abs_h));
    let certified_error = system.quadratic_form_error(&h) + rounding;

    let residual = &system.g - &gh;
    let cc = system.c.dot(&system.c);
    let multiplier = if cc > 0.0 { system.c.dot(&residual) / cc } else { 0.0 };
    let kkt_residual = (&residual - &system.c * multiplier).amax();

    let theta_log_sum = system
        .dilations
        .iter()
        .zip(h.iter())
        .map(|(&l, &hk)| hk / l * l.ln())
        .sum();
    let constraint_residual = system.c.dot(&h).abs();
    let kkt_crosscheck = if system.len() >= 2 && floor.is_none() {
        bordered_solve(system).map(|hk| (&hk - &h).amax())
    } else {
        None
    };

    ApproximationResult {
        dilations: system.dilations.clone(),
        h_star: h.iter().copied().collect(),
        distance: d2.max(0.0).sqrt().min(1.0),
        theta_log_sum,
        constraint_residual,
        gram_condition: condition,
        certified_error,
        kkt_residual,
        multiplier,
        spectral_cutoff: floor,
        kkt_crosscheck,
    }
}

/// Orthonormal basis of `c⊥` as the trailing columns of a Householder
/// reflection mapping `c` onto the first axis.
fn null_space_basis(c: &DVector<f64>) -> DMatrix<f64> {
    let n = c.len();
    let norm = c.norm();
    let mut v = c / norm;
    let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += sign;
    let vv = v.dot(&v);
    let reflection = DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv);
    reflection.columns(1, n - 1).into_owned()
}

/// `h` from the bordered stationarity system.
fn bordered_solve(system: &GramSystem) -> Option<DVector<f64>> {
    let n = system.len();
    let mut a = DMatrix::zeros(n + 1, n + 1);
    a.view_mut((0, 0), (n, n)).copy_from(&system.gram);
    for k in 0..n {
        a[(k, n)] = system.c[k];
        a[(n, k)] = system.c[k];
    }
    let mut b = DVector::zeros(n + 1);
    b.rows_mut(0, n).copy_from(&system.g);
    let x = a.lu().solve(&b)?;
    let h = x.rows(0, n).into_owned();
    h.iter().all(|v| v.is_finite()).then_some(h)
}

/// `|Σ Θ_k ln l_k − 1|`. Since `dt/t²` is a probability measure this equals
/// `|∫ (1 − φ*) dm*| ≤ ‖1 − φ*‖ = distance`; at the exact optimum it equals
/// `distance²`.
pub fn necessary_condition_gap(result: &ApproximationResult) -> f64 {
    (result.theta_log_sum - 1.0).abs()
}

/// Nested dilation families; `dilations(n)` are the first `n` members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DilationFamily {
    /// `1, 2, …, N`.
    Integers,
    /// `1, r, r², …, r^{N−1}` with `r > 1`.
    Geometric { ratio: f64 },
    /// Prefixes of an ascending list.
    List { values: Vec<f64> },
}

impl DilationFamily {
    pub fn dilations(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            DilationFamily::Integers => Ok((1..=n).map(|k| k as f64).collect()),
            DilationFamily::Geometric { ratio } => {
                if !(*ratio > 1.0) || !ratio.is_finite() {
                    return Err(Error::domain(format!("geometric ratio must exceed 1, got {ratio}")));
                }
                Ok((0..n as i32).map(|k| ratio.powi(k)).collect())
            }
            DilationFamily::List { values } => {
                if values.is_empty() {
                    return Err(Error::domain("empty dilation list"));
                }
                Ok(values[..n.min(values.len())].to_vec())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DilationFamily::Integers => "integers".to_string(),
            DilationFamily::Geometric { ratio } => format!("geometric:{ratio:?}"),
            DilationFamily::List { values } => format!("list:{}", values.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub family: String,
    pub distance: f64,
    pub theta_log_sum: f64,
    pub gap: f64,
    pub gram_condition: f64,
    pub kkt_residual: f64,
    pub certified_error: f64,
    pub h_star: Vec<f64>,
}

impl SweepRecord {
    fn from_result(n: usize, family: &DilationFamily, r: &ApproximationResult) -> Self {
        SweepRecord {
            n,
            family: family.describe(),
            distance: r.distance,
            theta_log_sum: r.theta_log_sum,
            gap: necessary_condition_gap(r),
            gram_condition: r.gram_condition,
            kkt_residual: r.kkt_residual,
            certified_error: r.certified_error,
            h_star: r.h_star.clone(),
        }
    }
}

/// Solves the problem for each `N` in `n_values`. One Gram system is built
/// for the largest `N` and every solve uses its leading block, so the records
/// of a nested family are mutually consistent. Records are sorted by `N`.
pub fn sweep(family: &DilationFamily, n_values: &[usize], target_error: f64) -> Result<Vec<SweepRecord>> {
    if n_values.is_empty() {
        return Err(Error::domain("no N values given"));
    }
    if n_values.contains(&0) {
        return Err(Error::domain("N must be positive"));
    }
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let n_max = *ns.last().expect("non-empty");
    let dilations = family.dilations(n_max)?;
    let system = gram_system(&dilations, target_error)?;
    let mut records = ns
        .par_iter()
        .map(|&n| {
            let size = n.min(system.len());
            let result = solve_on_system(&system.leading(size))?;
            Ok(SweepRecord::from_result(n, family, &result))
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.n);
    Ok(records)
}

/// Tabulates records as `N,distance,theta_log_sum,gap,gram_condition`.
pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from("N,distance,theta_log_sum,gap,gram_condition\n");
    for r in records {
        out.push_str(&format!(
            "{},{:?},{:?},{:?},{:?}\n",
            r.n, r.distance, r.theta_log_sum, r.gap, r.gram_condition
        ));
    }
    out
}
