//! Browser bindings for `nblab`: ξ on the critical line, the step profile and
//! moment of a B* function, and distances for integer dilations.
//!
//! Each export wraps a plain function returning `Result<_, String>` so the
//! logic can be tested natively.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use nblab::analytic::{find_critical_zeros, xi, ComplexPoint};
use nblab::approx::{sweep, DilationFamily};
use nblab::bstar::BStarFunction;
use nblab::cli::parse_terms;
use nblab::integrals::bstar_moment;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest sweep size the page may request.
pub const MAX_SWEEP_N: usize = 80;

/// Largest number of samples along the critical line.
pub const MAX_XI_STEPS: usize = 20_000;

/// `[t_0, Re ξ(½ + i t_0), t_1, …]` on an even grid, then the zeros found
/// in `(0, t_max]` as JSON.
pub fn xi_samples(t_min: f64, t_max: f64, steps: usize) -> Result<String, String> {
    if !(t_max > t_min) || !(t_min >= 0.0) || !t_max.is_finite() {
        return Err(format!("need 0 ≤ t_min < t_max, got [{t_min}, {t_max}]"));
    }
    if !(2..=MAX_XI_STEPS).contains(&steps) {
        return Err(format!("steps must lie in 2..={MAX_XI_STEPS}"));
    }
    let mut t_values = Vec::with_capacity(steps);
    let mut xi_values = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64;
        let point = ComplexPoint::new(0.5, t).map_err(|e| e.to_string())?;
        let r = xi(point).map_err(|e| e.to_string())?;
        t_values.push(t);
        xi_values.push(r.value.re);
    }
    let zeros: Vec<f64> = find_critical_zeros(t_max, 1e-9)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|&z| z >= t_min)
        .collect();
    Ok(json!({ "t": t_values, "xi": xi_values, "zeros": zeros }).to_string())
}

/// Step profile of the constrained function given as `h:l,…` on `(1, t_max]`
/// together with its first moment.
pub fn profile(terms: &str, t_max: f64) -> Result<String, String> {
    let pairs = parse_terms(terms)?;
    let phi = BStarFunction::constrained(&pairs).map_err(|e| e.to_string())?;
    let breakpoints_estimate: f64 = phi.dilations().iter().map(|l| t_max / l).sum();
    if breakpoints_estimate > 1e5 {
        return Err("too many breakpoints for display; lower t_max".into());
    }
    let steps = phi.step_profile(t_max).map_err(|e| e.to_string())?;
    let moment = bstar_moment(&phi).map_err(|e| e.to_string())?;
    Ok(json!({
        "function": phi,
        "profile": steps,
        "limit_at_one": phi.limit_at_one(),
        "moment": moment,
    })
    .to_string())
}

/// Sweep records for dilations `1..N`, `N = 1..=n_max`.
pub fn integer_sweep(n_max: usize) -> Result<String, String> {
    if n_max == 0 || n_max > MAX_SWEEP_N {
        return Err(format!("N must lie in 1..={MAX_SWEEP_N}"));
    }
    let ns: Vec<usize> = (1..=n_max).collect();
    let records = sweep(&DilationFamily::Integers, &ns, 1e-12).map_err(|e| e.to_string())?;
    serde_json::to_string(&records).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn xi_critical_line(t_min: f64, t_max: f64, steps: usize) -> Result<String, JsError> {
    xi_samples(t_min, t_max, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn step_profile(terms: &str, t_max: f64) -> Result<String, JsError> {
    profile(terms, t_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep_integers(n_max: usize) -> Result<String, JsError> {
    integer_sweep(n_max).map_err(|e| JsError::new(&e))
}
