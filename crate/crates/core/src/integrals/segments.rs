//! Exact integration of piecewise polynomials against `dt/t²`.
//!
//! Between consecutive points of `{m·l_k}` every `{t/l_k}` is linear, so each
//! integrand of interest is a polynomial in `t − u` over `t²` and integrates
//! in closed form.

use crate::bstar::COINCIDENCE_TOLERANCE;

/// `[∫_u^v dt/t², ∫_u^v (t−u)/t² dt, ∫_u^v (t−u)²/t² dt]`.
pub(crate) fn weighted_moments(u: f64, v: f64) -> [f64; 3] {
    let d = v - u;
    let r = d / u;
    let m0 = d / (u * v);
    let (m1, m2) = if r < 0.1 {
        // ln(1+r) − r/(1+r) = Σ_{k≥2} (−1)^k (k−1)/k r^k
        // r − 2 ln(1+r) + r/(1+r) = Σ_{k≥3} (−1)^{k+1} (k−2)/k r^k
        let mut a = 0.0;
        let mut b = 0.0;
        let mut pow = r * r;
        for k in 2..40 {
            let kf = k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let ta = sign * (kf - 1.0) / kf * pow;
            let tb = if k >= 3 { -sign * (kf - 2.0) / kf * pow } else { 0.0 };
            a += ta;
            b += tb;
            if ta.abs() < 1e-18 * a.abs() {
                break;
            }
            pow *= r;
        }
        (a, u * b)
    } else {
        let ln = r.ln_1p();
        let q = r / (1.0 + r);
        (ln - q, u * (r - 2.0 * ln + q))
    };
    [m0, m1, m2]
}

/// Walks the maximal intervals of `(start, end]` on which every `⌊t/l_k⌋` is
/// constant. `visit(u, v, local)` receives `local[k] = u/l_k − ⌊u/l_k⌋`, the
/// right limit of `{t/l_k}` at `u`. Returns the number of intervals.
pub(crate) fn walk_segments(dilations: &[f64], start: f64, end: f64, mut visit: impl FnMut(f64, f64, &[f64])) -> u64 {
    let n = dilations.len();
    let mut floors: Vec<f64> = dilations
        .iter()
        .map(|&l| {
            let mut m = (start / l).floor();
            if (m + 1.0) * l <= start * (1.0 + COINCIDENCE_TOLERANCE) {
                m += 1.0;
            }
            m
        })
        .collect();
    let mut local = vec![0.0; n];
    let mut u = start;
    let mut count = 0;
    while u < end {
        let mut v = end;
        for (k, &l) in dilations.iter().enumerate() {
            v = v.min((floors[k] + 1.0) * l);
        }
        for (k, &l) in dilations.iter().enumerate() {
            local[k] = u / l - floors[k];
        }
        if v > u {
            visit(u, v, &local);
            count += 1;
        }
        let tol = COINCIDENCE_TOLERANCE * v.abs().max(1.0);
        for (k, &l) in dilations.iter().enumerate() {
            if (floors[k] + 1.0) * l <= v + tol {
                floors[k] += 1.0;
            }
        }
        u = v;
        if (end - u).abs() <= tol {
            break;
        }
    }
    count
}

/// `∫_T^∞ {t/l} dt/t² ≈ 1/(2T) − S(T)/T² − l/(12T²)` with
/// `S(T) = l({T/l}² − {T/l})/2`; returns `(estimate, bound)` where the bound
/// `l²/(6T³)` covers the remainder of the second integration by parts.
pub(crate) fn fractional_tail(l: f64, t: f64) -> (f64, f64) {
    let f = crate::bstar::frac(t / l);
    let s = 0.5 * l * (f * f - f);
    let t2 = t * t;
    (0.5 / t - s / t2 - l / (12.0 * t2), l * l / (6.0 * t2 * t))
}
