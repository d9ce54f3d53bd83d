//! Reference computations written independently of the library.
#![allow(dead_code, clippy::excessive_precision, clippy::needless_range_loop)]

use num_complex::Complex64;
use rand::Rng;

/// `b[2k] = B_{2k}` from `B_{2k} = (−1)^{k+1} 2 (2k)! ζ(2k) / (2π)^{2k}`,
/// with `ζ(2k)` summed directly for `2k ≥ 6`; odd entries are zero.
pub fn bernoulli(max: usize) -> Vec<f64> {
    let mut b = vec![0.0; max + 1];
    b[0] = 1.0;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut fact = 1.0;
    for n in 1..=max {
        fact *= n as f64;
        if n % 2 == 1 || n < 6 {
            continue;
        }
        let zeta: f64 = (1..1000).rev().map(|j| (j as f64).powi(-(n as i32))).sum();
        let sign = if (n / 2) % 2 == 1 { 1.0 } else { -1.0 };
        b[n] = sign * 2.0 * fact * zeta / two_pi.powi(n as i32);
    }
    if max >= 2 {
        b[2] = 1.0 / 6.0;
    }
    if max >= 4 {
        b[4] = -1.0 / 30.0;
    }
    b
}

/// `ln Γ(z)` by upward recurrence to `Re z ≥ 20` and the Stirling series.
pub fn ln_gamma_stirling(z: Complex64) -> Complex64 {
    let b = bernoulli(16);
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 20.0 {
        shift += w.ln();
        w += 1.0;
    }
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let mut series = (w - 0.5) * w.ln() - w + half_ln_2pi;
    let mut pow = w;
    let w2 = w * w;
    for k in 1..=8 {
        let kk = 2 * k;
        series += b[kk] / ((kk * (kk - 1)) as f64 * pow);
        pow *= w2;
    }
    series - shift
}

/// `Γ(z)`, reflected for `Re z < 1/2`.
pub fn gamma_oracle(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = std::f64::consts::PI;
        pi / ((pi * z).sin() * ln_gamma_stirling(1.0 - z).exp())
    } else {
        ln_gamma_stirling(z).exp()
    }
}

/// Euler–Maclaurin ζ(s) with a cut-off adapted to `|s|`; reflected for
/// `Re s < 0`, where the direct sum cancels badly.
pub fn zeta_oracle(s: Complex64) -> Complex64 {
    if s.re < 0.0 {
        let pi = std::f64::consts::PI;
        let pre = (s * 2f64.ln() + (s - 1.0) * pi.ln()).exp();
        return pre * (0.5 * pi * s).sin() * gamma_oracle(1.0 - s) * zeta_oracle(1.0 - s);
    }
    let b = bernoulli(24);
    let n = 40 + (s.norm() as usize);
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_pow = (-s * nf.ln()).exp();
    sum += n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    // Σ B_{2k}/(2k)! s(s+1)…(s+2k−2) N^{−s−2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n_pow / nf;
    for k in 1..=12 {
        let kk = 2 * k;
        sum += b[kk] / fact * rising * npow;
        rising *= (s + (kk - 1) as f64) * (s + kk as f64);
        fact *= ((kk + 1) * (kk + 2)) as f64;
        npow /= nf * nf;
    }
    sum
}

/// `ξ(s) = s(s−1)/2 · π^{−s/2} Γ(s/2) ζ(s)`, away from `s = 0, 1`.
pub fn xi_oracle(s: Complex64) -> Complex64 {
    let pi = std::f64::consts::PI;
    0.5 * s * (s - 1.0) * (-0.5 * s * pi.ln()).exp() * gamma_oracle(0.5 * s) * zeta_oracle(s)
}

/// Brackets of width `tol` around sign changes of `Re ξ(½ + it)` on `(t_min, t_max]`.
pub fn critical_zero_oracle(t_min: f64, t_max: f64, tol: f64) -> Vec<(f64, f64)> {
    let f = |t: f64| xi_oracle(Complex64::new(0.5, t)).re;
    let step = 0.02;
    let mut out = Vec::new();
    let mut a = t_min;
    let mut fa = f(a);
    while a < t_max {
        let b = (a + step).min(t_max);
        let fb = f(b);
        if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            out.push((lo, hi));
        }
        a = b;
        fa = fb;
    }
    out
}

/// Ten-point Gauss–Legendre on `[a, b]` (tabulated nodes).
pub fn gauss10(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    const X: [f64; 5] = [
        0.148_874_338_981_631_2,
        0.433_395_394_129_247_2,
        0.679_409_568_299_024_4,
        0.865_063_366_688_984_5,
        0.973_906_528_517_171_7,
    ];
    const W: [f64; 5] = [
        0.295_524_224_714_752_9,
        0.269_266_719_309_996_4,
        0.219_086_362_515_982_0,
        0.149_451_349_150_580_6,
        0.066_671_344_308_688_1,
    ];
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    X.iter()
        .zip(W)
        .map(|(&x, w)| w * (f(m - r * x) + f(m + r * x)))
        .sum::<f64>()
        * r
}

/// `∫₁^∞ {t/l} dt/t²` by quadrature over each period up to `periods·l`,
/// plus the tail `1/(2T) − l/(12T²)` at a period boundary `T`.
pub fn lemma1_quadrature(l: f64, periods: u64) -> f64 {
    let mut total = 0.0;
    if l > 1.0 {
        // Geometric panels resolve 1/(l t) on [1, l].
        let panels = 64;
        let ratio = l.powf(1.0 / panels as f64);
        let mut a = 1.0;
        for _ in 0..panels {
            let b = (a * ratio).min(l);
            total += gauss10(a, b, |t| t / l / (t * t));
            a = b;
        }
    }
    let mut sum_periods = 0.0;
    for m in (1..periods).rev() {
        let (u, v) = (m as f64 * l, (m + 1) as f64 * l);
        let mf = m as f64;
        sum_periods += gauss10(u, v, |t| (t / l - mf) / (t * t));
    }
    let t_end = periods as f64 * l;
    total + sum_periods + 0.5 / t_end - l / (12.0 * t_end * t_end)
}

/// Breakpoints `m·l_k` in `(1, T]`, sorted and merged.
pub fn breakpoints(dilations: &[f64], t_max: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    for &l in dilations {
        let mut m = 1.0;
        while m * l <= t_max {
            if m * l > 1.0 {
                pts.push(m * l);
            }
            m += 1.0;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    pts
}

/// `{x}` evaluated with an integer snap, so `m·l / l` counts as an integer.
pub fn frac(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 8.0 * f64::EPSILON * x.abs().max(1.0) {
        0.0
    } else {
        x - x.floor()
    }
}

pub fn phi_value(terms: &[(f64, f64)], t: f64) -> f64 {
    terms.iter().map(|&(h, l)| h * frac(t / l)).sum()
}

/// `∫₁^∞ {t/a}{t/b} dt/t²` by per-segment quadrature up to `T` plus the tail
/// `mean/T`, where `mean = 1/4 + 1/(12pq)` for `b/a = p/q` in lowest terms.
pub fn gram_oracle(a: u64, b: u64, t_end: f64) -> f64 {
    let (af, bf) = (a as f64, b as f64);
    let mut edges = vec![1.0];
    edges.extend(breakpoints(&[af, bf], t_end));
    if *edges.last().unwrap() < t_end {
        edges.push(t_end);
    }
    let mut sum = 0.0;
    for w in edges.windows(2).rev() {
        let (u, v) = (w[0], w[1]);
        let (fa, fb) = ((u / af).floor(), (u / bf).floor());
        sum += gauss10(u, v, |t| (t / af - fa) * (t / bf - fb) / (t * t));
    }
    let g = gcd(a, b);
    let (p, q) = ((a / g) as f64, (b / g) as f64);
    sum + (0.25 + 1.0 / (12.0 * p * q)) / t_end
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Random constrained terms: `k` dilations in `[1, l_max]` (optionally
/// including integers to create coincidences), coefficients projected so
/// that `Σ h/l = 0`.
pub fn random_constrained_terms(rng: &mut impl Rng, k: usize, l_max: f64, integer_bias: bool) -> Vec<(f64, f64)> {
    let mut ls: Vec<f64> = Vec::new();
    while ls.len() < k {
        let l = if integer_bias && rng.gen_bool(0.5) {
            rng.gen_range(1..=(l_max as u32)) as f64
        } else {
            rng.gen_range(1.0..l_max)
        };
        if ls.iter().all(|&x| (x - l).abs() > 1e-6) {
            ls.push(l);
        }
    }
    let mut h: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
    // Fix the last coefficient to enforce the constraint.
    let partial: f64 = h[..k - 1].iter().zip(&ls).map(|(h, l)| h / l).sum();
    h[k - 1] = -partial * ls[k - 1];
    h.into_iter().zip(ls).collect()
}

/// Minimum of `1 − 2gᵀh + hᵀGh` over `h = Z y` by a coarse scan followed by
/// a fine local grid with spacing `fine` in each of the (at most two)
/// null-space coordinates.
pub fn grid_search_distance(gram: &[Vec<f64>], g: &[f64], basis: &[Vec<f64>], range: f64, fine: f64) -> f64 {
    let n = g.len();
    let objective = |y: &[f64]| -> f64 {
        let h: Vec<f64> = (0..n)
            .map(|i| basis.iter().zip(y).map(|(z, yi)| z[i] * yi).sum())
            .collect();
        let gh: f64 = g.iter().zip(&h).map(|(a, b)| a * b).sum();
        let hgh: f64 = (0..n)
            .map(|i| (0..n).map(|j| h[i] * gram[i][j] * h[j]).sum::<f64>())
            .sum();
        1.0 - 2.0 * gh + hgh
    };
    let dims = basis.len();
    let scan = |centre: &[f64], half: f64, step: f64| -> (Vec<f64>, f64) {
        let count = (2.0 * half / step).round() as i64;
        let mut best = (centre.to_vec(), f64::INFINITY);
        let mut y = centre.to_vec();
        let grid = |i: i64| -half + i as f64 * step;
        if dims == 1 {
            for i in 0..=count {
                y[0] = centre[0] + grid(i);
                let v = objective(&y);
                if v < best.1 {
                    best = (y.clone(), v);
                }
            }
        } else {
            for i in 0..=count {
                for j in 0..=count {
                    y[0] = centre[0] + grid(i);
                    y[1] = centre[1] + grid(j);
                    let v = objective(&y);
                    if v < best.1 {
                        best = (y.clone(), v);
                    }
                }
            }
        }
        best
    };
    let origin = vec![0.0; dims];
    let (c1, _) = scan(&origin, range, range / 200.0);
    let (c2, _) = scan(&c1, 2.0 * range / 200.0, range / 10_000.0);
    let (_, v) = scan(&c2, 50.0 * fine, fine);
    v.max(0.0).sqrt()
}

/// Orthonormal basis of `{h : Σ h_k/l_k = 0}` by Gram–Schmidt.
pub fn constraint_null_basis(dilations: &[f64]) -> Vec<Vec<f64>> {
    let n = dilations.len();
    let c: Vec<f64> = dilations.iter().map(|l| 1.0 / l).collect();
    let mut basis: Vec<Vec<f64>> = vec![c
        .iter()
        .map(|x| x / c.iter().map(|y| y * y).sum::<f64>().sqrt())
        .collect()];
    for e in 0..n {
        let mut v = vec![0.0; n];
        v[e] = 1.0;
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.iter().map(|x| x / norm).collect());
        }
        if basis.len() == n {
            break;
        }
    }
    basis.remove(0);
    basis
}
