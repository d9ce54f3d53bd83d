//! Small numerical kernels shared by the evaluators.

use num_complex::Complex64;

pub(crate) const EPS: f64 = f64::EPSILON;

/// Even-index Bernoulli numbers `B_2, B_4, …, B_30` as exact rationals.
const BERNOULLI_EVEN: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

pub(crate) const BERNOULLI_TERMS: usize = BERNOULLI_EVEN.len();

/// `B_{2k}` for `k = 1..=15`.
pub(crate) fn bernoulli_even(k: usize) -> f64 {
    let (num, den) = BERNOULLI_EVEN[k - 1];
    num / den
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `sin(πx)` with exact reduction, so integers give exactly zero.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = (2.0 * x).round();
    let f = x - 0.5 * n;
    let q = (n as i64).rem_euclid(4);
    let a = std::f64::consts::PI * f;
    match q {
        0 => a.sin(),
        1 => a.cos(),
        2 => -a.sin(),
        _ => -a.cos(),
    }
}

/// `cos(πx)` with exact reduction, so half-odd integers give exactly zero.
pub(crate) fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// `sin(πz)` for complex `z`.
pub(crate) fn sin_pi_c(z: Complex64) -> Complex64 {
    let y = std::f64::consts::PI * z.im;
    Complex64::new(sin_pi(z.re) * y.cosh(), cos_pi(z.re) * y.sinh())
}

/// `cos(πz)` for complex `z`.
pub(crate) fn cos_pi_c(z: Complex64) -> Complex64 {
    let y = std::f64::consts::PI * z.im;
    Complex64::new(cos_pi(z.re) * y.cosh(), -sin_pi(z.re) * y.sinh())
}

/// `e^z − 1` without cancellation near `z = 0`.
pub(crate) fn expm1_c(z: Complex64) -> Complex64 {
    let ex = z.re.exp();
    let half = 0.5 * z.im;
    let re = z.re.exp_m1() * z.im.cos() - 2.0 * half.sin() * half.sin();
    Complex64::new(re, ex * z.im.sin())
}

/// `(e^z − 1)/z`, equal to 1 at the origin.
pub(crate) fn expm1_over_z(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // Taylor series; the omitted z^5/720 term is below 2e-18.
        let one = Complex64::new(1.0, 0.0);
        one + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)))
    } else {
        expm1_c(z) / z
    }
}

/// Trigamma `ψ₁(x) = Σ_{j≥0} 1/(x+j)²` for real `x > 0`.
pub(crate) fn trigamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    let mut z = x;
    while z < 12.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    // Asymptotic series: 1/z + 1/(2z²) + Σ B_{2k} / z^{2k+1}.
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv * inv2;
    for k in 1..=8 {
        series += bernoulli_even(k) * pow;
        pow *= inv2;
    }
    acc + inv + 0.5 * inv2 + series
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub(crate) struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub(crate) fn new(order: usize) -> Self {
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrates `f` over `[a, b]`.
    pub(crate) fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Best rational approximation `p/q` of `x > 0` with `q ≤ max_den` and
/// relative error at most `rel_tol`, from the continued-fraction convergents.
pub(crate) fn rational_approximation(x: f64, max_den: u64, rel_tol: f64) -> Option<(u64, u64)> {
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let a_int = a as u64;
        let h2 = a_int.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a_int.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        if ((h2 as f64 / k2 as f64) - x).abs() <= rel_tol * x {
            return Some((h2, k2));
        }
        let frac = r - a;
        if frac <= 0.0 {
            return None;
        }
        r = 1.0 / frac;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    None
}
