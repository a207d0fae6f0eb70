//! Reference computations written independently of the library: adaptive
//! quadrature, bisection, brute-force statistics, and a discrepancy
//! estimator. The incomplete gamma function comes from `statrs`.

#![allow(dead_code)]

use std::f64::consts::PI;

pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Φ without error-function approximations: Marsaglia's series
/// Φ(x) = ½ + φ(x) Σ x^{2n+1}/(2n+1)!! for |x| ≤ 2, and Laplace's continued
/// fraction φ(t)/(t + 1/(t + 2/(t + …))) for the tail beyond t = |x|.
pub fn big_phi(x: f64) -> f64 {
    if x.abs() <= 2.0 {
        let (mut term, mut sum, mut k) = (x, x, 1.0);
        while term.abs() > 1e-18 * sum.abs().max(1e-300) {
            k += 2.0;
            term *= x * x / k;
            sum += term;
        }
        return 0.5 + phi(x) * sum;
    }
    let t = x.abs();
    let mut cf = t;
    for n in (1..=400).rev() {
        cf = t + n as f64 / cf;
    }
    let tail = phi(t) / cf;
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // the floor stops refinement once the estimate is at rounding level
    if depth == 0 || delta.abs() <= 15.0 * tol.max(4.0 * f64::EPSILON * (left.abs() + right.abs())) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature on a finite interval.
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Quadrature on [a, b] split into `pieces` equal parts.
pub fn quad_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| quad(&f, a + i as f64 * h, a + (i + 1) as f64 * h, tol / pieces as f64))
        .sum()
}

/// Owen's T from its defining integral.
pub fn owen_t_quad(h: f64, a: f64) -> f64 {
    quad(|x| (-0.5 * h * h * (1.0 + x * x)).exp() / (1.0 + x * x), 0.0, a, 1e-16) / (2.0 * PI)
}

/// Φ₂(x, y; ρ) = ∫_{−∞}^{x} φ(t) Φ((y − ρt)/√(1 − ρ²)) dt.
pub fn bvn_quad(x: f64, y: f64, rho: f64) -> f64 {
    let s = (1.0 - rho * rho).sqrt();
    let lo = (-12.0_f64).min(x - 1.0);
    if x <= lo {
        return 0.0;
    }
    quad_split(|t| phi(t) * big_phi((y - rho * t) / s), lo, x, 32, 1e-14)
}

/// 2 ∫_{−∞}^{x} φ(y) Φ(αy) dy.
pub fn skew_norm_cdf_quad(x: f64, alpha: f64) -> f64 {
    let lo = (-12.0_f64).min(x - 1.0);
    2.0 * quad_split(|y| phi(y) * big_phi(alpha * y), lo, x, 32, 1e-14)
}

/// Regularized upper incomplete gamma from `statrs`.
pub fn upper_gamma(a: f64, x: f64) -> f64 {
    statrs::function::gamma::gamma_ur(a, x)
}

/// Root of an increasing function on [lo, hi] by bisection.
pub fn bisect<F: Fn(f64) -> f64>(f: F, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Kendall's tau by enumerating all pairs.
pub fn brute_kendall(x: &[[f64; 2]]) -> f64 {
    let n = x.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in 0..i {
            let c = (x[i][0] - x[j][0]) * (x[i][1] - x[j][1]);
            s += c.signum() as i64;
        }
    }
    s as f64 / (n * (n - 1) / 2) as f64
}

/// Squared L2-star discrepancy of a 2-D point set (Warnock's formula).
pub fn l2_star_discrepancy_sq(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len() as f64;
    let a: f64 = pts.iter().map(|p| (1.0 - p[0] * p[0]) * (1.0 - p[1] * p[1])).sum();
    let mut b = 0.0;
    for p in pts {
        for q in pts {
            b += (1.0 - p[0].max(q[0])) * (1.0 - p[1].max(q[1]));
        }
    }
    1.0 / 9.0 - a / (2.0 * n) + b / (n * n)
}

/// Small deterministic generator for test inputs (SplitMix64).
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        ((z >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }
}
