//! Owen's T function.
//!
//! T(h, a) = (2π)⁻¹ ∫₀ᵃ exp(−h²(1+t²)/2) / (1+t²) dt
//!
//! For |a| ≤ 1 the integral is evaluated with 64-point Gauss–Legendre.
//! Larger |a| is folded back with
//! T(h, a) = ½[Φ(h) + Φ(ah)] − Φ(h)Φ(ah) − T(ah, 1/a),
//! written in upper-tail form so that no cancellation occurs for large h.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::normal::norm_sf;

const GL_ORDER: usize = 64;

struct GaussLegendre {
    nodes: [f64; GL_ORDER],
    weights: [f64; GL_ORDER],
}

/// Nodes and weights on [−1, 1], found by Newton iteration on P₆₄.
fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    })
}

/// Owen's T function.
pub fn owen_t(h: f64, a: f64) -> f64 {
    if a == 0.0 || h.is_nan() || a.is_nan() {
        return if a == 0.0 { 0.0 } else { f64::NAN };
    }
    // T is even in h and odd in a
    let h = h.abs();
    let (sign, a) = if a < 0.0 { (-1.0, -a) } else { (1.0, a) };
    sign * owen_t_positive(h, a)
}

fn owen_t_positive(h: f64, a: f64) -> f64 {
    if h > 40.0 {
        return 0.0;
    }
    if a.is_infinite() {
        return 0.5 * norm_sf(h);
    }
    if a <= 1.0 {
        return owen_t_quadrature(h, a);
    }
    let ah = a * h;
    let p = norm_sf(h);
    let q = norm_sf(ah);
    0.5 * (p + q) - p * q - owen_t_quadrature(ah, 1.0 / a)
}

fn owen_t_quadrature(h: f64, a: f64) -> f64 {
    if h > 40.0 {
        return 0.0;
    }
    let rule = gauss_legendre();
    let half = 0.5 * a;
    let hh = -0.5 * h * h;
    let mut sum = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let t = half * (x + 1.0);
        let s = 1.0 + t * t;
        sum += w * (hh * s).exp() / s;
    }
    sum * half / (2.0 * PI)
}
