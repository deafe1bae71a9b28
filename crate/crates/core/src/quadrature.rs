//! Quadrature rules for central integrals over SU(2) and the circle.
//!
//! Central functions on SU(2) depend only on the rotation half-angle
//! `θ ∈ [0, π]`, and Weyl integration reduces the normalized Haar integral
//! to `∫ f(θ) (2/π) sin²θ dθ`. Central integrals on the circle are plain
//! averages over `[0, 2π)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Default node count for Gauss-Legendre and trapezoid rules.
pub const DEFAULT_NODES: usize = 256;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            weights[i] = w;
            nodes[n - 1 - i] = -x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f(x) dx`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Mapped nodes `θ ∈ (0, π)` paired with Weyl-measure weights, so that
    /// `Σ w_i f(θ_i) ≈ ∫ f(θ) (2/π) sin²θ dθ`.
    pub fn weyl_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * PI;
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| {
            let theta = half * (x + 1.0);
            let s = theta.sin();
            (theta, w * half * (2.0 / PI) * s * s)
        })
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, dp)
}

/// The shared 256-node rule. Built once, never mutated.
pub fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(DEFAULT_NODES))
}

/// `∫_{SU(2)} f dg` for a central `f` given in the angle coordinate.
pub fn weyl_integral<F: FnMut(f64) -> f64>(rule: &GaussLegendre, mut f: F) -> f64 {
    rule.weyl_points().map(|(theta, w)| w * f(theta)).sum()
}

/// Equispaced nodes on `[0, 2π)`; exact for trigonometric polynomials of
/// degree below `n`.
pub fn circle_points(n: usize) -> impl Iterator<Item = (f64, f64)> {
    let w = 1.0 / n as f64;
    (0..n).map(move |k| (2.0 * PI * k as f64 / n as f64, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 5, 64, 256] {
            let rule = GaussLegendre::new(n);
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n} total={total}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::new(6);
        for p in 0..12 {
            let got = rule.integrate(0.0, 1.0, |x| x.powi(p));
            assert!((got - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "p={p}");
        }
    }

    #[test]
    fn known_three_point_rule() {
        let rule = GaussLegendre::new(3);
        let r = (0.6f64).sqrt();
        assert!((rule.nodes()[0] - r).abs() < 1e-15);
        assert!(rule.nodes()[1].abs() < 1e-15);
        assert!((rule.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn weyl_measure_is_normalized() {
        let total = weyl_integral(default_rule(), |_| 1.0);
        assert!((total - 1.0).abs() < 1e-14);
        // ∫ cos²θ dμ_Weyl = 1/4
        let c2 = weyl_integral(default_rule(), |t| t.cos() * t.cos());
        assert!((c2 - 0.25).abs() < 1e-14);
    }

    #[test]
    fn circle_rule_averages_trig_polynomials() {
        let m: f64 = circle_points(16).map(|(t, w)| w * (3.0 * t).cos().powi(2)).sum();
        assert!((m - 0.5).abs() < 1e-15);
    }
}
