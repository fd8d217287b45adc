//! Gauss–Legendre rules mapped to the unit interval.

use std::f64::consts::PI;

/// Abscissae in (0, 1) with positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// `order`-point Gauss–Legendre rule on [0, 1]. Exact for polynomials of
    /// degree `2 * order - 1`.
    ///
    /// # Panics
    /// If `order` is zero.
    pub fn gauss_legendre(order: usize) -> Self {
        assert!(order > 0, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // roots are symmetric; solve for the upper half with Newton's method
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
            // map [-1, 1] -> [0, 1]
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        QuadratureGrid { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// ∫₀¹ f
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// ∫ₐᵇ f, by affine rescaling of the same rule.
    pub fn integrate_on(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let len = b - a;
        self.iter().map(|(x, w)| w * f(a + len * x)).sum::<f64>() * len
    }
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
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
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_low_moments() {
        for order in [1, 2, 5, 16, 64, 128, 257] {
            let g = QuadratureGrid::gauss_legendre(order);
            let total: f64 = g.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-14, "order {order}: {total}");
            assert!((g.integrate(|x| x) - 0.5).abs() < 1e-14);
            assert!(g.weights().iter().all(|&w| w > 0.0));
            assert!(g.nodes().iter().all(|&x| x > 0.0 && x < 1.0));
            assert!(g.nodes().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let g = QuadratureGrid::gauss_legendre(8);
        for k in 0..16 {
            let exact = 1.0 / (k as f64 + 1.0);
            let got = g.integrate(|x| x.powi(k));
            assert!((got - exact).abs() < 1e-14, "x^{k}: {got}");
        }
        // degree 16 is not integrated exactly
        assert!((g.integrate(|x| x.powi(16)) - 1.0 / 17.0).abs() > 1e-14);
    }

    #[test]
    fn smooth_integrands_converge_fast() {
        let g = QuadratureGrid::gauss_legendre(64);
        let got = g.integrate(|x| (3.0 * x).exp());
        assert!((got - ((3.0f64).exp() - 1.0) / 3.0).abs() < 1e-13);
        let got = g.integrate_on(0.0, 0.5, |x| x * x);
        assert!((got - 0.125 / 3.0).abs() < 1e-15);
    }
}
