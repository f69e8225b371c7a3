//! Composite Gauss–Legendre quadrature with panel doubling.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule of the given order by Newton iteration on the Legendre polynomial.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
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
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
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

    /// Single-panel rule on [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, f: &mut F) -> f64 {
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for k in 0..panels {
            let lo = a + h * k as f64;
            let hi = if k + 1 == panels { b } else { lo + h };
            total += self.integrate(lo, hi, &mut *f);
        }
        total
    }
}

/// P_n(x) and P_n'(x).
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre integrator that doubles the panel count until two
/// successive estimates agree to `abs_tol` or `rel_tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    rule: GaussLegendre,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Panel count of the coarsest estimate.
    pub min_panels: usize,
    /// Largest panel count tried before giving up.
    pub max_panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self::new(16, 1e-12, 1e-10)
    }
}

impl Quadrature {
    pub fn new(order: usize, abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            rule: GaussLegendre::new(order),
            abs_tol,
            rel_tol,
            min_panels: 1,
            max_panels: 1 << 14,
        }
    }

    /// Same tolerances, coarsest level starting at twice the panels.
    pub fn refined(&self) -> Self {
        let mut q = self.clone();
        q.min_panels = self.min_panels * 2;
        q.max_panels = self.max_panels * 2;
        q
    }

    pub fn rule(&self) -> &GaussLegendre {
        &self.rule
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(alloc::format!(
                "quadrature limits must be finite, got [{a}, {b}]"
            )));
        }
        let mut panels = self.min_panels.max(1);
        let mut prev = self.rule.composite(a, b, panels, &mut f);
        loop {
            panels *= 2;
            let cur = self.rule.composite(a, b, panels, &mut f);
            let residual = (cur - prev).abs();
            if !cur.is_finite() {
                return Err(Error::Quadrature { residual: f64::NAN });
            }
            if residual <= self.abs_tol || residual <= self.rel_tol * cur.abs() {
                return Ok(cur);
            }
            if panels >= self.max_panels {
                return Err(Error::Quadrature { residual });
            }
            prev = cur;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for order in [1, 2, 5, 16, 24] {
            let g = GaussLegendre::new(order);
            let s: f64 = g.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "order {order}: {s}");
        }
    }

    #[test]
    fn exact_on_polynomials_up_to_degree() {
        let g = GaussLegendre::new(16);
        for deg in 0..32 {
            let got = g.integrate(0.0, 1.0, |x| x.powi(deg));
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((got - exact).abs() <= 1e-12 * exact, "degree {deg}");
        }
    }

    #[test]
    fn doubling_reaches_tolerance() {
        let q = Quadrature::default();
        let v = q.integrate(0.0, PI, |x| x.sin()).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn nonconvergence_reports_residual() {
        let q = Quadrature {
            max_panels: 4,
            ..Quadrature::default()
        };
        let err = q.integrate(0.0, 1.0, |x| (200.0 * x).sin().abs()).unwrap_err();
        assert!(matches!(err, Error::Quadrature { residual } if residual > 0.0));
    }
}
