//! Gaussian quadrature rules: Gauss-Legendre on finite intervals and
//! generalized Gauss-Laguerre on the half line.
//!
//! Nodes are found by Newton iteration on the orthogonal-polynomial
//! recurrences; both constructions are standard and converge in a handful
//! of iterations from the classical initial guesses.

use crate::error::{Error, Result};
use crate::laguerre::ln_gamma;

/// A quadrature rule: paired nodes and weights.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Apply the rule to a function of the node coordinate.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre polynomial value and derivative at `x` via the recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for j in 1..m {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `m`-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(m: usize) -> QuadratureRule {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        // Classical initial guess, then Newton on P_m.
        let mut x =
            (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * d * d);
        nodes[i] = -x.abs();
        nodes[m - 1 - i] = x.abs();
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    QuadratureRule { nodes, weights }
}

/// `m`-point Gauss-Legendre rule mapped onto [a, b].
pub fn gauss_legendre_on(a: f64, b: f64, m: usize) -> QuadratureRule {
    let base = gauss_legendre(m);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    QuadratureRule {
        nodes: base.nodes.iter().map(|&t| mid + half * t).collect(),
        weights: base.weights.iter().map(|&w| w * half).collect(),
    }
}

/// `m`-point generalized Gauss-Laguerre rule for weight `x^alpha e^{-x}`
/// on [0, inf).
pub fn gauss_laguerre(m: usize, alpha: u32) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::LaguerreDomain { n: -1, alpha: alpha as i64 });
    }
    let a = alpha as f64;
    let mf = m as f64;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mut x = 0.0f64;
    for i in 0..m {
        // Stroud-Secrest style initial guesses for the i-th root.
        x = if i == 0 {
            (1.0 + a) * (3.0 + 0.92 * a) / (1.0 + 2.4 * mf + 1.8 * a)
        } else if i == 1 {
            x + (15.0 + 6.25 * a) / (1.0 + 0.9 * a + 2.5 * mf)
        } else {
            let ai = i as f64 - 1.0;
            x + ((1.0 + 2.55 * ai) / (1.9 * ai)
                + 1.26 * ai * a / (1.0 + 3.5 * ai))
                * (x - nodes[i - 2])
                / (1.0 + 0.3 * a)
        };
        // Newton iteration on L_m^a using the recurrence and
        // x (L_m^a)'(x) = m L_m^a(x) - (m + a) L_{m-1}^a(x).
        for _ in 0..200 {
            let (pm, pm1) = laguerre_pair(m, a, x);
            let d = (mf * pm - (mf + a) * pm1) / x;
            let dx = pm / d;
            x -= dx;
            if dx.abs() < 1e-14 * x.abs().max(1e-300) {
                break;
            }
        }
        let (pm, pm1) = laguerre_pair(m, a, x);
        let d = (mf * pm - (mf + a) * pm1) / x;
        // w_i = Gamma(m + a + 1) / (m! x_i) / (L_m^a)'(x_i)^2 restated via
        // logs to avoid overflow in the factorials.
        let ln_c = ln_gamma(mf + a + 1.0) - ln_gamma(mf + 1.0);
        weights[i] = ln_c.exp() / (x * d * d);
        nodes[i] = x;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `(L_m^a(x), L_{m-1}^a(x))` by one forward pass of the recurrence.
fn laguerre_pair(m: usize, a: f64, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut curr = 1.0 + a - x;
    if m == 0 {
        return (prev, 0.0);
    }
    for j in 1..m {
        let jf = j as f64;
        let next = ((2.0 * jf + a + 1.0 - x) * curr - (jf + a) * prev) / (jf + 1.0);
        prev = curr;
        curr = next;
    }
    (curr, prev)
}
