//! Gaussian quadrature rules built by the Golub-Welsch method: nodes are
//! eigenvalues of the Jacobi matrix of the orthogonal-polynomial recurrence,
//! weights come from the first eigenvector components.

use crate::error::Result;
use crate::tridiag::SymTridiag;

/// Nodes and weights of an n-point rule; `sum_i w_i f(x_i)` approximates
/// the weighted integral exactly for polynomials up to degree 2n-1.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn golub_welsch(diag: Vec<f64>, offdiag: Vec<f64>, moment0: f64) -> Result<QuadratureRule> {
    let jacobi = SymTridiag::new(diag, offdiag)?;
    let pairs = jacobi.eigen_all()?;
    let mut nodes = Vec::with_capacity(pairs.len());
    let mut weights = Vec::with_capacity(pairs.len());
    for pair in &pairs {
        nodes.push(pair.value);
        weights.push(moment0 * pair.vector[0] * pair.vector[0]);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
pub fn hermite(n: usize) -> Result<QuadratureRule> {
    let diag = vec![0.0; n];
    let offdiag = (1..n).map(|i| (i as f64 / 2.0).sqrt()).collect();
    golub_welsch(diag, offdiag, std::f64::consts::PI.sqrt())
}

/// Gauss-Laguerre rule for the weight exp(-x) on the positive half line.
pub fn laguerre(n: usize) -> Result<QuadratureRule> {
    let diag = (0..n).map(|k| 2.0 * k as f64 + 1.0).collect();
    let offdiag = (1..n).map(|i| i as f64).collect();
    golub_welsch(diag, offdiag, 1.0)
}
