//! Gauss–Jacobi nodes and weights on [-1, 1] for the weight (1-x)^α (1+x)^β,
//! computed with the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::specfun::lanczos_gamma;

/// Nodes (ascending) and weights of an n-point Gauss–Jacobi rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussJacobi {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain {
                what: "gauss-jacobi node count",
                value: 0.0,
            });
        }
        if !(alpha.is_finite() && alpha > -1.0) {
            return Err(Error::Domain {
                what: "jacobi alpha",
                value: alpha,
            });
        }
        if !(beta.is_finite() && beta > -1.0) {
            return Err(Error::Domain {
                what: "jacobi beta",
                value: beta,
            });
        }

        let ab = alpha + beta;
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let k = i as f64;
            jacobi[(i, i)] = if i == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0))
            };
            if i + 1 < n {
                let m = k + 1.0;
                let s = 2.0 * m + ab;
                let off_sq = if i == 0 {
                    // (m+α+β)/(2m+α+β-1) cancels at m = 1.
                    4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
                } else {
                    4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0))
                };
                let off = off_sq.sqrt();
                jacobi[(i, i + 1)] = off;
                jacobi[(i + 1, i)] = off;
            }
        }

        let mass = 2f64.powf(ab + 1.0) * lanczos_gamma(alpha + 1.0) * lanczos_gamma(beta + 1.0)
            / lanczos_gamma(ab + 2.0);

        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mass * v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn legendre(n: usize) -> Result<Self> {
        Self::new(n, 0.0, 0.0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
