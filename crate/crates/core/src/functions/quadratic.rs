use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::two_separable::TwoSeparableSpec;
use super::univariate::UnivariateConvex;
use crate::error::{check_dims, Error, Result};

/// `x^T Q x + c^T x` with `Q` symmetric, stored as its upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSpec {
    n: usize,
    upper: Vec<f64>,
    c: Vec<f64>,
}

/// Per-row slack `q_ii − Σ_{j≠i} |q_ij|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub dominant: bool,
    pub slack: Vec<f64>,
}

impl QuadraticSpec {
    /// Builds from a full matrix; rejects non-square, asymmetric
    /// (exact comparison) or non-finite input.
    pub fn new(q: &[Vec<f64>], c: Vec<f64>) -> Result<Self> {
        let n = q.len();
        if n == 0 {
            return Err(Error::Rejected("Q must be at least 1x1".into()));
        }
        check_dims(n, c.len())?;
        for (i, row) in q.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Rejected(alloc::format!("row {i} of Q has length {}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Rejected(alloc::format!("Q[{i}][{j}] is not finite")));
                }
                if v != q[j][i] {
                    return Err(Error::Rejected(alloc::format!("Q is not symmetric at ({i}, {j})")));
                }
            }
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::Rejected("c must be finite".into()));
        }
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            upper.extend_from_slice(&q[i][i..]);
        }
        Ok(QuadraticSpec { n, upper, c })
    }

    pub fn homogeneous(q: &[Vec<f64>]) -> Result<Self> {
        QuadraticSpec::new(q, alloc::vec![0.0; q.len()])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn q(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.upper[i * self.n - i * (i + 1) / 2 + j]
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.q(i, j)).collect()).collect()
    }

    pub fn eval_real(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            s += self.q(i, i) * x[i] * x[i] + self.c[i] * x[i];
            for j in i + 1..self.n {
                s += 2.0 * self.q(i, j) * x[i] * x[j];
            }
        }
        s
    }

    pub fn eval_int(&self, x: &[i64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            s += self.q(i, i) * (x[i] * x[i]) as f64 + self.c[i] * x[i] as f64;
            for j in i + 1..self.n {
                s += 2.0 * self.q(i, j) * (x[i] * x[j]) as f64;
            }
        }
        s
    }

    /// Diagonal dominance with nonnegative diagonals.
    pub fn diag_dominance(&self) -> DominanceReport {
        let slack: Vec<f64> = (0..self.n)
            .map(|i| {
                let off: f64 = (0..self.n).filter(|&j| j != i).map(|j| self.q(i, j).abs()).sum();
                self.q(i, i) - off
            })
            .collect();
        DominanceReport { dominant: slack.iter().all(|&s| s >= 0.0), slack }
    }

    /// Rewrites a diagonally dominant quadratic as a 2-separable function:
    /// `ξ_i(t) = slack_i t² + c_i t`, `ψ_ij(t) = ½ q_ij⁺ t²`, `φ_ij(t) = ½ q_ij⁻ t²`.
    pub fn to_two_separable(&self) -> Result<TwoSeparableSpec> {
        let report = self.diag_dominance();
        if let Some(row) = report.slack.iter().position(|&s| s < 0.0) {
            return Err(Error::Rejected(alloc::format!(
                "Q is not diagonally dominant in row {row} (slack {})",
                report.slack[row]
            )));
        }
        let xi = (0..self.n)
            .map(|i| UnivariateConvex::Quadratic { a: report.slack[i], b: self.c[i] })
            .collect();
        let mut phi = BTreeMap::new();
        let mut psi = BTreeMap::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let q = self.q(i, j);
                if q > 0.0 {
                    psi.insert((i, j), UnivariateConvex::Quadratic { a: 0.5 * q, b: 0.0 });
                } else if q < 0.0 {
                    phi.insert((i, j), UnivariateConvex::Quadratic { a: -0.5 * q, b: 0.0 });
                }
            }
        }
        TwoSeparableSpec::new(self.n, xi, phi, psi)
    }
}
