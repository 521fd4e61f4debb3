use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::univariate::UnivariateConvex;
use crate::error::{check_dims, Error, Result};
use crate::value::ExtendedValue;

/// `Σ ξ_i(x_i) + Σ_{i≠j} φ_ij(x_i − x_j) + Σ_{i≠j} ψ_ij(x_i + x_j)`.
///
/// Missing `φ`/`ψ` entries are identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSeparableSpec {
    pub n: usize,
    pub xi: Vec<UnivariateConvex>,
    pub phi: BTreeMap<(usize, usize), UnivariateConvex>,
    pub psi: BTreeMap<(usize, usize), UnivariateConvex>,
}

impl TwoSeparableSpec {
    pub fn new(
        n: usize,
        xi: Vec<UnivariateConvex>,
        phi: BTreeMap<(usize, usize), UnivariateConvex>,
        psi: BTreeMap<(usize, usize), UnivariateConvex>,
    ) -> Result<Self> {
        check_dims(n, xi.len())?;
        for g in &xi {
            g.validate()?;
        }
        for (&(i, j), g) in phi.iter().chain(psi.iter()) {
            if i >= n || j >= n || i == j {
                return Err(Error::Rejected(alloc::format!("invalid index pair ({i}, {j})")));
            }
            g.validate()?;
        }
        Ok(TwoSeparableSpec { n, xi, phi, psi })
    }

    /// Purely separable `Σ ξ_i(x_i)`.
    pub fn separable(xi: Vec<UnivariateConvex>) -> Result<Self> {
        TwoSeparableSpec::new(xi.len(), xi, BTreeMap::new(), BTreeMap::new())
    }

    pub fn eval(&self, x: &[i64]) -> ExtendedValue {
        let mut s = ExtendedValue::ZERO;
        for (i, g) in self.xi.iter().enumerate() {
            s = s + g.eval(x[i]);
        }
        for (&(i, j), g) in &self.phi {
            s = s + g.eval(x[i] - x[j]);
        }
        for (&(i, j), g) in &self.psi {
            s = s + g.eval(x[i] + x[j]);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_pairs_rejected() {
        let mut phi = BTreeMap::new();
        phi.insert((0, 0), UnivariateConvex::zero());
        assert!(TwoSeparableSpec::new(2, alloc::vec![UnivariateConvex::zero(); 2], phi, BTreeMap::new()).is_err());
    }

    #[test]
    fn evaluates_all_three_sums() {
        let mut phi = BTreeMap::new();
        phi.insert((0, 1), UnivariateConvex::Abs { center: 0, weight: 1.0 });
        let mut psi = BTreeMap::new();
        psi.insert((1, 0), UnivariateConvex::Square { center: 1, weight: 2.0 });
        let s = TwoSeparableSpec::new(
            2,
            alloc::vec![UnivariateConvex::Abs { center: 0, weight: 1.0 }, UnivariateConvex::zero()],
            phi,
            psi,
        )
        .unwrap();
        // |3| + |3 - (-1)| + 2 (3 - 1 - 1)^2
        assert_eq!(s.eval(&[3, -1]).get(), Some(3.0 + 4.0 + 2.0));
    }
}
