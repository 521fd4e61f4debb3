use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::quadratic::QuadraticSpec;
use super::two_separable::TwoSeparableSpec;
use super::univariate::UnivariateConvex;
use crate::error::{check_dims, Error, Result};
use crate::lattice::{LatticeBox, LatticePoint};
use crate::value::ExtendedValue;

type Evaluator = dyn Fn(&[i64]) -> ExtendedValue + Send + Sync;

/// An evaluation oracle `Z^n → R ∪ {+∞}` with a bounded universe.
///
/// Points outside the universe evaluate to `+∞` without calling the
/// underlying evaluator. Oracles are immutable and cheap to clone.
#[derive(Clone)]
pub struct LatticeFunction {
    eval: Arc<Evaluator>,
    universe: LatticeBox,
    family: String,
}

impl LatticeFunction {
    pub fn from_fn<F>(universe: LatticeBox, family: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[i64]) -> ExtendedValue + Send + Sync + 'static,
    {
        LatticeFunction { eval: Arc::new(f), universe, family: family.into() }
    }

    /// Dense table in the universe's row-major point order.
    pub fn table(universe: LatticeBox, values: Vec<ExtendedValue>) -> Result<Self> {
        if values.len() as u64 != universe.cardinality() {
            return Err(Error::Rejected(alloc::format!(
                "table has {} values but the box has {} points",
                values.len(),
                universe.cardinality()
            )));
        }
        let u = universe.clone();
        Ok(Self::from_fn(universe, "table", move |x| {
            values[u.index_of(x).expect("caller checked the universe")]
        }))
    }

    /// Table given as `(point, value)` entries; unlisted points are `+∞`.
    pub fn sparse_table(universe: LatticeBox, entries: &[(LatticePoint, ExtendedValue)]) -> Result<Self> {
        let mut values = alloc::vec![ExtendedValue::INFINITY; universe.cardinality() as usize];
        for (x, v) in entries {
            check_dims(universe.dim(), x.dim())?;
            let idx = universe
                .index_of(x)
                .ok_or_else(|| Error::Rejected(alloc::format!("table point {x:?} outside the box")))?;
            values[idx] = *v;
        }
        let mut f = Self::table(universe, values)?;
        f.family = "table".into();
        Ok(f)
    }

    /// Indicator `δ_S`, universe = bounding box of `S`.
    pub fn indicator(points: &[LatticePoint]) -> Result<Self> {
        let universe = LatticeBox::bounding(points)?;
        let set: BTreeSet<LatticePoint> = points.iter().cloned().collect();
        Ok(Self::from_fn(universe, "indicator", move |x| {
            if set.contains(&LatticePoint::from(x)) {
                ExtendedValue::ZERO
            } else {
                ExtendedValue::INFINITY
            }
        }))
    }

    /// Indicator of a whole box.
    pub fn box_indicator(universe: LatticeBox) -> Self {
        Self::from_fn(universe, "indicator", |_| ExtendedValue::ZERO)
    }

    pub fn quadratic(spec: QuadraticSpec, universe: LatticeBox) -> Result<Self> {
        check_dims(spec.dim(), universe.dim())?;
        Ok(Self::from_fn(universe, "quadratic", move |x| ExtendedValue::finite(spec.eval_int(x))))
    }

    pub fn two_separable(spec: TwoSeparableSpec, universe: LatticeBox) -> Result<Self> {
        check_dims(spec.n, universe.dim())?;
        Ok(Self::from_fn(universe, "two_separable", move |x| spec.eval(x)))
    }

    pub fn separable(pieces: Vec<UnivariateConvex>, universe: LatticeBox) -> Result<Self> {
        let spec = TwoSeparableSpec::separable(pieces)?;
        let mut f = Self::two_separable(spec, universe)?;
        f.family = "separable".into();
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.universe.dim()
    }

    pub fn universe(&self) -> &LatticeBox {
        &self.universe
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn with_family(mut self, family: impl Into<String>) -> Self {
        self.family = family.into();
        self
    }

    /// `f(x)`, checking the dimension.
    pub fn evaluate(&self, x: &[i64]) -> Result<ExtendedValue> {
        check_dims(self.dim(), x.len())?;
        Ok(self.value(x))
    }

    /// `f(x)` for a point of the right dimension.
    #[inline]
    pub fn value(&self, x: &[i64]) -> ExtendedValue {
        debug_assert_eq!(x.len(), self.dim());
        if self.universe.contains(x) {
            (self.eval)(x)
        } else {
            ExtendedValue::INFINITY
        }
    }

    /// Materializes the function as a dense table over its universe.
    pub fn tabulate(&self) -> Self {
        let values: Vec<ExtendedValue> = self.universe.points().map(|x| self.value(&x)).collect();
        let family = self.family.clone();
        Self::table(self.universe.clone(), values)
            .expect("cardinality matches")
            .with_family(family)
    }

    /// Points of the universe with finite value, in lexicographic order.
    pub fn effective_domain(&self) -> Vec<LatticePoint> {
        self.universe.points().filter(|x| self.value(x).is_finite()).collect()
    }

    /// `(f − p)(x) = f(x) − Σ p_i x_i`.
    pub fn tilt(&self, p: &[f64]) -> Result<Self> {
        check_dims(self.dim(), p.len())?;
        let f = self.clone();
        let p = p.to_vec();
        Ok(Self::from_fn(self.universe.clone(), "tilt", move |x| match f.value(x).get() {
            None => ExtendedValue::INFINITY,
            Some(v) => ExtendedValue::finite(v - x.iter().zip(&p).map(|(&a, b)| a as f64 * b).sum::<f64>()),
        }))
    }
}

impl fmt::Debug for LatticeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeFunction")
            .field("family", &self.family)
            .field("universe", &self.universe)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn indicator_examples() {
        let s = LatticeFunction::indicator(&[LatticePoint::from([1, 0]), LatticePoint::from([0, 1])]).unwrap();
        assert_eq!(s.evaluate(&[1, 0]).unwrap(), ExtendedValue::ZERO);
        assert!(s.evaluate(&[1, 1]).unwrap().is_infinite());
        assert!(s.evaluate(&[5, 5]).unwrap().is_infinite());
        assert!(s.evaluate(&[1]).is_err());
    }

    #[test]
    fn quadratic_example() {
        let q = QuadraticSpec::homogeneous(&[vec![5.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let f = LatticeFunction::quadratic(q, LatticeBox::cube(2, -2, 2).unwrap()).unwrap();
        assert_eq!(f.evaluate(&[1, -1]).unwrap().get(), Some(2.0));
        assert!(f.evaluate(&[3, 0]).unwrap().is_infinite());
    }

    #[test]
    fn sparse_table_rejects_outside_points() {
        let b = LatticeBox::cube(1, 0, 2).unwrap();
        assert!(LatticeFunction::sparse_table(b, &[(LatticePoint::from([3]), ExtendedValue::ZERO)]).is_err());
    }

    #[test]
    fn oracles_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<LatticeFunction>();
    }

    #[test]
    fn tilt_subtracts_linear_term() {
        let f = LatticeFunction::box_indicator(LatticeBox::cube(2, 0, 1).unwrap());
        let g = f.tilt(&[0.5, 1.0]).unwrap();
        assert_eq!(g.value(&[1, 1]).get(), Some(-1.5));
    }
}
