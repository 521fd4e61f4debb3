use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::value::{inequality_holds, ExtendedValue, DEFAULT_EPSILON};

/// A univariate discrete convex function `g: Z → R ∪ {+∞}`.
///
/// Closed forms with an integer center are evaluated in integer arithmetic
/// before the final scaling, so table and closed-form versions of the same
/// function agree bit for bit on integer weights.
#[derive(Debug, Clone, PartialEq)]
pub enum UnivariateConvex {
    /// `slope · t + intercept`.
    Affine { slope: f64, intercept: f64 },
    /// `weight · |t − center|`.
    Abs { center: i64, weight: f64 },
    /// `weight · (t − center)²`.
    Square { center: i64, weight: f64 },
    /// `a · t² + b · t`.
    Quadratic { a: f64, b: f64 },
    /// `max_k (slope_k · t + intercept_k)`.
    AffineMax(Vec<(f64, f64)>),
    /// Explicit values on `[lo, lo + values.len() − 1]`, `+∞` outside.
    Table { lo: i64, values: Vec<ExtendedValue> },
}

impl UnivariateConvex {
    pub fn zero() -> Self {
        UnivariateConvex::Affine { slope: 0.0, intercept: 0.0 }
    }

    /// Validates finiteness of parameters, nonnegative curvature weights and,
    /// for tables, discrete convexity at every interior point.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Rejected(alloc::format!("{what} must be finite")))
            }
        };
        match self {
            UnivariateConvex::Affine { slope, intercept } => {
                finite(*slope, "slope")?;
                finite(*intercept, "intercept")
            }
            UnivariateConvex::Abs { weight, .. } | UnivariateConvex::Square { weight, .. } => {
                finite(*weight, "weight")?;
                if *weight < 0.0 {
                    return Err(Error::Rejected("weight must be nonnegative".into()));
                }
                Ok(())
            }
            UnivariateConvex::Quadratic { a, b } => {
                finite(*a, "quadratic coefficient")?;
                finite(*b, "linear coefficient")?;
                if *a < 0.0 {
                    return Err(Error::Rejected("quadratic coefficient must be nonnegative".into()));
                }
                Ok(())
            }
            UnivariateConvex::AffineMax(pieces) => {
                if pieces.is_empty() {
                    return Err(Error::Rejected("affine max needs at least one piece".into()));
                }
                for (s, c) in pieces {
                    finite(*s, "slope")?;
                    finite(*c, "intercept")?;
                }
                Ok(())
            }
            UnivariateConvex::Table { lo, values } => {
                if values.iter().all(|v| v.is_infinite()) {
                    return Err(Error::Rejected("table has no finite value".into()));
                }
                for k in 1..values.len().saturating_sub(1) {
                    let lhs = values[k - 1] + values[k + 1];
                    let rhs = values[k].scale(2.0);
                    if !inequality_holds(lhs, rhs, DEFAULT_EPSILON) {
                        return Err(Error::Rejected(alloc::format!(
                            "table is not discrete convex at t = {}",
                            lo + k as i64
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, t: i64) -> ExtendedValue {
        match self {
            UnivariateConvex::Affine { slope, intercept } => {
                ExtendedValue::finite(slope * t as f64 + intercept)
            }
            UnivariateConvex::Abs { center, weight } => {
                ExtendedValue::finite(weight * (t - center).unsigned_abs() as f64)
            }
            UnivariateConvex::Square { center, weight } => {
                let d = (t - center) as i128;
                ExtendedValue::finite(weight * (d * d) as f64)
            }
            UnivariateConvex::Quadratic { a, b } => {
                let tf = t as f64;
                ExtendedValue::finite(a * ((t as i128 * t as i128) as f64) + b * tf)
            }
            UnivariateConvex::AffineMax(pieces) => ExtendedValue::finite(
                pieces
                    .iter()
                    .map(|(s, c)| s * t as f64 + c)
                    .fold(f64::NEG_INFINITY, f64::max),
            ),
            UnivariateConvex::Table { lo, values } => {
                let k = t - lo;
                if k < 0 || k as usize >= values.len() {
                    ExtendedValue::INFINITY
                } else {
                    values[k as usize]
                }
            }
        }
    }

    /// The finite part as an integer interval, or `None` if unbounded.
    pub fn bounded_support(&self) -> Option<(i64, i64)> {
        match self {
            UnivariateConvex::Table { lo, values } => {
                let first = values.iter().position(|v| v.is_finite())?;
                let last = values.iter().rposition(|v| v.is_finite())?;
                Some((lo + first as i64, lo + last as i64))
            }
            _ => None,
        }
    }

    /// Table form over `[lo, hi]` (values outside become `+∞`).
    pub fn to_table(&self, lo: i64, hi: i64) -> UnivariateConvex {
        UnivariateConvex::Table { lo, values: (lo..=hi).map(|t| self.eval(t)).collect() }
    }
}
