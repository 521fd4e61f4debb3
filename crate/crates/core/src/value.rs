use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

use crate::error::{Error, Result};

/// A finite real or `+∞`.
///
/// NaN and `-∞` are unrepresentable: the checked constructor rejects them and
/// arithmetic that could produce them (`∞ - ∞`) is not exposed.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtendedValue(f64);

impl ExtendedValue {
    pub const INFINITY: ExtendedValue = ExtendedValue(f64::INFINITY);
    pub const ZERO: ExtendedValue = ExtendedValue(0.0);

    pub fn new(v: f64) -> Result<Self> {
        if v.is_nan() {
            Err(Error::Rejected("NaN is not a valid function value".into()))
        } else if v == f64::NEG_INFINITY {
            Err(Error::Rejected("-inf is not a valid function value".into()))
        } else {
            Ok(ExtendedValue(v))
        }
    }

    /// Wraps a value produced by trusted arithmetic on finite inputs.
    ///
    /// Panics on NaN, which would indicate a bug in a built-in family.
    pub fn finite(v: f64) -> Self {
        assert!(!v.is_nan(), "oracle produced NaN");
        if v == f64::NEG_INFINITY {
            panic!("oracle produced -inf");
        }
        ExtendedValue(v)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        !self.0.is_finite()
    }

    /// The finite value, or `None` for `+∞`.
    pub fn get(self) -> Option<f64> {
        if self.is_finite() {
            Some(self.0)
        } else {
            None
        }
    }

    /// Raw `f64`, with `+∞` mapped to `f64::INFINITY`.
    pub fn raw(self) -> f64 {
        self.0
    }

    /// Multiplication by a nonnegative scalar; `0 · ∞ = ∞` so that
    /// zero-weighted sums keep effective domains intact.
    pub fn scale(self, a: f64) -> Self {
        debug_assert!(a >= 0.0);
        if self.is_infinite() {
            self
        } else {
            ExtendedValue::finite(self.0 * a)
        }
    }
}

impl From<i64> for ExtendedValue {
    fn from(v: i64) -> Self {
        ExtendedValue(v as f64)
    }
}

impl Add for ExtendedValue {
    type Output = ExtendedValue;

    fn add(self, rhs: ExtendedValue) -> ExtendedValue {
        if self.is_infinite() || rhs.is_infinite() {
            ExtendedValue::INFINITY
        } else {
            ExtendedValue::finite(self.0 + rhs.0)
        }
    }
}

impl Eq for ExtendedValue {}

impl PartialOrd for ExtendedValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Debug for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("+inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Default absolute slack for midpoint-type inequalities on finite values.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// `lhs >= rhs - eps` where `+∞` on the left makes the inequality vacuous.
///
/// Returns `true` when the inequality holds (or is vacuous).
pub fn inequality_holds(lhs: ExtendedValue, rhs: ExtendedValue, eps: f64) -> bool {
    match (lhs.get(), rhs.get()) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(l), Some(r)) => l >= r - eps,
    }
}
