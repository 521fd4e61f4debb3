//! Function oracles on `Z^n` and the operations acting on them.

mod oracle;
mod ops;
mod quadratic;
mod two_separable;
mod univariate;

pub use oracle::LatticeFunction;
pub use ops::{
    combine, infconv, infconv_separable, project, restrict, transform, Combine, Transform, MAX_INNER_ENUMERATION,
};
pub use quadratic::{DominanceReport, QuadraticSpec};
pub use two_separable::TwoSeparableSpec;
pub use univariate::UnivariateConvex;
