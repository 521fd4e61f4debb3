//! Discrete midpoint convexity on the integer lattice: function oracles,
//! class recognition, minimization, and continuous counterparts.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod continuous;
pub mod error;
pub mod functions;
pub mod lattice;
pub mod minimize;
pub mod value;

pub use error::{Error, Result};
pub use functions::LatticeFunction;
pub use lattice::{LatticeBox, LatticePoint};
pub use value::{ExtendedValue, DEFAULT_EPSILON};
