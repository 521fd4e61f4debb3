//! JSON function specs, the fixture gallery, seeded instance generators and
//! the command-line front end for `ddmc-core`.

pub mod cli;
pub mod fuzz;
pub mod gallery;
pub mod report;
pub mod spec;
