//! Dual-engine linear programming: a Big-M tableau simplex and a primal
//! affine-scaling interior point method, cross-checked by exhaustive
//! enumeration of basic solutions.

pub mod affine;
pub mod cli;
pub mod io;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod simplex;
pub mod solution;

pub use solution::{Solution, Status};
