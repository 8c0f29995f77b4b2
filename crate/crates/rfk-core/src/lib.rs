//! Exact chain-level algebra for Rabinowitz Fukaya categories.

pub mod cy_pairing;
pub mod error;
pub mod exact_linalg;
pub mod field;
pub mod ginzburg;
pub mod graded_complex;
pub mod limit_systems;
pub mod popsicle;
pub mod rabinowitz;
pub mod random;
pub mod reeb_period;
pub mod selftest;

pub use error::{Error, Result};
pub use exact_linalg::SparseMatrix;
pub use field::{Field, Rat, Scalar};

pub use graded_complex::{ChainMap, GradedComplex};
