//! Numerical verification of eigenvalue, trace and norm inequalities for
//! positive semidefinite pairs: Hermitian linear algebra, seeded random
//! ensembles, inequality checkers and a reproducible verification harness.

pub mod decomp;
pub mod error;
pub mod harness;
pub mod inequalities;
pub mod linalg;
pub mod norms;
pub mod randgen;

pub use error::{Error, Result};
