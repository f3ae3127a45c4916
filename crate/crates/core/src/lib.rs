//! Symplectic machinery of polar group actions.
//!
//! The crate realizes, on a small zoo of explicit polar actions, the
//! cotangent-lifted Hamiltonian action with its moment map, the Sasaki
//! geometry of `TM`/`T*M`, sections with their generalized Weyl groups, and
//! the restriction of invariant functions to `T*Σ`. Every construction comes
//! with a numeric (or exact) check.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod hamilton;
pub mod invariants;
pub mod liegroups;
pub mod numcore;
pub mod polar;
pub mod sampling;
pub mod sasaki;

pub use error::{Error, Result};
