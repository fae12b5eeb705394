//! Exact computation of the explicit ingredients of character formulae for
//! positive-depth supercuspidal representations: root classification under
//! Galois actions, discriminants, signs and Gauss sums, Moy–Prasad
//! cardinalities, and the assembled character sums with orbital integrals
//! supplied by oracles.

pub mod arith;
pub mod charform;
mod error;
pub mod rootgal;
pub mod signs;
pub mod apartment;
pub mod disc;
pub mod elements;
pub mod mp;
pub mod fuzz;
pub mod scenario;

pub use error::{Error, Result};
