//! Exact combinatorics of Serre weights and tame inertial types for `GL_2`
//! over a p-adic field, and the cycle identities they satisfy.
//!
//! The pipeline: [`field_arith`] fixes the residue field and character
//! exponents, [`weights`] and [`tame_types`] enumerate the two sides,
//! [`jh`] computes reductions, [`groth_solver`] inverts the decomposition
//! matrix over the integers, and [`cycles`] / [`galois_points`] restate the
//! result as identities between formal sums. [`verify`] checks all of it.

pub mod cli;
pub mod cycles;
pub mod error;
pub mod field_arith;
pub mod galois_points;
pub mod groth_solver;
pub mod hnf;
pub mod jh;
pub mod oracle;
pub mod tame_types;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use field_arith::{CharExponent, DigitVector, FieldDatum, Level};
pub use tame_types::{TameType, TypeKind};
pub use weights::SerreWeight;
