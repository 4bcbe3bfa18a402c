//! Best-approximation periods, resonance modules and Diophantine exponents
//! of vectors `ω ∈ R^n`, computed in exact arithmetic.
//!
//! Scalars live in a multi-quadratic number field ([`arith::Real`]), so every
//! inequality this crate reports is decided exactly: structurally for
//! equality, by enclosure refinement for strict order.

pub mod arith;
pub mod error;
pub mod exec;

pub use arith::{lattice_distance, Declaration, LatticeDistance, Precision, Real, Vector};
pub use error::{Error, Result};
pub use exec::Exec;

pub mod dirichlet;
pub mod matrix;
pub mod periods;
pub mod snf;
pub mod resonance;
pub mod census;
pub mod transfer;
