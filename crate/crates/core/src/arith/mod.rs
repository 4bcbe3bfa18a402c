//! Exact scalar and vector arithmetic with provably correct comparisons and
//! sup-norm distance to the integer lattice.

mod parse;
mod real;
mod vector;

pub use parse::{parse_components, parse_scalar};
pub use real::{Dyadic, Precision, Real, MAX_RADICAND};
pub use vector::{
    lattice_distance, power_times_at_most_one, scalar_distance, Declaration, LatticeDistance,
    Vector,
};

pub(crate) use vector::DistanceFilter;
