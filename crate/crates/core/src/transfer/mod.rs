//! Transfer between Diophantine classes: the exponent maps, `μ(τ)`,
//! empirical exponents from finite data, the resonant-vector construction
//! and the step-by-step check of the linear-form lower bound.

mod enclosure;
mod estimate;
mod trace;
mod witness;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use enclosure::{enclose_by, root_enclosure, simplest_in, RatEnclosure};
pub use estimate::{
    estimate_linear, estimate_period_growth, estimate_simultaneous, ExponentKind, ExponentReport,
};
pub use trace::{
    k_box, proof_trace, proof_trace_batch, proof_trace_with, GrowthHypothesis, Inequality,
    ProofTrace, Relation,
};
pub use witness::{resonant_witnesses, ResonantWitness, SplitVector};

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    Ok(())
}

fn check_tau(tau: &BigRational) -> Result<()> {
    if tau.is_negative() {
        return Err(Error::invalid("τ must be nonnegative"));
    }
    Ok(())
}

/// Simultaneous exponent to linear-form exponent: `τ / ((n−1)τ + n)`.
pub fn map_sim_to_lin(tau: &BigRational, n: usize) -> Result<BigRational> {
    check_dim(n)?;
    check_tau(tau)?;
    let n = BigRational::from_integer(BigInt::from(n));
    let den = (&n - BigRational::one()) * tau + &n;
    Ok(tau / den)
}

/// Linear-form exponent back to the simultaneous side: `n·τ`.
pub fn map_lin_to_sim(tau: &BigRational, n: usize) -> Result<BigRational> {
    check_dim(n)?;
    check_tau(tau)?;
    Ok(tau * BigRational::from_integer(BigInt::from(n)))
}

/// `μ = nτ / (n − (n−1)(1+τ))`, defined below the threshold `τ < 1/(n−1)`.
pub fn mu(tau: &BigRational, n: usize) -> Result<BigRational> {
    check_dim(n)?;
    check_tau(tau)?;
    let nn = BigRational::from_integer(BigInt::from(n));
    let den = &nn - (&nn - BigRational::one()) * (BigRational::one() + tau);
    if !den.is_positive() {
        return Err(Error::ThresholdViolated {
            tau: tau.to_string(),
            n,
        });
    }
    if tau.is_zero() {
        return Ok(BigRational::zero());
    }
    Ok(nn * tau / den)
}
