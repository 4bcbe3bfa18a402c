//! Dirichlet witnesses, simultaneous (`‖Tω‖_Z ≤ Q^{-1/n}`, `T < Q`) and
//! linear-form (`‖⟨k, ω⟩‖_Z ≤ Q^{-n}`, `0 < |k| < Q`). Both are found by
//! exhaustive search and checked in cleared-power form.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::arith::{power_times_at_most_one, scalar_distance, Precision, Real, Vector};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::periods::{compute_periods, Stop};

/// Largest enumeration box accepted by [`linear_witness`].
pub const BOX_GUARD: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimultaneousWitness {
    pub q: BigRational,
    pub time: u64,
    pub distance: Real,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearWitness {
    pub q: BigRational,
    pub k: Vec<i64>,
    pub divisor: Real,
}

/// Largest integer strictly below `q`.
pub(crate) fn below(q: &BigRational) -> BigInt {
    q.ceil().to_integer() - 1
}

/// Least `T < Q` with `‖Tω‖_Z^n · Q ≤ 1`.
///
/// The least such `T` is necessarily a record time, so the search walks the
/// period sequence up to `⌈Q⌉ − 1`.
pub fn simultaneous_witness(
    omega: &Vector,
    q: &BigRational,
    prec: Precision,
) -> Result<SimultaneousWitness> {
    if *q <= BigRational::one() {
        return Err(Error::invalid("Q must exceed 1"));
    }
    let max_t = below(q)
        .to_u64()
        .ok_or_else(|| Error::invalid("Q too large for a linear scan"))?;
    let n = omega.dim() as u32;
    let seq = compute_periods(omega, Stop::period(max_t), prec)?;
    for e in &seq.entries {
        if power_times_at_most_one(&e.delta, n, q, prec)? {
            return Ok(SimultaneousWitness {
                q: q.clone(),
                time: e.period,
                distance: e.delta.clone(),
            });
        }
    }
    Err(Error::VerificationFailed(format!(
        "no T < {q} satisfies the simultaneous Dirichlet bound"
    )))
}

/// Representatives of `k ≠ 0` with `|k| ≤ radius` up to sign: the first
/// nonzero coordinate is positive. Grouped by leading coordinate so callers
/// can split the work.
pub(crate) fn half_box_slice(n: usize, radius: i64, lead: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let width = (2 * radius + 1) as usize;
    let tail = n - 1;
    let count = width.pow(tail as u32);
    for idx in 0..count {
        let mut rest = Vec::with_capacity(tail);
        let mut m = idx;
        for _ in 0..tail {
            rest.push((m % width) as i64 - radius);
            m /= width;
        }
        rest.reverse();
        let mut k = Vec::with_capacity(n);
        k.push(lead);
        k.extend(rest);
        if is_canonical(&k) {
            out.push(k);
        }
    }
    out
}

fn is_canonical(k: &[i64]) -> bool {
    k.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// All sign representatives in the box, lexicographically ordered.
pub(crate) fn half_box(n: usize, radius: i64) -> Vec<Vec<i64>> {
    (0..=radius).flat_map(|lead| half_box_slice(n, radius, lead)).collect()
}

pub(crate) fn box_size(n: usize, radius: i64) -> u128 {
    (2 * radius as u128 + 1).saturating_pow(n as u32)
}

type Candidate = (Real, Vec<i64>);

fn better(a: Candidate, b: Candidate, prec: Precision) -> Result<Candidate> {
    Ok(match a.0.compare(&b.0, prec)? {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    })
}

/// A minimizer of `‖⟨k, ω⟩‖_Z` over `0 < |k| < Q`, with `k` and `−k`
/// identified (first nonzero coordinate positive) and ties broken by the
/// lexicographically smallest representative. The box is split by leading
/// coordinate and min-reduced.
pub fn linear_witness(
    omega: &Vector,
    q: &BigRational,
    prec: Precision,
    exec: Exec,
) -> Result<LinearWitness> {
    if *q <= BigRational::one() {
        return Err(Error::invalid("Q must exceed 1"));
    }
    let n = omega.dim();
    let radius = below(q)
        .to_i64()
        .ok_or_else(|| Error::invalid("Q too large"))?;
    let size = box_size(n, radius);
    if size > BOX_GUARD {
        return Err(Error::BoxTooLarge {
            size,
            limit: BOX_GUARD,
        });
    }
    let partials = exec.map_range(0..=radius, |lead| -> Result<Option<Candidate>> {
        let mut best: Option<Candidate> = None;
        for k in half_box_slice(n, radius, lead) {
            let d = scalar_distance(&omega.dot_i64(&k), prec)?;
            best = Some(match best {
                None => (d, k),
                Some(b) => better(b, (d, k), prec)?,
            });
        }
        Ok(best)
    });
    let mut best: Option<Candidate> = None;
    for part in partials {
        if let Some(c) = part? {
            best = Some(match best {
                None => c,
                Some(b) => better(b, c, prec)?,
            });
        }
    }
    let (divisor, k) = best.ok_or_else(|| Error::invalid("empty box"))?;
    let qn = q.pow(n as i32);
    let ok = divisor.scale(&qn).compare(&Real::one(), prec)? != Ordering::Greater;
    if !ok {
        return Err(Error::VerificationFailed(format!(
            "linear Dirichlet bound fails for Q = {q}"
        )));
    }
    Ok(LinearWitness {
        q: q.clone(),
        k,
        divisor,
    })
}
