//! The period sequence `T_i(ω)`: successive times of strict record closeness
//! of `Tω` to the integer lattice, with `T_0 = 1`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{lattice_distance, DistanceFilter, Precision, Real, Vector};
use crate::error::{Error, Result};

/// One record `(i, T_i, δ_i = ‖T_iω‖_Z, w_i)` with `|T_iω − w_i| = δ_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestApproximation {
    pub index: usize,
    pub period: u64,
    pub delta: Real,
    pub witness: Vec<BigInt>,
}

impl BestApproximation {
    /// The rational best approximation `ω_i = w_i / T_i`.
    pub fn approximant(&self) -> Vec<BigRational> {
        let t = BigInt::from(self.period);
        self.witness
            .iter()
            .map(|w| BigRational::new(w.clone(), t.clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodSequence {
    pub entries: Vec<BestApproximation>,
    /// The last record has `δ = 0`: `ω` is rational with that exact period.
    pub terminated: bool,
}

impl PeriodSequence {
    pub fn periods(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.period).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> Option<&BestApproximation> {
        self.entries.last()
    }
}

/// When to stop scanning. At least one bound must be set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stop {
    pub max_period: Option<u64>,
    pub max_index: Option<usize>,
}

impl Stop {
    pub fn period(max_period: u64) -> Self {
        Stop {
            max_period: Some(max_period),
            max_index: None,
        }
    }

    pub fn index(max_index: usize) -> Self {
        Stop {
            max_period: None,
            max_index: Some(max_index),
        }
    }

    fn validate(self) -> Result<()> {
        match (self.max_period, self.max_index) {
            (None, None) => Err(Error::invalid("a period or index bound is required")),
            (Some(0), _) => Err(Error::invalid("max period must be positive")),
            _ => Ok(()),
        }
    }

    fn period_allows(self, t: u64) -> bool {
        self.max_period.is_none_or(|m| t <= m)
    }

    fn index_reached(self, len: usize) -> bool {
        self.max_index.is_some_and(|m| len > m)
    }
}

fn record(index: usize, period: u64, d: crate::LatticeDistance) -> BestApproximation {
    BestApproximation {
        index,
        period,
        delta: d.value,
        witness: d.nearest,
    }
}

/// Linear scan over `T`: each `T_{i+1}` is the least `T > T_i` with
/// `‖Tω‖_Z < δ_i`. Most times are discarded by fixed-point bounds; every
/// record and every undecided time goes through exact comparison.
pub fn compute_periods(omega: &Vector, stop: Stop, prec: Precision) -> Result<PeriodSequence> {
    stop.validate()?;
    let first = lattice_distance(1, omega, prec)?;
    let mut entries = vec![record(0, 1, first)];
    let filter = DistanceFilter::new(omega, prec.start_bits.max(64));
    let mut best = (entries[0].delta.clone(), filter.enclose(&entries[0].delta));
    let mut t: u64 = 1;
    loop {
        if best.0.is_zero() {
            return Ok(PeriodSequence {
                entries,
                terminated: true,
            });
        }
        if stop.index_reached(entries.len()) {
            break;
        }
        t += 1;
        if !stop.period_allows(t) {
            break;
        }
        let (lo, hi) = filter.bounds(t);
        let (rec_lo, rec_hi) = &best.1;
        if lo > *rec_hi {
            continue;
        }
        let d = lattice_distance(t, omega, prec)?;
        let improves = hi < *rec_lo || d.value.compare(&best.0, prec)? == Ordering::Less;
        if improves {
            best = (d.value.clone(), filter.enclose(&d.value));
            entries.push(record(entries.len(), t, d));
        }
    }
    Ok(PeriodSequence {
        entries,
        terminated: false,
    })
}

/// Periods of the orbit of `x ↦ x + ω` on the torus started at the origin,
/// with `d` the sup distance on `T^n`. Iterates the orbit (reducing mod 1
/// each step) instead of rounding `Tω`, so it is an independent route to the
/// same sequence.
pub fn dynamical_periods(omega: &Vector, max_period: u64, prec: Precision) -> Result<PeriodSequence> {
    if max_period == 0 {
        return Err(Error::invalid("max period must be positive"));
    }
    let half = Real::ratio(1, 2);
    let one = Real::one();
    let n = omega.dim();
    let mut x = vec![Real::zero(); n];
    let mut wraps = vec![BigInt::zero(); n];
    let mut entries: Vec<BestApproximation> = Vec::new();
    let mut best: Option<Real> = None;
    for t in 1..=max_period {
        let mut dist = Real::zero();
        let mut witness = Vec::with_capacity(n);
        for i in 0..n {
            let y = &x[i] + &omega.components()[i];
            let f = y.floor(prec)?;
            wraps[i] += &f;
            x[i] = &y - &Real::from_integer(f);
            // torus distance from x_i ∈ [0, 1) to 0
            let back = &one - &x[i];
            let (d, up) = match x[i].compare(&half, prec)? {
                Ordering::Greater => (back, true),
                _ => (x[i].clone(), false),
            };
            witness.push(if up { &wraps[i] + 1 } else { wraps[i].clone() });
            if d.compare(&dist, prec)? == Ordering::Greater {
                dist = d;
            }
        }
        let improves = match &best {
            None => true,
            Some(b) => dist.compare(b, prec)? == Ordering::Less,
        };
        if improves {
            best = Some(dist.clone());
            let done = dist.is_zero();
            entries.push(BestApproximation {
                index: entries.len(),
                period: t,
                delta: dist,
                witness,
            });
            if done {
                return Ok(PeriodSequence {
                    entries,
                    terminated: true,
                });
            }
        }
    }
    Ok(PeriodSequence {
        entries,
        terminated: false,
    })
}

/// Outcome of the two-sided bound `1/(T_i+T_{i+1}) ≤ δ_i ≤ T_{i+1}^{-1/n}`
/// for one consecutive pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichRecord {
    pub index: usize,
    pub period: u64,
    pub next_period: u64,
    pub lower_bound: BigRational,
    pub lower_holds: bool,
    /// `δ_i^n · T_{i+1}`, which must not exceed 1.
    pub upper_product: Real,
    pub upper_holds: bool,
}

/// Check the period sandwich on every consecutive pair. The upper bound is
/// tested as `δ_i^n · T_{i+1} ≤ 1`, so no roots are taken.
pub fn check_period_sandwich(
    seq: &PeriodSequence,
    n: usize,
    prec: Precision,
) -> Result<Vec<SandwichRecord>> {
    let mut out = Vec::new();
    for pair in seq.entries.windows(2) {
        let (cur, next) = (&pair[0], &pair[1]);
        let lower_bound = BigRational::new(BigInt::one(), BigInt::from(cur.period + next.period));
        let lower_holds =
            Real::from_rational(lower_bound.clone()).compare(&cur.delta, prec)? != Ordering::Greater;
        let upper_product = cur.delta.pow(n as u32).scale_int(&BigInt::from(next.period));
        let upper_holds = upper_product.compare(&Real::one(), prec)? != Ordering::Greater;
        let rec = SandwichRecord {
            index: cur.index,
            period: cur.period,
            next_period: next.period,
            lower_bound,
            lower_holds,
            upper_product,
            upper_holds,
        };
        if !(rec.lower_holds && rec.upper_holds) {
            return Err(Error::VerificationFailed(format!(
                "period sandwich fails at i = {} (T_i = {}, T_i+1 = {})",
                rec.index, rec.period, rec.next_period
            )));
        }
        out.push(rec);
    }
    Ok(out)
}
