//! Empirical exponents from finite data.
//!
//! Each observation yields the exponent that makes its defining inequality
//! tight with unit constant; `τ̂` is the maximum of these, reported as a
//! rational enclosure. The constant is then refitted at the upper end of
//! `τ̂`. Only record observations matter: a non-record is dominated by the
//! preceding record on both counts.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::enclosure::{enclose_by, root_enclosure, simplest_in, RatEnclosure};
use crate::arith::{scalar_distance, Precision, Real, Vector};
use crate::dirichlet::{box_size, BOX_GUARD};
use crate::error::{Error, Result};
use crate::periods::{compute_periods, PeriodSequence, Stop};
use crate::resonance::any_on_shell;

/// Enclosure width `2^-20` for empirical exponents.
pub const EXPONENT_WIDTH_BITS: u32 = 20;
/// Largest denominator tried while refining an exponent.
pub const EXPONENT_MAX_DEN: u64 = 1 << 14;
/// Fractional bits kept for fitted constants.
const CONSTANT_BITS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentKind {
    PeriodGrowth,
    Simultaneous,
    Linear,
}

impl ExponentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExponentKind::PeriodGrowth => "growth",
            ExponentKind::Simultaneous => "sim",
            ExponentKind::Linear => "lin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentReport {
    pub kind: ExponentKind,
    /// `None` when the data is resonant or periodic.
    pub tau: Option<RatEnclosure>,
    /// The same maximum restricted to observations of size at least
    /// `√depth`, which tracks the trend as depth grows.
    pub tail_tau: Option<RatEnclosure>,
    /// Best constant at `τ = constant_tau`.
    pub constant: Option<RatEnclosure>,
    /// The simplest rational within `2^-20` above `tau.hi`.
    pub constant_tau: Option<BigRational>,
    pub depth: u64,
    pub observations: usize,
    /// A distance hit exactly zero: no positive constant works.
    pub resonant: bool,
}

impl ExponentReport {
    fn resonant(kind: ExponentKind, depth: u64, observations: usize) -> Self {
        ExponentReport {
            kind,
            tau: None,
            tail_tau: None,
            constant: None,
            constant_tau: None,
            depth,
            observations,
            resonant: true,
        }
    }
}

fn width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << EXPONENT_WIDTH_BITS)
}

/// A short rational `τ_c ≥ hi` at which constants are evaluated; keeps the
/// root orders small.
fn constant_tau(hi: &BigRational) -> Result<(BigRational, u32, u32)> {
    let t = simplest_in(hi, &(hi + width()));
    Ok((t.clone(), small(t.numer())?, small(t.denom())?))
}

fn enclose_exponent<F>(cmp: F) -> Result<RatEnclosure>
where
    F: FnMut(&BigInt, &BigInt) -> Result<Ordering>,
{
    enclose_by(cmp, &width(), &BigInt::from(EXPONENT_MAX_DEN))
}

fn small(x: &BigInt) -> Result<u32> {
    x.to_u32()
        .ok_or_else(|| Error::invalid("exponent refinement left the supported range"))
}

/// Ordering of `x^e · t^f` against 1, for `x > 0`.
pub(crate) fn cmp_power_product(
    x: &Real,
    e: u32,
    t: &BigInt,
    f: u32,
    prec: Precision,
) -> Result<Ordering> {
    let tf = t.pow(f);
    if let Some(q) = x.to_rational() {
        let lhs = q.pow(e as i32) * BigRational::from_integer(tf);
        return Ok(lhs.cmp(&BigRational::one()));
    }
    // absolute precision bits ≈ log2(1/x) + log2(e) + guard keeps the
    // relative error of the e-th power small
    let guess = x.enclose(64);
    let scale = if guess.hi > BigInt::zero() {
        64u64.saturating_sub(guess.hi.bits())
    } else {
        64
    };
    let start = (scale + 64 + u64::from(32 - e.leading_zeros())) as u32;
    let cap = prec.cap_bits.max(start);
    let mut bits = start;
    loop {
        let d = x.enclose(bits);
        let one = BigInt::one() << (bits as usize * e as usize);
        let lo = if d.lo > BigInt::zero() {
            d.lo.pow(e) * &tf
        } else {
            BigInt::zero()
        };
        let hi = d.hi.pow(e) * &tf;
        if hi < one {
            return Ok(Ordering::Less);
        }
        if lo > one {
            return Ok(Ordering::Greater);
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits = bits.saturating_mul(2).min(cap);
    }
}

fn real_enclosure(x: &Real) -> RatEnclosure {
    match x.to_rational() {
        Some(q) => RatEnclosure::point(q),
        None => {
            let d = x.enclose(CONSTANT_BITS + 64);
            RatEnclosure {
                lo: d.lower().max(BigRational::zero()),
                hi: d.upper(),
            }
        }
    }
}

fn fold<F>(acc: Option<RatEnclosure>, e: RatEnclosure, f: F) -> Option<RatEnclosure>
where
    F: Fn(&RatEnclosure, &RatEnclosure) -> RatEnclosure,
{
    Some(match acc {
        None => e,
        Some(a) => f(&a, &e),
    })
}

fn is_tail(size: u64, depth: u64) -> bool {
    (size as u128) * (size as u128) >= depth as u128
}

/// Growth exponent from `T_{i+1} ≤ C·T_i^{1+τ}`: `τ̂` maximizes
/// `log T_{i+1} / log T_i − 1` over `T_i ≥ 2`; `Ĉ` maximizes
/// `T_{i+1} / T_i^{1+τ̂}` over all consecutive pairs.
pub fn estimate_period_growth(seq: &PeriodSequence) -> Result<ExponentReport> {
    let periods = seq.periods();
    let depth = periods.last().copied().unwrap_or(0);
    if seq.terminated {
        return Ok(ExponentReport::resonant(
            ExponentKind::PeriodGrowth,
            depth,
            periods.len(),
        ));
    }
    if periods.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "growth estimate needs 3 periods, got {}",
            periods.len()
        )));
    }
    let minus_one = -BigRational::one();
    let mut tau = None;
    let mut tail = None;
    for pair in periods.windows(2) {
        let (b, a) = (pair[0], pair[1]);
        if b < 2 {
            continue;
        }
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let ratio = enclose_exponent(|p, q| Ok(a.pow(small(q)?).cmp(&b.pow(small(p)?))))?;
        let e = ratio.shift(&minus_one);
        if is_tail(pair[0], depth) {
            tail = fold(tail, e.clone(), RatEnclosure::max);
        }
        tau = fold(tau, e, RatEnclosure::max);
    }
    let tau = tau.expect("at least one pair with T_i ≥ 2");
    let (tc, p, q) = constant_tau(&tau.hi)?;
    let c_pow = periods
        .windows(2)
        .map(|w| {
            BigRational::new(BigInt::from(w[1]).pow(q), BigInt::from(w[0]).pow(q + p))
        })
        .max()
        .expect("nonempty");
    Ok(ExponentReport {
        kind: ExponentKind::PeriodGrowth,
        tau: Some(tau),
        tail_tau: tail,
        constant: Some(root_enclosure(&c_pow, q, CONSTANT_BITS)),
        constant_tau: Some(tc),
        depth,
        observations: periods.len() - 1,
        resonant: false,
    })
}

/// Tight exponent of `d ≥ s^{-(1+τ)·scale}` style inequalities: encloses
/// `y = −log d / (m·log s)` from comparisons `d^q · s^{m p}` against 1.
fn tight_exponent(d: &Real, s: u64, m: u32, prec: Precision) -> Result<RatEnclosure> {
    let s = BigInt::from(s);
    enclose_exponent(|p, q| {
        let q = small(q)?;
        let f = small(p)?
            .checked_mul(m)
            .ok_or_else(|| Error::invalid("exponent overflow"))?;
        // y > p/q  ⟺  d^q · s^{mp} < 1
        Ok(cmp_power_product(d, q, &s, f, prec)?.reverse())
    })
}

struct Observation {
    size: u64,
    value: Real,
}

/// Shared tail of the simultaneous and linear estimators: the defining
/// inequality is `d ≥ C·s^{-(1+τ)·num/den}`.
fn fit(
    kind: ExponentKind,
    obs: &[Observation],
    depth: u64,
    num: u32,
    den: u32,
    prec: Precision,
) -> Result<ExponentReport> {
    let minus_one = -BigRational::one();
    let mut tau = None;
    let mut tail = None;
    for o in obs.iter().filter(|o| o.size >= 2) {
        // d ≥ s^{-(1+τ)·num/den}: y = 1+τ = −den·log d / (num·log s)
        let e = if den == 1 {
            tight_exponent(&o.value, o.size, num, prec)?
        } else {
            // simultaneous case: d^{den}, so raise d to den first
            tight_exponent(&o.value.pow(den), o.size, num, prec)?
        }
        .shift(&minus_one);
        if is_tail(o.size, depth) {
            tail = fold(tail, e.clone(), RatEnclosure::max);
        }
        tau = fold(tau, e, RatEnclosure::max);
    }
    let Some(tau) = tau else {
        return Err(Error::InsufficientData(
            "no observation of size at least 2".into(),
        ));
    };
    let (tc, p, q) = constant_tau(&tau.hi)?;
    // Ĉ = min d · s^{(1+τ)·num/den} = min d · (s^{(q+p)·num})^{1/(q·den)}
    let mut constant = None;
    for o in obs {
        let s_pow = BigRational::from_integer(BigInt::from(o.size).pow((q + p) * num));
        let factor = root_enclosure(&s_pow, q * den, CONSTANT_BITS);
        let c = real_enclosure(&o.value).mul_nonneg(&factor);
        constant = fold(constant, c, RatEnclosure::min);
    }
    Ok(ExponentReport {
        kind,
        tau: Some(tau),
        tail_tau: tail,
        constant,
        constant_tau: Some(tc),
        depth,
        observations: obs.len(),
        resonant: false,
    })
}

/// Simultaneous exponent from `‖Tω‖_Z ≥ C·T^{-(1+τ)/n}` over `T ≤ max_t`.
pub fn estimate_simultaneous(omega: &Vector, max_t: u64, prec: Precision) -> Result<ExponentReport> {
    let seq = compute_periods(omega, Stop::period(max_t), prec)?;
    let kind = ExponentKind::Simultaneous;
    if seq.terminated {
        return Ok(ExponentReport::resonant(kind, max_t, seq.len()));
    }
    let obs: Vec<Observation> = seq
        .entries
        .iter()
        .map(|e| Observation {
            size: e.period,
            value: e.delta.clone(),
        })
        .collect();
    fit(kind, &obs, max_t, 1, omega.dim() as u32, prec)
}

/// Record minima of `‖⟨k, ω⟩‖_Z` over the shells `|k| = K`, `K ≤ max_k`.
/// `None` once a minimum is exactly zero.
fn linear_records(omega: &Vector, max_k: u64, prec: Precision) -> Result<Option<Vec<Observation>>> {
    let n = omega.dim();
    let mut records: Vec<Observation> = Vec::new();
    let mut k = vec![0i64; n];
    for r in 1..=max_k as i64 {
        let mut best: Option<Real> = None;
        let mut err = None;
        let mut zero = false;
        any_on_shell(n, r, &mut k, &mut |k| {
            let d = match scalar_distance(&omega.dot_i64(k), prec) {
                Ok(d) => d,
                Err(e) => {
                    err = Some(e);
                    return true;
                }
            };
            if d.is_zero() {
                zero = true;
                return true;
            }
            let smaller = match &best {
                None => Ok(true),
                Some(b) => d.compare(b, prec).map(|o| o == Ordering::Less),
            };
            match smaller {
                Ok(true) => best = Some(d),
                Ok(false) => {}
                Err(e) => {
                    err = Some(e);
                    return true;
                }
            }
            false
        });
        if let Some(e) = err {
            return Err(e);
        }
        if zero {
            return Ok(None);
        }
        let best = best.expect("shell is nonempty");
        let is_record = match records.last() {
            None => true,
            Some(last) => best.compare(&last.value, prec)? == Ordering::Less,
        };
        if is_record {
            records.push(Observation {
                size: r as u64,
                value: best,
            });
        }
    }
    Ok(Some(records))
}

/// Linear-form exponent from `‖⟨k, ω⟩‖_Z ≥ C·|k|^{-(1+τ)n}` over
/// `0 < |k| ≤ max_k`.
pub fn estimate_linear(omega: &Vector, max_k: u64, prec: Precision) -> Result<ExponentReport> {
    let n = omega.dim();
    if max_k == 0 {
        return Err(Error::invalid("max |k| must be positive"));
    }
    let size = box_size(n, max_k as i64);
    if size > BOX_GUARD {
        return Err(Error::BoxTooLarge {
            size,
            limit: BOX_GUARD,
        });
    }
    let kind = ExponentKind::Linear;
    match linear_records(omega, max_k, prec)? {
        None => Ok(ExponentReport::resonant(kind, max_k, 0)),
        Some(obs) => fit(kind, &obs, max_k, n as u32, 1, prec),
    }
}
