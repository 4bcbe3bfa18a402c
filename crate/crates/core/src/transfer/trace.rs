//! Step-by-step check of the linear-form lower bound for a single `k`,
//! from a period sequence and a growth hypothesis `T_{i+1} ≤ C·T_i^{1+τ}`.
//!
//! Every inequality is evaluated in a cleared form: square roots of `n` and
//! of `‖k‖²` are removed by squaring, fractional powers by raising both sides
//! to a common integer power. With `τ = p/q` in lowest terms put
//! `a = n(q+p)` and `b = q − (n−1)p`; then `1 + μ = (q+p)/b` and the
//! threshold `X = (2√n·C^{1/(1+τ)}·‖k‖)^{n(1+μ)}` satisfies
//! `X^{2b} = (4n)^a·(C^q)^{2n}·(‖k‖²)^a`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::estimate::estimate_period_growth;
use super::mu;
use crate::arith::{scalar_distance, Precision, Real, Vector};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::periods::PeriodSequence;

/// `T_{i+1} ≤ C·T_i^{1+τ}`, with `C` stored as `C^q` (`q` the denominator
/// of `τ`) so that it stays rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthHypothesis {
    pub tau: BigRational,
    pub c_pow: BigRational,
}

/// Denominators tried when rounding the empirical `τ̂` up.
const ROUNDING_DENOMINATORS: [u32; 4] = [8, 16, 32, 64];

impl GrowthHypothesis {
    fn pq(&self) -> Result<(u32, u32)> {
        let p = self.tau.numer().to_u32();
        let q = self.tau.denom().to_u32();
        p.zip(q)
            .ok_or_else(|| Error::invalid("τ has too large a numerator or denominator"))
    }

    /// The least `C` making the hypothesis hold on every consecutive pair.
    pub fn fit(seq: &PeriodSequence, tau: &BigRational) -> Result<Self> {
        if tau.is_negative() {
            return Err(Error::invalid("τ must be nonnegative"));
        }
        if seq.len() < 2 {
            return Err(Error::InsufficientData(
                "growth hypothesis needs two periods".into(),
            ));
        }
        let mut h = GrowthHypothesis {
            tau: tau.clone(),
            c_pow: BigRational::zero(),
        };
        let (p, q) = h.pq()?;
        let periods = seq.periods();
        h.c_pow = periods
            .windows(2)
            .map(|w| BigRational::new(BigInt::from(w[1]).pow(q), BigInt::from(w[0]).pow(q + p)))
            .max()
            .expect("nonempty");
        Ok(h)
    }

    /// `τ̂` from [`estimate_period_growth`] rounded up to a small dyadic
    /// below the threshold, with the constant refitted exactly.
    pub fn from_sequence(seq: &PeriodSequence, n: usize) -> Result<Self> {
        let rep = estimate_period_growth(seq)?;
        let Some(tau) = rep.tau else {
            return Err(Error::InsufficientData(
                "periodic sequence: no growth exponent".into(),
            ));
        };
        for den in ROUNDING_DENOMINATORS {
            let d = BigInt::from(den);
            let up = (&tau.hi * BigRational::from_integer(d.clone())).ceil();
            let t = up / BigRational::from_integer(d);
            if mu(&t, n).is_ok() {
                return GrowthHypothesis::fit(seq, &t);
            }
        }
        Err(Error::ThresholdViolated {
            tau: tau.hi.to_string(),
            n,
        })
    }

    pub fn holds_on(&self, seq: &PeriodSequence) -> Result<bool> {
        let (p, q) = self.pq()?;
        Ok(seq.periods().windows(2).all(|w| {
            BigRational::from_integer(BigInt::from(w[1]).pow(q))
                <= &self.c_pow * BigRational::from_integer(BigInt::from(w[0]).pow(q + p))
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Integral,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Integral => "in Z",
        })
    }
}

/// One step of the chain, `lhs relation rhs`, decided exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub name: &'static str,
    pub relation: Relation,
    pub lhs: Real,
    pub rhs: Real,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub k: Vec<i64>,
    /// `1 + max{i : ⟨k, ω_i⟩ ∈ Z}`
    pub i: usize,
    /// `min{j ≥ i : T_{j+1} ≥ X}`
    pub j: usize,
    pub hypothesis: GrowthHypothesis,
    pub mu: BigRational,
    pub records: Vec<Inequality>,
}

impl ProofTrace {
    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.records
            .iter()
            .filter(|r| !r.holds)
            .map(|r| r.name)
            .collect()
    }
}

fn int(x: impl Into<BigInt>) -> Real {
    Real::from_integer(x.into())
}

fn rat(x: BigRational) -> Real {
    Real::from_rational(x)
}

struct Builder {
    prec: Precision,
    records: Vec<Inequality>,
}

impl Builder {
    fn push(&mut self, name: &'static str, lhs: Real, relation: Relation, rhs: Real) -> Result<()> {
        let holds = match relation {
            Relation::Integral => lhs.is_integer(),
            Relation::Le => lhs.compare(&rhs, self.prec)? != Ordering::Greater,
            Relation::Ge => lhs.compare(&rhs, self.prec)? != Ordering::Less,
        };
        self.records.push(Inequality {
            name,
            relation,
            lhs,
            rhs,
            holds,
        });
        Ok(())
    }
}

/// Trace with the hypothesis fitted from the sequence itself.
pub fn proof_trace(
    omega: &Vector,
    k: &[i64],
    seq: &PeriodSequence,
    prec: Precision,
) -> Result<ProofTrace> {
    let hyp = GrowthHypothesis::from_sequence(seq, omega.dim())?;
    proof_trace_with(omega, k, seq, &hyp, prec)
}

pub fn proof_trace_with(
    omega: &Vector,
    k: &[i64],
    seq: &PeriodSequence,
    hyp: &GrowthHypothesis,
    prec: Precision,
) -> Result<ProofTrace> {
    let n = omega.dim();
    if k.len() != n {
        return Err(Error::invalid(format!("k has {} entries, expected {n}", k.len())));
    }
    if k.iter().all(|&x| x == 0) {
        return Err(Error::invalid("k must be nonzero"));
    }
    let dot = omega.dot_i64(k);
    if dot.is_integer() {
        return Err(Error::ResonanceDetected(format!(
            "<k, omega> = {dot} is an integer for k = {k:?}"
        )));
    }
    let mu_val = mu(&hyp.tau, n)?;
    let (p, q) = hyp.pq()?;
    let nn = n as u32;
    let a = nn * (q + p);
    let b = q - (nn - 1) * p;

    let kb: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
    let norm2: BigInt = kb.iter().map(|x| x * x).sum();
    let periods = seq.periods();
    let dots: Vec<BigRational> = seq
        .entries
        .iter()
        .map(|e| {
            let s: BigInt = e.witness.iter().zip(&kb).map(|(w, k)| w * k).sum();
            BigRational::new(s, BigInt::from(e.period))
        })
        .collect();

    let last_integral = dots
        .iter()
        .rposition(|d| d.is_integer())
        .expect("T_0 = 1 has an integral approximant");
    let i = last_integral + 1;
    if i >= seq.len() {
        return Err(Error::SequenceTooShallow(format!(
            "<k, omega_i> is integral up to the last period for k = {k:?}"
        )));
    }

    let four_n = BigInt::from(4 * n);
    // X^{2b} as an exact rational
    let x_form = BigRational::from_integer(four_n.pow(a) * norm2.pow(a)) * hyp.c_pow.pow(2 * n as i32);
    let pow2b = |t: u64| BigRational::from_integer(BigInt::from(t).pow(2 * b));
    let j = (i..seq.len() - 1)
        .find(|&j| pow2b(periods[j + 1]) >= x_form)
        .ok_or_else(|| {
            Error::SequenceTooShallow(format!(
                "no period beyond index {i} reaches the threshold for k = {k:?} (last period {})",
                periods.last().copied().unwrap_or(0)
            ))
        })?;

    let mut out = Builder {
        prec,
        records: Vec::new(),
    };
    let (ti, tp) = (periods[i], periods[i - 1]);
    let (tj, tj1) = (periods[j], periods[j + 1]);
    let approx = |idx: usize| -> Vec<Real> {
        seq.entries[idx]
            .approximant()
            .into_iter()
            .map(Real::from_rational)
            .collect()
    };
    let recip = |t: u64| rat(BigRational::new(BigInt::one(), BigInt::from(t)));

    // first part: lower bound on ‖k‖ in terms of T_{i-1}, T_i
    out.push("resonant_at_previous", rat(dots[i - 1].clone()), Relation::Integral, rat(dots[i - 1].round()))?;
    let frac_i = scalar_distance(&rat(dots[i].clone()), prec)?;
    out.push("nonresonant_at_i", frac_i, Relation::Ge, recip(ti))?;
    let gap = rat((&dots[i] - &dots[i - 1]).abs());
    out.push("step_gap", gap, Relation::Ge, recip(ti))?;

    let prev = approx(i - 1);
    let diff: Vec<Real> = prev.iter().zip(omega.components()).map(|(a, w)| a - w).collect();
    let euclid2 = diff.iter().fold(Real::zero(), |acc, d| &acc + &(d * d));
    let lhs = euclid2.scale_int(&(BigInt::from(4) * BigInt::from(ti).pow(2) * &norm2));
    out.push("norm_lower", lhs, Relation::Ge, int(1))?;
    let delta_prev = &seq.entries[i - 1].delta;
    let sup2 = (delta_prev * delta_prev).scale(&BigRational::new(
        BigInt::from(n),
        BigInt::from(tp).pow(2),
    ));
    out.push("euclid_vs_sup", euclid2, Relation::Le, sup2)?;
    out.push(
        "dirichlet_at_previous",
        delta_prev.pow(nn).scale_int(&BigInt::from(ti)),
        Relation::Le,
        int(1),
    )?;
    out.push(
        "norm_vs_periods",
        int(norm2.pow(nn) * four_n.pow(nn) * BigInt::from(ti).pow(2 * (nn - 1))),
        Relation::Ge,
        int(BigInt::from(tp).pow(2 * nn)),
    )?;
    let growth = |lo: u64, hi: u64| -> (Real, Real) {
        (
            int(BigInt::from(hi).pow(q)),
            rat(&hyp.c_pow * BigRational::from_integer(BigInt::from(lo).pow(q + p))),
        )
    };
    let (l, r) = growth(tp, ti);
    out.push("growth_at_i", l, Relation::Le, r)?;
    out.push("period_at_i_bounded", rat(pow2b(ti)), Relation::Le, rat(x_form.clone()))?;

    // second part: choice of j(k)
    out.push("threshold_reached", rat(pow2b(tj1)), Relation::Ge, rat(x_form.clone()))?;
    out.push("period_at_j_bounded", rat(pow2b(tj)), Relation::Le, rat(x_form.clone()))?;
    let (l, r) = growth(tj, tj1);
    out.push("growth_at_j", l, Relation::Le, r)?;
    let lower_lhs = (BigRational::from_integer(BigInt::from(tj).pow(q + p)) * &hyp.c_pow).pow(2 * b as i32);
    out.push("period_at_j_lower", rat(lower_lhs), Relation::Ge, rat(x_form.pow(q as i32)))?;

    // third part: the small divisor at ω_j and the error term
    let frac_j = scalar_distance(&rat(dots[j].clone()), prec)?;
    out.push("min_at_j", frac_j, Relation::Ge, recip(tj))?;
    let delta_j = &seq.entries[j].delta;
    out.push(
        "dirichlet_at_j",
        delta_j.pow(nn).scale_int(&BigInt::from(tj)),
        Relation::Le,
        int(1),
    )?;
    let err = &rat(dots[j].clone()) - &dot;
    let err2 = &err * &err;
    out.push(
        "delta_bound",
        err2.pow(nn).scale_int(&BigInt::from(tj).pow(2 * (nn + 1))),
        Relation::Le,
        int(norm2.pow(nn)),
    )?;
    out.push("tau_le_mu", rat(hyp.tau.clone()), Relation::Le, rat(mu_val.clone()))?;
    let small_divisor = scalar_distance(&dot, prec)?;
    let bound = &recip(tj) - &err.abs(prec)?;
    out.push("final", small_divisor, Relation::Ge, bound)?;

    Ok(ProofTrace {
        k: k.to_vec(),
        i,
        j,
        hypothesis: hyp.clone(),
        mu: mu_val,
        records: out.records,
    })
}

/// Nonzero `k` with `|k| ≤ radius`, in lexicographic order.
pub fn k_box(n: usize, radius: i64) -> Vec<Vec<i64>> {
    let width = (2 * radius + 1) as usize;
    let count = width.pow(n as u32);
    (0..count)
        .map(|mut idx| {
            let mut k = vec![0i64; n];
            for x in k.iter_mut().rev() {
                *x = (idx % width) as i64 - radius;
                idx /= width;
            }
            k
        })
        .filter(|k| k.iter().any(|&x| x != 0))
        .collect()
}

/// Traces for every nonzero `k` in the box `|k| ≤ radius`, fanned out per
/// `k` and returned in lexicographic order of `k`.
pub fn proof_trace_batch(
    omega: &Vector,
    radius: i64,
    seq: &PeriodSequence,
    hyp: &GrowthHypothesis,
    prec: Precision,
    exec: Exec,
) -> Vec<(Vec<i64>, Result<ProofTrace>)> {
    exec.map(k_box(omega.dim(), radius), |k| {
        let t = proof_trace_with(omega, &k, seq, hyp, prec);
        (k, t)
    })
}
