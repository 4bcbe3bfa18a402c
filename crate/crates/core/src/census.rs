//! Exact census of short resonances over the full grid `w ∈ [0, T−1]^n`:
//! how many `w` have `e(w/T) ≤ A`, against the counting bound
//! `n(2A+1)^{n+1} T^{n−1}`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::dirichlet::half_box;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::resonance::shortest_congruence;

/// Largest grid `T^n` accepted.
pub const GRID_GUARD: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub t: u64,
    pub n: usize,
    pub threshold: u64,
    pub count: u64,
    pub total: u64,
    pub bound: BigInt,
    pub proportion: BigRational,
}

pub fn counting_bound(t: u64, n: usize, a: u64) -> BigInt {
    let n32 = n as u32;
    BigInt::from(n) * BigInt::from(2 * a + 1).pow(n32 + 1) * BigInt::from(t).pow(n32 - 1)
}

fn check_grid(t: u64, n: usize, a: u64) -> Result<u64> {
    if t == 0 || n == 0 || a == 0 {
        return Err(Error::invalid("T, n and A must be positive"));
    }
    let size = (t as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > GRID_GUARD {
        return Err(Error::GridTooLarge {
            size,
            limit: GRID_GUARD,
        });
    }
    Ok(size as u64)
}

/// Advance `w[1..]` through `[0, t)` like an odometer; false once exhausted.
fn advance(w: &mut [u64], t: u64) -> bool {
    for x in w.iter_mut().skip(1).rev() {
        *x += 1;
        if *x < t {
            return true;
        }
        *x = 0;
    }
    false
}

/// Count `w` with `e(w/T) ≤ A`, one shortest-resonance search per point.
/// Partitioned by first coordinate.
pub fn census(t: u64, n: usize, a: u64, exec: Exec) -> Result<CensusReport> {
    let total = check_grid(t, n, a)?;
    let counts = exec.map_range(0..=t as i64 - 1, |w0| {
        let mut w = vec![0u64; n];
        w[0] = w0 as u64;
        let mut c = 0u64;
        loop {
            if shortest_congruence(t, &w, a).is_some() {
                c += 1;
            }
            if !advance(&mut w, t) {
                break;
            }
        }
        c
    });
    let count = counts.iter().sum();
    Ok(report(t, n, a, count, total))
}

/// The same count from the dual side: the union over `0 < |k| ≤ A` of the
/// hyperplane sections `{w : T | ⟨k, w⟩}`, marked on a bitmap.
pub fn census_dual(t: u64, n: usize, a: u64) -> Result<CensusReport> {
    let total = check_grid(t, n, a)?;
    let mut marked = vec![false; total as usize];
    let ti = t as i128;
    for k in half_box(n, a as i64) {
        let mut w = vec![0u64; n];
        for slot in marked.iter_mut() {
            // slot index is w read in base t, most significant first
            let s: i128 = k.iter().zip(&w).map(|(&x, &y)| x as i128 * y as i128).sum();
            if s.rem_euclid(ti) == 0 {
                *slot = true;
            }
            for x in w.iter_mut().rev() {
                *x += 1;
                if *x < t {
                    break;
                }
                *x = 0;
            }
        }
    }
    let count = marked.iter().filter(|&&m| m).count() as u64;
    Ok(report(t, n, a, count, total))
}

fn report(t: u64, n: usize, a: u64, count: u64, total: u64) -> CensusReport {
    CensusReport {
        t,
        n,
        threshold: a,
        count,
        total,
        bound: counting_bound(t, n, a),
        proportion: BigRational::new(count.into(), total.into()),
    }
}

/// `⌊T^{(1−τ)/(n+1)}⌋` for rational `τ = p/q`, as the integer
/// `(n+1)q`-th root of `T^{q−p}`.
pub fn threshold_for(t: u64, n: usize, tau: &BigRational) -> Result<u64> {
    if !tau.is_positive() || *tau >= BigRational::one() {
        return Err(Error::invalid("τ must lie in (0, 1)"));
    }
    let p = tau.numer().to_u32().ok_or_else(|| Error::invalid("τ too complex"))?;
    let q = tau.denom().to_u32().ok_or_else(|| Error::invalid("τ too complex"))?;
    let base = BigUint::from(t).pow(q - p);
    let root = (n as u32 + 1)
        .checked_mul(q)
        .ok_or_else(|| Error::invalid("τ too complex"))?;
    Ok(base.nth_root(root).to_u64().expect("root below T"))
}

/// Census at `A = ⌊T^{(1−τ)/(n+1)}⌋` for each `T` in an increasing list.
pub fn proportion_trend(
    t_list: &[u64],
    n: usize,
    tau: &BigRational,
    exec: Exec,
) -> Result<Vec<CensusReport>> {
    if t_list.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::invalid("T list must be strictly increasing"));
    }
    for &t in t_list {
        check_grid(t, n, 1)?;
    }
    t_list
        .iter()
        .map(|&t| census(t, n, threshold_for(t, n, tau)?, exec))
        .collect()
}

impl CensusReport {
    pub fn within_bound(&self) -> bool {
        let c = BigInt::from(self.count);
        c <= self.bound && self.count <= self.total && !self.proportion.is_negative()
    }
}
