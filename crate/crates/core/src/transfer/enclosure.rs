//! Rational enclosures of real exponents and constants, found by exact
//! comparisons only.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatEnclosure {
    pub fn point(x: BigRational) -> Self {
        RatEnclosure {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Enclosure of `max(x, y)`.
    pub fn max(&self, other: &RatEnclosure) -> RatEnclosure {
        RatEnclosure {
            lo: (&self.lo).max(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        }
    }

    /// Enclosure of `min(x, y)`.
    pub fn min(&self, other: &RatEnclosure) -> RatEnclosure {
        RatEnclosure {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).min(&other.hi).clone(),
        }
    }

    pub fn shift(&self, d: &BigRational) -> RatEnclosure {
        RatEnclosure {
            lo: &self.lo + d,
            hi: &self.hi + d,
        }
    }

    /// Product of two nonnegative enclosures.
    pub fn mul_nonneg(&self, other: &RatEnclosure) -> RatEnclosure {
        RatEnclosure {
            lo: &self.lo * &other.lo,
            hi: &self.hi * &other.hi,
        }
    }

    /// Reciprocal of a positive enclosure.
    pub fn recip(&self) -> RatEnclosure {
        RatEnclosure {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        }
    }
}

impl fmt::Display for RatEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

fn frac(p: &BigInt, q: &BigInt) -> BigRational {
    BigRational::new(p.clone(), q.clone())
}

/// Enclose a nonnegative real `x` given only the oracle `cmp(p, q)`, which
/// returns the ordering of `x` against `p/q`. Walks the Stern–Brocot tree,
/// galloping along runs, until the interval is no wider than `width` or the
/// next denominator would exceed `max_den`. An exact hit returns a point.
pub fn enclose_by<F>(mut cmp: F, width: &BigRational, max_den: &BigInt) -> Result<RatEnclosure>
where
    F: FnMut(&BigInt, &BigInt) -> Result<Ordering>,
{
    let zero = BigInt::zero();
    let one = BigInt::one();
    match cmp(&zero, &one)? {
        Ordering::Less => return Err(Error::invalid("enclosed quantity must be nonnegative")),
        Ordering::Equal => return Ok(RatEnclosure::point(BigRational::zero())),
        Ordering::Greater => {}
    }
    // lo = a/b < x < c/d, with d = 0 meaning +∞
    let (mut a, mut b) = (zero.clone(), one.clone());
    let (mut c, mut d) = (one.clone(), zero.clone());
    loop {
        if !d.is_zero() {
            if frac(&c, &d) - frac(&a, &b) <= *width || &b + &d > *max_den {
                return Ok(RatEnclosure {
                    lo: frac(&a, &b),
                    hi: frac(&c, &d),
                });
            }
        }
        let (mp, mq) = (&a + &c, &b + &d);
        match cmp(&mp, &mq)? {
            Ordering::Equal => return Ok(RatEnclosure::point(frac(&mp, &mq))),
            Ordering::Greater => {
                // largest k with x > (a + kc)/(b + kd)
                let step = |k: &BigInt| (&a + k * &c, &b + k * &d);
                let cap = if d.is_zero() {
                    None
                } else {
                    Some((max_den - &b) / &d)
                };
                match gallop(&mut cmp, step, cap, Ordering::Greater)? {
                    Run::Hit(p, q) => return Ok(RatEnclosure::point(frac(&p, &q))),
                    Run::Len(k) => {
                        a = &a + &k * &c;
                        b = &b + &k * &d;
                    }
                }
            }
            Ordering::Less => {
                // largest k with x < (ka + c)/(kb + d)
                let step = |k: &BigInt| (k * &a + &c, k * &b + &d);
                let cap = if b.is_zero() {
                    None
                } else {
                    Some((max_den - &d) / &b)
                };
                match gallop(&mut cmp, step, cap, Ordering::Less)? {
                    Run::Hit(p, q) => return Ok(RatEnclosure::point(frac(&p, &q))),
                    Run::Len(k) => {
                        c = &k * &a + &c;
                        d = &k * &b + &d;
                    }
                }
            }
        }
    }
}

enum Run {
    Len(BigInt),
    Hit(BigInt, BigInt),
}

/// Largest `k ≥ 1` (at most `cap`, when given) for which `cmp(step(k))`
/// still equals `want`; `k = 1` is known to qualify.
fn gallop<F, S>(cmp: &mut F, step: S, cap: Option<BigInt>, want: Ordering) -> Result<Run>
where
    F: FnMut(&BigInt, &BigInt) -> Result<Ordering>,
    S: Fn(&BigInt) -> (BigInt, BigInt),
{
    let one = BigInt::one();
    let cap = cap.map(|c| c.max(one.clone()));
    let mut good = one.clone();
    let mut test = |k: &BigInt| -> Result<Option<bool>> {
        let (p, q) = step(k);
        Ok(match cmp(&p, &q)? {
            Ordering::Equal => None,
            o => Some(o == want),
        })
    };
    // exponential phase, clipped at the cap
    let bad = loop {
        let mut next: BigInt = &good * 2u32;
        if let Some(c) = &cap {
            if c <= &good {
                return Ok(Run::Len(good));
            }
            if &next > c {
                next = c.clone();
            }
        }
        match test(&next)? {
            None => {
                let (p, q) = step(&next);
                return Ok(Run::Hit(p, q));
            }
            Some(true) => good = next,
            Some(false) => break next,
        }
    };
    // binary phase on (good, bad)
    let mut bad = bad;
    while &bad - &good > one {
        let mid: BigInt = (&good + &bad) / 2u32;
        match test(&mid)? {
            None => {
                let (p, q) = step(&mid);
                return Ok(Run::Hit(p, q));
            }
            Some(true) => good = mid,
            Some(false) => bad = mid,
        }
    }
    Ok(Run::Len(good))
}

/// The rational with the least denominator in `[lo, hi]`, `0 ≤ lo ≤ hi`.
pub fn simplest_in(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(!lo.is_negative() && lo <= hi);
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    // lo and hi share the integer part f; recurse on the reciprocal gap
    let f = lo.floor();
    let inner = simplest_in(&(hi - &f).recip(), &(lo - &f).recip());
    f + inner.recip()
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x >> shift as usize).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn pow_cmp(r: &BigInt, m: u32, x: &BigRational, frac_bits: u32) -> Ordering {
    // (r/2^bits)^m against x, cleared
    let lhs = r.pow(m) * x.denom();
    let rhs = x.numer() << (frac_bits as usize * m as usize);
    lhs.cmp(&rhs)
}

/// Enclosure of `x^{1/m}` for rational `x > 0`, with about `frac_bits`
/// binary digits after the point. A floating-point estimate proposes the
/// bracket; it is accepted only after an exact check of both ends.
pub fn root_enclosure(x: &BigRational, m: u32, frac_bits: u32) -> RatEnclosure {
    assert!(x.is_positive() && m > 0);
    if m == 1 {
        return RatEnclosure::point(x.clone());
    }
    let unit = BigInt::one() << frac_bits;
    let at = |r: BigInt| BigRational::new(r, unit.clone());
    let log2 = (ln_big(x.numer()) - ln_big(x.denom())) / f64::from(m) / std::f64::consts::LN_2
        + f64::from(frac_bits);
    if log2.is_finite() && log2 < 1000.0 {
        let y = log2.exp2();
        if let Some(mid) = BigInt::from_f64(y.round()) {
            if pow_cmp(&mid, m, x, frac_bits) == Ordering::Equal {
                return RatEnclosure::point(at(mid));
            }
        }
        let slack = y * 2f64.powi(-40) + 2.0;
        if let (Some(lo), Some(hi)) = (BigInt::from_f64((y - slack).floor().max(0.0)), BigInt::from_f64((y + slack).ceil())) {
            let lo_ok = pow_cmp(&lo, m, x, frac_bits) != Ordering::Greater;
            let hi_ok = pow_cmp(&hi, m, x, frac_bits) != Ordering::Less;
            if lo_ok && hi_ok {
                return RatEnclosure {
                    lo: at(lo),
                    hi: at(hi),
                };
            }
        }
    }
    // ⌊(N·2^{bits·m}/D)^{1/m}⌋ brackets 2^bits·x^{1/m}
    let scaled = (x.numer() << (frac_bits as usize * m as usize)) / x.denom();
    let r = BigInt::from(scaled.to_biguint().expect("positive").nth_root(m));
    if pow_cmp(&r, m, x, frac_bits) == Ordering::Equal {
        return RatEnclosure::point(at(r));
    }
    RatEnclosure {
        lo: at(r.clone()),
        hi: at(r + 1),
    }
}
