//! Exact real scalars: elements of a multi-quadratic number field.
//!
//! A [`Real`] is a finite sum `Σ q_s·√s` with rational coefficients `q_s`
//! and distinct square-free radicands `s` (the radicand `1` carries the
//! rational part). The representation is canonical, so equality and the
//! zero test are structural. Ordering is decided by refining dyadic
//! enclosures until they separate, which always happens for a nonzero
//! value; the only failure mode is hitting the caller's precision cap.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest integer accepted under a square root after clearing denominators.
pub const MAX_RADICAND: u64 = 1_000_000_000_000;

/// Refinement schedule for comparisons: start at `start_bits`, double until
/// `cap_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: 256,
            cap_bits: 16384,
        }
    }
}

impl Precision {
    /// A single refinement level.
    pub fn fixed(bits: u32) -> Self {
        Precision {
            start_bits: bits,
            cap_bits: bits,
        }
    }

    pub fn with_cap(cap_bits: u32) -> Self {
        Precision {
            start_bits: 256.min(cap_bits),
            cap_bits,
        }
    }

    pub(crate) fn levels(self) -> impl Iterator<Item = u32> {
        let cap = self.cap_bits.max(1);
        let mut next = Some(self.start_bits.clamp(1, cap));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= cap {
                None
            } else {
                Some(cur.saturating_mul(2).min(cap))
            };
            Some(cur)
        })
    }
}

/// A dyadic enclosure `[lo, hi] / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl Dyadic {
    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.bits)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.bits)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// Exact value in `Q(√p₁, …, √p_k)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Real {
    // radicand -> coefficient, no zero coefficients stored
    terms: BTreeMap<u64, BigRational>,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Split `m = f²·s` with `s` square-free.
fn squarefree_split(mut m: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut rad = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            outside *= p;
        }
        if e % 2 == 1 {
            rad *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (outside, rad * m)
}

fn smallest_prime_factor(m: u64) -> u64 {
    debug_assert!(m > 1);
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            return p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    m
}

fn radicand_product(a: u64, b: u64) -> (u64, u64) {
    // √a·√b = g·√((a/g)(b/g)) for square-free a, b
    let g = a.gcd(&b);
    let r = (a / g)
        .checked_mul(b / g)
        .expect("radicand overflow: too many independent square roots");
    (g, r)
}

impl Real {
    pub fn zero() -> Self {
        Real::default()
    }

    pub fn one() -> Self {
        Real::from_integer(1)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Real::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Real { terms }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Real::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `√q` for a nonnegative rational `q`.
    pub fn sqrt_of(q: &BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::invalid("square root of a negative number"));
        }
        if q.is_zero() {
            return Ok(Real::zero());
        }
        // √(a/b) = √(ab)/b
        let ab = q.numer() * q.denom();
        let m = ab
            .to_u64()
            .filter(|&m| m <= MAX_RADICAND)
            .ok_or_else(|| Error::invalid(format!("radicand {ab} exceeds {MAX_RADICAND}")))?;
        let (outside, rad) = squarefree_split(m);
        let coeff = BigRational::new(BigInt::from(outside), q.denom().clone());
        let mut terms = BTreeMap::new();
        terms.insert(rad, coeff);
        Ok(Real { terms })
    }

    pub fn sqrt_int(m: u64) -> Result<Self> {
        Real::sqrt_of(&BigRational::from_integer(m.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&s| s == 1)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        Some(self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn is_integer(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_integer())
    }

    /// Radicand/coefficient pairs in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(s, q)| (*s, q))
    }

    fn add_term(&mut self, rad: u64, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let remove = {
            let slot = self.terms.entry(rad).or_insert_with(BigRational::zero);
            *slot += q;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&rad);
        }
    }

    pub fn scale(&self, q: &BigRational) -> Real {
        if q.is_zero() {
            return Real::zero();
        }
        Real {
            terms: self.terms.iter().map(|(s, c)| (*s, c * q)).collect(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Real {
        if k.is_zero() {
            return Real::zero();
        }
        Real {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (*s, c * BigRational::from_integer(k.clone())))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Real {
        let mut acc = Real::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Flip the sign of every term whose radicand is divisible by `p`.
    fn conjugate(&self, p: u64) -> Real {
        Real {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (*s, if s % p == 0 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Real> {
        if self.is_zero() {
            return None;
        }
        let mut num = Real::one();
        let mut den = self.clone();
        // Each conjugation eliminates one prime from the radicands of `den`.
        while let Some(&rad) = den.terms.keys().rev().find(|&&s| s != 1) {
            let p = smallest_prime_factor(rad);
            let conj = den.conjugate(p);
            num = &num * &conj;
            den = &den * &conj;
        }
        let q = den.to_rational().expect("conjugation leaves a rational");
        Some(num.scale(&q.recip()))
    }

    pub fn checked_div(&self, other: &Real) -> Option<Real> {
        other.inv().map(|r| self * &r)
    }

    /// Dyadic enclosure of width at most `(#terms)·(|q|+1)·2^-bits`.
    pub fn enclose(&self, bits: u32) -> Dyadic {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (&s, q) in &self.terms {
            let (a, b) = (q.numer(), q.denom());
            if s == 1 {
                let scaled = a << bits;
                lo += floor_div(&scaled, b);
                hi += ceil_div(&scaled, b);
            } else {
                let r = BigInt::from((BigUint::from(s) << (2 * bits as usize)).sqrt());
                let r1 = &r + 1u32;
                if a.is_negative() {
                    lo += floor_div(&(a * &r1), b);
                    hi += ceil_div(&(a * &r), b);
                } else {
                    lo += floor_div(&(a * &r), b);
                    hi += ceil_div(&(a * &r1), b);
                }
            }
        }
        Dyadic { lo, hi, bits }
    }

    /// Provably correct sign.
    pub fn sign(&self, prec: Precision) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(q) = self.to_rational() {
            return Ok(if q.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            });
        }
        let mut last = prec.start_bits;
        for bits in prec.levels() {
            last = bits;
            let d = self.enclose(bits);
            if d.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if d.hi.is_negative() {
                return Ok(Ordering::Less);
            }
        }
        Err(Error::PrecisionExhausted { bits: last })
    }

    pub fn compare(&self, other: &Real, prec: Precision) -> Result<Ordering> {
        (self - other).sign(prec)
    }

    pub fn abs(&self, prec: Precision) -> Result<Real> {
        Ok(match self.sign(prec)? {
            Ordering::Less => -self,
            _ => self.clone(),
        })
    }

    pub fn floor(&self, prec: Precision) -> Result<BigInt> {
        if let Some(q) = self.to_rational() {
            return Ok(q.floor().to_integer());
        }
        let mut last = prec.start_bits;
        for bits in prec.levels() {
            last = bits;
            let d = self.enclose(bits);
            let unit = BigInt::one() << bits;
            let (a, b) = (floor_div(&d.lo, &unit), floor_div(&d.hi, &unit));
            if a == b {
                return Ok(a);
            }
        }
        Err(Error::PrecisionExhausted { bits: last })
    }

    /// Nearest integer; an exact half-integer tie resolves to the lower one.
    pub fn nearest_integer(&self, prec: Precision) -> Result<BigInt> {
        if let Some(q) = self.to_rational() {
            let half = BigRational::new(1.into(), 2.into());
            return Ok((q - half).ceil().to_integer());
        }
        // never a tie: an irrational is not a half-integer
        (self + &Real::ratio(1, 2)).floor(prec)
    }

    /// `(‖x‖_Z, k)` with `k` the nearest integer.
    pub fn dist_to_integer(&self, prec: Precision) -> Result<(Real, BigInt)> {
        let k = self.nearest_integer(prec)?;
        let d = (self - &Real::from_integer(k.clone())).abs(prec)?;
        Ok((d, k))
    }

    /// Rational midpoint-free decimal bounds with `digits` fractional digits,
    /// rounded outward.
    pub fn decimal_bounds(&self, digits: u32) -> (String, String) {
        let scale = BigInt::from(10u32).pow(digits);
        let (lo, hi) = match self.to_rational() {
            Some(q) => {
                let s = q * BigRational::from_integer(scale.clone());
                (s.floor().to_integer(), s.ceil().to_integer())
            }
            None => {
                // 10^d < 2^(4d); pad with guard bits
                let d = self.enclose(4 * digits + 64);
                let unit = BigInt::one() << d.bits;
                (
                    floor_div(&(&d.lo * &scale), &unit),
                    ceil_div(&(&d.hi * &scale), &unit),
                )
            }
        };
        (
            format_decimal(&lo, digits),
            format_decimal(&hi, digits),
        )
    }
}

fn format_decimal(scaled: &BigInt, digits: u32) -> String {
    let neg = scaled.is_negative();
    let mag = scaled.abs().to_string();
    let d = digits as usize;
    let padded = if mag.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int, frac) = padded.split_at(padded.len() - d);
    let sign = if neg { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (&s, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let mag = q.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if s == 1 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "sqrt({s})")?;
            } else {
                write!(f, "{mag}*sqrt({s})")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        let mut out = self.clone();
        for (s, q) in &rhs.terms {
            out.add_term(*s, q.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        let mut out = self.clone();
        for (s, q) in &rhs.terms {
            out.add_term(*s, -q);
        }
        out
    }
}

impl<'a> Mul<&'a Real> for &'a Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        let mut out = Real::zero();
        for (a, p) in &self.terms {
            for (b, q) in &rhs.terms {
                let (g, r) = radicand_product(*a, *b);
                out.add_term(r, p * q * BigRational::from_integer(g.into()));
            }
        }
        out
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            terms: self.terms.iter().map(|(s, q)| (*s, -q)).collect(),
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        &self + &rhs
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        &self - &rhs
    }
}

impl Mul for Real {
    type Output = Real;
    fn mul(self, rhs: Real) -> Real {
        &self * &rhs
    }
}

impl From<BigRational> for Real {
    fn from(q: BigRational) -> Self {
        Real::from_rational(q)
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Self {
        Real::from_integer(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sqrt(m: u64) -> Real {
        Real::sqrt_int(m).unwrap()
    }

    #[test]
    fn squarefree_reduction() {
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(49), (7, 1));
        assert_eq!(squarefree_split(30), (1, 30));
        assert!(sqrt(9).is_integer());
        assert_eq!(sqrt(8), sqrt(2).scale_int(&2.into()));
        // √(1/2) = √2/2
        assert_eq!(Real::sqrt_of(&q(1, 2)).unwrap(), sqrt(2).scale(&q(1, 2)));
    }

    #[test]
    fn field_operations_are_exact() {
        let s2 = sqrt(2);
        let s3 = sqrt(3);
        assert_eq!(&s2 * &s2, Real::from_integer(2));
        assert_eq!(&s2 * &s3, sqrt(6));
        assert_eq!(&(&s2 * &sqrt(6)), &sqrt(3).scale_int(&2.into()));
        let x = &(&s2 + &s3) + &Real::ratio(1, 7);
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, Real::one());
        assert!(Real::zero().inv().is_none());
    }

    #[test]
    fn compare_examples() {
        let p = Precision::default();
        assert_eq!(
            Real::ratio(1, 2).compare(&Real::ratio(1, 2), p),
            Ok(Ordering::Equal)
        );
        assert_eq!(sqrt(2).compare(&Real::ratio(3, 2), p), Ok(Ordering::Less));
        let dec = Real::from_rational(q(141_421_356_237, 100_000_000_000));
        assert_eq!(
            sqrt(2).compare(&dec, Precision::fixed(64)),
            Ok(Ordering::Greater)
        );
    }

    #[test]
    fn precision_exhaustion_is_reported() {
        // √2 - 1.41421356237309504880168872 is about 4e-27, below 2^-32 resolution
        let n: BigInt = "141421356237309504880168872".parse().unwrap();
        let d: BigInt = "100000000000000000000000000".parse().unwrap();
        let approx = Real::from_rational(BigRational::new(n, d));
        let r = sqrt(2).compare(&approx, Precision::fixed(32));
        assert_eq!(r, Err(Error::PrecisionExhausted { bits: 32 }));
        assert_eq!(
            sqrt(2).compare(&approx, Precision::default()),
            Ok(Ordering::Greater)
        );
    }

    #[test]
    fn nearest_integer_tie_goes_down() {
        let p = Precision::default();
        assert_eq!(Real::ratio(1, 2).nearest_integer(p).unwrap(), 0.into());
        assert_eq!(Real::ratio(-1, 2).nearest_integer(p).unwrap(), (-1).into());
        assert_eq!(Real::ratio(7, 2).nearest_integer(p).unwrap(), 3.into());
        assert_eq!(Real::ratio(6, 7).nearest_integer(p).unwrap(), 1.into());
        let phi = &(&sqrt(5) + &Real::one()).scale(&q(1, 2));
        assert_eq!(phi.nearest_integer(p).unwrap(), 2.into());
        assert_eq!(phi.floor(p).unwrap(), 1.into());
    }

    #[test]
    fn enclosure_contains_value() {
        let x = &sqrt(2).scale(&q(-3, 5)) + &sqrt(15);
        for bits in [8, 64, 300] {
            let d = x.enclose(bits);
            assert!(d.lo < d.hi);
            // value ≈ 3.0244, check against the rational bounds by squaring
            let lo = d.lower();
            let hi = d.upper();
            assert!(Real::from_rational(lo).compare(&x, Precision::default()).unwrap().is_lt());
            assert!(Real::from_rational(hi).compare(&x, Precision::default()).unwrap().is_gt());
        }
    }

    #[test]
    fn display_is_canonical() {
        let phi = (&sqrt(5) + &Real::one()).scale(&q(1, 2));
        assert_eq!(phi.to_string(), "1/2 + 1/2*sqrt(5)");
        let y = &Real::from_integer(-3) - &sqrt(2).scale_int(&2.into());
        assert_eq!(y.to_string(), "-3 - 2*sqrt(2)");
        assert_eq!(Real::zero().to_string(), "0");
    }

    #[test]
    fn decimal_bounds_round_outward() {
        let (lo, hi) = sqrt(2).decimal_bounds(5);
        assert_eq!((lo.as_str(), hi.as_str()), ("1.41421", "1.41422"));
        let (lo, hi) = Real::ratio(-1, 4).decimal_bounds(3);
        assert_eq!((lo.as_str(), hi.as_str()), ("-0.250", "-0.250"));
    }
}
