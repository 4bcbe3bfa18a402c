use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::parse::parse_components;
use super::real::{Precision, Real};
use crate::error::{Error, Result};

/// What the caller asserts about the resonance structure of a vector that
/// contains irrational components. Irrationality is never inferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Declaration {
    #[default]
    Undeclared,
    /// No nonzero `k` has `⟨k, ω⟩ ∈ Z`.
    NonResonant,
    /// The non-rational components form a non-resonant block; all resonances
    /// come from the rational components.
    IrrationalBlockNonResonant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    components: Vec<Real>,
    declaration: Declaration,
}

impl Vector {
    pub fn new(components: Vec<Real>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("vector needs at least one component"));
        }
        Ok(Vector {
            components,
            declaration: Declaration::Undeclared,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Vector::new(parse_components(text)?)
    }

    pub fn from_rationals(qs: &[(i64, i64)]) -> Result<Self> {
        Vector::new(qs.iter().map(|&(n, d)| Real::ratio(n, d)).collect())
    }

    pub fn with_declaration(mut self, declaration: Declaration) -> Self {
        self.declaration = declaration;
        self
    }

    pub fn declared_non_resonant(self) -> Self {
        self.with_declaration(Declaration::NonResonant)
    }

    pub fn declaration(&self) -> Declaration {
        self.declaration
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Real] {
        &self.components
    }

    pub fn is_rational(&self) -> bool {
        self.components.iter().all(Real::is_rational)
    }

    pub fn to_rationals(&self) -> Option<Vec<BigRational>> {
        self.components.iter().map(Real::to_rational).collect()
    }

    /// `(T, w)` with `ω = w/T` and `T` the least common denominator.
    pub fn common_denominator(&self) -> Option<(BigInt, Vec<BigInt>)> {
        let qs = self.to_rationals()?;
        let t = qs
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let w = qs
            .iter()
            .map(|q| q.numer() * (&t / q.denom()))
            .collect();
        Some((t, w))
    }

    pub fn scale_int(&self, k: &BigInt) -> Vector {
        Vector {
            components: self.components.iter().map(|c| c.scale_int(k)).collect(),
            declaration: self.declaration,
        }
    }

    /// `⟨k, ω⟩` as an exact value.
    pub fn dot(&self, k: &[BigInt]) -> Real {
        let mut acc = Real::zero();
        for (c, ki) in self.components.iter().zip(k) {
            if !ki.is_zero() {
                acc = &acc + &c.scale_int(ki);
            }
        }
        acc
    }

    pub fn dot_i64(&self, k: &[i64]) -> Real {
        let k: Vec<BigInt> = k.iter().map(|&x| x.into()).collect();
        self.dot(&k)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `‖Tω‖_Z` in the sup norm together with a nearest lattice point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeDistance {
    pub value: Real,
    pub nearest: Vec<BigInt>,
}

/// Sup-norm distance from `Tω` to `Z^n`, coordinate by coordinate nearest
/// integer rounding (half-integer ties go to the lower integer).
pub fn lattice_distance(t: u64, omega: &Vector, prec: Precision) -> Result<LatticeDistance> {
    if t == 0 {
        return Err(Error::invalid("T must be at least 1"));
    }
    let t = BigInt::from(t);
    let mut value = Real::zero();
    let mut nearest = Vec::with_capacity(omega.dim());
    for c in omega.components() {
        let (d, k) = c.scale_int(&t).dist_to_integer(prec)?;
        if d.compare(&value, prec)? == Ordering::Greater {
            value = d;
        }
        nearest.push(k);
    }
    Ok(LatticeDistance { value, nearest })
}

/// `‖x‖_Z` for a scalar.
pub fn scalar_distance(x: &Real, prec: Precision) -> Result<Real> {
    x.dist_to_integer(prec).map(|(d, _)| d)
}

/// Cheap lower/upper bounds on `‖Tω‖_Z` from fixed-point enclosures of the
/// components. Used to skip most times `T` without exact arithmetic.
pub(crate) struct DistanceFilter {
    bits: u32,
    unit: BigInt,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
}

impl DistanceFilter {
    pub(crate) fn new(omega: &Vector, bits: u32) -> Self {
        let (lo, hi) = omega
            .components()
            .iter()
            .map(|c| {
                let d = c.enclose(bits);
                (d.lo, d.hi)
            })
            .unzip();
        DistanceFilter {
            bits,
            unit: BigInt::one() << bits,
            lo,
            hi,
        }
    }

    /// Scaled bounds `[L, U]` with `L/2^bits ≤ ‖Tω‖_Z ≤ U/2^bits`.
    pub(crate) fn bounds(&self, t: u64) -> (BigInt, BigInt) {
        let half: BigInt = &self.unit >> 1usize;
        let mut lower = BigInt::zero();
        let mut upper = BigInt::zero();
        for (lo, hi) in self.lo.iter().zip(&self.hi) {
            let a = lo * t;
            let b = hi * t;
            let cell = a.div_floor(&self.unit);
            let base = &cell * &self.unit;
            let (u, v) = (&a - &base, &b - &base);
            let (l, h) = if v >= self.unit {
                // an integer lies inside the enclosure
                (BigInt::zero(), half.clone())
            } else if v <= half {
                (u, v)
            } else if u >= half {
                (&self.unit - &v, &self.unit - &u)
            } else {
                (u.clone().min(&self.unit - &v), half.clone())
            };
            if l > lower {
                lower = l;
            }
            if h > upper {
                upper = h;
            }
        }
        (lower, upper)
    }

    /// Scaled enclosure of a known nonnegative exact value.
    pub(crate) fn enclose(&self, x: &Real) -> (BigInt, BigInt) {
        let d = x.enclose(self.bits);
        (d.lo.max(BigInt::zero()), d.hi)
    }
}

/// Exact `x^n · q ≤ 1` test, the cleared form of `x ≤ q^(-1/n)`.
pub fn power_times_at_most_one(
    x: &Real,
    n: u32,
    q: &BigRational,
    prec: Precision,
) -> Result<bool> {
    let lhs = x.pow(n).scale(q);
    Ok(lhs.compare(&Real::one(), prec)? != Ordering::Greater)
}
