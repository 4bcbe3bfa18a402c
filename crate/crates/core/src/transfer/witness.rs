//! Resonant vectors are never badly approximable: from a split form
//! `Aω = (ω′, w/p)`, Dirichlet's theorem applied to `pω′` produces infinitely
//! many `T′ = pT` with `‖T′ω‖_Z ≤ C·T′^{-1/(n−1)}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arith::{lattice_distance, parse_components, parse_scalar, power_times_at_most_one, Precision, Real, Vector};
use crate::dirichlet::simultaneous_witness;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// `ω = A⁻¹(ω′, w/p)` with `A` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitVector {
    pub a: IntMatrix,
    pub irrational: Vec<Real>,
    pub last: BigRational,
}

impl SplitVector {
    pub fn new(a: IntMatrix, irrational: Vec<Real>, last: BigRational) -> Result<Self> {
        let n = irrational.len() + 1;
        if a.rows() != n || a.cols() != n {
            return Err(Error::invalid(format!("matrix must be {n}×{n}")));
        }
        if !a.is_unimodular() {
            return Err(Error::invalid("matrix is not unimodular"));
        }
        Ok(SplitVector {
            a,
            irrational,
            last,
        })
    }

    /// Parse `"ω′_1, …, ω′_{n−1} | w/p"`, with `A` the identity by default.
    pub fn parse(text: &str, matrix: Option<&str>) -> Result<Self> {
        let (left, right) = text
            .split_once('|')
            .ok_or_else(|| Error::invalid("split form needs a '|' before the rational coordinate"))?;
        let irrational = if left.trim().is_empty() {
            Vec::new()
        } else {
            parse_components(left)?
        };
        let last = parse_scalar(right)?
            .to_rational()
            .ok_or_else(|| Error::invalid("the coordinate after '|' must be rational"))?;
        let n = irrational.len() + 1;
        let a = match matrix {
            Some(m) => IntMatrix::parse(m)?,
            None => IntMatrix::identity(n),
        };
        SplitVector::new(a, irrational, last)
    }

    pub fn dim(&self) -> usize {
        self.irrational.len() + 1
    }

    /// The denominator `p` of the rational coordinate.
    pub fn p(&self) -> BigInt {
        self.last.denom().clone()
    }

    /// `(ω′, w/p) = Aω`.
    pub fn image(&self) -> Vector {
        let mut c = self.irrational.clone();
        c.push(Real::from_rational(self.last.clone()));
        Vector::new(c).expect("nonempty")
    }

    pub fn omega(&self) -> Vector {
        let inv = self.a.unimodular_inverse().expect("checked unimodular");
        let img = self.image();
        let comps = (0..self.dim()).map(|i| img.dot(inv.row(i))).collect();
        Vector::new(comps).expect("nonempty")
    }

    /// `C = L·p^{1/(n−1)}` with `L = ‖A⁻¹‖_∞`; returned as `C^{n−1}`.
    pub fn constant_pow(&self) -> BigInt {
        let l = self
            .a
            .unimodular_inverse()
            .expect("checked unimodular")
            .row_sum_norm();
        l.pow(self.dim() as u32 - 1) * self.p()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonantWitness {
    /// Dirichlet time for `pω′`.
    pub t: u64,
    /// `T′ = pT`.
    pub t_prime: u64,
    pub distance: Real,
    /// `‖T′ω‖_Z^{n−1} · T′ ≤ C^{n−1}`
    pub holds: bool,
}

/// Ladder of Dirichlet witnesses at `Q = 2, 4, 8, …` until `count` distinct
/// times are found. When `pω′` is itself periodic the ladder stalls at its
/// period `T₀` with distance zero; multiples of `T₀` are used from there.
pub fn resonant_witnesses(
    split: &SplitVector,
    count: usize,
    prec: Precision,
) -> Result<Vec<ResonantWitness>> {
    let n = split.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if count == 0 {
        return Err(Error::invalid("count must be at least 1"));
    }
    let p = split.p();
    let pu = p
        .to_u64()
        .ok_or_else(|| Error::invalid("denominator too large"))?;
    let scaled = Vector::new(split.irrational.clone())?.scale_int(&p);
    let omega = split.omega();
    let c_pow = BigRational::from_integer(split.constant_pow());
    let e = n as u32 - 1;

    let mut times: Vec<u64> = Vec::new();
    let mut q = 1u64;
    while times.len() < count {
        q = q
            .checked_mul(2)
            .ok_or_else(|| Error::invalid("Dirichlet ladder overflowed"))?;
        let w = simultaneous_witness(&scaled, &BigRational::from_integer(q.into()), prec)?;
        if w.distance.is_zero() {
            let t0 = w.time;
            let mut m = times.last().map_or(1, |&l| l / t0 + 1);
            while times.len() < count {
                times.push(t0 * m);
                m += 1;
            }
        } else if times.last().is_none_or(|&l| w.time > l) {
            times.push(w.time);
        }
    }

    times
        .into_iter()
        .map(|t| {
            let t_prime = t
                .checked_mul(pu)
                .ok_or_else(|| Error::invalid("T′ overflows"))?;
            let distance = lattice_distance(t_prime, &omega, prec)?.value;
            // δ^{n−1}·T′/C^{n−1} ≤ 1
            let factor = BigRational::from_integer(t_prime.into()) / &c_pow;
            let holds = power_times_at_most_one(&distance, e, &factor, prec)?;
            Ok(ResonantWitness {
                t,
                t_prime,
                distance,
                holds,
            })
        })
        .collect()
}
