//! Resonance modules `R(ω) = {k ∈ Z^n : ⟨k, ω⟩ ∈ Z}`, the unimodular normal
//! form that splits `ω` into a rational and a non-resonant block, and the
//! shortest resonance `e(ω)`.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{Declaration, Vector};
use crate::dirichlet::{box_size, BOX_GUARD};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceModule {
    pub dim: usize,
    /// Hermite-normalized rows spanning `R(ω)`.
    pub basis: Vec<Vec<BigInt>>,
    pub factors: Vec<BigInt>,
    /// Unimodular, with `(d_1 e_1, …, d_r e_r)` a basis of `R(Aω)`.
    pub a: IntMatrix,
}

impl ResonanceModule {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, omega: &Vector, k: &[BigInt]) -> bool {
        omega.dot(k).is_integer()
    }
}

/// Which coordinates carry the resonances, according to the declaration.
fn rational_block(omega: &Vector) -> Result<Vec<usize>> {
    let rational: Vec<usize> = (0..omega.dim())
        .filter(|&i| omega.components()[i].is_rational())
        .collect();
    if rational.len() == omega.dim() {
        return Ok(rational);
    }
    match omega.declaration() {
        Declaration::Undeclared => Err(Error::IrrationalInput),
        Declaration::NonResonant => Ok(Vec::new()),
        Declaration::IrrationalBlockNonResonant => Ok(rational),
    }
}

/// Kernel of `k ↦ ⟨k, w⟩ mod t`, from the SNF of the row `[w | t]`.
fn congruence_kernel(t: &BigInt, w: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = w.len();
    let mut row = w.to_vec();
    row.push(t.clone());
    let b = IntMatrix::from_rows(vec![row]).expect("nonempty row");
    let s = smith_normal_form(&b);
    let inv = s.a.unimodular_inverse().expect("SNF factor is unimodular");
    // columns 1..=n of A⁻¹ span ker B; drop the multiplier coordinate
    let raw: Vec<Vec<BigInt>> = (1..=n)
        .map(|j| (0..n).map(|i| inv[(i, j)].clone()).collect())
        .collect();
    IntMatrix::from_rows(raw)
        .expect("square kernel basis")
        .hermite_rows()
}

pub fn resonance_module(omega: &Vector) -> Result<ResonanceModule> {
    let n = omega.dim();
    let block = rational_block(omega)?;
    if block.is_empty() {
        return Ok(ResonanceModule {
            dim: n,
            basis: Vec::new(),
            factors: Vec::new(),
            a: IntMatrix::identity(n),
        });
    }
    let sub = Vector::new(
        block
            .iter()
            .map(|&i| omega.components()[i].clone())
            .collect(),
    )?;
    let (t, w) = sub.common_denominator().expect("rational block");
    let embedded: Vec<Vec<BigInt>> = congruence_kernel(&t, &w)
        .into_iter()
        .map(|k| {
            let mut full = vec![BigInt::zero(); n];
            for (&i, x) in block.iter().zip(k) {
                full[i] = x;
            }
            full
        })
        .collect();
    let m = IntMatrix::from_rows(embedded)?;
    let basis = m.hermite_rows();
    let s = smith_normal_form(&m);
    Ok(ResonanceModule {
        dim: n,
        basis,
        factors: s.factors,
        a: s.a,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub a: IntMatrix,
    /// `Aω`: the first `rank` coordinates are `a_i/d_i` in lowest terms.
    pub image: Vector,
    pub rank: usize,
    pub factors: Vec<BigInt>,
}

impl NormalForm {
    pub fn rational_part(&self) -> Vec<BigRational> {
        self.image.components()[..self.rank]
            .iter()
            .map(|c| c.to_rational().expect("rational block"))
            .collect()
    }
}

pub fn normal_form(omega: &Vector) -> Result<NormalForm> {
    let module = resonance_module(omega)?;
    let comps = (0..omega.dim())
        .map(|i| omega.dot(module.a.row(i)))
        .collect();
    let image = Vector::new(comps)?.with_declaration(omega.declaration());
    Ok(NormalForm {
        rank: module.rank(),
        factors: module.factors,
        a: module.a,
        image,
    })
}

/// Visit the sign representatives (first nonzero coordinate positive) of
/// sup-norm exactly `r`. Stops early once `f` returns true.
pub(crate) fn any_on_shell(n: usize, r: i64, k: &mut [i64], f: &mut impl FnMut(&[i64]) -> bool) -> bool {
    fn rec(
        pos: usize,
        n: usize,
        r: i64,
        on_shell: bool,
        leading: bool,
        k: &mut [i64],
        f: &mut impl FnMut(&[i64]) -> bool,
    ) -> bool {
        if pos == n {
            return on_shell && f(k);
        }
        let lo = if leading { 0 } else { -r };
        for x in lo..=r {
            // zero vectors and vectors whose first nonzero entry is negative
            // never reach the leaf
            k[pos] = x;
            let lead = leading && x == 0;
            if rec(pos + 1, n, r, on_shell || x.abs() == r, lead, k, f) {
                return true;
            }
        }
        false
    }
    rec(0, n, r, false, true, k, f)
}

/// Shortest `k ≠ 0` (sup norm, then shell order) with `T | ⟨k, w⟩`, searched
/// up to `|k| ≤ limit`.
pub fn shortest_congruence(t: u64, w: &[u64], limit: u64) -> Option<(u64, Vec<i64>)> {
    let n = w.len();
    let t = t as i128;
    let mut k = vec![0i64; n];
    for r in 1..=limit as i64 {
        let mut hit = None;
        any_on_shell(n, r, &mut k, &mut |k| {
            let s: i128 = k.iter().zip(w).map(|(&a, &b)| a as i128 * b as i128).sum();
            if s.rem_euclid(t) == 0 {
                hit = Some(k.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(found) = hit {
            return Some((r as u64, found));
        }
    }
    None
}

/// `⌈t^{1/n}⌉` by integer root.
pub fn ceil_root(t: u64, n: u32) -> u64 {
    let r = t.nth_root(n);
    if r.checked_pow(n) == Some(t) {
        r
    } else {
        r + 1
    }
}

fn reduced_numerators(omega: &Vector) -> Result<(u64, Vec<u64>)> {
    let (t, w) = omega.common_denominator().ok_or(Error::IrrationalInput)?;
    let tt = t
        .to_u64()
        .ok_or_else(|| Error::invalid("period exceeds the enumeration range"))?;
    let w = w
        .iter()
        .map(|x| x.mod_floor(&t).to_u64().expect("reduced below t"))
        .collect();
    Ok((tt, w))
}

/// `e(ω)` together with a shortest resonance.
pub fn shortest_resonance(omega: &Vector) -> Result<(u64, Vec<i64>)> {
    let (t, w) = reduced_numerators(omega)?;
    let n = omega.dim();
    let bound = ceil_root(t, n as u32);
    let size = box_size(n, bound as i64);
    if size > BOX_GUARD {
        return Err(Error::BoxTooLarge {
            size,
            limit: BOX_GUARD,
        });
    }
    shortest_congruence(t, &w, bound).ok_or_else(|| {
        Error::VerificationFailed(format!("no resonance within |k| ≤ {bound} for period {t}"))
    })
}

/// `e(ω) = min{|k| : k ∈ R(ω) \ {0}}` for rational `ω`.
pub fn e_value(omega: &Vector) -> Result<u64> {
    shortest_resonance(omega).map(|(e, _)| e)
}

/// Repeated invariant factors must equal 1.
pub fn check_invariant_constraint(factors: &[BigInt]) -> bool {
    factors
        .windows(2)
        .all(|p| p[0] != p[1] || p[0].is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| x.into()).collect()
    }

    fn rat(qs: &[(i64, i64)]) -> Vector {
        Vector::from_rationals(qs).unwrap()
    }

    #[test]
    fn module_examples() {
        let m = resonance_module(&rat(&[(1, 2), (1, 3)])).unwrap();
        assert_eq!((m.rank(), m.factors.clone()), (2, ints(&[1, 6])));
        let m = resonance_module(&rat(&[(0, 1)])).unwrap();
        assert_eq!(m.basis, vec![ints(&[1])]);
        assert_eq!(m.factors, ints(&[1]));
        let m = resonance_module(&rat(&[(1, 5), (2, 5)])).unwrap();
        assert_eq!(m.factors, ints(&[1, 5]));
    }

    #[test]
    fn basis_vectors_resonate() {
        let v = rat(&[(3, 14), (5, 6), (1, 21)]);
        let m = resonance_module(&v).unwrap();
        assert_eq!(m.factors, ints(&[1, 1, 42]));
        for k in &m.basis {
            assert!(m.contains(&v, k));
        }
    }

    #[test]
    fn irrational_needs_declaration() {
        let v = Vector::parse("sqrt(2), 1/3").unwrap();
        assert_eq!(resonance_module(&v), Err(Error::IrrationalInput));
        let m = resonance_module(&v.clone().declared_non_resonant()).unwrap();
        assert_eq!(m.rank(), 0);
        let m = resonance_module(&v.with_declaration(Declaration::IrrationalBlockNonResonant))
            .unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.basis, vec![ints(&[0, 3])]);
        assert_eq!(m.factors, ints(&[3]));
    }

    #[test]
    fn normal_form_splits() {
        let nf = normal_form(&rat(&[(1, 2), (1, 3)])).unwrap();
        assert!(nf.a.is_unimodular());
        let q = nf.rational_part();
        assert!(q[0].is_integer());
        assert_eq!(q[1].denom(), &BigInt::from(6));

        let v = Vector::parse("sqrt(2), sqrt(3)").unwrap().declared_non_resonant();
        let nf = normal_form(&v).unwrap();
        assert_eq!((nf.rank, nf.a.clone()), (0, IntMatrix::identity(2)));

        let nf = normal_form(&rat(&[(3, 7)])).unwrap();
        assert_eq!(nf.factors, ints(&[7]));
        assert_eq!(nf.rational_part()[0].denom(), &BigInt::from(7));

        let mixed = Vector::parse("1/4, sqrt(5)")
            .unwrap()
            .with_declaration(Declaration::IrrationalBlockNonResonant);
        let nf = normal_form(&mixed).unwrap();
        assert_eq!(nf.rank, 1);
        assert_eq!(nf.rational_part()[0].denom(), &BigInt::from(4));
        assert!(!nf.image.components()[1].is_rational());
    }

    #[test]
    fn e_value_examples() {
        // (2, -1) and (1, 2) both work; shell order finds (1, 2) first
        let v = rat(&[(1, 5), (2, 5)]);
        let (e, k) = shortest_resonance(&v).unwrap();
        assert_eq!((e, k.clone()), (2, vec![1, 2]));
        assert!(v.dot_i64(&k).is_integer());
        assert!(v.dot_i64(&[2, -1]).is_integer());
        assert_eq!(e_value(&rat(&[(1, 2), (1, 3)])).unwrap(), 2);
        assert_eq!(e_value(&rat(&[(0, 1), (1, 3)])).unwrap(), 1);
        assert_eq!(e_value(&rat(&[(3, 7)])).unwrap(), 7);
        assert!(matches!(
            e_value(&Vector::parse("sqrt(2)").unwrap()),
            Err(Error::IrrationalInput)
        ));
    }

    #[test]
    fn ceil_root_is_exact() {
        assert_eq!(ceil_root(5, 2), 3);
        assert_eq!(ceil_root(4, 2), 2);
        assert_eq!(ceil_root(1, 3), 1);
        assert_eq!(ceil_root(28, 3), 4);
        assert_eq!(ceil_root(u64::MAX, 1), u64::MAX);
    }

    #[test]
    fn shell_enumeration_counts() {
        let mut k = vec![0; 3];
        for r in 1..4i64 {
            let mut count = 0;
            any_on_shell(3, r, &mut k, &mut |_| {
                count += 1;
                false
            });
            let full = (2 * r + 1).pow(3) - (2 * r - 1).pow(3);
            assert_eq!(count, full / 2);
        }
    }

    #[test]
    fn invariant_constraint() {
        assert!(check_invariant_constraint(&ints(&[1, 6])));
        assert!(check_invariant_constraint(&ints(&[1, 1, 12])));
        assert!(!check_invariant_constraint(&ints(&[3, 3])));
    }
}
