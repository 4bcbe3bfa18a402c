//! Smith normal form `B = C·Λ·A` with `C`, `A` unimodular and the diagonal
//! of `Λ` forming a divisibility chain.
//!
//! Pivoting is fixed: the smallest nonzero absolute value in the remaining
//! submatrix, ties broken by row-major position. The same input therefore
//! always yields the same `C` and `A`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    /// `r × r` unimodular.
    pub c: IntMatrix,
    /// `r × n`, diagonal.
    pub lambda: IntMatrix,
    /// `n × n` unimodular.
    pub a: IntMatrix,
    /// Nonzero diagonal entries of `Λ`, each dividing the next.
    pub factors: Vec<BigInt>,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// `C·Λ·A`, which must reproduce the input.
    pub fn product(&self) -> IntMatrix {
        &(&self.c * &self.lambda) * &self.a
    }
}

struct Work {
    b: IntMatrix,
    c: IntMatrix,
    a: IntMatrix,
}

// Row operations E on B are undone on C (B_orig = C·B·A stays invariant),
// column operations F on B are undone on A.
impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.b.swap_rows(i, j);
        self.c.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.b.swap_cols(i, j);
        self.a.swap_rows(i, j);
    }

    /// `row_i += m·row_j`
    fn add_row(&mut self, i: usize, j: usize, m: &BigInt) {
        self.b.add_row(i, j, m);
        self.c.add_col(j, i, &-m);
    }

    /// `col_i += m·col_j`
    fn add_col(&mut self, i: usize, j: usize, m: &BigInt) {
        self.b.add_col(i, j, m);
        self.a.add_row(j, i, &-m);
    }

    fn negate_row(&mut self, i: usize) {
        self.b.negate_row(i);
        self.c.negate_col(i);
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.b.rows() {
            for j in t..self.b.cols() {
                let v = &self.b[(i, j)];
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.abs() < self.b[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn clear_cross(&mut self, t: usize) -> bool {
        let p = self.b[(t, t)].clone();
        let mut clean = true;
        for i in t + 1..self.b.rows() {
            if self.b[(i, t)].is_zero() {
                continue;
            }
            let q = self.b[(i, t)].div_floor(&p);
            self.add_row(i, t, &-q);
            clean &= self.b[(i, t)].is_zero();
        }
        for j in t + 1..self.b.cols() {
            if self.b[(t, j)].is_zero() {
                continue;
            }
            let q = self.b[(t, j)].div_floor(&p);
            self.add_col(j, t, &-q);
            clean &= self.b[(t, j)].is_zero();
        }
        clean
    }

    fn first_non_multiple(&self, t: usize) -> Option<usize> {
        let p = &self.b[(t, t)];
        (t + 1..self.b.rows()).find(|&i| {
            (t + 1..self.b.cols()).any(|j| !self.b[(i, j)].is_multiple_of(p))
        })
    }
}

pub fn smith_normal_form(b: &IntMatrix) -> SnfDecomposition {
    let (r, n) = (b.rows(), b.cols());
    let mut w = Work {
        b: b.clone(),
        c: IntMatrix::identity(r),
        a: IntMatrix::identity(n),
    };
    let mut factors = Vec::new();
    for t in 0..r.min(n) {
        let Some((pi, pj)) = w.pivot(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            if !w.clear_cross(t) {
                // a nonzero remainder is smaller than the pivot: re-pivot
                let (pi, pj) = w.pivot(t).expect("nonzero remainder present");
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            match w.first_non_multiple(t) {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.b[(t, t)].is_negative() {
            w.negate_row(t);
        }
        factors.push(w.b[(t, t)].clone());
    }
    SnfDecomposition {
        c: w.c,
        lambda: w.b,
        a: w.a,
        factors,
    }
}
