//! Dense matrices over arbitrary-size integers.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Parse `"a,b;c,d"` (rows separated by semicolons).
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<BigInt>()
                            .map_err(|_| Error::invalid(format!("bad matrix entry '{}'", x.trim())))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::from_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c · row[src]`
    pub fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * c;
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += c · col[src]`
    pub fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * c;
            self[(i, dst)] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant()
            .map(|d| d.abs().is_one())
            .unwrap_or(false)
    }

    /// Inverse of a unimodular matrix, by Gauss–Jordan over the integers.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        if !self.is_unimodular() {
            return Err(Error::invalid("matrix is not unimodular"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = IntMatrix::identity(n);
        // Euclidean row reduction keeps everything integral.
        for col in 0..n {
            loop {
                let pivot = (col..n)
                    .filter(|&i| !a[(i, col)].is_zero())
                    .min_by(|&x, &y| a[(x, col)].abs().cmp(&a[(y, col)].abs()));
                let Some(p) = pivot else {
                    return Err(Error::invalid("singular matrix"));
                };
                a.swap_rows(p, col);
                inv.swap_rows(p, col);
                let mut done = true;
                for i in col + 1..n {
                    if a[(i, col)].is_zero() {
                        continue;
                    }
                    let q = -a[(i, col)].div_floor(&a[(col, col)]);
                    a.add_row(i, col, &q);
                    inv.add_row(i, col, &q);
                    if !a[(i, col)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
        }
        // a is now upper triangular with ±1 diagonal
        for col in (0..n).rev() {
            if a[(col, col)].is_negative() {
                a.negate_row(col);
                inv.negate_row(col);
            }
            for i in 0..col {
                let q = -a[(i, col)].clone();
                a.add_row(i, col, &q);
                inv.add_row(i, col, &q);
            }
        }
        Ok(inv)
    }

    /// `max_i Σ_j |a_ij|`, the operator norm for the sup norm.
    pub fn row_sum_norm(&self) -> BigInt {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<BigInt>())
            .max()
            .unwrap_or_default()
    }

    /// Row-style Hermite normal form with zero rows removed: upper staircase,
    /// positive pivots, entries above a pivot reduced into `[0, pivot)`.
    pub fn hermite_rows(&self) -> Vec<Vec<BigInt>> {
        let mut a = self.clone();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            loop {
                let pivot = (r..self.rows)
                    .filter(|&i| !a[(i, col)].is_zero())
                    .min_by(|&x, &y| a[(x, col)].abs().cmp(&a[(y, col)].abs()));
                let Some(p) = pivot else { break };
                a.swap_rows(p, r);
                let mut clean = true;
                for i in r + 1..self.rows {
                    if a[(i, col)].is_zero() {
                        continue;
                    }
                    let q = -a[(i, col)].div_floor(&a[(r, col)]);
                    a.add_row(i, r, &q);
                    if !a[(i, col)].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if a[(r, col)].is_zero() {
                continue;
            }
            if a[(r, col)].is_negative() {
                a.negate_row(r);
            }
            for i in 0..r {
                let q = -a[(i, col)].div_floor(&a[(r, col)]);
                a.add_row(i, r, &q);
            }
            r += 1;
        }
        (0..r).map(|i| a.row(i).to_vec()).collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small_cases() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(6));
        let m = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(-1));
        let m = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::zero());
        let m = IntMatrix::from_i64(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(-54));
    }

    #[test]
    fn unimodular_inverse_round_trips() {
        let m = IntMatrix::from_i64(&[&[2, 3, 1], &[1, 2, 1], &[0, 1, 2]]).unwrap();
        assert!(m.is_unimodular());
        let inv = m.unimodular_inverse().unwrap();
        assert_eq!(&m * &inv, IntMatrix::identity(3));
        let singular = IntMatrix::from_i64(&[&[2, 0], &[0, 1]]).unwrap();
        assert!(singular.unimodular_inverse().is_err());
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]).unwrap();
        let b = IntMatrix::from_i64(&[&[2, 3], &[4, 9]]).unwrap();
        // both generate 2Z ⊕ 3Z
        assert_eq!(a.hermite_rows(), b.hermite_rows());
        let z = IntMatrix::from_i64(&[&[4, 6], &[2, 3]]).unwrap();
        assert_eq!(z.hermite_rows(), vec![vec![BigInt::from(2), BigInt::from(3)]]);
    }

    #[test]
    fn parse_and_display() {
        let m = IntMatrix::parse("1, 2; -3,4").unwrap();
        assert_eq!(m.to_string(), "1,2;-3,4");
        assert!(IntMatrix::parse("1,2;3").is_err());
        assert!(IntMatrix::parse("x").is_err());
    }
}
