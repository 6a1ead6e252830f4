use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{check_modulus, reduce, MAX_MATRIX_DIM};
use crate::error::{Error, Result};

/// A dense matrix over `Z_modulus` with entries stored as canonical residues, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueMatrix {
    rows: usize,
    cols: usize,
    modulus: i64,
    data: Vec<i64>,
}

impl ResidueMatrix {
    /// Zero matrix. Panics on an invalid modulus; use [`ResidueMatrix::from_rows`] for
    /// untrusted input.
    pub fn zeros(rows: usize, cols: usize, modulus: i64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Self { rows, cols, modulus, data: vec![0; rows * cols] }
    }

    pub fn identity(size: usize, modulus: i64) -> Self {
        let mut m = Self::zeros(size, size, modulus);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, modulus: i64, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(rows, cols, modulus);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = reduce(f(i, j), modulus);
            }
        }
        m
    }

    /// Builds a matrix from rows of arbitrary integers, reducing them into `[0, modulus)`.
    ///
    /// A matrix with zero rows is given `cols = 0`; use [`ResidueMatrix::zeros`] for
    /// empty shapes with a column count.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], modulus: i64) -> Result<Self> {
        check_modulus(modulus)?;
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.len() > MAX_MATRIX_DIM || cols > MAX_MATRIX_DIM {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} exceeds the {MAX_MATRIX_DIM} row/column limit",
                rows.len(),
                cols
            )));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| reduce(x, modulus)));
        }
        Ok(Self { rows: rows.len(), cols, modulus, data })
    }

    /// A single column built from a vector.
    pub fn column_vector(v: &[i64], modulus: i64) -> Self {
        Self::from_fn(v.len(), 1, modulus, |i, _| v[i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = reduce(value, self.modulus);
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as i64))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.modulus, |i, j| self.get(j, i))
    }

    /// Reinterprets the canonical lifts under another modulus.
    ///
    /// Lifting from `Z_d` to `Z_{2d}` keeps every entry in `[0, d)`; it is how `Z_d` data
    /// enters the phase arithmetic.
    pub fn with_modulus(&self, modulus: i64) -> Self {
        Self::from_fn(self.rows, self.cols, modulus, |i, j| self.get(i, j))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_fn(self.rows, self.cols, self.modulus, |i, j| k * self.get(i, j))
    }

    /// Rectangular block `rows x cols` starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, self.modulus, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Keeps the listed columns in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), self.modulus, |i, j| self.get(i, cols[j]))
    }

    /// `[[a, b], [c, d]]` from four blocks with compatible shapes.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (top, left) = (a.rows, a.cols);
        Self::from_fn(a.rows + c.rows, a.cols + b.cols, a.modulus, |i, j| match (i < top, j < left) {
            (true, true) => a.get(i, j),
            (true, false) => b.get(i, j - left),
            (false, true) => c.get(i - top, j),
            (false, false) => d.get(i - top, j - left),
        })
    }

    /// Stacks `top` over `bottom`.
    pub fn vstack(top: &Self, bottom: &Self) -> Self {
        assert_eq!(top.cols, bottom.cols);
        Self::from_fn(top.rows + bottom.rows, top.cols, top.modulus, |i, j| {
            if i < top.rows {
                top.get(i, j)
            } else {
                bottom.get(i - top.rows, j)
            }
        })
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols, "vector length does not match column count");
        (0..self.rows)
            .map(|i| {
                let s: i64 = self.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
                reduce(s, self.modulus)
            })
            .collect()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.modulus != rhs.modulus {
            return Err(Error::ShapeMismatch(format!(
                "modulus {} vs {}",
                self.modulus, rhs.modulus
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols, self.modulus);
        for i in 0..self.rows {
            let acc = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (o, &b) in acc.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
            for o in acc.iter_mut() {
                *o = reduce(*o, self.modulus);
            }
        }
        Ok(out)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Row `dst += k * row src`.
    pub(crate) fn add_row_multiple(&mut self, src: usize, dst: usize, k: i64) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + k * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// Column `dst += k * column src`.
    pub(crate) fn add_col_multiple(&mut self, src: usize, dst: usize, k: i64) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + k * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, k: i64) {
        for j in 0..self.cols {
            let v = k * self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Replaces rows `a, b` by `(p*a + q*b, r*a + s*b)`.
    pub(crate) fn combine_rows(&mut self, a: usize, b: usize, [p, q, r, s]: [i64; 4]) {
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j), self.get(b, j));
            self.set(a, j, p * x + q * y);
            self.set(b, j, r * x + s * y);
        }
    }

    /// Replaces columns `a, b` by `(p*a + q*b, r*a + s*b)`.
    pub(crate) fn combine_cols(&mut self, a: usize, b: usize, [p, q, r, s]: [i64; 4]) {
        for i in 0..self.rows {
            let (x, y) = (self.get(i, a), self.get(i, b));
            self.set(i, a, p * x + q * y);
            self.set(i, b, r * x + s * y);
        }
    }
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueMatrix(mod {}) {:?}", self.modulus, self.to_rows())
    }
}

impl Mul for &ResidueMatrix {
    type Output = ResidueMatrix;

    fn mul(self, rhs: &ResidueMatrix) -> ResidueMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ResidueMatrix {
    type Output = ResidueMatrix;

    fn add(self, rhs: &ResidueMatrix) -> ResidueMatrix {
        assert_eq!((self.rows, self.cols, self.modulus), (rhs.rows, rhs.cols, rhs.modulus));
        ResidueMatrix::from_fn(self.rows, self.cols, self.modulus, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &ResidueMatrix {
    type Output = ResidueMatrix;

    fn sub(self, rhs: &ResidueMatrix) -> ResidueMatrix {
        assert_eq!((self.rows, self.cols, self.modulus), (rhs.rows, rhs.cols, rhs.modulus));
        ResidueMatrix::from_fn(self.rows, self.cols, self.modulus, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

impl Neg for &ResidueMatrix {
    type Output = ResidueMatrix;

    fn neg(self) -> ResidueMatrix {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_rows_reduces_and_checks_shape() {
        let m = ResidueMatrix::from_rows(&[vec![-1, 5], vec![7, 3]], 3).unwrap();
        assert_eq!(m.to_rows(), vec![vec![2, 2], vec![1, 0]]);
        assert!(ResidueMatrix::from_rows(&[vec![1, 2], vec![3]], 5).is_err());
        assert!(ResidueMatrix::from_rows(&[vec![1]], 1).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = ResidueMatrix::from_rows(&[[1, 2], [3, 4]], 5).unwrap();
        let b = ResidueMatrix::from_rows(&[[0, 1], [1, 0]], 5).unwrap();
        assert_eq!((&a * &b).to_rows(), vec![vec![2, 1], vec![4, 3]]);
        assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
        assert!(a.try_mul(&ResidueMatrix::zeros(3, 1, 5)).is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let a = ResidueMatrix::identity(2, 7);
        let z = ResidueMatrix::zeros(2, 2, 7);
        let big = ResidueMatrix::from_blocks(&a, &z, &z, &a.scale(3));
        assert_eq!(big.submatrix(2, 2, 2, 2), a.scale(3));
        assert_eq!(big.submatrix(0, 2, 2, 2), z);
    }
}
