//! Dense linear-algebra ground truth: explicit `d^n`-dimensional matrices for Pauli elements
//! and elementary gates, built directly from their action on basis states.
//!
//! `omega = exp(2 pi i / d)` and `zeta = exp(i pi / d)`. Basis states are ordered with qudit 1
//! most significant: `|x_1 ... x_n>` has index `sum_i x_i d^{n-i}`.

use std::f64::consts::PI;

pub use num_complex::Complex64;

use crate::decomp::{ElementaryGate, GateSequence};
use crate::error::{Error, Result};
use crate::pauli::PauliElement;
use crate::stabilizer::StateExpansion;
use crate::zmod::reduce;

/// Largest Hilbert-space dimension built without an explicit override.
pub const DEFAULT_CAP: usize = 4096;

/// Entrywise tolerance for all comparisons.
pub const TOLERANCE: f64 = 1e-9;

/// Entries below this magnitude are dropped from sparse products.
const PRUNE: f64 = 1e-12;

/// `zeta^k` for `k` in `0..2d`.
#[derive(Clone, Debug)]
pub struct ZetaTable {
    d: i64,
    table: Vec<Complex64>,
}

impl ZetaTable {
    pub fn new(d: i64) -> Self {
        let table = (0..2 * d).map(|k| Complex64::from_polar(1.0, PI * k as f64 / d as f64)).collect();
        Self { d, table }
    }

    pub fn pow(&self, k: i64) -> Complex64 {
        self.table[reduce(k, 2 * self.d) as usize]
    }
}

/// `d^n`, refusing anything above `cap`.
pub fn hilbert_dim(d: i64, n: usize, cap: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.saturating_mul(d as usize);
    }
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(dim)
}

pub fn basis_index(label: &[i64], d: i64) -> usize {
    label.iter().fold(0usize, |acc, &x| acc * d as usize + reduce(x, d) as usize)
}

pub fn basis_label(mut index: usize, d: i64, n: usize) -> Vec<i64> {
    let mut label = vec![0; n];
    for x in label.iter_mut().rev() {
        *x = (index % d as usize) as i64;
        index /= d as usize;
    }
    label
}

fn shape_mismatch(a: usize, b: usize) -> Error {
    Error::ShapeMismatch(format!("dimensions {a} and {b} differ"))
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::ShapeMismatch("operator rows must form a square matrix".into()));
        }
        Ok(Self { dim, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&x| x * c).collect() }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(shape_mismatch(self.dim, rhs.dim));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let (row, src) = (&mut out.data[i * n..(i + 1) * n], &rhs.data[k * n..(k + 1) * n]);
                for (o, &b) in row.iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let (p, q) = (self.dim, rhs.dim);
        let dim = p * q;
        let mut out = Self::zeros(dim);
        for i in 0..p {
            for j in 0..p {
                let a = self.data[i * p + j];
                for k in 0..q {
                    for l in 0..q {
                        out.data[(i * q + k) * dim + j * q + l] = a * rhs.data[k * q + l];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, state: &DenseState) -> Result<DenseState> {
        if self.dim != state.dim() {
            return Err(shape_mismatch(self.dim, state.dim()));
        }
        let n = self.dim;
        let amplitudes = (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].iter().zip(&state.amplitudes).map(|(a, b)| a * b).sum())
            .collect();
        Ok(DenseState { amplitudes })
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        max_deviation(&self.data, &other.data)
    }

    /// `U U^dagger = I` within [`TOLERANCE`].
    pub fn is_unitary(&self) -> bool {
        let prod = self.mul(&self.adjoint()).expect("same dimension");
        prod.max_deviation(&Self::identity(self.dim)).expect("same dimension") <= TOLERANCE
    }
}

/// Complex state vector; never renormalized implicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        max_deviation(&self.amplitudes, &other.amplitudes)
    }
}

fn max_deviation(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(shape_mismatch(a.len(), b.len()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

/// Objects compared entrywise.
pub trait Entries {
    fn entries(&self) -> &[Complex64];
}

impl Entries for DenseOperator {
    fn entries(&self) -> &[Complex64] {
        &self.data
    }
}

impl Entries for DenseState {
    fn entries(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// Whether `a = c b` for a unit scalar `c`, read off the largest-magnitude entry of `b`.
pub fn equal_up_to_global_phase<T: Entries>(a: &T, b: &T) -> Result<bool> {
    let (a, b) = (a.entries(), b.entries());
    if a.len() != b.len() {
        return Err(shape_mismatch(a.len(), b.len()));
    }
    let Some(pivot) = (0..b.len()).max_by(|&i, &j| b[i].norm().total_cmp(&b[j].norm())) else {
        return Ok(true);
    };
    if b[pivot].norm() <= TOLERANCE {
        return Ok(a.iter().all(|x| x.norm() <= TOLERANCE));
    }
    let c = a[pivot] / b[pivot];
    if (c.norm() - 1.0).abs() > TOLERANCE {
        return Ok(false);
    }
    Ok(a.iter().zip(b).all(|(x, y)| (x - c * y).norm() <= TOLERANCE))
}

/// `U A U^dagger`.
pub fn conjugate(u: &DenseOperator, a: &DenseOperator) -> Result<DenseOperator> {
    u.mul(a)?.mul(&u.adjoint())
}

fn shift(d: i64) -> DenseOperator {
    let d = d as usize;
    let mut m = DenseOperator::zeros(d);
    for x in 0..d {
        m.data[((x + 1) % d) * d + x] = Complex64::new(1.0, 0.0);
    }
    m
}

fn clock(d: i64, zeta: &ZetaTable) -> DenseOperator {
    let mut m = DenseOperator::zeros(d as usize);
    for x in 0..d as usize {
        m.data[x * d as usize + x] = zeta.pow(2 * x as i64);
    }
    m
}

fn power(m: &DenseOperator, k: i64) -> DenseOperator {
    (0..k).fold(DenseOperator::identity(m.dim), |acc, _| acc.mul(m).expect("same dimension"))
}

/// `zeta^delta X^{v_1} Z^{w_1} (x) ... (x) X^{v_n} Z^{w_n}` as a Kronecker product.
pub fn pauli_operator(x: &PauliElement, cap: usize) -> Result<DenseOperator> {
    let (d, n) = (x.dim(), x.num_qudits());
    hilbert_dim(d, n, cap)?;
    let zeta = ZetaTable::new(d);
    let (xm, zm) = (shift(d), clock(d, &zeta));
    let mut out = DenseOperator::identity(1);
    for i in 0..n {
        let factor = power(&xm, x.x_part()[i]).mul(&power(&zm, x.z_part()[i]))?;
        out = out.kron(&factor);
    }
    Ok(out.scale(zeta.pow(x.phase())))
}

/// Square matrix in compressed-column form.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    col_ptr: Vec<usize>,
    rows: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseOperator {
    fn from_columns(dim: usize, mut column: impl FnMut(usize, &mut Vec<(usize, Complex64)>)) -> Self {
        let mut out = Self { dim, col_ptr: vec![0], rows: Vec::new(), vals: Vec::new() };
        let mut buf = Vec::new();
        for j in 0..dim {
            buf.clear();
            column(j, &mut buf);
            for &(i, v) in &buf {
                out.rows.push(i);
                out.vals.push(v);
            }
            out.col_ptr.push(out.rows.len());
        }
        out
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_columns(dim, |j, col| col.push((j, Complex64::new(1.0, 0.0))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.len()
    }

    fn column(&self, j: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        self.rows[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn to_dense(&self) -> DenseOperator {
        let mut m = DenseOperator::zeros(self.dim);
        for j in 0..self.dim {
            for (i, v) in self.column(j) {
                m.data[i * self.dim + j] += v;
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut count = vec![0usize; self.dim + 1];
        for &i in &self.rows {
            count[i + 1] += 1;
        }
        for k in 0..self.dim {
            count[k + 1] += count[k];
        }
        let mut next = count.clone();
        let mut rows = vec![0; self.nnz()];
        let mut vals = vec![Complex64::new(0.0, 0.0); self.nnz()];
        for j in 0..self.dim {
            for (i, v) in self.column(j) {
                rows[next[i]] = j;
                vals[next[i]] = v.conj();
                next[i] += 1;
            }
        }
        Self { dim: self.dim, col_ptr: count, rows, vals }
    }

    /// Product with negligible entries dropped.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(shape_mismatch(self.dim, rhs.dim));
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut touched = Vec::new();
        let mut mark = vec![false; self.dim];
        Ok(Self::from_columns(self.dim, |j, col| {
            for (k, b) in rhs.column(j) {
                for (i, a) in self.column(k) {
                    if !mark[i] {
                        mark[i] = true;
                        touched.push(i);
                    }
                    acc[i] += a * b;
                }
            }
            touched.sort_unstable();
            for &i in &touched {
                if acc[i].norm() > PRUNE {
                    col.push((i, acc[i]));
                }
                acc[i] = Complex64::new(0.0, 0.0);
                mark[i] = false;
            }
            touched.clear();
        }))
    }

    pub fn apply(&self, state: &DenseState) -> Result<DenseState> {
        if self.dim != state.dim() {
            return Err(shape_mismatch(self.dim, state.dim()));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (j, &s) in state.amplitudes.iter().enumerate() {
            if s == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (i, v) in self.column(j) {
                out[i] += v * s;
            }
        }
        Ok(DenseState { amplitudes: out })
    }

    /// `U A U^dagger` with `self = U`.
    pub fn conjugate(&self, a: &Self) -> Result<Self> {
        self.mul(a)?.mul(&self.adjoint())
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(shape_mismatch(self.dim, other.dim));
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut worst: f64 = 0.0;
        for j in 0..self.dim {
            for (i, v) in self.column(j) {
                acc[i] += v;
            }
            for (i, v) in other.column(j) {
                acc[i] -= v;
            }
            for i in self.column(j).chain(other.column(j)).map(|(i, _)| i) {
                worst = worst.max(acc[i].norm());
                acc[i] = Complex64::new(0.0, 0.0);
            }
        }
        Ok(worst)
    }
}

/// [`pauli_operator`] in compressed form, from `XZ(a)|x> = omega^{w.x} |x + v>`.
pub fn pauli_sparse(x: &PauliElement, cap: usize) -> Result<SparseOperator> {
    let (d, n) = (x.dim(), x.num_qudits());
    let dim = hilbert_dim(d, n, cap)?;
    let zeta = ZetaTable::new(d);
    let (v, w) = (x.x_part(), x.z_part());
    Ok(SparseOperator::from_columns(dim, |j, col| {
        let label = basis_label(j, d, n);
        let wx: i64 = w.iter().zip(&label).map(|(a, b)| a * b).sum();
        let image: Vec<i64> = label.iter().zip(v).map(|(a, b)| a + b).collect();
        col.push((basis_index(&image, d), zeta.pow(x.phase() + 2 * wx)));
    }))
}

/// Gate matrix from its action on basis states:
/// swap exchanges two digits, `ScaleRow(i, r)` sends `x_i -> r x_i`, `AddRow(i, j, g)` sends
/// `x_j -> x_j + g x_i`, `Fourier(i)` sends `|x> -> d^{-1/2} sum_k omega^{kx} |k>` (inverse:
/// `omega^{-kx}`), `PhasePower(i, g)` multiplies by `zeta^{g x (x + d)}` and a Pauli
/// correction is `XZ(a)`.
pub fn gate_sparse(g: &ElementaryGate, n: usize, d: i64, cap: usize) -> Result<SparseOperator> {
    use ElementaryGate::*;
    g.check(n, d)?;
    let dim = hilbert_dim(d, n, cap)?;
    if let PauliCorrection(a) = g {
        return pauli_sparse(&PauliElement::new(d, a.clone(), 0)?, cap);
    }
    let zeta = ZetaTable::new(d);
    let one = Complex64::new(1.0, 0.0);
    let norm = 1.0 / (d as f64).sqrt();
    Ok(SparseOperator::from_columns(dim, |j, col| {
        let mut x = basis_label(j, d, n);
        match *g {
            QuditSwap(a, b) => {
                x.swap(a - 1, b - 1);
                col.push((basis_index(&x, d), one));
            }
            ScaleRow(i, r) => {
                x[i - 1] = reduce(r * x[i - 1], d);
                col.push((basis_index(&x, d), one));
            }
            AddRow(i, t, m) => {
                x[t - 1] = reduce(x[t - 1] + m * x[i - 1], d);
                col.push((basis_index(&x, d), one));
            }
            Fourier(i) | FourierInverse(i) => {
                let sign = if matches!(g, Fourier(_)) { 1 } else { -1 };
                let xi = x[i - 1];
                for k in 0..d {
                    x[i - 1] = k;
                    col.push((basis_index(&x, d), zeta.pow(2 * sign * k * xi) * norm));
                }
                col.sort_unstable_by_key(|e| e.0);
            }
            PhasePower(i, m) => {
                let xi = x[i - 1];
                col.push((j, zeta.pow(reduce(m, 2 * d) * (xi * (xi + d) % (2 * d)))));
            }
            PauliCorrection(_) => unreachable!("handled above"),
        }
    }))
}

pub fn gate_operator(g: &ElementaryGate, n: usize, d: i64, cap: usize) -> Result<DenseOperator> {
    Ok(gate_sparse(g, n, d, cap)?.to_dense())
}

/// Unitary of a sequence: the first gate acts first.
pub fn sequence_sparse(seq: &GateSequence, cap: usize) -> Result<SparseOperator> {
    let mut u = SparseOperator::identity(hilbert_dim(seq.d, seq.n, cap)?);
    for g in &seq.gates {
        u = gate_sparse(g, seq.n, seq.d, cap)?.mul(&u)?;
    }
    Ok(u)
}

pub fn sequence_operator(seq: &GateSequence, cap: usize) -> Result<DenseOperator> {
    Ok(sequence_sparse(seq, cap)?.to_dense())
}

/// `U A U^dagger` for the sequence unitary `U`, conjugating by one gate at a time.
pub fn conjugate_through(seq: &GateSequence, a: &SparseOperator, cap: usize) -> Result<SparseOperator> {
    let mut out = a.clone();
    for g in &seq.gates {
        out = gate_sparse(g, seq.n, seq.d, cap)?.conjugate(&out)?;
    }
    Ok(out)
}

/// Dense vector of an expansion; repeated labels add up.
pub fn state_from_expansion(e: &StateExpansion, cap: usize) -> Result<DenseState> {
    let dim = hilbert_dim(e.d, e.n, cap)?;
    let zeta = ZetaTable::new(e.d);
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    for (exp, label) in &e.terms {
        if label.len() != e.n {
            return Err(Error::DimensionMismatch(format!("label of length {} for {} qudits", label.len(), e.n)));
        }
        amplitudes[basis_index(label, e.d)] += zeta.pow(*exp) * e.normalization;
    }
    Ok(DenseState { amplitudes })
}
