//! Decomposition of Clifford operations into one- and two-qudit elementary gates.
//!
//! The symplectic matrix is reduced to the identity by left-multiplying elementary gates,
//! one qudit at a time; the sequence that reproduces the operation is the list of their
//! inverses in reverse order, followed by a single Pauli correction that fixes the phase
//! vector.

use std::fmt;

use crate::clifford::CliffordOp;
use crate::error::{Error, Result};
use crate::pauli::{p_matrix, PauliElement};
use crate::zmod::{check_qudit_dim, gcd, inverse_mod, reduce, ResidueMatrix};

/// An elementary gate; qudit indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryGate {
    /// Exchanges qudits `i` and `j`.
    QuditSwap(usize, usize),
    /// `|x_i> -> |r x_i>` for a unit `r`.
    ScaleRow(usize, i64),
    /// `AddRow(i, j, g)`: `|x_j> -> |x_j + g x_i>`. `AddRow(1, 2, 1)` is the SUM gate.
    AddRow(usize, usize, i64),
    Fourier(usize),
    FourierInverse(usize),
    /// The phase gate on qudit `i` applied `g` times.
    PhasePower(usize, i64),
    /// `XZ(a)` on the whole register.
    PauliCorrection(Vec<i64>),
}

impl ElementaryGate {
    fn check_index(i: usize, n: usize) -> Result<()> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        Ok(())
    }

    /// Checks indices and parameters against a register of `n` qudits of dimension `d`.
    pub fn check(&self, n: usize, d: i64) -> Result<()> {
        match *self {
            Self::QuditSwap(i, j) => {
                Self::check_index(i, n)?;
                Self::check_index(j, n)?;
                if i == j {
                    return Err(Error::InvalidParameter(format!("swap of qudit {i} with itself")));
                }
            }
            Self::AddRow(i, j, _) => {
                Self::check_index(i, n)?;
                Self::check_index(j, n)?;
                if i == j {
                    return Err(Error::InvalidParameter(format!("row {i} added to itself")));
                }
            }
            Self::ScaleRow(i, r) => {
                Self::check_index(i, n)?;
                if gcd(reduce(r, d), d) != 1 {
                    return Err(Error::InvalidParameter(format!("scale factor {r} is not a unit modulo {d}")));
                }
            }
            Self::Fourier(i) | Self::FourierInverse(i) | Self::PhasePower(i, _) => Self::check_index(i, n)?,
            Self::PauliCorrection(ref a) => {
                if a.len() != 2 * n {
                    return Err(Error::DimensionMismatch(format!(
                        "Pauli correction of length {} on {n} qudits",
                        a.len()
                    )));
                }
            }
        }
        Ok(())
    }

    /// The gate as a Clifford operation on `n` qudits.
    pub fn to_clifford(&self, n: usize, d: i64) -> Result<CliffordOp> {
        check_qudit_dim(d)?;
        self.check(n, d)?;
        let linear = |t: ResidueMatrix| CliffordOp::from_linear_transform(&t);
        match *self {
            Self::QuditSwap(i, j) => {
                let mut t = ResidueMatrix::identity(n, d);
                t.swap_rows(i - 1, j - 1);
                linear(t)
            }
            Self::ScaleRow(i, r) => {
                let mut t = ResidueMatrix::identity(n, d);
                t.set(i - 1, i - 1, r);
                linear(t)
            }
            Self::AddRow(i, j, g) => {
                let mut t = ResidueMatrix::identity(n, d);
                t.set(j - 1, i - 1, g);
                linear(t)
            }
            Self::Fourier(i) => CliffordOp::fourier(i, n, d),
            Self::FourierInverse(i) => CliffordOp::fourier_inverse(i, n, d),
            Self::PhasePower(i, g) => CliffordOp::phase_gate(i, reduce(g, d), n, d),
            Self::PauliCorrection(ref a) => Ok(CliffordOp::from_pauli(&PauliElement::new(d, a.clone(), 0)?)),
        }
    }

    /// The inverse gate, up to global phase.
    pub fn inverse(&self, d: i64) -> Result<ElementaryGate> {
        Ok(match *self {
            Self::QuditSwap(i, j) => Self::QuditSwap(i, j),
            Self::ScaleRow(i, r) => Self::ScaleRow(i, inverse_mod(reduce(r, d), d)?),
            Self::AddRow(i, j, g) => Self::AddRow(i, j, reduce(-g, d)),
            Self::Fourier(i) => Self::FourierInverse(i),
            Self::FourierInverse(i) => Self::Fourier(i),
            Self::PhasePower(i, g) => Self::PhasePower(i, reduce(-g, d)),
            Self::PauliCorrection(ref a) => Self::PauliCorrection(a.iter().map(|&x| reduce(-x, d)).collect()),
        })
    }

    /// Left-multiplies `w` by the gate's symplectic matrix, as row operations.
    fn apply_rows(&self, w: &mut ResidueMatrix, n: usize) {
        let d = w.modulus();
        match *self {
            Self::QuditSwap(i, j) => {
                w.swap_rows(i - 1, j - 1);
                w.swap_rows(n + i - 1, n + j - 1);
            }
            Self::ScaleRow(i, r) => {
                w.scale_row(i - 1, r);
                w.scale_row(n + i - 1, inverse_mod(reduce(r, d), d).expect("unit"));
            }
            Self::AddRow(i, j, g) => {
                w.add_row_multiple(i - 1, j - 1, g);
                w.add_row_multiple(n + j - 1, n + i - 1, -g);
            }
            Self::Fourier(i) => w.combine_rows(i - 1, n + i - 1, [0, -1, 1, 0]),
            Self::FourierInverse(i) => w.combine_rows(i - 1, n + i - 1, [0, 1, -1, 0]),
            Self::PhasePower(i, g) => w.add_row_multiple(i - 1, n + i - 1, g),
            Self::PauliCorrection(_) => {}
        }
    }
}

impl fmt::Display for ElementaryGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::QuditSwap(i, j) => write!(f, "swap({i}, {j})"),
            Self::ScaleRow(i, r) => write!(f, "scale({i}, {r})"),
            Self::AddRow(i, j, g) => write!(f, "add({i} -> {j}, {g})"),
            Self::Fourier(i) => write!(f, "fourier({i})"),
            Self::FourierInverse(i) => write!(f, "fourier_inv({i})"),
            Self::PhasePower(i, g) => write!(f, "phase({i}, {g})"),
            Self::PauliCorrection(a) => write!(f, "xz({a:?})"),
        }
    }
}

/// Gates in application order: the first gate acts first on the state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateSequence {
    pub d: i64,
    pub n: usize,
    pub gates: Vec<ElementaryGate>,
}

impl GateSequence {
    pub fn new(d: i64, n: usize, gates: Vec<ElementaryGate>) -> Result<Self> {
        check_qudit_dim(d)?;
        for g in &gates {
            g.check(n, d)?;
        }
        Ok(Self { d, n, gates })
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// The operation realized by the sequence.
    pub fn fold(&self) -> Result<CliffordOp> {
        self.gates.iter().try_fold(CliffordOp::identity(self.n, self.d), |acc, g| {
            g.to_clifford(self.n, self.d)?.compose(&acc)
        })
    }
}

/// Upper bound `64 n^2 (ceil(log2 d) + 1)` on the length of [`decompose`] output.
pub fn gate_bound(n: usize, d: i64) -> usize {
    let log = (64 - (d - 1).leading_zeros()) as usize;
    64 * n * n * (log + 1)
}

struct Reducer {
    w: ResidueMatrix,
    n: usize,
    d: i64,
    applied: Vec<ElementaryGate>,
}

impl Reducer {
    fn apply(&mut self, gate: ElementaryGate) {
        gate.apply_rows(&mut self.w, self.n);
        self.applied.push(gate);
    }

    fn upper(&self, i: usize, col: usize) -> i64 {
        self.w.get(i, col)
    }

    fn lower(&self, i: usize, col: usize) -> i64 {
        self.w.get(self.n + i, col)
    }

    fn is_unit(&self, x: i64) -> bool {
        gcd(x, self.d) == 1
    }

    /// `row i -= q * row (n + i)`.
    fn lower_into_upper(&mut self, i: usize, q: i64) {
        let d = self.d;
        self.apply(ElementaryGate::Fourier(i + 1));
        self.apply(ElementaryGate::PhasePower(i + 1, reduce(q, d)));
        self.apply(ElementaryGate::FourierInverse(i + 1));
    }

    /// Euclid on the pair `(row i, row n + i)` of column `col`; leaves the gcd in row `i`.
    fn euclid_within(&mut self, i: usize, col: usize) {
        loop {
            let (u, l) = (self.upper(i, col), self.lower(i, col));
            if l == 0 {
                return;
            }
            if u == 0 {
                self.apply(ElementaryGate::Fourier(i + 1));
                return;
            }
            if u >= l {
                self.lower_into_upper(i, u / l);
            } else {
                self.apply(ElementaryGate::PhasePower(i + 1, reduce(-(l / u), self.d)));
            }
        }
    }

    /// Euclid between upper rows `k` and `i` of column `col`; leaves the gcd in row `k`.
    fn euclid_across(&mut self, k: usize, i: usize, col: usize) {
        loop {
            let (a, b) = (self.upper(k, col), self.upper(i, col));
            if b == 0 {
                return;
            }
            if a == 0 {
                self.apply(ElementaryGate::QuditSwap(k + 1, i + 1));
                return;
            }
            if a >= b {
                self.apply(ElementaryGate::AddRow(i + 1, k + 1, reduce(-(a / b), self.d)));
            } else {
                self.apply(ElementaryGate::AddRow(k + 1, i + 1, reduce(-(b / a), self.d)));
            }
        }
    }

    /// Brings a unit into position `(k, k)`.
    fn pivot(&mut self, k: usize) -> Result<()> {
        let n = self.n;
        if self.is_unit(self.upper(k, k)) {
            return Ok(());
        }
        if let Some(i) = (k..n).find(|&i| self.is_unit(self.upper(i, k))) {
            self.apply(ElementaryGate::QuditSwap(k + 1, i + 1));
            return Ok(());
        }
        if let Some(i) = (k..n).find(|&i| self.is_unit(self.lower(i, k))) {
            self.apply(ElementaryGate::Fourier(i + 1));
            if i != k {
                self.apply(ElementaryGate::QuditSwap(k + 1, i + 1));
            }
            return Ok(());
        }
        for i in k..n {
            self.euclid_within(i, k);
        }
        for i in k + 1..n {
            self.euclid_across(k, i, k);
        }
        if !self.is_unit(self.upper(k, k)) {
            return Err(Error::InternalContractViolation(format!(
                "column {} has no unit gcd after the Euclid passes",
                k + 1
            )));
        }
        Ok(())
    }

    fn reduce_qudit(&mut self, k: usize) -> Result<()> {
        let (n, d) = (self.n, self.d);
        self.pivot(k)?;
        let e = self.upper(k, k);
        if e != 1 {
            self.apply(ElementaryGate::ScaleRow(k + 1, inverse_mod(e, d)?));
        }
        for i in k + 1..n {
            let u = self.upper(i, k);
            if u != 0 {
                self.apply(ElementaryGate::AddRow(k + 1, i + 1, reduce(-u, d)));
            }
        }
        let w = self.lower(k, k);
        if w != 0 {
            self.apply(ElementaryGate::PhasePower(k + 1, reduce(-w, d)));
        }
        if (k + 1..n).any(|i| self.lower(i, k) != 0) {
            self.apply(ElementaryGate::Fourier(k + 1));
            for i in k + 1..n {
                let l = self.lower(i, k);
                if l != 0 {
                    self.apply(ElementaryGate::AddRow(i + 1, k + 1, l));
                }
            }
            self.apply(ElementaryGate::FourierInverse(k + 1));
        }

        let col = n + k;
        for i in k + 1..n {
            let l = self.lower(i, col);
            if l != 0 {
                self.apply(ElementaryGate::AddRow(i + 1, k + 1, l));
            }
        }
        for i in k + 1..n {
            let u = self.upper(i, col);
            if u != 0 {
                self.apply(ElementaryGate::Fourier(i + 1));
                self.apply(ElementaryGate::AddRow(i + 1, k + 1, u));
                self.apply(ElementaryGate::FourierInverse(i + 1));
            }
        }
        let u = self.upper(k, col);
        if u != 0 {
            self.lower_into_upper(k, u);
        }

        for (row, target) in [(k, k), (n + k, n + k)] {
            if (0..2 * n).any(|j| self.w.get(row, j) != (j == target) as i64)
                || (0..2 * n).any(|i| self.w.get(i, target) != (i == row) as i64)
            {
                return Err(Error::InternalContractViolation(format!(
                    "row {} is not a unit row after reducing qudit {}",
                    row + 1,
                    k + 1
                )));
            }
        }
        Ok(())
    }
}

/// Elementary gate sequence whose [`GateSequence::fold`] equals `q` exactly.
pub fn decompose(q: &CliffordOp) -> Result<GateSequence> {
    let q = CliffordOp::validate(q.matrix().clone(), q.phases().to_vec())
        .map_err(|e| Error::InvalidOperation(Box::new(e)))?;
    let (n, d) = (q.num_qudits(), q.dim());
    let mut r = Reducer { w: q.matrix().clone(), n, d, applied: Vec::new() };
    for k in 0..n {
        r.reduce_qudit(k)?;
    }
    let mut gates = r.applied.iter().rev().map(|g| g.inverse(d)).collect::<Result<Vec<_>>>()?;
    let folded = GateSequence { d, n, gates: gates.clone() }.fold()?;
    if folded.matrix() != q.matrix() {
        return Err(Error::InternalContractViolation("folded matrix differs from the input".into()));
    }

    // The remaining phase mismatch is even and is removed by XZ(C P delta / 2).
    let twice_d = 2 * d;
    let delta: Vec<i64> = q.phases().iter().zip(folded.phases()).map(|(a, b)| reduce(a - b, twice_d)).collect();
    if delta.iter().any(|x| x % 2 != 0) {
        return Err(Error::InternalContractViolation(format!("odd phase mismatch {delta:?}")));
    }
    let half: Vec<i64> = delta.iter().map(|x| x / 2).collect();
    let correction = q.matrix().mul_vec(&p_matrix(n, d).mul_vec(&half));
    if correction.iter().any(|&x| x != 0) {
        gates.push(ElementaryGate::PauliCorrection(correction));
    }
    Ok(GateSequence { d, n, gates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{adversarial_clifford, random_clifford};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gate_matrices() {
        let f = ElementaryGate::Fourier(1).to_clifford(1, 3).unwrap();
        assert_eq!(f.matrix().to_rows(), vec![vec![0, 2], vec![1, 0]]);
        assert_eq!(f.phases(), &[0, 0]);
        let sum = ElementaryGate::AddRow(1, 2, 1).to_clifford(2, 5).unwrap();
        let expected = ResidueMatrix::from_rows(&[[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 4], [0, 0, 0, 1]], 5).unwrap();
        assert_eq!(sum.matrix(), &expected);
        for g in 0..4 {
            let pp = ElementaryGate::PhasePower(1, g).to_clifford(1, 4).unwrap();
            assert_eq!(pp.matrix().to_rows(), vec![vec![1, 0], vec![g, 1]]);
        }
        let swap = ElementaryGate::QuditSwap(1, 2).to_clifford(2, 3).unwrap();
        let expected = ResidueMatrix::from_rows(&[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], 3).unwrap();
        assert_eq!(swap.matrix(), &expected);
    }

    #[test]
    fn gate_errors() {
        assert!(matches!(ElementaryGate::ScaleRow(1, 2).to_clifford(1, 4), Err(Error::InvalidParameter(_))));
        assert!(matches!(ElementaryGate::Fourier(3).to_clifford(2, 4), Err(Error::IndexOutOfRange { .. })));
        assert!(ElementaryGate::AddRow(2, 2, 1).to_clifford(2, 4).is_err());
        assert!(ElementaryGate::PauliCorrection(vec![1]).to_clifford(1, 4).is_err());
    }

    #[test]
    fn fold_examples() {
        assert!(GateSequence::new(3, 2, vec![]).unwrap().fold().unwrap().is_identity());
        let seq = GateSequence::new(5, 1, vec![ElementaryGate::Fourier(1), ElementaryGate::FourierInverse(1)]).unwrap();
        assert!(seq.fold().unwrap().is_identity());
        let seq = GateSequence::new(3, 1, vec![ElementaryGate::PhasePower(1, 1); 3]).unwrap();
        assert!(seq.fold().unwrap().is_identity());
    }

    #[test]
    fn identity_decomposes_to_nothing() {
        for d in [2, 3, 6] {
            assert!(decompose(&CliffordOp::identity(3, d)).unwrap().is_empty());
        }
    }

    #[test]
    fn catalog_round_trips() {
        let f = CliffordOp::fourier(1, 1, 5).unwrap();
        assert_eq!(decompose(&f).unwrap().fold().unwrap(), f);
        let sum = ElementaryGate::AddRow(1, 2, 1).to_clifford(2, 4).unwrap();
        assert_eq!(decompose(&sum).unwrap().fold().unwrap(), sum);
        let x = CliffordOp::from_pauli(&PauliElement::new(6, vec![1, 2, 3, 5], 0).unwrap());
        let seq = decompose(&x).unwrap();
        assert_eq!(seq.gates, vec![ElementaryGate::PauliCorrection(vec![1, 2, 3, 5])]);
    }

    #[test]
    fn no_invertible_entry_in_first_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [6, 10, 12, 30] {
            for n in 1..=3 {
                for _ in 0..30 {
                    let q = adversarial_clifford(&mut rng, n, d).unwrap();
                    let out = decompose(&q).unwrap();
                    assert!(out.len() <= gate_bound(n, d));
                    assert_eq!(out.fold().unwrap(), q);
                }
            }
        }
    }

    #[test]
    fn euclid_cascade_on_crafted_column() {
        // d = 6: C = 3 I + 4 swap is the identity mod 2 and a swap mod 3, so its first
        // column (3, 4, 0, 0) has no unit
        let d = 6;
        let swap = ElementaryGate::QuditSwap(1, 2).to_clifford(2, d).unwrap();
        let c = &ResidueMatrix::identity(4, d).scale(3) + &swap.matrix().scale(4);
        let q = CliffordOp::validate(c, vec![0; 4]).unwrap();
        assert_eq!(q.matrix().column(0), vec![3, 4, 0, 0]);
        assert_eq!(decompose(&q).unwrap().fold().unwrap(), q);
    }

    #[test]
    fn row_operations_match_gate_matrices() {
        let (n, d) = (3, 12);
        let w = ElementaryGate::AddRow(1, 3, 5).to_clifford(n, d).unwrap().matrix().clone();
        let gates = [
            ElementaryGate::QuditSwap(1, 3),
            ElementaryGate::ScaleRow(2, 5),
            ElementaryGate::AddRow(3, 1, 7),
            ElementaryGate::Fourier(2),
            ElementaryGate::FourierInverse(3),
            ElementaryGate::PhasePower(1, 11),
        ];
        for g in gates {
            let mut by_rows = w.clone();
            g.apply_rows(&mut by_rows, n);
            assert_eq!(by_rows, g.to_clifford(n, d).unwrap().matrix() * &w, "{g}");
            let inv = g.inverse(d).unwrap().to_clifford(n, d).unwrap();
            assert!(inv.compose(&g.to_clifford(n, d).unwrap()).unwrap().matrix().is_identity());
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(gate_bound(1, 2), 128);
        assert_eq!(gate_bound(2, 3), 64 * 4 * 3);
        assert_eq!(gate_bound(1, 4), 192);
        assert_eq!(gate_bound(1, 5), 256);
    }

    #[test]
    fn fold_of_decompose_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [2, 3, 4, 5, 6, 8, 9, 12] {
            for n in 1..=3 {
                for _ in 0..40 {
                    let q = random_clifford(&mut rng, n, d);
                    let out = decompose(&q).unwrap();
                    assert!(out.len() <= gate_bound(n, d));
                    assert_eq!(out.fold().unwrap(), q);
                }
            }
        }
    }
}
