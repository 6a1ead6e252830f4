//! Clifford operations represented by a symplectic `C` over `Z_d` and a phase vector `h`
//! over `Z_{2d}`: column `k` of `C` and entry `h_k` give the image
//! `zeta^{h_k} XZ(C_k)` of `XZ(E_k)` under conjugation. The global phase of the unitary is
//! not represented.
//!
//! Mixed-modulus expressions are evaluated on canonical lifts: a `Z_d` matrix enters the
//! `Z_{2d}` arithmetic with its entries in `[0, d)`.

use crate::error::{Error, Result};
use crate::pauli::{p_matrix, u_matrix, PauliElement};
use crate::zmod::{check_qudit_dim, inverse_mod, invert_matrix, reduce, ResidueMatrix};

/// `C^T U C` over `Z_d`.
pub(crate) fn ctuc(c: &ResidueMatrix) -> ResidueMatrix {
    let n = c.rows() / 2;
    let u = u_matrix(n, c.modulus());
    &(&c.transpose() * &u) * c
}

/// `2 Pupps(M) + Pdiag(M)` on the lifts of `M`, over `Z_{2d}`.
pub(crate) fn phase_form(m: &ResidueMatrix) -> ResidueMatrix {
    let twice_d = 2 * m.modulus();
    ResidueMatrix::from_fn(m.rows(), m.cols(), twice_d, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => 2 * m.get(i, j),
        std::cmp::Ordering::Equal => m.get(i, j),
        std::cmp::Ordering::Greater => 0,
    })
}

/// `a^T (2 Pupps(M) + Pdiag(M)) a` modulo `2d`, on lifts.
pub(crate) fn quadratic_phase(m: &ResidueMatrix, a: &[i64]) -> i64 {
    let twice_d = 2 * m.modulus();
    let mut acc = 0i64;
    for i in 0..a.len() {
        if a[i] == 0 {
            continue;
        }
        let mut row = m.get(i, i) * a[i];
        for j in i + 1..a.len() {
            row += 2 * m.get(i, j) * a[j];
        }
        acc = reduce(acc + reduce(row, twice_d) * a[i], twice_d);
    }
    acc
}

/// `V^T a` modulo `m` with `V` the lifted vector.
fn dot_mod(v: &[i64], a: &[i64], m: i64) -> i64 {
    v.iter().zip(a).fold(0, |acc, (x, y)| reduce(acc + x * y, m))
}

/// `Vdiag(C^T N C)` for `N` over `Z_{2d}` and `C` over `Z_d`, computed on lifts.
fn vdiag_sandwich(c: &ResidueMatrix, n: &ResidueMatrix) -> Vec<i64> {
    let lifted = c.with_modulus(n.modulus());
    (&(&lifted.transpose() * n) * &lifted).diagonal()
}

/// A Clifford operation `(C, h)` on `n` qudits of dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordOp {
    d: i64,
    n: usize,
    c: ResidueMatrix,
    h: Vec<i64>,
}

impl CliffordOp {
    /// Checks symplecticity and the phase parity condition
    /// `(d - 1) Vdiag(C^T U C) + h = 0 (mod 2)`.
    pub fn validate(c: ResidueMatrix, h: Vec<i64>) -> Result<Self> {
        let d = c.modulus();
        check_qudit_dim(d)?;
        if !c.is_square() || c.rows() % 2 != 0 || c.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "Clifford matrix must be 2n x 2n, got {}x{}",
                c.rows(),
                c.cols()
            )));
        }
        if h.len() != c.rows() {
            return Err(Error::DimensionMismatch(format!(
                "phase vector of length {} for a {}x{} matrix",
                h.len(),
                c.rows(),
                c.cols()
            )));
        }
        let n = c.rows() / 2;
        let p = p_matrix(n, d);
        if &(&c.transpose() * &p) * &c != p {
            return Err(Error::NotSymplectic { modulus: d });
        }
        let h: Vec<i64> = h.iter().map(|&x| reduce(x, 2 * d)).collect();
        let diag = ctuc(&c).diagonal();
        if let Some(index) = (0..2 * n).find(|&k| ((d - 1) * diag[k] + h[k]) % 2 != 0) {
            return Err(Error::PhaseParityViolation { index });
        }
        Ok(Self { d, n, c, h })
    }

    pub(crate) fn new_unchecked(c: ResidueMatrix, h: Vec<i64>) -> Self {
        let d = c.modulus();
        let n = c.rows() / 2;
        let h = h.iter().map(|&x| reduce(x, 2 * d)).collect();
        Self { d, n, c, h }
    }

    pub fn identity(n: usize, d: i64) -> Self {
        Self::new_unchecked(ResidueMatrix::identity(2 * n, d), vec![0; 2 * n])
    }

    pub fn dim(&self) -> i64 {
        self.d
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ResidueMatrix {
        &self.c
    }

    pub fn phases(&self) -> &[i64] {
        &self.h
    }

    pub fn is_identity(&self) -> bool {
        self.c.is_identity() && self.h.iter().all(|&x| x == 0)
    }

    fn check_compatible(&self, d: i64, n: usize) -> Result<()> {
        if self.d != d || self.n != n {
            return Err(Error::DimensionMismatch(format!(
                "operation on {} qudits of dimension {} vs {} qudits of dimension {}",
                self.n, self.d, n, d
            )));
        }
        Ok(())
    }

    /// Image `Q x Q^dagger` of a Pauli element.
    pub fn conjugate_pauli(&self, x: &PauliElement) -> Result<PauliElement> {
        self.check_compatible(x.dim(), x.num_qudits())?;
        let a = x.vector();
        let m = ctuc(&self.c);
        let twice_d = 2 * self.d;
        let linear: Vec<i64> = self.h.iter().zip(m.diagonal()).map(|(h, v)| h - v).collect();
        let eps = x.phase() + dot_mod(&linear, a, twice_d) + quadratic_phase(&m, a);
        Ok(PauliElement::new_unchecked(self.d, self.c.mul_vec(a), eps))
    }

    /// `self` applied after `inner`, i.e. the operation `Q_self Q_inner`.
    pub fn compose(&self, inner: &CliffordOp) -> Result<CliffordOp> {
        self.check_compatible(inner.d, inner.n)?;
        let twice_d = 2 * self.d;
        let (c_out, c_in) = (&self.c, &inner.c);
        let m = ctuc(c_out);
        let sandwich = vdiag_sandwich(c_in, &phase_form(&m));
        let lifted_t = c_in.transpose().with_modulus(twice_d);
        let from_outer = lifted_t.mul_vec(&self.h);
        let correction = lifted_t.mul_vec(&m.diagonal());
        let h = (0..2 * self.n)
            .map(|k| inner.h[k] + from_outer[k] + sandwich[k] - correction[k])
            .collect();
        Ok(Self::new_unchecked(c_out * c_in, h))
    }

    /// Inverse operation: `C' = C^{-1} = -P C^T P`, and `h'_k = -epsilon_k` where
    /// `zeta^{epsilon_k} XZ(E_k)` is the image of `XZ(C'_k)` under `self`.
    pub fn invert(&self) -> CliffordOp {
        let twice_d = 2 * self.d;
        let p = p_matrix(self.n, self.d);
        let c_inv = -&(&(&p * &self.c.transpose()) * &p);
        let m = ctuc(&self.c);
        let linear: Vec<i64> = self.h.iter().zip(m.diagonal()).map(|(h, v)| h - v).collect();
        let h = (0..2 * self.n)
            .map(|k| {
                let a = c_inv.column(k);
                -(dot_mod(&linear, &a, twice_d) + quadratic_phase(&m, &a))
            })
            .collect();
        Self::new_unchecked(c_inv, h)
    }

    /// The Pauli element `XZ(a)` as a Clifford operation: `C = I`, `h = -2 P a`. The phase of
    /// `x` is a global phase and is dropped.
    pub fn from_pauli(x: &PauliElement) -> CliffordOp {
        let (d, n) = (x.dim(), x.num_qudits());
        let pa = p_matrix(n, d).mul_vec(x.vector());
        Self::new_unchecked(ResidueMatrix::identity(2 * n, d), pa.iter().map(|&v| -2 * v).collect())
    }

    /// The configuration-space map `|x> -> |T x>`: `C = diag(T, T^{-T})`, `h = 0`.
    pub fn from_linear_transform(t: &ResidueMatrix) -> Result<CliffordOp> {
        check_qudit_dim(t.modulus())?;
        let t_inv = invert_matrix(t)?;
        let n = t.rows();
        let zero = ResidueMatrix::zeros(n, n, t.modulus());
        let c = ResidueMatrix::from_blocks(t, &zero, &zero, &t_inv.transpose());
        Ok(Self::new_unchecked(c, vec![0; 2 * n]))
    }

    /// Places `op` on the listed qudits (1-based, strictly increasing) of an `n`-qudit
    /// register, acting as the identity elsewhere.
    pub fn embed(op: &CliffordOp, qudits: &[usize], n: usize) -> Result<CliffordOp> {
        if qudits.len() != op.n {
            return Err(Error::DimensionMismatch(format!(
                "{} target qudits for an operation on {}",
                qudits.len(),
                op.n
            )));
        }
        for (i, &q) in qudits.iter().enumerate() {
            if q == 0 || q > n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
            if i > 0 && qudits[i - 1] >= q {
                return Err(Error::InvalidParameter(format!("qudit indices {qudits:?} are not strictly increasing")));
            }
        }
        let k = op.n;
        // row/column of the small operation -> row/column of the embedded one
        let place = |i: usize| if i < k { qudits[i] - 1 } else { n + qudits[i - k] - 1 };
        let mut c = ResidueMatrix::identity(2 * n, op.d);
        let mut h = vec![0; 2 * n];
        for i in 0..2 * k {
            for j in 0..2 * k {
                c.set(place(i), place(j), op.c.get(i, j));
            }
            h[place(i)] = op.h[i];
        }
        Ok(Self::new_unchecked(c, h))
    }

    /// Discrete Fourier transform on one qudit: `C = [[0, -1], [1, 0]]`, `h = 0`.
    pub fn fourier(target: usize, n: usize, d: i64) -> Result<CliffordOp> {
        check_qudit_dim(d)?;
        let local = Self::new_unchecked(ResidueMatrix::from_rows(&[[0, -1], [1, 0]], d)?, vec![0, 0]);
        Self::embed(&local, &[target], n)
    }

    /// Inverse discrete Fourier transform: `C = [[0, 1], [-1, 0]]`, `h = 0`.
    pub fn fourier_inverse(target: usize, n: usize, d: i64) -> Result<CliffordOp> {
        check_qudit_dim(d)?;
        let local = Self::new_unchecked(ResidueMatrix::from_rows(&[[0, 1], [-1, 0]], d)?, vec![0, 0]);
        Self::embed(&local, &[target], n)
    }

    /// The phase gate `|x> -> zeta^{x(x+d)} |x>` applied `power` times:
    /// `C = [[1, 0], [g, 1]]`, `h = [g(d + 1), 0]`.
    pub fn phase_gate(target: usize, power: i64, n: usize, d: i64) -> Result<CliffordOp> {
        check_qudit_dim(d)?;
        if !(0..d).contains(&power) {
            return Err(Error::InvalidParameter(format!("phase gate power {power} outside [0, {d})")));
        }
        let c = ResidueMatrix::from_rows(&[[1, 0], [power, 1]], d)?;
        let local = Self::new_unchecked(c, vec![power * (d + 1), 0]);
        Self::embed(&local, &[target], n)
    }

    pub fn to_odd_form(&self) -> Result<OddCliffordForm> {
        if self.d % 2 == 0 {
            return Err(Error::EvenDimension(self.d));
        }
        let half = inverse_mod(2, self.d)?;
        let g = self.h.iter().map(|&h| reduce(half * h, self.d)).collect();
        Ok(OddCliffordForm { d: self.d, n: self.n, c: self.c.clone(), g })
    }

    pub fn from_odd_form(o: &OddCliffordForm) -> CliffordOp {
        Self::new_unchecked(o.c.clone(), o.g.iter().map(|&g| 2 * g).collect())
    }
}

/// Clifford operation for odd `d` with `g = h / 2` over `Z_d`; every symplectic `C` and
/// every `g` is admissible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OddCliffordForm {
    d: i64,
    n: usize,
    c: ResidueMatrix,
    g: Vec<i64>,
}

impl OddCliffordForm {
    pub fn new(c: ResidueMatrix, g: Vec<i64>) -> Result<Self> {
        let d = c.modulus();
        if d % 2 == 0 {
            return Err(Error::EvenDimension(d));
        }
        let g: Vec<i64> = g.iter().map(|&x| reduce(x, d)).collect();
        let op = CliffordOp::validate(c, g.iter().map(|&x| 2 * x).collect())?;
        Ok(Self { d, n: op.n, c: op.c, g })
    }

    pub fn dim(&self) -> i64 {
        self.d
    }

    pub fn matrix(&self) -> &ResidueMatrix {
        &self.c
    }

    pub fn phases(&self) -> &[i64] {
        &self.g
    }

    fn half(&self) -> i64 {
        (self.d + 1) / 2
    }

    /// Image of `omega^delta XZ(a)`, returned as `(epsilon, b)` with `epsilon` the exponent
    /// of `omega`.
    pub fn conjugate_pauli(&self, delta: i64, a: &[i64]) -> (i64, Vec<i64>) {
        let d = self.d;
        let m = ctuc(&self.c);
        let u = u_matrix(self.n, d);
        let linear: Vec<i64> = self.g.iter().zip(m.diagonal()).map(|(g, v)| g - self.half() * v).collect();
        let diff = &m - &u;
        let quad = dot_mod(a, &diff.mul_vec(a), d);
        let eps = delta + dot_mod(&linear, a, d) + self.half() * quad;
        (reduce(eps, d), self.c.mul_vec(a))
    }

    /// `self` applied after `inner`.
    pub fn compose(&self, inner: &OddCliffordForm) -> Result<OddCliffordForm> {
        if self.d != inner.d || self.n != inner.n {
            return Err(Error::DimensionMismatch("odd-form operations of different shape".into()));
        }
        let d = self.d;
        let u = u_matrix(self.n, d);
        let c_t = inner.c.transpose();
        let m_out = ctuc(&self.c);
        let sandwich = (&(&c_t * &(&m_out - &u)) * &inner.c).diagonal();
        let pulled = c_t.mul_vec(&m_out.diagonal());
        let from_outer = c_t.mul_vec(&self.g);
        let g = (0..2 * self.n)
            .map(|k| reduce(inner.g[k] + from_outer[k] + self.half() * (sandwich[k] - pulled[k]), d))
            .collect();
        Ok(OddCliffordForm { d, n: self.n, c: &self.c * &inner.c, g })
    }

    pub fn invert(&self) -> OddCliffordForm {
        let d = self.d;
        let p = p_matrix(self.n, d);
        let c_inv = -&(&(&p * &self.c.transpose()) * &p);
        let c_inv_t = c_inv.transpose();
        let u = u_matrix(self.n, d);
        let first = c_inv_t.mul_vec(&self.g);
        let second = c_inv_t.mul_vec(&ctuc(&self.c).diagonal());
        let third = (&(&c_inv_t * &u) * &c_inv).diagonal();
        let g = (0..2 * self.n)
            .map(|k| reduce(-first[k] + self.half() * (second[k] + third[k]), d))
            .collect();
        OddCliffordForm { d, n: self.n, c: c_inv, g }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[i64; 2]], d: i64) -> ResidueMatrix {
        ResidueMatrix::from_rows(rows, d).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(CliffordOp::validate(ResidueMatrix::identity(2, 3), vec![0, 0]).is_ok());
        assert_eq!(
            CliffordOp::validate(ResidueMatrix::identity(2, 3), vec![1, 0]),
            Err(Error::PhaseParityViolation { index: 0 })
        );
        assert_eq!(
            CliffordOp::validate(m(&[[2, 0], [0, 1]], 3), vec![0, 0]),
            Err(Error::NotSymplectic { modulus: 3 })
        );
        // on one qudit every determinant-one matrix is symplectic
        assert!(CliffordOp::validate(m(&[[1, 1], [0, 1]], 3), vec![0, 0]).is_ok());
        assert!(CliffordOp::validate(ResidueMatrix::identity(3, 3), vec![0, 0, 0]).is_err());
        assert!(CliffordOp::validate(ResidueMatrix::identity(2, 3), vec![0]).is_err());
    }

    #[test]
    fn fourier_conjugation() {
        let f = CliffordOp::fourier(1, 1, 3).unwrap();
        assert_eq!(f.matrix().to_rows(), vec![vec![0, 2], vec![1, 0]]);
        let x = PauliElement::new(3, vec![1, 1], 0).unwrap();
        assert_eq!(f.conjugate_pauli(&x).unwrap(), PauliElement::new(3, vec![2, 1], 4).unwrap());
        let h = CliffordOp::fourier(1, 1, 2).unwrap();
        assert_eq!(h.matrix().to_rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(h.phases(), &[0, 0]);
    }

    #[test]
    fn qubit_phase_gate_conjugates_x() {
        let s = CliffordOp::phase_gate(1, 1, 1, 2).unwrap();
        assert_eq!(s.phases(), &[3, 0]);
        let x = PauliElement::basis(2, 1, 0);
        assert_eq!(s.conjugate_pauli(&x).unwrap(), PauliElement::new(2, vec![1, 1], 3).unwrap());
    }

    #[test]
    fn identity_conjugation_is_trivial() {
        let id = CliffordOp::identity(2, 6);
        let x = PauliElement::new(6, vec![1, 5, 3, 2], 7).unwrap();
        assert_eq!(id.conjugate_pauli(&x).unwrap(), x);
        assert!(id.conjugate_pauli(&PauliElement::identity(6, 1)).is_err());
    }

    #[test]
    fn fourier_squared_is_parity() {
        let f = CliffordOp::fourier(1, 1, 3).unwrap();
        let ff = f.compose(&f).unwrap();
        assert_eq!(ff.matrix().to_rows(), vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(ff.phases(), &[0, 0]);
        let f4 = ff.compose(&ff).unwrap();
        assert!(f4.is_identity());
        assert!(f.compose(&f.invert()).unwrap().is_identity());
        assert_eq!(f.invert().matrix().to_rows(), vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(f.invert(), CliffordOp::fourier_inverse(1, 1, 3).unwrap());
    }

    #[test]
    fn phase_gate_inverse() {
        let s = CliffordOp::phase_gate(1, 1, 1, 3).unwrap();
        assert_eq!(s.phases(), &[4, 0]);
        let inv = s.invert();
        assert_eq!(inv.matrix().to_rows(), vec![vec![1, 0], vec![2, 1]]);
        assert!(inv.compose(&s).unwrap().is_identity());
        assert!(s.compose(&inv).unwrap().is_identity());
    }

    #[test]
    fn phase_gate_powers_match_repeated_composition() {
        for d in 2..=9 {
            let one = CliffordOp::phase_gate(1, 1, 1, d).unwrap();
            let mut acc = CliffordOp::identity(1, d);
            for g in 0..d {
                assert_eq!(CliffordOp::phase_gate(1, g, 1, d).unwrap(), acc, "d={d} g={g}");
                acc = one.compose(&acc).unwrap();
            }
            // S^d is the identity for odd d and Z^{d/2} for even d
            let expected = if d % 2 == 1 {
                CliffordOp::identity(1, d)
            } else {
                CliffordOp::from_pauli(&PauliElement::new(d, vec![0, d / 2], 0).unwrap())
            };
            assert_eq!(acc, expected, "d={d}");
        }
        let s2 = CliffordOp::phase_gate(1, 2, 1, 4).unwrap();
        assert_eq!(s2.matrix().to_rows(), vec![vec![1, 0], vec![2, 1]]);
    }

    #[test]
    fn from_pauli_examples() {
        assert!(CliffordOp::from_pauli(&PauliElement::identity(5, 2)).is_identity());
        let x = CliffordOp::from_pauli(&PauliElement::basis(3, 1, 0));
        assert_eq!(x.phases(), &[0, 4]);
        let z = CliffordOp::from_pauli(&PauliElement::basis(4, 1, 1));
        assert_eq!(z.phases(), &[2, 0]);
        // X Z X^{-1} = omega^{-1} Z for d = 3
        let zq = PauliElement::basis(3, 1, 1);
        let xp = PauliElement::basis(3, 1, 0);
        let direct = xp.multiply(&zq).unwrap().multiply(&xp.inverse()).unwrap();
        assert_eq!(x.conjugate_pauli(&zq).unwrap(), direct);
        assert_eq!(direct.phase(), 4);
    }

    #[test]
    fn sum_gate_from_linear_transform() {
        for d in [2, 3, 4, 6] {
            let t = m(&[[1, 0], [1, 1]], d);
            let sum = CliffordOp::from_linear_transform(&t).unwrap();
            let expected = ResidueMatrix::from_rows(
                &[[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 0, 1]],
                d,
            )
            .unwrap();
            assert_eq!(sum.matrix(), &expected);
            assert_eq!(sum.phases(), &[0, 0, 0, 0]);
        }
        assert!(CliffordOp::from_linear_transform(&ResidueMatrix::identity(2, 4)).unwrap().is_identity());
        let swap = CliffordOp::from_linear_transform(&m(&[[0, 1], [1, 0]], 5)).unwrap();
        let pi = m(&[[0, 1], [1, 0]], 5);
        let zero = ResidueMatrix::zeros(2, 2, 5);
        assert_eq!(swap.matrix(), &ResidueMatrix::from_blocks(&pi, &zero, &zero, &pi));
        assert!(matches!(
            CliffordOp::from_linear_transform(&m(&[[2, 0], [0, 1]], 4)),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn embedding_and_index_errors() {
        let f = CliffordOp::fourier(2, 2, 3).unwrap();
        let c = f.matrix();
        assert_eq!(c.get(0, 0), 1);
        assert_eq!(c.get(2, 2), 1);
        assert_eq!(c.get(1, 3), 2);
        assert_eq!(c.get(3, 1), 1);
        assert!(matches!(CliffordOp::fourier(0, 2, 3), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(CliffordOp::fourier(3, 2, 3), Err(Error::IndexOutOfRange { .. })));
        assert!(CliffordOp::phase_gate(1, 5, 1, 5).is_err());
        let sum = CliffordOp::from_linear_transform(&m(&[[1, 0], [1, 1]], 3)).unwrap();
        assert!(CliffordOp::embed(&sum, &[3, 1], 3).is_err());
        let placed = CliffordOp::embed(&sum, &[1, 3], 3).unwrap();
        assert!(CliffordOp::validate(placed.matrix().clone(), placed.phases().to_vec()).is_ok());
    }

    #[test]
    fn odd_form_examples() {
        assert_eq!(CliffordOp::identity(1, 3).to_odd_form().unwrap().phases(), &[0, 0]);
        let x = CliffordOp::from_pauli(&PauliElement::basis(3, 1, 0));
        let o = x.to_odd_form().unwrap();
        assert_eq!(o.phases(), &[0, 2]);
        assert_eq!(CliffordOp::from_odd_form(&o), x);
        assert!(matches!(CliffordOp::identity(1, 4).to_odd_form(), Err(Error::EvenDimension(4))));
        assert!(OddCliffordForm::new(ResidueMatrix::identity(2, 6), vec![0, 0]).is_err());
        assert!(OddCliffordForm::new(ResidueMatrix::identity(2, 5), vec![1, 3]).is_ok());
    }

    mod properties {
        use super::*;
        use crate::sampling::random_clifford;
        use proptest::prelude::*;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        fn setup() -> impl Strategy<Value = (i64, usize, u64)> {
            (prop::sample::select(vec![2i64, 3, 4, 5, 6, 8, 9, 12]), 1usize..=3, any::<u64>())
        }

        fn random_pauli(rng: &mut ChaCha8Rng, d: i64, n: usize) -> PauliElement {
            PauliElement::new(d, (0..2 * n).map(|_| rng.gen_range(0..d)).collect(), rng.gen_range(0..2 * d)).unwrap()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn lifting_the_input_vector_changes_nothing((d, n, seed) in setup()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let q = random_clifford(&mut rng, n, d);
                let m = ctuc(&q.c);
                let linear: Vec<i64> = q.h.iter().zip(m.diagonal()).map(|(h, v)| h - v).collect();
                let a: Vec<i64> = (0..2 * n).map(|_| rng.gen_range(0..d)).collect();
                let mut lifted = a.clone();
                lifted[rng.gen_range(0..2 * n)] += d;
                let eps = |v: &[i64]| reduce(dot_mod(&linear, v, 2 * d) + quadratic_phase(&m, v), 2 * d);
                prop_assert_eq!(eps(&a), eps(&lifted));
            }

            #[test]
            fn conjugation_is_a_homomorphism((d, n, seed) in setup()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let q = random_clifford(&mut rng, n, d);
                let (x, y) = (random_pauli(&mut rng, d, n), random_pauli(&mut rng, d, n));
                let image = q.conjugate_pauli(&x.multiply(&y).unwrap()).unwrap();
                let product = q.conjugate_pauli(&x).unwrap().multiply(&q.conjugate_pauli(&y).unwrap()).unwrap();
                prop_assert_eq!(image, product);
                let before = x.commutation_exponent(&y).unwrap();
                let after = q.conjugate_pauli(&x).unwrap().commutation_exponent(&q.conjugate_pauli(&y).unwrap()).unwrap();
                prop_assert_eq!(before, after);
            }

            #[test]
            fn composition_acts_in_sequence((d, n, seed) in setup()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (q, p) = (random_clifford(&mut rng, n, d), random_clifford(&mut rng, n, d));
                let x = random_pauli(&mut rng, d, n);
                let qp = q.compose(&p).unwrap();
                prop_assert!(CliffordOp::validate(qp.c.clone(), qp.h.clone()).is_ok());
                prop_assert_eq!(qp.conjugate_pauli(&x).unwrap(), q.conjugate_pauli(&p.conjugate_pauli(&x).unwrap()).unwrap());
            }

            #[test]
            fn inverse_undoes_the_operation((d, n, seed) in setup()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let q = random_clifford(&mut rng, n, d);
                let inv = q.invert();
                prop_assert!(CliffordOp::validate(inv.c.clone(), inv.h.clone()).is_ok());
                prop_assert!(inv.compose(&q).unwrap().is_identity());
                prop_assert!(q.compose(&inv).unwrap().is_identity());
                let x = random_pauli(&mut rng, d, n);
                prop_assert_eq!(inv.conjugate_pauli(&q.conjugate_pauli(&x).unwrap()).unwrap(), x);
            }

            #[test]
            fn odd_forms_agree_with_general_forms(d in prop::sample::select(vec![3i64, 5, 7, 9]), n in 1usize..=3, seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (q, p) = (random_clifford(&mut rng, n, d), random_clifford(&mut rng, n, d));
                let (qo, po) = (q.to_odd_form().unwrap(), p.to_odd_form().unwrap());
                prop_assert_eq!(CliffordOp::from_odd_form(&qo.compose(&po).unwrap()), q.compose(&p).unwrap());
                prop_assert_eq!(CliffordOp::from_odd_form(&qo.invert()), q.invert());
                let a: Vec<i64> = (0..2 * n).map(|_| rng.gen_range(0..d)).collect();
                let (eps, b) = qo.conjugate_pauli(1, &a);
                let general = q.conjugate_pauli(&PauliElement::new(d, a, 2).unwrap()).unwrap();
                prop_assert_eq!(general.vector(), b.as_slice());
                prop_assert_eq!(general.phase(), 2 * eps % (2 * d));
            }
        }
    }
}
