//! The generalized Pauli group on `n` qudits: elements `zeta^delta XZ(a)` with
//! `a = [v; w]` in `Z_d^{2n}` and `delta` in `Z_{2d}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::zmod::{check_qudit_dim, reduce, ResidueMatrix};

/// The block matrix `U = [[0, 0], [I, 0]]` of size `2n`, over `Z_modulus`.
pub fn u_matrix(n: usize, modulus: i64) -> ResidueMatrix {
    ResidueMatrix::from_fn(2 * n, 2 * n, modulus, |i, j| (i >= n && i - n == j) as i64)
}

/// The symplectic form `P = U - U^T` of size `2n`, over `Z_modulus`.
pub fn p_matrix(n: usize, modulus: i64) -> ResidueMatrix {
    let u = u_matrix(n, modulus);
    &u - &u.transpose()
}

/// `a^T U b` on canonical lifts, as an unreduced integer: the Z-part of `a` against the
/// X-part of `b`.
pub(crate) fn lifted_utu(a: &[i64], b: &[i64]) -> i64 {
    let n = a.len() / 2;
    (0..n).map(|i| a[n + i] * b[i]).sum()
}

/// `zeta^delta XZ(a)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliElement {
    d: i64,
    a: Vec<i64>,
    delta: i64,
}

impl PauliElement {
    /// `a` must have even length `2n`; entries are reduced modulo `d`, `delta` modulo `2d`.
    pub fn new(d: i64, a: Vec<i64>, delta: i64) -> Result<Self> {
        check_qudit_dim(d)?;
        if a.len() % 2 != 0 || a.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "Pauli vector must have positive even length, got {}",
                a.len()
            )));
        }
        Ok(Self::new_unchecked(d, a, delta))
    }

    pub(crate) fn new_unchecked(d: i64, a: Vec<i64>, delta: i64) -> Self {
        let a = a.into_iter().map(|x| reduce(x, d)).collect();
        Self { d, a, delta: reduce(delta, 2 * d) }
    }

    pub fn identity(d: i64, n: usize) -> Self {
        Self::new_unchecked(d, vec![0; 2 * n], 0)
    }

    /// `XZ(E_k)` for `k` in `0..2n`: `X` on qudit `k` for `k < n`, `Z` on qudit `k - n`
    /// otherwise.
    pub fn basis(d: i64, n: usize, k: usize) -> Self {
        let mut a = vec![0; 2 * n];
        a[k] = 1;
        Self::new_unchecked(d, a, 0)
    }

    pub fn dim(&self) -> i64 {
        self.d
    }

    pub fn num_qudits(&self) -> usize {
        self.a.len() / 2
    }

    pub fn vector(&self) -> &[i64] {
        &self.a
    }

    /// X exponents `v`.
    pub fn x_part(&self) -> &[i64] {
        &self.a[..self.num_qudits()]
    }

    /// Z exponents `w`.
    pub fn z_part(&self) -> &[i64] {
        &self.a[self.num_qudits()..]
    }

    pub fn phase(&self) -> i64 {
        self.delta
    }

    pub fn is_identity(&self) -> bool {
        self.delta == 0 && self.a.iter().all(|&x| x == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.a.len() != other.a.len() {
            return Err(Error::DimensionMismatch(format!(
                "Pauli on {} qudits of dimension {} vs {} qudits of dimension {}",
                self.num_qudits(),
                self.d,
                other.num_qudits(),
                other.d
            )));
        }
        Ok(())
    }

    /// Group product `self * other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let twice_d = 2 * self.d;
        let delta = self.delta + other.delta + 2 * lifted_utu(&self.a, &other.a);
        let a = self.a.iter().zip(&other.a).map(|(x, y)| reduce(x + y, self.d)).collect();
        Ok(Self { d: self.d, a, delta: reduce(delta, twice_d) })
    }

    /// Exponent `c` of `omega` in `XZ(a) XZ(b) = omega^c XZ(b) XZ(a)`.
    pub fn commutation_exponent(&self, other: &Self) -> Result<i64> {
        self.check_compatible(other)?;
        let s = lifted_utu(&self.a, &other.a) - lifted_utu(&other.a, &self.a);
        Ok(reduce(s, self.d))
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.commutation_exponent(other)? == 0)
    }

    /// Group inverse: the vector is negated and the phase chosen so that the product with
    /// `self` is the identity.
    pub fn inverse(&self) -> Self {
        let a: Vec<i64> = self.a.iter().map(|&x| reduce(-x, self.d)).collect();
        let delta = -self.delta - 2 * lifted_utu(&self.a, &a);
        Self { d: self.d, a, delta: reduce(delta, 2 * self.d) }
    }

    /// `self^k` for `k >= 0`.
    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::identity(self.d, self.num_qudits());
        for _ in 0..k {
            acc = acc.multiply(self).expect("same shape");
        }
        acc
    }

    /// Smallest `k >= 1` with `self^k = I`, found by repeated multiplication.
    pub fn order(&self) -> u64 {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.multiply(self).expect("same shape");
            k += 1;
            debug_assert!(k <= 2 * self.d as u64, "order exceeds 2d");
        }
        k
    }

    /// Action on a basis state `|x>`: returns the exponent of `zeta` and the new label, from
    /// `XZ(a)|x> = omega^{w.x} |x + v>`.
    pub fn apply_to_basis(&self, label: &[i64]) -> Result<(i64, Vec<i64>)> {
        let n = self.num_qudits();
        if label.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "basis label of length {} for {n} qudits",
                label.len()
            )));
        }
        let label: Vec<i64> = label.iter().map(|&x| reduce(x, self.d)).collect();
        let wx: i64 = self.z_part().iter().zip(&label).map(|(w, x)| w * x).sum();
        let phase = reduce(self.delta + 2 * wx, 2 * self.d);
        let out = label.iter().zip(self.x_part()).map(|(x, v)| reduce(x + v, self.d)).collect();
        Ok((phase, out))
    }
}

impl fmt::Debug for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta^{} XZ({:?}) [d={}]", self.delta, self.a, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(d: i64, a: &[i64], delta: i64) -> PauliElement {
        PauliElement::new(d, a.to_vec(), delta).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let x = p(3, &[1, 0], 0);
        let z = p(3, &[0, 1], 0);
        assert_eq!(x.multiply(&z).unwrap(), p(3, &[1, 1], 0));
        assert_eq!(z.multiply(&x).unwrap(), p(3, &[1, 1], 2));
        assert!(x.multiply(&p(5, &[1, 0], 0)).is_err());
        assert!(x.multiply(&p(3, &[1, 0, 0, 0], 0)).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert_eq!(p(3, &[1, 0], 0).commutation_exponent(&p(3, &[0, 1], 0)).unwrap(), 2);
        assert_eq!(p(4, &[2, 0], 0).commutation_exponent(&p(4, &[0, 2], 0)).unwrap(), 0);
        let y = p(5, &[2, 3, 1, 4], 0);
        assert_eq!(y.commutation_exponent(&y).unwrap(), 0);
    }

    #[test]
    fn order_examples() {
        assert_eq!(p(2, &[1, 1], 0).order(), 4);
        assert_eq!(p(3, &[1, 2], 0).order(), 3);
        assert_eq!(p(6, &[0, 0], 0).order(), 1);
        assert_eq!(p(4, &[2, 0], 0).order(), 2);
        assert_eq!(p(4, &[0, 0], 1).order(), 8);
    }

    #[test]
    fn basis_action_examples() {
        assert_eq!(p(3, &[1, 0], 0).apply_to_basis(&[2]).unwrap(), (0, vec![0]));
        assert_eq!(p(3, &[0, 1], 0).apply_to_basis(&[2]).unwrap(), (4, vec![2]));
        assert_eq!(p(4, &[2, 2], 0).apply_to_basis(&[1]).unwrap(), (4, vec![3]));
        assert!(p(4, &[2, 2], 0).apply_to_basis(&[1, 1]).is_err());
    }

    #[test]
    fn symplectic_form_identities() {
        for (n, d) in [(1, 2), (2, 3), (3, 4)] {
            let pm = p_matrix(n, d);
            assert_eq!(pm.transpose(), -&pm);
            assert_eq!(&pm * &pm, -&ResidueMatrix::identity(2 * n, d));
        }
    }

    fn element() -> impl Strategy<Value = PauliElement> {
        (2i64..=9, 1usize..=3).prop_flat_map(|(d, n)| pauli_of(d, n))
    }

    fn pauli_of(d: i64, n: usize) -> impl Strategy<Value = PauliElement> {
        (proptest::collection::vec(0..d, 2 * n), 0..2 * d).prop_map(move |(a, delta)| p(d, &a, delta))
    }

    fn triple() -> impl Strategy<Value = (PauliElement, PauliElement, PauliElement)> {
        (2i64..=9, 1usize..=3).prop_flat_map(|(d, n)| (pauli_of(d, n), pauli_of(d, n), pauli_of(d, n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(3000))]
        #[test]
        fn associative((x, y, z) in triple()) {
            let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
            let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn antisymmetric_commutation((x, y, _z) in triple()) {
            let c = x.commutation_exponent(&y).unwrap();
            prop_assert_eq!(reduce(-c, x.dim()), y.commutation_exponent(&x).unwrap());
        }

        #[test]
        fn inverse_is_two_sided(x in element()) {
            let inv = x.inverse();
            prop_assert!(x.multiply(&inv).unwrap().is_identity());
            prop_assert!(inv.multiply(&x).unwrap().is_identity());
        }

        #[test]
        fn d_th_power_is_scalar(x in element()) {
            let d = x.dim();
            let bare = PauliElement::new(d, x.vector().to_vec(), 0).unwrap();
            let power = bare.pow(d as u64);
            let a = x.vector();
            let expected = reduce(d * (d - 1) * lifted_utu(a, a), 2 * d);
            prop_assert!(power.vector().iter().all(|&v| v == 0));
            prop_assert_eq!(power.phase(), expected);
            let order = bare.order();
            prop_assert!((2 * d as u64) % order == 0);
            if d % 2 == 1 || lifted_utu(a, a) % 2 == 0 {
                prop_assert_eq!(d as u64 % order, 0);
            }
        }
    }
}
