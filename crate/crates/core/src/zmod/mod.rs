//! Exact arithmetic and linear algebra over the residue rings `Z_d`.
//!
//! Everything is stored as canonical residues in `[0, d)` and renormalized after every
//! operation. Arithmetic is carried out in `i64`; with `d <= 2^15` (so `2d <= 2^16`) and
//! matrix dimensions of at most `2^10`, no intermediate sum can overflow.

mod matrix;
mod snf;
mod solve;

pub use matrix::ResidueMatrix;
pub use snf::{invert_matrix, smith_normal_form, SmithDecomposition};
pub use solve::{solve_mixed_modulus, MixedModulusSystem};

use crate::error::{Error, Result};

/// Largest qudit dimension accepted anywhere in the crate.
pub const MAX_QUDIT_DIM: i64 = 1 << 15;
/// Largest modulus a matrix may carry (phases live in `Z_{2d}`).
pub const MAX_MODULUS: i64 = 2 * MAX_QUDIT_DIM;
/// Largest row or column count of a matrix.
pub const MAX_MATRIX_DIM: usize = 1 << 10;

/// Canonical representative of `x` in `[0, m)`.
#[inline]
pub fn reduce(x: i64, m: i64) -> i64 {
    x.rem_euclid(m)
}

pub fn reduce_vec(v: &[i64], m: i64) -> Vec<i64> {
    v.iter().map(|&x| reduce(x, m)).collect()
}

pub(crate) fn check_modulus(m: i64) -> Result<()> {
    if (2..=MAX_MODULUS).contains(&m) {
        Ok(())
    } else {
        Err(Error::InvalidModulus { modulus: m, max: MAX_MODULUS })
    }
}

pub(crate) fn check_qudit_dim(d: i64) -> Result<()> {
    if (2..=MAX_QUDIT_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidModulus { modulus: d, max: MAX_QUDIT_DIM })
    }
}

/// Non-negative greatest common divisor.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Positive divisors of `d > 0`, ascending.
pub fn divisors(d: i64) -> Vec<i64> {
    (1..=d).filter(|k| d % k == 0).collect()
}

/// Extended Euclid: returns `(g, u, v)` with `g = gcd(a, b) >= 0` and `u*a + v*b = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Multiplicative inverse of `r` modulo `d`.
pub fn inverse_mod(r: i64, d: i64) -> Result<i64> {
    let (g, u, _) = ext_gcd(reduce(r, d), d);
    if g != 1 {
        return Err(Error::NotInvertible(format!("{r} modulo {d} (gcd {g})")));
    }
    Ok(reduce(u, d))
}

/// A unit `u` of `Z_d` with `u * r = gcd(r, d) (mod d)`.
///
/// Every residue is associated to the positive divisor `gcd(r, d)`; this finds the unit.
pub(crate) fn unit_to_divisor(r: i64, d: i64) -> i64 {
    let r = reduce(r, d);
    if r == 0 {
        return 1;
    }
    let g = gcd(r, d);
    let dd = d / g;
    let base = if dd == 1 { 0 } else { inverse_mod(r / g, dd).expect("coprime after division") };
    // base + k*dd is an inverse of r/g modulo dd for every k; one of them is a unit mod d.
    (0..g)
        .map(|k| base + k * dd)
        .find(|&u| gcd(u, d) == 1)
        .expect("a unit lift always exists")
}

/// Prime factorization as `(prime, exponent)` pairs.
pub(crate) fn factorize(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Exponent vector of a divisor of `d` with respect to the primes of `d`.
pub(crate) fn divisor_exponents(primes: &[(i64, u32)], mut x: i64) -> Vec<u32> {
    primes
        .iter()
        .map(|&(p, _)| {
            let mut e = 0;
            while x % p == 0 {
                x /= p;
                e += 1;
            }
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_gcd(a: i64, b: i64) -> i64 {
        let (a, b) = (a.abs(), b.abs());
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        (1..=a.min(b)).rev().find(|g| a % g == 0 && b % g == 0).unwrap()
    }

    #[test]
    fn ext_gcd_examples() {
        let (g, u, v) = ext_gcd(6, 4);
        assert_eq!(g, 2);
        assert_eq!(u * 6 + v * 4, 2);
        assert_eq!(ext_gcd(0, 5).0, 5);
        assert_eq!(brute_gcd(35, 21), 7);
        assert_eq!(ext_gcd(35, 21).0, 7);
        assert_eq!(ext_gcd(0, 0).0, 0);
        let (g, u, v) = ext_gcd(-12, 18);
        assert_eq!(g, 6);
        assert_eq!(u * -12 + v * 18, 6);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse_mod(3, 7).unwrap(), 5);
        for d in 2..20 {
            assert_eq!(inverse_mod(1, d).unwrap(), 1);
        }
        assert!(matches!(inverse_mod(2, 4), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn unit_to_divisor_hits_divisor() {
        for d in 2..40 {
            for r in 0..d {
                let u = unit_to_divisor(r, d);
                assert_eq!(gcd(u, d), 1);
                let want = if r == 0 { 0 } else { gcd(r, d) % d };
                assert_eq!(reduce(u * r, d), want, "d={d} r={r}");
            }
        }
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(divisor_exponents(&factorize(72), 12), vec![2, 1]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn ext_gcd_bezout(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000) {
            let (g, u, v) = ext_gcd(a, b);
            prop_assert!(g >= 0);
            prop_assert_eq!(u * a + v * b, g);
            if g != 0 {
                prop_assert_eq!(a % g, 0);
                prop_assert_eq!(b % g, 0);
            }
        }
    }
}
