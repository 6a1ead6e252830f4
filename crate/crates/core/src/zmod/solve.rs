use super::{divisor_exponents, factorize, reduce, smith_normal_form, ResidueMatrix};
use crate::error::{Error, Result};

/// The system `sum_i B[j][i] x_i = y_j (mod q_j)` for `j = 0..m`, solved for `x` in
/// `Z_{qbar_0} x ... x Z_{qbar_{n-1}}`.
///
/// `coefficient` is the `m x n` matrix (the transpose of the generator block it comes from)
/// over `Z_d`; every entry of `moduli` and `solution_moduli` must divide `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedModulusSystem {
    pub coefficient: ResidueMatrix,
    pub rhs: Vec<i64>,
    pub moduli: Vec<i64>,
    pub solution_moduli: Vec<i64>,
}

impl MixedModulusSystem {
    /// Whether `x` satisfies every row modulo its own modulus.
    pub fn is_solution(&self, x: &[i64]) -> bool {
        let b = &self.coefficient;
        (0..b.rows()).all(|j| {
            let s: i64 = (0..b.cols()).map(|i| b.get(j, i) * x[i]).sum();
            reduce(s - self.rhs[j], self.moduli[j]) == 0
        })
    }

    fn check_shapes(&self) -> Result<()> {
        let d = self.coefficient.modulus();
        let (m, n) = (self.coefficient.rows(), self.coefficient.cols());
        if self.rhs.len() != m || self.moduli.len() != m || self.solution_moduli.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "system with {m} rows and {n} unknowns got rhs {}, moduli {}, solution moduli {}",
                self.rhs.len(),
                self.moduli.len(),
                self.solution_moduli.len()
            )));
        }
        for &q in self.moduli.iter().chain(&self.solution_moduli) {
            if q < 1 || d % q != 0 {
                return Err(Error::InvalidParameter(format!("modulus {q} does not divide {d}")));
            }
        }
        Ok(())
    }
}

/// Unique solution of a [`MixedModulusSystem`].
///
/// Rows are brought to the common modulus `d` by scaling row `j` with `d / q_j`; the scaled
/// system is diagonalized by a Smith decomposition `F = K (Z B) L`, solved coordinate-wise,
/// and mapped back through `L`. Solvability is reported as [`Error::Inconsistent`]; a
/// solution set larger than one point of `G_qbar` is reported as
/// [`Error::InternalContractViolation`].
pub fn solve_mixed_modulus(sys: &MixedModulusSystem) -> Result<Vec<i64>> {
    sys.check_shapes()?;
    let b = &sys.coefficient;
    let d = b.modulus();
    let (m, n) = (b.rows(), b.cols());

    let scale: Vec<i64> = sys.moduli.iter().map(|&q| d / q).collect();
    let zb = ResidueMatrix::from_fn(m, n, d, |j, i| scale[j] * b.get(j, i));
    let zy: Vec<i64> = (0..m).map(|j| reduce(scale[j] * reduce(sys.rhs[j], sys.moduli[j]), d)).collect();

    let snf = smith_normal_form(&zb);
    let y = snf.k.mul_vec(&zy);
    let mut x = vec![0i64; n];
    for (j, &yj) in y.iter().enumerate() {
        let f = if j < n { snf.f.get(j, j) } else { 0 };
        if f == 0 {
            if yj != 0 {
                return Err(Error::Inconsistent(format!("row {j} of the diagonalized system reads 0 = {yj}")));
            }
        } else if yj % f != 0 {
            return Err(Error::Inconsistent(format!("{f} does not divide {yj} modulo {d}")));
        } else {
            x[j] = yj / f;
        }
    }
    let x = snf.l.mul_vec(&x);
    let x: Vec<i64> = x.iter().zip(&sys.solution_moduli).map(|(&v, &q)| reduce(v, q)).collect();

    // The lattice {x : x_i = 0 mod qbar_i} must lie in the kernel so that the system is
    // well posed on G_qbar ...
    for (i, &q) in sys.solution_moduli.iter().enumerate() {
        if (0..m).any(|j| reduce(zb.get(j, i) * q, d) != 0) {
            return Err(Error::InternalContractViolation(format!(
                "system is not well defined on G_qbar (unknown {i})"
            )));
        }
    }
    // ... and the kernel in Z_d^n must be exactly that lattice.
    let primes = factorize(d);
    let mut kernel = vec![0u32; primes.len()];
    let mut lattice = vec![0u32; primes.len()];
    for i in 0..n {
        let f = if i < m { snf.f.get(i, i) } else { 0 };
        let kernel_factor = if f == 0 { d } else { f };
        for (acc, e) in kernel.iter_mut().zip(divisor_exponents(&primes, kernel_factor)) {
            *acc += e;
        }
        for (acc, e) in lattice.iter_mut().zip(divisor_exponents(&primes, d / sys.solution_moduli[i])) {
            *acc += e;
        }
    }
    if kernel != lattice {
        return Err(Error::InternalContractViolation("solution in G_qbar is not unique".into()));
    }
    if !sys.is_solution(&x) {
        return Err(Error::InternalContractViolation("back-substitution failed".into()));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(sys: &MixedModulusSystem) -> Vec<Vec<i64>> {
        let qs = &sys.solution_moduli;
        let total: i64 = qs.iter().product();
        (0..total)
            .map(|mut code| {
                qs.iter()
                    .map(|&q| {
                        let v = code % q;
                        code /= q;
                        v
                    })
                    .collect::<Vec<_>>()
            })
            .filter(|x| sys.is_solution(x))
            .collect()
    }

    #[test]
    fn qudit_four_example() {
        let sys = MixedModulusSystem {
            coefficient: ResidueMatrix::from_rows(&[[0], [2]], 4).unwrap(),
            rhs: vec![0, 0],
            moduli: vec![2, 4],
            solution_moduli: vec![2],
        };
        assert_eq!(brute_force(&sys), vec![vec![0]]);
        assert_eq!(solve_mixed_modulus(&sys).unwrap(), vec![0]);
    }

    #[test]
    fn identity_system() {
        for d in [2, 5, 6, 12] {
            let y = vec![1, d - 1, 3 % d];
            let sys = MixedModulusSystem {
                coefficient: ResidueMatrix::identity(3, d),
                rhs: y.clone(),
                moduli: vec![d; 3],
                solution_moduli: vec![d; 3],
            };
            assert_eq!(solve_mixed_modulus(&sys).unwrap(), reduce_all(&y, d));
        }
    }

    fn reduce_all(v: &[i64], d: i64) -> Vec<i64> {
        v.iter().map(|&x| reduce(x, d)).collect()
    }

    #[test]
    fn inconsistent_parity() {
        let sys = MixedModulusSystem {
            coefficient: ResidueMatrix::from_rows(&[[2]], 4).unwrap(),
            rhs: vec![1],
            moduli: vec![4],
            solution_moduli: vec![4],
        };
        assert!(matches!(solve_mixed_modulus(&sys), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn non_unique_is_a_contract_violation() {
        let sys = MixedModulusSystem {
            coefficient: ResidueMatrix::from_rows(&[[2]], 4).unwrap(),
            rhs: vec![0],
            moduli: vec![4],
            solution_moduli: vec![4],
        };
        assert_eq!(brute_force(&sys).len(), 2);
        assert!(matches!(solve_mixed_modulus(&sys), Err(Error::InternalContractViolation(_))));
    }

    #[test]
    fn rejects_non_divisor_moduli() {
        let sys = MixedModulusSystem {
            coefficient: ResidueMatrix::identity(1, 6),
            rhs: vec![0],
            moduli: vec![4],
            solution_moduli: vec![6],
        };
        assert!(matches!(solve_mixed_modulus(&sys), Err(Error::InvalidParameter(_))));
    }
}
