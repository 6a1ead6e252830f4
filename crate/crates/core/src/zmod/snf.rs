use super::{ext_gcd, gcd, unit_to_divisor, ResidueMatrix};
use crate::error::{Error, Result};

/// `K * A * L = F (mod d)` with `F` diagonal in canonical Smith form.
///
/// The nonzero diagonal entries `F[0][0], ..., F[rank-1][rank-1]` are positive divisors of
/// `d`, each dividing the next; every later diagonal entry is zero, which stands for the
/// divisor `d` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub f: ResidueMatrix,
    pub k: ResidueMatrix,
    pub l: ResidueMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal of `F` with zeros replaced by `d`: the orders of the cyclic factors.
    pub fn divisors(&self) -> Vec<i64> {
        let d = self.f.modulus();
        self.f.diagonal().into_iter().map(|x| if x == 0 { d } else { x }).collect()
    }
}

/// Position in the trailing block `[t.., t..]` minimizing `gcd(entry, d)` over nonzero
/// entries, first in row-major order on ties.
fn best_pivot(a: &ResidueMatrix, t: usize) -> Option<(usize, usize)> {
    let d = a.modulus();
    let mut best: Option<(i64, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let e = a.get(i, j);
            if e == 0 {
                continue;
            }
            let g = gcd(e, d);
            if best.map_or(true, |(bg, _, _)| g < bg) {
                best = Some((g, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form over `Z_d`, computed with unimodular row and column operations that are
/// mirrored into `K` and `L`.
pub fn smith_normal_form(a: &ResidueMatrix) -> SmithDecomposition {
    let d = a.modulus();
    let (rows, cols) = (a.rows(), a.cols());
    let mut f = a.clone();
    let mut k = ResidueMatrix::identity(rows, d);
    let mut l = ResidueMatrix::identity(cols, d);
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = best_pivot(&f, t) else { break };
        f.swap_rows(t, pi);
        k.swap_rows(t, pi);
        f.swap_cols(t, pj);
        l.swap_cols(t, pj);

        loop {
            // Make the pivot a positive divisor of d.
            let u = unit_to_divisor(f.get(t, t), d);
            if u != 1 {
                f.scale_row(t, u);
                k.scale_row(t, u);
            }
            let mut settled = true;
            for i in t + 1..rows {
                let (p, e) = (f.get(t, t), f.get(i, t));
                if e == 0 {
                    continue;
                }
                if e % p == 0 {
                    f.add_row_multiple(t, i, -(e / p));
                    k.add_row_multiple(t, i, -(e / p));
                } else {
                    let (g, s, r) = ext_gcd(p, e);
                    let ops = [s, r, -(e / g), p / g];
                    f.combine_rows(t, i, ops);
                    k.combine_rows(t, i, ops);
                    settled = false;
                }
            }
            for j in t + 1..cols {
                let (p, e) = (f.get(t, t), f.get(t, j));
                if e == 0 {
                    continue;
                }
                if e % p == 0 {
                    f.add_col_multiple(t, j, -(e / p));
                    l.add_col_multiple(t, j, -(e / p));
                } else {
                    let (g, s, r) = ext_gcd(p, e);
                    let ops = [s, r, -(e / g), p / g];
                    f.combine_cols(t, j, ops);
                    l.combine_cols(t, j, ops);
                    settled = false;
                }
            }
            if !settled {
                continue;
            }
            // Row and column are clear; the pivot must also divide the trailing block.
            let p = f.get(t, t);
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| f.get(i, j) % p != 0));
            match offender {
                Some(i) => {
                    f.add_row_multiple(i, t, 1);
                    k.add_row_multiple(i, t, 1);
                }
                None => break,
            }
        }
        rank += 1;
    }

    SmithDecomposition { f, k, l, rank }
}

/// Inverse of a square matrix modulo `d`.
pub fn invert_matrix(a: &ResidueMatrix) -> Result<ResidueMatrix> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "cannot invert a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let snf = smith_normal_form(a);
    if snf.f.diagonal().iter().any(|&x| x != 1) {
        return Err(Error::NotInvertible(format!(
            "Smith form diagonal {:?} modulo {}",
            snf.f.diagonal(),
            a.modulus()
        )));
    }
    // K A L = I  =>  A^{-1} = L K
    Ok(&snf.l * &snf.k)
}
