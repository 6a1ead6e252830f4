//! Random test objects: gates, gate sequences, Clifford operations, invertible matrices and
//! stabilizer states.

use rand::Rng;

use crate::clifford::{ctuc, CliffordOp};
use crate::decomp::{ElementaryGate, GateSequence};
use crate::pauli::PauliElement;
use crate::stabilizer::StabilizerGenerators;
use crate::zmod::{divisors, factorize, gcd, reduce, ResidueMatrix};

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, d: i64) -> i64 {
    loop {
        let r = rng.gen_range(1..d.max(2));
        if gcd(r, d) == 1 {
            return r % d;
        }
    }
}

fn two_distinct<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (usize, usize) {
    let i = rng.gen_range(1..=n);
    let j = 1 + (i - 1 + rng.gen_range(1..n)) % n;
    (i, j)
}

/// A uniformly chosen gate kind with uniform parameters; Pauli corrections are included.
pub fn random_gate<R: Rng + ?Sized>(rng: &mut R, n: usize, d: i64) -> ElementaryGate {
    let kinds = if n >= 2 { 7 } else { 5 };
    let i = rng.gen_range(1..=n);
    match rng.gen_range(0..kinds) {
        0 => ElementaryGate::ScaleRow(i, random_unit(rng, d)),
        1 => ElementaryGate::Fourier(i),
        2 => ElementaryGate::FourierInverse(i),
        3 => ElementaryGate::PhasePower(i, rng.gen_range(0..d)),
        4 => ElementaryGate::PauliCorrection((0..2 * n).map(|_| rng.gen_range(0..d)).collect()),
        5 => {
            let (i, j) = two_distinct(rng, n);
            ElementaryGate::QuditSwap(i, j)
        }
        _ => {
            let (i, j) = two_distinct(rng, n);
            ElementaryGate::AddRow(i, j, rng.gen_range(0..d))
        }
    }
}

pub fn random_sequence<R: Rng + ?Sized>(rng: &mut R, n: usize, d: i64, len: usize) -> GateSequence {
    GateSequence { d, n, gates: (0..len).map(|_| random_gate(rng, n, d)).collect() }
}

/// Default length of the gate sequences behind [`random_clifford`].
pub fn mixing_length(n: usize) -> usize {
    8 * n * n + 8
}

/// The fold of a random gate sequence of length [`mixing_length`].
pub fn random_clifford<R: Rng + ?Sized>(rng: &mut R, n: usize, d: i64) -> CliffordOp {
    random_sequence(rng, n, d, mixing_length(n)).fold().expect("valid gates")
}

/// Random invertible matrix as a product of elementary row operations.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, size: usize, d: i64) -> ResidueMatrix {
    let mut m = ResidueMatrix::identity(size, d);
    for _ in 0..4 * size * size + 4 {
        let i = rng.gen_range(0..size);
        match rng.gen_range(0..3) {
            0 => m.scale_row(i, random_unit(rng, d)),
            1 if size > 1 => {
                let j = (i + rng.gen_range(1..size)) % size;
                m.add_row_multiple(i, j, rng.gen_range(0..d));
            }
            _ if size > 1 => {
                let j = (i + rng.gen_range(1..size)) % size;
                m.swap_rows(i, j);
            }
            _ => {}
        }
    }
    m
}

/// A random stabilizer state with `extra` redundant generators appended.
///
/// Each qudit starts in the state stabilized by `<X^a, Z^{d/a}>` for a random divisor `a`
/// (a single generator when `a` is `1` or `d`). A random Pauli and a random Clifford are
/// applied, the generating set is mixed by a random invertible matrix, and the redundant
/// generators are products of existing ones.
pub fn random_stabilizer<R: Rng + ?Sized>(rng: &mut R, n: usize, d: i64, extra: usize) -> StabilizerGenerators {
    let divs = divisors(d);
    let mut columns: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let a = divs[rng.gen_range(0..divs.len())];
        if a != d {
            let mut x = vec![0; 2 * n];
            x[i] = a;
            columns.push(x);
        }
        if a != 1 {
            let mut z = vec![0; 2 * n];
            z[n + i] = d / a;
            columns.push(z);
        }
    }
    let m = columns.len();
    let s = ResidueMatrix::from_fn(2 * n, m, d, |i, j| columns[j][i]);
    let seed = StabilizerGenerators::validate(s, vec![0; m]).expect("product state");
    let pauli = PauliElement::new(d, (0..2 * n).map(|_| rng.gen_range(0..d)).collect(), 0).expect("shape");
    let q = random_clifford(rng, n, d).compose(&CliffordOp::from_pauli(&pauli)).expect("same shape");
    let mixed = seed
        .apply_clifford(&q)
        .and_then(|st| st.change_generators(&random_invertible(rng, m, d)))
        .expect("valid transformations");
    if extra == 0 {
        return mixed;
    }
    let mut cols: Vec<Vec<i64>> = (0..m).map(|k| mixed.matrix().column(k)).collect();
    let mut phases = mixed.phases().to_vec();
    for _ in 0..extra {
        let mut acc = PauliElement::identity(d, n);
        for k in 0..m {
            let g = mixed.generator(k).pow(rng.gen_range(0..d) as u64);
            acc = acc.multiply(&g).expect("same shape");
        }
        let at = rng.gen_range(0..=cols.len());
        cols.insert(at, acc.vector().to_vec());
        phases.insert(at, acc.phase());
    }
    let s = ResidueMatrix::from_fn(2 * n, cols.len(), d, |i, j| cols[j][i]);
    StabilizerGenerators::validate(s, phases).expect("products of stabilizers")
}

/// Splits `d` into coprime factors `a, b > 1`, if `d` has two distinct prime factors.
fn coprime_split(d: i64) -> Option<(i64, i64)> {
    let primes = factorize(d);
    if primes.len() < 2 {
        return None;
    }
    let (p, e) = primes[0];
    let a = p.pow(e);
    Some((a, d / a))
}

/// A valid Clifford whose first column has no unit entry. Only possible when `d` has at
/// least two distinct prime factors; returns `None` otherwise.
pub fn adversarial_clifford<R: Rng + ?Sized>(rng: &mut R, n: usize, d: i64) -> Option<CliffordOp> {
    let (a, b) = coprime_split(d)?;
    let len = mixing_length(n);
    // Over Z_a the first column stays on qudit 1's X row or spreads over a qudit set
    // containing qudit 1; over Z_b it is moved onto rows disjoint from those.
    let (ga, gb) = if n == 1 {
        let ga = vec![ElementaryGate::ScaleRow(1, random_unit(rng, a))];
        let gb = vec![ElementaryGate::ScaleRow(1, random_unit(rng, b)), ElementaryGate::Fourier(1)];
        (ga, gb)
    } else {
        let split = rng.gen_range(1..n);
        let on = |lo: usize, hi: usize, m: i64, rng: &mut R| -> Vec<ElementaryGate> {
            let k = hi - lo + 1;
            random_sequence(rng, k, m, len)
                .gates
                .into_iter()
                .filter(|g| !matches!(g, ElementaryGate::PauliCorrection(_)))
                .map(|g| shift_gate(g, lo - 1))
                .collect()
        };
        let ga = on(1, split, a, rng);
        let mut gb = vec![ElementaryGate::QuditSwap(1, split + 1)];
        gb.extend(on(split + 1, n, b, rng));
        (ga, gb)
    };
    let ca = GateSequence { d: a, n, gates: ga }.fold().ok()?;
    let cb = GateSequence { d: b, n, gates: gb }.fold().ok()?;
    let c = crt_matrix(ca.matrix(), cb.matrix(), d);
    let diag = ctuc(&c).diagonal();
    let h: Vec<i64> = diag.iter().map(|&v| reduce((d - 1) * v, 2) + 2 * rng.gen_range(0..d)).collect();
    let glued = CliffordOp::validate(c, h).ok()?;
    if n == 1 {
        return Some(glued);
    }
    // Mix the remaining qudits without touching the first column.
    let tail = random_sequence(rng, n - 1, d, len);
    let gates = tail
        .gates
        .into_iter()
        .filter(|g| !matches!(g, ElementaryGate::PauliCorrection(_)))
        .map(|g| shift_gate(g, 1))
        .collect();
    let rest = GateSequence { d, n, gates }.fold().ok()?;
    glued.compose(&rest).ok()
}

fn shift_gate(g: ElementaryGate, by: usize) -> ElementaryGate {
    use ElementaryGate::*;
    match g {
        QuditSwap(i, j) => QuditSwap(i + by, j + by),
        ScaleRow(i, r) => ScaleRow(i + by, r),
        AddRow(i, j, g) => AddRow(i + by, j + by, g),
        Fourier(i) => Fourier(i + by),
        FourierInverse(i) => FourierInverse(i + by),
        PhasePower(i, g) => PhasePower(i + by, g),
        PauliCorrection(_) => unreachable!("Pauli corrections are filtered out before shifting"),
    }
}

/// Entrywise CRT of matrices over `Z_a` and `Z_b` with `ab = d` coprime.
fn crt_matrix(x: &ResidueMatrix, y: &ResidueMatrix, d: i64) -> ResidueMatrix {
    let (a, b) = (x.modulus(), y.modulus());
    // ea = 1 mod a, 0 mod b; eb = 0 mod a, 1 mod b
    let ea = (0..d).find(|&e| e % a == 1 % a && e % b == 0).expect("coprime");
    let eb = reduce(1 - ea, d);
    ResidueMatrix::from_fn(x.rows(), x.cols(), d, |i, j| ea * x.get(i, j) + eb * y.get(i, j))
}
