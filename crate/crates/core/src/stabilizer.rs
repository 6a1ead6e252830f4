//! Stabilizer states described by a generator matrix `S` over `Z_d` and a phase vector `f`
//! over `Z_{2d}`: the generators are `zeta^{f_k} XZ(S_k)` for the columns `S_k`.

use std::collections::{HashMap, HashSet};

use crate::clifford::{ctuc, phase_form, quadratic_phase, CliffordOp, OddCliffordForm};
use crate::error::{Error, Result};
use crate::pauli::{p_matrix, u_matrix, PauliElement};
use crate::zmod::{
    check_qudit_dim, divisor_exponents, factorize, gcd, invert_matrix, reduce, smith_normal_form,
    solve_mixed_modulus, MixedModulusSystem, ResidueMatrix,
};

/// Group sizes up to this bound are also checked by enumerating the group.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

/// Order of the column vector `v` in `Z_d^{2n}`.
pub fn column_order(v: &[i64], d: i64) -> i64 {
    d / v.iter().fold(d, |g, &x| gcd(g, x))
}

/// `Vdiag(R^T N R)` with `N` over `Z_{2d}` and `R` over `Z_d`, on lifts.
fn vdiag_sandwich(r: &ResidueMatrix, n: &ResidueMatrix) -> Vec<i64> {
    (0..r.cols()).map(|k| quadratic_phase_general(n, &r.column(k))).collect()
}

/// `a^T N a` modulo the modulus of `N`, for a general (not necessarily triangular) `N`.
fn quadratic_phase_general(n: &ResidueMatrix, a: &[i64]) -> i64 {
    let m = n.modulus();
    let na = n.mul_vec(a);
    a.iter().zip(&na).fold(0, |acc, (x, y)| reduce(acc + x * y, m))
}

/// Generator matrix change: `S' = S R`, phases transformed accordingly.
fn change_raw(s: &ResidueMatrix, f: &[i64], r: &ResidueMatrix) -> (ResidueMatrix, Vec<i64>) {
    let d = s.modulus();
    let twice_d = 2 * d;
    let m = sus(s);
    let shifted: Vec<i64> = f.iter().zip(m.diagonal()).map(|(f, v)| f - v).collect();
    let linear = r.transpose().with_modulus(twice_d).mul_vec(&shifted);
    let quad = vdiag_sandwich(r, &phase_form(&m));
    let f_new = linear.iter().zip(&quad).map(|(a, b)| reduce(a + b, twice_d)).collect();
    (s * r, f_new)
}

/// `S^T U S` over `Z_d`.
fn sus(s: &ResidueMatrix) -> ResidueMatrix {
    let n = s.rows() / 2;
    &(&s.transpose() * &u_matrix(n, s.modulus())) * s
}

/// A generating set `zeta^{f_k} XZ(S_k)` of a stabilizer group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerGenerators {
    d: i64,
    n: usize,
    s: ResidueMatrix,
    f: Vec<i64>,
}

impl StabilizerGenerators {
    /// Checks commutation, group size `d^n` and the phase condition on a minimal generating
    /// set derived from the input. The generating set is returned as given.
    pub fn validate(s: ResidueMatrix, f: Vec<i64>) -> Result<Self> {
        let d = s.modulus();
        check_qudit_dim(d)?;
        if s.rows() % 2 != 0 || s.rows() == 0 || s.cols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "generator matrix must be 2n x m with n, m >= 1, got {}x{}",
                s.rows(),
                s.cols()
            )));
        }
        if f.len() != s.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} phases for {} generators",
                f.len(),
                s.cols()
            )));
        }
        let n = s.rows() / 2;
        let f: Vec<i64> = f.iter().map(|&x| reduce(x, 2 * d)).collect();

        let spc = &(&s.transpose() * &p_matrix(n, d)) * &s;
        for i in 0..s.cols() {
            for j in i + 1..s.cols() {
                if spc.get(i, j) != 0 {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }

        let (sm, fm) = minimize_raw(&s, &f)?;
        check_group_size(&sm, n)?;
        for k in 0..sm.cols() {
            let col = sm.column(k);
            let r = column_order(&col, d);
            let u = reduce(crate::pauli::lifted_utu(&col, &col), 2 * d);
            if reduce(r * fm[k] + r * (r - 1) % (2 * d) * u, 2 * d) != 0 {
                return Err(Error::PhaseConditionViolation { generator: k });
            }
        }
        Ok(Self { d, n, s, f })
    }

    pub(crate) fn new_unchecked(s: ResidueMatrix, f: Vec<i64>) -> Self {
        let d = s.modulus();
        let n = s.rows() / 2;
        let f = f.iter().map(|&x| reduce(x, 2 * d)).collect();
        Self { d, n, s, f }
    }

    /// `<Z_1, ..., Z_n>`, the stabilizer of `|0...0>`.
    pub fn computational_zero(n: usize, d: i64) -> Self {
        let s = ResidueMatrix::from_fn(2 * n, n, d, |i, j| (i == n + j) as i64);
        Self::new_unchecked(s, vec![0; n])
    }

    pub fn dim(&self) -> i64 {
        self.d
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn num_generators(&self) -> usize {
        self.s.cols()
    }

    pub fn matrix(&self) -> &ResidueMatrix {
        &self.s
    }

    pub fn phases(&self) -> &[i64] {
        &self.f
    }

    /// The `k`-th generator `zeta^{f_k} XZ(S_k)`.
    pub fn generator(&self, k: usize) -> PauliElement {
        PauliElement::new_unchecked(self.d, self.s.column(k), self.f[k])
    }

    /// A minimal generating set of the same group.
    pub fn minimize(&self) -> Result<Self> {
        let (s, f) = minimize_raw(&self.s, &self.f)?;
        Ok(Self::new_unchecked(s, f))
    }

    /// Generating set `S R` for an invertible `R`, with the phases that keep every element of
    /// the group unchanged.
    pub fn change_generators(&self, r: &ResidueMatrix) -> Result<Self> {
        if r.modulus() != self.d || !r.is_square() || r.rows() != self.s.cols() {
            return Err(Error::DimensionMismatch(format!(
                "generator change must be {m}x{m} modulo {}",
                self.d,
                m = self.s.cols()
            )));
        }
        invert_matrix(r)?;
        let (s, f) = change_raw(&self.s, &self.f, r);
        Ok(Self::new_unchecked(s, f))
    }

    /// Stabilizer of `Q |psi>`.
    pub fn apply_clifford(&self, q: &CliffordOp) -> Result<Self> {
        if q.dim() != self.d || q.num_qudits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operation on {} qudits of dimension {} applied to a state of {} qudits of dimension {}",
                q.num_qudits(),
                q.dim(),
                self.n,
                self.d
            )));
        }
        let twice_d = 2 * self.d;
        let c = q.matrix();
        let m = ctuc(c);
        let shifted: Vec<i64> = q.phases().iter().zip(m.diagonal()).map(|(h, v)| h - v).collect();
        let linear = self.s.transpose().with_modulus(twice_d).mul_vec(&shifted);
        let quad: Vec<i64> = (0..self.s.cols()).map(|k| quadratic_phase(&m, &self.s.column(k))).collect();
        let f = (0..self.s.cols()).map(|k| self.f[k] + linear[k] + quad[k]).collect();
        Ok(Self::new_unchecked(c * &self.s, f))
    }

    /// The normal form behind the standard-basis expansion.
    pub fn normal_form(&self) -> Result<ExpansionForm> {
        ExpansionForm::new(&self.minimize()?)
    }

    /// Standard-basis expansion with every basis label listed once.
    pub fn expand(&self) -> Result<StateExpansion> {
        self.normal_form()?.expand()
    }

    /// The expansion summed over all `t` in `Z_d^n`, labels repeated.
    pub fn expand_raw(&self) -> Result<StateExpansion> {
        self.normal_form()?.expand_raw()
    }

    /// The expansion summed over `t` in `Z_d^m` using the generator matrix directly; labels
    /// are repeated.
    pub fn expand_generic(&self) -> Result<StateExpansion> {
        let form = self.normal_form()?;
        let (d, n) = (self.d, self.n);
        let twice_d = 2 * d;
        let s1 = self.s.submatrix(0, 0, n, self.s.cols());
        let s2 = self.s.submatrix(n, 0, n, self.s.cols());
        let x_prime = form.t.mul_vec(&form.x_star);
        let m = &s1.transpose() * &s2;
        let cross = s2.transpose().with_modulus(twice_d).mul_vec(&x_prime);
        let p: Vec<i64> = (0..self.s.cols())
            .map(|k| reduce(self.f[k] - m.get(k, k) + 2 * cross[k], twice_d))
            .collect();
        let mut terms = Vec::new();
        for t in Counter::new(&vec![d; self.s.cols()]) {
            let label: Vec<i64> = s1.mul_vec(&t).iter().zip(&x_prime).map(|(a, b)| reduce(a + b, d)).collect();
            terms.push((quadratic_phase_general(&m.with_modulus(twice_d), &t) + dot(&p, &t, twice_d), label));
        }
        StateExpansion::unnormalized(d, n, terms)
    }

    pub fn to_odd_form(&self) -> Result<OddStabilizerForm> {
        if self.d % 2 == 0 {
            return Err(Error::EvenDimension(self.d));
        }
        let half = (self.d + 1) / 2;
        let b = self.f.iter().map(|&f| reduce(half * f, self.d)).collect();
        Ok(OddStabilizerForm { d: self.d, n: self.n, s: self.s.clone(), b })
    }

    pub fn from_odd_form(o: &OddStabilizerForm) -> Self {
        Self::new_unchecked(o.s.clone(), o.b.iter().map(|&b| 2 * b).collect())
    }
}

fn dot(a: &[i64], b: &[i64], m: i64) -> i64 {
    a.iter().zip(b).fold(0, |acc, (x, y)| reduce(acc + x * y, m))
}

/// Minimal generating set: `S L` from the Smith decomposition of `S`, zero columns dropped.
fn minimize_raw(s: &ResidueMatrix, f: &[i64]) -> Result<(ResidueMatrix, Vec<i64>)> {
    let snf = smith_normal_form(s);
    let (sl, fl) = change_raw(s, f, &snf.l);
    let keep: Vec<usize> = (0..sl.cols()).filter(|&k| sl.column(k).iter().any(|&x| x != 0)).collect();
    if let Some(k) = (0..sl.cols()).find(|&k| !keep.contains(&k) && fl[k] != 0) {
        // a nontrivial multiple of the identity lies in the group
        return Err(Error::PhaseConditionViolation { generator: k });
    }
    let f = keep.iter().map(|&k| fl[k]).collect();
    Ok((sl.select_columns(&keep), f))
}

fn check_group_size(s: &ResidueMatrix, n: usize) -> Result<()> {
    let d = s.modulus();
    let primes = factorize(d);
    let orders: Vec<i64> = (0..s.cols()).map(|k| column_order(&s.column(k), d)).collect();
    let mut found = vec![0u32; primes.len()];
    for &r in &orders {
        for (acc, e) in found.iter_mut().zip(divisor_exponents(&primes, r)) {
            *acc += e;
        }
    }
    let expected: Vec<u32> = primes.iter().map(|&(_, e)| e * n as u32).collect();
    let describe = |exps: &[u32]| -> String {
        let parts: Vec<String> = primes
            .iter()
            .zip(exps)
            .filter(|(_, &e)| e > 0)
            .map(|(&(p, _), &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    };
    if found != expected {
        return Err(Error::WrongGroupSize { expected: format!("{d}^{n}"), found: describe(&found) });
    }
    let product = orders.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r as u128));
    if let Some(size) = product.filter(|&p| p <= ENUMERATION_LIMIT) {
        let enumerated = enumerate_vectors(s).len() as u128;
        if enumerated != size {
            return Err(Error::InternalContractViolation(format!(
                "minimal generators span {enumerated} vectors, product of orders is {size}"
            )));
        }
    }
    Ok(())
}

/// All vectors in the span of the columns.
pub(crate) fn enumerate_vectors(s: &ResidueMatrix) -> HashSet<Vec<i64>> {
    let d = s.modulus();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let zero = vec![0; s.rows()];
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    let cols: Vec<Vec<i64>> = (0..s.cols()).map(|k| s.column(k)).collect();
    while let Some(v) = frontier.pop() {
        for c in &cols {
            let w: Vec<i64> = v.iter().zip(c).map(|(a, b)| reduce(a + b, d)).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen
}

/// Mixed-radix counter over `Z_{r_0} x ... x Z_{r_{k-1}}`, last entry fastest.
struct Counter {
    radices: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Counter {
    fn new(radices: &[i64]) -> Self {
        Self { radices: radices.to_vec(), next: Some(vec![0; radices.len()]) }
    }
}

impl Iterator for Counter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.radices[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

/// Normal form `[T^{-1} 0; 0 T^T] S R = [Q; B]` with `Q` in Smith form, together with the
/// data of the standard-basis expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionForm {
    pub d: i64,
    pub t: ResidueMatrix,
    pub r: ResidueMatrix,
    pub q: ResidueMatrix,
    pub b: ResidueMatrix,
    pub f_prime: Vec<i64>,
    /// Orders `q_1..q_n` of the solution group.
    pub q_bar: Vec<i64>,
    /// Row moduli `q_1..q_m`.
    pub q_full: Vec<i64>,
    pub y: Vec<i64>,
    /// `Qbar Bbar` over `Z_d`.
    pub m: ResidueMatrix,
    pub p: Vec<i64>,
    pub x_star: Vec<i64>,
    pub rank: usize,
}

impl ExpansionForm {
    fn new(st: &StabilizerGenerators) -> Result<Self> {
        let (d, n, m) = (st.d, st.n, st.s.cols());
        if m < n {
            return Err(Error::InternalContractViolation(format!("{m} generators for {n} qudits")));
        }
        let s1 = st.s.submatrix(0, 0, n, m);
        let s2 = st.s.submatrix(n, 0, n, m);
        let snf = smith_normal_form(&s1);
        let t = invert_matrix(&snf.k)?;
        let r = snf.l;
        let q = snf.f;
        let b = &(&t.transpose() * &s2) * &r;
        let (_, f_prime) = change_raw(&st.s, &st.f, &r);
        if !(&q.transpose() * &b).is_symmetric() {
            return Err(Error::InternalContractViolation("Q^T B is not symmetric".into()));
        }

        let q_full: Vec<i64> = (0..m).map(|k| if k < n && q.get(k, k) != 0 { q.get(k, k) } else { d }).collect();
        let q_bar = q_full[..n].to_vec();
        let mut y = Vec::with_capacity(m);
        for k in 0..m {
            let num = if k < n { (d - q_full[k]) * b.get(k, k) + f_prime[k] } else { f_prime[k] };
            if num % 2 != 0 {
                return Err(Error::InternalContractViolation(format!("odd numerator {num} for y_{}", k + 1)));
            }
            y.push(reduce(-num / 2, q_full[k]));
        }
        let system = MixedModulusSystem {
            coefficient: b.transpose(),
            rhs: y.clone(),
            moduli: q_full.clone(),
            solution_moduli: q_bar.clone(),
        };
        let x_star = solve_mixed_modulus(&system).map_err(|e| match e {
            Error::Inconsistent(msg) => Error::InternalContractViolation(format!("no offset solves the system: {msg}")),
            other => other,
        })?;

        let q_sq = q.submatrix(0, 0, n, n);
        let b_sq = b.submatrix(0, 0, n, n);
        let mm = &q_sq * &b_sq;
        let cross = b_sq.transpose().with_modulus(2 * d).mul_vec(&x_star);
        let p = (0..n).map(|k| reduce(f_prime[k] - mm.get(k, k) + 2 * cross[k], 2 * d)).collect();
        Ok(Self { d, t, r, q, b, f_prime, q_bar, q_full, y, m: mm, p, x_star, rank: snf.rank })
    }

    fn n(&self) -> usize {
        self.t.rows()
    }

    fn exponent(&self, t: &[i64]) -> i64 {
        let twice_d = 2 * self.d;
        let k = t.len();
        let m = self.m.submatrix(0, 0, k, k).with_modulus(twice_d);
        reduce(quadratic_phase_general(&m, t) + dot(&self.p[..k], t, twice_d), twice_d)
    }

    /// Deduplicated expansion over `t` in `Z_{d/q_1} x ... x Z_{d/q_r}`.
    pub fn expand(&self) -> Result<StateExpansion> {
        let (d, n, r) = (self.d, self.n(), self.rank);
        let radices: Vec<i64> = self.q_bar[..r].iter().map(|&q| d / q).collect();
        let mut terms = Vec::new();
        for t in Counter::new(&radices) {
            let mut z = self.x_star.clone();
            for i in 0..r {
                z[i] = reduce(self.q.get(i, i) * t[i] + z[i], d);
            }
            terms.push((self.exponent(&t), self.t.mul_vec(&z)));
        }
        let count = terms.len();
        let expansion = StateExpansion { d, n, terms, normalization: (1.0 / count as f64).sqrt() };
        let distinct: HashSet<&Vec<i64>> = expansion.terms.iter().map(|(_, l)| l).collect();
        if distinct.len() != count {
            return Err(Error::InternalContractViolation("deduplicated expansion repeats a label".into()));
        }
        Ok(expansion.sorted())
    }

    /// Expansion over all `t` in `Z_d^n`, labels repeated.
    pub fn expand_raw(&self) -> Result<StateExpansion> {
        let (d, n) = (self.d, self.n());
        let q_sq = self.q.submatrix(0, 0, n, n);
        let mut terms = Vec::new();
        for t in Counter::new(&vec![d; n]) {
            let z: Vec<i64> = q_sq.mul_vec(&t).iter().zip(&self.x_star).map(|(a, b)| reduce(a + b, d)).collect();
            terms.push((self.exponent(&t), self.t.mul_vec(&z)));
        }
        StateExpansion::unnormalized(d, n, terms)
    }
}

/// `normalization * sum_k zeta^{e_k} |label_k>`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateExpansion {
    pub d: i64,
    pub n: usize,
    /// `(exponent of zeta, basis label)` pairs.
    pub terms: Vec<(i64, Vec<i64>)>,
    pub normalization: f64,
}

impl StateExpansion {
    /// Wraps a sum with repeated labels; the normalization makes the summed vector a unit
    /// vector provided repeated labels carry equal phases.
    fn unnormalized(d: i64, n: usize, terms: Vec<(i64, Vec<i64>)>) -> Result<Self> {
        let terms: Vec<(i64, Vec<i64>)> = terms.into_iter().map(|(e, l)| (reduce(e, 2 * d), l)).collect();
        let mut mult: HashMap<&Vec<i64>, usize> = HashMap::new();
        for (_, l) in &terms {
            *mult.entry(l).or_default() += 1;
        }
        let distinct = mult.len() as f64;
        let per_label = terms.len() as f64 / distinct;
        let normalization = 1.0 / (per_label * distinct.sqrt());
        Ok(Self { d, n, terms, normalization })
    }

    fn sorted(mut self) -> Self {
        self.terms.sort_by(|a, b| a.1.cmp(&b.1));
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges equal labels, which must carry equal phases, and renormalizes; terms come out
    /// sorted by label.
    pub fn collapse(&self) -> Result<StateExpansion> {
        let mut phase: HashMap<&Vec<i64>, i64> = HashMap::new();
        for (e, l) in &self.terms {
            match phase.get(l) {
                Some(&prev) if prev != *e => return Err(Error::LabelPhaseMismatch { label: l.clone() }),
                Some(_) => {}
                None => {
                    phase.insert(l, *e);
                }
            }
        }
        let terms: Vec<(i64, Vec<i64>)> = phase.into_iter().map(|(l, e)| (e, l.clone())).collect();
        let normalization = (1.0 / terms.len() as f64).sqrt();
        Ok(StateExpansion { d: self.d, n: self.n, terms, normalization }.sorted())
    }
}

/// Stabilizer generators for odd `d` with phases `b = f / 2` over `Z_d`, the exponents of
/// `omega`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OddStabilizerForm {
    d: i64,
    n: usize,
    s: ResidueMatrix,
    b: Vec<i64>,
}

impl OddStabilizerForm {
    pub fn matrix(&self) -> &ResidueMatrix {
        &self.s
    }

    pub fn phases(&self) -> &[i64] {
        &self.b
    }

    fn half(&self) -> i64 {
        (self.d + 1) / 2
    }

    pub fn change_generators(&self, r: &ResidueMatrix) -> Result<Self> {
        if r.modulus() != self.d || !r.is_square() || r.rows() != self.s.cols() {
            return Err(Error::DimensionMismatch("generator change of the wrong shape".into()));
        }
        invert_matrix(r)?;
        Ok(self.change_unchecked(r))
    }

    fn change_unchecked(&self, r: &ResidueMatrix) -> Self {
        let d = self.d;
        let m = sus(&self.s);
        let shifted: Vec<i64> = self.b.iter().zip(m.diagonal()).map(|(b, v)| b - self.half() * v).collect();
        let linear = r.transpose().mul_vec(&shifted);
        let sandwich = (&(&r.transpose() * &m) * r).diagonal();
        let b = (0..r.cols()).map(|k| reduce(linear[k] + self.half() * sandwich[k], d)).collect();
        Self { d, n: self.n, s: &self.s * r, b }
    }

    pub fn apply_clifford(&self, q: &OddCliffordForm) -> Result<Self> {
        if q.dim() != self.d || q.matrix().rows() != 2 * self.n {
            return Err(Error::DimensionMismatch("odd-form operation of the wrong shape".into()));
        }
        let d = self.d;
        let c = q.matrix();
        let m = ctuc(c);
        let u = u_matrix(self.n, d);
        let shifted: Vec<i64> = q.phases().iter().zip(m.diagonal()).map(|(g, v)| g - self.half() * v).collect();
        let linear = self.s.transpose().mul_vec(&shifted);
        let sandwich = (&(&self.s.transpose() * &(&m - &u)) * &self.s).diagonal();
        let b = (0..self.s.cols())
            .map(|k| reduce(self.b[k] + linear[k] + self.half() * sandwich[k], d))
            .collect();
        Ok(Self { d, n: self.n, s: c * &self.s, b })
    }

    /// Deduplicated expansion computed entirely with `omega` exponents; exponents are reported
    /// as powers of `zeta` (doubled) so the result compares directly with
    /// [`StabilizerGenerators::expand`].
    pub fn expand(&self) -> Result<StateExpansion> {
        let (d, n) = (self.d, self.n);
        let (s_min, f_min) = minimize_raw(&self.s, &self.b.iter().map(|&b| 2 * b).collect::<Vec<_>>())?;
        let half = self.half();
        let minimal = Self { d, n, b: f_min.iter().map(|&f| reduce(half * f, d)).collect(), s: s_min };
        let m_cols = minimal.s.cols();
        let s1 = minimal.s.submatrix(0, 0, n, m_cols);
        let s2 = minimal.s.submatrix(n, 0, n, m_cols);
        let snf = smith_normal_form(&s1);
        let t = invert_matrix(&snf.k)?;
        let b_mat = &(&t.transpose() * &s2) * &snf.l;
        let b_prime = minimal.change_unchecked(&snf.l).b;
        let q = &snf.f;
        let q_full: Vec<i64> = (0..m_cols).map(|k| if k < n && q.get(k, k) != 0 { q.get(k, k) } else { d }).collect();
        let system = MixedModulusSystem {
            coefficient: b_mat.transpose(),
            rhs: (0..m_cols).map(|k| reduce(-b_prime[k], q_full[k])).collect(),
            moduli: q_full.clone(),
            solution_moduli: q_full[..n].to_vec(),
        };
        let x_star = solve_mixed_modulus(&system)?;
        let q_sq = q.submatrix(0, 0, n, n);
        let b_sq = b_mat.submatrix(0, 0, n, n);
        let mm = (&q_sq * &b_sq).scale(half);
        let cross = b_sq.transpose().mul_vec(&x_star);
        let p: Vec<i64> = (0..n).map(|k| reduce(b_prime[k] - mm.get(k, k) + cross[k], d)).collect();

        let r = snf.rank;
        let radices: Vec<i64> = q_full[..r].iter().map(|&qk| d / qk).collect();
        let mut terms = Vec::new();
        for tv in Counter::new(&radices) {
            let m_r = mm.submatrix(0, 0, r, r);
            let e = reduce(dot(&tv, &m_r.mul_vec(&tv), d) + dot(&p[..r], &tv, d), d);
            let mut z = x_star.clone();
            for i in 0..r {
                z[i] = reduce(q.get(i, i) * tv[i] + z[i], d);
            }
            terms.push((2 * e, t.mul_vec(&z)));
        }
        let count = terms.len();
        Ok(StateExpansion { d, n, terms, normalization: (1.0 / count as f64).sqrt() }.sorted())
    }
}
