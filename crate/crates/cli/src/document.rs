//! The JSON document format: `schema_version`, `kind`, `d`, `n` and a kind-specific `payload`.
//! Matrices are row-major arrays of rows; every entry must already be a canonical residue.

use qudit_stabilizer::oracle::{Complex64, DenseOperator, DenseState};
use qudit_stabilizer::stabilizer::ExpansionForm;
use qudit_stabilizer::zmod::{ResidueMatrix, SmithDecomposition};
use qudit_stabilizer::{
    CliffordOp, ElementaryGate, GateSequence, OddCliffordForm, PauliElement, StabilizerGenerators, StateExpansion,
};
use serde::Deserialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// Malformed input: bad JSON, missing fields, wrong shapes or non-canonical entries.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(pub String);

type Parsed<T> = std::result::Result<T, ParseError>;

fn fail<T>(msg: impl Into<String>) -> Parsed<T> {
    Err(ParseError(msg.into()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    schema_version: String,
    kind: String,
    d: i64,
    #[serde(default)]
    n: Option<usize>,
    payload: Value,
}

/// A parsed document. `n` is absent for plain matrices.
#[derive(Debug)]
pub struct Document {
    pub kind: String,
    pub d: i64,
    pub n: Option<usize>,
    payload: Value,
}

impl Document {
    pub fn parse(text: &str) -> Parsed<Self> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| ParseError(format!("invalid document: {e}")))?;
        if raw.schema_version != SCHEMA_VERSION {
            return fail(format!("unsupported schema_version {:?}", raw.schema_version));
        }
        if raw.d < 2 {
            return fail(format!("d must be at least 2, got {}", raw.d));
        }
        let needs_n = raw.kind != "matrix";
        match raw.n {
            Some(0) => return fail("n must be positive"),
            None if needs_n => return fail(format!("{} documents need n", raw.kind)),
            Some(_) if !needs_n => return fail("matrix documents carry no n"),
            _ => {}
        }
        Ok(Self { kind: raw.kind, d: raw.d, n: raw.n, payload: raw.payload })
    }

    fn qudits(&self) -> usize {
        self.n.expect("checked at parse")
    }

    fn expect_kind(&self, kind: &str) -> Parsed<()> {
        if self.kind != kind {
            return fail(format!("expected a {kind} document, got {}", self.kind));
        }
        Ok(())
    }

    fn payload<T: for<'de> Deserialize<'de>>(&self) -> Parsed<T> {
        T::deserialize(&self.payload).map_err(|e| ParseError(format!("invalid {} payload: {e}", self.kind)))
    }

    pub fn pauli(&self) -> Parsed<PauliElement> {
        self.expect_kind("pauli")?;
        let p: PauliPayload = self.payload()?;
        let (d, n) = (self.d, self.qudits());
        residues("a", &p.a, 2 * n, d)?;
        residues("delta", &[p.delta], 1, 2 * d)?;
        Ok(PauliElement::new(d, p.a, p.delta).expect("checked shape"))
    }

    /// Raw clifford data: the matrix and either `h` over `Z_2d` or, in odd form, `g` over `Z_d`.
    pub fn clifford_parts(&self, odd: bool) -> Parsed<(ResidueMatrix, Vec<i64>)> {
        self.expect_kind("clifford")?;
        let p: CliffordPayload = self.payload()?;
        let (d, n) = (self.d, self.qudits());
        let c = matrix("c", &p.c, 2 * n, 2 * n, d)?;
        let phases = match (odd, p.h, p.g) {
            (false, Some(h), None) => {
                residues("h", &h, 2 * n, 2 * d)?;
                h
            }
            (true, None, Some(g)) => {
                residues("g", &g, 2 * n, d)?;
                g
            }
            (false, _, _) => return fail("clifford payload needs h (and no g) unless --odd-form is given"),
            (true, _, _) => return fail("with --odd-form a clifford payload needs g (and no h)"),
        };
        Ok((c, phases))
    }

    pub fn stabilizer_parts(&self, odd: bool) -> Parsed<(ResidueMatrix, Vec<i64>)> {
        self.expect_kind("stabilizer")?;
        let p: StabilizerPayload = self.payload()?;
        let (d, n) = (self.d, self.qudits());
        let cols = p.s.first().map_or(0, Vec::len);
        if cols == 0 {
            return fail("s needs at least one column");
        }
        let s = matrix("s", &p.s, 2 * n, cols, d)?;
        let phases = match (odd, p.f, p.b) {
            (false, Some(f), None) => {
                residues("f", &f, cols, 2 * d)?;
                f
            }
            (true, None, Some(b)) => {
                residues("b", &b, cols, d)?;
                b
            }
            (false, _, _) => return fail("stabilizer payload needs f (and no b) unless --odd-form is given"),
            (true, _, _) => return fail("with --odd-form a stabilizer payload needs b (and no f)"),
        };
        Ok((s, phases))
    }

    pub fn gate_sequence(&self) -> Parsed<GateSequence> {
        self.expect_kind("gate_sequence")?;
        let p: SequencePayload = self.payload()?;
        let gates = p.gates.into_iter().map(GateJson::into_gate).collect();
        Ok(GateSequence { d: self.d, n: self.qudits(), gates })
    }

    pub fn expansion(&self) -> Parsed<StateExpansion> {
        self.expect_kind("expansion")?;
        let p: ExpansionPayload = self.payload()?;
        let (d, n) = (self.d, self.qudits());
        if p.labels.len() != p.exponents.len() {
            return fail(format!("{} labels but {} exponents", p.labels.len(), p.exponents.len()));
        }
        for label in &p.labels {
            residues("label", label, n, d)?;
        }
        residues("exponents", &p.exponents, p.exponents.len(), 2 * d)?;
        if !p.normalization.is_finite() || p.normalization <= 0.0 {
            return fail("normalization must be a positive number");
        }
        Ok(StateExpansion {
            d,
            n,
            terms: p.exponents.into_iter().zip(p.labels).collect(),
            normalization: p.normalization,
        })
    }

    pub fn matrix(&self) -> Parsed<ResidueMatrix> {
        self.expect_kind("matrix")?;
        let p: MatrixPayload = self.payload()?;
        let cols = p.a.first().map_or(0, Vec::len);
        if p.a.is_empty() || cols == 0 {
            return fail("matrix must have at least one row and one column");
        }
        matrix("a", &p.a, p.a.len(), cols, self.d)
    }
}

fn residues(field: &str, v: &[i64], len: usize, modulus: i64) -> Parsed<()> {
    if v.len() != len {
        return fail(format!("{field} has length {}, expected {len}", v.len()));
    }
    if let Some(x) = v.iter().find(|&&x| !(0..modulus).contains(&x)) {
        return fail(format!("{field} entry {x} is not a canonical residue modulo {modulus}"));
    }
    Ok(())
}

fn matrix(field: &str, rows: &[Vec<i64>], nrows: usize, ncols: usize, d: i64) -> Parsed<ResidueMatrix> {
    if rows.len() != nrows {
        return fail(format!("{field} has {} rows, expected {nrows}", rows.len()));
    }
    for row in rows {
        residues(field, row, ncols, d)?;
    }
    ResidueMatrix::from_rows(rows, d).map_err(|e| ParseError(format!("{field}: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PauliPayload {
    a: Vec<i64>,
    delta: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CliffordPayload {
    c: Vec<Vec<i64>>,
    h: Option<Vec<i64>>,
    g: Option<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StabilizerPayload {
    s: Vec<Vec<i64>>,
    f: Option<Vec<i64>>,
    b: Option<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequencePayload {
    gates: Vec<GateJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpansionPayload {
    labels: Vec<Vec<i64>>,
    exponents: Vec<i64>,
    normalization: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixPayload {
    a: Vec<Vec<i64>>,
}

/// Gates as tagged objects; qudits are numbered from 1.
#[derive(Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case", deny_unknown_fields)]
enum GateJson {
    Swap { qudits: [usize; 2] },
    Scale { qudit: usize, factor: i64 },
    Add { control: usize, target: usize, factor: i64 },
    Fourier { qudit: usize },
    FourierInverse { qudit: usize },
    Phase { qudit: usize, power: i64 },
    Pauli { a: Vec<i64> },
}

impl GateJson {
    fn into_gate(self) -> ElementaryGate {
        match self {
            GateJson::Swap { qudits: [i, j] } => ElementaryGate::QuditSwap(i, j),
            GateJson::Scale { qudit, factor } => ElementaryGate::ScaleRow(qudit, factor),
            GateJson::Add { control, target, factor } => ElementaryGate::AddRow(control, target, factor),
            GateJson::Fourier { qudit } => ElementaryGate::Fourier(qudit),
            GateJson::FourierInverse { qudit } => ElementaryGate::FourierInverse(qudit),
            GateJson::Phase { qudit, power } => ElementaryGate::PhasePower(qudit, power),
            GateJson::Pauli { a } => ElementaryGate::PauliCorrection(a),
        }
    }
}

fn gate_json(g: &ElementaryGate) -> Value {
    match g {
        ElementaryGate::QuditSwap(i, j) => json!({"gate": "swap", "qudits": [i, j]}),
        ElementaryGate::ScaleRow(i, r) => json!({"gate": "scale", "qudit": i, "factor": r}),
        ElementaryGate::AddRow(i, j, f) => json!({"gate": "add", "control": i, "target": j, "factor": f}),
        ElementaryGate::Fourier(i) => json!({"gate": "fourier", "qudit": i}),
        ElementaryGate::FourierInverse(i) => json!({"gate": "fourier_inverse", "qudit": i}),
        ElementaryGate::PhasePower(i, p) => json!({"gate": "phase", "qudit": i, "power": p}),
        ElementaryGate::PauliCorrection(a) => json!({"gate": "pauli", "a": a}),
    }
}

fn envelope(kind: &str, d: i64, n: Option<usize>, payload: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("kind".into(), json!(kind));
    map.insert("d".into(), json!(d));
    if let Some(n) = n {
        map.insert("n".into(), json!(n));
    }
    map.insert("payload".into(), payload);
    Value::Object(map)
}

fn rows(m: &ResidueMatrix) -> Value {
    json!(m.to_rows())
}

pub fn emit_pauli(x: &PauliElement) -> Value {
    envelope("pauli", x.dim(), Some(x.num_qudits()), json!({"a": x.vector(), "delta": x.phase()}))
}

pub fn emit_clifford(q: &CliffordOp) -> Value {
    envelope("clifford", q.dim(), Some(q.num_qudits()), json!({"c": rows(q.matrix()), "h": q.phases()}))
}

pub fn emit_odd_clifford(q: &OddCliffordForm) -> Value {
    let n = q.matrix().rows() / 2;
    envelope("clifford", q.dim(), Some(n), json!({"c": rows(q.matrix()), "g": q.phases()}))
}

pub fn emit_stabilizer(st: &StabilizerGenerators, odd: bool) -> Value {
    let payload = if odd {
        let o = st.to_odd_form().expect("odd dimension checked by the caller");
        json!({"s": rows(o.matrix()), "b": o.phases()})
    } else {
        json!({"s": rows(st.matrix()), "f": st.phases()})
    };
    envelope("stabilizer", st.dim(), Some(st.num_qudits()), payload)
}

pub fn emit_sequence(seq: &GateSequence) -> Value {
    let gates: Vec<Value> = seq.gates.iter().map(gate_json).collect();
    envelope("gate_sequence", seq.d, Some(seq.n), json!({"gates": gates}))
}

pub fn emit_expansion(e: &StateExpansion) -> Value {
    let labels: Vec<&Vec<i64>> = e.terms.iter().map(|(_, l)| l).collect();
    let exponents: Vec<i64> = e.terms.iter().map(|(x, _)| *x).collect();
    envelope(
        "expansion",
        e.d,
        Some(e.n),
        json!({"labels": labels, "exponents": exponents, "normalization": e.normalization}),
    )
}

pub fn emit_smith(snf: &SmithDecomposition) -> Value {
    envelope(
        "smith",
        snf.f.modulus(),
        None,
        json!({"f": rows(&snf.f), "k": rows(&snf.k), "l": rows(&snf.l), "rank": snf.rank}),
    )
}

pub fn emit_normal_form(minimal: &StabilizerGenerators, form: &ExpansionForm) -> Value {
    let payload = json!({
        "s": rows(minimal.matrix()),
        "f": minimal.phases(),
        "t": rows(&form.t),
        "r": rows(&form.r),
        "q": rows(&form.q),
        "b": rows(&form.b),
        "f_prime": form.f_prime,
        "q_bar": form.q_bar,
        "y": form.y,
        "m": rows(&form.m),
        "p": form.p,
        "x_star": form.x_star,
        "rank": form.rank,
    });
    envelope("normal_form", minimal.dim(), Some(minimal.num_qudits()), payload)
}

/// Magnitudes below this are printed as zero.
const SNAP: f64 = 1e-12;

fn snap(x: f64) -> f64 {
    if x.abs() < SNAP {
        0.0
    } else {
        x
    }
}

pub fn emit_dense_operator(u: &DenseOperator, d: i64, n: usize) -> Value {
    let dim = u.dim();
    let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..dim).map(|i| (0..dim).map(|j| snap(f(&u.get(i, j)))).collect()).collect()
    };
    envelope(
        "dense_operator",
        d,
        Some(n),
        json!({"dim": dim, "real": part(|c| c.re), "imag": part(|c| c.im)}),
    )
}

pub fn emit_dense_state(psi: &DenseState, d: i64, n: usize) -> Value {
    let real: Vec<f64> = psi.amplitudes().iter().map(|c| snap(c.re)).collect();
    let imag: Vec<f64> = psi.amplitudes().iter().map(|c| snap(c.im)).collect();
    envelope(
        "dense_state",
        d,
        Some(n),
        json!({"dim": psi.dim(), "real": real, "imag": imag, "norm": psi.norm()}),
    )
}
