//! `qudit`: command-line access to qudit Pauli, Clifford and stabilizer computations over JSON
//! documents.

mod document;
mod json;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qudit_stabilizer::oracle::{self, DEFAULT_CAP};
use qudit_stabilizer::zmod::smith_normal_form;
use qudit_stabilizer::{
    decompose, CliffordOp, Error, GateSequence, OddCliffordForm, PauliElement, StabilizerGenerators,
};
use serde_json::{json, Value};

use document::{Document, ParseError};

const EXAMPLES: &str = "\
Examples:
  qudit validate clifford.json
  qudit compose outer.json inner.json
  qudit invert clifford.json
  qudit conjugate clifford.json pauli.json
  qudit decompose clifford.json
  qudit fold sequence.json
  qudit canonicalize stabilizer.json
  qudit expand stabilizer.json --raw
  qudit simulate pauli.json --force-cap 8192
  qudit snf matrix.json
  qudit invert --odd-form clifford_odd.json

Exit codes: 0 success, 2 parse error, 3 domain error, 4 dimension cap exceeded.
Errors are written to stderr as JSON.";

#[derive(Parser)]
#[command(name = "qudit", version, about = "Qudit Pauli, Clifford and stabilizer computations over JSON documents")]
#[command(after_help = EXAMPLES)]
struct Cli {
    /// Read and write clifford phases as `g` and stabilizer phases as `b` (odd d only)
    #[arg(long, global = true)]
    odd_form: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a pauli, clifford or stabilizer document and print it back canonically
    #[command(after_help = "Example: qudit validate clifford.json")]
    Validate { file: PathBuf },
    /// Clifford `outer` applied after `inner`
    #[command(after_help = "Example: qudit compose outer.json inner.json")]
    Compose { outer: PathBuf, inner: PathBuf },
    /// Inverse of a clifford
    #[command(after_help = "Example: qudit invert clifford.json")]
    Invert { file: PathBuf },
    /// Image of a pauli under conjugation by a clifford
    #[command(after_help = "Example: qudit conjugate clifford.json pauli.json")]
    Conjugate { clifford: PathBuf, pauli: PathBuf },
    /// Elementary gate sequence of a clifford
    #[command(after_help = "Example: qudit decompose clifford.json")]
    Decompose { file: PathBuf },
    /// Clifford of a gate sequence
    #[command(after_help = "Example: qudit fold sequence.json")]
    Fold { file: PathBuf },
    /// Minimal generators of a stabilizer state together with its normal form
    #[command(after_help = "Example: qudit canonicalize stabilizer.json")]
    Canonicalize { file: PathBuf },
    /// Standard-basis expansion of a stabilizer state
    #[command(after_help = "Example: qudit expand stabilizer.json --generic")]
    Expand {
        file: PathBuf,
        /// Sum over all of Z_d^n, labels repeated
        #[arg(long, conflicts_with = "generic")]
        raw: bool,
        /// Sum over Z_d^m using the generators as given, labels repeated
        #[arg(long)]
        generic: bool,
    },
    /// Dense matrix of a pauli, clifford or gate sequence, or dense vector of a stabilizer
    /// state or expansion
    #[command(after_help = "Example: qudit simulate pauli.json --force-cap 8192")]
    Simulate {
        file: PathBuf,
        /// Largest Hilbert-space dimension to build
        #[arg(long, value_name = "N")]
        force_cap: Option<usize>,
    },
    /// Smith normal form of a matrix document
    #[command(after_help = "Example: qudit snf matrix.json")]
    Snf { file: PathBuf },
}

enum Failure {
    Parse(String),
    Domain(Error),
    Cap(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DimensionCap { .. } => Failure::Cap(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Cap(_) => 4,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Parse(msg) => json!({"error": "ParseError", "message": msg}),
            Failure::Domain(e) => json!({"error": "DomainError", "name": e.name(), "message": e.to_string()}),
            Failure::Cap(msg) => json!({"error": "CapExceeded", "message": msg}),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn load(path: &Path) -> Outcome<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
    Ok(Document::parse(&text)?)
}

fn require_odd(d: i64, odd: bool) -> Outcome<()> {
    if odd && d % 2 == 0 {
        return Err(Error::EvenDimension(d).into());
    }
    Ok(())
}

fn clifford(doc: &Document, odd: bool) -> Outcome<CliffordOp> {
    require_odd(doc.d, odd)?;
    let (c, phases) = doc.clifford_parts(odd)?;
    if odd {
        Ok(CliffordOp::from_odd_form(&OddCliffordForm::new(c, phases)?))
    } else {
        Ok(CliffordOp::validate(c, phases)?)
    }
}

fn odd_clifford(doc: &Document) -> Outcome<OddCliffordForm> {
    Ok(clifford(doc, true)?.to_odd_form()?)
}

fn stabilizer(doc: &Document, odd: bool) -> Outcome<StabilizerGenerators> {
    require_odd(doc.d, odd)?;
    let (s, phases) = doc.stabilizer_parts(odd)?;
    let f = if odd { phases.iter().map(|&b| 2 * b).collect() } else { phases };
    Ok(StabilizerGenerators::validate(s, f)?)
}

fn sequence(doc: &Document) -> Outcome<GateSequence> {
    let seq = doc.gate_sequence()?;
    Ok(GateSequence::new(seq.d, seq.n, seq.gates)?)
}

fn emit_clifford(q: &CliffordOp, odd: bool) -> Outcome<Value> {
    if odd {
        Ok(document::emit_odd_clifford(&q.to_odd_form()?))
    } else {
        Ok(document::emit_clifford(q))
    }
}

fn run(cli: Cli) -> Outcome<Value> {
    let odd = cli.odd_form;
    match cli.command {
        Command::Validate { file } => {
            let doc = load(&file)?;
            match doc.kind.as_str() {
                "pauli" => Ok(document::emit_pauli(&doc.pauli()?)),
                "clifford" => emit_clifford(&clifford(&doc, odd)?, odd),
                "stabilizer" => Ok(document::emit_stabilizer(&stabilizer(&doc, odd)?, odd)),
                other => Err(Failure::Parse(format!("validate accepts pauli, clifford or stabilizer documents, got {other}"))),
            }
        }
        Command::Compose { outer, inner } => {
            let (a, b) = (load(&outer)?, load(&inner)?);
            if odd {
                Ok(document::emit_odd_clifford(&odd_clifford(&a)?.compose(&odd_clifford(&b)?)?))
            } else {
                Ok(document::emit_clifford(&clifford(&a, false)?.compose(&clifford(&b, false)?)?))
            }
        }
        Command::Invert { file } => {
            let doc = load(&file)?;
            if odd {
                Ok(document::emit_odd_clifford(&odd_clifford(&doc)?.invert()))
            } else {
                Ok(document::emit_clifford(&clifford(&doc, false)?.invert()))
            }
        }
        Command::Conjugate { clifford: q, pauli } => {
            let (q, x) = (load(&q)?, load(&pauli)?.pauli()?);
            if odd {
                let qo = odd_clifford(&q)?;
                if x.phase() % 2 != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "odd-form conjugation needs an even zeta exponent, got {}",
                        x.phase()
                    ))
                    .into());
                }
                if x.dim() != qo.dim() || x.vector().len() != qo.matrix().rows() {
                    return Err(Error::DimensionMismatch("pauli and clifford differ in shape".into()).into());
                }
                let (eps, b) = qo.conjugate_pauli(x.phase() / 2, x.vector());
                Ok(document::emit_pauli(&PauliElement::new(x.dim(), b, 2 * eps)?))
            } else {
                Ok(document::emit_pauli(&clifford(&q, false)?.conjugate_pauli(&x)?))
            }
        }
        Command::Decompose { file } => Ok(document::emit_sequence(&decompose(&clifford(&load(&file)?, odd)?)?)),
        Command::Fold { file } => emit_clifford(&sequence(&load(&file)?)?.fold()?, odd),
        Command::Canonicalize { file } => {
            let st = stabilizer(&load(&file)?, odd)?;
            Ok(document::emit_normal_form(&st.minimize()?, &st.normal_form()?))
        }
        Command::Expand { file, raw, generic } => {
            let st = stabilizer(&load(&file)?, odd)?;
            let e = if raw {
                st.expand_raw()?
            } else if generic {
                st.expand_generic()?
            } else if odd {
                st.to_odd_form()?.expand()?
            } else {
                st.expand()?
            };
            Ok(document::emit_expansion(&e))
        }
        Command::Simulate { file, force_cap } => {
            let cap = force_cap.unwrap_or(DEFAULT_CAP);
            let doc = load(&file)?;
            match doc.kind.as_str() {
                "pauli" => {
                    let x = doc.pauli()?;
                    let u = oracle::pauli_operator(&x, cap)?;
                    Ok(document::emit_dense_operator(&u, x.dim(), x.num_qudits()))
                }
                "clifford" => {
                    let q = clifford(&doc, odd)?;
                    oracle::hilbert_dim(q.dim(), q.num_qudits(), cap)?;
                    let u = oracle::sequence_operator(&decompose(&q)?, cap)?;
                    Ok(document::emit_dense_operator(&u, q.dim(), q.num_qudits()))
                }
                "gate_sequence" => {
                    let seq = sequence(&doc)?;
                    let u = oracle::sequence_operator(&seq, cap)?;
                    Ok(document::emit_dense_operator(&u, seq.d, seq.n))
                }
                "stabilizer" => {
                    let st = stabilizer(&doc, odd)?;
                    oracle::hilbert_dim(st.dim(), st.num_qudits(), cap)?;
                    let psi = oracle::state_from_expansion(&st.expand()?, cap)?;
                    Ok(document::emit_dense_state(&psi, st.dim(), st.num_qudits()))
                }
                "expansion" => {
                    let e = doc.expansion()?;
                    let psi = oracle::state_from_expansion(&e, cap)?;
                    Ok(document::emit_dense_state(&psi, e.d, e.n))
                }
                other => Err(Failure::Parse(format!("simulate does not accept {other} documents"))),
            }
        }
        Command::Snf { file } => Ok(document::emit_smith(&smith_normal_form(&load(&file)?.matrix()?))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(doc) => {
            print!("{}", json::to_canonical(&doc));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprint!("{}", json::to_canonical(&failure.to_json()));
            ExitCode::from(failure.exit_code())
        }
    }
}
