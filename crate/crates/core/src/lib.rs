//! Qudit Clifford operations and stabilizer states over `Z_d` for arbitrary `d >= 2`.

pub mod clifford;
pub mod decomp;
pub mod error;
pub mod oracle;
pub mod pauli;
pub mod sampling;
pub mod stabilizer;
pub mod zmod;

pub use clifford::{CliffordOp, OddCliffordForm};
pub use decomp::{decompose, ElementaryGate, GateSequence};
pub use error::{Error, Result};
pub use pauli::PauliElement;
pub use stabilizer::{ExpansionForm, OddStabilizerForm, StabilizerGenerators, StateExpansion};
pub use zmod::ResidueMatrix;
