//! Exact simulation of small quantum registers, the classic gate
//! constructions built from XOR (controlled-NOT) plus one-bit gates, and
//! synthesis of non-demolition measurement and decoding networks for
//! stabilizer codes.
//!
//! Everything is checked against dense matrices: the register is capped at
//! [`statevector::DEFAULT_MAX_QUBITS`] qubits (override with `QGK_MAX_QUBITS`).

pub mod circuit;
pub mod decompose;
pub mod error;
pub mod five_qubit;
pub mod gates;
pub mod ghz;
pub mod pauli;
pub mod random;
pub mod statevector;
pub mod synthesis;
pub mod unitary;

pub use circuit::{Circuit, Condition, GateOp, Op, RunOptions, RunResult};
pub use decompose::{
    controlled_v_abc, deutsch_chain, margolus_network, paired_margolus_cancellation,
    sleator_weinfurter, toffoli_network, DecompositionReport, ReportSummary,
};
pub use error::{Error, Result};
pub use five_qubit::{LogicalQubit, Syndrome};
pub use gates::{gate, gate_to_hamiltonian, Gate, GateDef, GateKind, GateParams};
pub use ghz::{ghz_state, mermin_check, MerminReport};
pub use pauli::{is_stabilizer_of, BasisChange, GeneratorSet, Letter, PauliString};
pub use statevector::{Measurement, OutcomeMode, StateVector};
pub use synthesis::{
    append_measurement, synth_decoder, synth_measurement, DecodeResult, Decoder, SynthesisTrace,
};
pub use unitary::{max_entry_diff, Amplitude, Matrix, Unitary, EQ_TOL, UNITARITY_TOL};
