//! Exchange-only gates on two 3-qubit decoherence-free subsystems.
//!
//! The crate builds the total-angular-momentum (TAM) basis of six spin-1/2
//! qubits, simulates exchange pulse sequences in its block-diagonal form,
//! checks sequences against CNOT and leakage-reduction target forms, and
//! searches for new sequences with a genetic algorithm.

pub mod basis;
pub mod cg;
pub mod encoded;
pub mod error;
pub mod exchange;
pub mod fixtures;
pub mod io;
pub mod operators;
pub mod search;
pub mod spin;
pub mod targets;

pub use basis::{
    build_dfs_basis, build_six_qubit_basis, change_of_basis, tam_basis, BasisVector, DfsState, QuantumNumbers,
};
pub use cg::clebsch_gordan;
pub use error::{Error, Result};
pub use exchange::{
    blocks_from_full, gate_unitary, merge_gates, schedule_time_steps, sequence_unitary, BlockUnitary, Generator,
    PulseGate, PulseSequence,
};
pub use spin::HalfInt;
pub use targets::{f_cnot, f_lro, verify_cnot, verify_lro, TargetKind, VerifyReport};
