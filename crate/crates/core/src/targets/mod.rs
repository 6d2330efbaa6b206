//! Target forms, objective functions and sequence verification.

pub mod makhlin;
pub mod objective;
pub mod published;
pub mod verify;

pub use makhlin::{cnot_matrix, makhlin_invariants, MakhlinInvariants};
pub use objective::{
    f_cnot, f_cnot_direct, f_cnot_squared, f_lro, f_lro_unconstrained, LroParts, Objective, TargetKind,
};
pub use verify::{
    verify, verify_cnot, verify_cnot_unitary, verify_lro, verify_lro_unitary, Check, LocalEquivalence, VerifyReport,
    DEFAULT_TOL, GA_TOL,
};
