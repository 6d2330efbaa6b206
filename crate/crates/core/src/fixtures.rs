//! The two published pulse sequences and their closed-form powers.

use crate::exchange::{PulseGate, PulseSequence};

/// `arccos(-1/sqrt 3) / pi`
pub fn p1() -> f64 {
    (-1.0 / 3f64.sqrt()).acos() / std::f64::consts::PI
}

/// `arcsin(1/3) / pi`
pub fn p2() -> f64 {
    (1.0f64 / 3.0).asin() / std::f64::consts::PI
}

/// `arccos(1/3) / pi`
pub fn q1() -> f64 {
    (1.0f64 / 3.0).acos() / std::f64::consts::PI
}

/// `arcsin(1/sqrt 3) / pi`
pub fn q2() -> f64 {
    (1.0 / 3f64.sqrt()).asin() / std::f64::consts::PI
}

fn build(gates: &[(usize, f64)]) -> PulseSequence {
    gates.iter().map(|&(pair, power)| PulseGate { pair, power }).collect()
}

/// 22-pulse, 13-step CNOT; qubit A is the control.
pub fn cnot_sequence() -> PulseSequence {
    let (p1, p2) = (p1(), p2());
    build(&[
        (3, p1),
        (2, 0.5),
        (4, p2),
        (3, 1.0),
        (2, -0.5),
        (4, -0.5),
        (1, 1.0),
        (3, -0.5),
        (2, -0.5),
        (4, 1.0),
        (1, -0.5),
        (3, 0.5),
        (2, -0.5),
        (4, 1.0),
        (1, 1.0),
        (3, -0.5),
        (2, -0.5),
        (4, -0.5),
        (3, 1.0),
        (2, 0.5),
        (4, 1.0 - p2),
        (3, -p1),
    ])
}

/// The CNOT sequence without its `p1, p2, -p1, 1-p2` gates: 18 pulses in
/// 11 steps, locally equivalent to CNOT.
pub fn local_cnot_sequence() -> PulseSequence {
    let full = cnot_sequence();
    let drop = [0usize, 2, 20, 21];
    full.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, g)| *g).collect()
}

/// 30-pulse, 20-step leakage reduction; A may be leaked, B is fiducial.
pub fn lro_sequence() -> PulseSequence {
    let (q1, q2) = (q1(), q2());
    build(&[
        (1, -q1),
        (0, q1 - 1.0),
        (2, q1 - 1.0),
        (3, 2.0 / 3.0),
        (2, 1.0 - q1),
        (4, 1.0 - q1),
        (3, -2.0 / 3.0),
        (2, q1 - 1.0),
        (4, q2 - 1.0),
        (1, 1.0),
        (3, 1.0 - q1),
        (0, -0.5),
        (2, 0.5),
        (4, 2.0 / 3.0),
        (1, 1.0),
        (0, 0.5),
        (2, 0.5),
        (3, 1.0),
        (2, q1),
        (1, 1.0 - q1),
        (2, q1 - 1.0),
        (1, -q1),
        (3, -0.5),
        (0, 1.0),
        (1, 0.5),
        (2, -0.5),
        (1, 1.0),
        (3, 1.0),
        (0, q1),
        (2, 0.5),
    ])
}
