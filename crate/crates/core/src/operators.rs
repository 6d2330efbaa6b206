//! Spin operators on registers of spin-1/2 particles.
//!
//! Computational basis convention: bit `k` of a basis index is the state of
//! qubit `k`; a clear bit is `|0> = |up>` (m = +1/2).

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Pauli matrix on one qubit of an `n`-qubit register.
pub fn pauli(n_qubits: usize, qubit: usize, axis: Axis) -> CMatrix {
    assert!(qubit < n_qubits);
    let dim = 1usize << n_qubits;
    let mut out = CMatrix::zeros(dim, dim);
    let mask = 1usize << qubit;
    for col in 0..dim {
        let bit = col & mask != 0;
        match axis {
            Axis::X => out[(col ^ mask, col)] = Complex64::new(1.0, 0.0),
            // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
            Axis::Y => out[(col ^ mask, col)] = if bit { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) },
            Axis::Z => out[(col, col)] = Complex64::new(if bit { -1.0 } else { 1.0 }, 0.0),
        }
    }
    out
}

/// Total spin component `S_axis = 1/2 sum sigma_axis` over a subset of qubits.
pub fn spin_component(n_qubits: usize, qubits: &[usize], axis: Axis) -> CMatrix {
    let dim = 1usize << n_qubits;
    qubits.iter().fold(CMatrix::zeros(dim, dim), |acc, &q| acc + pauli(n_qubits, q, axis) * Complex64::new(0.5, 0.0))
}

/// Squared total spin `S^2 = Sx^2 + Sy^2 + Sz^2` over a subset of qubits.
pub fn spin_squared(n_qubits: usize, qubits: &[usize]) -> CMatrix {
    let dim = 1usize << n_qubits;
    Axis::ALL.iter().fold(CMatrix::zeros(dim, dim), |acc, &axis| {
        let s = spin_component(n_qubits, qubits, axis);
        acc + &s * &s
    })
}

/// Permutation that exchanges the states of qubits `a` and `b`.
pub fn swap_permutation(n_qubits: usize, a: usize, b: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        out[(swap_bits(col, a, b), col)] = Complex64::new(1.0, 0.0);
    }
    out
}

/// Index with bits `a` and `b` exchanged.
pub fn swap_bits(index: usize, a: usize, b: usize) -> usize {
    let bit_a = (index >> a) & 1;
    let bit_b = (index >> b) & 1;
    if bit_a == bit_b {
        index
    } else {
        index ^ ((1 << a) | (1 << b))
    }
}

/// `H = 1/4 sigma_a . sigma_b` on an `n`-qubit register.
pub fn heisenberg_coupling(n_qubits: usize, a: usize, b: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    Axis::ALL.iter().fold(CMatrix::zeros(dim, dim), |acc, &axis| {
        acc + pauli(n_qubits, a, axis) * pauli(n_qubits, b, axis) * Complex64::new(0.25, 0.0)
    })
}
