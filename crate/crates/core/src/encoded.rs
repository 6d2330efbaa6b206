//! Exchange gates inside a single DFS and their action on the encoded qubit.
//!
//! Encoded Bloch frame: the logical `Z` is `+1` on `S_{1,2} = 1` and `-1` on
//! `S_{1,2} = 0`, with `X` the real Condon-Shortley coupling between them.
//! In this frame exchange on `(q1, q2)` with positive power is a positive
//! rotation about `+z`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, SMatrix};
use num_complex::Complex64;

use crate::basis::build_dfs_basis;
use crate::operators::swap_permutation;

pub type Matrix8 = SMatrix<Complex64, 8, 8>;

/// Adjacent pair inside one DFS.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfsPair {
    /// Qubits 1 and 2.
    Q12,
    /// Qubits 2 and 3.
    Q23,
}

impl DfsPair {
    fn bits(self) -> (usize, usize) {
        match self {
            DfsPair::Q12 => (0, 1),
            DfsPair::Q23 => (1, 2),
        }
    }
}

/// Gauge sector of an unleaked DFS, labeled by total `S_z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    Up,
    Down,
}

impl Gauge {
    /// Basis positions of `(S_{1,2} = 0, S_{1,2} = 1)` at this gauge.
    fn indices(self) -> [usize; 2] {
        match self {
            Gauge::Up => [0, 2],
            Gauge::Down => [1, 3],
        }
    }
}

/// `exp(-i pi p H^ex)` on one DFS, written in the eight-vector DFS basis.
pub fn single_dfs_gate(pair: DfsPair, power: f64) -> Matrix8 {
    let (a, b) = pair.bits();
    let swap = swap_permutation(3, a, b);
    let half = PI * power / 2.0;
    let phase = Complex64::from_polar(1.0, PI * power / 4.0);
    let basis = build_dfs_basis();
    Matrix8::from_fn(|i, j| {
        let vi = &basis[i].amplitudes;
        let vj = &basis[j].amplitudes;
        let sw = vi.dotc(&(&swap * vj));
        let id = vi.dotc(vj);
        phase * (id * half.cos() - Complex64::new(0.0, half.sin()) * sw)
    })
}

/// Encoded 2x2 action at one gauge, rows and columns ordered `(S_{1,2}=0, S_{1,2}=1)`.
pub fn encoded_block(u: &Matrix8, gauge: Gauge) -> Matrix2<Complex64> {
    let [i0, i1] = gauge.indices();
    Matrix2::new(u[(i0, i0)], u[(i0, i1)], u[(i1, i0)], u[(i1, i1)])
}

/// Largest entry coupling `S = 1/2` and `S = 3/2`, or the two gauge sectors.
pub fn sector_leakage(u: &Matrix8) -> f64 {
    let sector = |k: usize| match k {
        0 | 2 => 0,
        1 | 3 => 1,
        k => k,
    };
    let mut worst = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            if sector(i) != sector(j) {
                worst = worst.max(u[(i, j)].norm());
            }
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EncodedRotation {
    /// Rotation angle in `[0, pi]`.
    pub angle: f64,
    /// Unit axis `(x, y, z)` in the encoded Bloch frame.
    pub axis: [f64; 3],
}

/// Axis and angle of a 2x2 unitary, ignoring its global phase.
///
/// The input is ordered `(S_{1,2}=0, S_{1,2}=1)` as returned by
/// [`encoded_block`]. Returns `None` for (near-)identity rotations whose axis
/// is undefined.
pub fn encoded_rotation(u: &Matrix2<Complex64>) -> Option<EncodedRotation> {
    // reorder to (S_{1,2}=1, S_{1,2}=0) so that Z is diag(+1, -1)
    let m = Matrix2::new(u[(1, 1)], u[(1, 0)], u[(0, 1)], u[(0, 0)]);
    let det = m.determinant();
    let mut w = m / det.sqrt();
    if (w[(0, 0)] + w[(1, 1)]).re < 0.0 {
        w = -w;
    }
    let c = (w[(0, 0)] + w[(1, 1)]).re / 2.0;
    let sz = -(w[(0, 0)] - w[(1, 1)]).im / 2.0;
    let sx = -(w[(0, 1)] + w[(1, 0)]).im / 2.0;
    let sy = (w[(1, 0)] - w[(0, 1)]).re / 2.0;
    let s = (sx * sx + sy * sy + sz * sz).sqrt();
    if s < 1e-14 {
        return None;
    }
    Some(EncodedRotation { angle: 2.0 * s.atan2(c), axis: [sx / s, sy / s, sz / s] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_is_unitary_and_block_diagonal() {
        for pair in [DfsPair::Q12, DfsPair::Q23] {
            let u = single_dfs_gate(pair, 0.37);
            assert!((u.adjoint() * u - Matrix8::identity()).norm() < 1e-13);
            assert!(sector_leakage(&u) < 1e-14);
        }
    }

    #[test]
    fn identity_has_no_axis() {
        assert!(encoded_rotation(&Matrix2::identity()).is_none());
    }

    #[test]
    fn pauli_x_axis() {
        let x = Matrix2::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        let r = encoded_rotation(&x).unwrap();
        assert!((r.angle - PI).abs() < 1e-12);
        assert!((r.axis[0].abs() - 1.0).abs() < 1e-12);
    }
}
