//! Local invariants of two-qubit gates.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unitarity tolerance for [`makhlin_invariants`].
pub const UNITARITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MakhlinInvariants {
    pub g1: Complex64,
    pub g2: f64,
}

impl MakhlinInvariants {
    pub fn distance(&self, other: &MakhlinInvariants) -> f64 {
        (self.g1 - other.g1).norm().max((self.g2 - other.g2).abs())
    }
}

fn magic_basis() -> Matrix4<Complex64> {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let o = Complex64::new(0.0, 0.0);
    Matrix4::new(r, o, o, i, o, i, r, o, o, i, -r, o, r, o, o, -i)
}

/// `(G1, G2)` computed in the magic basis.
///
/// With `m = U_B^T U_B`: `G1 = tr^2(m) / (16 det U)` and
/// `G2 = (tr^2(m) - tr(m^2)) / (4 det U)`.
pub fn makhlin_invariants(u: &Matrix4<Complex64>) -> Result<MakhlinInvariants> {
    let dev = (u.adjoint() * u - Matrix4::identity()).norm();
    if dev > UNITARITY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let q = magic_basis();
    let ub = q.adjoint() * u * q;
    let m = ub.transpose() * ub;
    let det = u.determinant();
    let tr = m.trace();
    let tr2 = (m * m).trace();
    Ok(MakhlinInvariants { g1: tr * tr / (det * 16.0), g2: ((tr * tr - tr2) / (det * 4.0)).re })
}

/// CNOT with the first qubit as control, basis order `|00>, |01>, |10>, |11>`.
pub fn cnot_matrix() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(r, c)] = Complex64::new(1.0, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let m = Matrix4::<Complex64>::identity() * Complex64::new(2.0, 0.0);
        assert!(makhlin_invariants(&m).is_err());
    }

    #[test]
    fn invariant_under_global_phase() {
        let c = cnot_matrix();
        let a = makhlin_invariants(&c).unwrap();
        let b = makhlin_invariants(&(c * Complex64::from_polar(1.0, 0.7))).unwrap();
        assert!(a.distance(&b) < 1e-14);
    }
}
