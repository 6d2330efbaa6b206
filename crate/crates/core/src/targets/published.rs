//! Closed-form block matrices of the published CNOT and leakage-reduction
//! sequences, in the swap-generated frame (spin-3 phase exactly 1).

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;

use crate::exchange::{Block5, Block9};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sqrt(x: f64) -> f64 {
    x.sqrt()
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Spin-0 block of the CNOT product.
pub fn cnot_spin0() -> Block5 {
    let mut m = Block5::zeros();
    m[(0, 0)] = r(1.0);
    m[(1, 1)] = r(1.0);
    m[(2, 3)] = r(1.0);
    m[(3, 2)] = r(1.0);
    m[(4, 4)] = r(-1.0);
    m
}

/// Spin-1 block of the CNOT product.
pub fn cnot_spin1() -> Block9 {
    let mut m = Block9::zeros();
    m[(0, 0)] = r(1.0);
    m[(1, 1)] = r(1.0);
    m[(2, 3)] = r(1.0);
    m[(3, 2)] = r(1.0);
    let s3 = sqrt(3.0);
    let s5 = sqrt(5.0);
    let s15 = sqrt(15.0);
    let leaked = [
        [-11.0 / 16.0, -5.0 * s3 / 16.0, 0.0, 0.0, -s15 / 8.0],
        [-5.0 * s3 / 16.0, -1.0 / 16.0, 0.0, 0.0, 3.0 * s5 / 8.0],
        [0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0],
        [-s15 / 8.0, 3.0 * s5 / 8.0, 0.0, 0.0, -0.25],
    ];
    for (i, row) in leaked.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m[(4 + i, 4 + j)] = r(x);
        }
    }
    m
}

/// Sub-blocks `d, e, f, g, h, k` of the leakage-reduction product.
#[derive(Clone, Copy, Debug)]
pub struct LroSolution {
    pub d: Matrix2<Complex64>,
    pub e: Matrix3<Complex64>,
    pub f: Matrix2<Complex64>,
    pub g: Matrix3<Complex64>,
    pub h: Matrix2<Complex64>,
    pub k: Matrix3<Complex64>,
    pub free_phase: Complex64,
}

pub fn lro_solution() -> LroSolution {
    let (s2, s3, s5) = (sqrt(2.0), sqrt(3.0), sqrt(5.0));
    // i/6 (i + sqrt2)(3i + sqrt3)
    let d12 = I / 6.0 * (I + s2) * (I * 3.0 + s3);
    // (-1)^{5/6}
    let d21 = Complex64::from_polar(1.0, 5.0 * std::f64::consts::PI / 6.0);
    let zero = r(0.0);

    let d = Matrix2::new(zero, d12, d21, zero);
    let e = Matrix3::new(
        zero,
        d12,
        zero,
        (-I + s3) / 6.0,
        zero,
        r(-2.0 * s2 / 3.0),
        (-I + s3) * (s2 / 3.0),
        zero,
        r(1.0 / 3.0),
    );
    let f = Matrix2::new(
        (-I + 2.0 * s2) * (I * 3.0 + s3) / 12.0,
        (r(1.0) - I * s2) * (I * 3.0 + s3) / 12.0,
        (-I + s3) / 4.0,
        -(-I + s2) * (-I + s3) / 4.0,
    );
    let g = Matrix3::new(
        r(-0.5),
        c(-7.0 / 12.0, s2 / 3.0).sqrt(),
        zero,
        c(-7.0 / 972.0, -s2 / 243.0).sqrt(),
        r(1.0 / 18.0),
        r(-4.0 * s5 / 9.0),
        -c(-140.0 / 243.0, -80.0 * s2 / 243.0).sqrt(),
        r(-2.0 * s5 / 9.0),
        r(-1.0 / 9.0),
    );
    let k = Matrix3::new(
        r(0.5),
        -c(-7.0 / 12.0, s2 / 3.0).sqrt(),
        zero,
        -c(-7.0 / 12.0, -s2 / 3.0).sqrt(),
        r(-0.5),
        zero,
        zero,
        zero,
        r(-1.0),
    );
    LroSolution { d, e, f, g, h: f, k, free_phase: r(1.0) }
}

impl LroSolution {
    /// Spin-0 block in the leakage-reduction form.
    pub fn spin0(&self) -> Block5 {
        let mut m = Block5::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = self.d[(i, j)];
                m[(2 + i, 2 + j)] = self.d[(i, j)];
            }
        }
        m[(4, 4)] = self.free_phase;
        m
    }

    /// Spin-1 block in the leakage-reduction form, with `f (x) e` columns.
    pub fn spin1(&self) -> Block9 {
        let mut m = Block9::zeros();
        let e = &self.e;
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = e[(i, j)];
                m[(2 + i, 2 + j)] = e[(i, j)];
            }
        }
        m[(4, 0)] = e[(2, 0)];
        m[(4, 1)] = e[(2, 1)];
        m[(5, 2)] = e[(2, 0)];
        m[(5, 3)] = e[(2, 1)];
        // row -> (f row, e row)
        for (row, (fi, ei)) in [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            m[(row, 6)] = self.f[(fi, 0)] * e[(ei, 2)];
            m[(row, 7)] = self.f[(fi, 1)] * e[(ei, 2)];
        }
        for i in 0..3 {
            m[(6 + i, 4)] = self.g[(i, 0)];
            m[(6 + i, 5)] = self.g[(i, 1)];
            m[(6 + i, 8)] = self.g[(i, 2)];
        }
        m
    }

    /// Spin-2 block in the leakage-reduction form.
    pub fn spin2(&self) -> Block5 {
        let mut m = Block5::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m[(i, 2 + j)] = self.h[(i, j)];
            }
        }
        for i in 0..3 {
            m[(2 + i, 0)] = self.k[(i, 0)];
            m[(2 + i, 1)] = self.k[(i, 1)];
            m[(2 + i, 4)] = self.k[(i, 2)];
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_blocks_are_unitary() {
        assert!((cnot_spin0().adjoint() * cnot_spin0() - Block5::identity()).norm() < 1e-15);
        assert!((cnot_spin1().adjoint() * cnot_spin1() - Block9::identity()).norm() < 1e-15);
        let s = lro_solution();
        assert!((s.spin0().adjoint() * s.spin0() - Block5::identity()).norm() < 1e-14);
        assert!((s.spin1().adjoint() * s.spin1() - Block9::identity()).norm() < 1e-14);
        assert!((s.spin2().adjoint() * s.spin2() - Block5::identity()).norm() < 1e-14);
    }

    #[test]
    fn spot_moduli() {
        let s = lro_solution();
        assert!((s.e[(2, 2)].norm() - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.e[(1, 2)].norm() - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert!((s.g[(1, 2)].norm() - 4.0 * 5f64.sqrt() / 9.0).abs() < 1e-15);
        assert!((s.g[(0, 1)].norm() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((s.k[(2, 2)].norm() - 1.0).abs() < 1e-15);
        assert!((s.d[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }
}
