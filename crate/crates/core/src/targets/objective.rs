//! CNOT and leakage-reduction objective functions.
//!
//! Block indices follow the published numbering: 1-5 are rows of `b0`,
//! 6-14 rows of `b1`, 15-19 rows of `b2`.

use nalgebra::{Matrix2, Matrix3, SMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::exchange::BlockUnitary;

/// Positions `(row, col)` of the CNOT permutation inside a 4x4 encoded block.
const CNOT_ENTRIES: [(usize, usize); 4] = [(0, 0), (1, 1), (2, 3), (3, 2)];

/// `4 - |sum z_k|` over the CNOT entries of one block, without cancellation.
///
/// Uses unitarity: `1 - |z|^2` equals the squared norm of the rest of the
/// row, and the phase spread is a sum of `|u_k - u_l|^2` terms.
fn cnot_deficit<const N: usize>(b: &SMatrix<Complex64, N, N>) -> f64 {
    let z: [Complex64; 4] = CNOT_ENTRIES.map(|(r, c)| b[(r, c)]);
    let mut deficit = 0.0;
    for (k, &(r, c)) in CNOT_ENTRIES.iter().enumerate() {
        let rest: f64 = (0..N).filter(|&j| j != c).map(|j| b[(r, j)].norm_sqr()).sum();
        deficit += rest / (1.0 + z[k].norm());
    }
    let abs_sum: f64 = z.iter().map(|x| x.norm()).sum();
    let sum_abs = z.iter().sum::<Complex64>().norm();
    if abs_sum + sum_abs > 0.0 {
        let mut spread = 0.0;
        for k in 0..4 {
            for l in (k + 1)..4 {
                let (nk, nl) = (z[k].norm(), z[l].norm());
                if nk > 0.0 && nl > 0.0 {
                    spread += nk * nl * (z[k] / nk - z[l] / nl).norm_sqr();
                }
            }
        }
        deficit += spread / (abs_sum + sum_abs);
    }
    deficit
}

/// `f_CNOT^2`, evaluated stably near zero.
pub fn f_cnot_squared(u: &BlockUnitary) -> f64 {
    (0.25 * (cnot_deficit(&u.b0) + cnot_deficit(&u.b1))).max(0.0)
}

/// `sqrt(2 - |U11+U22+U34+U43|/4 - |U66+U77+U89+U98|/4)`.
pub fn f_cnot(u: &BlockUnitary) -> f64 {
    f_cnot_squared(u).sqrt()
}

/// The CNOT objective evaluated literally from its definition.
///
/// Accurate only to about `1e-8` near a solution; kept as a reference.
pub fn f_cnot_direct(u: &BlockUnitary) -> f64 {
    let s0: Complex64 = CNOT_ENTRIES.iter().map(|&(r, c)| u.b0[(r, c)]).sum();
    let s1: Complex64 = CNOT_ENTRIES.iter().map(|&(r, c)| u.b1[(r, c)]).sum();
    (2.0 - 0.25 * s0.norm() - 0.25 * s1.norm()).max(0.0).sqrt()
}

/// Sub-matrices of `U` that enter the leakage-reduction objective.
#[derive(Clone, Copy, Debug)]
pub struct LroParts {
    pub d1: Matrix2<Complex64>,
    pub d2: Matrix2<Complex64>,
    pub l: [Matrix2<Complex64>; 3],
    pub h: Matrix2<Complex64>,
    pub e1: Matrix3<Complex64>,
    pub e2: Matrix3<Complex64>,
}

fn sub2<const N: usize>(b: &SMatrix<Complex64, N, N>, rows: [usize; 2], cols: [usize; 2]) -> Matrix2<Complex64> {
    Matrix2::from_fn(|i, j| b[(rows[i], cols[j])])
}

impl LroParts {
    pub fn new(u: &BlockUnitary) -> Self {
        let d1 = sub2(&u.b0, [0, 1], [0, 1]);
        let d2 = sub2(&u.b0, [2, 3], [2, 3]);
        // U_{6,12} .. U_{11,13}: b1 rows (0,2), (1,3), (4,5); columns 12, 13
        let l = [sub2(&u.b1, [0, 2], [6, 7]), sub2(&u.b1, [1, 3], [6, 7]), sub2(&u.b1, [4, 5], [6, 7])];
        // U_{15,17} .. U_{16,18}
        let h = sub2(&u.b2, [0, 1], [2, 3]);
        let m = l.map(|lj| h.adjoint() * lj);
        let b = &u.b1;
        let e1 = Matrix3::new(
            b[(0, 0)],
            b[(0, 1)],
            m[0][(0, 0)],
            b[(1, 0)],
            b[(1, 1)],
            m[1][(0, 0)],
            b[(4, 0)],
            b[(4, 1)],
            m[2][(0, 0)],
        );
        let e2 = Matrix3::new(
            b[(2, 2)],
            b[(2, 3)],
            m[0][(1, 1)],
            b[(3, 2)],
            b[(3, 3)],
            m[1][(1, 1)],
            b[(5, 2)],
            b[(5, 3)],
            m[2][(1, 1)],
        );
        LroParts { d1, d2, l, h, e1, e2 }
    }

    /// The three Frobenius-norm terms `[D, E, H]`.
    pub fn terms(&self) -> [f64; 3] {
        let d = self.d1 + self.d2;
        let e = self.e1 + self.e2;
        [
            (d.adjoint() * d * Complex64::new(0.25, 0.0) - Matrix2::identity()).norm(),
            (e.adjoint() * e * Complex64::new(0.25, 0.0) - Matrix3::identity()).norm(),
            (self.h.adjoint() * self.h - Matrix2::identity()).norm(),
        ]
    }
}

/// Leakage-reduction objective with the `{f} = {h}` constraint built in.
pub fn f_lro(u: &BlockUnitary) -> f64 {
    LroParts::new(u).terms().iter().sum()
}

/// Leakage-reduction objective without tying `{f}` to `{h}`.
///
/// Terms: repeated spin-0 block, repeated unitary columns 1-4 of the spin-1
/// block, columns 12-13 confined to rows 6-11, and unitary `H`.
pub fn f_lro_unconstrained(u: &BlockUnitary) -> f64 {
    unconstrained_terms(u).iter().sum()
}

fn unconstrained_terms(u: &BlockUnitary) -> [f64; 4] {
    let parts = LroParts::new(u);
    let d = parts.d1 + parts.d2;
    let b = &u.b1;
    let cols = |rows: [usize; 3], c0: usize| SMatrix::<Complex64, 3, 2>::from_fn(|i, j| b[(rows[i], c0 + j)]);
    let e = cols([0, 1, 4], 0) + cols([2, 3, 5], 2);
    let l = SMatrix::<Complex64, 6, 2>::from_fn(|i, j| b[(i, 6 + j)]);
    let quarter = Complex64::new(0.25, 0.0);
    [
        (d.adjoint() * d * quarter - Matrix2::identity()).norm(),
        (e.adjoint() * e * quarter - Matrix2::identity()).norm(),
        (l.adjoint() * l - Matrix2::identity()).norm(),
        (parts.h.adjoint() * parts.h - Matrix2::identity()).norm(),
    ]
}

/// Which target a search or verification aims at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Cnot,
    Lro,
}

impl std::str::FromStr for TargetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cnot" => Ok(TargetKind::Cnot),
            "lro" => Ok(TargetKind::Lro),
            other => Err(format!("unknown target `{other}` (expected cnot or lro)")),
        }
    }
}

impl std::fmt::Display for TargetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TargetKind::Cnot => "cnot",
            TargetKind::Lro => "lro",
        })
    }
}

/// Objective used by the search: the raw value plus a smooth surrogate with
/// the same zero set for the local minimizer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub target: TargetKind,
    /// Tie `{f}` to `{h}` in the leakage-reduction objective.
    pub constrain_f_equals_h: bool,
}

impl Objective {
    pub fn new(target: TargetKind) -> Self {
        Objective { target, constrain_f_equals_h: true }
    }

    pub fn value(&self, u: &BlockUnitary) -> f64 {
        match (self.target, self.constrain_f_equals_h) {
            (TargetKind::Cnot, _) => f_cnot(u),
            (TargetKind::Lro, true) => f_lro(u),
            (TargetKind::Lro, false) => f_lro_unconstrained(u),
        }
    }

    /// Squared objective (CNOT) or sum of squared norm terms (LRO).
    pub fn smooth(&self, u: &BlockUnitary) -> f64 {
        match (self.target, self.constrain_f_equals_h) {
            (TargetKind::Cnot, _) => f_cnot_squared(u),
            (TargetKind::Lro, true) => LroParts::new(u).terms().iter().map(|t| t * t).sum(),
            (TargetKind::Lro, false) => unconstrained_terms(u).iter().map(|t| t * t).sum(),
        }
    }
}
