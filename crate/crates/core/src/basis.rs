//! Angular-momentum bases for one DFS (8 states) and two DFS qubits (64 states).
//!
//! Six physical qubits sit in a line as `A3 A2 A1 B1 B2 B3`; layout position
//! `k` is bit `k` of a computational index. Every coupling step uses
//! Condon-Shortley coefficients. Qubit A couples `(A1, A2) -> S_{A,1,2}`,
//! then `A3 -> S_A`. Qubit B is the mirror image: `(B2, B1) -> S_{B,1,2}`,
//! then `B3 -> S_B`. The total spin couples `S_B (x) S_A -> S_tot`. With this
//! choice the CNOT and leakage-reduction products come out with the signs
//! of their published closed forms.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::cg::clebsch_gordan;
use crate::error::{Error, Result};
use crate::operators::CMatrix;
use crate::spin::HalfInt;

pub const N_QUBITS: usize = 6;
pub const DIM: usize = 1 << N_QUBITS;
pub const LAYOUT: [&str; N_QUBITS] = ["A3", "A2", "A1", "B1", "B2", "B3"];

/// Layout positions of DFS qubit A, in coupling order (first, second, third).
pub const QUBIT_A: [usize; 3] = [2, 1, 0];
/// Layout positions of DFS qubit B, in coupling order (first, second, third).
pub const QUBIT_B: [usize; 3] = [4, 3, 5];

const H: HalfInt = HalfInt::HALF;
const TH: HalfInt = HalfInt::THREE_HALVES;

/// Labels of a six-qubit total-angular-momentum basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub s_tot: HalfInt,
    pub sz_tot: HalfInt,
    pub s_a: HalfInt,
    pub s_b: HalfInt,
    pub s_a12: HalfInt,
    pub s_b12: HalfInt,
}

impl QuantumNumbers {
    pub fn new(
        s_tot: HalfInt,
        sz_tot: HalfInt,
        s_a: HalfInt,
        s_b: HalfInt,
        s_a12: HalfInt,
        s_b12: HalfInt,
    ) -> Result<Self> {
        let qn = QuantumNumbers { s_tot, sz_tot, s_a, s_b, s_a12, s_b12 };
        qn.validate()?;
        Ok(qn)
    }

    pub fn validate(&self) -> Result<()> {
        validate_dfs(self.s_a, self.s_a12)?;
        validate_dfs(self.s_b, self.s_b12)?;
        if self.s_tot > self.s_a + self.s_b || self.s_tot < (self.s_a - self.s_b).abs() {
            return Err(Error::MalformedSpin(self.s_tot.value()));
        }
        if self.sz_tot.abs() > self.s_tot || (self.s_tot - self.sz_tot).twice() % 2 != 0 {
            return Err(Error::InconsistentProjection { j: self.s_tot.value(), m: self.sz_tot.value() });
        }
        Ok(())
    }

    /// `S_A = S_B = 1/2`: both DFS qubits inside the encoded subspace.
    pub fn is_unleaked(&self) -> bool {
        self.s_a == H && self.s_b == H
    }
}

fn validate_dfs(s: HalfInt, s12: HalfInt) -> Result<()> {
    let ok = matches!((s.twice(), s12.twice()), (1, 0) | (1, 2) | (3, 2));
    if ok {
        Ok(())
    } else {
        Err(Error::MalformedSpin(s.value()))
    }
}

/// Labels `(S, S_{1,2}, S_z)` of a single-DFS basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DfsLabels {
    pub s: HalfInt,
    pub s12: HalfInt,
    pub sz: HalfInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisVector<L = QuantumNumbers> {
    pub labels: L,
    /// Amplitudes over the computational basis.
    pub amplitudes: DVector<Complex64>,
    /// 1-based ordinal in the full ordering of the basis.
    pub index: usize,
}

/// Computational-basis expansion of a three-spin coupled state.
///
/// Entries are `(m_first, m_second, m_third, amplitude)`.
fn triple_state(s12: HalfInt, s: HalfInt, m: HalfInt) -> Vec<([HalfInt; 3], f64)> {
    let mut out = Vec::new();
    for m1 in H.projections() {
        for m2 in H.projections() {
            let m12 = m1 + m2;
            let m3 = m - m12;
            if m12.abs() > s12 || m3.abs() > H {
                continue;
            }
            let a = clebsch_gordan(H, m1, H, m2, s12, m12).expect("valid spin-1/2 pair")
                * clebsch_gordan(s12, m12, H, m3, s, m).expect("valid triple coupling");
            if a != 0.0 {
                out.push(([m1, m2, m3], a));
            }
        }
    }
    out
}

fn bit_for(m: HalfInt) -> usize {
    usize::from(m.twice() < 0)
}

fn place(index: &mut usize, slots: [usize; 3], ms: [HalfInt; 3]) {
    for (slot, m) in slots.into_iter().zip(ms) {
        *index |= bit_for(m) << slot;
    }
}

/// The eight single-DFS vectors in Table-1 order: `S = 1/2` states first.
///
/// Qubits `q1, q2, q3` are bits 0, 1, 2 of the 8-dimensional index.
pub fn build_dfs_basis() -> Vec<BasisVector<DfsLabels>> {
    let labels = [
        (H, HalfInt::ZERO, H),
        (H, HalfInt::ZERO, -H),
        (H, HalfInt::ONE, H),
        (H, HalfInt::ONE, -H),
        (TH, HalfInt::ONE, TH),
        (TH, HalfInt::ONE, H),
        (TH, HalfInt::ONE, -H),
        (TH, HalfInt::ONE, -TH),
    ];
    labels
        .iter()
        .enumerate()
        .map(|(i, &(s, s12, sz))| {
            let mut amps = DVector::zeros(8);
            for (ms, a) in triple_state(s12, s, sz) {
                let mut idx = 0;
                place(&mut idx, [0, 1, 2], ms);
                amps[idx] += Complex64::new(a, 0.0);
            }
            BasisVector { labels: DfsLabels { s, s12, sz }, amplitudes: amps, index: i + 1 }
        })
        .collect()
}

/// Amplitudes of one six-qubit coupled state over the computational basis.
pub fn six_qubit_state(qn: &QuantumNumbers) -> DVector<f64> {
    let mut v = DVector::zeros(DIM);
    for m_b in qn.s_b.projections() {
        let m_a = qn.sz_tot - m_b;
        if m_a.abs() > qn.s_a {
            continue;
        }
        let c = clebsch_gordan(qn.s_b, m_b, qn.s_a, m_a, qn.s_tot, qn.sz_tot).expect("labels validated");
        if c == 0.0 {
            continue;
        }
        let b_terms = triple_state(qn.s_b12, qn.s_b, m_b);
        for (ms_a, amp_a) in triple_state(qn.s_a12, qn.s_a, m_a) {
            for (ms_b, amp_b) in &b_terms {
                let mut idx = 0;
                place(&mut idx, QUBIT_A, ms_a);
                place(&mut idx, QUBIT_B, *ms_b);
                v[idx] += c * amp_a * amp_b;
            }
        }
    }
    v
}

/// Multiplicity labels `(S_A, S_B, S_{A,1,2}, S_{B,1,2})` compatible with a
/// total spin, in lexicographic order.
pub fn sector_labels(s_tot: HalfInt, sz_tot: HalfInt) -> Vec<QuantumNumbers> {
    let dfs = [(H, HalfInt::ZERO), (H, HalfInt::ONE), (TH, HalfInt::ONE)];
    let mut out: Vec<QuantumNumbers> = dfs
        .iter()
        .flat_map(|&(s_a, s_a12)| dfs.iter().map(move |&(s_b, s_b12)| (s_a, s_a12, s_b, s_b12)))
        .filter_map(|(s_a, s_a12, s_b, s_b12)| QuantumNumbers::new(s_tot, sz_tot, s_a, s_b, s_a12, s_b12).ok())
        .collect();
    out.sort_by_key(|q| (q.s_a, q.s_b, q.s_a12, q.s_b12));
    out
}

/// One `(S_tot, S_z,tot)` sector of the 64-dimensional basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sector {
    pub s_tot: i32,
    pub sz_tot: i32,
    pub range: (usize, usize),
}

impl Sector {
    pub fn range(&self) -> Range<usize> {
        self.range.0..self.range.1
    }

    pub fn len(&self) -> usize {
        self.range.1 - self.range.0
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All 64 labeled vectors, ordered by `S_tot`, then `S_z,tot` ascending, then
/// the multiplicity labels. Indices 1-5 are the spin-0 block and 6-14 the
/// `S_tot = 1, S_z,tot = -1` block, matching the published tables.
pub fn build_six_qubit_basis() -> Vec<BasisVector> {
    let mut out = Vec::with_capacity(DIM);
    for s_tot in 0..=3 {
        for sz in -s_tot..=s_tot {
            for qn in sector_labels(HalfInt::from_int(s_tot), HalfInt::from_int(sz)) {
                let amplitudes = six_qubit_state(&qn).map(|x| Complex64::new(x, 0.0));
                out.push(BasisVector { labels: qn, amplitudes, index: out.len() + 1 });
            }
        }
    }
    out
}

/// Shared, read-only total-angular-momentum basis with sector bookkeeping.
#[derive(Debug)]
pub struct TamBasis {
    pub vectors: Vec<BasisVector>,
    pub sectors: Vec<Sector>,
    /// Real orthogonal change of basis; row `i` is vector `i + 1`.
    pub transform: DMatrix<f64>,
}

static TAM: Lazy<TamBasis> = Lazy::new(TamBasis::build);

/// The process-wide basis, built on first use.
pub fn tam_basis() -> &'static TamBasis {
    &TAM
}

impl TamBasis {
    fn build() -> Self {
        let vectors = build_six_qubit_basis();
        let mut sectors: Vec<Sector> = Vec::new();
        for (i, v) in vectors.iter().enumerate() {
            let key = (v.labels.s_tot.twice() / 2, v.labels.sz_tot.twice() / 2);
            match sectors.last_mut() {
                Some(s) if (s.s_tot, s.sz_tot) == key => s.range.1 = i + 1,
                _ => sectors.push(Sector { s_tot: key.0, sz_tot: key.1, range: (i, i + 1) }),
            }
        }
        let transform = DMatrix::from_fn(DIM, DIM, |r, c| vectors[r].amplitudes[c].re);
        TamBasis { vectors, sectors, transform }
    }

    pub fn sector(&self, s_tot: i32, sz_tot: i32) -> Option<Sector> {
        self.sectors.iter().copied().find(|s| s.s_tot == s_tot && s.sz_tot == sz_tot)
    }

    /// Conjugates a computational-basis operator into the TAM basis.
    pub fn to_tam(&self, u: &CMatrix) -> CMatrix {
        let v = self.transform.map(|x| Complex64::new(x, 0.0));
        &v * u * v.transpose()
    }

    /// Conjugates a TAM-basis operator back to the computational basis.
    pub fn from_tam(&self, w: &CMatrix) -> CMatrix {
        let v = self.transform.map(|x| Complex64::new(x, 0.0));
        v.transpose() * w * &v
    }

    /// Index of a TAM vector within the published spin-0 / spin-1 (S_z = -1)
    /// / spin-2 (S_z = -2) tables, numbered 1..=19.
    pub fn table_index(&self, global: usize) -> Option<usize> {
        let mut offset = 0;
        for (s, sz) in [(0, 0), (1, -1), (2, -2)] {
            let sec = self.sector(s, sz)?;
            if sec.range().contains(&global) {
                return Some(offset + global - sec.range.0 + 1);
            }
            offset += sec.len();
        }
        None
    }
}

/// The 64x64 change of basis whose rows are TAM vectors.
pub fn change_of_basis() -> CMatrix {
    tam_basis().transform.map(|x| Complex64::new(x, 0.0))
}

/// An unleaked single-DFS state `alpha(gamma|1> + delta|2>) + beta(gamma|3> + delta|4>)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DfsState {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl DfsState {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        let enc = alpha.norm_sqr() + beta.norm_sqr();
        let gauge = gamma.norm_sqr() + delta.norm_sqr();
        if (enc - 1.0).abs() > 1e-12 || (gauge - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitary((enc - 1.0).abs().max((gauge - 1.0).abs())));
        }
        Ok(DfsState { alpha, beta, gamma, delta })
    }

    /// Coefficients in the eight-vector single-DFS basis.
    pub fn basis_coefficients(&self) -> DVector<Complex64> {
        let mut c = DVector::zeros(8);
        c[0] = self.alpha * self.gamma;
        c[1] = self.alpha * self.delta;
        c[2] = self.beta * self.gamma;
        c[3] = self.beta * self.delta;
        c
    }

    /// Amplitudes over the three-qubit computational basis.
    pub fn amplitudes(&self) -> DVector<Complex64> {
        let coeffs = self.basis_coefficients();
        build_dfs_basis().iter().zip(coeffs.iter()).fold(DVector::zeros(8), |acc, (v, c)| acc + &v.amplitudes * *c)
    }
}
