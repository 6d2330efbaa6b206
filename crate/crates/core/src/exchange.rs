//! Exchange gates, their block-diagonal representation, and sequence
//! bookkeeping (merging, time-step scheduling).
//!
//! An exchange-built operator written in the TAM basis is block diagonal:
//! one 5x5 spin-0 block, three identical 9x9 spin-1 blocks, five identical
//! 5x5 spin-2 blocks and a phase on the spin-3 sector. [`BlockUnitary`]
//! keeps one representative of each: `S_z,tot = 0, -1, -2` respectively.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SMatrix, SymmetricEigen};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::basis::{tam_basis, DIM, LAYOUT, N_QUBITS};
use crate::error::{Error, Result};
use crate::operators::{heisenberg_coupling, swap_bits, CMatrix};

pub const N_PAIRS: usize = N_QUBITS - 1;

/// Largest off-block entry tolerated by [`blocks_from_full`].
pub const BLOCK_LEAKAGE_TOL: f64 = 1e-10;

pub type Block5 = SMatrix<Complex64, 5, 5>;
pub type Block9 = SMatrix<Complex64, 9, 9>;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Exchange pulse between layout positions `pair` and `pair + 1`, raised to
/// a real swap power.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseGate {
    pub pair: usize,
    pub power: f64,
}

impl PulseGate {
    pub fn new(pair: usize, power: f64) -> Result<Self> {
        let g = PulseGate { pair, power };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pair >= N_PAIRS || !self.power.is_finite() {
            return Err(Error::InvalidGate { pair: self.pair, power: self.power });
        }
        Ok(())
    }

    pub fn qubits(&self) -> (usize, usize) {
        (self.pair, self.pair + 1)
    }

    /// Whether the two gates touch a common qubit.
    pub fn overlaps(&self, other: &PulseGate) -> bool {
        self.pair.abs_diff(other.pair) <= 1
    }

    pub fn inverse(&self) -> PulseGate {
        PulseGate { pair: self.pair, power: -self.power }
    }
}

/// Time-ordered exchange gates; the first gate acts first.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PulseGate>", into = "Vec<PulseGate>")]
pub struct PulseSequence {
    gates: Vec<PulseGate>,
}

impl TryFrom<Vec<PulseGate>> for PulseSequence {
    type Error = Error;

    fn try_from(gates: Vec<PulseGate>) -> Result<Self> {
        PulseSequence::new(gates)
    }
}

impl From<PulseSequence> for Vec<PulseGate> {
    fn from(seq: PulseSequence) -> Self {
        seq.gates
    }
}

impl FromIterator<PulseGate> for PulseSequence {
    /// Panics on an invalid gate; use [`PulseSequence::new`] for untrusted input.
    fn from_iter<I: IntoIterator<Item = PulseGate>>(iter: I) -> Self {
        PulseSequence::new(iter.into_iter().collect()).expect("valid gates")
    }
}

impl PulseSequence {
    pub fn new(gates: Vec<PulseGate>) -> Result<Self> {
        gates.iter().try_for_each(PulseGate::validate)?;
        Ok(PulseSequence { gates })
    }

    pub fn empty() -> Self {
        PulseSequence::default()
    }

    pub fn gates(&self) -> &[PulseGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PulseGate> {
        self.gates.iter()
    }

    pub fn powers(&self) -> Vec<f64> {
        self.gates.iter().map(|g| g.power).collect()
    }

    pub fn total_power(&self) -> f64 {
        self.gates.iter().map(|g| g.power).sum()
    }

    /// Copy of the sequence with every power replaced.
    pub fn with_powers(&self, powers: &[f64]) -> PulseSequence {
        assert_eq!(powers.len(), self.gates.len());
        let gates = self.gates.iter().zip(powers).map(|(g, &p)| PulseGate { pair: g.pair, power: p }).collect();
        PulseSequence { gates }
    }

    pub fn set_power(&mut self, index: usize, power: f64) {
        debug_assert!(power.is_finite());
        self.gates[index].power = power;
    }

    pub fn insert(&mut self, index: usize, gate: PulseGate) -> Result<()> {
        gate.validate()?;
        self.gates.insert(index, gate);
        Ok(())
    }

    pub fn remove(&mut self, index: usize) -> PulseGate {
        self.gates.remove(index)
    }

    pub fn push(&mut self, gate: PulseGate) -> Result<()> {
        gate.validate()?;
        self.gates.push(gate);
        Ok(())
    }

    /// Gates in reverse order with negated powers.
    pub fn inverse(&self) -> PulseSequence {
        PulseSequence { gates: self.gates.iter().rev().map(PulseGate::inverse).collect() }
    }

    pub fn concat(&self, other: &PulseSequence) -> PulseSequence {
        PulseSequence { gates: self.gates.iter().chain(other.gates.iter()).copied().collect() }
    }
}

/// Which Hamiltonian a swap power exponentiates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    /// `H^ex = 1/4 sigma.sigma`; `p = 1` is SWAP up to `e^{-i pi/4}`.
    #[default]
    #[serde(rename = "ex")]
    Exchange,
    /// `H^sw = H^ex - 1/4`; `p = 1` is exactly SWAP.
    #[serde(rename = "sw")]
    Swap,
}

impl std::str::FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ex" | "exchange" => Ok(Generator::Exchange),
            "sw" | "swap" => Ok(Generator::Swap),
            other => Err(format!("unknown generator `{other}` (expected ex or sw)")),
        }
    }
}

/// `exp(-i pi p H)` written as `phase * (cos I - i sin SWAP)`.
///
/// `H^ex = SWAP/2 - 1/4`, and `SWAP^2 = I` gives
/// `exp(-i pi p H^ex) = e^{i pi p/4} (cos(pi p/2) I - i sin(pi p/2) SWAP)`.
fn gate_factors(power: f64, generator: Generator) -> (Complex64, f64, f64) {
    let shift = match generator {
        Generator::Exchange => PI * power / 4.0,
        Generator::Swap => PI * power / 2.0,
    };
    let half = PI * power / 2.0;
    (Complex64::from_polar(1.0, shift), half.cos(), half.sin())
}

/// Reduced representation of an exchange-built operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockUnitary {
    pub b0: Block5,
    pub b1: Block9,
    pub b2: Block5,
    pub b3_phase: Complex64,
}

impl Default for BlockUnitary {
    fn default() -> Self {
        Self::identity()
    }
}

impl BlockUnitary {
    pub fn identity() -> Self {
        BlockUnitary { b0: Block5::identity(), b1: Block9::identity(), b2: Block5::identity(), b3_phase: ONE }
    }

    /// Operator product `self * rhs` (rhs acts first).
    pub fn compose(&self, rhs: &BlockUnitary) -> BlockUnitary {
        BlockUnitary {
            b0: self.b0 * rhs.b0,
            b1: self.b1 * rhs.b1,
            b2: self.b2 * rhs.b2,
            b3_phase: self.b3_phase * rhs.b3_phase,
        }
    }

    pub fn adjoint(&self) -> BlockUnitary {
        BlockUnitary {
            b0: self.b0.adjoint(),
            b1: self.b1.adjoint(),
            b2: self.b2.adjoint(),
            b3_phase: self.b3_phase.conj(),
        }
    }

    pub fn scale(&self, phase: Complex64) -> BlockUnitary {
        BlockUnitary { b0: self.b0 * phase, b1: self.b1 * phase, b2: self.b2 * phase, b3_phase: self.b3_phase * phase }
    }

    /// Largest Frobenius deviation of `B^dag B` from the identity over all blocks.
    pub fn unitarity_error(&self) -> f64 {
        let e0 = (self.b0.adjoint() * self.b0 - Block5::identity()).norm();
        let e1 = (self.b1.adjoint() * self.b1 - Block9::identity()).norm();
        let e2 = (self.b2.adjoint() * self.b2 - Block5::identity()).norm();
        e0.max(e1).max(e2).max((self.b3_phase.norm() - 1.0).abs())
    }

    /// Per-block Frobenius distances `[b0, b1, b2, b3]`.
    pub fn block_distances(&self, other: &BlockUnitary) -> [f64; 4] {
        [
            (self.b0 - other.b0).norm(),
            (self.b1 - other.b1).norm(),
            (self.b2 - other.b2).norm(),
            (self.b3_phase - other.b3_phase).norm(),
        ]
    }

    /// Per-block distances after removing the best global phase of each block.
    pub fn block_distances_up_to_phase(&self, other: &BlockUnitary) -> [f64; 4] {
        fn d<const N: usize>(a: &SMatrix<Complex64, N, N>, b: &SMatrix<Complex64, N, N>) -> f64 {
            let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
            let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
            (a * phase - b).norm()
        }
        [d(&self.b0, &other.b0), d(&self.b1, &other.b1), d(&self.b2, &other.b2), 0.0]
    }

    /// Left-multiplies by one exchange gate in place.
    pub fn apply_gate(&mut self, gate: &PulseGate, generator: Generator) {
        let (phase, c, s) = gate_factors(gate.power, generator);
        let swaps = &PAIR_SWAPS[gate.pair];
        let a = phase * c;
        let b = phase * Complex64::new(0.0, -s);
        self.b0 = self.b0 * a + swaps.s0 * self.b0 * b;
        self.b1 = self.b1 * a + swaps.s1 * self.b1 * b;
        self.b2 = self.b2 * a + swaps.s2 * self.b2 * b;
        // SWAP is +1 on the fully symmetric spin-3 sector
        self.b3_phase *= a + b;
    }
}

/// SWAP of one adjacent pair restricted to the representative blocks.
struct PairSwaps {
    s0: Block5,
    s1: Block9,
    s2: Block5,
}

fn swap_block<const N: usize>(pair: usize, s_tot: i32, sz_tot: i32) -> SMatrix<Complex64, N, N> {
    let tam = tam_basis();
    let sector = tam.sector(s_tot, sz_tot).expect("sector exists");
    assert_eq!(sector.len(), N);
    let rows = sector.range.0;
    SMatrix::from_fn(|i, j| {
        let vi = &tam.vectors[rows + i].amplitudes;
        let vj = &tam.vectors[rows + j].amplitudes;
        let mut acc = 0.0;
        for idx in 0..DIM {
            acc += vi[idx].re * vj[swap_bits(idx, pair, pair + 1)].re;
        }
        Complex64::new(acc, 0.0)
    })
}

static PAIR_SWAPS: Lazy<Vec<PairSwaps>> = Lazy::new(|| {
    (0..N_PAIRS)
        .map(|k| PairSwaps { s0: swap_block(k, 0, 0), s1: swap_block(k, 1, -1), s2: swap_block(k, 2, -2) })
        .collect()
});

/// One gate in block form.
pub fn gate_unitary(gate: &PulseGate, generator: Generator) -> BlockUnitary {
    let mut u = BlockUnitary::identity();
    u.apply_gate(gate, generator);
    u
}

/// Time-ordered product of a sequence; the last gate is leftmost.
pub fn sequence_unitary(seq: &PulseSequence, generator: Generator) -> BlockUnitary {
    let mut u = BlockUnitary::identity();
    for g in seq.iter() {
        u.apply_gate(g, generator);
    }
    u
}

/// `H^ex_{m,n} = 1/4 (sx.sx + sy.sy + sz.sz)` on the six-qubit register.
pub fn exchange_hamiltonian(m: usize, n: usize) -> Result<CMatrix> {
    if m == n || m >= N_QUBITS || n >= N_QUBITS {
        return Err(Error::QubitIndex(m, n));
    }
    Ok(heisenberg_coupling(N_QUBITS, m, n))
}

static PAIR_EIGEN: Lazy<Vec<SymmetricEigen<f64, nalgebra::Dyn>>> = Lazy::new(|| {
    (0..N_PAIRS)
        .map(|k| {
            let h = exchange_hamiltonian(k, k + 1).expect("adjacent pair");
            SymmetricEigen::new(h.map(|z| z.re))
        })
        .collect()
});

/// `exp(-i pi p H)` in the 64-dimensional computational basis, by
/// eigendecomposition of the pair Hamiltonian.
pub fn full_gate_unitary(gate: &PulseGate, generator: Generator) -> CMatrix {
    let eig = &PAIR_EIGEN[gate.pair];
    let shift = match generator {
        Generator::Exchange => 0.0,
        Generator::Swap => -0.25,
    };
    let vecs = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues.map(|lambda| Complex64::from_polar(1.0, -PI * gate.power * (lambda + shift))),
    );
    &vecs * phases * vecs.transpose()
}

/// Full 64-dimensional product of a sequence.
pub fn full_sequence_unitary(seq: &PulseSequence, generator: Generator) -> CMatrix {
    seq.iter().fold(CMatrix::identity(DIM, DIM), |acc, g| full_gate_unitary(g, generator) * acc)
}

/// Block of a TAM-basis operator on one `(S_tot, S_z,tot)` sector.
pub fn sector_block(w: &CMatrix, s_tot: i32, sz_tot: i32) -> CMatrix {
    let sector = tam_basis().sector(s_tot, sz_tot).expect("sector exists");
    let r = sector.range.0;
    w.view((r, r), (sector.len(), sector.len())).into_owned()
}

/// Largest entry coupling two different sectors of a TAM-basis operator.
pub fn off_block_leakage(w: &CMatrix) -> f64 {
    let tam = tam_basis();
    let mut owner = [0usize; DIM];
    for (k, s) in tam.sectors.iter().enumerate() {
        owner[s.range()].fill(k);
    }
    let mut worst = 0.0f64;
    for i in 0..DIM {
        for j in 0..DIM {
            if owner[i] != owner[j] {
                worst = worst.max(w[(i, j)].norm());
            }
        }
    }
    worst
}

/// Extracts the representative blocks of a 64x64 computational-basis unitary.
pub fn blocks_from_full(u: &CMatrix) -> Result<BlockUnitary> {
    let w = tam_basis().to_tam(u);
    let leak = off_block_leakage(&w);
    if leak > BLOCK_LEAKAGE_TOL {
        return Err(Error::OffBlockLeakage(leak));
    }
    let b0 = sector_block(&w, 0, 0);
    let b1 = sector_block(&w, 1, -1);
    let b2 = sector_block(&w, 2, -2);
    let b3 = sector_block(&w, 3, -3);
    Ok(BlockUnitary {
        b0: Block5::from_fn(|i, j| b0[(i, j)]),
        b1: Block9::from_fn(|i, j| b1[(i, j)]),
        b2: Block5::from_fn(|i, j| b2[(i, j)]),
        b3_phase: b3[(0, 0)],
    })
}

/// Reduces a swap power into `(-1, 1]`.
///
/// Shifting the power by 2 multiplies an exchange gate by `-i` and leaves a
/// swap-generated gate unchanged, so objectives are unaffected.
pub fn canonical_power(p: f64) -> f64 {
    let r = p.rem_euclid(2.0);
    if r > 1.0 {
        r - 2.0
    } else {
        r
    }
}

/// Powers below this magnitude are dropped by [`merge_gates`].
pub const ZERO_POWER_TOL: f64 = 1e-12;

/// Combines same-pair gates separated only by gates on disjoint pairs.
///
/// The earlier gate is folded into the later one, all powers are
/// canonicalized, and zero-power gates are removed; this repeats until no
/// change occurs.
pub fn merge_gates(seq: &PulseSequence) -> PulseSequence {
    let mut gates: Vec<PulseGate> =
        seq.gates.iter().map(|g| PulseGate { pair: g.pair, power: canonical_power(g.power) }).collect();
    loop {
        let mut changed = false;
        let before = gates.len();
        gates.retain(|g| canonical_power(g.power).abs() > ZERO_POWER_TOL);
        changed |= gates.len() != before;

        let mut i = 1;
        while i < gates.len() {
            let target = gates[i];
            let partner = (0..i).rev().find(|&j| gates[j].overlaps(&target));
            match partner {
                Some(j) if gates[j].pair == target.pair => {
                    gates[i].power = canonical_power(gates[j].power + target.power);
                    gates.remove(j);
                    changed = true;
                }
                _ => i += 1,
            }
        }
        if !changed {
            break;
        }
    }
    PulseSequence { gates }
}

/// Greedy earliest-start layering; gate indices per time step.
pub fn schedule_layers(seq: &PulseSequence) -> Vec<Vec<usize>> {
    let mut ready = [0usize; N_QUBITS];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (idx, g) in seq.iter().enumerate() {
        let (a, b) = g.qubits();
        let step = ready[a].max(ready[b]);
        if layers.len() <= step {
            layers.resize_with(step + 1, Vec::new);
        }
        layers[step].push(idx);
        ready[a] = step + 1;
        ready[b] = step + 1;
    }
    layers
}

/// Number of parallel time steps under greedy scheduling.
pub fn schedule_time_steps(seq: &PulseSequence) -> usize {
    schedule_layers(seq).len()
}

/// Layout names of the qubits a pair index couples.
pub fn pair_names(pair: usize) -> (&'static str, &'static str) {
    (LAYOUT[pair], LAYOUT[pair + 1])
}
