//! JSON representations of sequences, block unitaries and the basis.

use std::fs;
use std::path::Path;

use nalgebra::{Dim, Matrix, RawStorage};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{tam_basis, QuantumNumbers, LAYOUT};
use crate::error::{Error, Result};
use crate::exchange::{Block5, Block9, BlockUnitary, Generator, PulseSequence};
use crate::operators::CMatrix;

/// Complex matrix as nested rows of `[re, im]`.
pub type ComplexGrid = Vec<Vec<[f64; 2]>>;

pub fn to_grid<R: Dim, C: Dim, S: RawStorage<Complex64, R, C>>(m: &Matrix<Complex64, R, C, S>) -> ComplexGrid {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// Parses a rectangular grid.
pub fn from_grid(g: &ComplexGrid) -> Result<CMatrix> {
    let rows = g.len();
    let cols = g.first().map_or(0, Vec::len);
    if g.iter().any(|r| r.len() != cols) {
        return Err(Error::Config("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| Complex64::new(g[i][j][0], g[i][j][1])))
}

/// On-disk pulse sequence: the qubit layout plus time-ordered gates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub layout: Vec<String>,
    pub gates: PulseSequence,
}

impl SequenceFile {
    pub fn new(gates: PulseSequence) -> Self {
        SequenceFile { layout: LAYOUT.iter().map(|s| s.to_string()).collect(), gates }
    }

    /// Rejects layouts other than the supported linear arrangement.
    pub fn into_sequence(self) -> Result<PulseSequence> {
        if self.layout.len() != LAYOUT.len() || self.layout.iter().zip(LAYOUT).any(|(a, b)| a != b) {
            return Err(Error::Layout(self.layout));
        }
        Ok(self.gates)
    }

    pub fn parse(text: &str) -> Result<PulseSequence> {
        serde_json::from_str::<SequenceFile>(text)?.into_sequence()
    }

    pub fn to_json(seq: &PulseSequence) -> String {
        serde_json::to_string_pretty(&SequenceFile::new(seq.clone())).expect("sequence serializes")
    }
}

pub fn read_sequence(path: impl AsRef<Path>) -> Result<PulseSequence> {
    SequenceFile::parse(&fs::read_to_string(path)?)
}

pub fn write_sequence(path: impl AsRef<Path>, seq: &PulseSequence) -> Result<()> {
    fs::write(path, SequenceFile::to_json(seq) + "\n")?;
    Ok(())
}

/// Serialized [`BlockUnitary`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockUnitaryJson {
    pub generator: Generator,
    pub b0: ComplexGrid,
    pub b1: ComplexGrid,
    pub b2: ComplexGrid,
    pub b3_phase: [f64; 2],
}

impl BlockUnitaryJson {
    pub fn new(u: &BlockUnitary, generator: Generator) -> Self {
        BlockUnitaryJson {
            generator,
            b0: to_grid(&u.b0),
            b1: to_grid(&u.b1),
            b2: to_grid(&u.b2),
            b3_phase: [u.b3_phase.re, u.b3_phase.im],
        }
    }

    pub fn to_blocks(&self) -> Result<BlockUnitary> {
        let b0 = from_grid(&self.b0)?;
        let b1 = from_grid(&self.b1)?;
        let b2 = from_grid(&self.b2)?;
        if b0.shape() != (5, 5) || b1.shape() != (9, 9) || b2.shape() != (5, 5) {
            return Err(Error::Config("block shapes must be 5x5, 9x9, 5x5".into()));
        }
        Ok(BlockUnitary {
            b0: Block5::from_fn(|i, j| b0[(i, j)]),
            b1: Block9::from_fn(|i, j| b1[(i, j)]),
            b2: Block5::from_fn(|i, j| b2[(i, j)]),
            b3_phase: Complex64::new(self.b3_phase[0], self.b3_phase[1]),
        })
    }
}

/// One TAM basis vector with its labels and amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub index: usize,
    /// Position in the published spin-0/1/2 tables, when listed there.
    pub table_index: Option<usize>,
    pub labels: QuantumNumbers,
    pub amplitudes: Vec<[f64; 2]>,
}

pub fn basis_entries() -> Vec<BasisEntry> {
    let tam = tam_basis();
    tam.vectors
        .iter()
        .enumerate()
        .map(|(i, v)| BasisEntry {
            index: v.index,
            table_index: tam.table_index(i),
            labels: v.labels,
            amplitudes: v.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exchange::PulseGate;

    #[test]
    fn sequence_round_trip() {
        let seq: PulseSequence = [PulseGate { pair: 2, power: 0.25 }].into_iter().collect();
        let text = SequenceFile::to_json(&seq);
        assert_eq!(SequenceFile::parse(&text).unwrap(), seq);
    }

    #[test]
    fn rejects_foreign_layout() {
        let text = r#"{"layout":["A1","A2","A3","B1","B2","B3"],"gates":[]}"#;
        assert!(matches!(SequenceFile::parse(text), Err(Error::Layout(_))));
    }

    #[test]
    fn rejects_bad_pair() {
        let text = r#"{"layout":["A3","A2","A1","B1","B2","B3"],"gates":[{"pair":5,"power":0.1}]}"#;
        assert!(SequenceFile::parse(text).is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let u = BlockUnitary::identity().scale(Complex64::from_polar(1.0, 0.3));
        let json = BlockUnitaryJson::new(&u, Generator::Exchange);
        assert_eq!(json.to_blocks().unwrap(), u);
    }
}
