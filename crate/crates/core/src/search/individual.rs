use serde::{Deserialize, Serialize};

use crate::exchange::{sequence_unitary, Generator, PulseSequence};
use crate::targets::Objective;

/// A sequence with its cached raw and penalized objective values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub sequence: PulseSequence,
    pub objective: f64,
    pub penalized: f64,
}

impl Individual {
    pub fn evaluate(sequence: PulseSequence, objective: &Objective, lambda: f64) -> Self {
        let value = objective.value(&sequence_unitary(&sequence, Generator::Swap));
        let penalized = value + lambda * sequence.len() as f64;
        Individual { sequence, objective: value, penalized }
    }

    /// Recomputes the penalty for a new `lambda` without re-simulating.
    pub fn repenalize(&mut self, lambda: f64) {
        self.penalized = self.objective + lambda * self.sequence.len() as f64;
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }
}
