//! Mutation and mating operators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exchange::{PulseGate, PulseSequence, N_PAIRS};
use crate::search::config::{MinimizerSettings, SearchConfig};
use crate::search::individual::Individual;
use crate::search::minimize::refine;
use crate::targets::Objective;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    RefineOne,
    RefineTwo,
    RefineAll,
    Insert,
    Delete,
}

impl MutationKind {
    pub const ALL: [MutationKind; 5] = [
        MutationKind::RefineOne,
        MutationKind::RefineTwo,
        MutationKind::RefineAll,
        MutationKind::Insert,
        MutationKind::Delete,
    ];
}

/// Everything the operators need besides the random stream.
#[derive(Clone, Copy, Debug)]
pub struct Operators {
    pub objective: Objective,
    pub tight: MinimizerSettings,
    pub loose: MinimizerSettings,
    pub lambda: f64,
    pub max_sequence_length: usize,
}

impl Operators {
    pub fn new(config: &SearchConfig, lambda: f64) -> Self {
        Operators {
            objective: config.objective(),
            tight: config.tight,
            loose: config.loose,
            lambda,
            max_sequence_length: config.max_sequence_length,
        }
    }

    pub fn evaluate(&self, seq: PulseSequence) -> Individual {
        Individual::evaluate(seq, &self.objective, self.lambda)
    }

    fn refined(&self, seq: &PulseSequence, vars: Vec<usize>, settings: &MinimizerSettings) -> Individual {
        self.evaluate(refine(seq, self.objective, vars, settings))
    }

    /// Minimizes over the power of gate `index` alone.
    pub fn refine_one_at(&self, ind: &Individual, index: usize) -> Individual {
        self.refined(&ind.sequence, vec![index], &self.tight)
    }

    /// Minimizes jointly over gates `index` and `index + 1`.
    pub fn refine_two_at(&self, ind: &Individual, index: usize) -> Individual {
        self.refined(&ind.sequence, vec![index, index + 1], &self.tight)
    }

    pub fn refine_one(&self, ind: &Individual, rng: &mut impl Rng) -> Individual {
        if ind.is_empty() {
            return ind.clone();
        }
        let i = rng.random_range(0..ind.len());
        self.refine_one_at(ind, i)
    }

    /// Falls back to [`Operators::refine_one`] below two gates.
    pub fn refine_two(&self, ind: &Individual, rng: &mut impl Rng) -> Individual {
        if ind.len() < 2 {
            return self.refine_one(ind, rng);
        }
        let i = rng.random_range(0..ind.len() - 1);
        self.refine_two_at(ind, i)
    }

    /// Loose minimization over every power.
    pub fn refine_all(&self, ind: &Individual) -> Individual {
        self.refined(&ind.sequence, (0..ind.len()).collect(), &self.loose)
    }

    /// Random gate at a random slot, then refinement of its power. `None` at
    /// the length cap.
    pub fn insert_gate(&self, ind: &Individual, rng: &mut impl Rng) -> Option<Individual> {
        if ind.len() >= self.max_sequence_length {
            return None;
        }
        let (slot, gate) = draw_insertion(ind.len(), rng);
        let mut seq = ind.sequence.clone();
        seq.insert(slot, gate).expect("generated gate is valid");
        Some(self.refined(&seq, vec![slot], &self.tight))
    }

    /// Removes a random gate and refines its former neighbors. `None` on an
    /// empty sequence.
    pub fn delete_gate(&self, ind: &Individual, rng: &mut impl Rng) -> Option<Individual> {
        if ind.is_empty() {
            return None;
        }
        let slot = rng.random_range(0..ind.len());
        Some(self.delete_at(ind, slot))
    }

    pub fn delete_at(&self, ind: &Individual, slot: usize) -> Individual {
        let mut seq = ind.sequence.clone();
        seq.remove(slot);
        let vars = match (slot.checked_sub(1), slot < seq.len()) {
            (Some(before), true) => vec![before, slot],
            (Some(before), false) => vec![before],
            (None, true) => vec![slot],
            (None, false) => Vec::new(),
        };
        self.refined(&seq, vars, &self.tight)
    }

    /// Applies one mutation; the flag is false when it was a no-op.
    pub fn mutate(&self, ind: &Individual, kind: MutationKind, rng: &mut impl Rng) -> (Individual, bool) {
        match kind {
            MutationKind::RefineOne => (self.refine_one(ind, rng), true),
            MutationKind::RefineTwo => (self.refine_two(ind, rng), true),
            MutationKind::RefineAll => (self.refine_all(ind), true),
            MutationKind::Insert => self.insert_gate(ind, rng).map_or_else(|| (ind.clone(), false), |x| (x, true)),
            MutationKind::Delete => self.delete_gate(ind, rng).map_or_else(|| (ind.clone(), false), |x| (x, true)),
        }
    }

    /// Offspring: the start of one parent joined to the end of the other,
    /// `min(len a, len b)` gates long, then refined.
    pub fn mate(&self, a: &Individual, b: &Individual, rng: &mut impl Rng) -> Individual {
        let child = crossover(&a.sequence, &b.sequence, rng);
        self.refine_all(&self.evaluate(child))
    }
}

/// Uniform power in `(-1, 1]`.
pub fn random_power(rng: &mut impl Rng) -> f64 {
    1.0 - rng.random_range(0.0..2.0)
}

/// Uniform slot among `len + 1`, uniform pair, uniform power.
pub fn draw_insertion(len: usize, rng: &mut impl Rng) -> (usize, PulseGate) {
    let slot = rng.random_range(0..=len);
    (slot, PulseGate { pair: rng.random_range(0..N_PAIRS), power: random_power(rng) })
}

/// Splits at a uniform point; which parent leads is a coin flip.
pub fn crossover(a: &PulseSequence, b: &PulseSequence, rng: &mut impl Rng) -> PulseSequence {
    let (head, tail) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
    crossover_at(head, tail, rng.random_range(0..=a.len().min(b.len())))
}

/// `split` gates from the front of `head`, the rest from the back of `tail`.
pub fn crossover_at(head: &PulseSequence, tail: &PulseSequence, split: usize) -> PulseSequence {
    let len = head.len().min(tail.len());
    let split = split.min(len);
    let from_tail = len - split;
    head.gates()[..split].iter().chain(&tail.gates()[tail.len() - from_tail..]).copied().collect()
}

pub fn draw_kind(rates: &[f64; 5], rng: &mut impl Rng) -> MutationKind {
    let mut u: f64 = rng.random();
    for (kind, p) in MutationKind::ALL.iter().zip(rates) {
        if u < *p {
            return *kind;
        }
        u -= p;
    }
    MutationKind::Delete
}

pub fn random_sequence(len: usize, rng: &mut impl Rng) -> PulseSequence {
    (0..len).map(|_| PulseGate { pair: rng.random_range(0..N_PAIRS), power: random_power(rng) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cnot_sequence, lro_sequence};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn crossover_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert_eq!(crossover(&cnot_sequence(), &lro_sequence(), &mut rng).len(), 22);
        }
    }

    #[test]
    fn self_crossover_reproduces_parent() {
        let x = lro_sequence();
        for k in 0..=x.len() {
            assert_eq!(crossover_at(&x, &x, k), x);
        }
    }

    #[test]
    fn random_power_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let p = random_power(&mut rng);
            assert!(p > -1.0 && p <= 1.0);
        }
    }
}
