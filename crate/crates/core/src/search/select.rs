//! Natural selection: elitism plus weighted sampling without replacement.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::exchange::merge_gates;
use crate::search::individual::Individual;
use crate::search::mutation::Operators;

/// Floor on penalized values before inversion, so exact solutions keep a
/// finite weight.
pub const WEIGHT_EPSILON: f64 = 1e-12;

pub fn selection_weight(ind: &Individual) -> f64 {
    1.0 / ind.penalized.max(WEIGHT_EPSILON)
}

/// Indices of `count` members drawn without replacement, weight
/// `1 / max(penalized, eps)`.
pub fn weighted_sample(pool: &[Individual], count: usize, rng: &mut impl Rng) -> Vec<usize> {
    let indices: Vec<usize> = (0..pool.len()).collect();
    let count = count.min(pool.len());
    indices
        .choose_multiple_weighted(rng, count, |&i| selection_weight(&pool[i]))
        .expect("weights are finite and positive")
        .copied()
        .collect()
}

/// Index of the member with the lowest penalized value (ties: first).
pub fn best_index(pool: &[Individual]) -> Option<usize> {
    (0..pool.len()).min_by(|&a, &b| pool[a].penalized.total_cmp(&pool[b].penalized))
}

/// Keeps the best member, samples the rest, then merges same-pair gates in
/// every survivor and re-evaluates it.
pub fn select(pool: Vec<Individual>, size: usize, ops: &Operators, rng: &mut impl Rng) -> Vec<Individual> {
    let Some(best) = best_index(&pool) else { return Vec::new() };
    let mut rest = pool;
    let elite = rest.swap_remove(best);
    let picked = weighted_sample(&rest, size.saturating_sub(1), rng);
    std::iter::once(elite)
        .chain(picked.into_iter().map(|i| rest[i].clone()))
        .map(|ind| {
            let merged = merge_gates(&ind.sequence);
            if merged == ind.sequence {
                ind
            } else {
                ops.evaluate(merged)
            }
        })
        .collect()
}
