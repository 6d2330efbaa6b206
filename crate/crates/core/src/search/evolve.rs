//! The generation loop, statistics and checkpoints.

use std::collections::HashSet;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::search::config::SearchConfig;
use crate::search::individual::Individual;
use crate::search::mutation::{draw_kind, random_sequence, Operators};
use crate::search::select::{best_index, select};

/// Random stream purposes within one generation.
#[derive(Clone, Copy)]
#[repr(u64)]
enum Stream {
    Init = 0,
    Mutate = 1,
    Pairing = 2,
    Mate = 3,
    Select = 4,
}

/// Independent generator for `(seed, generation, purpose, index)`.
fn stream(seed: u64, generation: usize, purpose: Stream, index: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(generation as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(purpose as u64).to_le_bytes());
    key[24..].copy_from_slice(&(index as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub lambda: f64,
    pub best_penalized: f64,
    pub best_objective: f64,
    pub best_length: usize,
    pub mean_length: f64,
    /// Fraction of distinct gate-pair strings in the population.
    pub diversity: f64,
    /// Mutations that could not apply (insert at the cap, delete on empty).
    pub noop_mutations: usize,
    pub wall_time_s: f64,
}

/// Resumable search state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config: SearchConfig,
    /// Number of completed generations.
    pub generation: usize,
    pub population: Vec<Individual>,
    pub stats: Vec<GenerationStats>,
}

impl Checkpoint {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let cp: Checkpoint = serde_json::from_str(&fs::read_to_string(path)?)?;
        cp.config.validate()?;
        Ok(cp)
    }

    pub fn best(&self) -> Option<&Individual> {
        best_index(&self.population).map(|i| &self.population[i])
    }
}

pub struct Search {
    state: Checkpoint,
}

impl Search {
    /// Builds and evaluates the initial population: seeds first, then random
    /// sequences with lengths in the configured range.
    pub fn new(config: SearchConfig) -> Result<Self> {
        config.validate()?;
        let ops = Operators::new(&config, config.lambda_at(0));
        let n = config.population_size;
        let (lo, hi) = config.initial_length;
        let population: Vec<Individual> = (0..n)
            .into_par_iter()
            .map(|i| match config.seeds.get(i) {
                Some(seq) => ops.evaluate(seq.clone()),
                None => {
                    let mut rng = stream(config.rng_seed, 0, Stream::Init, i);
                    let len = rng.random_range(lo..=hi);
                    ops.evaluate(random_sequence(len, &mut rng))
                }
            })
            .collect();
        Ok(Search { state: Checkpoint { config, generation: 0, population, stats: Vec::new() } })
    }

    pub fn resume(checkpoint: Checkpoint) -> Result<Self> {
        checkpoint.config.validate()?;
        Ok(Search { state: checkpoint })
    }

    pub fn state(&self) -> &Checkpoint {
        &self.state
    }

    pub fn into_state(self) -> Checkpoint {
        self.state
    }

    pub fn best(&self) -> &Individual {
        self.state.best().expect("population is never empty")
    }

    pub fn is_done(&self) -> bool {
        let cfg = &self.state.config;
        self.state.generation >= cfg.max_generations || self.best().objective < cfg.target_tolerance
    }

    /// Runs one generation: mutate every parent, mate shuffled parent pairs,
    /// select from parents, mutants and offspring.
    pub fn step(&mut self) -> GenerationStats {
        let start = Instant::now();
        let cfg = &self.state.config;
        let gen = self.state.generation + 1;
        let seed = cfg.rng_seed;
        let lambda = cfg.lambda_at(gen);
        let ops = Operators::new(cfg, lambda);
        let rates = cfg.mutation.as_array();

        let mut parents = std::mem::take(&mut self.state.population);
        parents.iter_mut().for_each(|p| p.repenalize(lambda));

        let mutants: Vec<(Individual, bool)> = parents
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let mut rng = stream(seed, gen, Stream::Mutate, i);
                let kind = draw_kind(&rates, &mut rng);
                ops.mutate(p, kind, &mut rng)
            })
            .collect();
        let noop_mutations = mutants.iter().filter(|(_, applied)| !applied).count();

        let mut order: Vec<usize> = (0..parents.len()).collect();
        order.shuffle(&mut stream(seed, gen, Stream::Pairing, 0));
        let offspring: Vec<Individual> = order
            .par_chunks_exact(2)
            .enumerate()
            .filter(|(_, pair)| !parents[pair[0]].is_empty() && !parents[pair[1]].is_empty())
            .map(|(j, pair)| ops.mate(&parents[pair[0]], &parents[pair[1]], &mut stream(seed, gen, Stream::Mate, j)))
            .collect();

        let mut pool = parents;
        pool.extend(mutants.into_iter().map(|(m, _)| m));
        pool.extend(offspring);
        let size = cfg.population_size;
        let population = select(pool, size, &ops, &mut stream(seed, gen, Stream::Select, 0));

        let best = &population[best_index(&population).expect("non-empty")];
        let distinct: HashSet<Vec<usize>> =
            population.iter().map(|p| p.sequence.iter().map(|g| g.pair).collect()).collect();
        let stats = GenerationStats {
            generation: gen,
            lambda,
            best_penalized: best.penalized,
            best_objective: best.objective,
            best_length: best.len(),
            mean_length: population.iter().map(|p| p.len() as f64).sum::<f64>() / population.len() as f64,
            diversity: distinct.len() as f64 / population.len() as f64,
            noop_mutations,
            wall_time_s: start.elapsed().as_secs_f64(),
        };
        self.state.population = population;
        self.state.generation = gen;
        self.state.stats.push(stats.clone());
        stats
    }

    /// Steps until done, handing each generation's stats to `on_generation`.
    pub fn run(&mut self, mut on_generation: impl FnMut(&GenerationStats, &Checkpoint)) -> &Individual {
        while !self.is_done() {
            let stats = self.step();
            on_generation(&stats, &self.state);
        }
        self.best()
    }
}

/// Best individual plus per-generation statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best: Individual,
    pub stats: Vec<GenerationStats>,
    pub generations: usize,
}

/// Runs a full search from scratch.
pub fn evolve(config: SearchConfig) -> Result<SearchOutcome> {
    let mut search = Search::new(config)?;
    search.run(|_, _| {});
    let state = search.into_state();
    let best = state.best().expect("non-empty").clone();
    Ok(SearchOutcome { best, stats: state.stats, generations: state.generation })
}
