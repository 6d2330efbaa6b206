//! Genetic search over pulse sequences.
//!
//! Each generation mutates every parent once (one of five kinds drawn from
//! the configured rates), mates shuffled parent pairs, pools parents,
//! mutants and offspring, and selects the next population with elitism and
//! weights `1 / (objective + lambda * length)`.

pub mod config;
pub mod evolve;
pub mod individual;
pub mod minimize;
pub mod mutation;
pub mod select;

pub use config::{LambdaStep, MinimizerSettings, MutationRates, SearchConfig};
pub use evolve::{evolve, Checkpoint, GenerationStats, Search, SearchOutcome};
pub use individual::Individual;
pub use minimize::{bfgs, refine, MinimizeResult, PowerProblem};
pub use mutation::{crossover, crossover_at, draw_insertion, random_sequence, MutationKind, Operators};
pub use select::{select, selection_weight, weighted_sample, WEIGHT_EPSILON};
