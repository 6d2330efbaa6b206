//! Search configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::PulseSequence;
use crate::targets::{Objective, TargetKind};

/// Probabilities of the five mutation kinds; must sum to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MutationRates {
    pub refine_one: f64,
    pub refine_two: f64,
    pub refine_all: f64,
    pub insert: f64,
    pub delete: f64,
}

impl Default for MutationRates {
    fn default() -> Self {
        MutationRates { refine_one: 0.08, refine_two: 0.08, refine_all: 0.04, insert: 0.40, delete: 0.40 }
    }
}

impl MutationRates {
    pub fn as_array(&self) -> [f64; 5] {
        [self.refine_one, self.refine_two, self.refine_all, self.insert, self.delete]
    }

    fn validate(&self) -> Result<()> {
        let p = self.as_array();
        if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Config("mutation probabilities must be non-negative".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("mutation probabilities sum to {total}, expected 1")));
        }
        Ok(())
    }
}

/// Local minimizer settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizerSettings {
    pub max_iterations: usize,
    /// Central finite-difference step in swap power.
    pub gradient_step: f64,
    /// Stop once the gradient norm of the surrogate falls below this.
    pub gradient_tol: f64,
}

impl MinimizerSettings {
    /// Used by refine-one and refine-two.
    pub const TIGHT: MinimizerSettings =
        MinimizerSettings { max_iterations: 100, gradient_step: 1e-6, gradient_tol: 1e-14 };
    /// Used by refine-all and after mating: capped iterations.
    pub const LOOSE: MinimizerSettings =
        MinimizerSettings { max_iterations: 30, gradient_step: 1e-6, gradient_tol: 1e-10 };

    fn validate(&self, name: &str) -> Result<()> {
        let ok = self.max_iterations > 0
            && self.gradient_step.is_finite()
            && self.gradient_step > 0.0
            && self.gradient_tol.is_finite()
            && self.gradient_tol >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid {name} minimizer settings")))
        }
    }
}

/// Gate penalty `lambda` in effect from `generation` onward.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaStep {
    pub generation: usize,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub target: TargetKind,
    /// Tie `{f}` to `{h}` in the leakage-reduction objective.
    pub constrain_f_equals_h: bool,
    pub population_size: usize,
    pub mutation: MutationRates,
    pub gate_penalty: f64,
    /// Piecewise-constant overrides of `gate_penalty`, by starting generation.
    pub lambda_schedule: Vec<LambdaStep>,
    pub max_generations: usize,
    pub rng_seed: u64,
    pub tight: MinimizerSettings,
    pub loose: MinimizerSettings,
    pub max_sequence_length: usize,
    /// Inclusive length range of random initial sequences.
    pub initial_length: (usize, usize),
    /// Stop once the best raw objective is below this.
    pub target_tolerance: f64,
    /// Sequences placed in the initial population before random filling.
    pub seeds: Vec<PulseSequence>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            target: TargetKind::Cnot,
            constrain_f_equals_h: true,
            population_size: 64,
            mutation: MutationRates::default(),
            gate_penalty: 1e-4,
            lambda_schedule: Vec::new(),
            max_generations: 200,
            rng_seed: 0,
            tight: MinimizerSettings::TIGHT,
            loose: MinimizerSettings::LOOSE,
            max_sequence_length: 60,
            initial_length: (20, 34),
            target_tolerance: 0.0,
            seeds: Vec::new(),
        }
    }
}

impl SearchConfig {
    pub fn new(target: TargetKind) -> Self {
        SearchConfig { target, ..Default::default() }
    }

    pub fn objective(&self) -> Objective {
        Objective { target: self.target, constrain_f_equals_h: self.constrain_f_equals_h }
    }

    /// Gate penalty in effect at a generation.
    pub fn lambda_at(&self, generation: usize) -> f64 {
        self.lambda_schedule
            .iter()
            .filter(|s| s.generation <= generation)
            .max_by_key(|s| s.generation)
            .map_or(self.gate_penalty, |s| s.lambda)
    }

    pub fn validate(&self) -> Result<()> {
        self.mutation.validate()?;
        self.tight.validate("tight")?;
        self.loose.validate("loose")?;
        if self.population_size == 0 {
            return Err(Error::Config("population_size must be positive".into()));
        }
        let lambdas = std::iter::once(self.gate_penalty).chain(self.lambda_schedule.iter().map(|s| s.lambda));
        if lambdas.into_iter().any(|l| !l.is_finite() || l < 0.0) {
            return Err(Error::Config("gate penalty must be a non-negative number".into()));
        }
        let (lo, hi) = self.initial_length;
        if lo == 0 || lo > hi || hi > self.max_sequence_length {
            return Err(Error::Config(format!(
                "initial_length ({lo}, {hi}) must satisfy 1 <= min <= max <= max_sequence_length"
            )));
        }
        if self.seeds.iter().any(|s| s.len() > self.max_sequence_length) {
            return Err(Error::Config("seed sequence longer than max_sequence_length".into()));
        }
        if !self.target_tolerance.is_finite() || self.target_tolerance < 0.0 {
            return Err(Error::Config("target_tolerance must be non-negative".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SearchConfig::default().validate().unwrap();
    }

    #[test]
    fn lambda_schedule_is_piecewise_constant() {
        let c = SearchConfig {
            lambda_schedule: vec![
                LambdaStep { generation: 10, lambda: 1e-3 },
                LambdaStep { generation: 20, lambda: 0.0 },
            ],
            ..SearchConfig::default()
        };
        assert_eq!(c.lambda_at(0), 1e-4);
        assert_eq!(c.lambda_at(10), 1e-3);
        assert_eq!(c.lambda_at(19), 1e-3);
        assert_eq!(c.lambda_at(25), 0.0);
    }

    #[test]
    fn rejects_bad_rates() {
        let mut c = SearchConfig::default();
        c.mutation.insert = 0.5;
        assert!(c.validate().is_err());
    }

    #[test]
    fn partial_json_uses_defaults() {
        let c: SearchConfig = serde_json::from_str(r#"{"target":"lro","population_size":8}"#).unwrap();
        assert_eq!(c.target, TargetKind::Lro);
        assert_eq!(c.population_size, 8);
        assert_eq!(c.mutation, MutationRates::default());
    }
}
