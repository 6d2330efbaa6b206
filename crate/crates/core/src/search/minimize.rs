//! Quasi-Newton minimization over a subset of swap powers.
//!
//! The minimizer works on the smooth surrogate of the objective (same zero
//! set), with central finite-difference gradients. Prefix and suffix
//! products of the sequence are cached so each partial derivative costs two
//! block products instead of a full re-simulation.

use nalgebra::{DMatrix, DVector};

use crate::exchange::{BlockUnitary, Generator, PulseGate, PulseSequence};
use crate::search::config::MinimizerSettings;
use crate::targets::Objective;

/// Surrogate values below this count as an exact zero.
const VALUE_FLOOR: f64 = 1e-32;
/// Largest step, in swap power, taken by one line search.
const MAX_STEP: f64 = 0.5;
const ARMIJO: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// Surrogate value after each accepted iterate, starting with the initial point.
    pub history: Vec<f64>,
}

/// BFGS with a backtracking Armijo line search.
pub fn bfgs(
    f: impl Fn(&[f64]) -> f64,
    grad: impl Fn(&[f64]) -> Vec<f64>,
    x0: &[f64],
    settings: &MinimizerSettings,
) -> MinimizeResult {
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut fx = f(x.as_slice());
    let mut g = DVector::from_vec(grad(x.as_slice()));
    let mut h = DMatrix::<f64>::identity(n, n);
    let mut history = vec![fx];
    let mut iterations = 0;
    let mut scaled = false;

    while iterations < settings.max_iterations {
        if n == 0 || fx <= VALUE_FLOOR || g.norm() <= settings.gradient_tol || !fx.is_finite() {
            break;
        }
        let mut d = -(&h * &g);
        let mut slope = d.dot(&g);
        if slope >= 0.0 {
            h.fill_with_identity();
            d = -g.clone();
            slope = d.dot(&g);
        }
        let mut alpha = (MAX_STEP / d.norm()).min(1.0);
        let mut accepted = None;
        for _ in 0..50 {
            let trial = &x + &d * alpha;
            let ft = f(trial.as_slice());
            if ft.is_finite() && ft <= fx + ARMIJO * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else { break };
        let g_new = DVector::from_vec(grad(x_new.as_slice()));
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > f64::MIN_POSITIVE {
            if !scaled {
                h *= sy / y.dot(&y);
                scaled = true;
            }
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            // H+ = H - rho (s hy^T + hy s^T) + (rho^2 yHy + rho) s s^T
            h -= (&s * hy.transpose() + &hy * s.transpose()) * rho;
            h += (&s * s.transpose()) * (rho * rho * yhy + rho);
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        history.push(fx);
        iterations += 1;
    }
    MinimizeResult { x: x.as_slice().to_vec(), value: fx, iterations, history }
}

/// Evaluation of a sequence objective with a subset of its powers free.
pub struct PowerProblem<'a> {
    seq: &'a PulseSequence,
    objective: Objective,
    vars: Vec<usize>,
    step: f64,
}

impl<'a> PowerProblem<'a> {
    pub fn new(seq: &'a PulseSequence, objective: Objective, vars: Vec<usize>, step: f64) -> Self {
        PowerProblem { seq, objective, vars, step }
    }

    pub fn start(&self) -> Vec<f64> {
        self.vars.iter().map(|&i| self.seq.gates()[i].power).collect()
    }

    fn gates(&self, x: &[f64]) -> Vec<PulseGate> {
        let mut gates = self.seq.gates().to_vec();
        for (&i, &p) in self.vars.iter().zip(x) {
            gates[i].power = p;
        }
        gates
    }

    fn product(gates: &[PulseGate]) -> BlockUnitary {
        let mut u = BlockUnitary::identity();
        for g in gates {
            u.apply_gate(g, Generator::Swap);
        }
        u
    }

    pub fn surrogate(&self, x: &[f64]) -> f64 {
        self.objective.smooth(&Self::product(&self.gates(x)))
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let gates = self.gates(x);
        let n = gates.len();
        // prefix[k] = G_{k-1} ... G_0
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(BlockUnitary::identity());
        for g in &gates {
            let mut next = *prefix.last().expect("non-empty");
            next.apply_gate(g, Generator::Swap);
            prefix.push(next);
        }
        // suffix[k] = G_{n-1} ... G_{k+1}
        let mut suffix = vec![BlockUnitary::identity(); n];
        for k in (0..n.saturating_sub(1)).rev() {
            let gate = crate::exchange::gate_unitary(&gates[k + 1], Generator::Swap);
            suffix[k] = suffix[k + 1].compose(&gate);
        }
        self.vars
            .iter()
            .map(|&k| {
                let eval = |p: f64| {
                    let mut mid = prefix[k];
                    mid.apply_gate(&PulseGate { pair: gates[k].pair, power: p }, Generator::Swap);
                    self.objective.smooth(&suffix[k].compose(&mid))
                };
                let p = gates[k].power;
                (eval(p + self.step) - eval(p - self.step)) / (2.0 * self.step)
            })
            .collect()
    }

    /// Minimizes the surrogate and returns the sequence with updated powers.
    pub fn solve(&self, settings: &MinimizerSettings) -> (PulseSequence, MinimizeResult) {
        let result = bfgs(|x| self.surrogate(x), |x| self.gradient(x), &self.start(), settings);
        let seq = PulseSequence::new(self.gates(&result.x)).unwrap_or_else(|_| self.seq.clone());
        (seq, result)
    }
}

/// Refines the powers at `vars`; keeps the original if the raw objective
/// would increase.
pub fn refine(
    seq: &PulseSequence,
    objective: Objective,
    vars: Vec<usize>,
    settings: &MinimizerSettings,
) -> PulseSequence {
    if vars.is_empty() {
        return seq.clone();
    }
    let before = objective.value(&crate::exchange::sequence_unitary(seq, Generator::Swap));
    let (candidate, _) = PowerProblem::new(seq, objective, vars, settings.gradient_step).solve(settings);
    let after = objective.value(&crate::exchange::sequence_unitary(&candidate, Generator::Swap));
    if after <= before {
        candidate
    } else {
        seq.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::cnot_sequence;
    use crate::targets::TargetKind;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 0.3).powi(2) + 10.0 * (x[1] + 0.2).powi(2);
        let g = |x: &[f64]| vec![2.0 * (x[0] - 0.3), 20.0 * (x[1] + 0.2)];
        let r = bfgs(f, g, &[0.0, 0.0], &MinimizerSettings::TIGHT);
        assert!((r.x[0] - 0.3).abs() < 1e-8 && (r.x[1] + 0.2).abs() < 1e-8);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn cached_gradient_matches_plain_differences() {
        let seq = cnot_sequence().with_powers(&cnot_sequence().powers().iter().map(|p| p + 0.03).collect::<Vec<_>>());
        let problem = PowerProblem::new(&seq, Objective::new(TargetKind::Cnot), (0..seq.len()).collect(), 1e-6);
        let x = problem.start();
        let g = problem.gradient(&x);
        for k in [0, 7, 21] {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += 1e-6;
            xm[k] -= 1e-6;
            let fd = (problem.surrogate(&xp) - problem.surrogate(&xm)) / 2e-6;
            assert!((fd - g[k]).abs() < 1e-9, "{k}: {fd} vs {}", g[k]);
        }
    }
}
