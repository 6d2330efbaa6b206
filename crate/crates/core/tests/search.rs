use dfs_forge_core::exchange::{merge_gates, sequence_unitary, Generator, PulseGate, PulseSequence};
use dfs_forge_core::fixtures::{cnot_sequence, lro_sequence};
use dfs_forge_core::search::*;
use dfs_forge_core::targets::{Objective, TargetKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn ops(target: TargetKind) -> Operators {
    Operators::new(&SearchConfig::new(target), 0.0)
}

fn chi_square_p(counts: &[usize], expected: &[f64]) -> f64 {
    let stat: f64 = counts.iter().zip(expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(stat)
}

fn perturbed(seq: &PulseSequence, index: usize, delta: f64) -> PulseSequence {
    let mut s = seq.clone();
    s.set_power(index, seq.gates()[index].power + delta);
    s
}

fn small_config(seed: u64) -> SearchConfig {
    let mut c = SearchConfig::new(TargetKind::Cnot);
    c.population_size = 8;
    c.initial_length = (4, 8);
    c.max_sequence_length = 12;
    c.max_generations = 5;
    c.loose.max_iterations = 8;
    c.tight.max_iterations = 20;
    c.rng_seed = seed;
    c
}

#[test]
fn refine_one_restores_a_perturbed_power() {
    let op = ops(TargetKind::Cnot);
    for index in [0, 5, 21] {
        let ind = op.evaluate(perturbed(&cnot_sequence(), index, 0.05));
        assert!(ind.objective > 1e-3);
        let out = op.refine_one_at(&ind, index);
        assert!(out.objective < 1e-8, "gate {index}: {:e}", out.objective);
    }
}

#[test]
fn refine_one_keeps_an_optimum() {
    let op = ops(TargetKind::Cnot);
    let ind = op.evaluate(cnot_sequence());
    let out = op.refine_one_at(&ind, 3);
    assert!(out.objective <= ind.objective + 1e-12);
    assert!((out.sequence.gates()[3].power - 1.0).abs() < 1e-6);
}

#[test]
fn refine_one_on_single_gate_agrees_with_scan() {
    let op = ops(TargetKind::Cnot);
    let obj = Objective::new(TargetKind::Cnot);
    let f = |p: f64| {
        obj.value(&sequence_unitary(&[PulseGate { pair: 2, power: p }].into_iter().collect(), Generator::Swap))
    };
    let ind = op.evaluate([PulseGate { pair: 2, power: 0.3 }].into_iter().collect());
    let out = op.refine_one_at(&ind, 0);
    let p = out.sequence.gates()[0].power;
    for k in 1..=200 {
        let d = k as f64 * 1e-3;
        assert!(f(p + d) >= out.objective - 1e-12 && f(p - d) >= out.objective - 1e-12);
    }
}

#[test]
fn refine_two_restores_adjacent_powers_and_is_locally_minimal() {
    let op = ops(TargetKind::Cnot);
    let s = perturbed(&perturbed(&cnot_sequence(), 7, 0.04), 8, -0.03);
    let out = op.refine_two_at(&op.evaluate(s), 7);
    assert!(out.objective < 1e-8, "{:e}", out.objective);

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let short = random_sequence(5, &mut rng);
    let out = op.refine_two_at(&op.evaluate(short), 1);
    let obj = Objective::new(TargetKind::Cnot);
    let (a, b) = (out.sequence.gates()[1].power, out.sequence.gates()[2].power);
    for i in -10..=10 {
        for j in -10..=10 {
            let mut s = out.sequence.clone();
            s.set_power(1, a + i as f64 * 2e-3);
            s.set_power(2, b + j as f64 * 2e-3);
            assert!(obj.value(&sequence_unitary(&s, Generator::Swap)) >= out.objective - 1e-12);
        }
    }
}

#[test]
fn refine_two_falls_back_on_short_sequences() {
    let op = ops(TargetKind::Cnot);
    let ind = op.evaluate([PulseGate { pair: 1, power: 0.2 }].into_iter().collect());
    let out = op.refine_two(&ind, &mut ChaCha8Rng::seed_from_u64(0));
    assert_eq!(out.len(), 1);
    assert!(out.objective <= ind.objective + 1e-12);
}

#[test]
fn refine_all_reconverges_lro() {
    let op = ops(TargetKind::Lro);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let base = lro_sequence();
    let jittered =
        base.with_powers(&base.powers().iter().map(|p| p + rng.random_range(-0.01..0.01)).collect::<Vec<_>>());
    let mut out = op.evaluate(jittered);
    for _ in 0..4 {
        out = op.refine_all(&out);
    }
    assert!(out.objective < 1e-6, "{:e}", out.objective);

    let exact = op.evaluate(base);
    assert!(op.refine_all(&exact).objective <= exact.objective + 1e-12);

    let problem = PowerProblem::new(&out.sequence, Objective::new(TargetKind::Lro), (0..30).collect(), 1e-6);
    let (_, trace) = problem.solve(&MinimizerSettings::LOOSE);
    assert!(trace.history.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn insert_and_delete_contracts() {
    let op = ops(TargetKind::Cnot);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ind = op.evaluate(cnot_sequence());
    let grown = op.insert_gate(&ind, &mut rng).unwrap();
    assert_eq!(grown.len(), 23);
    let shrunk = op.delete_gate(&ind, &mut rng).unwrap();
    assert_eq!(shrunk.len(), 21);

    let capped = Operators { max_sequence_length: 22, ..op };
    assert!(capped.insert_gate(&ind, &mut rng).is_none());
    assert!(op.delete_gate(&op.evaluate(PulseSequence::empty()), &mut rng).is_none());

    // a zero-power gate removed changes nothing before refinement
    for slot in [0, 10, 22] {
        let mut padded = cnot_sequence();
        padded.insert(slot, PulseGate { pair: 1, power: 0.0 }).unwrap();
        let out = op.delete_at(&op.evaluate(padded), slot);
        assert_eq!(out.len(), 22);
        assert!(out.objective <= ind.objective + 1e-12);
    }
}

#[test]
fn insertion_draws_are_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let len = 6;
    let mut pairs = [0usize; 5];
    let mut slots = [0usize; 7];
    let draws = 10_000;
    for _ in 0..draws {
        let (slot, gate) = draw_insertion(len, &mut rng);
        pairs[gate.pair] += 1;
        slots[slot] += 1;
        assert!(gate.power > -1.0 && gate.power <= 1.0);
    }
    assert!(chi_square_p(&pairs, &[draws as f64 / 5.0; 5]) > 0.01);
    assert!(chi_square_p(&slots, &[draws as f64 / 7.0; 7]) > 0.01);
}

#[test]
fn mating_contracts() {
    let op = ops(TargetKind::Cnot);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = op.evaluate(cnot_sequence());
    let b = op.evaluate(lro_sequence());
    let child = op.mate(&a, &b, &mut rng);
    assert_eq!(child.len(), 22);
    assert!(child.objective.is_finite());
    let twin = op.mate(&a, &a, &mut rng);
    assert_eq!(twin.len(), 22);
    assert!(twin.objective <= a.objective + 1e-12);
}

#[test]
fn selection_frequency_follows_inverse_penalty() {
    let op = ops(TargetKind::Cnot);
    let mut pool = vec![op.evaluate(PulseSequence::empty()), op.evaluate(PulseSequence::empty())];
    pool[0].penalized = 0.1;
    pool[1].penalized = 0.2;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws = 100_000;
    let mut counts = [0usize; 2];
    for _ in 0..draws {
        counts[weighted_sample(&pool, 1, &mut rng)[0]] += 1;
    }
    let n = draws as f64;
    assert!(chi_square_p(&counts, &[n * 2.0 / 3.0, n / 3.0]) > 0.01, "{counts:?}");
}

#[test]
fn selection_preserves_size_and_members() {
    let cfg = small_config(4);
    let op = Operators::new(&cfg, 1e-4);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pool: Vec<Individual> = (0..20).map(|_| op.evaluate(random_sequence(6, &mut rng))).collect();
    pool.push(op.evaluate(cnot_sequence()));
    let best = pool.iter().map(|p| p.penalized).fold(f64::INFINITY, f64::min);
    let merged: Vec<PulseSequence> = pool.iter().map(|p| merge_gates(&p.sequence)).collect();
    let survivors = select(pool.clone(), 8, &op, &mut rng);
    assert_eq!(survivors.len(), 8);
    assert!(survivors.iter().any(|s| (s.penalized - best).abs() < 1e-9));
    for s in &survivors {
        assert!(merged.contains(&s.sequence));
        assert_eq!(merge_gates(&s.sequence), s.sequence);
    }

    // an exact solution keeps a finite weight
    let mut exact = op.evaluate(cnot_sequence());
    exact.penalized = 0.0;
    assert!(selection_weight(&exact).is_finite());
}

#[test]
fn evolution_is_deterministic_across_runs_and_threads() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| evolve(small_config(17)).unwrap())
    };
    let a = run(1);
    let b = run(1);
    let c = run(3);
    assert_eq!(a.best, b.best);
    assert_eq!(a.best, c.best);
    assert_eq!(a.generations, 5);
}

#[test]
fn elitism_is_monotone() {
    let mut cfg = small_config(5);
    cfg.max_generations = 60;
    let out = evolve(cfg).unwrap();
    for w in out.stats.windows(2) {
        assert!(w[1].best_penalized <= w[0].best_penalized + 1e-10);
    }
}

#[test]
fn seeded_solution_survives() {
    let mut cfg = small_config(6);
    cfg.gate_penalty = 0.0;
    cfg.max_sequence_length = 40;
    cfg.seeds = vec![cnot_sequence()];
    let out = evolve(cfg).unwrap();
    assert!(out.best.objective < 1e-10);
    assert!(out.stats.iter().all(|s| s.best_objective < 1e-10));
}

#[test]
fn zero_generations_returns_initial_best() {
    let mut cfg = small_config(7);
    cfg.max_generations = 0;
    let search = Search::new(cfg.clone()).unwrap();
    let initial = search.best().clone();
    let out = evolve(cfg).unwrap();
    assert_eq!(out.best, initial);
    assert!(out.stats.is_empty());
}

#[test]
fn checkpoint_resume_matches_uninterrupted_run() {
    let mut cfg = small_config(9);
    cfg.max_generations = 6;
    let full = evolve(cfg.clone()).unwrap();

    let mut first = cfg.clone();
    first.max_generations = 3;
    let mut search = Search::new(first).unwrap();
    search.run(|_, _| {});
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    search.state().save(&path).unwrap();

    let mut state = Checkpoint::load(&path).unwrap();
    state.config.max_generations = 6;
    let mut resumed = Search::resume(state).unwrap();
    let best = resumed.run(|_, _| {}).clone();
    assert_eq!(best, full.best);
    assert_eq!(resumed.state().stats.len(), 6);
}
