//! `dfs-forge`: basis dumps, simulation, verification, merging, scheduling
//! and genetic search of exchange-only pulse sequences.
//!
//! Every command writes JSON carrying a `manifest` for reproducibility.
//! Exit codes: 0 success, 1 semantic failure (a sequence fails
//! verification), 2 malformed input or I/O error.

mod manifest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dfs_forge_core::exchange::{full_sequence_unitary, merge_gates, schedule_layers, sequence_unitary, Generator};
use dfs_forge_core::io::{basis_entries, to_grid, write_sequence, BlockUnitaryJson, ComplexGrid, SequenceFile};
use dfs_forge_core::search::{Checkpoint, Search, SearchConfig};
use dfs_forge_core::targets::{verify, verify_cnot_unitary, verify_lro_unitary, TargetKind, VerifyReport, DEFAULT_TOL};
use dfs_forge_core::PulseSequence;

use manifest::{Recorder, RunManifest};

#[derive(Parser)]
#[command(
    name = "dfs-forge",
    version,
    about = "Exchange-only pulse sequences on two 3-qubit decoherence-free subsystems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Random seed; required by `search` unless resuming.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Verification tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Where `verify` writes its report (stdout by default).
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Output file; stdout when omitted, except where a file is required.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true, env = "DFS_FORGE_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the 64 labeled basis vectors.
    Basis {
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Block (or full 64x64) unitary of a sequence.
    Simulate {
        #[arg(long)]
        seq: PathBuf,
        #[arg(long, default_value = "ex")]
        generator: Generator,
        /// Emit the 64x64 computational-basis matrix instead of blocks.
        #[arg(long)]
        full: bool,
    },
    /// Check a sequence or a simulated unitary against a target form.
    Verify {
        #[arg(long)]
        target: TargetKind,
        #[arg(long, required_unless_present = "unitary", conflicts_with = "unitary")]
        seq: Option<PathBuf>,
        /// Output of `simulate`.
        #[arg(long)]
        unitary: Option<PathBuf>,
    },
    /// Combine same-pair gates and drop zero powers.
    Merge {
        #[arg(long)]
        seq: PathBuf,
    },
    /// Parallel time steps of a sequence.
    Schedule {
        #[arg(long)]
        seq: PathBuf,
    },
    /// Genetic search; prints one JSON line per generation.
    Search {
        #[arg(long)]
        target: Option<TargetKind>,
        /// SearchConfig JSON; missing fields take defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Continue from a checkpoint.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Checkpoint written after every generation [default: <out>.checkpoint.json].
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Output<T: Serialize> {
    manifest: RunManifest,
    #[serde(flatten)]
    body: T,
}

fn emit<T: Serialize>(rec: &Recorder, body: T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&Output { manifest: rec.finish(), body })?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_seq(rec: &mut Recorder, path: &Path) -> Result<PulseSequence> {
    let text = rec.read(path)?;
    SequenceFile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = cli.global;
    if let Some(n) = g.threads {
        if n == 0 {
            bail!("thread count must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Basis { dump } => basis(&g, dump),
        Command::Simulate { seq, generator, full } => simulate(&g, &seq, generator, full),
        Command::Verify { target, seq, unitary } => verify_cmd(&g, target, seq, unitary),
        Command::Merge { seq } => merge(&g, &seq),
        Command::Schedule { seq } => schedule(&g, &seq),
        Command::Search { target, config, resume, checkpoint } => search(&g, target, config, resume, checkpoint),
    }
}

fn basis(g: &Global, dump: Option<PathBuf>) -> Result<ExitCode> {
    let rec = Recorder::new("basis", g.seed);
    let entries = basis_entries();
    match dump {
        Some(path) => {
            let text = serde_json::to_string_pretty(&entries)?;
            std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            #[derive(Serialize)]
            struct Summary {
                dump: PathBuf,
                vectors: usize,
            }
            emit(&rec, Summary { dump: path, vectors: entries.len() }, g.out.as_deref())?;
        }
        None => {
            #[derive(Serialize)]
            struct Full {
                basis: Vec<dfs_forge_core::io::BasisEntry>,
            }
            emit(&rec, Full { basis: entries }, g.out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn simulate(g: &Global, path: &Path, generator: Generator, full: bool) -> Result<ExitCode> {
    let mut rec = Recorder::new("simulate", g.seed);
    let seq = read_seq(&mut rec, path)?;
    if full {
        #[derive(Serialize)]
        struct Full {
            generator: Generator,
            full: ComplexGrid,
        }
        let u = full_sequence_unitary(&seq, generator);
        emit(&rec, Full { generator, full: to_grid(&u) }, g.out.as_deref())?;
    } else {
        let u = sequence_unitary(&seq, generator);
        emit(&rec, BlockUnitaryJson::new(&u, generator), g.out.as_deref())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(g: &Global, target: TargetKind, seq: Option<PathBuf>, unitary: Option<PathBuf>) -> Result<ExitCode> {
    if !(g.tol.is_finite() && g.tol > 0.0) {
        bail!("--tol must be positive");
    }
    let mut rec = Recorder::new("verify", g.seed);
    let report: VerifyReport = match (seq, unitary) {
        (Some(path), _) => verify(target, &read_seq(&mut rec, &path)?, g.tol),
        (None, Some(path)) => {
            let text = rec.read(&path)?;
            let json: BlockUnitaryJson =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let u = json.to_blocks()?;
            match target {
                TargetKind::Cnot => verify_cnot_unitary(&u, g.tol),
                TargetKind::Lro => verify_lro_unitary(&u, g.tol),
            }
        }
        (None, None) => bail!("one of --seq or --unitary is required"),
    };
    let pass = report.pass;
    emit(&rec, report, g.report.as_deref().or(g.out.as_deref()))?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn merge(g: &Global, path: &Path) -> Result<ExitCode> {
    let mut rec = Recorder::new("merge", g.seed);
    let out = g.out.as_deref().ok_or_else(|| anyhow!("merge requires --out"))?;
    let seq = read_seq(&mut rec, path)?;
    let merged = merge_gates(&seq);
    write_sequence(out, &merged)?;
    #[derive(Serialize)]
    struct Summary<'a> {
        out: &'a Path,
        input_pulses: usize,
        output_pulses: usize,
    }
    emit(&rec, Summary { out, input_pulses: seq.len(), output_pulses: merged.len() }, None)?;
    Ok(ExitCode::SUCCESS)
}

fn schedule(g: &Global, path: &Path) -> Result<ExitCode> {
    let mut rec = Recorder::new("schedule", g.seed);
    let seq = read_seq(&mut rec, path)?;
    let layers = schedule_layers(&seq);
    #[derive(Serialize)]
    struct Schedule {
        pulses: usize,
        time_steps: usize,
        /// Gate indices executed in each step.
        layers: Vec<Vec<usize>>,
    }
    emit(&rec, Schedule { pulses: seq.len(), time_steps: layers.len(), layers }, g.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn search(
    g: &Global,
    target: Option<TargetKind>,
    config: Option<PathBuf>,
    resume: Option<PathBuf>,
    checkpoint: Option<PathBuf>,
) -> Result<ExitCode> {
    let mut rec = Recorder::new("search", g.seed);
    let out = g.out.clone().ok_or_else(|| anyhow!("search requires --out"))?;
    let checkpoint_path = checkpoint.unwrap_or_else(|| {
        let mut name = out.clone().into_os_string();
        name.push(".checkpoint.json");
        PathBuf::from(name)
    });

    let mut search = match resume {
        Some(path) => {
            let text = rec.read(&path)?;
            let state: Checkpoint =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            if g.seed.is_some_and(|s| s != state.config.rng_seed) {
                bail!("--seed {} differs from the checkpoint seed {}", g.seed.unwrap_or(0), state.config.rng_seed);
            }
            if target.is_some_and(|t| t != state.config.target) {
                bail!("--target differs from the checkpoint target {}", state.config.target);
            }
            let mut state = state;
            if let Some(path) = &config {
                // a new config may extend the run; the seed and target stay fixed
                let fresh = read_config(&mut rec, path)?;
                state.config.max_generations = fresh.max_generations;
                state.config.target_tolerance = fresh.target_tolerance;
            }
            Search::resume(state)?
        }
        None => {
            let seed = g.seed.ok_or_else(|| anyhow!("search requires --seed"))?;
            let mut cfg = match &config {
                Some(path) => read_config(&mut rec, path)?,
                None => SearchConfig::new(target.ok_or_else(|| anyhow!("search requires --target or --config"))?),
            };
            if let Some(t) = target {
                cfg.target = t;
            }
            cfg.rng_seed = seed;
            Search::new(cfg)?
        }
    };
    rec.set_seed(search.state().config.rng_seed);

    let stdout = std::io::stdout();
    let mut lines = stdout.lock();
    let mut failure = None;
    search.run(|stats, state| {
        if failure.is_some() {
            return;
        }
        let line = serde_json::to_string(stats).expect("stats serialize");
        if let Err(e) = writeln!(lines, "{line}")
            .map_err(anyhow::Error::from)
            .and_then(|_| state.save(&checkpoint_path).map_err(anyhow::Error::from))
        {
            failure = Some(e);
        }
    });
    if let Some(e) = failure {
        return Err(e.context("writing search progress"));
    }
    search.state().save(&checkpoint_path)?;
    let best = search.best().clone();
    write_sequence(&out, &best.sequence)?;

    #[derive(Serialize)]
    struct Summary {
        target: TargetKind,
        generations: usize,
        best_objective: f64,
        best_penalized: f64,
        best_length: usize,
        out: PathBuf,
        checkpoint: PathBuf,
    }
    let summary = Summary {
        target: search.state().config.target,
        generations: search.state().generation,
        best_objective: best.objective,
        best_penalized: best.penalized,
        best_length: best.len(),
        out,
        checkpoint: checkpoint_path,
    };
    let text = serde_json::to_string(&Output { manifest: rec.finish(), body: summary })?;
    writeln!(lines, "{text}")?;
    Ok(ExitCode::SUCCESS)
}

fn read_config(rec: &mut Recorder, path: &Path) -> Result<SearchConfig> {
    let text = rec.read(path)?;
    let cfg: SearchConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    cfg.validate()?;
    Ok(cfg)
}
