//! Command-line front-end: run circuits, compile them to measurement
//! programs, verify the compilation, and run the gadget, walk and
//! dense-coding demos. All output is JSON lines.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tactics_core::algebra::Matrix;
use tactics_core::compiler::{check_equivalence, compile_to_measurements, parse_circuit, Circuit, Mode, Op};
use tactics_core::densecoding::{encode_decode, encoded_states, gram_matrix, TacticsChoice};
use tactics_core::gadgets::{contract_fidelity, run_gadget, GadgetForm};
use tactics_core::par::map_trials;
use tactics_core::pauliframe::{random_walk_cleanup_with, WalkMode, DEFAULT_MAX_STEPS};
use tactics_core::rng::trial_rng;
use tactics_core::statevec::StateVector;
use tactics_core::Error as CoreError;

pub const SEED_ENV: &str = "TACTICS_SEED";

#[derive(Parser, Debug)]
#[command(name = "tactics", version, about = "Measurement-only quantum tactics simulator")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Seed for every random draw.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Number of trials (default depends on the command).
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Fidelity tolerance: a trial passes when fidelity ≥ 1 − tol.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Extended)]
    pub mode: ModeArg,
    /// Write records here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated ±1 outcomes forced onto the first measurements of
    /// every `run` trial (testing hook).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub force_outcomes: Option<Vec<i8>>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Extended,
    Strict,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Extended => Mode::Extended,
            ModeArg::Strict => Mode::Strict,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate a circuit directly and print the final amplitudes.
    Run { circuit: PathBuf },
    /// Print the measurement program for a circuit.
    Compile { circuit: PathBuf },
    /// Compile a circuit and check the program against it.
    Verify {
        circuit: PathBuf,
        /// Drop outcome-dependent feedforward so verification must fail.
        #[arg(long, hide = true)]
        drop_feedforward: bool,
    },
    /// Run one of the built-in demonstrations.
    Demo {
        name: String,
        /// Walk demo: check only after even numbers of draws.
        #[arg(long)]
        even_parity: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Io { .. } => 3,
            CliError::Core(_) => 1,
        }
    }
}

/// Records produced by a command plus whether its check passed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub passed: bool,
}

impl Outcome {
    fn push<T: Serialize>(&mut self, record: &T) {
        self.lines.push(serde_json::to_string(record).expect("records serialise"));
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Round to 12 significant digits; `-0` becomes `0`.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn amplitudes(st: &StateVector) -> Vec<[f64; 2]> {
    st.amplitudes().iter().map(|a| [round12(a.re), round12(a.im)]).collect()
}

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_circuit(&text).map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })
}

fn trials_or(config: &RunConfig, default: usize) -> Result<usize, CliError> {
    let t = config.trials.unwrap_or(default);
    if t == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    Ok(t)
}

/// Run a parsed command line and return its records.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let c = &cli.config;
    if c.tol.is_nan() || c.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    if let Some(f) = &c.force_outcomes {
        if f.iter().any(|&o| o != 1 && o != -1) {
            return Err(CliError::Usage("--force-outcomes takes ±1 values".into()));
        }
    }
    match &cli.command {
        Command::Run { circuit } => cmd_run(&read_circuit(circuit)?, c),
        Command::Compile { circuit } => cmd_compile(&read_circuit(circuit)?, c),
        Command::Verify { circuit, drop_feedforward } => cmd_verify(&read_circuit(circuit)?, c, *drop_feedforward),
        Command::Demo { name, even_parity } => match name.as_str() {
            "densecoding" => demo_densecoding(c),
            "walk" => demo_walk(c, *even_parity),
            "gadgets" => demo_gadgets(c),
            other => Err(CliError::Usage(format!("unknown demo {other:?} (densecoding, walk, gadgets)"))),
        },
    }
}

/// Write the records to `--out` or standard output.
pub fn emit(config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    let text = outcome.text();
    match &config.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_run(circuit: &Circuit, c: &RunConfig) -> Result<Outcome, CliError> {
    let trials = trials_or(c, 1)?;
    let forced = c.force_outcomes.clone().unwrap_or_default();
    let records = map_trials(trials, |t| -> Result<Value, CoreError> {
        let mut rng = trial_rng(c.seed, t as u64);
        let mut st = StateVector::zero(circuit.n_qubits)?;
        let mut outcomes = Vec::new();
        let mut next = forced.iter();
        for op in &circuit.ops {
            match op {
                Op::Measure { observable } => {
                    let (o, post) = st.measure_with(observable, next.next().copied(), &mut rng)?;
                    outcomes.push(json!({
                        "observable": observable.to_string(),
                        "eigenvalue": o.eigenvalue,
                        "probability": round12(o.probability),
                    }));
                    st = post;
                }
                other => {
                    let single = Circuit { n_qubits: circuit.n_qubits, ops: vec![other.clone()] };
                    st = single.simulate(&st, &mut rng)?.0;
                }
            }
        }
        Ok(json!({ "record": "run", "trial": t, "amplitudes": amplitudes(&st), "outcomes": outcomes }))
    });
    let mut out = Outcome { passed: true, ..Outcome::default() };
    for r in records {
        out.push(&r?);
    }
    Ok(out)
}

fn cmd_compile(circuit: &Circuit, c: &RunConfig) -> Result<Outcome, CliError> {
    let program = compile_to_measurements(circuit, c.mode.into())?;
    Ok(Outcome { lines: program.to_jsonl().lines().map(str::to_owned).collect(), passed: true })
}

fn cmd_verify(circuit: &Circuit, c: &RunConfig, drop_feedforward: bool) -> Result<Outcome, CliError> {
    let trials = trials_or(c, 200)?;
    let mut program = compile_to_measurements(circuit, c.mode.into())?;
    if drop_feedforward {
        program = program.without_feedforward();
    }
    let report = check_equivalence(circuit, &program, trials, c.tol, c.seed)?;
    let mut out = Outcome { passed: report.passed, ..Outcome::default() };
    for t in &report.trials {
        let mut v = json!({
            "record": "trial",
            "trial": t.trial,
            "fidelity": round12(t.fidelity),
            "pass": t.pass,
            "measurements": t.measurements,
            "walk_steps": t.walk_steps,
        });
        if let Some(e) = &t.error {
            v["error"] = json!(e);
        }
        out.push(&v);
    }
    let stats = program.stats();
    out.push(&json!({
        "record": "summary",
        "mode": program.mode,
        "seed": c.seed,
        "trials": trials,
        "tol": c.tol,
        "min_fidelity": round12(report.min_fidelity),
        "passed": report.passed,
        "failing": report.failing,
        "outcome_counts": report.outcome_counts,
        "walk_histogram": report.walk_histogram,
        "static_measurements": stats.measurements,
        "static_ancillas": stats.ancillas,
        "strict_ok": program.check_strict().is_ok(),
    }));
    Ok(out)
}

fn demo_densecoding(c: &RunConfig) -> Result<Outcome, CliError> {
    let trials = trials_or(c, 1000)?;
    let gram = gram_matrix(&encoded_states()?)?;
    let gram_dev = gram.max_abs_diff(&Matrix::identity(4));
    let mut out = Outcome::default();
    let mut total_errors = 0usize;
    for (k, choice) in TacticsChoice::ALL.iter().enumerate() {
        let errors: Vec<bool> = map_trials(trials, |t| {
            let mut rng = trial_rng(c.seed, (k * trials + t) as u64);
            encode_decode(choice.bits, &mut rng).map(|(d, _)| d != choice.bits)
        })
        .into_iter()
        .collect::<Result<_, _>>()?;
        let n_err = errors.iter().filter(|&&e| e).count();
        total_errors += n_err;
        out.push(&json!({
            "record": "densecoding",
            "label": format!("{:?}", choice.label),
            "bits": format!("{}{}", choice.bits.0, choice.bits.1),
            "roundtrips": trials,
            "errors": n_err,
        }));
    }
    out.passed = total_errors == 0 && gram_dev <= 1e-12;
    out.push(&json!({
        "record": "summary",
        "roundtrips": 4 * trials,
        "errors": total_errors,
        "gram_max_deviation": round12(gram_dev),
        "passed": out.passed,
    }));
    Ok(out)
}

fn demo_walk(c: &RunConfig, even_parity: bool) -> Result<Outcome, CliError> {
    let trials = trials_or(c, 40_000)?;
    let mode = if even_parity { WalkMode::EvenParity } else { WalkMode::Direct };
    let steps: Vec<usize> = map_trials(trials, |t| {
        let mut rng = trial_rng(c.seed, t as u64);
        random_walk_cleanup_with(tactics_core::algebra::Letter::I, tactics_core::algebra::Letter::I, mode, &mut rng, DEFAULT_MAX_STEPS)
            .map(|r| r.steps)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let n = trials as f64;
    let max = steps.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0usize; max + 1];
    for &s in &steps {
        hist[s] += 1;
    }
    let mut out = Outcome::default();
    for (s, &count) in hist.iter().enumerate().skip(1) {
        let p = 0.25 * 0.75f64.powi(s as i32 - 1);
        out.push(&json!({
            "record": "walk_bin",
            "steps": s,
            "count": count,
            "expected": round12(n * p),
        }));
    }
    let mean = steps.iter().sum::<usize>() as f64 / n;
    // geometric(1/4): variance (1 − p)/p² = 12
    let mean_sigma = (12.0 / n).sqrt();
    let first = hist.get(1).copied().unwrap_or(0) as f64 / n;
    let first_sigma = (0.25 * 0.75 / n).sqrt();
    let mean_ok = (mean - 4.0).abs() <= 4.0 * mean_sigma;
    let first_ok = (first - 0.25).abs() <= 4.0 * first_sigma;
    out.passed = mean_ok && first_ok;
    out.push(&json!({
        "record": "summary",
        "mode": mode,
        "trials": trials,
        "mean_steps": round12(mean),
        "mean_sigma": round12(mean_sigma),
        "first_step_frequency": round12(first),
        "first_step_sigma": round12(first_sigma),
        "passed": out.passed,
    }));
    Ok(out)
}

fn demo_gadgets(c: &RunConfig) -> Result<Outcome, CliError> {
    let trials = trials_or(c, 200)?;
    let mut out = Outcome { passed: true, ..Outcome::default() };
    for (k, form) in GadgetForm::ALL.iter().enumerate() {
        let arity = form.recipe().arity;
        let logical: Vec<usize> = (0..arity).collect();
        let fids: Vec<f64> = map_trials(trials, |t| {
            let mut rng = trial_rng(c.seed, (k * trials + t) as u64);
            let input = StateVector::random(arity, &mut rng)?;
            let r = run_gadget(*form, &input, &logical, None, &mut rng)?;
            contract_fidelity(&input, &logical, &r)
        })
        .into_iter()
        .collect::<Result<_, _>>()?;
        let passes = fids.iter().filter(|&&f| f >= 1.0 - c.tol).count();
        let min = fids.iter().copied().fold(f64::INFINITY, f64::min);
        out.passed &= passes == trials;
        out.push(&json!({
            "record": "gadget",
            "form": form.to_string(),
            "kind": form.kind().name(),
            "runs": trials,
            "passes": passes,
            "min_fidelity": round12(min),
        }));
    }
    out.push(&json!({ "record": "summary", "forms": GadgetForm::ALL.len(), "trials": trials, "passed": out.passed }));
    Ok(out)
}
