use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use qparrondo::circuit::{GameSequence, InitKind};
use qparrondo::classical::{
    classical_sequence_payoff, paradox_threshold, stationary_payoff, ClassicalGameSpec, Policy, SeedMode,
    ThresholdTarget,
};
use qparrondo::coin::{EpsilonBias, PhaseAssignment};
use qparrondo::optimizer::{optimize_phases, Budget};
use qparrondo::payoff::Scenario;
use qparrondo::report::{
    sig9, table1, write_csv, ClassicalReport, CsvRecord, OptimizeReport, PayoffReport,
};
use qparrondo::{Direction, Error};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_IO: u8 = 1;

/// Exact simulator for the history-dependent quantum Parrondo game.
#[derive(Parser, Debug)]
#[command(name = "qparrondo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Payoff expectation of one game sequence.
    Payoff(PayoffArgs),
    /// Classical and quantum per-qubit payoffs for the standard sequences.
    Table1(TableArgs),
    /// Extremize the payoff over all phase parameters.
    Optimize(OptimizeArgs),
    /// Classical sequence, stationary and threshold analysis.
    Classical(ClassicalArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Game sequence such as `AAB`.
    #[arg(long)]
    sequence: String,
    /// `zero`, `ghz`, or a path to a JSON array of `[re, im]` amplitudes.
    #[arg(long, default_value = "ghz")]
    init: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eps: f64,
    /// JSON phase assignment `{"A": {"gamma", "delta"}, "B": [{"alpha", "beta"}; 4]}`.
    #[arg(long)]
    phases: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PayoffArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Report the expansion per qubit (default).
    #[arg(long, overrides_with = "total")]
    per_qubit: bool,
    /// Report the expansion as a total over all qubits.
    #[arg(long, overrides_with = "per_qubit")]
    total: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Repetitions used for the `AA...A` and `AAB...AAB` rows.
    #[arg(long, default_value_t = 4)]
    repetitions: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    Max,
    Min,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long)]
    sequence: String,
    #[arg(long, default_value = "ghz")]
    init: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eps: f64,
    #[arg(long, value_enum, default_value = "max")]
    direction: DirectionArg,
    #[arg(long, default_value_t = 50)]
    max_sweeps: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Sequence,
    Stationary,
    Threshold,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Seeds {
    Uniform,
    LossLoss,
}

#[derive(Args, Debug)]
struct ClassicalArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Sequence for `sequence` mode, or for `threshold` mode when no policy is given.
    #[arg(long)]
    sequence: Option<String>,
    /// Repeated-play policy: `A`, `B` or `mix:<q>`.
    #[arg(long)]
    policy: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eps: f64,
    #[arg(long, value_enum, default_value = "uniform")]
    seeds: Seeds,
    #[command(flatten)]
    output: Output,
}

/// A diagnostic with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(context: &str, e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{context}: {e}"),
        }
    }

    fn field(field: &str, e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            ref e if e.is_numeric() => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: format!("{field}: {e}"),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn parse_sequence(s: &str) -> CliResult<GameSequence> {
    s.parse().map_err(|e| Failure::field("--sequence", e))
}

fn parse_eps(eps: f64) -> CliResult<EpsilonBias> {
    EpsilonBias::new(eps).map_err(|e| Failure::field("--eps", e))
}

fn parse_init(init: &str) -> CliResult<InitKind> {
    match init {
        "zero" => Ok(InitKind::AllZero),
        "ghz" => Ok(InitKind::Ghz),
        path => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(&format!("--init {path}"), e))?;
            let pairs: Vec<[f64; 2]> = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("--init {path}: expected an array of [re, im] pairs: {e}")))?;
            Ok(InitKind::Custom(
                pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
            ))
        }
    }
}

fn parse_phases(path: Option<&Path>) -> CliResult<PhaseAssignment> {
    let Some(path) = path else {
        return Ok(PhaseAssignment::default());
    };
    let text = fs::read_to_string(path).map_err(|e| Failure::io(&format!("--phases {}", path.display()), e))?;
    let phases: PhaseAssignment = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("--phases {}: {e}", path.display())))?;
    phases
        .validate()
        .map_err(|e| Failure::field(&format!("--phases {}", path.display()), e))?;
    Ok(phases)
}

fn emit<T: Serialize + CsvRecord>(rows: &[T], single: bool, output: &Output) -> CliResult<()> {
    let mut buf = Vec::new();
    match output.format {
        Format::Json => {
            let text = if single {
                serde_json::to_string_pretty(&rows[0])
            } else {
                serde_json::to_string_pretty(rows)
            }
            .map_err(|e| Failure::io("json output", e))?;
            buf.extend_from_slice(text.as_bytes());
            buf.push(b'\n');
        }
        Format::Csv => write_csv(rows, &mut buf).map_err(|e| Failure::field("csv output", e))?,
    }
    match &output.out {
        Some(path) => fs::write(path, buf).map_err(|e| Failure::io(&format!("--out {}", path.display()), e)),
        None => io::stdout().write_all(&buf).map_err(|e| Failure::io("stdout", e)),
    }
}

fn cmd_payoff(args: &PayoffArgs) -> CliResult<()> {
    let seq = parse_sequence(&args.run.sequence)?;
    let eps = parse_eps(args.run.eps)?;
    let init = parse_init(&args.run.init)?;
    let phases = parse_phases(args.run.phases.as_deref())?;
    let scenario = Scenario::new(seq, init, phases);
    let report = PayoffReport::compute(&scenario, &args.run.init, eps.value(), !args.total)
        .map_err(|e| Failure::field("payoff", e))?;
    emit(&[report], true, &args.output)
}

fn cmd_table1(args: &TableArgs) -> CliResult<()> {
    if args.repetitions == 0 {
        return Err(Failure::usage("--repetitions: must be at least 1"));
    }
    let rows = table1(args.repetitions).map_err(|e| Failure::field("table1", e))?;
    emit(&rows, false, &args.output)
}

fn cmd_optimize(args: &OptimizeArgs) -> CliResult<()> {
    let seq = parse_sequence(&args.sequence)?;
    let eps = parse_eps(args.eps)?;
    let init = parse_init(&args.init)?;
    let direction = match args.direction {
        DirectionArg::Max => Direction::Max,
        DirectionArg::Min => Direction::Min,
    };
    let budget = Budget {
        max_sweeps: args.max_sweeps,
        ..Budget::default()
    };
    let run = |dir| optimize_phases(&seq, &init, eps, dir, budget).map_err(|e| Failure::field("optimize", e));
    let best = run(direction)?;
    let other = run(match direction {
        Direction::Max => Direction::Min,
        Direction::Min => Direction::Max,
    })?;
    let flat = (best.best_value - other.best_value).abs() < qparrondo::optimizer::IMPROVEMENT_TOL;
    let report = OptimizeReport {
        sequence: seq.to_string(),
        init: args.init.clone(),
        eps: eps.value(),
        direction,
        best_value: sig9(best.best_value),
        flat,
        converged: best.converged,
        evaluations: best.evaluations,
        sweeps: best.trace.len(),
        phases: best.best_phases,
    };
    emit(&[report], true, &args.output)
}

fn cmd_classical(args: &ClassicalArgs) -> CliResult<()> {
    let eps = parse_eps(args.eps)?;
    let need_sequence = || {
        args.sequence
            .as_deref()
            .ok_or_else(|| Failure::usage("--sequence: required for this mode"))
            .and_then(parse_sequence)
    };
    let policy = || -> CliResult<Policy> {
        args.policy
            .as_deref()
            .ok_or_else(|| Failure::usage("--policy: required for this mode"))?
            .parse()
            .map_err(|e| Failure::field("--policy", e))
    };
    let report = match args.mode {
        Mode::Sequence => {
            let seq = need_sequence()?;
            let spec = ClassicalGameSpec::from_bias(eps).map_err(|e| Failure::field("--eps", e))?;
            let seeds = match args.seeds {
                Seeds::Uniform => SeedMode::Uniform,
                Seeds::LossLoss => SeedMode::LOSS_LOSS,
            };
            ClassicalReport {
                mode: "sequence".into(),
                target: seq.to_string(),
                eps: Some(eps.value()),
                value: sig9(classical_sequence_payoff(&seq, &spec, seeds)),
            }
        }
        Mode::Stationary => {
            let p = policy()?;
            ClassicalReport {
                mode: "stationary".into(),
                target: p.to_string(),
                eps: Some(eps.value()),
                value: sig9(stationary_payoff(p, eps).map_err(|e| Failure::field("stationary", e))?),
            }
        }
        Mode::Threshold => {
            let target = if args.policy.is_some() {
                ThresholdTarget::Stationary(policy()?)
            } else {
                ThresholdTarget::Sequence(need_sequence()?)
            };
            let label = target.label();
            ClassicalReport {
                mode: "threshold".into(),
                target: label,
                eps: None,
                value: sig9(paradox_threshold(&target).map_err(|e| Failure::field("threshold", e))?),
            }
        }
    };
    emit(&[report], true, &args.output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Payoff(a) => cmd_payoff(a),
        Command::Table1(a) => cmd_table1(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Classical(a) => cmd_classical(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
