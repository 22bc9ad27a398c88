//! `roster`: solve rostering instances, evaluate rosters and run the
//! population-sweep benchmarks.
//!
//! Exit codes: 0 on success, 1 on usage errors (flags, parameters,
//! benchmark configs), 2 on instance or roster data errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use rostering::aco::{run_aco, AcoParams};
use rostering::executor::ExecutorConfig;
use rostering::experiment::{
    emit_csv, run_experiment, Algorithm, ExperimentConfig, ExperimentError,
};
use rostering::model::{RosterInstance, SoftConstraint};
use rostering::pso::{run_pso, PsoParams};
use rostering::run::{RunResult, SolverError};
use rostering::{evaluate, parse_instance, parse_schedule, serialize_schedule};

const WORKERS_ENV: &str = "ROSTER_WORKERS";

#[derive(Parser)]
#[command(
    name = "roster",
    version,
    about = "Nurse rostering solver and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with ACO or PSO.
    Solve(SolveArgs),
    /// Run a population-sweep experiment and write CSV files.
    Bench(BenchArgs),
    /// Evaluate an existing roster against an instance.
    Check(CheckArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Algorithm: aco or pso.
    #[arg(long)]
    algorithm: Algorithm,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fitness-evaluation workers (falls back to ROSTER_WORKERS, then 1).
    #[arg(long)]
    workers: Option<usize>,
    /// Algorithm parameter override, repeatable (e.g. --param ants=32).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Write the best roster here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for raw.csv and aggregate.csv.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config's worker count.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Roster file (one line per nurse, `-` for a day off).
    #[arg(long)]
    roster: PathBuf,
}

enum CliError {
    /// Bad flags, parameters or benchmark configs; exit code 1.
    Usage(String),
    /// Unreadable or invalid instance/roster data; exit code 2.
    Data(String),
}

impl CliError {
    fn report(self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            CliError::Data(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench(args),
        Command::Check(args) => check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => err.report(),
    }
}

fn load_instance(path: &Path) -> Result<RosterInstance, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Data(format!("cannot read {}: {e}", path.display()))
    })?;
    parse_instance(&text).map_err(|e| {
        CliError::Data(format!("invalid instance {}: {e}", path.display()))
    })
}

fn resolve_workers(flag: Option<usize>, config_value: Option<usize>) -> Result<usize, CliError> {
    if let Some(workers) = flag {
        return Ok(workers);
    }
    if let Ok(raw) = std::env::var(WORKERS_ENV) {
        return raw.parse().map_err(|_| {
            CliError::Usage(format!("{WORKERS_ENV} must be a positive integer"))
        });
    }
    Ok(config_value.unwrap_or(1))
}

fn split_param(raw: &str) -> Result<(&str, &str), CliError> {
    raw.split_once('=').ok_or_else(|| {
        CliError::Usage(format!("--param `{raw}` must look like key=value"))
    })
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| {
        CliError::Usage(format!("invalid value `{value}` for parameter `{key}`"))
    })
}

fn apply_aco_param(params: &mut AcoParams, key: &str, value: &str) -> Result<(), CliError> {
    match key {
        "alpha" => params.alpha = parse_value(key, value)?,
        "beta" => params.beta = parse_value(key, value)?,
        "eta" => params.eta = parse_value(key, value)?,
        "zeta" => params.zeta = parse_value(key, value)?,
        "ants" | "population" => params.ants = parse_value(key, value)?,
        "iterations" => params.iterations = parse_value(key, value)?,
        "variant" => {
            params.variant = value.parse().map_err(CliError::Usage)?;
        }
        "tau0" => params.tau0 = parse_value(key, value)?,
        "tau_min" => params.tau_min = parse_value(key, value)?,
        "tau_max" => params.tau_max = parse_value(key, value)?,
        "rank_count" => params.rank_count = parse_value(key, value)?,
        "elite_weight" => params.elite_weight = parse_value(key, value)?,
        "phi" => params.phi = parse_value(key, value)?,
        "q_deposit" => params.q_deposit = parse_value(key, value)?,
        other => {
            return Err(CliError::Usage(format!("unknown aco parameter `{other}`")))
        }
    }
    Ok(())
}

fn apply_pso_param(params: &mut PsoParams, key: &str, value: &str) -> Result<(), CliError> {
    match key {
        "c1" => params.c1 = parse_value(key, value)?,
        "c2" => params.c2 = parse_value(key, value)?,
        "w" => params.w = parse_value(key, value)?,
        "chi" => params.chi = parse_value(key, value)?,
        "v_max" => params.v_max = Some(parse_value(key, value)?),
        "particles" | "population" => {
            params.particles = parse_value(key, value)?
        }
        "iterations" => params.iterations = parse_value(key, value)?,
        "clamping" => params.clamping = parse_value(key, value)?,
        "inertia" => params.inertia = parse_value(key, value)?,
        "constriction" => params.constriction = parse_value(key, value)?,
        "asynchronous" => params.asynchronous = parse_value(key, value)?,
        other => {
            return Err(CliError::Usage(format!("unknown pso parameter `{other}`")))
        }
    }
    Ok(())
}

fn solver_error(err: SolverError) -> CliError {
    match err {
        SolverError::InvalidParameter(msg) => CliError::Usage(msg),
        SolverError::Executor(e) => CliError::Data(e.to_string()),
    }
}

fn solve(args: SolveArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?;
    let workers = resolve_workers(args.workers, None)?;
    let executor = ExecutorConfig::new(workers);

    let (result, population, variant) = match args.algorithm {
        Algorithm::Aco => {
            let mut params = AcoParams { seed: args.seed, ..AcoParams::default() };
            let mut rank_pinned = false;
            for raw in &args.params {
                let (key, value) = split_param(raw)?;
                apply_aco_param(&mut params, key, value)?;
                rank_pinned |= key == "rank_count";
            }
            if !rank_pinned {
                // Default rank_count is min(6, ants).
                params.rank_count = params.rank_count.min(params.ants);
            }
            let result =
                run_aco(&instance, &params, &executor).map_err(solver_error)?;
            (result, params.ants, Some(params.variant.to_string()))
        }
        Algorithm::Pso => {
            let mut params = PsoParams { seed: args.seed, ..PsoParams::default() };
            for raw in &args.params {
                let (key, value) = split_param(raw)?;
                apply_pso_param(&mut params, key, value)?;
            }
            let result =
                run_pso(&instance, &params, &executor).map_err(solver_error)?;
            (result, params.particles, None)
        }
    };

    print_run_summary(&instance, &result, args.algorithm, population, variant, workers, args.seed);

    let roster_text = serialize_schedule(&result.best_schedule, &instance);
    match &args.out {
        Some(path) => fs::write(path, roster_text).map_err(|e| {
            CliError::Usage(format!("cannot write {}: {e}", path.display()))
        })?,
        None => {
            println!();
            print!("{roster_text}");
        }
    }
    Ok(())
}

fn print_run_summary(
    instance: &RosterInstance,
    result: &RunResult,
    algorithm: Algorithm,
    population: usize,
    variant: Option<String>,
    workers: usize,
    seed: u64,
) {
    let breakdown =
        evaluate(&result.best_schedule, instance).expect("best schedule matches");
    println!("algorithm = {algorithm}");
    if let Some(variant) = variant {
        println!("variant = {variant}");
    }
    println!("population = {population}");
    println!("iterations = {}", result.history.len());
    println!("seed = {seed}");
    println!("workers = {workers}");
    println!("best_fitness = {}", result.best_fitness);
    println!("soft_total = {}", breakdown.total);
    println!("hard_violations = {}", breakdown.hard.total());
    println!("feasible = {}", breakdown.feasible());
    println!("evaluations = {}", result.evaluations);
    println!("wall_time_s = {:.3}", result.wall_time_s);
}

fn bench(args: BenchArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?;
    let config_text = fs::read_to_string(&args.config).map_err(|e| {
        CliError::Usage(format!("cannot read {}: {e}", args.config.display()))
    })?;
    let mut config = ExperimentConfig::from_toml(&config_text)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    config.workers = resolve_workers(args.workers, Some(config.workers))?;

    eprintln!(
        "running {} over populations {:?}, {} repeats x {} iterations, {} worker(s)",
        config.algorithm,
        config.populations,
        config.repeats,
        config.iterations,
        config.workers
    );
    let report = run_experiment(&instance, &config).map_err(|e| match e {
        ExperimentError::Solver(err) => solver_error(err),
        other => CliError::Usage(other.to_string()),
    })?;
    let (raw_path, aggregate_path) = emit_csv(&report, &args.out)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    println!("{}", rostering::experiment::AGGREGATE_CSV_HEADER);
    for row in &report.aggregates {
        println!(
            "{},{},{},{},{},{},{},{},{}",
            row.algorithm,
            row.population,
            row.stats.n,
            row.stats.mean,
            row.stats.stddev,
            row.stats.sem,
            row.stats.min,
            row.stats.max,
            row.mean_time_s
        );
    }
    eprintln!("wrote {}", raw_path.display());
    eprintln!("wrote {}", aggregate_path.display());
    Ok(())
}

fn check(args: CheckArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?;
    let roster_text = fs::read_to_string(&args.roster).map_err(|e| {
        CliError::Data(format!("cannot read {}: {e}", args.roster.display()))
    })?;
    let schedule = parse_schedule(&roster_text, &instance).map_err(|e| {
        CliError::Data(format!("invalid roster {}: {e}", args.roster.display()))
    })?;
    let breakdown = evaluate(&schedule, &instance)
        .map_err(|e| CliError::Data(e.to_string()))?;

    let mut table = String::new();
    let _ = writeln!(table, "{:<6} {:>10} {:>8} {:>10}", "id", "violations", "weight", "weighted");
    for constraint in SoftConstraint::ALL {
        let _ = writeln!(
            table,
            "{:<6} {:>10} {:>8} {:>10}",
            constraint.code(),
            breakdown.violation_count(constraint),
            instance.constraints.weights.get(constraint),
            breakdown.weighted_penalty(constraint),
        );
    }
    print!("{table}");
    println!("soft_total = {}", breakdown.total);
    println!(
        "hard: HC1={} HC2={} HC3={} HC4={}",
        breakdown.hard.hc1, breakdown.hard.hc2, breakdown.hard.hc3, breakdown.hard.hc4
    );
    println!("hard_penalty = {}", breakdown.hard_penalty);
    println!("feasible = {}", breakdown.feasible());
    println!("fitness = {}", breakdown.fitness);
    Ok(())
}
