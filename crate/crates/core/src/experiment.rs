//! Population-sweep experiments and their CSV output.
//!
//! One experiment runs a single algorithm over a list of population
//! sizes, repeating each cell with seeds derived from the base seed, and
//! aggregates best fitness per population (mean, standard deviation,
//! standard error of the mean). Raw and aggregate rows go to separate
//! CSV files; nothing is plotted here.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::aco::{run_aco, AcoParams};
use crate::executor::ExecutorConfig;
use crate::model::RosterInstance;
use crate::pso::{run_pso, PsoParams};
use crate::run::SolverError;
use crate::stats::{compute_stats, RunStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Aco,
    Pso,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Aco => "aco",
            Algorithm::Pso => "pso",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "aco" => Ok(Algorithm::Aco),
            "pso" => Ok(Algorithm::Pso),
            other => Err(format!("unknown algorithm `{other}` (expected aco|pso)")),
        }
    }
}

fn default_iterations() -> usize {
    1000
}

fn default_workers() -> usize {
    1
}

/// One experiment: an algorithm, a population sweep and per-cell
/// repeats. Deserializes from TOML; the `aco`/`pso` tables override the
/// solver defaults.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub populations: Vec<usize>,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    pub repeats: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub aco: AcoParams,
    #[serde(default)]
    pub pso: PsoParams,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let config: ExperimentConfig = toml::from_str(text)
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.populations.is_empty() {
            return Err(ExperimentError::Config(
                "population sweep must be non-empty".into(),
            ));
        }
        if self.repeats == 0 {
            return Err(ExperimentError::Config("repeats must be >= 1".into()));
        }
        if self.workers == 0 {
            return Err(ExperimentError::Config("workers must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub algorithm: Algorithm,
    pub population: usize,
    pub seed: u64,
    pub best_fitness: u64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub algorithm: Algorithm,
    pub population: usize,
    pub stats: RunStats,
    pub mean_time_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub raw: Vec<RawRow>,
    pub aggregates: Vec<AggregateRow>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one experiment cell. Depends only on the cell coordinates,
/// so extending the sweep or the repeat count never shifts the seeds of
/// existing cells.
pub fn cell_seed(
    base_seed: u64,
    algorithm: Algorithm,
    population: usize,
    repeat: usize,
) -> u64 {
    let tag = match algorithm {
        Algorithm::Aco => 1,
        Algorithm::Pso => 2,
    };
    let mut h = splitmix64(base_seed);
    h = splitmix64(h ^ tag);
    h = splitmix64(h ^ population as u64);
    h = splitmix64(h ^ repeat as u64);
    h
}

/// Runs every (population, repeat) cell sequentially — parallelism
/// lives inside the fitness executor so wall times stay uncontended —
/// and aggregates per population.
pub fn run_experiment(
    instance: &RosterInstance,
    config: &ExperimentConfig,
) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let executor = ExecutorConfig::new(config.workers);
    let mut raw = Vec::with_capacity(config.populations.len() * config.repeats);
    let mut aggregates = Vec::with_capacity(config.populations.len());

    for &population in &config.populations {
        let mut fitnesses = Vec::with_capacity(config.repeats);
        let mut times = Vec::with_capacity(config.repeats);
        for repeat in 0..config.repeats {
            let seed = cell_seed(config.base_seed, config.algorithm, population, repeat);
            let result = match config.algorithm {
                Algorithm::Aco => {
                    let mut params = config.aco.clone();
                    params.ants = population;
                    params.iterations = config.iterations;
                    params.seed = seed;
                    params.rank_count = params.rank_count.min(population);
                    run_aco(instance, &params, &executor)?
                }
                Algorithm::Pso => {
                    let mut params = config.pso.clone();
                    params.particles = population;
                    params.iterations = config.iterations;
                    params.seed = seed;
                    run_pso(instance, &params, &executor)?
                }
            };
            raw.push(RawRow {
                algorithm: config.algorithm,
                population,
                seed,
                best_fitness: result.best_fitness,
                wall_time_s: result.wall_time_s,
            });
            fitnesses.push(result.best_fitness as f64);
            times.push(result.wall_time_s);
        }
        let stats = compute_stats(&fitnesses).expect("repeats >= 1");
        let mean_time_s = times.iter().sum::<f64>() / times.len() as f64;
        aggregates.push(AggregateRow {
            algorithm: config.algorithm,
            population,
            stats,
            mean_time_s,
        });
    }
    Ok(ExperimentReport { raw, aggregates })
}

pub const RAW_CSV_HEADER: &str =
    "algorithm,population,seed,best_fitness,wall_time_s";
pub const AGGREGATE_CSV_HEADER: &str =
    "algorithm,population,n,mean,stddev,sem,min,max,mean_time_s";

pub fn raw_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(RAW_CSV_HEADER);
    out.push('\n');
    for row in &report.raw {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.algorithm, row.population, row.seed, row.best_fitness, row.wall_time_s
        ));
    }
    out
}

pub fn aggregate_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(AGGREGATE_CSV_HEADER);
    out.push('\n');
    for row in &report.aggregates {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.algorithm,
            row.population,
            row.stats.n,
            row.stats.mean,
            row.stats.stddev,
            row.stats.sem,
            row.stats.min,
            row.stats.max,
            row.mean_time_s
        ));
    }
    out
}

/// Writes `raw.csv` and `aggregate.csv` under `dir` (UTF-8, LF line
/// endings, floats at full round-trip precision) and returns both paths.
pub fn emit_csv(
    report: &ExperimentReport,
    dir: &Path,
) -> Result<(PathBuf, PathBuf), ExperimentError> {
    let write = |path: PathBuf, contents: String| -> Result<PathBuf, ExperimentError> {
        let io_err = |source| ExperimentError::Io { path: path.clone(), source };
        let mut file = fs::File::create(&path).map_err(io_err)?;
        file.write_all(contents.as_bytes())
            .map_err(|source| ExperimentError::Io { path: path.clone(), source })?;
        Ok(path)
    };
    fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let raw_path = write(dir.join("raw.csv"), raw_csv(report))?;
    let aggregate_path = write(dir.join("aggregate.csv"), aggregate_csv(report))?;
    Ok((raw_path, aggregate_path))
}
