//! Experiment configuration: the matrix of problems, dimensions, algorithms,
//! and repeats, parsed from a flat key-value text file.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use saeame::problems::ProblemId;

use crate::error::HarnessError;

/// The algorithms the harness can run on a benchmark cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Saeame,
    Nsga2Budget,
    RandomSearch,
}

pub const ALL_ALGORITHMS: [Algorithm; 3] = [
    Algorithm::Saeame,
    Algorithm::Nsga2Budget,
    Algorithm::RandomSearch,
];

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Saeame => "saeame",
            Algorithm::Nsga2Budget => "nsga2-budget",
            Algorithm::RandomSearch => "random-search",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        ALL_ALGORITHMS
            .iter()
            .copied()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| HarnessError::config(format!("unknown algorithm `{s}`")))
    }
}

/// Per-dimension run settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimSettings {
    pub pop_size: usize,
    pub budget: usize,
}

/// A full experiment matrix. One run is executed per
/// (problem, dim, algorithm, repeat) cell with seed `base_seed + repeat`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problems: Vec<ProblemId>,
    pub dims: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub repeats: usize,
    pub base_seed: u64,
    pub dim_settings: BTreeMap<usize, DimSettings>,
}

/// The benchmark settings used for dimensions 10, 20, and 50.
pub fn standard_dim_settings() -> BTreeMap<usize, DimSettings> {
    BTreeMap::from([
        (
            10,
            DimSettings {
                pop_size: 50,
                budget: 300,
            },
        ),
        (
            20,
            DimSettings {
                pop_size: 100,
                budget: 400,
            },
        ),
        (
            50,
            DimSettings {
                pop_size: 300,
                budget: 800,
            },
        ),
    ])
}

impl ExperimentConfig {
    /// Parses the flat `key = value` format. Lines whose first non-blank
    /// character is `#` are comments. Recognized keys:
    ///
    /// - `problems`: comma-separated problem ids (required)
    /// - `dims`: comma-separated dimensions (required)
    /// - `algorithms`: comma-separated algorithm names (required)
    /// - `repeats`: runs per cell (default 11)
    /// - `base_seed`: seed of repeat 0 (default 0)
    /// - `pop_size_<n>` / `budget_<n>`: per-dimension overrides; dimensions
    ///   10, 20, and 50 default to (50, 300), (100, 400), (300, 800)
    pub fn parse(text: &str) -> Result<ExperimentConfig, HarnessError> {
        let mut problems: Option<Vec<ProblemId>> = None;
        let mut dims: Option<Vec<usize>> = None;
        let mut algorithms: Option<Vec<Algorithm>> = None;
        let mut repeats = 11usize;
        let mut base_seed = 0u64;
        let mut dim_settings = standard_dim_settings();
        let mut pop_overrides: BTreeMap<usize, usize> = BTreeMap::new();
        let mut budget_overrides: BTreeMap<usize, usize> = BTreeMap::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "problems" => {
                    problems = Some(
                        split_list(value)
                            .map(|item| item.parse::<ProblemId>().map_err(HarnessError::Problem))
                            .collect::<Result<_, _>>()?,
                    );
                }
                "dims" => {
                    dims = Some(
                        split_list(value)
                            .map(|item| parse_number::<usize>(key, item))
                            .collect::<Result<_, _>>()?,
                    );
                }
                "algorithms" => {
                    algorithms = Some(
                        split_list(value)
                            .map(|item| item.parse::<Algorithm>())
                            .collect::<Result<_, _>>()?,
                    );
                }
                "repeats" => repeats = parse_number(key, value)?,
                "base_seed" => base_seed = parse_number(key, value)?,
                _ => {
                    if let Some(n) = key.strip_prefix("pop_size_") {
                        let n = parse_number::<usize>(key, n)?;
                        pop_overrides.insert(n, parse_number(key, value)?);
                    } else if let Some(n) = key.strip_prefix("budget_") {
                        let n = parse_number::<usize>(key, n)?;
                        budget_overrides.insert(n, parse_number(key, value)?);
                    } else {
                        return Err(HarnessError::config(format!("unknown key `{key}`")));
                    }
                }
            }
        }

        let problems = dedup(required(problems, "problems")?);
        let dims = dedup(required(dims, "dims")?);
        let algorithms = dedup(required(algorithms, "algorithms")?);
        if repeats < 1 {
            return Err(HarnessError::config("repeats must be at least 1"));
        }

        for (&n, &pop) in &pop_overrides {
            let entry = dim_settings.entry(n).or_insert(DimSettings {
                pop_size: 0,
                budget: 0,
            });
            entry.pop_size = pop;
        }
        for (&n, &budget) in &budget_overrides {
            let entry = dim_settings.entry(n).or_insert(DimSettings {
                pop_size: 0,
                budget: 0,
            });
            entry.budget = budget;
        }

        for &n in &dims {
            let settings = dim_settings.get(&n).copied().ok_or_else(|| {
                HarnessError::config(format!(
                    "dimension {n} has no settings; set pop_size_{n} and budget_{n}"
                ))
            })?;
            if settings.pop_size < 2 || settings.pop_size % 2 != 0 {
                return Err(HarnessError::config(format!(
                    "pop_size_{n} must be even and at least 2, got {}",
                    settings.pop_size
                )));
            }
            if settings.budget < 1 {
                return Err(HarnessError::config(format!(
                    "budget_{n} must be at least 1"
                )));
            }
            if algorithms.contains(&Algorithm::Nsga2Budget) && settings.budget < settings.pop_size {
                return Err(HarnessError::config(format!(
                    "budget_{n} must cover one nsga2-budget population of {}",
                    settings.pop_size
                )));
            }
        }

        Ok(ExperimentConfig {
            problems,
            dims,
            algorithms,
            repeats,
            base_seed,
            dim_settings,
        })
    }

    /// Applies the `SAEA_SEED` environment override to `base_seed`.
    pub fn apply_seed_override(&mut self, env_value: Option<&str>) -> Result<(), HarnessError> {
        if let Some(raw) = env_value {
            self.base_seed = raw.trim().parse().map_err(|_| {
                HarnessError::config(format!(
                    "SAEA_SEED must be an unsigned integer, got `{raw}`"
                ))
            })?;
        }
        Ok(())
    }

    /// The seed assigned to a repeat index.
    pub fn seed_for(&self, repeat: usize) -> u64 {
        self.base_seed.wrapping_add(repeat as u64)
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value
        .split(',')
        .map(str::trim)
        .filter(|item| !item.is_empty())
}

fn parse_number<T: FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value
        .parse()
        .map_err(|_| HarnessError::config(format!("key `{key}`: bad number `{value}`")))
}

fn required<T>(value: Option<Vec<T>>, key: &str) -> Result<Vec<T>, HarnessError> {
    match value {
        Some(list) if !list.is_empty() => Ok(list),
        _ => Err(HarnessError::config(format!(
            "missing required key `{key}`"
        ))),
    }
}

fn dedup<T: PartialEq>(list: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(list.len());
    for item in list {
        if !out.contains(&item) {
            out.push(item);
        }
    }
    out
}
