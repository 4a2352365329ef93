//! Executes experiment cells: SAEA/ME, the equal-budget NSGA-II baseline,
//! and random search, each producing a self-describing run record.

use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use saeame::algorithm::{run_saeame, SaeameConfig};
use saeame::metrics::igd;
use saeame::moea::{fast_nondominated_sort, nsga2_run, Nsga2Config};
use saeame::problems::{Problem, ProblemId};

use crate::config::{Algorithm, DimSettings, ExperimentConfig};
use crate::error::HarnessError;
use crate::records::{LogRow, RunRecord};

/// An algorithm run before metadata is attached: the evaluation log plus the
/// indices of the final archive.
#[derive(Debug, Clone)]
pub struct RawRun {
    pub log: Vec<LogRow>,
    pub archive: Vec<usize>,
}

/// Number of reference points used for IGD and front exports.
pub const REFERENCE_FRONT_SIZE: usize = 1000;

/// A deterministic sample of the problem's true Pareto front, seeded from
/// the problem id so every run of a cell scores against identical points.
pub fn reference_front(problem: &Problem) -> Vec<Vec<f64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(fnv1a(problem.id().as_str().as_bytes()));
    problem.sample_true_pf(REFERENCE_FRONT_SIZE, &mut rng)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Uniform sampling of the whole budget; the archive is the non-dominated
/// subset of everything drawn.
pub fn random_search_baseline<R: Rng>(problem: &Problem, budget: usize, rng: &mut R) -> RawRun {
    let (lower, upper) = problem.bounds();
    let mut log = Vec::with_capacity(budget);
    for _ in 0..budget {
        let x: Vec<f64> = (0..problem.dim())
            .map(|j| rng.random_range(lower[j]..=upper[j]))
            .collect();
        let objectives = problem.evaluate(&x).expect("sampled inside the box");
        log.push(LogRow {
            iteration: 0,
            x,
            objectives,
        });
    }
    RawRun {
        archive: nondominated_indices(&log),
        log,
    }
}

/// Plain NSGA-II spending the same evaluation budget the surrogate gets:
/// `budget/pop - 1` generations after the initial population, with any
/// remainder of the budget spent on uniform random samples so the log always
/// has exactly `budget` rows.
pub fn nsga2_budget_baseline<R: Rng>(
    problem: &Problem,
    pop_size: usize,
    budget: usize,
    rng: &mut R,
) -> RawRun {
    assert!(
        budget >= pop_size,
        "budget must cover the initial population"
    );
    let (lower, upper) = problem.bounds();
    let generations = budget / pop_size - 1;
    let config = Nsga2Config::new(pop_size, generations);

    let mut log: Vec<LogRow> = Vec::with_capacity(budget);
    nsga2_run(
        |x: &[f64]| {
            let objectives = problem.evaluate(x).expect("operators stay inside the box");
            log.push(LogRow {
                iteration: log.len() / pop_size,
                x: x.to_vec(),
                objectives: objectives.clone(),
            });
            objectives
        },
        lower,
        upper,
        &config,
        &[],
        rng,
    );
    let top_up_iteration = generations + 1;
    while log.len() < budget {
        let x: Vec<f64> = (0..problem.dim())
            .map(|j| rng.random_range(lower[j]..=upper[j]))
            .collect();
        let objectives = problem.evaluate(&x).expect("sampled inside the box");
        log.push(LogRow {
            iteration: top_up_iteration,
            x,
            objectives,
        });
    }
    RawRun {
        archive: nondominated_indices(&log),
        log,
    }
}

/// SAEA/ME with the library defaults, the inner optimizer sized by the
/// cell's population setting.
pub fn saeame_run<R: Rng>(
    problem: &Problem,
    pop_size: usize,
    budget: usize,
    rng: &mut R,
) -> Result<RawRun, HarnessError> {
    let config = SaeameConfig {
        inner_pop: Some(pop_size),
        ..Default::default()
    };
    let result = run_saeame(problem, budget, &config, rng)?;
    let log = result
        .log
        .into_iter()
        .map(|entry| LogRow {
            iteration: entry.iteration,
            x: entry.x,
            objectives: entry.objectives,
        })
        .collect();
    Ok(RawRun {
        log,
        archive: result.archive,
    })
}

fn nondominated_indices(log: &[LogRow]) -> Vec<usize> {
    let objectives: Vec<Vec<f64>> = log.iter().map(|row| row.objectives.clone()).collect();
    let mut front = fast_nondominated_sort(&objectives).swap_remove(0);
    front.sort_unstable();
    front
}

/// Runs one (problem, dim, algorithm, repeat) cell to a finished record.
pub fn run_cell(
    problem_id: ProblemId,
    dim: usize,
    algorithm: Algorithm,
    settings: DimSettings,
    seed: u64,
    repeat: usize,
) -> Result<RunRecord, HarnessError> {
    let problem = Problem::new(problem_id, dim)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let start = Instant::now();
    let raw = match algorithm {
        Algorithm::Saeame => saeame_run(&problem, settings.pop_size, settings.budget, &mut rng)?,
        Algorithm::Nsga2Budget => {
            nsga2_budget_baseline(&problem, settings.pop_size, settings.budget, &mut rng)
        }
        Algorithm::RandomSearch => random_search_baseline(&problem, settings.budget, &mut rng),
    };
    let wall_time_s = start.elapsed().as_secs_f64();

    let front: Vec<Vec<f64>> = raw
        .archive
        .iter()
        .map(|&i| raw.log[i].objectives.clone())
        .collect();
    let igd_value = igd(&front, &reference_front(&problem))?;

    Ok(RunRecord {
        problem: problem_id,
        dim,
        algorithm,
        repeat,
        seed,
        pop_size: settings.pop_size,
        budget: settings.budget,
        igd: igd_value,
        wall_time_s,
        archive: raw.archive,
        log: raw.log,
    })
}

/// What `run_experiment` did: freshly computed cells vs skipped existing
/// ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentOutcome {
    pub computed: usize,
    pub skipped: usize,
}

/// Runs the whole experiment matrix into `out_dir`, one record file per
/// cell. Existing records are kept unless `force` is set; cells run
/// concurrently on up to `workers` threads (`None` uses all cores).
pub fn run_experiment(
    config: &ExperimentConfig,
    out_dir: &Path,
    force: bool,
    workers: Option<usize>,
) -> Result<ExperimentOutcome, HarnessError> {
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;

    let mut jobs = Vec::new();
    let mut skipped = 0usize;
    for &problem_id in &config.problems {
        for &dim in &config.dims {
            let settings = config.dim_settings[&dim];
            for &algorithm in &config.algorithms {
                for repeat in 0..config.repeats {
                    let path =
                        out_dir.join(RunRecord::file_name(problem_id, dim, algorithm, repeat));
                    if !force && path.exists() {
                        skipped += 1;
                        continue;
                    }
                    jobs.push((problem_id, dim, algorithm, settings, repeat, path));
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| HarnessError::config(format!("worker pool: {e}")))?;
    let computed = jobs.len();
    pool.install(|| {
        jobs.into_par_iter()
            .try_for_each(|(problem_id, dim, algorithm, settings, repeat, path)| {
                let record = run_cell(
                    problem_id,
                    dim,
                    algorithm,
                    settings,
                    config.seed_for(repeat),
                    repeat,
                )?;
                record.write_atomic(&path)
            })
    })?;

    Ok(ExperimentOutcome { computed, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use saeame::moea::dominates;

    #[test]
    fn random_search_spends_the_budget_and_keeps_a_clean_archive() {
        let problem = Problem::new(ProblemId::Zdt1, 4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let run = random_search_baseline(&problem, 60, &mut rng);
        assert_eq!(run.log.len(), 60);
        assert!(!run.archive.is_empty());
        for &i in &run.archive {
            for &j in &run.archive {
                assert!(!dominates(&run.log[i].objectives, &run.log[j].objectives));
            }
        }

        let mut rng_again = ChaCha20Rng::seed_from_u64(9);
        let rerun = random_search_baseline(&problem, 60, &mut rng_again);
        assert_eq!(run.log, rerun.log);
        assert_eq!(run.archive, rerun.archive);

        let mut tiny_rng = ChaCha20Rng::seed_from_u64(9);
        let tiny = random_search_baseline(&problem, 1, &mut tiny_rng);
        assert_eq!(tiny.archive, vec![0]);
    }

    #[test]
    fn nsga2_baseline_fills_the_budget_exactly() {
        let problem = Problem::new(ProblemId::Zdt1, 4).unwrap();

        // 48 = 8 * 6: the generational runs cover the budget exactly.
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let exact = nsga2_budget_baseline(&problem, 8, 48, &mut rng);
        assert_eq!(exact.log.len(), 48);
        assert_eq!(exact.log.last().unwrap().iteration, 5);

        // 50 leaves a remainder of 2 topped up with random samples.
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let padded = nsga2_budget_baseline(&problem, 8, 50, &mut rng);
        assert_eq!(padded.log.len(), 50);
        assert_eq!(padded.log.last().unwrap().iteration, 6);
    }

    #[test]
    fn reference_front_is_stable_per_problem() {
        let problem = Problem::new(ProblemId::Zdt1, 4).unwrap();
        let a = reference_front(&problem);
        let b = reference_front(&problem);
        assert_eq!(a.len(), REFERENCE_FRONT_SIZE);
        assert_eq!(a, b);

        let other = Problem::new(ProblemId::Zdt2, 4).unwrap();
        assert_ne!(a, reference_front(&other));
    }
}
