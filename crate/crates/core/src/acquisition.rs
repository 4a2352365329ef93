//! Single-objective acquisition functions and a generic GP-assisted loop.
//!
//! This is the classic efficient-global-optimization recipe kept as a
//! self-contained baseline: probability of improvement, expected
//! improvement, and a confidence bound, each evaluated on a GP prediction,
//! plus a loop that alternates surrogate refits with one real evaluation of
//! the acquisition optimum per iteration.
//!
//! Every function takes a `literal_variance` flag. The default (`false`)
//! scales by the predictive standard deviation with minimization-consistent
//! orientations. The literal mode (`true`) reproduces the printed formulas
//! this implementation descends from: the raw variance as the spread, the
//! improvement probability oriented toward larger means, and an additive
//! confidence bound.

use rand::Rng;
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::algorithm::latin_hypercube;
use crate::gp::{GpError, HyperSearchConfig, Prediction, ScaledSurrogate};
use crate::moea::{polynomial_mutation, sbx_crossover};

/// The best expensively evaluated point so far.
#[derive(Debug, Clone, PartialEq)]
pub struct Incumbent {
    pub best_input: Vec<f64>,
    pub best_value: f64,
}

/// Trade-off coefficient of the confidence bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UcbParams {
    pub kappa: f64,
}

impl UcbParams {
    /// Builds the parameter set; `kappa` must be nonnegative.
    pub fn new(kappa: f64) -> Self {
        assert!(kappa >= 0.0, "kappa must be nonnegative");
        Self { kappa }
    }
}

/// Which acquisition function drives the generic loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AcquisitionKind {
    ProbabilityOfImprovement,
    ExpectedImprovement,
    ConfidenceBound(UcbParams),
}

fn spread(prediction: &Prediction, literal_variance: bool) -> f64 {
    if literal_variance {
        prediction.variance
    } else {
        prediction.variance.sqrt()
    }
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal parameters are valid")
}

/// Probability that a sample from the prediction improves on the incumbent
/// (minimization): `Phi((f* - mean)/s)`, or the literal printed form
/// `Phi((mean - f*)/V)` with the flag. A zero spread degenerates to a 0/1
/// indicator in the active orientation.
pub fn probability_of_improvement(
    prediction: &Prediction,
    incumbent: &Incumbent,
    literal_variance: bool,
) -> f64 {
    let f_star = incumbent.best_value;
    let s = spread(prediction, literal_variance);
    let signed = if literal_variance {
        prediction.mean - f_star
    } else {
        f_star - prediction.mean
    };
    if s == 0.0 {
        return if signed > 0.0 { 1.0 } else { 0.0 };
    }
    standard_normal().cdf(signed / s)
}

/// Expected improvement over the incumbent under minimization:
/// `(f* - mean)·Phi(z) + s·phi(z)` with `z = (f* - mean)/s`; the flag swaps
/// the spread `s` for the raw variance. A zero spread degenerates to
/// `max(f* - mean, 0)`.
pub fn expected_improvement(
    prediction: &Prediction,
    incumbent: &Incumbent,
    literal_variance: bool,
) -> f64 {
    let diff = incumbent.best_value - prediction.mean;
    let s = spread(prediction, literal_variance);
    if s == 0.0 {
        return diff.max(0.0);
    }
    let z = diff / s;
    let normal = standard_normal();
    (diff * normal.cdf(z) + s * normal.pdf(z)).max(0.0)
}

/// Confidence bound on the prediction: `mean - kappa·s` (optimistic under
/// minimization), or the literal additive form `mean + kappa·V` with the
/// flag. The generic loop always minimizes the returned bound.
pub fn confidence_bound(
    prediction: &Prediction,
    params: &UcbParams,
    literal_variance: bool,
) -> f64 {
    let s = spread(prediction, literal_variance);
    if literal_variance {
        prediction.mean + params.kappa * s
    } else {
        prediction.mean - params.kappa * s
    }
}

/// Runs the generic surrogate-assisted loop on a single-objective black box
/// over the box `[lower, upper]`.
///
/// A Latin-hypercube design of `min(11n - 1, budget)` points seeds the log;
/// each following iteration refits a GP on everything evaluated, optimizes
/// the acquisition with a real-coded GA (population 50, 50 generations,
/// tournament selection, SBX, polynomial mutation), and spends exactly one
/// real evaluation on the proposal. Returns the argmin over the whole
/// evaluation log.
pub fn run_generic_saea<F, R>(
    mut objective: F,
    lower: &[f64],
    upper: &[f64],
    budget: usize,
    acquisition: AcquisitionKind,
    literal_variance: bool,
    rng: &mut R,
) -> Result<Incumbent, GpError>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng,
{
    let n = lower.len();
    assert_eq!(upper.len(), n);
    assert!(budget >= 1, "budget must allow at least one evaluation");

    let init = (11 * n - 1).min(budget);
    let mut log: Vec<(Vec<f64>, f64)> = Vec::with_capacity(budget);
    for x in latin_hypercube(n, init, lower, upper, rng) {
        let value = objective(&x);
        log.push((x, value));
    }

    let features: Vec<usize> = (0..n).collect();
    while log.len() < budget {
        let inputs: Vec<Vec<f64>> = log.iter().map(|(x, _)| x.clone()).collect();
        let targets: Vec<f64> = log.iter().map(|(_, v)| *v).collect();
        let search = HyperSearchConfig {
            seed: rng.random(),
            ..Default::default()
        };
        let surrogate = ScaledSurrogate::fit(&inputs, &targets, &features, lower, upper, &search)?;
        let incumbent = argmin(&log);

        let mut score = |x: &[f64]| {
            let prediction = surrogate.predict(x).expect("proposal dimension matches");
            match &acquisition {
                AcquisitionKind::ProbabilityOfImprovement => {
                    -probability_of_improvement(&prediction, &incumbent, literal_variance)
                }
                AcquisitionKind::ExpectedImprovement => {
                    -expected_improvement(&prediction, &incumbent, literal_variance)
                }
                AcquisitionKind::ConfidenceBound(params) => {
                    confidence_bound(&prediction, params, literal_variance)
                }
            }
        };
        let proposal = ga_minimize(&mut score, lower, upper, 50, 50, rng);
        let value = objective(&proposal);
        log.push((proposal, value));
    }
    Ok(argmin(&log))
}

/// The log's minimum-value entry, earliest index on ties.
fn argmin(log: &[(Vec<f64>, f64)]) -> Incumbent {
    let mut best = 0;
    for i in 1..log.len() {
        if log[i].1 < log[best].1 {
            best = i;
        }
    }
    Incumbent {
        best_input: log[best].0.clone(),
        best_value: log[best].1,
    }
}

/// Small real-coded GA minimizing `score`, returning the best point ever
/// visited.
fn ga_minimize<F, R>(
    score: &mut F,
    lower: &[f64],
    upper: &[f64],
    pop_size: usize,
    generations: usize,
    rng: &mut R,
) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng,
{
    let n = lower.len();
    let p_m = 1.0 / n as f64;
    let mut population: Vec<(Vec<f64>, f64)> = (0..pop_size)
        .map(|_| {
            let x: Vec<f64> = (0..n)
                .map(|j| rng.random_range(lower[j]..=upper[j]))
                .collect();
            let value = score(&x);
            (x, value)
        })
        .collect();
    let mut best = best_of(&population).clone();

    for _ in 0..generations {
        let mut next = Vec::with_capacity(pop_size);
        next.push(best_of(&population).clone());
        while next.len() < pop_size {
            let a = tournament(&population, rng);
            let b = tournament(&population, rng);
            let (c1, c2) = if rng.random::<f64>() <= 0.9 {
                sbx_crossover(&population[a].0, &population[b].0, lower, upper, 20.0, rng)
            } else {
                (population[a].0.clone(), population[b].0.clone())
            };
            for child in [c1, c2] {
                if next.len() == pop_size {
                    break;
                }
                let mutated = polynomial_mutation(&child, lower, upper, p_m, 20.0, rng);
                let value = score(&mutated);
                next.push((mutated, value));
            }
        }
        population = next;
        let generation_best = best_of(&population);
        if generation_best.1 < best.1 {
            best = generation_best.clone();
        }
    }
    best.0
}

fn best_of(population: &[(Vec<f64>, f64)]) -> &(Vec<f64>, f64) {
    let mut best = 0;
    for i in 1..population.len() {
        if population[i].1 < population[best].1 {
            best = i;
        }
    }
    &population[best]
}

fn tournament<R: Rng>(population: &[(Vec<f64>, f64)], rng: &mut R) -> usize {
    let a = rng.random_range(0..population.len());
    let b = rng.random_range(0..population.len());
    if population[a].1 <= population[b].1 {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn incumbent(value: f64) -> Incumbent {
        Incumbent {
            best_input: vec![0.0],
            best_value: value,
        }
    }

    #[test]
    fn pi_matches_frozen_values() {
        let normal = standard_normal();

        let at_incumbent = Prediction {
            mean: 1.0,
            variance: 4.0,
        };
        assert_eq!(
            probability_of_improvement(&at_incumbent, &incumbent(1.0), false),
            0.5
        );

        // Mean one spread unit below the incumbent.
        let below = Prediction {
            mean: 1.0,
            variance: 1.0,
        };
        let value = probability_of_improvement(&below, &incumbent(2.0), false);
        assert!((value - normal.cdf(1.0)).abs() < 1e-12);
        assert!((value - 0.841345).abs() < 1e-6);

        let certain_worse = Prediction {
            mean: 2.0,
            variance: 0.0,
        };
        assert_eq!(
            probability_of_improvement(&certain_worse, &incumbent(1.0), false),
            0.0
        );
        let certain_better = Prediction {
            mean: 0.5,
            variance: 0.0,
        };
        assert_eq!(
            probability_of_improvement(&certain_better, &incumbent(1.0), false),
            1.0
        );

        // Literal mode divides by the variance and flips the orientation.
        let literal = Prediction {
            mean: 2.0,
            variance: 0.5,
        };
        let literal_value = probability_of_improvement(&literal, &incumbent(1.0), true);
        assert!((literal_value - normal.cdf(2.0)).abs() < 1e-12);
    }

    #[test]
    fn ei_matches_frozen_values() {
        let normal = standard_normal();

        // One spread unit of predicted improvement: Phi(1) + phi(1).
        let one_below = Prediction {
            mean: 0.0,
            variance: 1.0,
        };
        let value = expected_improvement(&one_below, &incumbent(1.0), false);
        assert!((value - (normal.cdf(1.0) + normal.pdf(1.0))).abs() < 1e-12);
        assert!((value - 1.0833154706).abs() < 1e-9);

        let exact_at = Prediction {
            mean: 1.0,
            variance: 0.0,
        };
        assert_eq!(expected_improvement(&exact_at, &incumbent(1.0), false), 0.0);
        let exact_below = Prediction {
            mean: 0.3,
            variance: 0.0,
        };
        assert!((expected_improvement(&exact_below, &incumbent(1.0), false) - 0.7).abs() < 1e-12);

        // No predicted improvement, all value from the spread: phi(0).
        let at = Prediction {
            mean: 1.0,
            variance: 1.0,
        };
        let value_at = expected_improvement(&at, &incumbent(1.0), false);
        assert!((value_at - normal.pdf(0.0)).abs() < 1e-12);
        assert!((value_at - 0.398942).abs() < 1e-6);

        // Literal mode: spread 2 means z = 1/2.
        let literal = Prediction {
            mean: 0.0,
            variance: 2.0,
        };
        let literal_value = expected_improvement(&literal, &incumbent(1.0), true);
        let expected = normal.cdf(0.5) + 2.0 * normal.pdf(0.5);
        assert!((literal_value - expected).abs() < 1e-12);
    }

    #[test]
    fn cb_matches_frozen_values() {
        let p = Prediction {
            mean: 1.0,
            variance: 0.25,
        };
        assert_eq!(confidence_bound(&p, &UcbParams::new(0.0), false), 1.0);
        assert_eq!(confidence_bound(&p, &UcbParams::new(2.0), false), 0.0);

        let literal = Prediction {
            mean: 1.0,
            variance: 0.5,
        };
        assert_eq!(confidence_bound(&literal, &UcbParams::new(2.0), true), 2.0);
    }

    #[test]
    fn ei_is_nonnegative_and_dominates_the_plug_in_improvement() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let prediction = Prediction {
                mean: rng.random_range(-5.0..5.0),
                variance: rng.random_range(0.0..4.0),
            };
            let target = incumbent(rng.random_range(-5.0..5.0));
            let value = expected_improvement(&prediction, &target, false);
            assert!(value >= 0.0);
            if prediction.variance > 0.0 && prediction.mean < target.best_value {
                assert!(value + 1e-12 >= target.best_value - prediction.mean);
            }
        }
    }

    #[test]
    fn pi_is_monotone_in_mean_and_incumbent() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..500 {
            let variance = rng.random_range(0.01..4.0);
            let f_star = rng.random_range(-2.0..2.0);
            let m1 = rng.random_range(-3.0..3.0);
            let m2 = m1 + rng.random_range(0.0..2.0);
            let p1 = probability_of_improvement(
                &Prediction { mean: m1, variance },
                &incumbent(f_star),
                false,
            );
            let p2 = probability_of_improvement(
                &Prediction { mean: m2, variance },
                &incumbent(f_star),
                false,
            );
            assert!(p1 >= p2);

            let higher_star = probability_of_improvement(
                &Prediction { mean: m1, variance },
                &incumbent(f_star + rng.random_range(0.0..2.0)),
                false,
            );
            assert!(higher_star >= p1);
        }
    }

    #[test]
    fn acquisitions_match_monte_carlo() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let samples = 1_000_000usize;
        let triples = [
            (0.0, 1.0, 0.5),
            (1.0, 0.5, 1.2),
            (-0.5, 2.0, 0.0),
            (2.0, 0.2, 1.9),
            (0.3, 1.5, -0.4),
        ];
        for &(mean, sd, f_star) in &triples {
            let prediction = Prediction {
                mean,
                variance: sd * sd,
            };
            let target = incumbent(f_star);

            let mut improvements = 0usize;
            let mut gain_sum = 0.0;
            let mut gain_sq = 0.0;
            let mut value_sum = 0.0;
            let mut value_sq = 0.0;
            for _ in 0..samples {
                let draw = mean + sd * rng.sample::<f64, _>(rand_distr::StandardNormal);
                if draw < f_star {
                    improvements += 1;
                }
                let gain = (f_star - draw).max(0.0);
                gain_sum += gain;
                gain_sq += gain * gain;
                value_sum += draw;
                value_sq += draw * draw;
            }
            let nf = samples as f64;

            let pi_estimate = improvements as f64 / nf;
            let pi_se = (pi_estimate * (1.0 - pi_estimate) / nf).sqrt().max(1e-6);
            let pi = probability_of_improvement(&prediction, &target, false);
            assert!(
                (pi - pi_estimate).abs() <= 3.0 * pi_se,
                "PI {pi} vs MC {pi_estimate}"
            );

            let ei_estimate = gain_sum / nf;
            let ei_se = ((gain_sq / nf - ei_estimate * ei_estimate) / nf)
                .sqrt()
                .max(1e-9);
            let ei = expected_improvement(&prediction, &target, false);
            assert!(
                (ei - ei_estimate).abs() <= 3.0 * ei_se,
                "EI {ei} vs MC {ei_estimate}"
            );

            let kappa = 1.7;
            let mean_estimate = value_sum / nf;
            let sd_estimate = (value_sq / nf - mean_estimate * mean_estimate).sqrt();
            let cb_estimate = mean_estimate - kappa * sd_estimate;
            let cb_se = sd * (1.0 / nf + kappa * kappa / (2.0 * nf)).sqrt();
            let cb = confidence_bound(&prediction, &UcbParams::new(kappa), false);
            assert!(
                (cb - cb_estimate).abs() <= 3.0 * cb_se,
                "CB {cb} vs MC {cb_estimate}"
            );
        }
    }

    #[test]
    fn loop_with_budget_equal_to_design_size_returns_design_minimum() {
        let mut evaluated: Vec<(Vec<f64>, f64)> = Vec::new();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let result = run_generic_saea(
            |x: &[f64]| {
                let v = (x[0] - 0.3) * (x[0] - 0.3);
                evaluated.push((x.to_vec(), v));
                v
            },
            &[0.0],
            &[1.0],
            10,
            AcquisitionKind::ExpectedImprovement,
            false,
            &mut rng,
        )
        .unwrap();

        assert_eq!(evaluated.len(), 10);
        let log_min = evaluated
            .iter()
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(result.best_value, log_min);
    }

    #[test]
    fn loop_incumbent_is_always_the_log_argmin() {
        for kind in [
            AcquisitionKind::ProbabilityOfImprovement,
            AcquisitionKind::ExpectedImprovement,
            AcquisitionKind::ConfidenceBound(UcbParams::new(2.0)),
        ] {
            let mut evaluated: Vec<(Vec<f64>, f64)> = Vec::new();
            let mut rng = ChaCha20Rng::seed_from_u64(13);
            let result = run_generic_saea(
                |x: &[f64]| {
                    let v = (x[0] - 0.7) * (x[0] - 0.7) + x[1].sin().abs();
                    evaluated.push((x.to_vec(), v));
                    v
                },
                &[0.0, 0.0],
                &[1.0, 3.0],
                25,
                kind,
                false,
                &mut rng,
            )
            .unwrap();

            assert_eq!(evaluated.len(), 25);
            let (best_x, best_v) = evaluated
                .iter()
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            assert_eq!(result.best_value, *best_v);
            assert_eq!(&result.best_input, best_x);
        }
    }

    #[test]
    fn loop_converges_on_a_quadratic() {
        let mut successes = 0;
        for seed in 0..11u64 {
            let mut rng = ChaCha20Rng::seed_from_u64(100 + seed);
            let result = run_generic_saea(
                |x: &[f64]| (x[0] - 0.3) * (x[0] - 0.3),
                &[0.0],
                &[1.0],
                30,
                AcquisitionKind::ExpectedImprovement,
                false,
                &mut rng,
            )
            .unwrap();
            if result.best_value <= 1e-3 {
                successes += 1;
            }
        }
        assert!(successes >= 9, "converged in only {successes}/11 runs");
    }
}
