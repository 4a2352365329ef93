//! SAEA/ME: a surrogate-assisted evolutionary algorithm for expensive
//! multi-objective optimization.
//!
//! One run proceeds as: Latin-hypercube initialization, a one-time
//! variable-to-objective correlation probe (n + 1 evaluations), then a loop
//! that refits one reduced-input GP per objective, runs NSGA-II on a
//! 2m-objective lower-confidence transform of the surrogate predictions,
//! picks a small batch by hypervolume contribution, and spends real
//! evaluations on that batch until the budget is gone. The result is the
//! non-dominated subset of everything actually evaluated.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::gp::{GpError, HyperSearchConfig, KernelParams, Prediction, ScaledSurrogate};
use crate::metrics::hypervolume_contributions;
use crate::moea::{fast_nondominated_sort, nsga2_run, Nsga2Config};
use crate::problems::{Problem, ProblemError};

/// Errors from configuration, budgeting, and surrogate construction.
#[derive(Debug, Error)]
pub enum SaeameError {
    /// The budget cannot cover the initial design plus the probes.
    #[error("budget {budget} cannot cover the {required} required startup evaluations")]
    BudgetExceeded { budget: usize, required: usize },
    /// A surrogate failed to factorize even after jitter escalation.
    #[error("surrogate for objective {objective} failed: {source}")]
    Surrogate {
        objective: usize,
        #[source]
        source: GpError,
    },
    /// Subset selection was handed nothing to choose from.
    #[error("candidate set is empty")]
    EmptyCandidates,
    /// A configuration field is out of range.
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },
    /// An expensive evaluation rejected its input.
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// All expensively evaluated points, deduplicated, plus the cumulative
/// evaluation count (which keeps charging for duplicates).
#[derive(Debug, Clone, Default)]
pub struct TrainingSet {
    entries: Vec<(Vec<f64>, Vec<f64>)>,
    fe_count: usize,
}

impl TrainingSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Charges one function evaluation and inserts the pair unless `x`
    /// duplicates an existing decision vector. Returns whether it was
    /// inserted.
    pub fn record(&mut self, x: Vec<f64>, objectives: Vec<f64>) -> bool {
        self.fe_count += 1;
        if self.contains(&x) {
            return false;
        }
        self.entries.push((x, objectives));
        true
    }

    /// Whether `x` exactly matches a stored decision vector.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.entries.iter().any(|(stored, _)| stored == x)
    }

    /// The stored (decision vector, objective vector) pairs in insertion
    /// order.
    pub fn entries(&self) -> &[(Vec<f64>, Vec<f64>)] {
        &self.entries
    }

    /// Expensive evaluations consumed so far.
    pub fn fe_count(&self) -> usize {
        self.fe_count
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Latin-hypercube design: `count` points in the box, with exactly one
/// sample per equal-width stratum in every one-dimensional projection and a
/// uniform jitter inside each stratum. Deterministic for a given generator
/// state.
pub fn latin_hypercube<R: Rng>(
    n: usize,
    count: usize,
    lower: &[f64],
    upper: &[f64],
    rng: &mut R,
) -> Vec<Vec<f64>> {
    assert!(count >= 1, "a design needs at least one point");
    assert_eq!(lower.len(), n);
    assert_eq!(upper.len(), n);

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut strata: Vec<usize> = (0..count).collect();
        strata.shuffle(rng);
        let column = strata
            .iter()
            .map(|&s| {
                let fraction = (s as f64 + rng.random::<f64>()) / count as f64;
                lower[j] + fraction * (upper[j] - lower[j])
            })
            .collect();
        columns.push(column);
    }
    (0..count)
        .map(|i| (0..n).map(|j| columns[j][i]).collect())
        .collect()
}

/// Which decision variables each objective responds to, as found by the
/// bound-to-bound probes.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationGroups {
    /// `groups[j]` lists the (0-based) variables correlated with objective
    /// `j`, in ascending order.
    pub groups: Vec<Vec<usize>>,
    /// Threshold an absolute objective change must reach to count.
    pub delta: f64,
    /// Evaluations the probes consumed; always `n + 1`.
    pub probe_cost: usize,
}

/// Correlation probing against an arbitrary evaluator: one sentinel at the
/// lower bounds, then one probe per variable with that variable moved to its
/// upper bound. A variable joins objective `j`'s group when the objective
/// moves by at least `delta` (or, with `literal_threshold`, by less than
/// `delta`). Two repairs keep every group usable: a group that ends up empty
/// becomes the full variable set, and a variable that lands in no group at
/// all joins every group. Both cases mean the probes carried no information,
/// and a variable outside every group would be invisible to the surrogates
/// yet still free to drift; terms symmetric about the box center (the
/// distance functions of ZDT4 and the DTLZ family) hit this, since a
/// bound-to-bound flip leaves them unchanged.
pub fn correlation_analysis_with<F>(
    evaluate: &mut F,
    lower: &[f64],
    upper: &[f64],
    delta: f64,
    literal_threshold: bool,
) -> CorrelationGroups
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = lower.len();
    assert_eq!(upper.len(), n);
    let sentinel = lower.to_vec();
    let base = evaluate(&sentinel);
    let m = base.len();

    let mut groups = vec![Vec::new(); m];
    for i in 0..n {
        let mut probe = sentinel.clone();
        probe[i] = upper[i];
        let values = evaluate(&probe);
        for j in 0..m {
            let change = (values[j] - base[j]).abs();
            let correlated = if literal_threshold {
                change < delta
            } else {
                change >= delta
            };
            if correlated {
                groups[j].push(i);
            }
        }
    }
    for group in &mut groups {
        if group.is_empty() {
            *group = (0..n).collect();
        }
    }
    let mut covered = vec![false; n];
    for group in &groups {
        for &i in group {
            covered[i] = true;
        }
    }
    for (i, seen) in covered.into_iter().enumerate() {
        if !seen {
            for group in &mut groups {
                group.push(i);
            }
        }
    }
    for group in &mut groups {
        group.sort_unstable();
    }
    CorrelationGroups {
        groups,
        delta,
        probe_cost: n + 1,
    }
}

/// Correlation probing on a benchmark problem; costs `n + 1` evaluations.
pub fn correlation_analysis(
    problem: &Problem,
    delta: f64,
    literal_threshold: bool,
) -> CorrelationGroups {
    let (lower, upper) = problem.bounds();
    let (lower, upper) = (lower.to_vec(), upper.to_vec());
    let mut evaluate = |x: &[f64]| {
        problem
            .evaluate(x)
            .expect("probe points lie within the bounds")
    };
    correlation_analysis_with(&mut evaluate, &lower, &upper, delta, literal_threshold)
}

/// Fits one reduced-input surrogate per objective on the current training
/// set. `searches[j]` controls objective `j`'s hyperparameter search.
pub fn build_surrogates(
    training: &TrainingSet,
    groups: &CorrelationGroups,
    lower: &[f64],
    upper: &[f64],
    searches: &[HyperSearchConfig],
) -> Result<Vec<ScaledSurrogate>, SaeameError> {
    assert!(
        !training.is_empty(),
        "cannot fit surrogates on an empty training set"
    );
    assert_eq!(groups.groups.len(), searches.len());
    let inputs: Vec<Vec<f64>> = training.entries().iter().map(|(x, _)| x.clone()).collect();
    groups
        .groups
        .iter()
        .zip(searches)
        .enumerate()
        .map(|(j, (features, search))| {
            let targets: Vec<f64> = training.entries().iter().map(|(_, f)| f[j]).collect();
            ScaledSurrogate::fit(&inputs, &targets, features, lower, upper, search).map_err(
                |source| SaeameError::Surrogate {
                    objective: j,
                    source,
                },
            )
        })
        .collect()
}

/// How predictive uncertainty enters the confidence bounds and boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpreadMode {
    /// The raw predictive variance, matching the printed form of the
    /// transform.
    #[default]
    Variance,
    /// The predictive standard deviation, the conventional confidence-bound
    /// scale.
    StdDev,
}

impl SpreadMode {
    /// The spread value this mode extracts from a prediction.
    pub fn spread(self, prediction: &Prediction) -> f64 {
        match self {
            SpreadMode::Variance => prediction.variance,
            SpreadMode::StdDev => prediction.variance.sqrt(),
        }
    }
}

/// The 2m-dimensional search objectives: for each original objective, its
/// predicted mean followed by a lower confidence bound on it.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedObjectives {
    /// `(mean_1, mean_1 - c*spread_1, mean_2, mean_2 - c*spread_2, ...)`.
    pub values: Vec<f64>,
    /// The coefficient `c` applied to the spread.
    pub lcb_coeff: f64,
}

impl TransformedObjectives {
    /// Number of transformed objectives, twice the original count.
    pub fn dimension(&self) -> usize {
        self.values.len()
    }
}

/// Builds the transformed objective vector from per-objective predictions.
pub fn transform_predictions(
    predictions: &[Prediction],
    lcb_coeff: f64,
    mode: SpreadMode,
) -> TransformedObjectives {
    let mut values = Vec::with_capacity(2 * predictions.len());
    for p in predictions {
        values.push(p.mean);
        values.push(p.mean - lcb_coeff * mode.spread(p));
    }
    TransformedObjectives { values, lcb_coeff }
}

/// Predicts with every surrogate at `x` and assembles the transformed
/// objective vector.
pub fn transformed_objectives(
    models: &[ScaledSurrogate],
    x: &[f64],
    lcb_coeff: f64,
    mode: SpreadMode,
) -> Result<TransformedObjectives, SaeameError> {
    let mut predictions = Vec::with_capacity(models.len());
    for (j, model) in models.iter().enumerate() {
        let p = model.predict(x).map_err(|source| SaeameError::Surrogate {
            objective: j,
            source,
        })?;
        predictions.push(p);
    }
    Ok(transform_predictions(&predictions, lcb_coeff, mode))
}

/// Candidates produced by one inner NSGA-II run, with the per-candidate
/// predicted means and the lower vertices of their uncertainty boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    /// Decision vectors, aligned with the two prediction lists.
    pub solutions: Vec<Vec<f64>>,
    /// Predicted mean vector per candidate.
    pub predicted_means: Vec<Vec<f64>>,
    /// Per-candidate `mean - box_coeff * spread` vector.
    pub lower_vertices: Vec<Vec<f64>>,
    /// Batch size the selection step aims for.
    pub k: usize,
}

impl CandidateSet {
    /// Assembles a candidate set from per-candidate, per-objective
    /// predictions.
    pub fn from_predictions(
        solutions: Vec<Vec<f64>>,
        predictions: &[Vec<Prediction>],
        box_coeff: f64,
        mode: SpreadMode,
        k: usize,
    ) -> Self {
        assert_eq!(solutions.len(), predictions.len());
        let predicted_means = predictions
            .iter()
            .map(|ps| ps.iter().map(|p| p.mean).collect())
            .collect();
        let lower_vertices = predictions
            .iter()
            .map(|ps| {
                ps.iter()
                    .map(|p| p.mean - box_coeff * mode.spread(p))
                    .collect()
            })
            .collect();
        Self {
            solutions,
            predicted_means,
            lower_vertices,
            k,
        }
    }
}

/// Ranks points by hypervolume contribution, best first, ties by index.
/// Points are min-max normalized per objective and measured against the
/// reference point 1.1 in every coordinate.
fn hvc_ranking(points: &[Vec<f64>]) -> Vec<usize> {
    let m = points[0].len();
    let mut normalized = vec![vec![0.0; m]; points.len()];
    for j in 0..m {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for p in points {
            min = min.min(p[j]);
            max = max.max(p[j]);
        }
        let range = max - min;
        if range > 0.0 {
            for (row, p) in normalized.iter_mut().zip(points) {
                row[j] = (p[j] - min) / range;
            }
        }
    }
    let reference = vec![1.1; m];
    let contributions = hypervolume_contributions(&normalized, &reference)
        .expect("normalized predictions are finite and non-empty");
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        contributions[b]
            .partial_cmp(&contributions[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    order
}

/// The index logic of batch selection, on precomputed contribution rankings
/// (best first) of the predicted means and of the box lower vertices.
///
/// Default mode returns the candidates ranked top-k by both lists, in
/// mean-ranking order; when that intersection is empty it alternates the two
/// lists' tops until `k` candidates are chosen. Union mode returns the
/// mean top-k followed by any extra box top-k members, at most `2k` in
/// total. Always returns at least one candidate.
pub fn select_from_rankings(
    means_ranked: &[usize],
    boxes_ranked: &[usize],
    k: usize,
    use_union: bool,
) -> Vec<usize> {
    assert_eq!(means_ranked.len(), boxes_ranked.len());
    assert!(k >= 1, "selection size must be at least 1");
    let k = k.min(means_ranked.len());
    let top_means = &means_ranked[..k];
    let top_boxes = &boxes_ranked[..k];

    if use_union {
        let mut chosen = top_means.to_vec();
        for &i in top_boxes {
            if !chosen.contains(&i) {
                chosen.push(i);
            }
        }
        return chosen;
    }

    let both: Vec<usize> = top_means
        .iter()
        .copied()
        .filter(|i| top_boxes.contains(i))
        .collect();
    if !both.is_empty() {
        return both;
    }
    // Disjoint top-k sets: alternate the two lists' best entries so the
    // batch still mixes exploitation and exploration.
    let mut fallback = Vec::with_capacity(k);
    for position in 0..means_ranked.len() {
        for ranked in [means_ranked, boxes_ranked] {
            let i = ranked[position];
            if !fallback.contains(&i) {
                fallback.push(i);
                if fallback.len() == k {
                    return fallback;
                }
            }
        }
    }
    fallback
}

/// Picks the batch of candidates to evaluate: ranks means and box vertices
/// by hypervolume contribution, applies [`select_from_rankings`] with the
/// set's `k`, and drops any candidate already present in the training set.
/// Returned indices point into `candidates.solutions`, in evaluation
/// priority order.
pub fn subset_selection(
    candidates: &CandidateSet,
    training: &TrainingSet,
    use_union: bool,
) -> Result<Vec<usize>, SaeameError> {
    if candidates.solutions.is_empty() {
        return Err(SaeameError::EmptyCandidates);
    }
    if candidates.k == 0 {
        return Err(SaeameError::InvalidConfig {
            reason: "selection size k must be at least 1".into(),
        });
    }
    assert_eq!(candidates.solutions.len(), candidates.predicted_means.len());
    assert_eq!(candidates.solutions.len(), candidates.lower_vertices.len());

    let means_ranked = hvc_ranking(&candidates.predicted_means);
    let boxes_ranked = hvc_ranking(&candidates.lower_vertices);
    let chosen = select_from_rankings(&means_ranked, &boxes_ranked, candidates.k, use_union);
    Ok(chosen
        .into_iter()
        .filter(|&i| !training.contains(&candidates.solutions[i]))
        .collect())
}

/// Tuning knobs of one run. The defaults follow the published setup:
/// batches of `k = 10`, probe threshold `1e-6`, coefficient 1 on the
/// confidence bound, factor 2 on the selection boxes, and variance as the
/// spread.
#[derive(Debug, Clone)]
pub struct SaeameConfig {
    /// Initial design size; `None` means `11n - 1` capped at 40% of the
    /// budget.
    pub n_init: Option<usize>,
    /// Batch size for subset selection.
    pub k_select: usize,
    /// Correlation probe threshold.
    pub delta: f64,
    /// Coefficient on the spread in the transformed objectives.
    pub lcb_coeff: f64,
    /// Spread multiple defining the selection boxes' lower vertices.
    pub box_coeff: f64,
    /// Variance or standard deviation as the spread.
    pub spread_mode: SpreadMode,
    /// Use the probe pseudocode's inverted threshold (change < delta joins a
    /// group) instead of the significant-change reading.
    pub alg3_literal: bool,
    /// Evaluate the union of the two top-k sets instead of the intersection.
    pub alg4_union: bool,
    /// Inner NSGA-II population; `None` picks 50/100/300 by dimension.
    pub inner_pop: Option<usize>,
    /// Inner NSGA-II generations.
    pub inner_generations: usize,
    /// Seed the inner population with the current non-dominated designs.
    /// Off by default: seeded designs survive the inner run, crowd out novel
    /// candidates, and shrink each batch to one or two points.
    pub inner_seed_archive: bool,
    /// Hyperparameter search restarts per surrogate refit.
    pub hyper_restarts: usize,
    /// Hyperparameter search iterations per restart.
    pub hyper_max_iters: usize,
}

impl Default for SaeameConfig {
    fn default() -> Self {
        Self {
            n_init: None,
            k_select: 10,
            delta: 1e-6,
            lcb_coeff: 1.0,
            box_coeff: 2.0,
            spread_mode: SpreadMode::Variance,
            alg3_literal: false,
            alg4_union: false,
            inner_pop: None,
            inner_generations: 50,
            inner_seed_archive: false,
            hyper_restarts: 5,
            hyper_max_iters: 60,
        }
    }
}

/// Default initial design size: `11n - 1`, capped at 40% of the budget.
pub fn default_init_size(n: usize, budget: usize) -> usize {
    (11 * n - 1).min(budget * 2 / 5).max(1)
}

/// Default inner NSGA-II population for a given dimension.
pub fn default_inner_pop(n: usize) -> usize {
    if n <= 10 {
        50
    } else if n <= 20 {
        100
    } else {
        300
    }
}

/// One expensive evaluation as it happened.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRecord {
    /// 0 for the initial design and probes, then 1, 2, ... per model
    /// iteration.
    pub iteration: usize,
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
}

/// Everything a finished run reports.
#[derive(Debug, Clone)]
pub struct SaeameResult {
    /// One entry per expensive evaluation, in evaluation order.
    pub log: Vec<EvaluationRecord>,
    /// Indices into `log` of the final non-dominated points, ascending.
    pub archive: Vec<usize>,
    /// The correlation groups the run used.
    pub groups: CorrelationGroups,
    /// Total expensive evaluations consumed.
    pub fe_count: usize,
}

impl SaeameResult {
    /// The archived decision vectors and their objective vectors.
    pub fn archive_points(&self) -> Vec<(&[f64], &[f64])> {
        self.archive
            .iter()
            .map(|&i| (self.log[i].x.as_slice(), self.log[i].objectives.as_slice()))
            .collect()
    }
}

/// Runs SAEA/ME on `problem` until exactly `budget` expensive evaluations
/// have been spent. Identical seed, config, and budget reproduce the run
/// bit for bit.
pub fn run_saeame<R: Rng>(
    problem: &Problem,
    budget: usize,
    config: &SaeameConfig,
    rng: &mut R,
) -> Result<SaeameResult, SaeameError> {
    let n = problem.dim();
    let m = problem.num_objectives();
    let (lower, upper) = problem.bounds();
    let (lower, upper) = (lower.to_vec(), upper.to_vec());

    if config.k_select == 0 {
        return Err(SaeameError::InvalidConfig {
            reason: "k_select must be at least 1".into(),
        });
    }
    if !(config.lcb_coeff >= 0.0 && config.box_coeff >= 0.0) {
        return Err(SaeameError::InvalidConfig {
            reason: "lcb_coeff and box_coeff must be nonnegative".into(),
        });
    }
    let inner_pop = config.inner_pop.unwrap_or_else(|| default_inner_pop(n));
    if inner_pop < 2 || inner_pop % 2 != 0 {
        return Err(SaeameError::InvalidConfig {
            reason: format!("inner_pop must be even and at least 2, got {inner_pop}"),
        });
    }
    let n_init = match config.n_init {
        Some(0) => {
            return Err(SaeameError::InvalidConfig {
                reason: "n_init must be at least 1".into(),
            })
        }
        Some(v) => v,
        None => default_init_size(n, budget),
    };
    let required = n_init + n + 1;
    if budget < required {
        return Err(SaeameError::BudgetExceeded { budget, required });
    }

    let mut log: Vec<EvaluationRecord> = Vec::with_capacity(budget);
    let mut training = TrainingSet::new();
    // Log index of each unique training entry, for the final archive.
    let mut entry_log_indices: Vec<usize> = Vec::new();

    {
        let mut record = |x: Vec<f64>, iteration: usize| -> Result<Vec<f64>, SaeameError> {
            let objectives = problem.evaluate(&x)?;
            if training.record(x.clone(), objectives.clone()) {
                entry_log_indices.push(log.len());
            }
            log.push(EvaluationRecord {
                iteration,
                x,
                objectives: objectives.clone(),
            });
            Ok(objectives)
        };

        for x in latin_hypercube(n, n_init, &lower, &upper, rng) {
            record(x, 0)?;
        }
    }

    let groups = {
        let mut probe = |x: &[f64]| -> Vec<f64> {
            let objectives = problem
                .evaluate(x)
                .expect("probe points lie within the bounds");
            if training.record(x.to_vec(), objectives.clone()) {
                entry_log_indices.push(log.len());
            }
            log.push(EvaluationRecord {
                iteration: 0,
                x: x.to_vec(),
                objectives: objectives.clone(),
            });
            objectives
        };
        correlation_analysis_with(
            &mut probe,
            &lower,
            &upper,
            config.delta,
            config.alg3_literal,
        )
    };

    let mut warm: Vec<Option<KernelParams>> = vec![None; m];
    let mut iteration = 1;
    while training.fe_count() < budget {
        let hyper_seeds: Vec<u64> = (0..m).map(|_| rng.random()).collect();
        let nsga_seed: u64 = rng.random();

        let searches: Vec<HyperSearchConfig> = (0..m)
            .map(|j| HyperSearchConfig {
                restarts: config.hyper_restarts,
                max_iters: config.hyper_max_iters,
                seed: hyper_seeds[j],
                warm_start: warm[j].clone(),
            })
            .collect();
        let surrogates = build_surrogates(&training, &groups, &lower, &upper, &searches)?;
        for (slot, surrogate) in warm.iter_mut().zip(&surrogates) {
            *slot = Some(surrogate.model().params().clone());
        }

        let seeds = if config.inner_seed_archive {
            nondominated_designs(&training, inner_pop / 2)
        } else {
            Vec::new()
        };
        let transformed = |x: &[f64]| -> Vec<f64> {
            let mut values = Vec::with_capacity(2 * m);
            for surrogate in &surrogates {
                let p = surrogate
                    .predict(x)
                    .expect("candidate dimension matches the problem");
                values.push(p.mean);
                values.push(p.mean - config.lcb_coeff * config.spread_mode.spread(&p));
            }
            values
        };
        let inner_config = Nsga2Config::new(inner_pop, config.inner_generations);
        let population = nsga2_run(
            transformed,
            &lower,
            &upper,
            &inner_config,
            &seeds,
            &mut ChaCha20Rng::seed_from_u64(nsga_seed),
        );

        let mut solutions: Vec<Vec<f64>> = Vec::new();
        for member in &population.members {
            if !training.contains(&member.genes) && !solutions.contains(&member.genes) {
                solutions.push(member.genes.clone());
            }
        }

        let selected: Vec<Vec<f64>> = if solutions.is_empty() {
            Vec::new()
        } else {
            let predictions: Vec<Vec<Prediction>> = solutions
                .iter()
                .map(|x| {
                    surrogates
                        .iter()
                        .map(|s| s.predict(x).expect("candidate dimension matches"))
                        .collect()
                })
                .collect();
            let candidates = CandidateSet::from_predictions(
                solutions,
                &predictions,
                config.box_coeff,
                config.spread_mode,
                config.k_select,
            );
            let picked = subset_selection(&candidates, &training, config.alg4_union)?;
            picked
                .into_iter()
                .map(|i| candidates.solutions[i].clone())
                .collect()
        };

        let remaining = budget - training.fe_count();
        let mut batch: Vec<Vec<f64>> = selected.into_iter().take(remaining).collect();
        if batch.is_empty() {
            // Everything proposed was already evaluated; spend one
            // evaluation on a fresh uniform point so the loop always makes
            // progress.
            batch.push(
                (0..n)
                    .map(|j| rng.random_range(lower[j]..=upper[j]))
                    .collect(),
            );
        }
        for x in batch {
            let objectives = problem.evaluate(&x)?;
            if training.record(x.clone(), objectives.clone()) {
                entry_log_indices.push(log.len());
            }
            log.push(EvaluationRecord {
                iteration,
                x,
                objectives,
            });
        }
        iteration += 1;
    }

    let objective_rows: Vec<Vec<f64>> = training.entries().iter().map(|(_, f)| f.clone()).collect();
    let fronts = fast_nondominated_sort(&objective_rows);
    let mut archive: Vec<usize> = fronts[0].iter().map(|&i| entry_log_indices[i]).collect();
    archive.sort_unstable();

    Ok(SaeameResult {
        log,
        archive,
        groups,
        fe_count: training.fe_count(),
    })
}

/// The current non-dominated decision vectors, thinned evenly to `cap`.
fn nondominated_designs(training: &TrainingSet, cap: usize) -> Vec<Vec<f64>> {
    let objective_rows: Vec<Vec<f64>> = training.entries().iter().map(|(_, f)| f.clone()).collect();
    let fronts = fast_nondominated_sort(&objective_rows);
    let front: Vec<Vec<f64>> = fronts[0]
        .iter()
        .map(|&i| training.entries()[i].0.clone())
        .collect();
    if front.len() <= cap || cap == 0 {
        return front;
    }
    (0..cap)
        .map(|i| front[i * front.len() / cap].clone())
        .collect()
}
