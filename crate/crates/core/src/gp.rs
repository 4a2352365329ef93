//! Gaussian process regression with a squared-exponential kernel.
//!
//! A model is fit by Cholesky factorization of the kernel matrix (with an
//! escalating diagonal jitter for conditioning), predicts mean and variance
//! through triangular solves, and learns its hyperparameters by multi-start
//! Nelder-Mead ascent of the log marginal likelihood in log space.
//! [`ScaledSurrogate`] wraps the raw model with input rescaling to the unit
//! box, target standardization, and projection onto a variable subset; that
//! is the form the optimizer layers consume.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

/// Relative jitter first added to the covariance diagonal.
const JITTER_FLOOR: f64 = 1e-10;
/// Relative jitter beyond which factorization failure is reported.
const JITTER_CEIL: f64 = 1e-4;

/// Errors from kernel evaluation, fitting, prediction, and hyperparameter
/// search.
#[derive(Debug, Error, PartialEq)]
pub enum GpError {
    /// Two vectors that must have equal length do not.
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A kernel parameter is outside its valid range.
    #[error("kernel parameter {name} is invalid: {value}")]
    InvalidParam { name: &'static str, value: f64 },
    /// No training rows were supplied.
    #[error("training set is empty")]
    EmptyTrainingSet,
    /// The number of targets does not match the number of rows.
    #[error("{rows} training rows but {targets} targets")]
    TargetCountMismatch { rows: usize, targets: usize },
    /// Cholesky factorization failed at every jitter level.
    #[error("covariance factorization failed even with jitter {max_jitter:e}")]
    NumericalFailure { max_jitter: f64 },
    /// Hyperparameter search needs more data.
    #[error("hyperparameter search needs at least {min} points, got {got}")]
    TooFewPoints { got: usize, min: usize },
    /// A feature index points outside the decision vector.
    #[error("feature index {index} out of range for dimension {dim}")]
    FeatureOutOfRange { index: usize, dim: usize },
    /// The feature subset is empty.
    #[error("feature subset is empty")]
    NoFeatures,
}

/// Squared-exponential kernel hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelParams {
    /// Output scale `sigma_f`, in target standard-deviation units.
    pub sigma_f: f64,
    /// Isotropic length-scale `l`, in input-distance units.
    pub length_scale: f64,
    /// Observation-noise standard deviation `sigma_n`.
    pub sigma_n: f64,
}

impl KernelParams {
    /// Builds a validated parameter set.
    pub fn new(sigma_f: f64, length_scale: f64, sigma_n: f64) -> Result<Self, GpError> {
        let params = Self {
            sigma_f,
            length_scale,
            sigma_n,
        };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<(), GpError> {
        if !(self.sigma_f > 0.0) || !self.sigma_f.is_finite() {
            return Err(GpError::InvalidParam {
                name: "sigma_f",
                value: self.sigma_f,
            });
        }
        if !(self.length_scale > 0.0) || !self.length_scale.is_finite() {
            return Err(GpError::InvalidParam {
                name: "length_scale",
                value: self.length_scale,
            });
        }
        if !(self.sigma_n >= 0.0) || !self.sigma_n.is_finite() {
            return Err(GpError::InvalidParam {
                name: "sigma_n",
                value: self.sigma_n,
            });
        }
        Ok(())
    }
}

/// Posterior mean and variance at a query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// Predicted mean.
    pub mean: f64,
    /// Predictive variance, clamped to be nonnegative.
    pub variance: f64,
}

impl Prediction {
    /// Predictive standard deviation.
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Squared-exponential covariance `sigma_f^2 * exp(-||x - x'||^2 / (2 l^2))`.
pub fn kernel(x: &[f64], x_prime: &[f64], params: &KernelParams) -> Result<f64, GpError> {
    params.validate()?;
    if x.len() != x_prime.len() {
        return Err(GpError::DimensionMismatch {
            expected: x.len(),
            got: x_prime.len(),
        });
    }
    let sq: f64 = x.iter().zip(x_prime).map(|(a, b)| (a - b) * (a - b)).sum();
    let sf2 = params.sigma_f * params.sigma_f;
    Ok(sf2 * (-sq / (2.0 * params.length_scale * params.length_scale)).exp())
}

/// A fitted Gaussian process regression model.
///
/// The model is immutable after fitting and safe to share across threads for
/// concurrent prediction.
#[derive(Debug, Clone)]
pub struct GpModel {
    params: KernelParams,
    mean_const: f64,
    train_inputs: Vec<Vec<f64>>,
    train_targets: Vec<f64>,
    chol_factor: DMatrix<f64>,
    alpha: DVector<f64>,
    feature_indices: Vec<usize>,
    jitter: f64,
}

impl GpModel {
    /// Number of training rows.
    pub fn num_points(&self) -> usize {
        self.train_inputs.len()
    }

    /// Input dimension after projection.
    pub fn dim(&self) -> usize {
        self.train_inputs[0].len()
    }

    /// Kernel parameters the model was fit with.
    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    /// Constant prior mean.
    pub fn mean_const(&self) -> f64 {
        self.mean_const
    }

    /// Indices of the decision variables this model reads.
    pub fn feature_indices(&self) -> &[usize] {
        &self.feature_indices
    }

    /// Diagonal jitter actually used during factorization.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Relabels which decision variables this model reads.
    pub fn with_feature_indices(mut self, features: Vec<usize>) -> Self {
        assert_eq!(
            features.len(),
            self.dim(),
            "feature count must match the trained input dimension"
        );
        self.feature_indices = features;
        self
    }

    /// Posterior mean and variance at `z`, which must already be projected to
    /// the model's input dimension.
    pub fn predict(&self, z: &[f64]) -> Result<Prediction, GpError> {
        let d = self.dim();
        if z.len() != d {
            return Err(GpError::DimensionMismatch {
                expected: d,
                got: z.len(),
            });
        }
        let sf2 = self.params.sigma_f * self.params.sigma_f;
        let inv_two_l2 = 1.0 / (2.0 * self.params.length_scale * self.params.length_scale);
        let kstar = DVector::from_fn(self.num_points(), |i, _| {
            let sq: f64 = self.train_inputs[i]
                .iter()
                .zip(z)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            sf2 * (-sq * inv_two_l2).exp()
        });
        let mean = self.mean_const + kstar.dot(&self.alpha);
        let v = self
            .chol_factor
            .solve_lower_triangular(&kstar)
            .expect("Cholesky factor has a positive diagonal");
        let variance = (sf2 - v.norm_squared()).max(0.0);
        Ok(Prediction { mean, variance })
    }

    /// Log marginal likelihood of the training targets under this model.
    pub fn log_marginal_likelihood(&self) -> f64 {
        let n = self.num_points();
        let residual = DVector::from_fn(n, |i, _| self.train_targets[i] - self.mean_const);
        let quad = residual.dot(&self.alpha);
        let half_logdet: f64 = (0..n).map(|i| self.chol_factor[(i, i)].ln()).sum();
        -0.5 * quad - half_logdet - 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln()
    }
}

/// Fits a GP to `targets` observed at `inputs` (one row per observation).
///
/// The covariance diagonal always receives a jitter of `1e-10 * sigma_f^2`,
/// escalated tenfold up to `1e-4 * sigma_f^2` if factorization fails.
pub fn fit(
    inputs: &[Vec<f64>],
    targets: &[f64],
    params: &KernelParams,
    mean_const: f64,
) -> Result<GpModel, GpError> {
    params.validate()?;
    let n = inputs.len();
    if n == 0 {
        return Err(GpError::EmptyTrainingSet);
    }
    let d = inputs[0].len();
    if d == 0 {
        return Err(GpError::NoFeatures);
    }
    for row in inputs {
        if row.len() != d {
            return Err(GpError::DimensionMismatch {
                expected: d,
                got: row.len(),
            });
        }
    }
    if targets.len() != n {
        return Err(GpError::TargetCountMismatch {
            rows: n,
            targets: targets.len(),
        });
    }

    let sf2 = params.sigma_f * params.sigma_f;
    let inv_two_l2 = 1.0 / (2.0 * params.length_scale * params.length_scale);
    let base = DMatrix::from_fn(n, n, |i, j| {
        let sq: f64 = inputs[i]
            .iter()
            .zip(&inputs[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        sf2 * (-sq * inv_two_l2).exp()
    });
    let noise = params.sigma_n * params.sigma_n;

    let max_jitter = JITTER_CEIL * sf2;
    let mut jitter = JITTER_FLOOR * sf2;
    let chol = loop {
        let mut a = base.clone();
        for i in 0..n {
            a[(i, i)] += noise + jitter;
        }
        match nalgebra::Cholesky::new(a) {
            Some(c) => break c,
            None => {
                jitter *= 10.0;
                if jitter > max_jitter * (1.0 + 1e-12) {
                    return Err(GpError::NumericalFailure { max_jitter });
                }
            }
        }
    };

    let residual = DVector::from_fn(n, |i, _| targets[i] - mean_const);
    let alpha = chol.solve(&residual);
    Ok(GpModel {
        params: params.clone(),
        mean_const,
        train_inputs: inputs.to_vec(),
        train_targets: targets.to_vec(),
        chol_factor: chol.l(),
        alpha,
        feature_indices: (0..d).collect(),
        jitter,
    })
}

/// Log marginal likelihood of `targets` at the given hyperparameters.
pub fn log_marginal_likelihood(
    inputs: &[Vec<f64>],
    targets: &[f64],
    params: &KernelParams,
    mean_const: f64,
) -> Result<f64, GpError> {
    Ok(fit(inputs, targets, params, mean_const)?.log_marginal_likelihood())
}

/// Configuration for multi-start hyperparameter search.
#[derive(Debug, Clone)]
pub struct HyperSearchConfig {
    /// Number of local-search starts.
    pub restarts: usize,
    /// Iteration budget per start.
    pub max_iters: usize,
    /// Seed for the random start locations.
    pub seed: u64,
    /// Optional extra start, e.g. the parameters of the previous refit.
    pub warm_start: Option<KernelParams>,
}

impl Default for HyperSearchConfig {
    fn default() -> Self {
        Self {
            restarts: 5,
            max_iters: 60,
            seed: 0,
            warm_start: None,
        }
    }
}

/// Learns `sigma_f` and `length_scale` by maximizing the log marginal
/// likelihood with a bounded Nelder-Mead search in log space.
///
/// The prior mean is fixed to the mean of `targets` and `sigma_n` to zero
/// (the jitter floor provides conditioning for deterministic objectives).
/// The first start sits at the data-derived center (median pairwise input
/// distance, target standard deviation); the remaining starts are sampled
/// from the log-space box `[1e-3, 1e3]` times those scales. The returned
/// parameters score at least as well as every start point, with ties broken
/// by start index.
pub fn optimize_hyperparameters(
    inputs: &[Vec<f64>],
    targets: &[f64],
    config: &HyperSearchConfig,
) -> Result<KernelParams, GpError> {
    let n = inputs.len();
    if n < 2 {
        return Err(GpError::TooFewPoints { got: n, min: 2 });
    }
    if targets.len() != n {
        return Err(GpError::TargetCountMismatch {
            rows: n,
            targets: targets.len(),
        });
    }
    let mean_const = targets.iter().sum::<f64>() / n as f64;
    let scale_l = median_pairwise_distance(inputs);
    let scale_f = population_std(targets, mean_const);

    let lo = [(1e-3 * scale_l).ln(), (1e-3 * scale_f).ln()];
    let hi = [(1e3 * scale_l).ln(), (1e3 * scale_f).ln()];
    let clamp = |p: [f64; 2]| [p[0].clamp(lo[0], hi[0]), p[1].clamp(lo[1], hi[1])];

    let mut starts = vec![clamp([scale_l.ln(), scale_f.ln()])];
    if let Some(w) = &config.warm_start {
        starts.push(clamp([w.length_scale.ln(), w.sigma_f.ln()]));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    while starts.len() < config.restarts.max(1) {
        starts.push([
            rng.random_range(lo[0]..=hi[0]),
            rng.random_range(lo[1]..=hi[1]),
        ]);
    }

    let mut objective = |p: &[f64; 2]| -> f64 {
        let params = KernelParams {
            sigma_f: p[1].exp(),
            length_scale: p[0].exp(),
            sigma_n: 0.0,
        };
        match fit(inputs, targets, &params, mean_const) {
            Ok(model) => {
                let value = model.log_marginal_likelihood();
                if value.is_finite() {
                    -value
                } else {
                    f64::INFINITY
                }
            }
            Err(_) => f64::INFINITY,
        }
    };

    let mut best: Option<([f64; 2], f64)> = None;
    for start in &starts {
        let (point, value) = nelder_mead_2d(&mut objective, *start, lo, hi, config.max_iters);
        if value.is_finite() && best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((point, value));
        }
    }
    match best {
        Some((p, _)) => Ok(KernelParams {
            sigma_f: p[1].exp(),
            length_scale: p[0].exp(),
            sigma_n: 0.0,
        }),
        None => Err(GpError::NumericalFailure {
            max_jitter: JITTER_CEIL * (1e3 * scale_f) * (1e3 * scale_f),
        }),
    }
}

/// Median of the pairwise Euclidean distances between rows, falling back to
/// 1.0 when there are no distinct rows.
fn median_pairwise_distance(inputs: &[Vec<f64>]) -> f64 {
    let mut dists = Vec::with_capacity(inputs.len() * (inputs.len().saturating_sub(1)) / 2);
    for i in 0..inputs.len() {
        for j in (i + 1)..inputs.len() {
            let sq: f64 = inputs[i]
                .iter()
                .zip(&inputs[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            dists.push(sq.sqrt());
        }
    }
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if dists.is_empty() {
        0.0
    } else if dists.len() % 2 == 1 {
        dists[dists.len() / 2]
    } else {
        0.5 * (dists[dists.len() / 2 - 1] + dists[dists.len() / 2])
    };
    if median > 0.0 {
        median
    } else {
        1.0
    }
}

/// Population standard deviation, falling back to 1.0 for constant values.
fn population_std(values: &[f64], mean: f64) -> f64 {
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    if var > 0.0 {
        var.sqrt()
    } else {
        1.0
    }
}

/// Minimizes `f` over the box `[lo, hi]` with a clamped Nelder-Mead simplex,
/// returning the best vertex. The best value never exceeds `f(start)`.
fn nelder_mead_2d<F>(
    f: &mut F,
    start: [f64; 2],
    lo: [f64; 2],
    hi: [f64; 2],
    max_iters: usize,
) -> ([f64; 2], f64)
where
    F: FnMut(&[f64; 2]) -> f64,
{
    let clamp = |p: [f64; 2]| [p[0].clamp(lo[0], hi[0]), p[1].clamp(lo[1], hi[1])];
    let mut eval = |p: [f64; 2]| {
        let v = f(&p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let step = 0.5;
    let origin = clamp(start);
    let mut simplex = vec![(origin, eval(origin))];
    for axis in 0..2 {
        let mut p = origin;
        p[axis] = if p[axis] + step <= hi[axis] {
            p[axis] + step
        } else {
            p[axis] - step
        };
        simplex.push((p, eval(p)));
    }

    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[2].1 - simplex[0].1;
        let width = simplex
            .iter()
            .flat_map(|(p, _)| {
                simplex
                    .iter()
                    .map(move |(q, _)| (p[0] - q[0]).abs().max((p[1] - q[1]).abs()))
            })
            .fold(0.0, f64::max);
        if spread.abs() <= 1e-10 * (1.0 + simplex[0].1.abs()) && width <= 1e-8 {
            break;
        }

        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let worst = simplex[2];
        let reflected = clamp([
            centroid[0] + (centroid[0] - worst.0[0]),
            centroid[1] + (centroid[1] - worst.0[1]),
        ]);
        let f_reflected = eval(reflected);

        if f_reflected < simplex[0].1 {
            let expanded = clamp([
                centroid[0] + 2.0 * (reflected[0] - centroid[0]),
                centroid[1] + 2.0 * (reflected[1] - centroid[1]),
            ]);
            let f_expanded = eval(expanded);
            simplex[2] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < simplex[1].1 {
            simplex[2] = (reflected, f_reflected);
        } else {
            let toward = if f_reflected < worst.1 {
                reflected
            } else {
                worst.0
            };
            let contracted = clamp([
                centroid[0] + 0.5 * (toward[0] - centroid[0]),
                centroid[1] + 0.5 * (toward[1] - centroid[1]),
            ]);
            let f_contracted = eval(contracted);
            if f_contracted < worst.1.min(f_reflected) {
                simplex[2] = (contracted, f_contracted);
            } else {
                for k in 1..3 {
                    let p = clamp([
                        simplex[0].0[0] + 0.5 * (simplex[k].0[0] - simplex[0].0[0]),
                        simplex[0].0[1] + 0.5 * (simplex[k].0[1] - simplex[0].0[1]),
                    ]);
                    simplex[k] = (p, eval(p));
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    simplex[0]
}

/// A GP fitted on inputs rescaled to the unit box and standardized targets,
/// reading only a subset of the decision variables.
///
/// Predictions are mapped back to raw target units, so callers work entirely
/// in the original problem space.
#[derive(Debug, Clone)]
pub struct ScaledSurrogate {
    model: GpModel,
    lower: Vec<f64>,
    upper: Vec<f64>,
    full_dim: usize,
    target_mean: f64,
    target_scale: f64,
}

impl ScaledSurrogate {
    /// Fits a surrogate for one objective from raw-space samples.
    ///
    /// `features` selects which decision variables the model reads; `lower`
    /// and `upper` are the full-space box bounds used for rescaling.
    /// Hyperparameters are learned on the rescaled data when there are at
    /// least two samples.
    pub fn fit(
        inputs: &[Vec<f64>],
        targets: &[f64],
        features: &[usize],
        lower: &[f64],
        upper: &[f64],
        search: &HyperSearchConfig,
    ) -> Result<Self, GpError> {
        if features.is_empty() {
            return Err(GpError::NoFeatures);
        }
        if inputs.is_empty() {
            return Err(GpError::EmptyTrainingSet);
        }
        let full_dim = lower.len();
        if upper.len() != full_dim {
            return Err(GpError::DimensionMismatch {
                expected: full_dim,
                got: upper.len(),
            });
        }
        for &j in features {
            if j >= full_dim {
                return Err(GpError::FeatureOutOfRange {
                    index: j,
                    dim: full_dim,
                });
            }
        }
        for row in inputs {
            if row.len() != full_dim {
                return Err(GpError::DimensionMismatch {
                    expected: full_dim,
                    got: row.len(),
                });
            }
        }
        if targets.len() != inputs.len() {
            return Err(GpError::TargetCountMismatch {
                rows: inputs.len(),
                targets: targets.len(),
            });
        }

        let scaled: Vec<Vec<f64>> = inputs
            .iter()
            .map(|row| rescale(row, features, lower, upper))
            .collect();
        let n = targets.len() as f64;
        let target_mean = targets.iter().sum::<f64>() / n;
        let target_scale = population_std(targets, target_mean);
        let standardized: Vec<f64> = targets
            .iter()
            .map(|t| (t - target_mean) / target_scale)
            .collect();

        let params = if scaled.len() >= 2 {
            optimize_hyperparameters(&scaled, &standardized, search)?
        } else {
            KernelParams {
                sigma_f: 1.0,
                length_scale: 1.0,
                sigma_n: 0.0,
            }
        };
        let model =
            fit(&scaled, &standardized, &params, 0.0)?.with_feature_indices(features.to_vec());
        Ok(Self {
            model,
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            full_dim,
            target_mean,
            target_scale,
        })
    }

    /// Predicts mean and variance at a full-dimension point, in raw target
    /// units.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction, GpError> {
        if x.len() != self.full_dim {
            return Err(GpError::DimensionMismatch {
                expected: self.full_dim,
                got: x.len(),
            });
        }
        let z = rescale(x, self.model.feature_indices(), &self.lower, &self.upper);
        let raw = self.model.predict(&z)?;
        Ok(Prediction {
            mean: raw.mean * self.target_scale + self.target_mean,
            variance: raw.variance * self.target_scale * self.target_scale,
        })
    }

    /// The underlying model on rescaled inputs.
    pub fn model(&self) -> &GpModel {
        &self.model
    }

    /// Indices of the decision variables this surrogate reads.
    pub fn features(&self) -> &[usize] {
        self.model.feature_indices()
    }
}

/// Projects `x` onto `features` and maps each coordinate to the unit box.
fn rescale(x: &[f64], features: &[usize], lower: &[f64], upper: &[f64]) -> Vec<f64> {
    features
        .iter()
        .map(|&j| {
            let width = upper[j] - lower[j];
            if width > 0.0 {
                (x[j] - lower[j]) / width
            } else {
                0.0
            }
        })
        .collect()
}
