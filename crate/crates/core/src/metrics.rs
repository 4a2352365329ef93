//! Quality indicators and statistics: exact hypervolume for 2-6 objectives,
//! per-point hypervolume contributions, inverted generational distance, and a
//! two-sided Wilcoxon rank-sum test.
//!
//! All values are for minimization. Hypervolume uses an exclusive-volume
//! recursion with a sort-and-sum fast path for two objectives.

use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} must not be empty")]
    EmptySet(&'static str),
    #[error("{name} has {got} values, rank-sum test needs at least {min}")]
    UndersizedSample {
        name: &'static str,
        got: usize,
        min: usize,
    },
    #[error("alpha {0} outside (0, 1)")]
    InvalidAlpha(f64),
}

/// Labeled indicator value, as written into result files.
#[derive(Debug, Clone)]
pub struct IndicatorResult {
    pub name: &'static str,
    pub value: f64,
    /// Optional per-point breakdown (e.g. one contribution per input point).
    pub per_point: Option<Vec<f64>>,
}

fn check_dims(points: &[Vec<f64>], m: usize) -> Result<(), MetricsError> {
    for p in points {
        if p.len() != m {
            return Err(MetricsError::DimensionMismatch {
                expected: m,
                got: p.len(),
            });
        }
    }
    Ok(())
}

/// Drops every point that does not improve on `r` in all coordinates; the
/// remaining boxes [p, r] all have positive volume.
fn clip_to_ref(points: &[Vec<f64>], r: &[f64]) -> Vec<Vec<f64>> {
    points
        .iter()
        .filter(|p| p.iter().zip(r).all(|(a, b)| a < b))
        .cloned()
        .collect()
}

fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Keeps the weakly non-dominated subset (duplicates collapse to one copy).
fn pareto_filter(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut keep: Vec<Vec<f64>> = Vec::new();
    'outer: for q in points {
        let mut i = 0;
        while i < keep.len() {
            if weakly_dominates(&keep[i], &q) {
                continue 'outer;
            }
            if weakly_dominates(&q, &keep[i]) {
                keep.swap_remove(i);
            } else {
                i += 1;
            }
        }
        keep.push(q);
    }
    keep
}

fn box_volume(p: &[f64], r: &[f64]) -> f64 {
    p.iter().zip(r).map(|(a, b)| b - a).product()
}

/// Dominated hypervolume of `points` with respect to reference point `r`:
/// the measure of the union of boxes [p, r]. Points not strictly inside the
/// reference contribute nothing; an empty set has volume zero.
pub fn hypervolume(points: &[Vec<f64>], r: &[f64]) -> Result<f64, MetricsError> {
    check_dims(points, r.len())?;
    let mut pts = pareto_filter(clip_to_ref(points, r));
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
    if r.len() == 2 {
        return Ok(hv_2d_sorted(&pts, r));
    }
    Ok(hv_recursive(&pts, r))
}

/// Staircase sum over points sorted ascending by the first objective with the
/// dominated ones already removed.
fn hv_2d_sorted(pts: &[Vec<f64>], r: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let next_x = pts.get(i + 1).map_or(r[0], |q| q[0]);
        total += (next_x - p[0]) * (r[1] - p[1]);
    }
    total
}

/// Exclusive-volume recursion: each point contributes its box minus whatever
/// the later points cover inside that box.
fn hv_recursive(pts: &[Vec<f64>], r: &[f64]) -> f64 {
    match pts.len() {
        0 => 0.0,
        1 => box_volume(&pts[0], r),
        _ => {
            let mut total = 0.0;
            for (i, p) in pts.iter().enumerate() {
                let limited: Vec<Vec<f64>> = pts[i + 1..]
                    .iter()
                    .map(|q| q.iter().zip(p).map(|(a, b)| a.max(*b)).collect())
                    .collect();
                let limited = pareto_filter(clip_to_ref(&limited, r));
                total += box_volume(p, r) - hv_recursive(&limited, r);
            }
            total
        }
    }
}

/// HV(S) − HV(S without the point at `index`). Zero for dominated points.
pub fn hypervolume_contribution(
    points: &[Vec<f64>],
    r: &[f64],
    index: usize,
) -> Result<f64, MetricsError> {
    assert!(index < points.len(), "index {index} out of range");
    let total = hypervolume(points, r)?;
    let rest: Vec<Vec<f64>> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != index)
        .map(|(_, p)| p.clone())
        .collect();
    Ok((total - hypervolume(&rest, r)?).max(0.0))
}

/// All contributions at once; computes HV(S) a single time.
pub fn hypervolume_contributions(points: &[Vec<f64>], r: &[f64]) -> Result<Vec<f64>, MetricsError> {
    let total = hypervolume(points, r)?;
    let mut out = Vec::with_capacity(points.len());
    for index in 0..points.len() {
        let rest: Vec<Vec<f64>> = points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, p)| p.clone())
            .collect();
        out.push((total - hypervolume(&rest, r)?).max(0.0));
    }
    Ok(out)
}

/// Inverted generational distance: mean Euclidean distance from each
/// reference-front point to its nearest approximation point.
pub fn igd(approximation: &[Vec<f64>], reference_front: &[Vec<f64>]) -> Result<f64, MetricsError> {
    if approximation.is_empty() {
        return Err(MetricsError::EmptySet("approximation set"));
    }
    if reference_front.is_empty() {
        return Err(MetricsError::EmptySet("reference front"));
    }
    let m = reference_front[0].len();
    check_dims(reference_front, m)?;
    check_dims(approximation, m)?;
    let sum: f64 = reference_front
        .iter()
        .map(|rp| {
            approximation
                .iter()
                .map(|a| {
                    a.iter()
                        .zip(rp)
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(sum / reference_front.len() as f64)
}

/// Which sample ranks lower (i.e. tends to have smaller values).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankDirection {
    FirstLower,
    SecondLower,
    Tied,
}

#[derive(Debug, Clone, Copy)]
pub struct RankSumOutcome {
    pub significant: bool,
    pub direction: RankDirection,
    /// Normal-approximation z statistic (continuity-corrected).
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test using the normal
/// approximation with tie correction. Requires at least 5 values per sample.
pub fn wilcoxon_rank_sum(
    sample_a: &[f64],
    sample_b: &[f64],
    alpha: f64,
) -> Result<RankSumOutcome, MetricsError> {
    const MIN_N: usize = 5;
    if sample_a.len() < MIN_N {
        return Err(MetricsError::UndersizedSample {
            name: "first sample",
            got: sample_a.len(),
            min: MIN_N,
        });
    }
    if sample_b.len() < MIN_N {
        return Err(MetricsError::UndersizedSample {
            name: "second sample",
            got: sample_b.len(),
            min: MIN_N,
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(MetricsError::InvalidAlpha(alpha));
    }

    let na = sample_a.len();
    let nb = sample_b.len();
    let n = na + nb;
    let mut combined: Vec<(f64, bool)> = sample_a
        .iter()
        .map(|&v| (v, true))
        .chain(sample_b.iter().map(|&v| (v, false)))
        .collect();
    combined.sort_by(|x, y| x.0.total_cmp(&y.0));

    // Average ranks within tie groups; accumulate the tie correction term.
    let mut rank_sum_a = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < combined.len() {
        let mut j = i;
        while j < combined.len() && combined[j].0 == combined[i].0 {
            j += 1;
        }
        let t = (j - i) as f64;
        let avg_rank = (i + 1 + j) as f64 / 2.0;
        for item in &combined[i..j] {
            if item.1 {
                rank_sum_a += avg_rank;
            }
        }
        tie_term += t * t * t - t;
        i = j;
    }

    let mean = na as f64 * (n + 1) as f64 / 2.0;
    let variance =
        (na as f64 * nb as f64 / 12.0) * ((n + 1) as f64 - tie_term / (n as f64 * (n - 1) as f64));
    if variance <= 0.0 {
        // Every value tied: no evidence of a shift.
        return Ok(RankSumOutcome {
            significant: false,
            direction: RankDirection::Tied,
            statistic: 0.0,
            p_value: 1.0,
        });
    }
    let diff = rank_sum_a - mean;
    let corrected = diff - 0.5 * diff.signum();
    let z = if diff == 0.0 {
        0.0
    } else {
        corrected / variance.sqrt()
    };
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p_value = 2.0 * (1.0 - normal.cdf(z.abs()));
    let direction = if diff < 0.0 {
        RankDirection::FirstLower
    } else if diff > 0.0 {
        RankDirection::SecondLower
    } else {
        RankDirection::Tied
    };
    Ok(RankSumOutcome {
        significant: p_value < alpha,
        direction,
        statistic: z,
        p_value,
    })
}
