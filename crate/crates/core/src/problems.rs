//! Benchmark problems: ZDT1-4, ZDT6 and DTLZ1-7.
//!
//! All instances are box-constrained minimization problems with analytically
//! known Pareto fronts, so every instance also ships a true-front sampler for
//! building IGD reference sets. Definitions follow the canonical suite papers;
//! DTLZ uses k = n - m + 1 distance variables and m = 3 objectives.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("unknown problem id {0:?}")]
    UnknownId(String),
    #[error("{id} requires n >= {min}, got {got}")]
    DimensionTooSmall {
        id: ProblemId,
        min: usize,
        got: usize,
    },
    #[error("decision vector has length {got}, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("x[{index}] = {value} outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
}

/// Identifier of a benchmark instance family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Zdt6,
    Dtlz1,
    Dtlz2,
    Dtlz3,
    Dtlz4,
    Dtlz5,
    Dtlz6,
    Dtlz7,
}

pub const ALL_PROBLEMS: [ProblemId; 12] = [
    ProblemId::Zdt1,
    ProblemId::Zdt2,
    ProblemId::Zdt3,
    ProblemId::Zdt4,
    ProblemId::Zdt6,
    ProblemId::Dtlz1,
    ProblemId::Dtlz2,
    ProblemId::Dtlz3,
    ProblemId::Dtlz4,
    ProblemId::Dtlz5,
    ProblemId::Dtlz6,
    ProblemId::Dtlz7,
];

impl ProblemId {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Zdt1 => "zdt1",
            ProblemId::Zdt2 => "zdt2",
            ProblemId::Zdt3 => "zdt3",
            ProblemId::Zdt4 => "zdt4",
            ProblemId::Zdt6 => "zdt6",
            ProblemId::Dtlz1 => "dtlz1",
            ProblemId::Dtlz2 => "dtlz2",
            ProblemId::Dtlz3 => "dtlz3",
            ProblemId::Dtlz4 => "dtlz4",
            ProblemId::Dtlz5 => "dtlz5",
            ProblemId::Dtlz6 => "dtlz6",
            ProblemId::Dtlz7 => "dtlz7",
        }
    }

    fn is_zdt(self) -> bool {
        matches!(
            self,
            ProblemId::Zdt1 | ProblemId::Zdt2 | ProblemId::Zdt3 | ProblemId::Zdt4 | ProblemId::Zdt6
        )
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, ProblemError> {
        ALL_PROBLEMS
            .iter()
            .copied()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| ProblemError::UnknownId(s.to_string()))
    }
}

/// A box-constrained multi-objective minimization problem instance.
#[derive(Debug, Clone)]
pub struct Problem {
    id: ProblemId,
    n: usize,
    m: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Problem {
    /// Instantiates `id` with `n` decision variables. The objective count is
    /// fixed by the family: 2 for ZDT, 3 for DTLZ.
    pub fn new(id: ProblemId, n: usize) -> Result<Problem, ProblemError> {
        let m = if id.is_zdt() { 2 } else { 3 };
        // ZDT needs at least one distance variable, DTLZ needs k >= 1.
        let min_n = if id.is_zdt() { 2 } else { m };
        if n < min_n {
            return Err(ProblemError::DimensionTooSmall {
                id,
                min: min_n,
                got: n,
            });
        }
        let mut lower = vec![0.0; n];
        let mut upper = vec![1.0; n];
        if id == ProblemId::Zdt4 {
            for i in 1..n {
                lower[i] = -5.0;
                upper[i] = 5.0;
            }
        }
        Ok(Problem {
            id,
            n,
            m,
            lower,
            upper,
        })
    }

    pub fn id(&self) -> ProblemId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_objectives(&self) -> usize {
        self.m
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    /// Evaluates the objective vector F(x). Deterministic and exact per the
    /// closed-form definitions; callers must pass an in-bounds vector.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        if x.len() != self.n {
            return Err(ProblemError::WrongLength {
                expected: self.n,
                got: x.len(),
            });
        }
        for (i, &v) in x.iter().enumerate() {
            // NaN fails both comparisons and is rejected here too.
            if !(v >= self.lower[i] && v <= self.upper[i]) {
                return Err(ProblemError::OutOfBounds {
                    index: i,
                    value: v,
                    lower: self.lower[i],
                    upper: self.upper[i],
                });
            }
        }
        Ok(match self.id {
            ProblemId::Zdt1 => self.zdt(x, |f1, g| g * (1.0 - (f1 / g).sqrt())),
            ProblemId::Zdt2 => self.zdt(x, |f1, g| g * (1.0 - (f1 / g).powi(2))),
            ProblemId::Zdt3 => self.zdt(x, |f1, g| {
                g * (1.0 - (f1 / g).sqrt() - f1 / g * (10.0 * PI * f1).sin())
            }),
            ProblemId::Zdt4 => self.zdt4(x),
            ProblemId::Zdt6 => self.zdt6(x),
            ProblemId::Dtlz1 => self.dtlz1(x),
            ProblemId::Dtlz2 => self.dtlz_sphere(x, 1.0),
            ProblemId::Dtlz3 => self.dtlz_sphere_g1(x),
            ProblemId::Dtlz4 => self.dtlz_sphere(x, 100.0),
            ProblemId::Dtlz5 => self.dtlz_curve(x, g_sum_sq(&x[self.m - 1..])),
            ProblemId::Dtlz6 => {
                self.dtlz_curve(x, x[self.m - 1..].iter().map(|v| v.powf(0.1)).sum())
            }
            ProblemId::Dtlz7 => self.dtlz7(x),
        })
    }

    fn zdt(&self, x: &[f64], h: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let f1 = x[0];
        let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (self.n - 1) as f64;
        vec![f1, h(f1, g)]
    }

    fn zdt4(&self, x: &[f64]) -> Vec<f64> {
        let f1 = x[0];
        let g = 1.0
            + 10.0 * (self.n - 1) as f64
            + x[1..]
                .iter()
                .map(|&v| v * v - 10.0 * (4.0 * PI * v).cos())
                .sum::<f64>();
        vec![f1, g * (1.0 - (f1 / g).sqrt())]
    }

    fn zdt6(&self, x: &[f64]) -> Vec<f64> {
        let f1 = 1.0 - (-4.0 * x[0]).exp() * (6.0 * PI * x[0]).sin().powi(6);
        let g = 1.0 + 9.0 * (x[1..].iter().sum::<f64>() / (self.n - 1) as f64).powf(0.25);
        vec![f1, g * (1.0 - (f1 / g).powi(2))]
    }

    fn dtlz1(&self, x: &[f64]) -> Vec<f64> {
        let g = g_rastrigin_like(&x[self.m - 1..]);
        let m = self.m;
        let mut f = vec![0.5 * (1.0 + g); m];
        for (j, fj) in f.iter_mut().enumerate() {
            for &xi in &x[..m - 1 - j] {
                *fj *= xi;
            }
            if j > 0 {
                *fj *= 1.0 - x[m - 1 - j];
            }
        }
        f
    }

    /// DTLZ2 and DTLZ4 (position variables raised to `alpha`).
    fn dtlz_sphere(&self, x: &[f64], alpha: f64) -> Vec<f64> {
        let g = g_sum_sq(&x[self.m - 1..]);
        let theta: Vec<f64> = x[..self.m - 1]
            .iter()
            .map(|&v| v.powf(alpha) * PI / 2.0)
            .collect();
        self.sphere_from_angles(&theta, g)
    }

    fn dtlz_sphere_g1(&self, x: &[f64]) -> Vec<f64> {
        let g = g_rastrigin_like(&x[self.m - 1..]);
        let theta: Vec<f64> = x[..self.m - 1].iter().map(|&v| v * PI / 2.0).collect();
        self.sphere_from_angles(&theta, g)
    }

    /// DTLZ5 and DTLZ6: all angles but the first are squeezed toward pi/4.
    fn dtlz_curve(&self, x: &[f64], g: f64) -> Vec<f64> {
        let mut theta = vec![x[0] * PI / 2.0];
        for &xi in &x[1..self.m - 1] {
            theta.push(PI / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * xi));
        }
        self.sphere_from_angles(&theta, g)
    }

    fn sphere_from_angles(&self, theta: &[f64], g: f64) -> Vec<f64> {
        let m = self.m;
        let mut f = vec![1.0 + g; m];
        for (j, fj) in f.iter_mut().enumerate() {
            for &t in &theta[..m - 1 - j] {
                *fj *= t.cos();
            }
            if j > 0 {
                *fj *= theta[m - 1 - j].sin();
            }
        }
        f
    }

    fn dtlz7(&self, x: &[f64]) -> Vec<f64> {
        let k = self.n - self.m + 1;
        let g = 1.0 + 9.0 / k as f64 * x[self.m - 1..].iter().sum::<f64>();
        let mut f: Vec<f64> = x[..self.m - 1].to_vec();
        let h = self.m as f64
            - f.iter()
                .map(|&fi| fi / (1.0 + g) * (1.0 + (3.0 * PI * fi).sin()))
                .sum::<f64>();
        f.push((1.0 + g) * h);
        f
    }

    /// Draws `count` points from the analytic true Pareto front. ZDT fronts
    /// and degenerate DTLZ curves use an even parameter grid; the surface
    /// fronts (DTLZ1-4, DTLZ7) are sampled uniformly at random, so the result
    /// is a deterministic function of the rng state.
    pub fn sample_true_pf<R: Rng>(&self, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
        assert!(count >= 2, "a Pareto front sample needs at least 2 points");
        match self.id {
            ProblemId::Zdt1 => grid(0.0, 1.0, count)
                .map(|f1| vec![f1, 1.0 - f1.sqrt()])
                .collect(),
            ProblemId::Zdt2 => grid(0.0, 1.0, count)
                .map(|f1| vec![f1, 1.0 - f1 * f1])
                .collect(),
            ProblemId::Zdt3 => {
                // Only the segments where the curve sets a new record low are
                // Pareto-optimal; locate them numerically.
                let segments = record_intervals(|f1| -zdt3_curve(f1), 0.0, 1.0, 20_000);
                grid_over(&segments, count)
                    .map(|f1| vec![f1, zdt3_curve(f1)])
                    .collect()
            }
            ProblemId::Zdt4 => grid(0.0, 1.0, count)
                .map(|f1| vec![f1, 1.0 - f1.sqrt()])
                .collect(),
            ProblemId::Zdt6 => {
                let f1_min = zdt6_f1_min();
                grid(f1_min, 1.0, count)
                    .map(|f1| vec![f1, 1.0 - f1 * f1])
                    .collect()
            }
            ProblemId::Dtlz1 => (0..count).map(|_| simplex_point(rng)).collect(),
            ProblemId::Dtlz2 | ProblemId::Dtlz3 | ProblemId::Dtlz4 => {
                (0..count).map(|_| sphere_octant_point(rng)).collect()
            }
            ProblemId::Dtlz5 | ProblemId::Dtlz6 => {
                let c = (PI / 4.0).cos();
                grid(0.0, PI / 2.0, count)
                    .map(|t1| vec![t1.cos() * c, t1.cos() * c, t1.sin()])
                    .collect()
            }
            ProblemId::Dtlz7 => {
                let segments = record_intervals(dtlz7_shape, 0.0, 1.0, 20_000);
                let total: f64 = segments.iter().map(|&(a, b)| b - a).sum();
                (0..count)
                    .map(|_| {
                        let f1 = map_into(&segments, rng.random::<f64>() * total);
                        let f2 = map_into(&segments, rng.random::<f64>() * total);
                        let f3 = 6.0 - dtlz7_shape(f1) - dtlz7_shape(f2);
                        vec![f1, f2, f3]
                    })
                    .collect()
            }
        }
    }
}

fn g_sum_sq(distance: &[f64]) -> f64 {
    distance.iter().map(|&v| (v - 0.5) * (v - 0.5)).sum()
}

fn g_rastrigin_like(distance: &[f64]) -> f64 {
    let k = distance.len() as f64;
    100.0
        * (k + distance
            .iter()
            .map(|&v| (v - 0.5) * (v - 0.5) - (20.0 * PI * (v - 0.5)).cos())
            .sum::<f64>())
}

fn zdt3_curve(f1: f64) -> f64 {
    1.0 - f1.sqrt() - f1 * (10.0 * PI * f1).sin()
}

/// The per-coordinate shape of the DTLZ7 front at minimal g: the front holds
/// exactly the coordinates where this function sets a new record high.
fn dtlz7_shape(v: f64) -> f64 {
    v * (1.0 + (3.0 * PI * v).sin())
}

/// Smallest attainable f1 on ZDT6, found numerically.
fn zdt6_f1_min() -> f64 {
    let f = |x: f64| 1.0 - (-4.0 * x).exp() * (6.0 * PI * x).sin().powi(6);
    let mut best_x = 0.0;
    let mut best = f64::INFINITY;
    for i in 0..=100_000 {
        let x = i as f64 / 100_000.0;
        let v = f(x);
        if v < best {
            best = v;
            best_x = x;
        }
    }
    // Ternary-search refinement around the grid minimum.
    let (mut lo, mut hi) = (best_x - 2e-5, best_x + 2e-5);
    for _ in 0..200 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f(0.5 * (lo + hi))
}

fn grid(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(move |i| {
        if i == count - 1 {
            hi
        } else {
            lo + i as f64 * step
        }
    })
}

/// Maximal intervals of [lo, hi] where `f` is strictly above every value it
/// took earlier, located on a grid of `steps` cells and refined by bisection.
fn record_intervals(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> Vec<(f64, f64)> {
    let h = (hi - lo) / steps as f64;
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut record = f64::NEG_INFINITY;
    let mut inside = false;
    for i in 0..=steps {
        let x = lo + i as f64 * h;
        let on_record = f(x) > record;
        if on_record {
            record = f(x);
        }
        match (inside, on_record) {
            (false, true) => {
                // Entering a record stretch: refine the crossing against the
                // record level that held just before it.
                let start = if i == 0 {
                    lo
                } else {
                    let target = intervals
                        .last()
                        .map(|&(_, e)| f(e))
                        .unwrap_or(f64::NEG_INFINITY);
                    bisect_rising(&f, x - h, x, target)
                };
                intervals.push((start, x));
                inside = true;
            }
            (true, true) => intervals.last_mut().unwrap().1 = x,
            (true, false) => inside = false,
            (false, false) => {}
        }
    }
    intervals
}

fn bisect_rising(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    if !target.is_finite() {
        return lo;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Even grid over a union of intervals, measured by total length.
fn grid_over(intervals: &[(f64, f64)], count: usize) -> impl Iterator<Item = f64> + '_ {
    let total: f64 = intervals.iter().map(|&(a, b)| b - a).sum();
    (0..count).map(move |i| map_into(intervals, total * i as f64 / (count - 1) as f64))
}

/// Maps a length coordinate t in [0, total] onto the union of intervals.
fn map_into(intervals: &[(f64, f64)], mut t: f64) -> f64 {
    for &(a, b) in intervals {
        if t <= b - a {
            return (a + t).min(b);
        }
        t -= b - a;
    }
    intervals.last().expect("no intervals").1
}

/// Uniform point on the 3-simplex scaled to sum 0.5 (DTLZ1 front).
fn simplex_point<R: Rng>(rng: &mut R) -> Vec<f64> {
    let (mut a, mut b) = (rng.random::<f64>(), rng.random::<f64>());
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    vec![0.5 * a, 0.5 * (b - a), 0.5 * (1.0 - b)]
}

/// Uniform point on the positive octant of the unit sphere (DTLZ2-4 front).
fn sphere_octant_point<R: Rng>(rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..3).map(|_| standard_normal(rng).abs()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Box-Muller draw; kept local so the samplers only need a `Rng`.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = loop {
        let u = rng.random::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} !~ {b:?}");
        }
    }

    fn dominates(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
    }

    #[test]
    fn zdt1_known_points() {
        let p = Problem::new(ProblemId::Zdt1, 3).unwrap();
        assert_close(&p.evaluate(&[0.0, 0.0, 0.0]).unwrap(), &[0.0, 1.0], 0.0);
        assert_close(&p.evaluate(&[1.0, 0.0, 0.0]).unwrap(), &[1.0, 0.0], 1e-15);
        let p2 = Problem::new(ProblemId::Zdt1, 2).unwrap();
        // x = (1,1): g = 10 and f2 = 10 - sqrt(10).
        assert_close(
            &p2.evaluate(&[1.0, 1.0]).unwrap(),
            &[1.0, 10.0 - 10.0f64.sqrt()],
            1e-12,
        );
    }

    #[test]
    fn dtlz2_corner_and_sphere() {
        let p = Problem::new(ProblemId::Dtlz2, 12).unwrap();
        let mut x = vec![0.5; 12];
        x[0] = 0.0;
        x[1] = 0.0;
        assert_close(&p.evaluate(&x).unwrap(), &[1.0, 0.0, 0.0], 1e-15);

        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..50 {
            let mut x: Vec<f64> = (0..12).map(|_| rng.random::<f64>()).collect();
            for v in x.iter_mut().skip(2) {
                *v = 0.5;
            }
            let f = p.evaluate(&x).unwrap();
            let norm2: f64 = f.iter().map(|v| v * v).sum();
            assert!(
                (norm2 - 1.0).abs() < 1e-12,
                "g=0 points sit on the unit sphere"
            );
        }
    }

    #[test]
    fn bounds_per_family() {
        let p1 = Problem::new(ProblemId::Zdt1, 2).unwrap();
        assert_eq!(p1.bounds(), (&[0.0, 0.0][..], &[1.0, 1.0][..]));
        let p4 = Problem::new(ProblemId::Zdt4, 3).unwrap();
        assert_eq!(p4.bounds().0, &[0.0, -5.0, -5.0]);
        assert_eq!(p4.bounds().1, &[1.0, 5.0, 5.0]);
        let p7 = Problem::new(ProblemId::Dtlz7, 10).unwrap();
        assert!(p7.bounds().0.iter().all(|&v| v == 0.0));
        assert!(p7.bounds().1.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn input_validation() {
        let p = Problem::new(ProblemId::Zdt1, 3).unwrap();
        assert!(matches!(
            p.evaluate(&[0.0, 0.0]),
            Err(ProblemError::WrongLength {
                expected: 3,
                got: 2
            })
        ));
        assert!(matches!(
            p.evaluate(&[0.0, 1.5, 0.0]),
            Err(ProblemError::OutOfBounds { index: 1, .. })
        ));
        assert!(p.evaluate(&[0.0, f64::NAN, 0.0]).is_err());
        assert!(matches!(
            Problem::new(ProblemId::Dtlz1, 2),
            Err(ProblemError::DimensionTooSmall { .. })
        ));
        assert_eq!(
            ProblemId::from_str("zdt9"),
            Err(ProblemError::UnknownId("zdt9".into()))
        );
        assert_eq!(ProblemId::from_str("dtlz5").unwrap(), ProblemId::Dtlz5);
    }

    #[test]
    fn zdt_front_samples() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let p1 = Problem::new(ProblemId::Zdt1, 5).unwrap();
        let s = p1.sample_true_pf(2, &mut rng);
        assert_close(&s[0], &[0.0, 1.0], 0.0);
        assert_close(&s[1], &[1.0, 0.0], 0.0);

        let p2 = Problem::new(ProblemId::Zdt2, 5).unwrap();
        let s = p2.sample_true_pf(3, &mut rng);
        assert_close(&s[1], &[0.5, 0.75], 1e-15);
    }

    #[test]
    fn dtlz_sphere_sample_on_sphere() {
        let p = Problem::new(ProblemId::Dtlz2, 7).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for f in p.sample_true_pf(200, &mut rng) {
            let norm2: f64 = f.iter().map(|v| v * v).sum();
            assert!((norm2 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dtlz1_sample_on_simplex() {
        let p = Problem::new(ProblemId::Dtlz1, 7).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for f in p.sample_true_pf(200, &mut rng) {
            assert!((f.iter().sum::<f64>() - 0.5).abs() < 1e-12);
            assert!(f.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn samples_are_mutually_nondominated() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for id in ALL_PROBLEMS {
            let p = Problem::new(id, 8).unwrap();
            let sample = p.sample_true_pf(60, &mut rng);
            for (i, a) in sample.iter().enumerate() {
                for b in sample.iter().skip(i + 1) {
                    assert!(!dominates(a, b) && !dominates(b, a), "{id}: {a:?} vs {b:?}");
                }
            }
        }
    }

    #[test]
    fn sampler_is_deterministic_per_seed() {
        for id in [ProblemId::Dtlz2, ProblemId::Dtlz7, ProblemId::Zdt3] {
            let p = Problem::new(id, 8).unwrap();
            let a = p.sample_true_pf(50, &mut ChaCha20Rng::seed_from_u64(9));
            let b = p.sample_true_pf(50, &mut ChaCha20Rng::seed_from_u64(9));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rest_at_zero_lands_on_front_curve() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        for _ in 0..100 {
            let x1: f64 = rng.random();
            let tail = [0.0; 9];
            let mut x = vec![x1];
            x.extend_from_slice(&tail);

            let f = Problem::new(ProblemId::Zdt1, 10)
                .unwrap()
                .evaluate(&x)
                .unwrap();
            assert!((f[1] - (1.0 - f[0].sqrt())).abs() < 1e-12);
            let f = Problem::new(ProblemId::Zdt2, 10)
                .unwrap()
                .evaluate(&x)
                .unwrap();
            assert!((f[1] - (1.0 - f[0] * f[0])).abs() < 1e-12);
            let f = Problem::new(ProblemId::Zdt3, 10)
                .unwrap()
                .evaluate(&x)
                .unwrap();
            assert!((f[1] - zdt3_curve(f[0])).abs() < 1e-12);
            let f = Problem::new(ProblemId::Zdt6, 10)
                .unwrap()
                .evaluate(&x)
                .unwrap();
            let f1 = 1.0 - (-4.0 * x1).exp() * (6.0 * PI * x1).sin().powi(6);
            assert!((f[0] - f1).abs() < 1e-12);
            assert!((f[1] - (1.0 - f1 * f1)).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluate_is_bit_identical_and_finite() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for id in ALL_PROBLEMS {
            let p = Problem::new(id, 10).unwrap();
            let (lo, hi) = p.bounds();
            for _ in 0..50 {
                let x: Vec<f64> = (0..10).map(|i| rng.random_range(lo[i]..=hi[i])).collect();
                let f1 = p.evaluate(&x).unwrap();
                let f2 = p.evaluate(&x).unwrap();
                assert_eq!(f1, f2);
                assert!(f1.iter().all(|v| v.is_finite()));
                assert_eq!(f1.len(), p.num_objectives());
            }
        }
    }

    #[test]
    fn zdt3_front_segments_match_known_boundaries() {
        // The first Pareto segment of ZDT3 is known to end near f1 = 0.0830,
        // and the front has exactly five disconnected pieces.
        let segs = record_intervals(|f1| -zdt3_curve(f1), 0.0, 1.0, 20_000);
        assert_eq!(segs.len(), 5);
        assert!((segs[0].0 - 0.0).abs() < 1e-9);
        assert!((segs[0].1 - 0.0830015).abs() < 1e-4);
        assert!((segs[4].1 - 0.8518329).abs() < 1e-4);
    }

    #[test]
    fn dtlz7_front_has_two_segments_per_coordinate() {
        let segs = record_intervals(dtlz7_shape, 0.0, 1.0, 20_000);
        assert_eq!(segs.len(), 2);
        assert!((segs[0].1 - 0.2514118).abs() < 1e-4);
        assert!((segs[1].0 - 0.6316265).abs() < 1e-4);
        assert!((segs[1].1 - 0.8594008).abs() < 1e-4);
    }
}
