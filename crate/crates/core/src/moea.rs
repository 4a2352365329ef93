//! NSGA-II: fast non-dominated sorting, crowding distance, simulated binary
//! crossover, polynomial mutation, binary tournaments, and the elitist
//! generational loop.
//!
//! The loop is written against a plain vector-valued callback so it can run
//! either on true objectives (baseline mode) or on surrogate predictions.

use rand::Rng;

/// One population member. `objectives` may hold surrogate values.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genes: Vec<f64>,
    pub objectives: Vec<f64>,
    pub rank: usize,
    pub crowding: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Individual>,
}

/// Operator and loop settings. Defaults are the common NSGA-II choices:
/// eta_c = eta_m = 20, pair crossover probability 0.9, and a per-variable
/// mutation probability of 1/n.
#[derive(Debug, Clone)]
pub struct Nsga2Config {
    pub pop_size: usize,
    pub generations: usize,
    pub eta_c: f64,
    pub eta_m: f64,
    pub crossover_prob: f64,
    /// Per-variable mutation probability; `None` means 1/n.
    pub mutation_prob: Option<f64>,
}

impl Nsga2Config {
    pub fn new(pop_size: usize, generations: usize) -> Nsga2Config {
        Nsga2Config {
            pop_size,
            generations,
            eta_c: 20.0,
            eta_m: 20.0,
            crossover_prob: 0.9,
            mutation_prob: None,
        }
    }
}

/// Pareto dominance for minimization: u is no worse everywhere and strictly
/// better somewhere.
pub fn dominates(u: &[f64], v: &[f64]) -> bool {
    assert_eq!(u.len(), v.len(), "objective vectors must have equal length");
    let mut strict = false;
    for (a, b) in u.iter().zip(v) {
        if a > b {
            return false;
        }
        if a < b {
            strict = true;
        }
    }
    strict
}

/// Deb's fast non-dominated sort. Returns fronts as index sets in ascending
/// index order; front 0 is exactly the non-dominated subset.
pub fn fast_nondominated_sort(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    assert!(!points.is_empty(), "cannot sort an empty set");
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&points[i], &points[j]) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::take(&mut current));
        current = next;
    }
    fronts
}

/// Crowding distance of each point in one front. Points tying an objective's
/// minimum or maximum get the +infinity sentinel (so an all-identical front is
/// all +infinity); interior points sum normalized gaps between their sorted
/// neighbors, and zero-range objectives contribute nothing.
pub fn crowding_distance(front: &[Vec<f64>]) -> Vec<f64> {
    assert!(!front.is_empty(), "crowding distance of an empty front");
    let n = front.len();
    let m = front[0].len();
    let mut dist = vec![0.0f64; n];
    for j in 0..m {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| front[a][j].total_cmp(&front[b][j]));
        let lo = front[order[0]][j];
        let hi = front[order[n - 1]][j];
        let range = hi - lo;
        for (pos, &i) in order.iter().enumerate() {
            if front[i][j] == lo || front[i][j] == hi {
                dist[i] = f64::INFINITY;
            } else if range > 0.0 {
                let prev = front[order[pos - 1]][j];
                let next = front[order[pos + 1]][j];
                dist[i] += (next - prev) / range;
            }
        }
    }
    dist
}

fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    v.max(lo).min(hi)
}

/// Simulated binary crossover (Deb & Agrawal). Each variable recombines with
/// probability 1/2 using a spread factor drawn from the eta_c distribution;
/// children are clamped to the box, and apart from clamping the pair mean is
/// preserved exactly.
pub fn sbx_crossover<R: Rng>(
    p1: &[f64],
    p2: &[f64],
    lower: &[f64],
    upper: &[f64],
    eta_c: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(p1.len(), p2.len());
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    for i in 0..p1.len() {
        if rng.random::<f64>() > 0.5 || (p1[i] - p2[i]).abs() < 1e-14 {
            continue;
        }
        let u: f64 = rng.random();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(1.0 / (eta_c + 1.0))
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta_c + 1.0))
        };
        let a = 0.5 * ((1.0 + beta) * p1[i] + (1.0 - beta) * p2[i]);
        let b = 0.5 * ((1.0 - beta) * p1[i] + (1.0 + beta) * p2[i]);
        let swap = rng.random::<f64>() < 0.5;
        let (a, b) = if swap { (b, a) } else { (a, b) };
        c1[i] = clamp(a, lower[i], upper[i]);
        c2[i] = clamp(b, lower[i], upper[i]);
    }
    (c1, c2)
}

/// Polynomial mutation (Deb), bounded variant: perturbation size shrinks near
/// the box edges, so outputs stay in bounds.
pub fn polynomial_mutation<R: Rng>(
    x: &[f64],
    lower: &[f64],
    upper: &[f64],
    p_m: f64,
    eta_m: f64,
    rng: &mut R,
) -> Vec<f64> {
    let mut out = x.to_vec();
    for i in 0..x.len() {
        if rng.random::<f64>() >= p_m {
            continue;
        }
        let range = upper[i] - lower[i];
        if range <= 0.0 {
            continue;
        }
        let d1 = (x[i] - lower[i]) / range;
        let d2 = (upper[i] - x[i]) / range;
        let u: f64 = rng.random();
        let pow = 1.0 / (eta_m + 1.0);
        let dq = if u <= 0.5 {
            let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta_m + 1.0);
            v.powf(pow) - 1.0
        } else {
            let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta_m + 1.0);
            1.0 - v.powf(pow)
        };
        out[i] = clamp(x[i] + dq * range, lower[i], upper[i]);
    }
    out
}

/// Binary tournament on (rank, crowding); exact ties fall to a coin flip.
fn tournament<R: Rng>(members: &[Individual], rng: &mut R) -> usize {
    let i = rng.random_range(0..members.len());
    let j = rng.random_range(0..members.len());
    let (a, b) = (&members[i], &members[j]);
    if a.rank != b.rank {
        return if a.rank < b.rank { i } else { j };
    }
    if a.crowding != b.crowding {
        return if a.crowding > b.crowding { i } else { j };
    }
    if rng.random::<f64>() < 0.5 {
        i
    } else {
        j
    }
}

fn assign_rank_and_crowding(members: &mut [Individual]) {
    let objectives: Vec<Vec<f64>> = members.iter().map(|ind| ind.objectives.clone()).collect();
    for (rank, front) in fast_nondominated_sort(&objectives).iter().enumerate() {
        let front_objs: Vec<Vec<f64>> = front.iter().map(|&i| objectives[i].clone()).collect();
        let crowd = crowding_distance(&front_objs);
        for (&i, &c) in front.iter().zip(&crowd) {
            members[i].rank = rank;
            members[i].crowding = c;
        }
    }
}

/// Keeps the best `pop_size` of the combined parent+offspring pool: whole
/// fronts while they fit, then the least-crowded prefix of the split front.
fn environmental_selection(mut pool: Vec<Individual>, pop_size: usize) -> Vec<Individual> {
    assign_rank_and_crowding(&mut pool);
    let mut index_order: Vec<usize> = (0..pool.len()).collect();
    index_order.sort_by(|&a, &b| {
        pool[a]
            .rank
            .cmp(&pool[b].rank)
            .then(pool[b].crowding.total_cmp(&pool[a].crowding))
            .then(a.cmp(&b))
    });
    index_order.truncate(pop_size);
    index_order.sort_unstable();
    let mut keep = vec![false; pool.len()];
    for &i in &index_order {
        keep[i] = true;
    }
    let mut kept: Vec<Individual> = pool
        .drain(..)
        .zip(keep)
        .filter_map(|(ind, k)| k.then_some(ind))
        .collect();
    // Ranks and crowding are refreshed on the survivors so tournament
    // pressure reflects the population that actually competes next.
    assign_rank_and_crowding(&mut kept);
    kept.sort_by(|a, b| a.rank.cmp(&b.rank).then(b.crowding.total_cmp(&a.crowding)));
    kept
}

/// Full NSGA-II run with explicit seed individuals (clamped into bounds) used
/// verbatim in the initial population; remaining slots are uniform random.
pub fn nsga2_run<F, R>(
    mut objective: F,
    lower: &[f64],
    upper: &[f64],
    config: &Nsga2Config,
    seeds: &[Vec<f64>],
    rng: &mut R,
) -> Population
where
    F: FnMut(&[f64]) -> Vec<f64>,
    R: Rng,
{
    assert!(
        config.pop_size >= 2 && config.pop_size % 2 == 0,
        "pop_size must be even"
    );
    assert_eq!(lower.len(), upper.len());
    let n = lower.len();
    let p_m = config.mutation_prob.unwrap_or(1.0 / n as f64);

    let mut genes: Vec<Vec<f64>> = seeds
        .iter()
        .take(config.pop_size)
        .map(|s| {
            assert_eq!(s.len(), n);
            s.iter()
                .enumerate()
                .map(|(i, &v)| clamp(v, lower[i], upper[i]))
                .collect()
        })
        .collect();
    while genes.len() < config.pop_size {
        genes.push(
            (0..n)
                .map(|i| rng.random_range(lower[i]..=upper[i]))
                .collect(),
        );
    }

    let mut members: Vec<Individual> = genes
        .into_iter()
        .map(|g| {
            let f = objective(&g);
            Individual {
                genes: g,
                objectives: f,
                rank: 0,
                crowding: 0.0,
            }
        })
        .collect();
    assign_rank_and_crowding(&mut members);
    members.sort_by(|a, b| a.rank.cmp(&b.rank).then(b.crowding.total_cmp(&a.crowding)));

    for _ in 0..config.generations {
        let mut offspring: Vec<Individual> = Vec::with_capacity(config.pop_size);
        while offspring.len() < config.pop_size {
            let a = tournament(&members, rng);
            let b = tournament(&members, rng);
            let (g1, g2) = if rng.random::<f64>() < config.crossover_prob {
                sbx_crossover(
                    &members[a].genes,
                    &members[b].genes,
                    lower,
                    upper,
                    config.eta_c,
                    rng,
                )
            } else {
                (members[a].genes.clone(), members[b].genes.clone())
            };
            for g in [g1, g2] {
                if offspring.len() == config.pop_size {
                    break;
                }
                let g = polynomial_mutation(&g, lower, upper, p_m, config.eta_m, rng);
                let f = objective(&g);
                offspring.push(Individual {
                    genes: g,
                    objectives: f,
                    rank: 0,
                    crowding: 0.0,
                });
            }
        }
        let mut pool = members;
        pool.append(&mut offspring);
        members = environmental_selection(pool, config.pop_size);
    }
    Population { members }
}

/// Canonical NSGA-II with default operators and a fresh random initial
/// population.
pub fn nsga2_optimize<F, R>(
    objective: F,
    lower: &[f64],
    upper: &[f64],
    pop_size: usize,
    generations: usize,
    rng: &mut R,
) -> Population
where
    F: FnMut(&[f64]) -> Vec<f64>,
    R: Rng,
{
    nsga2_run(
        objective,
        lower,
        upper,
        &Nsga2Config::new(pop_size, generations),
        &[],
        rng,
    )
}
