//! Bat-algorithm optimizer over bounded continuous domains.
//!
//! Each candidate ("bat") carries a position, a velocity, a loudness, and a
//! pulse-emission rate. One iteration applies, per bat:
//!
//! ```text
//! f  = f_min + (f_max - f_min) * beta          frequency, beta ~ U[0,1)
//! v' = v + (x - best) * f                      velocity
//! x' = x + v'                                  move, clamped into bounds
//! ```
//!
//! When a uniform draw exceeds the bat's pulse rate, the move is replaced by
//! a local random walk around the incumbent best,
//!
//! ```text
//! x' = best + eps * avg_loudness               eps ~ U[0,1) per component
//! ```
//!
//! where `avg_loudness` is the mean loudness of the whole population. The
//! candidate is accepted when a uniform draw falls below the bat's loudness
//! and its cost does not worsen the bat's own; on acceptance the loudness
//! decays geometrically (`a <- alpha * a`) and the pulse rate rises toward
//! its ceiling (`r = r0 * (1 - exp(-gamma * t))` with `t` the global
//! iteration index). After all bats move, the `replace_count` worst bats are
//! replaced by fresh uniform-random ones. The reported best is elitist: it is
//! the minimum over every cost ever evaluated, including rejected candidates
//! and replacement bats.
//!
//! Runs are deterministic. A run owns a single ChaCha8 stream seeded from the
//! caller's `u64`, and draws follow a fixed order: initialization consumes
//! `dims` uniforms per bat in rank order; each iteration then consumes, per
//! bat, `beta`, the walk trigger, `dims` walk components when the walk is
//! taken, and the acceptance draw, followed by `dims` uniforms per
//! replacement bat.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Validation failures raised before any optimization work starts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BatError {
    /// Bounds were empty, mismatched, non-finite, or inverted.
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    /// A parameter violated its documented range.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// The objective and the search space disagree on dimensionality.
    #[error("objective expects {objective} dimensions, search space has {space}")]
    DimensionMismatch { objective: usize, space: usize },
}

/// An axis-aligned box of finite bounds, one `[lower, upper]` pair per
/// dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    /// Validates and builds a search space; every pair must be finite with
    /// `lower < upper`.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, BatError> {
        if lower.is_empty() {
            return Err(BatError::InvalidSpace("bounds must not be empty".into()));
        }
        if lower.len() != upper.len() {
            return Err(BatError::InvalidSpace(format!(
                "lower has {} dimensions, upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(BatError::InvalidSpace(format!(
                    "dimension {d} needs finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Builds the same `[lo, hi]` interval in every dimension.
    pub fn cube(lo: f64, hi: f64, dims: usize) -> Result<Self, BatError> {
        Self::new(vec![lo; dims], vec![hi; dims])
    }

    /// Number of dimensions.
    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    /// Lower bounds, one per dimension.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// Upper bounds, one per dimension.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Clamps a position componentwise into the bounds.
    pub fn clamp(&self, position: &mut [f64]) {
        debug_assert_eq!(position.len(), self.dims());
        for (x, (lo, hi)) in position.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *x = x.clamp(*lo, *hi);
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| lo + rng.random::<f64>() * (hi - lo))
            .collect()
    }
}

/// Algorithm constants for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct BatParams {
    /// Number of bats.
    pub pop_size: usize,
    /// Lower frequency limit.
    pub f_min: f64,
    /// Upper frequency limit.
    pub f_max: f64,
    /// Loudness decay factor, in (0, 1).
    pub alpha: f64,
    /// Pulse-rate growth rate, positive.
    pub gamma: f64,
    /// Pulse-rate ceiling, in (0, 1].
    pub r0: f64,
    /// Initial loudness, positive.
    pub a0: f64,
    /// Worst bats replaced by fresh random ones each iteration.
    pub replace_count: usize,
    /// Iteration budget.
    pub max_iter: usize,
    /// Stop once the best cost drops to this value or below.
    pub tol: f64,
}

impl Default for BatParams {
    fn default() -> Self {
        Self {
            pop_size: 20,
            f_min: 0.0,
            f_max: 100.0,
            alpha: 0.9,
            gamma: 0.9,
            r0: 0.5,
            a0: 1.0,
            replace_count: 2,
            max_iter: 2000,
            tol: 1e-6,
        }
    }
}

impl BatParams {
    /// Checks every documented parameter range.
    pub fn validate(&self) -> Result<(), BatError> {
        let fail = |msg: String| Err(BatError::InvalidParams(msg));
        if self.pop_size == 0 {
            return fail("pop_size must be at least 1".into());
        }
        if !(self.f_min.is_finite() && self.f_max.is_finite() && self.f_min < self.f_max) {
            return fail(format!(
                "frequency limits need finite f_min < f_max, got [{}, {}]",
                self.f_min, self.f_max
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return fail(format!("gamma must be positive, got {}", self.gamma));
        }
        if !(self.r0 > 0.0 && self.r0 <= 1.0) {
            return fail(format!("r0 must lie in (0, 1], got {}", self.r0));
        }
        if !(self.a0.is_finite() && self.a0 > 0.0) {
            return fail(format!("a0 must be positive, got {}", self.a0));
        }
        if self.replace_count >= self.pop_size {
            return fail(format!(
                "replace_count {} must stay below pop_size {}",
                self.replace_count, self.pop_size
            ));
        }
        if self.max_iter == 0 {
            return fail("max_iter must be at least 1".into());
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return fail(format!("tol must be positive, got {}", self.tol));
        }
        Ok(())
    }
}

/// A cost function over positions; lower is better.
///
/// `evaluate` must be pure. A non-finite return marks the candidate as
/// unusable: the optimizer logs it, discards the candidate, and leaves the
/// bat untouched.
pub trait Objective {
    /// Dimensionality of positions this objective accepts.
    fn dims(&self) -> usize;
    /// Cost of one position; non-negative and finite for usable candidates.
    fn evaluate(&self, position: &[f64]) -> f64;
}

/// One candidate of the population.
#[derive(Debug, Clone, PartialEq)]
pub struct Bat {
    /// Current position, always inside the bounds.
    pub position: Vec<f64>,
    /// Current velocity; unbounded.
    pub velocity: Vec<f64>,
    /// Most recent frequency draw.
    pub frequency: f64,
    /// Acceptance gate; decays on accepted updates.
    pub loudness: f64,
    /// Local-search gate; rises toward `r0` on accepted updates.
    pub pulse_rate: f64,
    /// Cost of `position`.
    pub fitness: f64,
}

/// Population state between iterations, sorted by fitness ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    /// Bats ordered best first; ties keep their prior order.
    pub bats: Vec<Bat>,
    /// Best position ever evaluated.
    pub best_position: Vec<f64>,
    /// Best cost ever evaluated.
    pub best_fitness: f64,
    /// Completed iterations.
    pub t: usize,
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The best cost reached the tolerance.
    ToleranceReached,
    /// The iteration budget ran out.
    MaxIterations,
}

/// Best-so-far snapshot taken at the end of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    /// 1-based iteration index.
    pub iteration: usize,
    /// Best cost after this iteration; non-increasing across a run.
    pub best_fitness: f64,
    /// Position achieving `best_fitness`.
    pub best_position: Vec<f64>,
}

/// Everything a finished run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Best position ever evaluated.
    pub best_position: Vec<f64>,
    /// Best cost ever evaluated.
    pub best_fitness: f64,
    /// Iterations executed; equals `history.len()`.
    pub iterations_used: usize,
    /// One record per iteration.
    pub history: Vec<ConvergenceRecord>,
    /// Seed the run was started with.
    pub seed: u64,
    /// Why the run stopped.
    pub terminated: Termination,
}

/// Frequency for one move, `f_min + (f_max - f_min) * beta`.
pub fn draw_frequency(params: &BatParams, beta: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&beta), "beta must lie in [0, 1]");
    params.f_min + (params.f_max - params.f_min) * beta
}

/// Velocity and clamped position after one frequency-driven move.
///
/// The velocity is returned pre-clamp; only the position is folded into the
/// bounds.
pub fn move_bat(
    bat: &Bat,
    best_position: &[f64],
    frequency: f64,
    space: &SearchSpace,
) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(bat.position.len(), best_position.len());
    let velocity: Vec<f64> = bat
        .velocity
        .iter()
        .zip(bat.position.iter().zip(best_position))
        .map(|(v, (x, b))| v + (x - b) * frequency)
        .collect();
    let mut position: Vec<f64> = bat
        .position
        .iter()
        .zip(&velocity)
        .map(|(x, v)| x + v)
        .collect();
    space.clamp(&mut position);
    (velocity, position)
}

/// Local-search candidate `best + eps * avg_loudness`, clamped into bounds.
///
/// `eps` holds one draw from [0, 1] per component and `avg_loudness` is the
/// population's mean loudness, so the walk radius tracks how loud the swarm
/// still is.
pub fn random_walk(
    best_position: &[f64],
    avg_loudness: f64,
    epsilon: &[f64],
    space: &SearchSpace,
) -> Vec<f64> {
    debug_assert_eq!(best_position.len(), epsilon.len());
    debug_assert!(avg_loudness >= 0.0, "average loudness must be non-negative");
    debug_assert!(
        epsilon.iter().all(|e| (0.0..=1.0).contains(e)),
        "walk components must lie in [0, 1]"
    );
    let mut position: Vec<f64> = best_position
        .iter()
        .zip(epsilon)
        .map(|(b, e)| b + e * avg_loudness)
        .collect();
    space.clamp(&mut position);
    position
}

/// Geometric loudness decay, `alpha * loudness`.
pub fn update_loudness(loudness: f64, alpha: f64) -> f64 {
    debug_assert!(loudness >= 0.0, "loudness must be non-negative");
    debug_assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    alpha * loudness
}

/// Pulse rate after `t` iterations, `r0 * (1 - exp(-gamma * t))`.
///
/// Non-decreasing in `t`, zero at `t = 0`, and always below `r0`.
pub fn update_pulse_rate(r0: f64, gamma: f64, t: usize) -> f64 {
    debug_assert!(r0 > 0.0 && r0 <= 1.0, "r0 must lie in (0, 1]");
    debug_assert!(gamma > 0.0, "gamma must be positive");
    r0 * (1.0 - (-gamma * t as f64).exp())
}

fn average_loudness(bats: &[Bat]) -> f64 {
    bats.iter().map(|b| b.loudness).sum::<f64>() / bats.len() as f64
}

fn sort_by_fitness(bats: &mut [Bat]) {
    bats.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
}

fn fresh_bat<R: Rng>(
    params: &BatParams,
    space: &SearchSpace,
    objective: &dyn Objective,
    rng: &mut R,
) -> Bat {
    let position = space.sample(rng);
    let fitness = objective.evaluate(&position);
    let fitness = if fitness.is_finite() {
        fitness
    } else {
        log::warn!("objective returned a non-finite cost for a fresh bat; ranking it last");
        f64::INFINITY
    };
    Bat {
        velocity: vec![0.0; position.len()],
        frequency: 0.0,
        loudness: params.a0,
        pulse_rate: 0.0,
        fitness,
        position,
    }
}

fn init_with_rng<R: Rng>(
    params: &BatParams,
    space: &SearchSpace,
    objective: &dyn Objective,
    rng: &mut R,
) -> Result<Population, BatError> {
    params.validate()?;
    if objective.dims() != space.dims() {
        return Err(BatError::DimensionMismatch {
            objective: objective.dims(),
            space: space.dims(),
        });
    }
    let mut bats: Vec<Bat> = (0..params.pop_size)
        .map(|_| fresh_bat(params, space, objective, rng))
        .collect();
    sort_by_fitness(&mut bats);
    let best = &bats[0];
    Ok(Population {
        best_position: best.position.clone(),
        best_fitness: best.fitness,
        bats,
        t: 0,
    })
}

/// Evaluated starting population for `seed`, sorted best first, `t = 0`.
///
/// Positions are uniform within the bounds, velocities zero, loudness `a0`,
/// and pulse rates zero (they rise toward `r0` only through accepted
/// updates).
pub fn init_population(
    params: &BatParams,
    space: &SearchSpace,
    objective: &dyn Objective,
    seed: u64,
) -> Result<Population, BatError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    init_with_rng(params, space, objective, &mut rng)
}

/// Advances the population by one iteration.
///
/// Per bat: frequency move, optional random walk, evaluation, and the
/// loudness-gated acceptance that also applies both schedules. The elitist
/// best then absorbs every cost seen this iteration, the worst
/// `replace_count` bats give way to fresh random ones (the incumbent best is
/// never replaced), and `t` advances. The best fitness never increases.
pub fn step<R: Rng>(
    population: &mut Population,
    params: &BatParams,
    space: &SearchSpace,
    objective: &dyn Objective,
    rng: &mut R,
) {
    let dims = space.dims();
    let best_snapshot = population.best_position.clone();
    let mut seen_best_fitness = population.best_fitness;
    let mut seen_best_position = population.best_position.clone();

    for i in 0..population.bats.len() {
        let beta = rng.random::<f64>();
        let frequency = draw_frequency(params, beta);
        let (velocity, moved) = move_bat(&population.bats[i], &best_snapshot, frequency, space);
        let walk = rng.random::<f64>() > population.bats[i].pulse_rate;
        let candidate = if walk {
            let avg = average_loudness(&population.bats);
            let epsilon: Vec<f64> = (0..dims).map(|_| rng.random::<f64>()).collect();
            random_walk(&best_snapshot, avg, &epsilon, space)
        } else {
            moved
        };
        let cost = objective.evaluate(&candidate);
        let accept_draw = rng.random::<f64>();
        if !cost.is_finite() {
            log::warn!(
                "discarding candidate with non-finite cost at iteration {}",
                population.t + 1
            );
            continue;
        }
        if cost < seen_best_fitness {
            seen_best_fitness = cost;
            seen_best_position = candidate.clone();
        }
        let bat = &mut population.bats[i];
        bat.velocity = velocity;
        bat.frequency = frequency;
        if accept_draw < bat.loudness && cost <= bat.fitness {
            bat.position = candidate;
            bat.fitness = cost;
            bat.loudness = update_loudness(bat.loudness, params.alpha);
            bat.pulse_rate = update_pulse_rate(params.r0, params.gamma, population.t + 1);
        }
    }

    if seen_best_fitness < population.best_fitness {
        population.best_fitness = seen_best_fitness;
        population.best_position = seen_best_position;
    }
    sort_by_fitness(&mut population.bats);

    let n = population.bats.len();
    for k in 0..params.replace_count.min(n.saturating_sub(1)) {
        let replacement = fresh_bat(params, space, objective, rng);
        if replacement.fitness < population.best_fitness {
            population.best_fitness = replacement.fitness;
            population.best_position = replacement.position.clone();
        }
        population.bats[n - 1 - k] = replacement;
    }
    sort_by_fitness(&mut population.bats);
    population.t += 1;
}

/// Runs the optimizer until the tolerance is reached or the budget is spent.
///
/// Identical `(objective, params, space, seed)` inputs reproduce the result
/// exactly, including the history. When an initial bat already meets the
/// tolerance the run reports zero iterations and an empty history.
pub fn run(
    objective: &dyn Objective,
    params: &BatParams,
    space: &SearchSpace,
    seed: u64,
) -> Result<RunResult, BatError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut population = init_with_rng(params, space, objective, &mut rng)?;
    let mut history = Vec::new();
    let mut terminated = Termination::MaxIterations;

    if population.best_fitness <= params.tol {
        terminated = Termination::ToleranceReached;
    } else {
        for _ in 0..params.max_iter {
            step(&mut population, params, space, objective, &mut rng);
            history.push(ConvergenceRecord {
                iteration: population.t,
                best_fitness: population.best_fitness,
                best_position: population.best_position.clone(),
            });
            if population.best_fitness <= params.tol {
                terminated = Termination::ToleranceReached;
                break;
            }
        }
    }

    Ok(RunResult {
        best_position: population.best_position,
        best_fitness: population.best_fitness,
        iterations_used: population.t,
        history,
        seed,
        terminated,
    })
}
