//! Convergence runs, traces, and the parallel Monte Carlo batch engine.

use rayon::prelude::*;

use crate::automata::{Automaton, AutomatonConfig, LeaderChange};
use crate::env::{Environment, Feedback};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream};

pub const DEFAULT_THRESHOLD: f64 = 0.999;
pub const DEFAULT_MAX_ITERATIONS: u64 = 1_000_000;

/// Stopping rule for a single run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    /// A run stops once some action's probability reaches this value.
    pub threshold: f64,
    /// Iteration cap, initialization plays included.
    pub max_iterations: u64,
}

impl Default for Convergence {
    fn default() -> Self {
        Convergence {
            threshold: DEFAULT_THRESHOLD,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

impl Convergence {
    pub fn new(threshold: f64, max_iterations: u64) -> Self {
        Convergence {
            threshold,
            max_iterations,
        }
    }

    pub fn validate(&self, config: &AutomatonConfig) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "threshold T must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        if self.max_iterations <= config.init_plays() {
            return Err(Error::InvalidConfig(format!(
                "iteration cap {} does not exceed the {} initialization plays",
                self.max_iterations,
                config.init_plays()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub converged_action: Option<usize>,
    /// Iterations at convergence (or at the cap), initialization plays included.
    pub iterations: u64,
    pub correct: bool,
    pub seed: u64,
    /// Final per-action selection counts.
    pub selections: Vec<u64>,
}

fn check(config: &AutomatonConfig, env: &Environment, stop: &Convergence) -> Result<()> {
    config.validate()?;
    stop.validate(config)?;
    if config.actions != env.actions() {
        return Err(Error::InvalidConfig(format!(
            "configuration has {} actions but environment `{}` has {}",
            config.actions,
            env.name(),
            env.actions()
        )));
    }
    Ok(())
}

/// Initializes an automaton from `seed` and steps it until some action's
/// probability reaches the threshold or the iteration cap is hit.
pub fn run_until_convergence(
    config: &AutomatonConfig,
    env: &Environment,
    stop: &Convergence,
    seed: u64,
) -> Result<RunResult> {
    check(config, env, stop)?;
    Ok(run_checked(config, env, stop, seed, |_, _| {}))
}

fn run_checked<F>(config: &AutomatonConfig, env: &Environment, stop: &Convergence, seed: u64, mut observe: F) -> RunResult
where
    F: FnMut(&Automaton, &crate::automata::StepOutcome),
{
    let mut rng = stream(seed);
    let mut la = Automaton::initialize(*config, env, &mut rng).expect("configuration validated");
    let mut converged = la.converged_action(stop.threshold);
    while converged.is_none() && la.iterations() < stop.max_iterations {
        let outcome = la.step(env, &mut rng);
        observe(&la, &outcome);
        converged = la.converged_action(stop.threshold);
    }
    RunResult {
        converged_action: converged,
        iterations: la.iterations(),
        correct: converged == Some(env.optimal_index()),
        seed,
        selections: la.estimator().selections().to_vec(),
    }
}

/// Worker count for a batch. `Threads(0)` or `Auto` uses every available core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Auto,
    Threads(usize),
}

impl Parallelism {
    pub(crate) fn install<T: Send>(self, job: impl FnOnce() -> T + Send) -> T {
        match self {
            Parallelism::Auto | Parallelism::Threads(0) => job(),
            Parallelism::Threads(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build thread pool")
                .install(job),
        }
    }
}

/// Runs `replications` independent runs; replication `k` uses seed
/// `derive_seed(base_seed, k)`. Results come back in replication order.
pub fn run_replications(
    config: &AutomatonConfig,
    env: &Environment,
    stop: &Convergence,
    replications: u64,
    base_seed: u64,
    parallelism: Parallelism,
) -> Result<Vec<RunResult>> {
    check(config, env, stop)?;
    Ok(parallelism.install(|| {
        (0..replications)
            .into_par_iter()
            .map(|k| run_checked(config, env, stop, derive_seed(base_seed, k), |_, _| {}))
            .collect()
    }))
}

/// Aggregated batch statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub replications: u64,
    pub correct: u64,
    pub incorrect: u64,
    pub non_converged: u64,
    /// `correct / replications`.
    pub accuracy: f64,
    /// Mean iterations over converged runs; `None` if none converged.
    pub mean_iterations: Option<f64>,
    /// Sample standard deviation of iterations over converged runs (zero for
    /// a single converged run).
    pub std_iterations: Option<f64>,
}

impl BatchSummary {
    /// Aggregates runs in the given order with compensated summation, so
    /// the result only depends on the run order, never on thread scheduling.
    pub fn from_runs(runs: &[RunResult]) -> Self {
        let mut correct = 0;
        let mut incorrect = 0;
        let mut non_converged = 0;
        let mut sum = NeumaierSum::default();
        for run in runs {
            match (run.converged_action, run.correct) {
                (None, _) => non_converged += 1,
                (Some(_), true) => correct += 1,
                (Some(_), false) => incorrect += 1,
            }
            if run.converged_action.is_some() {
                sum.add(run.iterations as f64);
            }
        }
        let converged = correct + incorrect;
        let mean = (converged > 0).then(|| sum.total() / converged as f64);
        let std = mean.map(|mean| {
            if converged < 2 {
                return 0.0;
            }
            let mut squares = NeumaierSum::default();
            for run in runs.iter().filter(|r| r.converged_action.is_some()) {
                let d = run.iterations as f64 - mean;
                squares.add(d * d);
            }
            (squares.total() / (converged - 1) as f64).sqrt()
        });
        let replications = runs.len() as u64;
        BatchSummary {
            replications,
            correct,
            incorrect,
            non_converged,
            accuracy: if replications == 0 {
                0.0
            } else {
                correct as f64 / replications as f64
            },
            mean_iterations: mean,
            std_iterations: std,
        }
    }
}

pub fn run_batch(
    config: &AutomatonConfig,
    env: &Environment,
    stop: &Convergence,
    replications: u64,
    base_seed: u64,
    parallelism: Parallelism,
) -> Result<BatchSummary> {
    if replications == 0 {
        return Err(Error::InvalidConfig("replications must be at least 1".into()));
    }
    let runs = run_replications(config, env, stop, replications, base_seed, parallelism)?;
    Ok(BatchSummary::from_runs(&runs))
}

#[derive(Debug, Clone, Copy, Default)]
struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Options for [`trace_run`].
#[derive(Debug, Clone, Copy, Default)]
pub struct TraceOptions {
    /// Action whose probability is recorded; the environment's optimal
    /// action when `None`.
    pub tracked_action: Option<usize>,
    /// Also keep the full probability vector at every snapshot.
    pub full_vector: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// Iteration number counted from the end of initialization (first step is 1).
    pub t: u64,
    pub p_tracked: f64,
    pub selected: usize,
    pub feedback: Feedback,
    /// Leader after the step.
    pub leader: usize,
    pub leader_change: Option<LeaderChange>,
    pub probabilities: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub tracked_action: usize,
    pub snapshots: Vec<Snapshot>,
    pub result: RunResult,
}

impl Trace {
    pub fn selections(&self) -> &[u64] {
        &self.result.selections
    }
}

/// Same dynamics as [`run_until_convergence`] with one snapshot per
/// post-initialization iteration.
pub fn trace_run(
    config: &AutomatonConfig,
    env: &Environment,
    stop: &Convergence,
    seed: u64,
    options: TraceOptions,
) -> Result<Trace> {
    check(config, env, stop)?;
    let tracked = options.tracked_action.unwrap_or_else(|| env.optimal_index());
    if tracked >= env.actions() {
        return Err(Error::ActionOutOfRange {
            action: tracked,
            actions: env.actions(),
        });
    }
    let init_plays = config.init_plays();
    let mut snapshots = Vec::new();
    let result = run_checked(config, env, stop, seed, |la, outcome| {
        let p = la.probabilities();
        snapshots.push(Snapshot {
            t: la.iterations() - init_plays,
            p_tracked: p[tracked],
            selected: outcome.action,
            feedback: outcome.feedback,
            leader: la.leader(),
            leader_change: outcome.leader_change,
            probabilities: options.full_vector.then(|| p.to_vec()),
        });
    });
    Ok(Trace {
        tracked_action: tracked,
        snapshots,
        result,
    })
}

/// Share of all selections (in percent) that went to each action, summed
/// over the final selection counts of the given runs.
pub fn selection_histogram<'a, I>(selections: I) -> Result<Vec<f64>>
where
    I: IntoIterator<Item = &'a [u64]>,
{
    let mut totals: Vec<u64> = Vec::new();
    for z in selections {
        if totals.is_empty() {
            totals = vec![0; z.len()];
        }
        if z.len() != totals.len() {
            return Err(Error::InvalidConfig(
                "runs with different action counts cannot share a histogram".into(),
            ));
        }
        totals.iter_mut().zip(z).for_each(|(t, &x)| *t += x);
    }
    let grand: u64 = totals.iter().sum();
    if grand == 0 {
        return Err(Error::InvalidConfig(
            "a selection histogram needs at least one completed run".into(),
        ));
    }
    Ok(totals
        .iter()
        .map(|&t| 100.0 * t as f64 / grand as f64)
        .collect())
}
