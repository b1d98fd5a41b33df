//! Best-parameter search over `(n, gamma)`.
//!
//! A cell is feasible when `NE` consecutive independent runs all converge to
//! the optimal action. Among feasible cells, the one with the lowest mean
//! iteration count over a separate evaluation batch wins.

use rayon::prelude::*;

use crate::automata::{AutomatonConfig, Scheme};
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::experiment::{run_until_convergence, BatchSummary, Convergence, Parallelism};
use crate::rng::{derive_seed, splitmix64};

#[derive(Debug, Clone, PartialEq)]
pub struct TuningSpec {
    pub resolutions: Vec<u32>,
    pub gammas: Vec<f64>,
    /// Required run of consecutive correct convergences.
    pub required_correct: u64,
    pub stop: Convergence,
    /// Replications used to rank feasible cells by mean iterations.
    pub eval_replications: u64,
    pub mu: f64,
    pub init_samples: u32,
}

impl Default for TuningSpec {
    fn default() -> Self {
        TuningSpec {
            resolutions: (1..=150).collect(),
            gammas: (1..=30).map(f64::from).collect(),
            required_correct: 750,
            stop: Convergence::default(),
            eval_replications: 2_000,
            mu: AutomatonConfig::DEFAULT_MU,
            init_samples: AutomatonConfig::DEFAULT_INIT_SAMPLES,
        }
    }
}

impl TuningSpec {
    pub fn validate(&self) -> Result<()> {
        if self.resolutions.is_empty() || self.gammas.is_empty() {
            return Err(Error::InvalidConfig("tuning grids must be non-empty".into()));
        }
        if self.required_correct < 1 {
            return Err(Error::InvalidConfig("NE must be at least 1".into()));
        }
        if self.eval_replications < 1 {
            return Err(Error::InvalidConfig(
                "evaluation needs at least 1 replication".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub resolution: u32,
    pub gamma: f64,
    pub passed: bool,
    /// Evaluation statistics, present only for feasible cells.
    pub evaluation: Option<BatchSummary>,
}

impl CellReport {
    pub fn mean_iterations(&self) -> Option<f64> {
        self.evaluation.as_ref().and_then(|e| e.mean_iterations)
    }

    pub fn accuracy(&self) -> Option<f64> {
        self.evaluation.as_ref().map(|e| e.accuracy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuningResult {
    /// Cells in grid order (resolution-major).
    pub grid: Vec<CellReport>,
    /// Index into `grid` of the fastest feasible cell.
    pub best: Option<usize>,
}

impl TuningResult {
    /// The winning cell, or [`Error::NoFeasibleParameters`].
    pub fn best(&self) -> Result<&CellReport> {
        self.best
            .map(|i| &self.grid[i])
            .ok_or(Error::NoFeasibleParameters)
    }
}

/// Runs `required_correct` replications in sequence and reports whether all
/// of them converged to the optimal action. Stops at the first miss.
pub fn passes_ne_constraint(
    config: &AutomatonConfig,
    env: &Environment,
    required_correct: u64,
    stop: &Convergence,
    seed: u64,
) -> Result<bool> {
    if required_correct < 1 {
        return Err(Error::InvalidConfig("NE must be at least 1".into()));
    }
    for k in 0..required_correct {
        if !run_until_convergence(config, env, stop, derive_seed(seed, k))?.correct {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seed of a grid cell, derived from its coordinates so that cells are
/// uncorrelated and independent of grid shape.
pub fn cell_seed(base_seed: u64, resolution: u32, gamma: f64) -> u64 {
    splitmix64(splitmix64(base_seed ^ u64::from(resolution)) ^ gamma.to_bits())
}

pub fn evaluate_cell(
    scheme: Scheme,
    env: &Environment,
    spec: &TuningSpec,
    resolution: u32,
    gamma: f64,
    base_seed: u64,
) -> Result<CellReport> {
    let config = AutomatonConfig::new(scheme, env.actions(), resolution, gamma)
        .with_mu(spec.mu)
        .with_init_samples(spec.init_samples);
    let seed = cell_seed(base_seed, resolution, gamma);
    let passed = passes_ne_constraint(&config, env, spec.required_correct, &spec.stop, derive_seed(seed, 0))?;
    let evaluation = if passed {
        let eval_seed = derive_seed(seed, 1);
        let runs = (0..spec.eval_replications)
            .map(|k| run_until_convergence(&config, env, &spec.stop, derive_seed(eval_seed, k)))
            .collect::<Result<Vec<_>>>()?;
        Some(BatchSummary::from_runs(&runs))
    } else {
        None
    };
    Ok(CellReport {
        resolution,
        gamma,
        passed,
        evaluation,
    })
}

/// Evaluates every `(n, gamma)` cell in parallel and picks the feasible cell
/// with the lowest mean iterations (ties: smaller `n`, then smaller `gamma`).
pub fn grid_search(
    scheme: Scheme,
    env: &Environment,
    spec: &TuningSpec,
    base_seed: u64,
    parallelism: Parallelism,
) -> Result<TuningResult> {
    spec.validate()?;
    let cells: Vec<(u32, f64)> = spec
        .resolutions
        .iter()
        .flat_map(|&n| spec.gammas.iter().map(move |&g| (n, g)))
        .collect();
    let grid = parallelism.install(|| {
        cells
            .par_iter()
            .map(|&(n, g)| evaluate_cell(scheme, env, spec, n, g, base_seed))
            .collect::<Result<Vec<_>>>()
    })?;

    let best = grid
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.mean_iterations().map(|m| (i, m, c)))
        .min_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then(a.2.resolution.cmp(&b.2.resolution))
                .then(a.2.gamma.total_cmp(&b.2.gamma))
        })
        .map(|(i, _, _)| i);
    Ok(TuningResult { grid, best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Preset;

    fn small_spec() -> TuningSpec {
        TuningSpec {
            resolutions: vec![4],
            gammas: vec![2.0],
            required_correct: 10,
            eval_replications: 20,
            ..TuningSpec::default()
        }
    }

    #[test]
    fn deterministic_environment_passes() {
        let env = Environment::new("d", vec![1.0, 0.0]).unwrap();
        for scheme in Scheme::ALL {
            let cfg = AutomatonConfig::new(scheme, 2, 5, 2.0);
            assert!(passes_ne_constraint(&cfg, &env, 10, &Convergence::default(), 1).unwrap());
        }
    }

    #[test]
    fn single_run_constraint_matches_single_run() {
        let env = Preset::E3.environment();
        let cfg = AutomatonConfig::new(Scheme::SeRi, 10, 2, 1.0);
        let stop = Convergence::default();
        for seed in 0..30 {
            let single = run_until_convergence(&cfg, &env, &stop, derive_seed(seed, 0)).unwrap();
            assert_eq!(passes_ne_constraint(&cfg, &env, 1, &stop, seed).unwrap(), single.correct);
        }
    }

    #[test]
    fn ne_zero_is_rejected() {
        let env = Preset::E1.environment();
        let cfg = AutomatonConfig::new(Scheme::Dca, 10, 13, 6.0);
        assert!(passes_ne_constraint(&cfg, &env, 0, &Convergence::default(), 1).is_err());
    }

    #[test]
    fn single_feasible_cell_is_selected() {
        let env = Environment::new("d", vec![1.0, 0.0, 0.0]).unwrap();
        let res = grid_search(Scheme::Dca, &env, &small_spec(), 3, Parallelism::Threads(1)).unwrap();
        let best = res.best().unwrap();
        assert_eq!((best.resolution, best.gamma), (4, 2.0));
        assert!(best.passed);
    }

    #[test]
    fn all_cells_failing_is_infeasible() {
        // Coarse steps on the hardest preset cannot produce 200 straight hits.
        let env = Preset::E3.environment();
        let spec = TuningSpec {
            resolutions: vec![1, 2],
            gammas: vec![1.0],
            required_correct: 200,
            ..small_spec()
        };
        let res = grid_search(Scheme::SeRi, &env, &spec, 1, Parallelism::Auto).unwrap();
        assert!(res.grid.iter().all(|c| !c.passed && c.evaluation.is_none()));
        assert!(matches!(res.best(), Err(Error::NoFeasibleParameters)));
    }

    #[test]
    fn empty_grid_is_rejected() {
        let env = Preset::E1.environment();
        let spec = TuningSpec { gammas: vec![], ..small_spec() };
        assert!(grid_search(Scheme::Dca, &env, &spec, 1, Parallelism::Auto).is_err());
    }

    #[test]
    fn grid_search_is_deterministic_and_order_stable() {
        let env = Preset::E4.environment();
        let spec = TuningSpec {
            resolutions: vec![6, 12],
            gammas: vec![3.0, 5.0],
            required_correct: 20,
            eval_replications: 50,
            ..TuningSpec::default()
        };
        let a = grid_search(Scheme::Dca, &env, &spec, 9, Parallelism::Threads(1)).unwrap();
        let b = grid_search(Scheme::Dca, &env, &spec, 9, Parallelism::Threads(3)).unwrap();
        assert_eq!(a, b);
        let coords: Vec<_> = a.grid.iter().map(|c| (c.resolution, c.gamma)).collect();
        assert_eq!(coords, vec![(6, 3.0), (6, 5.0), (12, 3.0), (12, 5.0)]);
        if let Ok(best) = a.best() {
            assert!(best.passed);
            let m = best.mean_iterations().unwrap();
            assert!(a.grid.iter().filter_map(CellReport::mean_iterations).all(|x| x >= m));
        }
    }

    #[test]
    fn cell_seeds_differ_by_coordinate() {
        assert_ne!(cell_seed(1, 13, 6.0), cell_seed(1, 6, 13.0));
        assert_ne!(cell_seed(1, 13, 6.0), cell_seed(2, 13, 6.0));
        assert_eq!(cell_seed(1, 13, 6.0), cell_seed(1, 13, 6.0));
    }
}
