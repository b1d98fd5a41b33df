//! Estimator learning automata over stationary P-model environments.
//!
//! The crate provides the double competitive algorithm (DCA) and the
//! stochastic-estimator reward-inaction scheme (SE_RI), the five benchmark
//! environments, a seeded parallel Monte Carlo harness, a best-parameter grid
//! search, and CSV reports.
//!
//! ```
//! use learning_automata::automata::{AutomatonConfig, Scheme};
//! use learning_automata::env::Preset;
//! use learning_automata::experiment::{run_until_convergence, Convergence};
//!
//! let env = Preset::E1.environment();
//! let config = AutomatonConfig::new(Scheme::Dca, env.actions(), 13, 6.0);
//! let run = run_until_convergence(&config, &env, &Convergence::default(), 42).unwrap();
//! assert!(run.converged_action.is_some());
//! ```

pub mod automata;
pub mod cli;
pub mod env;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod reference;
pub mod report;
pub mod rng;
pub mod tuning;

pub use automata::{Automaton, AutomatonConfig, Scheme};
pub use env::{Environment, Feedback, Preset};
pub use error::{Error, Result};
pub use experiment::{BatchSummary, Convergence, Parallelism, RunResult, Trace};
