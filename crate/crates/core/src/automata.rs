//! Estimator learning automata: the double competitive algorithm (DCA) and
//! the stochastic-estimator reward-inaction baseline (SE_RI).
//!
//! Both schemes keep an action probability vector `P` and a stochastic
//! estimator. On a reward, the action with the highest stochastic estimate
//! absorbs a discretized step `1/(r·n)` from every other action. DCA adds a
//! second competitive strategy: on every iteration it redraws the stochastic
//! estimates, and when their argmax (the leader) moves from `a` to `b`, `b`
//! takes `(1 - mu)` of `a`'s probability mass.
//!
//! Random draws per iteration are fixed so any implementation can reproduce a
//! run from its seed:
//!
//! | draw                          | DCA           | SE_RI         |
//! |-------------------------------|---------------|---------------|
//! | action sampling (inverse CDF) | 1             | 1             |
//! | environment response          | 1             | 1             |
//! | reward-path estimates         | `r` on reward | `r` on reward |
//! | leader estimates              | `r`           | -             |

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::env::{Environment, Feedback};
use crate::error::{Error, Result};
use crate::estimator::{argmax, check_gamma, Estimator};

/// Drift tolerance above which the probability vector is renormalized after a
/// leader change.
const RENORMALIZE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Dca,
    SeRi,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Dca, Scheme::SeRi];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Dca => "dca",
            Scheme::SeRi => "seri",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dca" => Ok(Scheme::Dca),
            "seri" | "se_ri" | "se-ri" => Ok(Scheme::SeRi),
            other => Err(Error::InvalidConfig(format!(
                "unknown scheme `{other}` (expected dca or seri)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutomatonConfig {
    pub scheme: Scheme,
    /// Number of actions `r`.
    pub actions: usize,
    /// Resolution parameter `n`; the step size is `1/(r·n)`.
    pub resolution: u32,
    /// Stochastic-estimator perturbation scale.
    pub gamma: f64,
    /// Share of the old leader's probability kept on a leader change.
    pub mu: f64,
    /// Plays of each action used to seed the estimator.
    pub init_samples: u32,
}

impl AutomatonConfig {
    pub const DEFAULT_MU: f64 = 0.1;
    pub const DEFAULT_INIT_SAMPLES: u32 = 10;

    pub fn new(scheme: Scheme, actions: usize, resolution: u32, gamma: f64) -> Self {
        AutomatonConfig {
            scheme,
            actions,
            resolution,
            gamma,
            mu: Self::DEFAULT_MU,
            init_samples: Self::DEFAULT_INIT_SAMPLES,
        }
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_init_samples(mut self, init_samples: u32) -> Self {
        self.init_samples = init_samples;
        self
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        1.0 / (self.actions as f64 * self.resolution as f64)
    }

    /// Environment interactions spent seeding the estimator, `r·k0`.
    pub fn init_plays(&self) -> u64 {
        self.actions as u64 * u64::from(self.init_samples)
    }

    pub fn validate(&self) -> Result<()> {
        if self.actions < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 actions, got {}",
                self.actions
            )));
        }
        if self.resolution < 1 {
            return Err(Error::InvalidConfig("resolution n must be at least 1".into()));
        }
        check_gamma(self.gamma)?;
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "attenuation factor mu must lie in (0, 1), got {}",
                self.mu
            )));
        }
        if self.init_samples < 1 {
            return Err(Error::InvalidConfig(
                "initialization needs at least 1 sample per action".into(),
            ));
        }
        Ok(())
    }
}

/// Probability mass moved by a DCA leader change, captured before the move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeaderChange {
    pub from: usize,
    pub to: usize,
    pub from_before: f64,
    pub to_before: f64,
    /// Whether floating-point drift forced a renormalization afterwards.
    pub renormalized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub action: usize,
    pub feedback: Feedback,
    /// Argmax of the reward-path estimates, when the action was rewarded.
    pub rewarded_leader: Option<usize>,
    pub leader_change: Option<LeaderChange>,
}

/// Moves `delta` from every action other than `leader` (never below zero) and
/// gives `leader` whatever mass remains.
pub fn first_strategy_update(probabilities: &mut [f64], leader: usize, delta: f64) {
    let mut others = 0.0;
    for (i, p) in probabilities.iter_mut().enumerate() {
        if i != leader {
            *p = (*p - delta).max(0.0);
            others += *p;
        }
    }
    probabilities[leader] = 1.0 - others;
}

/// Transfers `(1 - mu)` of the old leader's probability to the new leader.
///
/// Panics if `old_leader == new_leader`; callers skip the update when the
/// leader is unchanged.
pub fn second_strategy_update(probabilities: &mut [f64], old_leader: usize, new_leader: usize, mu: f64) {
    assert_ne!(
        old_leader, new_leader,
        "second strategy requires a leader change"
    );
    let moved = probabilities[old_leader];
    probabilities[new_leader] += (1.0 - mu) * moved;
    probabilities[old_leader] = mu * moved;
}

/// Inverse-CDF sample over action indices from one uniform draw.
#[inline]
pub fn sample_action<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p > 0.0 {
            cumulative += p;
            last_positive = i;
            if u < cumulative {
                return i;
            }
        }
    }
    // Rounding left the cumulative sum just under 1.
    last_positive
}

/// One learning automaton attached to a run.
#[derive(Debug, Clone)]
pub struct Automaton {
    config: AutomatonConfig,
    probabilities: Vec<f64>,
    estimator: Estimator,
    leader: usize,
    iterations: u64,
    scratch: Vec<f64>,
}

impl Automaton {
    /// Plays each action `init_samples` times in index order, sets `P`
    /// uniform, and draws the initial leader uniformly (one draw).
    pub fn initialize<R: Rng + ?Sized>(config: AutomatonConfig, env: &Environment, rng: &mut R) -> Result<Self> {
        config.validate()?;
        if config.actions != env.actions() {
            return Err(Error::InvalidConfig(format!(
                "configuration has {} actions but environment `{}` has {}",
                config.actions,
                env.name(),
                env.actions()
            )));
        }
        let r = config.actions;
        let mut estimator = Estimator::new(r);
        for action in 0..r {
            for _ in 0..config.init_samples {
                estimator.record(action, env.respond_in_range(action, rng));
            }
        }
        let leader = ((rng.gen::<f64>() * r as f64) as usize).min(r - 1);
        Ok(Automaton {
            config,
            probabilities: vec![1.0 / r as f64; r],
            estimator,
            leader,
            iterations: config.init_plays(),
            scratch: vec![0.0; r],
        })
    }

    pub fn config(&self) -> &AutomatonConfig {
        &self.config
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn estimator(&self) -> &Estimator {
        &self.estimator
    }

    /// Action with the highest stochastic estimate at the last comparison.
    pub fn leader(&self) -> usize {
        self.leader
    }

    /// Environment interactions so far, initialization plays included.
    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// The action whose probability is at least `threshold`, if any.
    pub fn converged_action(&self, threshold: f64) -> Option<usize> {
        let best = argmax(&self.probabilities);
        (self.probabilities[best] >= threshold).then_some(best)
    }

    pub fn step<R: Rng + ?Sized>(&mut self, env: &Environment, rng: &mut R) -> StepOutcome {
        match self.config.scheme {
            Scheme::Dca => self.dca_step(env, rng),
            Scheme::SeRi => self.seri_step(env, rng),
        }
    }

    /// One DCA iteration: both competitive strategies.
    pub fn dca_step<R: Rng + ?Sized>(&mut self, env: &Environment, rng: &mut R) -> StepOutcome {
        let (action, feedback, rewarded_leader) = self.play_and_pursue(env, rng);

        self.estimator
            .fill_stochastic_estimates(self.config.gamma, rng, &mut self.scratch);
        let new_leader = argmax(&self.scratch);
        let leader_change = (new_leader != self.leader).then(|| {
            let from = self.leader;
            let from_before = self.probabilities[from];
            let to_before = self.probabilities[new_leader];
            second_strategy_update(&mut self.probabilities, from, new_leader, self.config.mu);
            self.leader = new_leader;
            let sum: f64 = self.probabilities.iter().sum();
            let renormalized = (sum - 1.0).abs() > RENORMALIZE_TOLERANCE;
            if renormalized {
                self.probabilities.iter_mut().for_each(|p| *p /= sum);
            }
            LeaderChange {
                from,
                to: new_leader,
                from_before,
                to_before,
                renormalized,
            }
        });

        StepOutcome {
            action,
            feedback,
            rewarded_leader,
            leader_change,
        }
    }

    /// One SE_RI iteration: pursue the estimated best action on reward,
    /// do nothing to `P` on penalty.
    pub fn seri_step<R: Rng + ?Sized>(&mut self, env: &Environment, rng: &mut R) -> StepOutcome {
        let (action, feedback, rewarded_leader) = self.play_and_pursue(env, rng);
        StepOutcome {
            action,
            feedback,
            rewarded_leader,
            leader_change: None,
        }
    }

    /// Shared reward-inaction core: sample, play, record, and on reward move
    /// one step toward the argmax of fresh stochastic estimates.
    fn play_and_pursue<R: Rng + ?Sized>(&mut self, env: &Environment, rng: &mut R) -> (usize, Feedback, Option<usize>) {
        let action = sample_action(&self.probabilities, rng);
        let feedback = env.respond_in_range(action, rng);
        self.estimator.record(action, feedback);
        self.iterations += 1;

        let rewarded_leader = feedback.is_reward().then(|| {
            self.estimator
                .fill_stochastic_estimates(self.config.gamma, rng, &mut self.scratch);
            let m = argmax(&self.scratch);
            first_strategy_update(&mut self.probabilities, m, self.config.delta());
            m
        });
        (action, feedback, rewarded_leader)
    }
}
