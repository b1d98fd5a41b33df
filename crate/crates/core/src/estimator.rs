//! Reward-probability estimation from per-action reward and selection counts.

use rand::distributions::Open01;
use rand::Rng;

use crate::env::Feedback;
use crate::error::{Error, Result};

/// Per-action reward counts `W` and selection counts `Z`.
///
/// Estimates are always computed from the counts on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Estimator {
    rewards: Vec<u64>,
    selections: Vec<u64>,
}

impl Estimator {
    pub fn new(actions: usize) -> Self {
        Estimator {
            rewards: vec![0; actions],
            selections: vec![0; actions],
        }
    }

    /// Builds an estimator from explicit counts. Requires `rewards[i] <= selections[i]`.
    pub fn from_counts(rewards: Vec<u64>, selections: Vec<u64>) -> Result<Self> {
        if rewards.len() != selections.len() {
            return Err(Error::InvalidConfig(
                "reward and selection count vectors differ in length".into(),
            ));
        }
        if rewards.iter().zip(&selections).any(|(w, z)| w > z) {
            return Err(Error::InvalidConfig(
                "an action has more rewards than selections".into(),
            ));
        }
        Ok(Estimator { rewards, selections })
    }

    pub fn actions(&self) -> usize {
        self.selections.len()
    }

    pub fn rewards(&self) -> &[u64] {
        &self.rewards
    }

    pub fn selections(&self) -> &[u64] {
        &self.selections
    }

    #[inline]
    pub fn record(&mut self, action: usize, feedback: Feedback) {
        self.rewards[action] += feedback as u64;
        self.selections[action] += 1;
    }

    /// Maximum-likelihood estimate `W_i / Z_i` of one action.
    ///
    /// Panics if the action was never selected.
    #[inline]
    pub fn deterministic(&self, action: usize) -> f64 {
        let z = self.selections[action];
        assert!(z > 0, "action {action} has no selections to estimate from");
        self.rewards[action] as f64 / z as f64
    }

    pub fn deterministic_estimates(&self) -> Vec<f64> {
        (0..self.actions()).map(|i| self.deterministic(i)).collect()
    }

    /// Stochastic estimates `W_i/Z_i + R_i`, with each `R_i` uniform on the
    /// open interval `(-gamma/Z_i, gamma/Z_i)`.
    pub fn stochastic_estimates<R: Rng + ?Sized>(&self, gamma: f64, rng: &mut R) -> Result<Vec<f64>> {
        check_gamma(gamma)?;
        let mut out = vec![0.0; self.actions()];
        self.fill_stochastic_estimates(gamma, rng, &mut out);
        Ok(out)
    }

    /// Writes stochastic estimates into `out`, drawing one fresh perturbation
    /// per action in index order (exactly `actions()` uniform draws). The
    /// estimates are not clamped to `[0, 1]`.
    #[inline]
    pub fn fill_stochastic_estimates<R: Rng + ?Sized>(&self, gamma: f64, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.actions());
        for (i, u) in out.iter_mut().enumerate() {
            let half_width = gamma / self.selections[i] as f64;
            let unit: f64 = rng.sample(Open01);
            *u = self.deterministic(i) + half_width * (2.0 * unit - 1.0);
        }
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "gamma must be a finite non-negative number, got {gamma}"
        )))
    }
}

/// Index of the largest value, lowest index on ties.
#[inline]
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] > values[best] {
            best = i;
        }
    }
    best
}
