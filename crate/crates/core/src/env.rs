//! Stationary P-model random environments.
//!
//! An environment answers each action with a binary reward drawn from a fixed
//! Bernoulli probability. The five benchmark environments are compiled in so
//! that published comparisons never depend on external files.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Binary environment response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feedback {
    Penalty = 0,
    Reward = 1,
}

impl Feedback {
    pub fn is_reward(self) -> bool {
        self == Feedback::Reward
    }

    pub fn as_u8(self) -> u8 {
        self as u8
    }
}

/// The benchmark environments, each with ten actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Preset {
    E1,
    E2,
    E3,
    E4,
    E5,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::E1, Preset::E2, Preset::E3, Preset::E4, Preset::E5];

    pub fn reward_probabilities(self) -> [f64; 10] {
        match self {
            Preset::E1 => [0.65, 0.50, 0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10],
            Preset::E2 => [0.60, 0.50, 0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10],
            Preset::E3 => [0.55, 0.50, 0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10],
            Preset::E4 => [0.70, 0.50, 0.30, 0.20, 0.40, 0.50, 0.40, 0.30, 0.50, 0.20],
            Preset::E5 => [0.10, 0.45, 0.84, 0.76, 0.20, 0.40, 0.60, 0.70, 0.50, 0.30],
        }
    }

    pub fn environment(self) -> Environment {
        Environment {
            name: self.to_string(),
            probabilities: self.reward_probabilities().to_vec(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::E1 => "E1",
            Preset::E2 => "E2",
            Preset::E3 => "E3",
            Preset::E4 => "E4",
            Preset::E5 => "E5",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownEnvironment(s.to_string()))
    }
}

/// Looks up one of the benchmark environments by name (`E1`..`E5`).
pub fn benchmark_environment(name: &str) -> Result<Environment> {
    name.parse::<Preset>().map(Preset::environment)
}

/// A set of actions with fixed Bernoulli reward probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    name: String,
    probabilities: Vec<f64>,
}

impl Environment {
    pub fn new(name: impl Into<String>, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() < 2 {
            return Err(Error::InvalidEnvironment(format!(
                "need at least 2 actions, got {}",
                probabilities.len()
            )));
        }
        if let Some((i, c)) = probabilities
            .iter()
            .enumerate()
            .find(|(_, c)| !(0.0..=1.0).contains(*c))
        {
            return Err(Error::InvalidEnvironment(format!(
                "reward probability {c} of action {} is outside [0, 1]",
                i + 1
            )));
        }
        Ok(Environment {
            name: name.into(),
            probabilities,
        })
    }

    /// Parses a list of decimal probabilities separated by commas and/or
    /// newlines. Blank lines and `#` comments are ignored.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut probabilities = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            for field in line.split(',').map(str::trim).filter(|f| !f.is_empty()) {
                let c: f64 = field.parse().map_err(|_| {
                    Error::InvalidEnvironment(format!("`{field}` is not a decimal probability"))
                })?;
                probabilities.push(c);
            }
        }
        Environment::new(name, probabilities)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_name()
            .and_then(|f| f.to_str())
            .map(|f| f.trim_end_matches(".env.csv").to_string())
            .unwrap_or_else(|| path.display().to_string());
        Environment::parse(name, &text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn actions(&self) -> usize {
        self.probabilities.len()
    }

    pub fn reward_probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Index of the highest reward probability, lowest index on ties.
    pub fn optimal_index(&self) -> usize {
        let mut best = 0;
        for (i, &c) in self.probabilities.iter().enumerate().skip(1) {
            if c > self.probabilities[best] {
                best = i;
            }
        }
        best
    }

    /// Plays `action` (zero-based) once. Consumes exactly one uniform draw:
    /// the action is rewarded iff the draw is below its reward probability.
    pub fn respond<R: Rng + ?Sized>(&self, action: usize, rng: &mut R) -> Result<Feedback> {
        let c = *self
            .probabilities
            .get(action)
            .ok_or(Error::ActionOutOfRange {
                action,
                actions: self.actions(),
            })?;
        Ok(bernoulli(c, rng))
    }

    #[inline]
    pub(crate) fn respond_in_range<R: Rng + ?Sized>(&self, action: usize, rng: &mut R) -> Feedback {
        bernoulli(self.probabilities[action], rng)
    }
}

#[inline]
fn bernoulli<R: Rng + ?Sized>(c: f64, rng: &mut R) -> Feedback {
    if rng.gen::<f64>() < c {
        Feedback::Reward
    } else {
        Feedback::Penalty
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn presets_match_published_vectors() {
        let e1 = benchmark_environment("E1").unwrap();
        assert_eq!(
            e1.reward_probabilities(),
            &[0.65, 0.50, 0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10]
        );
        assert_eq!(e1.optimal_index(), 0);

        let e4 = benchmark_environment("E4").unwrap();
        assert_eq!(
            e4.reward_probabilities(),
            &[0.70, 0.50, 0.30, 0.20, 0.40, 0.50, 0.40, 0.30, 0.50, 0.20]
        );
        assert_eq!(e4.optimal_index(), 0);

        let e5 = benchmark_environment("E5").unwrap();
        assert_eq!(e5.optimal_index(), 2);
        assert_eq!(e5.reward_probabilities()[2], 0.84);
    }

    #[test]
    fn presets_have_unique_interior_maximum() {
        for p in Preset::ALL {
            let env = p.environment();
            let c = env.reward_probabilities();
            assert_eq!(c.len(), 10);
            assert!(c.iter().all(|&x| x > 0.0 && x < 1.0));
            let best = c[env.optimal_index()];
            assert_eq!(c.iter().filter(|&&x| x == best).count(), 1, "{p}");
        }
    }

    #[test]
    fn unknown_preset_lists_valid_names() {
        let err = benchmark_environment("E9").unwrap_err();
        assert!(err.is_usage());
        assert!(err.to_string().contains("E1, E2, E3, E4, E5"));
    }

    #[test]
    fn degenerate_probabilities() {
        let env = Environment::new("d", vec![1.0, 0.0]).unwrap();
        let mut rng = stream(7);
        for _ in 0..1000 {
            assert_eq!(env.respond(0, &mut rng).unwrap(), Feedback::Reward);
            assert_eq!(env.respond(1, &mut rng).unwrap(), Feedback::Penalty);
        }
    }

    #[test]
    fn out_of_range_action_is_rejected() {
        let env = Preset::E1.environment();
        let err = env.respond(10, &mut stream(1)).unwrap_err();
        assert!(matches!(err, Error::ActionOutOfRange { action: 10, actions: 10 }));
    }

    #[test]
    fn empirical_rate_of_e1_leader() {
        let env = Preset::E1.environment();
        let mut rng = stream(2024);
        let n = 1_000_000;
        let hits = (0..n)
            .filter(|_| env.respond(0, &mut rng).unwrap().is_reward())
            .count();
        let mean = hits as f64 / n as f64;
        assert!((0.648..=0.652).contains(&mean), "{mean}");
    }

    #[test]
    fn frequency_within_four_sigma() {
        let n = 100_000;
        for (k, &c) in [0.05, 0.25, 0.5, 0.84, 0.97].iter().enumerate() {
            let env = Environment::new("f", vec![c, 0.0]).unwrap();
            let mut rng = stream(k as u64);
            let hits = (0..n)
                .filter(|_| env.respond(0, &mut rng).unwrap().is_reward())
                .count();
            let rate = hits as f64 / n as f64;
            let bound = 4.0 * (c * (1.0 - c) / n as f64).sqrt();
            assert!((rate - c).abs() <= bound, "c={c} rate={rate}");
        }
    }

    #[test]
    fn respond_consumes_one_draw() {
        let env = Preset::E2.environment();
        let mut a = stream(9);
        let mut b = stream(9);
        env.respond(3, &mut a).unwrap();
        let _: f64 = b.gen();
        assert_eq!(a.gen::<u64>(), b.gen::<u64>());
    }

    #[test]
    fn parse_accepts_commas_and_newlines() {
        let env = Environment::parse("x", "0.9, 0.1\n0.5\n\n# comment\n0.25,\n").unwrap();
        assert_eq!(env.reward_probabilities(), &[0.9, 0.1, 0.5, 0.25]);
        assert_eq!(env.optimal_index(), 0);
    }

    #[test]
    fn parse_rejects_bad_values() {
        assert!(Environment::parse("x", "0.5, 1.2").is_err());
        assert!(Environment::parse("x", "-0.1, 0.3").is_err());
        assert!(Environment::parse("x", "0.5, abc").is_err());
        assert!(Environment::parse("x", "0.5").is_err());
    }

    #[test]
    fn ties_break_to_lowest_index() {
        let env = Environment::new("t", vec![0.2, 0.7, 0.7]).unwrap();
        assert_eq!(env.optimal_index(), 1);
    }
}
