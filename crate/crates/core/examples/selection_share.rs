//! Percentage of selections that went to each E1 action before convergence.
//!
//! cargo run --release --example selection_share [replications]

use learning_automata::experiment::{run_replications, selection_histogram, Convergence, Parallelism};
use learning_automata::reference::best_parameters;
use learning_automata::{AutomatonConfig, Preset, Scheme};

fn main() -> learning_automata::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let env = Preset::E1.environment();
    println!("action {}", (1..=env.actions()).map(|a| format!("{a:>6}")).collect::<String>());
    for scheme in Scheme::ALL {
        let best = best_parameters(scheme, Preset::E1);
        let config = AutomatonConfig::new(scheme, env.actions(), best.resolution, best.gamma);
        let runs = run_replications(&config, &env, &Convergence::default(), reps, 11, Parallelism::Auto)?;
        let shares = selection_histogram(runs.iter().map(|r| r.selections.as_slice()))?;
        println!("{scheme:<6} {}", shares.iter().map(|s| format!("{s:>6.2}")).collect::<String>());
    }
    Ok(())
}
