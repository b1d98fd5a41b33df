//! Defining an environment from text and stepping an automaton by hand.
//!
//! cargo run --release --example custom_environment

use learning_automata::experiment::{run_batch, Convergence, Parallelism};
use learning_automata::rng::stream;
use learning_automata::{Automaton, AutomatonConfig, Environment, Scheme};

fn main() -> learning_automata::Result<()> {
    // Same format as a `.env.csv` file.
    let env = Environment::parse("close-call", "0.72, 0.70\n0.40\n0.10\n")?;
    let config = AutomatonConfig::new(Scheme::Dca, env.actions(), 60, 10.0);

    let mut rng = stream(2);
    let mut la = Automaton::initialize(config, &env, &mut rng)?;
    while la.converged_action(0.999).is_none() {
        let step = la.step(&env, &mut rng);
        if let Some(change) = step.leader_change {
            if la.iterations() < 80 {
                println!(
                    "t={:>3}: leader {} -> {} moved {:.3}",
                    la.iterations(),
                    change.from + 1,
                    change.to + 1,
                    (1.0 - config.mu) * change.from_before
                );
            }
        }
    }
    println!(
        "converged to action {} after {} iterations",
        la.converged_action(0.999).unwrap() + 1,
        la.iterations()
    );

    for scheme in Scheme::ALL {
        let config = AutomatonConfig { scheme, ..config };
        let s = run_batch(&config, &env, &Convergence::default(), 2_000, 9, Parallelism::Auto)?;
        println!(
            "{scheme}: accuracy {:.3}, mean {:.0} iterations",
            s.accuracy,
            s.mean_iterations.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
