//! One DCA run and one SE_RI run on E1 at their best parameters.
//!
//! cargo run --release --example single_run [seed]

use learning_automata::experiment::{run_until_convergence, Convergence};
use learning_automata::reference::best_parameters;
use learning_automata::{AutomatonConfig, Preset, Scheme};

fn main() -> learning_automata::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let env = Preset::E1.environment();
    for scheme in Scheme::ALL {
        let best = best_parameters(scheme, Preset::E1);
        let config = AutomatonConfig::new(scheme, env.actions(), best.resolution, best.gamma);
        let run = run_until_convergence(&config, &env, &Convergence::default(), seed)?;
        println!(
            "{scheme:>4}: n={} gamma={} -> action {:?} after {} iterations (correct: {})",
            config.resolution,
            config.gamma,
            run.converged_action.map(|a| a + 1),
            run.iterations,
            run.correct
        );
    }
    Ok(())
}
