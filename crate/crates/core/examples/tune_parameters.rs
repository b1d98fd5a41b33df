//! Best-parameter search for DCA on E4 over a small grid, with the NE
//! constraint lowered so the example finishes quickly.
//!
//! cargo run --release --example tune_parameters [NE]

use learning_automata::experiment::Parallelism;
use learning_automata::report::write_grid;
use learning_automata::tuning::{grid_search, TuningSpec};
use learning_automata::{Preset, Scheme};

fn main() -> learning_automata::Result<()> {
    let ne = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(250);
    let spec = TuningSpec {
        resolutions: (6..=16).step_by(2).collect(),
        gammas: vec![3.0, 4.0, 5.0, 6.0],
        required_correct: ne,
        eval_replications: 1_000,
        ..TuningSpec::default()
    };
    let result = grid_search(Scheme::Dca, &Preset::E4.environment(), &spec, 1, Parallelism::Auto)?;
    write_grid(std::io::stdout(), &result)?;
    match result.best() {
        Ok(best) => eprintln!(
            "best: n={} gamma={} mean={:.1}",
            best.resolution,
            best.gamma,
            best.mean_iterations().unwrap_or(f64::NAN)
        ),
        Err(e) => eprintln!("{e}"),
    }
    Ok(())
}
