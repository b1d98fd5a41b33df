//! Accuracy and mean iterations for both schemes on E1..E5 at the published
//! best parameters, side by side with the published figures.
//!
//! cargo run --release --example benchmark_table [replications]

use learning_automata::experiment::{run_batch, Convergence, Parallelism};
use learning_automata::reference::BEST_PARAMETERS;
use learning_automata::AutomatonConfig;

fn main() -> learning_automata::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    println!("scheme env    n  gamma  accuracy (pub)     mean iters (pub)");
    for cell in BEST_PARAMETERS {
        let env = cell.preset.environment();
        let config = AutomatonConfig::new(cell.scheme, env.actions(), cell.resolution, cell.gamma);
        let s = run_batch(&config, &env, &Convergence::default(), reps, 1, Parallelism::Auto)?;
        println!(
            "{:<6} {:<3} {:>4} {:>6}  {:.4} ({:.3})    {:>8.1} ({})",
            cell.scheme,
            cell.preset,
            cell.resolution,
            cell.gamma,
            s.accuracy,
            cell.accuracy.unwrap_or(f64::NAN),
            s.mean_iterations.unwrap_or(f64::NAN),
            cell.mean_iterations
        );
    }
    Ok(())
}
