//! Speed-up of DCA over SE_RI when DCA is tuned to SE_RI's accuracy.
//!
//! cargo run --release --example equal_accuracy [replications]

use learning_automata::experiment::{run_batch, Convergence, Parallelism};
use learning_automata::reference::{best_parameters, equal_accuracy_dca, published_improvement};
use learning_automata::{AutomatonConfig, Preset, Scheme};

fn mean(cell: learning_automata::reference::PublishedCell, reps: u64) -> learning_automata::Result<(f64, f64)> {
    let env = cell.preset.environment();
    let config = AutomatonConfig::new(cell.scheme, env.actions(), cell.resolution, cell.gamma);
    let s = run_batch(&config, &env, &Convergence::default(), reps, 3, Parallelism::Auto)?;
    Ok((s.mean_iterations.unwrap_or(f64::NAN), s.accuracy))
}

fn main() -> learning_automata::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    for preset in Preset::ALL {
        let (dca, dca_acc) = mean(equal_accuracy_dca(preset), reps)?;
        let (seri, seri_acc) = mean(best_parameters(Scheme::SeRi, preset), reps)?;
        println!(
            "{preset}: DCA {dca:.1} (acc {dca_acc:.4}) vs SE_RI {seri:.1} (acc {seri_acc:.4}) -> {:.2}% faster (published {:.2}%)",
            100.0 * (seri - dca) / seri,
            published_improvement(preset)
        );
    }
    Ok(())
}
