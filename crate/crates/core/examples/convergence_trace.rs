//! Optimal-action probability over time for DCA and SE_RI on E1, written as
//! one trace CSV per scheme (initialization plays excluded).
//!
//! cargo run --release --example convergence_trace [seed] [out_dir]

use std::fs::File;
use std::path::PathBuf;

use learning_automata::experiment::{trace_run, Convergence, TraceOptions};
use learning_automata::reference::best_parameters;
use learning_automata::report::write_trace;
use learning_automata::{AutomatonConfig, Preset, Scheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let out_dir = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    let env = Preset::E1.environment();
    for scheme in Scheme::ALL {
        let best = best_parameters(scheme, Preset::E1);
        let config = AutomatonConfig::new(scheme, env.actions(), best.resolution, best.gamma);
        let trace = trace_run(&config, &env, &Convergence::default(), seed, TraceOptions::default())?;
        let lowest = trace
            .snapshots
            .iter()
            .map(|s| s.p_tracked)
            .fold(f64::INFINITY, f64::min);
        let changes = trace.snapshots.iter().filter(|s| s.leader_change.is_some()).count();
        let path = out_dir.join(format!("trace_{scheme}_e1.csv"));
        write_trace(File::create(&path)?, &trace)?;
        println!(
            "{scheme}: {} steps, lowest p1 {lowest:.3}, {changes} leader changes -> {}",
            trace.snapshots.len(),
            path.display()
        );
    }
    Ok(())
}
