use learning_automata::automata::{AutomatonConfig, Scheme};
use learning_automata::env::Preset;
use learning_automata::experiment::{run_batch, Convergence, Parallelism};
use learning_automata::rng::derive_seed;
use learning_automata::tuning::{grid_search, passes_ne_constraint, TuningSpec};

#[test]
fn ne_pass_rate_matches_accuracy() {
    // Passing NE runs in a row happens with probability accuracy^NE.
    let env = Preset::E1.environment();
    let cfg = AutomatonConfig::new(Scheme::Dca, 10, 13, 6.0);
    let stop = Convergence::default();
    let ne = 100;
    let trials = 60;
    let passed = (0..trials)
        .filter(|&k| passes_ne_constraint(&cfg, &env, ne, &stop, derive_seed(404, k)).unwrap())
        .count();
    let accuracy = run_batch(&cfg, &env, &stop, 20_000, 405, Parallelism::Auto)
        .unwrap()
        .accuracy;
    let p = accuracy.powi(ne as i32);
    let expected = p * trials as f64;
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    println!("NE={ne}: {passed}/{trials} passed, expected {expected:.1} ± {sd:.1}");
    assert!((passed as f64 - expected).abs() <= 4.0 * sd + 1.0);
}

#[test]
fn e1_grid_around_published_optimum() {
    let env = Preset::E1.environment();
    let spec = TuningSpec {
        resolutions: (11..=16).collect(),
        gammas: vec![5.0, 6.0, 7.0],
        ..TuningSpec::default()
    };
    let result = grid_search(Scheme::Dca, &env, &spec, 2019, Parallelism::Auto).unwrap();
    let best = result.best().expect("some neighbouring cell passes NE = 750");
    let mean = best.mean_iterations().unwrap();
    println!("best cell n={} gamma={} mean={mean:.1}", best.resolution, best.gamma);
    assert!(best.passed);
    assert!((mean - 377.0).abs() <= 0.1 * 377.0, "{mean}");
}

#[test]
fn finer_resolution_does_not_lose_accuracy() {
    let env = Preset::E1.environment();
    let stop = Convergence::default();
    let accuracy = |n| {
        let cfg = AutomatonConfig::new(Scheme::Dca, 10, n, 6.0);
        run_batch(&cfg, &env, &stop, 4_000, 7, Parallelism::Auto).unwrap().accuracy
    };
    let coarse = accuracy(13);
    let fine = accuracy(40);
    println!("accuracy n=13: {coarse}, n=40: {fine}");
    // Two binomial standard errors at p = 0.998 and 4,000 runs is about 0.0014.
    assert!(fine >= coarse - 0.0015);
}
