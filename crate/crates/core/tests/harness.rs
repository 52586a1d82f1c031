use streamsub::forge::{gen_random_graph, gen_random_points};
use streamsub::harness::{
    dominance_violations, run_experiment, verify_suite, write_csv, AlgoSpec, Bounds, ExperimentConfig, OptMode,
    RunSettings,
};

fn known() -> RunSettings {
    RunSettings {
        opt_mode: OptMode::Known,
        ..RunSettings::default()
    }
}

#[test]
fn two_pass_suite_verifies() {
    let config = ExperimentConfig {
        algos: vec![AlgoSpec::TwoPass],
        ks: vec![2, 3, 4],
        trials: 3,
        settings: known(),
        ..ExperimentConfig::default()
    };
    let mut records = Vec::new();
    for seed in 0..10 {
        records.extend(run_experiment(&gen_random_graph(12, 0.25, seed).unwrap(), &config).unwrap());
    }
    let report = verify_suite(&records, &Bounds::theorems());
    assert_eq!(report.checked.len(), 90);
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn salsa_never_trails_sieve_on_matched_streams() {
    for mode in [OptMode::Known, OptMode::Guessed] {
        let config = ExperimentConfig {
            algos: vec![AlgoSpec::Sieve, AlgoSpec::Salsa],
            ks: vec![2, 3, 4],
            trials: 4,
            settings: RunSettings {
                opt_mode: mode,
                ..RunSettings::default()
            },
            ..ExperimentConfig::default()
        };
        for seed in 0..5 {
            let records = run_experiment(&gen_random_points(10, 2, 3, seed).unwrap(), &config).unwrap();
            assert!(dominance_violations(&records, "salsa", "sieve").is_empty(), "{mode:?} seed {seed}");
        }
    }
}

#[test]
fn evaluations_stay_within_four_per_candidate_element() {
    // Known OPT: sieve holds one candidate, salsa five.
    let bundle = gen_random_graph(14, 0.2, 3).unwrap();
    let config = ExperimentConfig {
        algos: vec![AlgoSpec::Sieve, AlgoSpec::Salsa],
        ks: vec![3],
        trials: 5,
        settings: known(),
        ..ExperimentConfig::default()
    };
    for r in run_experiment(&bundle, &config).unwrap() {
        let g = if r.algo == "salsa" { 5 } else { 1 };
        assert!(r.oracle_calls <= 4 * g * 14, "{} used {} calls", r.algo, r.oracle_calls);
    }
}

#[test]
fn same_seed_same_bytes() {
    let bundle = gen_random_graph(12, 0.3, 7).unwrap();
    let config = ExperimentConfig {
        algos: "sieve,salsa,p-pass:3,greedy".split(',').map(|a| a.parse().unwrap()).collect(),
        ks: vec![2, 3],
        trials: 3,
        base_seed: 99,
        ..ExperimentConfig::default()
    };
    let csv = || {
        let mut buf = Vec::new();
        write_csv(&run_experiment(&bundle, &config).unwrap(), &mut buf).unwrap();
        buf
    };
    assert_eq!(csv(), csv());
}
