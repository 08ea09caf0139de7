use dummett::crosscheck::{run, Config, Depth, Mode, Problem};
use dummett::testing::FaultGuard;
use dummett::Calculus;

#[test]
fn exhaustive_one_variable_four_connectives() {
    let summary = run(&Config::new(1, 4, Mode::Exhaustive)).unwrap();
    assert_eq!(summary.formulas, 1 + 3 + 18 + 135 + 1134);
}

#[test]
fn exhaustive_with_constants() {
    let config = Config { constants: true, ..Config::new(1, 3, Mode::Exhaustive) };
    run(&config).unwrap();
}

#[test]
fn sampled_three_variables() {
    let config = Config::new(3, 8, Mode::Sampled { samples: 5000, seed: 42 });
    let summary = run(&config).unwrap();
    assert_eq!(summary.formulas, 5000);
    assert_eq!(run(&config).unwrap(), summary);
}

#[test]
fn verdict_only_mode() {
    let config = Config { depth: Depth::Verdicts, ..Config::new(2, 5, Mode::Sampled { samples: 2000, seed: 1 }) };
    assert_eq!(run(&config).unwrap().formulas, 2000);
}

#[test]
fn injected_fault_yields_minimal_witness() {
    let _fault = FaultGuard::new();
    let d = run(&Config::new(2, 3, Mode::Sampled { samples: 200, seed: 3 })).unwrap_err();
    assert!(matches!(d.problem, Problem::Verdict { calculus: Calculus::D3, proved: true, oracle_valid: false, .. }));
    assert_eq!(d.witness.connective_count(), 0, "witness {}", d.witness.render());
    assert!(d.to_string().contains("minimized witness"));
}
