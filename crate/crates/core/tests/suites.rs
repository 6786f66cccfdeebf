use scarmat_core::checks::{run_all, run_suite, Suite, DEFAULT_SEED};

#[test]
fn full_suite_passes_at_seven() {
    let results = run_all(7, DEFAULT_SEED, &[]).unwrap();
    assert!(results.len() > 20);
    for r in &results {
        assert!(r.passed, "{} {} residual {:e}", r.suite, r.name, r.residual);
        assert!(r.residual < 1e-10 || r.tolerance >= 1e-10);
    }
}

#[test]
fn rerun_is_identical() {
    let a = run_all(7, DEFAULT_SEED, &[Suite::Scar]).unwrap();
    let b = run_all(7, DEFAULT_SEED, &[Suite::Scar]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn even_dimension_needs_weyl_skipped() {
    let weyl = run_suite(Suite::Weyl, 8, DEFAULT_SEED).unwrap();
    assert!(weyl.iter().any(|r| !r.passed));
    let rest = run_all(8, DEFAULT_SEED, &[Suite::Weyl]).unwrap();
    assert!(rest.iter().all(|r| r.passed));
    assert!(rest.iter().all(|r| r.suite != Suite::Weyl));
}
