//! The committed oracle fixture must match a fresh run of both solvers.

use std::path::PathBuf;

use dwell::oracle::{read_fixture, standard_provenance, standard_reports, FIXTURE_COLUMNS};

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/oracle_equivalence.csv")
}

#[test]
fn fixture_is_reproducible() {
    let text = std::fs::read_to_string(fixture_path()).expect("fixture present; regenerate with `dwell oracle`");
    for line in standard_provenance() {
        assert!(text.contains(&line), "missing provenance line: {line}");
    }
    assert!(text.lines().any(|l| l == FIXTURE_COLUMNS));

    let frozen = read_fixture(&text).unwrap();
    let fresh = standard_reports().unwrap();
    assert_eq!(frozen.len(), fresh.len());
    for (a, b) in frozen.iter().zip(&fresh) {
        assert_eq!(a.quantity, b.quantity);
        assert_eq!((&a.main_grid, &a.oracle_grid), (&b.main_grid, &b.oracle_grid));
        for (x, y) in [(a.main_value, b.main_value), (a.oracle_value, b.oracle_value)] {
            assert!((x - y).abs() <= 1e-10 * y.abs().max(1.0), "{}: frozen {x} fresh {y}", a.quantity);
        }
    }
}
