//! Acceptance battery: each test runs one criterion of the verification
//! suite end to end and prints its pass/fail line. `cargo test --test
//! acceptance -- --nocapture` shows the citation-tagged details.

use calgrass::registry::Registry;
use calgrass::verify::run_criterion;
use calgrass::DEFAULT_SEED;

fn criterion(id: usize) {
    let reg = Registry::load_default().expect("embedded registry must parse");
    let out = run_criterion(id, DEFAULT_SEED, &reg).expect("criterion id in range");
    println!(
        "{}  {}. {}  [{}]  {}",
        if out.passed { "pass" } else { "FAIL" },
        out.id,
        out.name,
        out.citation,
        out.detail
    );
    assert!(out.passed, "criterion {} ({}): {}", out.id, out.name, out.detail);
}

#[test]
fn c1_sl3_comass_is_one_with_index_4_nullity_5() {
    criterion(1);
}

#[test]
fn c2_sl2_comass_is_one_with_contact_dimension_2() {
    criterion(2);
}

#[test]
fn c3_free_dimensions_are_2_4_2_with_witnesses() {
    criterion(3);
}

#[test]
fn c4_spectral_scenarios_resolve_exactly() {
    criterion(4);
}

#[test]
fn c5_homology_tables_pass_duality_euler_hurewicz() {
    criterion(5);
}

#[test]
fn c6_rings_match_pair_and_pull_back() {
    criterion(6);
}

#[test]
fn c7_surface_geometry_degrees_and_scans() {
    criterion(7);
}

#[test]
fn c8_property_suites_hold() {
    criterion(8);
}
