//! Acceptance gate: each test runs one criterion of the built-in
//! verification suite and prints a single pass/fail line.

use hodge_eds::selftest;

fn run(name: &str) {
    let (_, f) = selftest::criteria()
        .into_iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("unknown criterion {name}"));
    match f() {
        Ok(detail) => println!("PASS {name}: {detail}"),
        Err(detail) => {
            println!("FAIL {name}: {detail}");
            panic!("criterion {name} failed: {detail}");
        }
    }
}

#[test]
fn criterion_01_domain_dimensions() {
    run("domain-dimensions");
}

#[test]
fn criterion_02_derived_flag_families() {
    run("derived-flag-families");
}

#[test]
fn criterion_03_flag_termination_sweep() {
    run("flag-termination-sweep");
}

#[test]
fn criterion_04_cartan_test_example() {
    run("cartan-test-example");
}

#[test]
fn criterion_05_polar_rank_normal_form() {
    run("polar-rank-normal-form");
}

#[test]
fn criterion_06_sharp_abelian_bounds() {
    run("sharp-abelian-bounds");
}

#[test]
fn criterion_07_nilpotent_product_coefficients() {
    run("nilpotent-product-coefficients");
}

#[test]
fn criterion_08_curvature_form_identities() {
    run("curvature-form-identities");
}

#[test]
fn criterion_09_middle_class_codimension() {
    run("middle-class-codimension");
}

#[test]
fn criterion_10_plane_class_pipeline() {
    run("plane-class-pipeline");
}

#[test]
fn criterion_11_socle_duality_pairings() {
    run("socle-duality-pairings");
}

#[test]
fn criterion_12_refined_bound_sweep() {
    run("refined-bound-sweep");
}
