//! Acceptance battery: every contract criterion at its stated tolerance,
//! one pass/fail line per criterion.
//!
//! Run with `cargo test -p callias-core --test acceptance -- --nocapture`
//! to see the lines; the CLI `selftest` command prints the same battery.

use callias_core::acceptance::{self, CriterionResult};

const SEED: u64 = 0xCA111A5;

fn check(result: CriterionResult) {
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_01_equivariant_exact() {
    check(acceptance::criterion_equivariant_exact(SEED));
}

#[test]
fn criterion_02_equivariant_numeric() {
    check(acceptance::criterion_equivariant_numeric(SEED));
}

#[test]
fn criterion_03_sphere_spectrum() {
    check(acceptance::criterion_sphere_spectrum(SEED));
}

#[test]
fn criterion_04_k_alpha_contract() {
    check(acceptance::criterion_k_alpha(SEED));
}

#[test]
fn criterion_05_green_operator() {
    check(acceptance::criterion_green(SEED));
}

#[test]
fn criterion_06_radial_fredholm() {
    check(acceptance::criterion_radial_fredholm(SEED));
}

#[test]
fn criterion_07_boundary_chern() {
    check(acceptance::criterion_chern(SEED));
}

#[test]
fn criterion_08_main_theorem() {
    check(acceptance::criterion_main_theorem(SEED));
}

#[test]
fn criterion_09_hopf_correspondence() {
    check(acceptance::criterion_hopf(SEED));
}

#[test]
fn criterion_10_kernel_closed_forms() {
    check(acceptance::criterion_kernel_closed_forms(SEED));
}
