//! Acceptance suite: every criterion prints one PASS/FAIL line.
//!
//! Lines go straight to the stdout handle so they appear without `--nocapture`.

use std::io::Write;

use lk_sharp::selftest::run_criterion;

fn check(id: usize) {
    let outcome = run_criterion(id);
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", outcome.line()).unwrap();
    out.flush().unwrap();
    drop(out);
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_string_eigenvalues() {
    check(1);
}

#[test]
fn criterion_02_string_closed_form_norms() {
    check(2);
}

#[test]
fn criterion_03_clamped_beam_eigenvalue() {
    check(3);
}

#[test]
fn criterion_04_series_matches_direct_solve() {
    check(4);
}

#[test]
fn criterion_05_monotone_tradeoff_curves() {
    check(5);
}

#[test]
fn criterion_06_sharpness_certificates() {
    check(6);
}

#[test]
fn criterion_07_duality_identity() {
    check(7);
}

#[test]
fn criterion_08_endpoint_conjecture_low_order() {
    check(8);
}

#[test]
fn criterion_09_r4_figure_margins() {
    check(9);
}

#[test]
fn criterion_10_endpoint_inequality_certificates() {
    check(10);
}

#[test]
fn criterion_11_greens_kernel_inverts_operator() {
    check(11);
}

#[test]
fn criterion_12_inequality_sweep() {
    check(12);
}
