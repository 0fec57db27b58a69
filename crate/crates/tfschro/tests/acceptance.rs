//! The acceptance suite as an integration test: one test per criterion, each
//! printing its pass/fail line. `cargo test --test acceptance` is equivalent
//! to the `tfschro accept` subcommand.

use tfschro::accept;

fn check(r: accept::CriterionResult) {
    r.print_line();
    assert!(r.passed, "criterion #{} failed: {}", r.id, r.detail);
}

#[test]
fn criterion_01_ml_oracle() {
    check(accept::criterion_01_ml_oracle());
}

#[test]
fn criterion_02_overlap() {
    check(accept::criterion_02_overlap());
}

#[test]
fn criterion_03_solver_oracle() {
    check(accept::criterion_03_solver_oracle());
}

#[test]
fn criterion_04_mode_residual() {
    check(accept::criterion_04_mode_residual());
}

#[test]
fn criterion_05_coercivity() {
    check(accept::criterion_05_coercivity());
}

#[test]
fn criterion_06_mr_stability() {
    check(accept::criterion_06_mr_stability());
}

#[test]
fn criterion_07_explicit_constant() {
    check(accept::criterion_07_explicit_constant());
}

#[test]
fn criterion_08_homogeneous_decay() {
    check(accept::criterion_08_homogeneous_decay());
}

#[test]
fn criterion_09_mikhlin() {
    check(accept::criterion_09_mikhlin());
}

#[test]
fn criterion_10_i_alpha() {
    check(accept::criterion_10_i_alpha());
}

#[test]
fn criterion_11_dissipation() {
    check(accept::criterion_11_dissipation());
}

#[test]
fn criterion_12_semilinear() {
    check(accept::criterion_12_semilinear());
}

#[test]
fn criterion_13_quasilinear() {
    check(accept::criterion_13_quasilinear());
}

#[test]
fn criterion_14_fk_lemma() {
    check(accept::criterion_14_fk_lemma());
}

#[test]
fn criterion_15_determinism() {
    check(accept::criterion_15_determinism());
}
