//! Monte-Carlo estimate of the maximal-regularity constant
//! sup_f (‖∂ₜᵅu‖_{L^p} + ‖Au‖_{L^p}) / ‖f‖_{L^p}: stable under refining the
//! grid and enlarging the spectrum, and growing toward α = 1, where maximal
//! regularity fails for the classical Schrödinger equation.
//!
//!     cargo run --release --example mr_constant

use tfschro::fracalc::TimeGrid;
use tfschro::maxreg::{estimate_mr_constant, EnsembleSpec};
use tfschro::solver::SolveConfig;
use tfschro::spectral::DiagonalOperator;

fn main() {
    let grid = TimeGrid::new(1.0, 192).unwrap();
    let operator = DiagonalOperator::dirichlet_laplacian_1d(32);
    let extended = DiagonalOperator::dirichlet_laplacian_1d(64);
    let ens = EnsembleSpec::new(40, 2718);

    println!("MR constant estimates (p = 2, ensemble 40, N = 192, M = 32):\n");
    println!(
        "{:>6} {:>12} {:>16} {:>8}",
        "alpha", "C_estimate", "stability Δ", "stable"
    );
    for alpha in [0.3, 0.5, 0.7, 0.9, 0.95] {
        let cfg = SolveConfig::new(alpha, grid, operator.clone()).unwrap();
        let r = estimate_mr_constant(&cfg, 2.0, &ens, Some(&extended));
        println!(
            "{:>6.2} {:>12.4} {:>15.2}% {:>8}",
            alpha,
            r.constant_estimate,
            100.0 * r.lhs,
            r.passed
        );
    }
    println!("\nThe growth toward α → 1 mirrors the divergence of I(α): the");
    println!("classical limit has no maximal regularity on this operator class.");
}
