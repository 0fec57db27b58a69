//! Solve ∂ₜᵅ(u-u₀) - iAu = f on the Dirichlet Laplacian and validate the
//! result two independent ways: plugging it back into the mode equation
//! through the L1 derivative, and comparing against the implicit L1 stepper.
//!
//!     cargo run --release --example linear_solve

use num_complex::Complex64;
use tfschro::fracalc::{caputo_derivative, lp_norm, TimeGrid, Trajectory};
use tfschro::maxreg::EnsembleSpec;
use tfschro::oracle;
use tfschro::solver::{solve_full, SolveConfig};
use tfschro::spectral::DiagonalOperator;

fn main() {
    let alpha = 0.6;
    let grid = TimeGrid::new(1.0, 1024).unwrap();
    let operator = DiagonalOperator::dirichlet_laplacian_1d(16);
    let cfg = SolveConfig::new(alpha, grid, operator).unwrap();

    let ens = EnsembleSpec::new(1, 7);
    let u0 = ens.vector(0, cfg.operator());
    let f = ens.field(1, grid, cfg.operator());
    let u = solve_full(&cfg, &u0, &f).unwrap();

    println!("alpha = {alpha}, dirichlet_laplacian_1d(16), N = {}", grid.steps());
    println!("u(0) snapshot norm  = {:.6}", u.h_norm_at(0));
    println!("u(T) snapshot norm  = {:.6}", u.h_norm_at(grid.steps()));

    // residual of the mode equation via the independent L1 derivative
    let mut residual_sq = 0.0;
    for m in 0..16 {
        let traj = Trajectory::new(grid, u.mode(m).to_vec()).unwrap();
        let d = caputo_derivative(alpha, &traj, u0.coeffs[m]).unwrap();
        let r = Trajectory::new(
            grid,
            (0..grid.len())
                .map(|k| {
                    d.values[k] + Complex64::i() * cfg.operator().eigenvalue(m) * u.at(m, k)
                        - f.at(m, k)
                })
                .collect(),
        )
        .unwrap();
        residual_sq += lp_norm(2.0, &r).powi(2);
    }
    println!("mode-equation residual (L2, all modes) = {:.3e}", residual_sq.sqrt());

    // cross-check the first mode against the independent stepper
    let ftraj = Trajectory::new(grid, f.mode(0).to_vec()).unwrap();
    let v = oracle::l1_linear(alpha, cfg.operator().eigenvalue(0), &ftraj, u0.coeffs[0]);
    let dev: f64 = (0..grid.len())
        .map(|k| (u.at(0, k) - v.values[k]).norm())
        .fold(0.0, f64::max)
        / (0..grid.len()).map(|k| u.at(0, k).norm()).fold(0.0, f64::max);
    println!("mode-1 deviation from the L1 stepper   = {:.3e} (relative sup)", dev);
}
