//! The fractional order breaks unitarity: for α < 1 a single mode loses
//! mass, while the classical α = 1 evolution conserves it exactly. Beyond
//! the short-horizon monotone regime the modulus can even turn around and
//! grow for a while — both behaviors are printed here.
//!
//!     cargo run --release --example dissipation

use num_complex::Complex64;
use tfschro::fracalc::{TimeGrid, Trajectory};
use tfschro::oracle;
use tfschro::solver::{solve_homogeneous, SolveConfig};
use tfschro::spectral::{DiagonalOperator, SpectralVector};

fn main() {
    let lambda = std::f64::consts::PI * std::f64::consts::PI;
    let grid = TimeGrid::new(1.0, 16).unwrap();

    print!("{:>6}", "t");
    for alpha in [0.3, 0.5, 0.8] {
        print!("  |u| α={alpha}");
    }
    println!("  |u| α=1 (exact)");

    let mut columns: Vec<Vec<f64>> = Vec::new();
    for alpha in [0.3, 0.5, 0.8] {
        let cfg =
            SolveConfig::new(alpha, grid, DiagonalOperator::new(vec![lambda]).unwrap()).unwrap();
        let u0 = SpectralVector {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        };
        let u = solve_homogeneous(&cfg, &u0).unwrap();
        columns.push((0..grid.len()).map(|k| u.at(0, k).norm()).collect());
    }
    let classical = oracle::classical_exact(lambda, &Trajectory::zeros(grid), Complex64::new(1.0, 0.0));

    for k in 0..grid.len() {
        print!("{:>6.3}", grid.node(k));
        for col in &columns {
            print!("  {:>9.6}", col[k]);
        }
        println!("  {:>9.6}", classical.values[k].norm());
    }

    // the turnaround: |E_{0.8,1}(-iy)| reaches a local minimum near y ≈ 4.28
    // and then grows again for a while ("dissipate or accumulate")
    println!("\nmodulus turnaround at α = 0.8 (y = λ t^α):");
    let p = tfschro::MLParams::new(0.8, 1.0).unwrap();
    for y in [3.0, 4.0, 4.28, 4.8, 5.6, 7.0] {
        let v = tfschro::mlf::ml_eval(p, Complex64::new(0.0, -y)).unwrap();
        println!("  y = {y:>5.2}: |E| = {:.6}", v.value.norm());
    }
}
