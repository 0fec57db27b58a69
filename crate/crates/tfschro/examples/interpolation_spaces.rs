//! The interpolation space 𝒳_{α,p} = (H, D(A))_{1-1/(αp),p} realized through
//! the exact quadratic K-functional of the diagonal couple: limiting
//! behavior of K₂, the λ-scaling exponent θ, and where the homogeneous
//! initial data has to live for full maximal regularity.
//!
//!     cargo run --release --example interpolation_spaces

use tfschro::spectral::{
    da_norm, h_norm, interp_norm, k_functional, DiagonalOperator, SpectralVector,
};

fn main() {
    let a = DiagonalOperator::dirichlet_laplacian_1d(8);
    let mut x = SpectralVector::zeros(8);
    for (n, c) in x.coeffs.iter_mut().enumerate() {
        *c = num_complex::Complex64::new(1.0 / (n as f64 + 1.0), 0.0);
    }

    println!("K-functional of the couple (H, D(A)):");
    println!("  ‖x‖        = {:.6}", h_norm(&x));
    println!("  ‖Ax‖       = {:.6}", da_norm(&a, &x).unwrap());
    for t in [1e-6, 1e-4, 1e-2, 1.0] {
        let k = k_functional(&a, &x, t).unwrap();
        println!("  K₂({t:>7.0e}) = {k:.6e}   K₂/t = {:.6e}", k / t);
    }
    println!("  (K₂ → ‖x‖ as t → ∞; K₂/t → ‖Ax‖ as t → 0)\n");

    let (alpha, p) = (0.6, 3.0);
    let theta = 1.0 - 1.0 / (alpha * p);
    println!("𝒳_(α,p) norm of a single mode scales like λ^θ, θ = {theta:.4}:");
    for lam in [1.0, 4.0, 16.0, 64.0] {
        let op = DiagonalOperator::new(vec![lam]).unwrap();
        let e = SpectralVector::basis(1, 0);
        let v = interp_norm(&op, &e, alpha, p).unwrap();
        println!("  λ = {lam:>4}: ‖e‖_X = {v:.6}   (λ^θ = {:.6})", lam.powf(theta));
    }
    println!("\n‖x‖ ≲ ‖x‖_X ≲ ‖Ax‖ interpolates between base space and domain:");
    println!(
        "  here: {:.4} ≤ {:.4} ≤ {:.4}",
        h_norm(&x),
        interp_norm(&a, &x, alpha, p).unwrap(),
        da_norm(&a, &x).unwrap()
    );
}
