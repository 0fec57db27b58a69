//! Scan the Mittag-Leffler function along the imaginary ray z = -it and
//! watch the evaluator hand off from the double-double series to the
//! exponentially-improved asymptotic expansion.
//!
//!     cargo run --release --example mlf_scan

use num_complex::Complex64;
use tfschro::mlf::{ml_bound_constant, ml_eval, series_crossover, MLParams};

fn main() {
    let p = MLParams::new(0.5, 0.5).unwrap();
    println!("E_(0.5,0.5)(-it) on a log-spaced ray");
    println!("{:>10} {:>14} {:>14} {:>12} {:>10}", "t", "re", "im", "|E|", "method");
    let mut t = 1e-3;
    while t <= 1e6 {
        let v = ml_eval(p, Complex64::new(0.0, -t)).unwrap();
        println!(
            "{:>10.3e} {:>14.6e} {:>14.6e} {:>12.4e} {:>10}",
            t,
            v.value.re,
            v.value.im,
            v.value.norm(),
            v.method
        );
        t *= 10.0;
    }
    println!();
    println!(
        "series/asymptotic crossover radius R* = {:.3}",
        series_crossover(p)
    );
    println!(
        "ray bound constant C0 = sup (1+t)|E(it)| ~ {:.4} (sampled to t = 1e6)",
        ml_bound_constant(p, 1e6, 2000)
    );
}
