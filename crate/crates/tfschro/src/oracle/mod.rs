//! Independent brute-force references used to generate and pin expected
//! values: an extended-precision Mittag-Leffler evaluator, implicit L1
//! time-steppers (linear and semilinear), the exact α = 1 exponential
//! comparator, and refinement-order estimation.
//!
//! Nothing in this module calls `mlf` or `solver`; the only shared crate code
//! is plain data types (grids, trajectories, spectral containers). The
//! boundary is asserted by an integration test that scans these sources.

pub mod bigfixed;

use std::fmt;

use num_complex::Complex64;

use crate::fracalc::{TimeGrid, Trajectory};
use crate::spectral::{DiagonalOperator, SineCollocation, SpectralField, SpectralVector};

use bigfixed::{exp, ln, lngamma, pi, rgamma, BigComplex, BigFixed, Prec};

#[derive(Clone, Debug, PartialEq)]
pub enum OracleError {
    /// |z| beyond the practical series radius at the requested digits.
    RadiusExceeded { modulus: f64, digits: u32 },
    /// no extended-precision route reaches the requested accuracy
    Unreachable { modulus: f64, alpha: f64 },
    /// inner fixed-point iteration of the implicit step failed
    InnerIteration { node: usize },
    NonMonotone,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::RadiusExceeded { modulus, digits } => {
                write!(f, "|z| = {modulus} beyond the series radius at {digits} digits")
            }
            OracleError::Unreachable { modulus, alpha } => {
                write!(f, "no oracle route at |z| = {modulus}, alpha = {alpha}")
            }
            OracleError::InnerIteration { node } => {
                write!(f, "implicit step failed to converge at node {node}")
            }
            OracleError::NonMonotone => write!(f, "refinement differences are not monotone"),
        }
    }
}

impl std::error::Error for OracleError {}

/// Hard cap on adaptive precision.
const DIGIT_CAP: f64 = 650.0;
/// Spec radius precondition for the plain series oracle.
const SERIES_RADIUS_LIMIT: f64 = 60.0;

/// f64 log-gamma for scale estimation, local to the oracle (shifted Stirling,
/// independent of the primary path's implementation).
fn lgamma_est(mut x: f64) -> f64 {
    let mut corr = 0.0;
    while x < 12.0 {
        corr += x.ln();
        x += 1.0;
    }
    const C: [f64; 4] = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut s = (x - 0.5) * x.ln() - x + 0.9189385332046727;
    let mut p = inv;
    for c in C {
        s += c * p;
        p *= inv2;
    }
    s - corr
}

/// Decimal digits cancelled by the series at |z| = r: log10 of the peak term.
fn cancellation_digits(alpha: f64, beta: f64, r: f64) -> f64 {
    if r <= 1.0 {
        return 0.0;
    }
    let lnr = r.ln();
    let mut peak = 0.0f64;
    let mut n = 1usize;
    let mut flat = 0usize;
    while n < 4_000_000 {
        let x = alpha * n as f64 + beta;
        if x > 1.0 {
            let lt = n as f64 * lnr - lgamma_est(x);
            if lt > peak {
                peak = lt;
                flat = 0;
            } else {
                flat += 1;
                if flat > 48 {
                    break;
                }
            }
        }
        n += n / 4 + 1;
    }
    peak / std::f64::consts::LN_10
}

fn series_prec(alpha: f64, beta: f64, r: f64, digits: u32) -> Option<(Prec, u32)> {
    let total = digits as f64 + 12.0 + cancellation_digits(alpha, beta, r);
    if total > DIGIT_CAP {
        return None;
    }
    Some((Prec::for_digits(total as u32 + 1), total as u32))
}

/// Direct power-series summation of E_{α,β}(z) in adaptive extended
/// precision, truncated once ten consecutive terms fall below 10^{-digits}.
/// Fails with `RadiusExceeded` when |z| > 60 or when the cancellation at |z|
/// would exceed the precision cap.
pub fn highprec_ml(
    alpha: f64,
    beta: f64,
    z: Complex64,
    digits: u32,
) -> Result<Complex64, OracleError> {
    highprec_ml_big(alpha, beta, z, digits).map(|v| v.to_c64())
}

pub(crate) fn highprec_ml_big(
    alpha: f64,
    beta: f64,
    z: Complex64,
    digits: u32,
) -> Result<BigComplex, OracleError> {
    assert!(alpha > 0.0 && beta.is_finite());
    let r = z.norm();
    if r > SERIES_RADIUS_LIMIT {
        return Err(OracleError::RadiusExceeded {
            modulus: r,
            digits,
        });
    }
    let (prec, _) = series_prec(alpha, beta, r, digits).ok_or(OracleError::RadiusExceeded {
        modulus: r,
        digits,
    })?;
    let zb = BigComplex::from_c64(z, prec);
    let alpha_b = BigFixed::from_f64(alpha, prec);
    let beta_b = BigFixed::from_f64(beta, prec);
    let mut acc = BigComplex::zero(prec);
    let threshold = -(digits as f64);
    let mut small_run = 0;
    let mut n = 0u64;
    // Each term is assembled as (z/ρ)^n · exp(n lnρ - lnΓ(αn+β)): the unit
    // rotation and the bounded real magnitude are both representable where
    // z^n and 1/Γ separately over/underflow the fixed-point range, and no
    // error chains from term to term through a running product.
    const DIRECT_X: f64 = 2.0;
    const DIRECT_N: u64 = 400;
    let (unit, ln_rho) = if r > 0.0 {
        let rho = BigFixed::from_f64(r, prec);
        let inv = rho.recip();
        (zb.scale(&inv), ln(&rho))
    } else {
        (BigComplex::one(prec), BigFixed::zero(prec))
    };
    let mut zp = BigComplex::one(prec); // z^n during the direct phase
    let mut unitp: Option<BigComplex> = None; // (z/ρ)^n afterwards
    loop {
        let xf = alpha * n as f64 + beta;
        let x = alpha_b.mul_small(n).add(&beta_b);
        let term = if xf <= DIRECT_X && n <= DIRECT_N {
            let t = zp.scale(&rgamma(&x, prec));
            zp = zp.mul(&zb);
            t
        } else {
            let up = match unitp.take() {
                Some(u) => u,
                // enter the scaled phase: (z/ρ)^n = z^n · exp(-n lnρ)
                None => zp.scale(&exp(&ln_rho.mul_small(n).neg())),
            };
            let mag = exp(&ln_rho.mul_small(n).sub(&lngamma(&x, prec)));
            let t = up.scale(&mag);
            unitp = Some(up.mul(&unit));
            t
        };
        acc = acc.add(&term);
        match term.log10_abs() {
            Some(l) if l >= threshold => small_run = 0,
            _ => {
                small_run += 1;
                if small_run >= 10 {
                    break;
                }
            }
        }
        n += 1;
        if n > 2_000_000 {
            return Err(OracleError::RadiusExceeded {
                modulus: r,
                digits,
            });
        }
    }
    Ok(acc)
}

/// Slowest decay rate |cos θ| among the exponential directions
/// θ_m = (arg z + 2πm)/α of E_{α,β}; None when a direction is marginal or
/// growing directions aside, nothing decays.
fn ray_decay_rate(alpha: f64, arg: f64) -> Option<f64> {
    let mut c_min = f64::INFINITY;
    for m in -2i32..=2 {
        let theta = (arg + 2.0 * std::f64::consts::PI * m as f64) / alpha;
        let c = theta.cos();
        if c < -1e-9 {
            c_min = c_min.min(-c);
        }
    }
    if c_min.is_finite() {
        Some(c_min)
    } else {
        None
    }
}

/// Extended-precision algebraic asymptotic sum, admissible only deep in the
/// regime where the optimal-truncation error and the slowest hidden
/// exponential e^{-c·|z|^{1/α}} are both below 10^{-digits}.
fn ep_asymptotic(
    alpha: f64,
    beta: f64,
    z: Complex64,
    digits: u32,
) -> Result<BigComplex, OracleError> {
    let r = z.norm();
    let y = r.powf(1.0 / alpha);
    let need_nats = (digits as f64 + 2.0) * std::f64::consts::LN_10 * 1.05;
    let rate = ray_decay_rate(alpha, z.arg());
    match rate {
        Some(c) if c * y >= need_nats => {}
        _ => return Err(OracleError::Unreachable { modulus: r, alpha }),
    }
    // optimal truncation scan in f64 logs
    let lnr = r.ln();
    let mut best = (0usize, f64::INFINITY);
    let mut k = 1usize;
    while k < 600 {
        let x = beta - alpha * k as f64;
        // |1/Γ(x)| via reflection in logs (skip near-poles; they only help)
        let frac = (x - x.round()).abs();
        if frac > 1e-9 {
            let lc = if x > 0.5 {
                -lgamma_est(x)
            } else {
                (std::f64::consts::PI * x).sin().abs().ln() + lgamma_est(1.0 - x)
                    - std::f64::consts::PI.ln()
            };
            let lt = lc - k as f64 * lnr;
            if lt < best.1 {
                best = (k, lt);
            }
            if lt > best.1 + 40.0 {
                break;
            }
        }
        k += 1;
    }
    if best.1 > -(digits as f64 + 2.0) * std::f64::consts::LN_10 {
        return Err(OracleError::Unreachable { modulus: r, alpha });
    }
    let prec = Prec::for_digits(digits + 14);
    let alpha_b = BigFixed::from_f64(alpha, prec);
    let beta_b = BigFixed::from_f64(beta, prec);
    let zinv = BigComplex::from_c64(z, prec).recip();
    let mut zp = BigComplex::one(prec);
    let mut acc = BigComplex::zero(prec);
    for k in 1..=best.0 {
        zp = zp.mul(&zinv);
        let x = beta_b.sub(&alpha_b.mul_small(k as u64));
        let c = rgamma(&x, prec);
        if !c.is_zero() {
            acc = acc.add(&zp.scale(&c).scale(&BigFixed::from_f64(-1.0, prec)));
        }
    }
    Ok(acc)
}

/// Reference Mittag-Leffler value at the requested decimal accuracy,
/// dispatching between the adaptive-precision series and the deep asymptotic
/// regime. This is the acceptance-suite oracle; `highprec_ml` is the plain
/// series with its radius contract.
pub fn reference_ml(
    alpha: f64,
    beta: f64,
    z: Complex64,
    digits: u32,
) -> Result<Complex64, OracleError> {
    let r = z.norm();
    if r <= 1.0 {
        return highprec_ml(alpha, beta, z, digits);
    }
    // the deep-asymptotic route is admissible only where it is certainly
    // accurate, and there it is far cheaper than the adaptive series
    if let Ok(v) = ep_asymptotic(alpha, beta, z, digits) {
        return Ok(v.to_c64());
    }
    if r <= SERIES_RADIUS_LIMIT {
        highprec_ml(alpha, beta, z, digits)
    } else {
        Err(OracleError::Unreachable { modulus: r, alpha })
    }
}

/// Γ(x) at `digits` accuracy, for cross-checking the primary gamma.
pub fn highprec_gamma(x: f64, digits: u32) -> f64 {
    let prec = Prec::for_digits(digits);
    if x >= 0.5 {
        exp(&lngamma(&BigFixed::from_f64(x, prec), prec)).to_f64()
    } else {
        // Γ(x) = π / (sin(πx) Γ(1-x))
        let s = bigfixed::sinpi(&BigFixed::from_f64(x, prec));
        let g = exp(&lngamma(&BigFixed::from_f64(1.0 - x, prec), prec));
        pi(prec).div(&s.mul(&g)).to_f64()
    }
}

// ---------------------------------------------------------------------------
// L1 time steppers and the classical comparator
// ---------------------------------------------------------------------------

/// Implicit L1 stepping for one mode: ∂_t^α u + iλ u = f, u(0) = u0.
pub fn l1_linear(alpha: f64, lambda: f64, f: &Trajectory, u0: Complex64) -> Trajectory {
    assert!(alpha > 0.0 && alpha < 1.0);
    let grid = f.grid;
    let n = grid.steps();
    let h = grid.spacing();
    // h^{-α}/Γ(2-α), with Γ from the oracle's own machinery
    let prec = Prec::for_digits(30);
    let g2a = exp(&lngamma(&BigFixed::from_f64(2.0 - alpha, prec), prec)).to_f64();
    let c = h.powf(-alpha) / g2a;
    let b: Vec<f64> = (0..n)
        .map(|j| ((j + 1) as f64).powf(1.0 - alpha) - (j as f64).powf(1.0 - alpha))
        .collect();
    let mut u = vec![u0; n + 1];
    for k in 1..=n {
        // c·Σ_{j=0}^{k-1} b_j (u_{k-j} - u_{k-j-1}) + iλ u_k = f_k
        let mut hist = Complex64::new(0.0, 0.0);
        for j in 1..k {
            hist += b[j] * (u[k - j] - u[k - j - 1]);
        }
        let rhs = f.values[k] - c * hist + c * u[k - 1];
        u[k] = rhs / (c + Complex64::i() * lambda);
    }
    Trajectory { grid, values: u }
}

/// Exact exponential integrator for the classical (α = 1) mode equation
/// u' + iλu = f with piecewise-linear f. Conserves |u| exactly when f = 0.
pub fn classical_exact(lambda: f64, f: &Trajectory, u0: Complex64) -> Trajectory {
    let grid = f.grid;
    let n = grid.steps();
    let h = grid.spacing();
    let z = -Complex64::i() * lambda * h;
    let ez = z.exp();
    // φ1 = (e^z - 1)/z, φ2 = (e^z - 1 - z)/z², series for small |z|
    let (phi1, phi2) = if z.norm() > 1e-4 {
        ((ez - 1.0) / z, (ez - 1.0 - z) / (z * z))
    } else {
        let mut p1 = Complex64::new(1.0, 0.0);
        let mut p2 = Complex64::new(0.5, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..=8 {
            term *= z / k as f64;
            p1 += term / (k + 1) as f64;
            p2 += term / ((k + 1) * (k + 2)) as f64;
        }
        (p1, p2)
    };
    let mut u = vec![u0; n + 1];
    for k in 0..n {
        // u_{k+1} = e^{-iλh} u_k + h[(φ1-φ2) f_k + φ2 f_{k+1}]
        u[k + 1] = ez * u[k] + h * ((phi1 - phi2) * f.values[k] + phi2 * f.values[k + 1]);
    }
    Trajectory { grid, values: u }
}

/// Implicit L1 stepper for the semilinear system ∂_t^α(u-u0) - iAu = F(u)
/// with a pointwise nonlinearity applied on the shared sine collocation grid.
/// Each step solves its implicit relation by fixed point (≤ 20 inner
/// iterations at tolerance 1e-12).
pub fn l1_semilinear(
    alpha: f64,
    operator: &DiagonalOperator,
    grid: TimeGrid,
    u0: &SpectralVector,
    nonlinearity: impl Fn(Complex64) -> Complex64,
) -> Result<SpectralField, OracleError> {
    assert!(alpha > 0.0 && alpha < 1.0);
    let m = operator.modes();
    assert_eq!(u0.len(), m);
    let n = grid.steps();
    let h = grid.spacing();
    let prec = Prec::for_digits(30);
    let g2a = exp(&lngamma(&BigFixed::from_f64(2.0 - alpha, prec), prec)).to_f64();
    let c = h.powf(-alpha) / g2a;
    let b: Vec<f64> = (0..n)
        .map(|j| ((j + 1) as f64).powf(1.0 - alpha) - (j as f64).powf(1.0 - alpha))
        .collect();
    let dst = SineCollocation::new(m);
    let mut field = SpectralField::zeros(grid, m);
    for (mode, &c0) in u0.coeffs.iter().enumerate() {
        field.set(mode, 0, c0);
    }
    // F(u) in spectral coordinates through the collocation grid
    let apply_f = |coeffs: &[Complex64]| -> Vec<Complex64> {
        let phys = dst.to_physical(coeffs);
        let fu: Vec<Complex64> = phys.iter().map(|&v| nonlinearity(v)).collect();
        dst.to_spectral(&fu)
    };
    let mut current: Vec<Complex64> = u0.coeffs.clone();
    for k in 1..=n {
        // history per mode
        let mut hist = vec![Complex64::new(0.0, 0.0); m];
        for (mode, slot) in hist.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..k {
                acc += b[j] * (field.at(mode, k - j) - field.at(mode, k - j - 1));
            }
            *slot = acc;
        }
        // fixed point on u_k: (c + iλ_n) u_k = c u_{k-1} - c hist + F_n(u_k)
        let mut guess = current.clone();
        let mut converged = false;
        for _ in 0..20 {
            let fu = apply_f(&guess);
            let mut next = Vec::with_capacity(m);
            let mut delta = 0.0f64;
            let mut scale = 0.0f64;
            for mode in 0..m {
                let lam = operator.eigenvalue(mode);
                let rhs = c * field.at(mode, k - 1) - c * hist[mode] + fu[mode];
                let v = rhs / (c + Complex64::i() * lam);
                delta += (v - guess[mode]).norm_sqr();
                scale += v.norm_sqr();
                next.push(v);
            }
            guess = next;
            if delta.sqrt() <= 1e-12 * scale.sqrt().max(1e-30) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(OracleError::InnerIteration { node: k });
        }
        for (mode, &v) in guess.iter().enumerate() {
            field.set(mode, k, v);
        }
        current = guess;
    }
    Ok(field)
}

/// Order estimate from three successive refinements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrderEstimate {
    Order(f64),
    /// successive values identical (already converged)
    Converged,
}

/// log2 of the successive-difference ratio for values at N, 2N, 4N.
pub fn refinement_order(v_n: f64, v_2n: f64, v_4n: f64) -> Result<OrderEstimate, OracleError> {
    let d1 = v_2n - v_n;
    let d2 = v_4n - v_2n;
    if d1 == 0.0 && d2 == 0.0 {
        return Ok(OrderEstimate::Converged);
    }
    if d2 == 0.0 {
        return Ok(OrderEstimate::Converged);
    }
    let ratio = d1 / d2;
    if ratio <= 0.0 {
        return Err(OracleError::NonMonotone);
    }
    Ok(OrderEstimate::Order(ratio.log2()))
}

/// Order estimate from error norms at N and 2N (against an independent
/// reference).
pub fn error_order(e_n: f64, e_2n: f64) -> f64 {
    (e_n / e_2n).log2()
}

/// Independent 4-fold discrete convolution of the sampled power kernel
/// t^{α-1}: midpoint rule with exact-moment treatment of the singular end
/// cells. Only the scaling exponents of the iterated kernels are assumed,
/// never the Γ-constants under test.
pub fn discrete_selfconv4(alpha: f64, t_eval: f64, n: usize) -> f64 {
    let h = t_eval / n as f64;
    let mid = |j: usize| (j as f64 + 0.5) * h;
    let k_at = |s: f64| -> f64 { s.powf(alpha - 1.0) };
    let mut c2 = vec![0.0f64; n];
    for (i, slot) in c2.iter_mut().enumerate() {
        let x = mid(i);
        let mut acc = 0.0;
        let left = h.min(x);
        acc += left.powf(alpha) / alpha * k_at(x - 0.5 * left);
        for j in 1..i {
            acc += h * k_at(mid(j)) * k_at(x - mid(j));
        }
        if i >= 1 {
            let w = x - i as f64 * h;
            acc += w.powf(alpha) / alpha * k_at(x - 0.5 * w);
        }
        *slot = acc;
    }
    let mut c4 = 0.0;
    for j in 1..n - 1 {
        c4 += h * c2[j] * c2[n - 1 - j];
    }
    let smooth0 = c2[0] / mid(0).powf(2.0 * alpha - 1.0);
    c4 + 2.0 * (h.powf(2.0 * alpha) / (2.0 * alpha) * smooth0 * c2[n - 1])
}
