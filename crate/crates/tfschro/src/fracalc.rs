//! Fractional calculus on uniform time grids: the Riemann-Liouville integral
//! J^α by product integration (piecewise-linear data against exact moments of
//! the singular weight), its exact discrete inverse J^{-α} by forward
//! substitution, the L1 Caputo derivative, and the L^p / weak-L^p / W_{α,p}
//! norms built on them.
//!
//! The discrete J^α and J^{-α} are triangular inverses of each other by
//! construction, so round trips are exact to rounding; the L1 derivative is a
//! second, independent discretization used for cross-validation.

use std::fmt;

use num_complex::Complex64;

use crate::dd::{dd_lngamma, Dd};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self, FracError> {
        if !(horizon > 0.0) || steps == 0 {
            return Err(FracError::BadGrid { horizon, steps });
        }
        Ok(TimeGrid { horizon, steps })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of nodes, steps + 1.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        self.horizon * k as f64 / self.steps as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |k| self.node(k))
    }

    /// Same horizon with twice the steps.
    pub fn refined(&self) -> TimeGrid {
        TimeGrid {
            horizon: self.horizon,
            steps: self.steps * 2,
        }
    }
}

/// One complex-valued mode sampled on a grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub values: Vec<Complex64>,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, values: Vec<Complex64>) -> Result<Self, FracError> {
        if values.len() != grid.len() {
            return Err(FracError::ShapeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Trajectory { grid, values })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Trajectory {
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid,
        }
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> Complex64) -> Self {
        Trajectory {
            values: grid.nodes().map(f).collect(),
            grid,
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Trajectory {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FracError {
    BadGrid { horizon: f64, steps: usize },
    ShapeMismatch { expected: usize, got: usize },
    BadOrder { alpha: f64 },
    Overflow { what: &'static str },
}

impl fmt::Display for FracError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FracError::BadGrid { horizon, steps } => {
                write!(f, "invalid grid: horizon={horizon}, steps={steps}")
            }
            FracError::ShapeMismatch { expected, got } => {
                write!(f, "trajectory length {got} does not match grid ({expected} nodes)")
            }
            FracError::BadOrder { alpha } => write!(f, "fractional order alpha={alpha} out of range"),
            FracError::Overflow { what } => write!(f, "overflow guard tripped in {what}"),
        }
    }
}

impl std::error::Error for FracError {}

/// ln Γ(x) for x > 0 at f64 accuracy.
pub(crate) fn gamma_ln_f64(x: f64) -> f64 {
    dd_lngamma(Dd::from_f64(x)).to_f64()
}

/// m^p - (m-1)^p without cancellation (relative accuracy ~1e-16 even for
/// large m).
pub(crate) fn power_diff(p: f64, m: usize) -> f64 {
    if m == 1 {
        return 1.0;
    }
    let m = m as f64;
    -m.powf(p) * (p * (-1.0 / m).ln_1p()).exp_m1()
}

/// Product-integration weights for ∫ (t-s)^{α-1} v(s) ds with piecewise-linear
/// v: on the m-th subinterval back from t, `old` multiplies the earlier node
/// and `new` the later one. Shared by J^α and the solver's kernel convolution.
pub(crate) struct ProductWeights {
    pub old: Vec<f64>,
    pub new: Vec<f64>,
}

pub(crate) fn product_weights(alpha: f64, h: f64, n: usize) -> ProductWeights {
    let ha = h.powf(alpha);
    let mut old = Vec::with_capacity(n + 1);
    let mut new = Vec::with_capacity(n + 1);
    old.push(0.0);
    new.push(0.0);
    for m in 1..=n {
        let d_a = power_diff(alpha, m);
        let d_a1 = power_diff(alpha + 1.0, m);
        let mm = m as f64;
        old.push(ha * (d_a1 / (alpha + 1.0) - (mm - 1.0) * d_a / alpha));
        new.push(ha * (mm * d_a / alpha - d_a1 / (alpha + 1.0)));
    }
    ProductWeights { old, new }
}

/// Riemann-Liouville integral J^α v on the trajectory's grid. Exact for
/// affine v; J^α v(0) = 0.
pub fn rl_integral(alpha: f64, v: &Trajectory) -> Trajectory {
    assert!(alpha > 0.0 && alpha <= 1.0, "rl_integral requires alpha in (0,1]");
    let n = v.grid.steps();
    let w = product_weights(alpha, v.grid.spacing(), n);
    let inv_gamma = (-dd_lngamma(Dd::from_f64(alpha))).to_f64().exp();
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 1..=k {
            acc += w.old[m] * v.values[k - m] + w.new[m] * v.values[k - m + 1];
        }
        out[k] = acc * inv_gamma;
    }
    Trajectory {
        grid: v.grid,
        values: out,
    }
}

/// Discrete J^{-α}: solves the triangular system rl_integral(α, w) = v by
/// forward substitution, with the convention w(0) = 0 (W_{α,p} functions
/// vanish at t = 0). Exact inverse of [`rl_integral`] on trajectories with
/// v(0) = 0.
pub fn inverse_rl(alpha: f64, v: &Trajectory) -> Trajectory {
    assert!(alpha > 0.0 && alpha < 1.0, "inverse_rl requires alpha in (0,1)");
    let n = v.grid.steps();
    let w = product_weights(alpha, v.grid.spacing(), n);
    let gamma_alpha = dd_lngamma(Dd::from_f64(alpha)).to_f64().exp();
    let lead = w.new[1];
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in 1..=n {
        let mut acc = gamma_alpha * v.values[k] - w.old[1] * out[k - 1];
        for m in 2..=k {
            acc -= w.old[m] * out[k - m] + w.new[m] * out[k - m + 1];
        }
        out[k] = acc / lead;
    }
    Trajectory {
        grid: v.grid,
        values: out,
    }
}

/// Relative residual of the round trip rl_integral(α, inverse_rl(α, v)) = v;
/// large values signal ill-conditioning of the deconvolution for this data.
pub fn inverse_rl_residual(alpha: f64, v: &Trajectory) -> f64 {
    let w = inverse_rl(alpha, v);
    let back = rl_integral(alpha, &w);
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for k in 1..v.values.len() {
        num += (back.values[k] - v.values[k]).norm_sqr();
        den += v.values[k].norm_sqr();
    }
    if den == 0.0 {
        return 0.0;
    }
    (num / den).sqrt()
}

/// L1-scheme Caputo derivative of u - u0 (node 0 copies node 1 by
/// convention). `u0` is checked against u(0) for consistency; the scheme
/// itself only sees increments of u.
pub fn caputo_derivative(alpha: f64, u: &Trajectory, u0: Complex64) -> Result<Trajectory, FracError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::BadOrder { alpha });
    }
    let scale = u.values.iter().map(|v| v.norm()).fold(u0.norm(), f64::max);
    if (u.values[0] - u0).norm() > 1e-10 * scale.max(1e-300) {
        eprintln!(
            "warning: caputo_derivative: u(0) = {} inconsistent with u0 = {}",
            u.values[0], u0
        );
    }
    let n = u.grid.steps();
    let h = u.grid.spacing();
    let c = h.powf(-alpha) * (-dd_lngamma(Dd::from_f64(2.0 - alpha))).to_f64().exp();
    let b: Vec<f64> = (0..n).map(|j| power_diff(1.0 - alpha, j + 1)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..k {
            acc += b[j] * (u.values[k - j] - u.values[k - j - 1]);
        }
        out[k] = c * acc;
    }
    out[0] = out[1];
    Ok(Trajectory {
        grid: u.grid,
        values: out,
    })
}

/// Composite-trapezoid L^p norm over the grid; the max over nodes for
/// p = infinity.
pub fn lp_norm(p: f64, v: &Trajectory) -> f64 {
    assert!(p >= 1.0, "lp_norm requires p >= 1");
    if p.is_infinite() {
        return v.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let h = v.grid.spacing();
    let n = v.grid.steps();
    let mut s = 0.5 * (v.values[0].norm().powf(p) + v.values[n].norm().powf(p));
    for k in 1..n {
        s += v.values[k].norm().powf(p);
    }
    (h * s).powf(1.0 / p)
}

/// Weak-L^p quasinorm on the piecewise-constant node interpretation with
/// trapezoid node measures (h/2 at the endpoints): sup over the sorted
/// magnitudes of m_i times the cumulative measure^{1/p}.
pub fn weak_lp_quasinorm(p: f64, v: &Trajectory) -> f64 {
    assert!(p >= 1.0, "weak_lp_quasinorm requires p >= 1");
    let h = v.grid.spacing();
    let n = v.grid.steps();
    let mut mags: Vec<(f64, f64)> = v
        .values
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let w = if k == 0 || k == n { 0.5 * h } else { h };
            (z.norm(), w)
        })
        .collect();
    mags.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut measure = 0.0;
    let mut sup: f64 = 0.0;
    for (m, w) in mags {
        measure += w;
        sup = sup.max(m * measure.powf(1.0 / p));
    }
    sup
}

/// W_{α,p} norm: ‖J^{-α} v‖_{L^p}.
pub fn waps_norm(alpha: f64, p: f64, v: &Trajectory) -> f64 {
    lp_norm(p, &inverse_rl(alpha, v))
}

/// Closed form of the n-fold self-convolution of the power kernel
/// k_α(t) = t^{α-1}: Γ(α)^n / Γ(nα) · t^{nα-1}.
pub fn power_kernel_selfconv(alpha: f64, n: u32, t: f64) -> Result<f64, FracError> {
    assert!(alpha > 0.0 && t > 0.0 && n >= 1);
    let na = alpha * n as f64;
    if na > 170.0 {
        return Err(FracError::Overflow {
            what: "power_kernel_selfconv",
        });
    }
    let ln = dd_lngamma(Dd::from_f64(alpha)).mul_f64(n as f64) - dd_lngamma(Dd::from_f64(na));
    Ok(ln.to_f64().exp() * t.powf(na - 1.0))
}
