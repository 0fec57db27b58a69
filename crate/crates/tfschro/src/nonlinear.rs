//! Fixed-point solvers for the semilinear equation ∂ₜᵅ(u−u₀) − iAu = F(u)
//! and the quasilinear family ∂ₜᵅ(u−u₀) − i𝒜(u)u = 0, realized as Picard
//! iteration of Φ(v) = ℒ(F(v), u₀) with contraction monitoring in the
//! maximal-regularity norm. Divergence and ball escape are reported, never
//! masked: the underlying theorems guarantee contraction only for small T or
//! small data, and the traces are the empirical witness.

use num_complex::Complex64;

use crate::maxreg::{
    estimate_mr_constant, field_da_lp_norm, field_frac_derivative_lp_norm, field_lp_norm,
    EnsembleSpec, RegularityReport,
};
use crate::fracalc::{gamma_ln_f64, inverse_rl, rl_integral, Trajectory};
use crate::solver::{solve_full, solve_homogeneous, SolveConfig, SolverError};
use crate::spectral::{h_norm, interp_norm, SineCollocation, SpectralField, SpectralVector};

/// ‖u‖_{ℳℛ} = ‖u − u(0)‖_{W_{α,p}} + ‖u‖_{L^p(D(A))} + ‖u(0)‖.
pub fn mr_norm(alpha: f64, p: f64, u: &SpectralField, cfg: &SolveConfig) -> f64 {
    assert!(alpha * p > 1.0, "mr_norm requires αp > 1");
    field_frac_derivative_lp_norm(u, alpha, p)
        + field_da_lp_norm(u, cfg.operator(), p)
        + h_norm(&u.snapshot(0))
}

/// Right-hand side F of the semilinear equation, with optional declared
/// Lipschitz structure (ε, C) of hypothesis (H).
pub struct RhsMap<'a> {
    apply: Box<dyn Fn(&SpectralField) -> SpectralField + 'a>,
    pub lipschitz_hint: Option<(f64, f64)>,
}

impl<'a> RhsMap<'a> {
    pub fn new(f: impl Fn(&SpectralField) -> SpectralField + 'a) -> Self {
        RhsMap {
            apply: Box::new(f),
            lipschitz_hint: None,
        }
    }

    pub fn with_lipschitz(mut self, eps: f64, c: f64) -> Self {
        self.lipschitz_hint = Some((eps, c));
        self
    }

    pub fn apply(&self, u: &SpectralField) -> SpectralField {
        let out = (self.apply)(u);
        assert_eq!(out.grid(), u.grid(), "RHS map must preserve the grid");
        out
    }
}

/// Pointwise nonlinearity acting in physical space through the sine
/// collocation transform matched to `dirichlet_laplacian_1d`.
pub fn pointwise_rhs_map(
    modes: usize,
    f: impl Fn(Complex64) -> Complex64 + 'static,
) -> RhsMap<'static> {
    let dst = SineCollocation::new(modes);
    RhsMap::new(move |u: &SpectralField| {
        let grid = u.grid();
        let mut out = SpectralField::zeros(grid, modes);
        for k in 0..grid.len() {
            let coeffs: Vec<Complex64> = (0..modes).map(|m| u.at(m, k)).collect();
            let phys = dst.to_physical(&coeffs);
            let mapped: Vec<Complex64> = phys.iter().map(|&v| f(v)).collect();
            let back = dst.to_spectral(&mapped);
            for (m, &c) in back.iter().enumerate() {
                out.set(m, k, c);
            }
        }
        out
    })
}

/// The cubic bistable reaction F(u) = u - |u|²u on the collocation grid.
pub fn cubic_rhs_map(modes: usize) -> RhsMap<'static> {
    pointwise_rhs_map(modes, |v| v - v * v.norm_sqr())
}

/// Quasilinear diagonal family 𝒜(u) = (1 + δ·s(u))A with s a bounded real
/// functional evaluated per time node.
pub struct DiagonalFamily<'a> {
    pub delta: f64,
    shape: Box<dyn Fn(&SpectralField, usize) -> f64 + 'a>,
}

impl<'a> DiagonalFamily<'a> {
    pub fn new(delta: f64, shape: impl Fn(&SpectralField, usize) -> f64 + 'a) -> Self {
        DiagonalFamily {
            delta,
            shape: Box::new(shape),
        }
    }

    /// 1 + δ·s(u) at a node, with the ellipticity floor enforced.
    pub fn multiplier(&self, u: &SpectralField, node: usize) -> Result<f64, NonlinearError> {
        let m = 1.0 + self.delta * (self.shape)(u, node);
        if m < 0.5 {
            return Err(NonlinearError::EllipticityFloor { multiplier: m });
        }
        Ok(m)
    }
}

/// Per-iteration record of the Picard run.
#[derive(Clone, Debug)]
pub struct IterationTrace {
    /// MR-norm increments d_k = ‖v_{k+1} - v_k‖
    pub increments: Vec<f64>,
    /// contraction ratios d_{k+1}/d_k
    pub ratios: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// smallness precondition held (quasilinear runs only)
    pub admissible: bool,
}

impl IterationTrace {
    fn new() -> Self {
        IterationTrace {
            increments: Vec::new(),
            ratios: Vec::new(),
            converged: false,
            iterations: 0,
            admissible: true,
        }
    }

    fn push(&mut self, d: f64) {
        if let Some(&last) = self.increments.last() {
            if last > 0.0 {
                self.ratios.push(d / last);
            }
        }
        self.increments.push(d);
    }

    /// increments grew on the trailing `n` steps
    fn diverging(&self, n: usize) -> bool {
        self.ratios.len() >= n && self.ratios.iter().rev().take(n).all(|&r| r > 1.0)
    }

    pub fn csv_header() -> &'static str {
        "iter,increment,ratio"
    }

    pub fn csv_rows(&self) -> Vec<String> {
        self.increments
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let ratio = if i == 0 {
                    String::new()
                } else {
                    format!("{}", self.ratios[i - 1])
                };
                format!("{},{},{}", i + 1, d, ratio)
            })
            .collect()
    }
}

#[derive(Debug)]
pub enum NonlinearError {
    /// increments grew for three consecutive iterations (T too large or F
    /// too strong for the contraction)
    Divergence { trace: IterationTrace },
    /// an iterate left the admissible ball of radius r
    BallEscape { trace: IterationTrace, radius: f64 },
    EllipticityFloor { multiplier: f64 },
    MaxIterations { trace: IterationTrace },
    Solver(SolverError),
}

impl std::fmt::Display for NonlinearError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NonlinearError::Divergence { trace } => write!(
                f,
                "Picard iteration diverging after {} iterations",
                trace.iterations
            ),
            NonlinearError::BallEscape { trace, radius } => write!(
                f,
                "iterate left the ball of radius {radius} after {} iterations",
                trace.iterations
            ),
            NonlinearError::EllipticityFloor { multiplier } => {
                write!(f, "operator family multiplier {multiplier} below the 1/2 floor")
            }
            NonlinearError::MaxIterations { trace } => {
                write!(f, "no convergence within {} iterations", trace.iterations)
            }
            NonlinearError::Solver(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for NonlinearError {}

impl From<SolverError> for NonlinearError {
    fn from(e: SolverError) -> Self {
        NonlinearError::Solver(e)
    }
}

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 50;

/// Picard iteration v_{k+1} = ℒ(F(v_k), u₀) from v₀ = homogeneous
/// propagation, stopping when the MR increment falls below tol·‖v‖.
pub fn semilinear_solve(
    cfg: &SolveConfig,
    u0: &SpectralVector,
    rhs: &RhsMap,
    p: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(SpectralField, IterationTrace), NonlinearError> {
    let alpha = cfg.alpha();
    assert!(alpha * p > 1.0, "semilinear solve needs αp > 1");
    let mut trace = IterationTrace::new();
    let mut v = solve_homogeneous(cfg, u0)?;
    for _ in 0..max_iter {
        let g = rhs.apply(&v);
        let next = solve_full(cfg, u0, &g)?;
        let d = mr_norm(alpha, p, &next.sub(&v), cfg);
        trace.push(d);
        trace.iterations += 1;
        v = next;
        if d <= tol * mr_norm(alpha, p, &v, cfg) {
            trace.converged = true;
            return Ok((v, trace));
        }
        if trace.diverging(3) {
            return Err(NonlinearError::Divergence { trace });
        }
    }
    Err(NonlinearError::MaxIterations { trace })
}

/// Quasilinear Picard iteration u_{k+1} = ℒ(i(𝒜(u_k)-A)u_k, u₀) inside the
/// ball of MR-radius r. The empirical ‖ℒ‖ comes from a declared small
/// ensemble; the smallness condition ‖u₀‖_𝒳 ≤ r/(4‖ℒ‖) is recorded in the
/// trace (a warning, not a gate) and leaving the ball is an error.
pub fn quasilinear_solve(
    cfg: &SolveConfig,
    u0: &SpectralVector,
    family: &DiagonalFamily,
    p: f64,
    r: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(SpectralField, IterationTrace), NonlinearError> {
    let alpha = cfg.alpha();
    assert!(alpha * p > 1.0, "quasilinear solve needs αp > 1");
    let mut trace = IterationTrace::new();

    let ens = EnsembleSpec::new(6, 0xA11CE);
    let l_est = estimate_mr_constant(cfg, p, &ens, None).constant_estimate;
    let eps_prime = r / (4.0 * l_est);
    let x_norm = interp_norm(cfg.operator(), u0, alpha, p).expect("interp norm of u0");
    if x_norm > eps_prime {
        eprintln!(
            "warning: quasilinear smallness violated: ‖u0‖_X = {x_norm:.3e} > ε' = {eps_prime:.3e}"
        );
        trace.admissible = false;
    }

    let mut u = solve_homogeneous(cfg, u0)?;
    for _ in 0..max_iter {
        // Ψ(u)(t) = i(𝒜(u(t)) - A)u(t) = iδ·s(u,t)·A u(t)
        let grid = cfg.grid();
        let mut g = SpectralField::zeros(grid, u.modes());
        for k in 0..grid.len() {
            let mult = family.multiplier(&u, k)?;
            let factor = Complex64::i() * (mult - 1.0);
            for m in 0..u.modes() {
                let lam = cfg.operator().eigenvalue(m);
                g.set(m, k, factor * (-lam) * u.at(m, k));
            }
        }
        let next = solve_full(cfg, u0, &g)?;
        let d = mr_norm(alpha, p, &next.sub(&u), cfg);
        trace.push(d);
        trace.iterations += 1;
        u = next;
        let un = mr_norm(alpha, p, &u, cfg);
        if un > r {
            return Err(NonlinearError::BallEscape { trace, radius: r });
        }
        if d <= tol * un {
            trace.converged = true;
            return Ok((u, trace));
        }
        if trace.diverging(3) {
            return Err(NonlinearError::Divergence { trace });
        }
    }
    Err(NonlinearError::MaxIterations { trace })
}

/// Integral inequality ∫‖u‖^p ≤ T^{αp/q}/(α^{p/q}Γ(α)^p) ∫k_α(T-r)∫₀^r‖∂^α u‖^p,
/// evaluated by the module's quadratures for fields vanishing at t = 0.
pub fn fk_lemma_check(alpha: f64, p: f64, u: &SpectralField) -> RegularityReport {
    let grid = u.grid();
    let scale = (0..grid.len()).map(|k| u.h_norm_at(k)).fold(0.0, f64::max);
    assert!(
        u.h_norm_at(0) <= 1e-10 * scale.max(1e-300),
        "fk_lemma_check requires u(0) = 0"
    );
    let n = grid.len();
    let h = grid.spacing();
    // lhs = ∫ ‖u‖^p dt
    let lhs = field_lp_norm(u, p).powf(p);
    // ‖∂_t^α u(s)‖ per node
    let mut deriv_sq = vec![0.0f64; n];
    for mode in 0..u.modes() {
        let traj = Trajectory::new(grid, u.mode(mode).to_vec()).unwrap();
        let d = inverse_rl(alpha, &traj);
        for (k, slot) in deriv_sq.iter_mut().enumerate() {
            *slot += d.values[k].norm_sqr();
        }
    }
    // cumulative G(r) = ∫_0^r ‖∂^α u‖^p ds (trapezoid)
    let mut g = vec![0.0f64; n];
    for k in 1..n {
        let a = deriv_sq[k - 1].sqrt().powf(p);
        let b = deriv_sq[k].sqrt().powf(p);
        g[k] = g[k - 1] + 0.5 * h * (a + b);
    }
    // ∫_0^T (T-r)^{α-1} G(r) dr = Γ(α)·(J^α G)(T)
    let gtraj = Trajectory::new(grid, g.iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap();
    let jg = rl_integral(alpha, &gtraj);
    let ga = gamma_ln_f64(alpha).exp();
    let w = ga * jg.values[n - 1].re;
    let q = p / (p - 1.0);
    let t = grid.horizon();
    let rhs = t.powf(alpha * p / q) / (alpha.powf(p / q) * ga.powf(p)) * w;
    let mut r = RegularityReport::inequality("fk_lemma", lhs, rhs, lhs / rhs.max(1e-300), 2e-2);
    r.n_steps = grid.steps();
    r.n_modes = u.modes();
    r
}

/// j-th root of the contraction-series summand 2^j (Γ(α)^j T^{jα}/Γ(jα+1))^{1/p}:
/// its decay to zero is what makes some iterate of Φ a contraction.
pub fn phi_iterate_root(alpha: f64, p: f64, t: f64, j: u32) -> f64 {
    let jf = j as f64;
    let ln_summand =
        jf * 2f64.ln() + (jf * (gamma_ln_f64(alpha) + alpha * t.ln()) - gamma_ln_f64(jf * alpha + 1.0)) / p;
    (ln_summand / jf).exp()
}
