//! The abstract Hilbert-space layer, diagonalized: the operator A acts as
//! multiplication by -λ_n on spectral coefficients. Provides the resolvent,
//! H/D(A) norms, the exact quadratic K-functional of the couple (H, D(A)),
//! the real-interpolation norm built on it, and the sine collocation
//! transform used for pointwise nonlinearities.

use std::fmt;

use num_complex::Complex64;

use crate::fracalc::TimeGrid;

/// Truncated positive spectrum λ_1 ≤ … ≤ λ_M of -A.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalOperator {
    eigenvalues: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self, SpectralError> {
        if eigenvalues.is_empty() {
            return Err(SpectralError::EmptySpectrum);
        }
        let mut prev = 0.0;
        for &l in &eigenvalues {
            if !(l > 0.0) || l < prev {
                return Err(SpectralError::BadSpectrum { value: l });
            }
            prev = l;
        }
        Ok(DiagonalOperator { eigenvalues })
    }

    /// Eigenvalues n²π² of the 1D Dirichlet Laplacian on (0,1), n = 1..=m.
    pub fn dirichlet_laplacian_1d(m: usize) -> Self {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        DiagonalOperator {
            eigenvalues: (1..=m).map(|n| (n * n) as f64 * pi2).collect(),
        }
    }

    pub fn modes(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalue(&self, n: usize) -> f64 {
        self.eigenvalues[n]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }
}

/// Coefficients ⟨x, φ_n⟩ of a point of H in the eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVector {
    pub coeffs: Vec<Complex64>,
}

impl SpectralVector {
    pub fn zeros(m: usize) -> Self {
        SpectralVector {
            coeffs: vec![Complex64::new(0.0, 0.0); m],
        }
    }

    pub fn basis(m: usize, n: usize) -> Self {
        let mut v = Self::zeros(m);
        v.coeffs[n] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SpectralVector {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        SpectralVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        SpectralVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// A trajectory of H-points: M modes × (N+1) time nodes, mode-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: TimeGrid,
    modes: usize,
    data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: TimeGrid, modes: usize) -> Self {
        SpectralField {
            data: vec![Complex64::new(0.0, 0.0); modes * grid.len()],
            grid,
            modes,
        }
    }

    pub fn from_fn(grid: TimeGrid, modes: usize, f: impl Fn(usize, f64) -> Complex64) -> Self {
        let mut field = Self::zeros(grid, modes);
        for m in 0..modes {
            for k in 0..grid.len() {
                let t = grid.node(k);
                field.data[m * grid.len() + k] = f(m, t);
            }
        }
        field
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn at(&self, mode: usize, node: usize) -> Complex64 {
        self.data[mode * self.grid.len() + node]
    }

    pub fn set(&mut self, mode: usize, node: usize, v: Complex64) {
        self.data[mode * self.grid.len() + node] = v;
    }

    pub fn mode(&self, mode: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.data[mode * n..(mode + 1) * n]
    }

    pub fn mode_mut(&mut self, mode: usize) -> &mut [Complex64] {
        let n = self.grid.len();
        &mut self.data[mode * n..(mode + 1) * n]
    }

    /// The H-point at a time node.
    pub fn snapshot(&self, node: usize) -> SpectralVector {
        SpectralVector {
            coeffs: (0..self.modes).map(|m| self.at(m, node)).collect(),
        }
    }

    /// ‖·‖_H at a time node without allocating.
    pub fn h_norm_at(&self, node: usize) -> f64 {
        let n = self.grid.len();
        (0..self.modes)
            .map(|m| self.data[m * n + node].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.modes, other.modes);
        assert_eq!(self.grid, other.grid);
        SpectralField {
            grid: self.grid,
            modes: self.modes,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.modes, other.modes);
        assert_eq!(self.grid, other.grid);
        SpectralField {
            grid: self.grid,
            modes: self.modes,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SpectralField {
            grid: self.grid,
            modes: self.modes,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralError {
    EmptySpectrum,
    BadSpectrum { value: f64 },
    ShapeMismatch { operator: usize, vector: usize },
    SpectrumHit { z: Complex64 },
    InterpPrecondition { alpha: f64, p: f64 },
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::EmptySpectrum => write!(f, "operator needs at least one eigenvalue"),
            SpectralError::BadSpectrum { value } => {
                write!(f, "eigenvalues must be positive and nondecreasing (got {value})")
            }
            SpectralError::ShapeMismatch { operator, vector } => {
                write!(f, "operator has {operator} modes but vector has {vector}")
            }
            SpectralError::SpectrumHit { z } => write!(f, "resolvent argument {z} hits the spectrum"),
            SpectralError::InterpPrecondition { alpha, p } => {
                write!(f, "interpolation norm needs alpha*p > 1 (alpha={alpha}, p={p})")
            }
        }
    }
}

impl std::error::Error for SpectralError {}

fn check_shape(a: &DiagonalOperator, x: &SpectralVector) -> Result<(), SpectralError> {
    if a.modes() != x.len() {
        return Err(SpectralError::ShapeMismatch {
            operator: a.modes(),
            vector: x.len(),
        });
    }
    Ok(())
}

/// A x: multiplication by -λ_n.
pub fn apply_a(a: &DiagonalOperator, x: &SpectralVector) -> Result<SpectralVector, SpectralError> {
    check_shape(a, x)?;
    Ok(SpectralVector {
        coeffs: x
            .coeffs
            .iter()
            .zip(a.eigenvalues())
            .map(|(&c, &l)| -l * c)
            .collect(),
    })
}

/// R(z, A) x = (zI - A)^{-1} x: division by (z + λ_n).
pub fn resolvent(
    a: &DiagonalOperator,
    z: Complex64,
    x: &SpectralVector,
) -> Result<SpectralVector, SpectralError> {
    check_shape(a, x)?;
    let min_dist = a
        .eigenvalues()
        .iter()
        .map(|&l| (z + l).norm())
        .fold(f64::INFINITY, f64::min);
    if min_dist < 1e-14 * z.norm().max(a.lambda_min()) {
        return Err(SpectralError::SpectrumHit { z });
    }
    Ok(SpectralVector {
        coeffs: x
            .coeffs
            .iter()
            .zip(a.eigenvalues())
            .map(|(&c, &l)| c / (z + l))
            .collect(),
    })
}

/// Euclidean norm of the coefficients (Parseval).
pub fn h_norm(x: &SpectralVector) -> f64 {
    x.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn h_inner(x: &SpectralVector, y: &SpectralVector) -> Complex64 {
    x.coeffs
        .iter()
        .zip(&y.coeffs)
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// Graph norm ‖Ax‖ of D(A).
pub fn da_norm(a: &DiagonalOperator, x: &SpectralVector) -> Result<f64, SpectralError> {
    check_shape(a, x)?;
    Ok(x.coeffs
        .iter()
        .zip(a.eigenvalues())
        .map(|(c, &l)| (l * l) * c.norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Exact quadratic K-functional of the diagonal couple (H, D(A)):
/// K₂(t, x)² = Σ |x_n|² t²λ_n² / (1 + t²λ_n²).
pub fn k_functional(a: &DiagonalOperator, x: &SpectralVector, t: f64) -> Result<f64, SpectralError> {
    check_shape(a, x)?;
    assert!(t > 0.0, "k_functional requires t > 0");
    Ok(x.coeffs
        .iter()
        .zip(a.eigenvalues())
        .map(|(c, &l)| {
            let w = t * l;
            c.norm_sqr() * w * w / (1.0 + w * w)
        })
        .sum::<f64>()
        .sqrt())
}

/// Interpolation norm of 𝒳_{α,p} = (H, D(A))_{1-1/(αp), p} realized through
/// K₂ with log-spaced quadrature and closed-form tails. Returns the norm and
/// the fraction contributed by the tails.
pub fn interp_norm_detailed(
    a: &DiagonalOperator,
    x: &SpectralVector,
    alpha: f64,
    p: f64,
) -> Result<(f64, f64), SpectralError> {
    check_shape(a, x)?;
    if !(alpha * p > 1.0) {
        return Err(SpectralError::InterpPrecondition { alpha, p });
    }
    let theta = 1.0 - 1.0 / (alpha * p);
    let hn = h_norm(x);
    if hn == 0.0 {
        return Ok((0.0, 0.0));
    }
    let dan = da_norm(a, x)?;
    let t_lo = 1e-3 / a.lambda_max();
    let t_hi = 1e3 / a.lambda_min();
    const POINTS: usize = 400;
    let lu = (t_hi / t_lo).ln();
    let du = lu / (POINTS - 1) as f64;
    let mut mid = 0.0;
    for i in 0..POINTS {
        let t = t_lo * (du * i as f64).exp();
        let k = k_functional(a, x, t)?;
        let f = (t.powf(-theta) * k).powf(p);
        mid += if i == 0 || i == POINTS - 1 { 0.5 * f } else { f };
    }
    mid *= du;
    // K₂ ~ t·‖Ax‖ below t_lo and ~ ‖x‖ above t_hi, both exact power laws
    let lower = dan.powf(p) * t_lo.powf((1.0 - theta) * p) / ((1.0 - theta) * p);
    let upper = hn.powf(p) * t_hi.powf(-theta * p) / (theta * p);
    let total = mid + lower + upper;
    Ok((total.powf(1.0 / p), (lower + upper) / total))
}

/// Interpolation norm; tail contributions above 1% are reported via
/// [`interp_norm_detailed`].
pub fn interp_norm(
    a: &DiagonalOperator,
    x: &SpectralVector,
    alpha: f64,
    p: f64,
) -> Result<f64, SpectralError> {
    interp_norm_detailed(a, x, alpha, p).map(|(v, _)| v)
}

/// Collocation transform matched to `dirichlet_laplacian_1d(M)`:
/// eigenfunctions √2 sin(nπx) evaluated on the interior grid x_j = j/(J+1)
/// with J = 2M points. The discrete sine orthogonality makes the round trip
/// exact for band-limited data.
pub struct SineCollocation {
    modes: usize,
    points: usize,
    // sin(nπ x_j), point-major
    table: Vec<f64>,
}

impl SineCollocation {
    pub fn new(modes: usize) -> Self {
        let points = 2 * modes;
        let mut table = vec![0.0; points * modes];
        for j in 0..points {
            let x = (j + 1) as f64 / (points + 1) as f64;
            for n in 0..modes {
                table[j * modes + n] = ((n + 1) as f64 * std::f64::consts::PI * x).sin();
            }
        }
        SineCollocation {
            modes,
            points,
            table,
        }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn grid_point(&self, j: usize) -> f64 {
        (j + 1) as f64 / (self.points + 1) as f64
    }

    pub fn to_physical(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coeffs.len(), self.modes);
        let s2 = std::f64::consts::SQRT_2;
        (0..self.points)
            .map(|j| {
                let row = &self.table[j * self.modes..(j + 1) * self.modes];
                coeffs
                    .iter()
                    .zip(row)
                    .map(|(&c, &s)| c * (s2 * s))
                    .sum()
            })
            .collect()
    }

    pub fn to_spectral(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.points);
        let w = 2.0 / ((self.points + 1) as f64 * std::f64::consts::SQRT_2);
        (0..self.modes)
            .map(|n| {
                values
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| v * (w * self.table[j * self.modes + n]))
                    .sum()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn rand_vec(m: usize, rng: &mut Rng) -> SpectralVector {
        SpectralVector {
            coeffs: (0..m).map(|_| rng.complex_normal()).collect(),
        }
    }

    #[test]
    fn operator_validation() {
        assert!(DiagonalOperator::new(vec![]).is_err());
        assert!(DiagonalOperator::new(vec![1.0, 0.5]).is_err());
        assert!(DiagonalOperator::new(vec![-1.0]).is_err());
        let a = DiagonalOperator::dirichlet_laplacian_1d(3);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((a.eigenvalue(2) - 9.0 * pi2).abs() < 1e-12);
    }

    #[test]
    fn apply_a_examples() {
        let a = DiagonalOperator::new(vec![2.0, 5.0]).unwrap();
        let x = SpectralVector::basis(2, 0);
        let ax = apply_a(&a, &x).unwrap();
        assert_eq!(ax.coeffs[0], Complex64::new(-2.0, 0.0));
        assert_eq!(ax.coeffs[1], Complex64::new(0.0, 0.0));

        // ⟨Ax, x⟩ < 0 for x ≠ 0
        let mut rng = Rng::new(3);
        for _ in 0..10 {
            let x = rand_vec(2, &mut rng);
            let ax = apply_a(&a, &x).unwrap();
            let q = h_inner(&x, &ax);
            assert!(q.re < 0.0 && q.im.abs() < 1e-12 * q.re.abs());
        }

        // A² multiplies by λ²
        let y = apply_a(&a, &apply_a(&a, &x).unwrap()).unwrap();
        assert_eq!(y.coeffs[0], Complex64::new(4.0, 0.0));
    }

    #[test]
    fn resolvent_examples() {
        let a = DiagonalOperator::new(vec![1.0]).unwrap();
        let x = SpectralVector::basis(1, 0);
        let r = resolvent(&a, Complex64::new(1.0, 0.0), &x).unwrap();
        assert!((r.coeffs[0].re - 0.5).abs() < 1e-15);

        // z = 0: ‖A^{-1}x‖ ≤ ‖x‖/λ1
        let a = DiagonalOperator::dirichlet_laplacian_1d(8);
        let mut rng = Rng::new(11);
        let x = rand_vec(8, &mut rng);
        let r = resolvent(&a, Complex64::new(0.0, 0.0), &x).unwrap();
        assert!(h_norm(&r) <= h_norm(&x) / a.lambda_min() * (1.0 + 1e-12));

        // hitting the spectrum
        let bad = resolvent(&a, Complex64::new(-a.eigenvalue(0), 0.0), &x);
        assert!(matches!(bad, Err(SpectralError::SpectrumHit { .. })));
    }

    #[test]
    fn resolvent_sector_bound() {
        // sup over |arg z| <= 3π/4 of |z|·‖R(z,A)x‖/‖x‖ is bounded by
        // 1/sin(π/4) = √2 for a negative diagonal operator
        let a = DiagonalOperator::dirichlet_laplacian_1d(16);
        let mut rng = Rng::new(5);
        let mut sup: f64 = 0.0;
        for i in 0..40 {
            let r = 10f64.powf(-3.0 + 9.0 * (i as f64) / 39.0);
            for j in 0..16 {
                let arg = -0.75 * std::f64::consts::PI
                    + 1.5 * std::f64::consts::PI * (j as f64) / 15.0;
                let z = Complex64::from_polar(r, arg);
                let x = rand_vec(16, &mut rng);
                let rx = resolvent(&a, z, &x).unwrap();
                sup = sup.max(z.norm() * h_norm(&rx) / h_norm(&x));
            }
        }
        assert!(sup <= std::f64::consts::SQRT_2 * (1.0 + 1e-10), "sup {sup}");
        assert!(sup.is_finite() && sup > 0.5);
    }

    #[test]
    fn norms_and_parseval() {
        let a = DiagonalOperator::new(vec![3.0, 4.0]).unwrap();
        let e1 = SpectralVector::basis(2, 0);
        assert_eq!(h_norm(&e1), 1.0);
        assert_eq!(da_norm(&a, &e1).unwrap(), 3.0);

        let mut rng = Rng::new(2);
        let x = rand_vec(2, &mut rng);
        let sum: f64 = x.coeffs.iter().map(|c| c.norm_sqr()).sum();
        assert!((h_norm(&x).powi(2) - sum).abs() < 1e-14 * sum);
        assert!(da_norm(&a, &x).unwrap() >= a.lambda_min() * h_norm(&x) * (1.0 - 1e-14));
    }

    #[test]
    fn k_functional_limits_and_shape() {
        let a = DiagonalOperator::dirichlet_laplacian_1d(6);
        let mut rng = Rng::new(7);
        let x = rand_vec(6, &mut rng);

        let k_large = k_functional(&a, &x, 1e9).unwrap();
        assert!((k_large - h_norm(&x)).abs() < 1e-6 * h_norm(&x));

        let t = 1e-12;
        let k_small = k_functional(&a, &x, t).unwrap();
        assert!((k_small / t - da_norm(&a, &x).unwrap()).abs() < 1e-6 * da_norm(&a, &x).unwrap());

        // single mode closed form tλ/sqrt(1+t²λ²)
        let single = DiagonalOperator::new(vec![2.5]).unwrap();
        let e = SpectralVector::basis(1, 0);
        for &t in &[0.01, 0.3, 2.0] {
            let k = k_functional(&single, &e, t).unwrap();
            let w = t * 2.5;
            assert!((k - w / (1.0 + w * w).sqrt()).abs() < 1e-14);
        }

        // nondecreasing in t; concave in s = t² (the quadratic K-functional
        // is an infimum of affine functions of t²); single-mode K is also
        // concave in t itself
        let ts: Vec<f64> = (0..60).map(|i| 1e-4 * 1.35f64.powi(i)).collect();
        let ks: Vec<f64> = ts.iter().map(|&t| k_functional(&a, &x, t).unwrap()).collect();
        for w in ks.windows(2) {
            assert!(w[1] >= w[0] * (1.0 - 1e-13));
        }
        let s_grid: Vec<f64> = (1..50).map(|i| i as f64 * 0.02).collect();
        let k2_of_s: Vec<f64> = s_grid
            .iter()
            .map(|&s| k_functional(&a, &x, s.sqrt()).unwrap().powi(2))
            .collect();
        for w in k2_of_s.windows(3) {
            assert!(w[2] - 2.0 * w[1] + w[0] <= 1e-10 * w[1].abs());
        }
        let k_single: Vec<f64> = s_grid
            .iter()
            .map(|&t| k_functional(&single, &e, t).unwrap())
            .collect();
        for w in k_single.windows(3) {
            assert!(w[2] - 2.0 * w[1] + w[0] <= 1e-12);
        }
    }

    #[test]
    fn interp_norm_single_mode_scaling() {
        // one mode of size λ: norm = c(θ,p)·λ^θ, so log-regression over λ
        // recovers θ
        let (alpha, p) = (0.6, 3.0);
        let theta = 1.0 - 1.0 / (alpha * p);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &lam in &[1.0, 4.0, 16.0, 64.0] {
            let a = DiagonalOperator::new(vec![lam]).unwrap();
            let e = SpectralVector::basis(1, 0);
            let v = interp_norm(&a, &e, alpha, p).unwrap();
            xs.push(lam.ln());
            ys.push(v.ln());
        }
        let n = xs.len() as f64;
        let (sx, sy): (f64, f64) = (xs.iter().sum(), ys.iter().sum());
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope - theta).abs() < 1e-3, "slope {slope} vs θ {theta}");
    }

    #[test]
    fn interp_norm_p2_closed_form() {
        // p = 2: interp² = c₂·Σ λ^{2θ}|x|² with c₂ = π/(2 sin πθ); the ratio
        // must not depend on x
        let (alpha, p) = (0.8, 2.0);
        let theta = 1.0 - 1.0 / (alpha * p);
        let a = DiagonalOperator::dirichlet_laplacian_1d(12);
        let c2 = std::f64::consts::PI / (2.0 * (std::f64::consts::PI * theta).sin());
        let mut rng = Rng::new(23);
        for _ in 0..6 {
            let x = rand_vec(12, &mut rng);
            let v = interp_norm(&a, &x, alpha, p).unwrap();
            let closed: f64 = x
                .coeffs
                .iter()
                .zip(a.eigenvalues())
                .map(|(c, &l)| c.norm_sqr() * l.powf(2.0 * theta))
                .sum();
            let ratio = v * v / (c2 * closed);
            assert!(
                (ratio - 1.0).abs() < 1e-3,
                "ratio {ratio} deviates from 1"
            );
        }
    }

    #[test]
    fn interp_norm_axioms() {
        let a = DiagonalOperator::dirichlet_laplacian_1d(8);
        let (alpha, p) = (0.5, 4.0);
        assert_eq!(
            interp_norm(&a, &SpectralVector::zeros(8), alpha, p).unwrap(),
            0.0
        );
        let mut rng = Rng::new(31);
        for _ in 0..5 {
            let x = rand_vec(8, &mut rng);
            let y = rand_vec(8, &mut rng);
            let nx = interp_norm(&a, &x, alpha, p).unwrap();
            let ny = interp_norm(&a, &y, alpha, p).unwrap();
            let s = Complex64::new(rng.normal(), rng.normal());
            let nsx = interp_norm(&a, &x.scale(s), alpha, p).unwrap();
            assert!((nsx - s.norm() * nx).abs() < 1e-9 * nsx.max(1e-12));
            let nxy = interp_norm(&a, &x.add(&y), alpha, p).unwrap();
            assert!(nxy <= (nx + ny) * (1.0 + 1e-10));
        }
        // precondition αp > 1
        assert!(matches!(
            interp_norm(&a, &SpectralVector::basis(8, 0), 0.4, 2.0),
            Err(SpectralError::InterpPrecondition { .. })
        ));
        // tails stay negligible for the default window
        let x = rand_vec(8, &mut rng);
        let (_, tail) = interp_norm_detailed(&a, &x, alpha, p).unwrap();
        assert!(tail < 0.01, "tail fraction {tail}");
    }

    #[test]
    fn sine_collocation_roundtrip() {
        let m = 16;
        let dst = SineCollocation::new(m);
        let mut rng = Rng::new(77);
        let coeffs: Vec<Complex64> = (0..m).map(|_| rng.complex_normal()).collect();
        let phys = dst.to_physical(&coeffs);
        assert_eq!(phys.len(), 2 * m);
        let back = dst.to_spectral(&phys);
        for (a, b) in coeffs.iter().zip(&back) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn sine_collocation_pointwise_values() {
        // mode n at point x_j is √2 sin((n+1)πx_j)
        let dst = SineCollocation::new(4);
        let mut c = vec![Complex64::new(0.0, 0.0); 4];
        c[1] = Complex64::new(1.0, 0.0);
        let phys = dst.to_physical(&c);
        for (j, v) in phys.iter().enumerate() {
            let x = dst.grid_point(j);
            let expected = std::f64::consts::SQRT_2 * (2.0 * std::f64::consts::PI * x).sin();
            assert!((v.re - expected).abs() < 1e-14);
        }
    }
}
