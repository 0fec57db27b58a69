//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`s,
//! carrying roughly 31 significant decimal digits.
//!
//! The Mittag-Leffler power series on the imaginary ray cancels by many
//! orders of magnitude before it settles, so its partial sums are accumulated
//! in this format rather than in plain `f64`. Everything here is scalar and
//! allocation-free; `two_prod` relies on `f64::mul_add` being a correctly
//! rounded fused multiply-add.

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };


    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact ratio of two integers representable in f64.
    pub fn from_ratio(num: f64, den: f64) -> Self {
        Dd::from_f64(num) / Dd::from_f64(den)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }


    #[inline]
    pub fn recip(self) -> Self {
        Dd::ONE / self
    }


    /// Scale by a power of two (exact).
    #[inline]
    pub fn ldexp(self, e: i32) -> Self {
        let f = exp2_i(e);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }
}

fn exp2_i(e: i32) -> f64 {
    // in-range for every use in this crate (|e| < 900)
    f64::from_bits(((1023 + e) as u64) << 52)
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::from_f64(q3)
    }
}

impl Dd {
    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * rhs);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, rhs: f64) -> Dd {
        self + Dd::from_f64(rhs)
    }
}

/// π and ln 2 to double-double accuracy, generated once from rapidly
/// converging integer series so no transcribed low words are needed.
struct Consts {
    pi: Dd,
    ln2: Dd,
    ln_two_pi_half: Dd, // ln(2π)/2
}

static CONSTS: OnceLock<Consts> = OnceLock::new();

fn atan_inv_int(k: f64) -> Dd {
    // atan(1/k) = sum_{j>=0} (-1)^j / ((2j+1) k^{2j+1})
    let inv = Dd::from_f64(1.0) / Dd::from_f64(k);
    let inv2 = inv * inv;
    let mut term = inv;
    let mut sum = Dd::ZERO;
    let mut j = 0u32;
    loop {
        let contrib = term / Dd::from_f64((2 * j + 1) as f64);
        sum = if j % 2 == 0 {
            sum + contrib
        } else {
            sum - contrib
        };
        term = term * inv2;
        if term.hi.abs() < 1e-35 {
            break;
        }
        j += 1;
    }
    sum
}

fn atanh_inv_int(k: f64) -> Dd {
    let inv = Dd::from_f64(1.0) / Dd::from_f64(k);
    let inv2 = inv * inv;
    let mut term = inv;
    let mut sum = Dd::ZERO;
    let mut j = 0u32;
    loop {
        sum = sum + term / Dd::from_f64((2 * j + 1) as f64);
        term = term * inv2;
        if term.hi.abs() < 1e-35 {
            break;
        }
        j += 1;
    }
    sum
}

fn consts() -> &'static Consts {
    CONSTS.get_or_init(|| {
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        let pi = atan_inv_int(5.0).mul_f64(16.0) - atan_inv_int(239.0).mul_f64(4.0);
        let ln2 = atanh_inv_int(3.0).mul_f64(2.0);
        // ln π must not re-enter this initializer, so exp/ln take ln2 directly
        let ln_pi = ln_with(pi, ln2);
        let ln_two_pi_half = (ln2 + ln_pi).mul_f64(0.5);
        Consts {
            pi,
            ln2,
            ln_two_pi_half,
        }
    })
}


/// exp in double-double, |x| up to ~700.
pub(crate) fn dd_exp(x: Dd) -> Dd {
    exp_with(x, consts().ln2)
}

fn exp_with(x: Dd, ln2: Dd) -> Dd {
    let k = (x.hi / std::f64::consts::LN_2).round();
    let r = x - ln2.mul_f64(k);
    // Taylor on |r| <= ~0.35
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut n = 1.0f64;
    loop {
        term = term * r;
        term = term / Dd::from_f64(n);
        sum = sum + term;
        if term.hi.abs() < 1e-35 * sum.hi.abs() {
            break;
        }
        n += 1.0;
        if n > 60.0 {
            break;
        }
    }
    sum.ldexp(k as i32)
}

fn ln_with(x: Dd, ln2: Dd) -> Dd {
    // Newton refinement of the f64 logarithm: y' = y + x e^{-y} - 1.
    let y0 = x.hi.ln();
    let e = x * exp_with(Dd::from_f64(-y0), ln2) - Dd::ONE;
    Dd::from_f64(y0) + e - e * e.mul_f64(0.5)
}

/// Natural log in double-double, x > 0.
pub(crate) fn dd_ln(x: Dd) -> Dd {
    ln_with(x, consts().ln2)
}

/// sin(πx) in double-double; exactly zero at integer x.
pub(crate) fn dd_sinpi(x: Dd) -> Dd {
    let n = x.hi.round();
    let r = x - Dd::from_f64(n); // |r| <= 1/2, exact subtraction
    if r.hi == 0.0 && r.lo == 0.0 {
        return Dd::ZERO;
    }
    let w = consts().pi * r;
    // Taylor for sin on |w| <= π/2
    let w2 = w * w;
    let mut term = w;
    let mut sum = w;
    let mut k = 1.0f64;
    loop {
        term = term * w2;
        term = term / Dd::from_f64(-(2.0 * k) * (2.0 * k + 1.0));
        sum = sum + term;
        if term.hi.abs() < 1e-35 * sum.hi.abs().max(1e-300) {
            break;
        }
        k += 1.0;
        if k > 40.0 {
            break;
        }
    }
    // sin(πx) = (-1)^n sin(πr)
    if (n as i64) % 2 == 0 {
        sum
    } else {
        -sum
    }
}

/// Stirling coefficients B_{2m}/(2m(2m-1)) for m = 1..=14, from the exact
/// integer fractions. Valid to dd accuracy for arguments >= 30.
fn stirling_coeffs() -> &'static [Dd; 14] {
    static COEFFS: OnceLock<[Dd; 14]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        const B: [(f64, f64); 14] = [
            (1.0, 6.0),
            (-1.0, 30.0),
            (1.0, 42.0),
            (-1.0, 30.0),
            (5.0, 66.0),
            (-691.0, 2730.0),
            (7.0, 6.0),
            (-3617.0, 510.0),
            (43867.0, 798.0),
            (-174611.0, 330.0),
            (854513.0, 138.0),
            (-236364091.0, 2730.0),
            (8553103.0, 6.0),
            (-23749461029.0, 870.0),
        ];
        let mut out = [Dd::ZERO; 14];
        for (m, (num, den)) in B.iter().enumerate() {
            let twom = 2.0 * (m as f64 + 1.0);
            out[m] = Dd::from_ratio(*num, den * twom * (twom - 1.0));
        }
        out
    })
}

const STIRLING_CUT: f64 = 30.0;

/// ln Γ(x) in double-double for x > 0.
pub(crate) fn dd_lngamma(x: Dd) -> Dd {
    debug_assert!(x.hi > 0.0);
    let mut shift = Dd::ONE;
    let mut y = x;
    while y.hi < STIRLING_CUT {
        shift = shift * y;
        y = y.add_f64(1.0);
    }
    let ln_y = dd_ln(y);
    let mut s = (y - Dd::from_f64(0.5)) * ln_y - y + consts().ln_two_pi_half;
    let inv = y.recip();
    let inv2 = inv * inv;
    let mut p = inv;
    for c in stirling_coeffs() {
        s = s + *c * p;
        p = p * inv2;
    }
    if shift.hi != 1.0 || shift.lo != 0.0 {
        s = s - dd_ln(shift);
    }
    s
}

/// Γ(x) in double-double for any non-pole x.
pub(crate) fn dd_gamma(x: Dd) -> Dd {
    if x.hi >= 0.5 {
        dd_exp(dd_lngamma(x))
    } else {
        // reflection: Γ(x) = π / (sin(πx) Γ(1-x))
        let s = dd_sinpi(x);
        consts().pi / (s * dd_exp(dd_lngamma(Dd::ONE - x)))
    }
}

/// 1/Γ(x) in double-double; exactly zero at the poles x = 0, -1, -2, ...
pub(crate) fn dd_rgamma(x: Dd) -> Dd {
    if x.hi >= 0.5 {
        dd_exp(-dd_lngamma(x))
    } else {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        let s = dd_sinpi(x);
        if s.hi == 0.0 && s.lo == 0.0 {
            return Dd::ZERO;
        }
        s * dd_exp(dd_lngamma(Dd::ONE - x)) / consts().pi
    }
}

/// Complex double-double, only what the series summation needs.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: DdComplex = DdComplex {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn from_c64(z: Complex64) -> Self {
        DdComplex {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, rhs: DdComplex) -> Self {
        DdComplex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }

    #[inline]
    pub fn mul(self, rhs: DdComplex) -> Self {
        DdComplex {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }

    #[inline]
    pub fn scale(self, s: Dd) -> Self {
        DdComplex {
            re: self.re * s,
            im: self.im * s,
        }
    }

    /// |z| estimated in f64, good enough for stopping tests.
    #[inline]
    pub fn abs_est(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_f64() {
        assert!((consts().pi.hi - std::f64::consts::PI).abs() < 1e-15);
        assert!((consts().ln2.hi - std::f64::consts::LN_2).abs() < 1e-15);
        // low words are genuine refinements
        assert!(consts().pi.lo.abs() > 0.0 && consts().pi.lo.abs() < 1e-15);
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Dd::from_ratio(1.0, 3.0);
        let b = a * Dd::from_f64(3.0);
        assert!((b - Dd::ONE).to_f64().abs() < 1e-31);
        let c = Dd::from_f64(7.0) / Dd::from_f64(11.0) * Dd::from_f64(11.0);
        assert!((c.to_f64() - 7.0).abs() < 1e-30);
    }

    #[test]
    fn exp_ln_inverse() {
        for &x in &[0.1, 1.0, 2.5, 10.0, 50.0, 200.0] {
            let y = dd_ln(dd_exp(Dd::from_f64(x)));
            assert!(
                (y.to_f64() - x).abs() < 1e-28 * x.max(1.0),
                "exp/ln roundtrip failed at {x}"
            );
        }
    }

    #[test]
    fn lngamma_known_values() {
        // Γ(5) = 24
        let g5 = dd_exp(dd_lngamma(Dd::from_f64(5.0))).to_f64();
        assert!((g5 - 24.0).abs() < 1e-27);
        // Γ(0.5) = sqrt(π)
        let gh = dd_gamma(Dd::from_f64(0.5)).to_f64();
        assert!((gh - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        // Γ(1) = Γ(2) = 1
        assert!((dd_gamma(Dd::from_f64(1.0)).to_f64() - 1.0).abs() < 1e-30);
        assert!((dd_gamma(Dd::from_f64(2.0)).to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn rgamma_poles_are_exact_zeros() {
        for &x in &[0.0, -1.0, -2.0, -7.0] {
            let r = dd_rgamma(Dd::from_f64(x));
            assert_eq!(r.hi, 0.0);
        }
    }

    #[test]
    fn reflection_consistency() {
        // Γ(x)Γ(1-x) = π/sin(πx) at x = -2.3
        let x = -2.3;
        let lhs = dd_gamma(Dd::from_f64(x)) * dd_gamma(Dd::from_f64(1.0 - x));
        let rhs = consts().pi / dd_sinpi(Dd::from_f64(x));
        assert!(((lhs - rhs) / rhs).to_f64().abs() < 1e-27);
    }

    #[test]
    fn sinpi_half_integers() {
        assert!((dd_sinpi(Dd::from_f64(0.5)).to_f64() - 1.0).abs() < 1e-31);
        assert!((dd_sinpi(Dd::from_f64(2.5)).to_f64() - 1.0).abs() < 1e-31);
        assert!((dd_sinpi(Dd::from_f64(-0.5)).to_f64() + 1.0).abs() < 1e-31);
    }
}
