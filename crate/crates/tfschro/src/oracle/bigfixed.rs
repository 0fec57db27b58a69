//! Software extended precision: sign-magnitude binary fixed point on u64
//! limbs. Built in-module so the oracle has no dependency on (and shares no
//! code with) the double-double machinery of the primary path.
//!
//! A value is sign · (Σ limbs[i]·2^{64i}) · 2^{-64·frac_limbs}. All operands
//! of an operation must carry the same `frac_limbs`; precision is chosen per
//! evaluation by the caller.

use std::cmp::Ordering;
use std::sync::{Arc, Mutex, OnceLock};

/// Precision context: number of 64-bit limbs after the binary point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prec {
    pub frac_limbs: usize,
}

impl Prec {
    /// Enough fractional bits for `digits` significant decimal digits plus
    /// guard space.
    pub fn for_digits(digits: u32) -> Prec {
        let bits = (digits as f64 + 12.0) * std::f64::consts::LN_10 / std::f64::consts::LN_2;
        Prec {
            frac_limbs: (bits / 64.0).ceil() as usize + 1,
        }
    }

    pub fn eps_log10(&self) -> f64 {
        -(self.frac_limbs as f64) * 64.0 * std::f64::consts::LN_2 / std::f64::consts::LN_10
    }
}

#[derive(Clone, Debug)]
pub struct BigFixed {
    sign: i8,
    limbs: Vec<u64>,
    frac_limbs: usize,
}

// -- raw magnitude helpers ---------------------------------------------------

fn mag_trim(limbs: &mut Vec<u64>, min_len: usize) {
    while limbs.len() > min_len && *limbs.last().unwrap() == 0 {
        limbs.pop();
    }
}

fn mag_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&x| x == 0)
}

fn mag_cmp(a: &[u64], b: &[u64]) -> Ordering {
    let n = a.len().max(b.len());
    for i in (0..n).rev() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn mag_add(a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n + 1);
    let mut carry = 0u128;
    for i in 0..n {
        let s = a.get(i).copied().unwrap_or(0) as u128
            + b.get(i).copied().unwrap_or(0) as u128
            + carry;
        out.push(s as u64);
        carry = s >> 64;
    }
    if carry != 0 {
        out.push(carry as u64);
    }
    out
}

/// a - b, requires a >= b.
fn mag_sub(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len());
    let mut borrow = 0i128;
    for i in 0..a.len() {
        let d = a[i] as i128 - b.get(i).copied().unwrap_or(0) as i128 - borrow;
        if d < 0 {
            out.push((d + (1i128 << 64)) as u64);
            borrow = 1;
        } else {
            out.push(d as u64);
            borrow = 0;
        }
    }
    debug_assert_eq!(borrow, 0, "mag_sub underflow");
    out
}

fn mag_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let mut carry = 0u128;
        for (j, &y) in b.iter().enumerate() {
            let t = out[i + j] as u128 + x as u128 * y as u128 + carry;
            out[i + j] = t as u64;
            carry = t >> 64;
        }
        let mut k = i + b.len();
        while carry != 0 {
            let t = out[k] as u128 + carry;
            out[k] = t as u64;
            carry = t >> 64;
            k += 1;
        }
    }
    out
}

pub(crate) fn mag_mul_small(a: &mut Vec<u64>, s: u64) {
    let mut carry = 0u128;
    for x in a.iter_mut() {
        let t = *x as u128 * s as u128 + carry;
        *x = t as u64;
        carry = t >> 64;
    }
    if carry != 0 {
        a.push(carry as u64);
    }
}

/// a /= s, returns remainder.
fn mag_div_small(a: &mut [u64], s: u64) -> u64 {
    let mut rem = 0u128;
    for x in a.iter_mut().rev() {
        let cur = (rem << 64) | *x as u128;
        *x = (cur / s as u128) as u64;
        rem = cur % s as u128;
    }
    rem as u64
}

pub(crate) fn mag_add_assign(a: &mut Vec<u64>, b: &[u64]) {
    let r = mag_add(a, b);
    *a = r;
}

fn mag_shr_bits(a: &[u64], bits: usize) -> Vec<u64> {
    let limb_shift = bits / 64;
    let bit_shift = bits % 64;
    if limb_shift >= a.len() {
        return vec![0];
    }
    let mut out = Vec::with_capacity(a.len() - limb_shift);
    for i in limb_shift..a.len() {
        let lo = a[i] >> bit_shift;
        let hi = if bit_shift > 0 && i + 1 < a.len() {
            a[i + 1] << (64 - bit_shift)
        } else {
            0
        };
        out.push(lo | hi);
    }
    out
}

fn mag_shl_bits(a: &[u64], bits: usize) -> Vec<u64> {
    let limb_shift = bits / 64;
    let bit_shift = bits % 64;
    let mut out = vec![0u64; limb_shift];
    if bit_shift == 0 {
        out.extend_from_slice(a);
        return out;
    }
    let mut carry = 0u64;
    for &x in a {
        out.push((x << bit_shift) | carry);
        carry = x >> (64 - bit_shift);
    }
    if carry != 0 {
        out.push(carry);
    }
    out
}

fn mag_bit_len(a: &[u64]) -> usize {
    for i in (0..a.len()).rev() {
        if a[i] != 0 {
            return i * 64 + (64 - a[i].leading_zeros() as usize);
        }
    }
    0
}

// -- BigFixed ----------------------------------------------------------------

impl BigFixed {
    pub fn zero(prec: Prec) -> Self {
        BigFixed {
            sign: 0,
            limbs: vec![0; prec.frac_limbs + 1],
            frac_limbs: prec.frac_limbs,
        }
    }

    pub fn one(prec: Prec) -> Self {
        Self::from_u64(1, prec)
    }

    pub fn from_u64(v: u64, prec: Prec) -> Self {
        let mut limbs = vec![0; prec.frac_limbs + 1];
        limbs[prec.frac_limbs] = v;
        BigFixed {
            sign: if v == 0 { 0 } else { 1 },
            limbs,
            frac_limbs: prec.frac_limbs,
        }
    }

    pub fn prec(&self) -> Prec {
        Prec {
            frac_limbs: self.frac_limbs,
        }
    }

    /// Exact embedding of an f64 (requires |x| finite).
    pub fn from_f64(x: f64, prec: Prec) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if x < 0.0 { -1i8 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let (mant, exp) = if raw_exp == 0 {
            (bits & ((1u64 << 52) - 1), -1074i64)
        } else {
            ((bits & ((1u64 << 52) - 1)) | (1u64 << 52), raw_exp - 1075)
        };
        Self::from_u64_times_pow2(mant, exp, prec, sign)
    }

    /// mant · 2^exp with the given sign.
    fn from_u64_times_pow2(mant: u64, exp: i64, prec: Prec, sign: i8) -> Self {
        let total = exp + 64 * prec.frac_limbs as i64;
        let mag = if total >= 0 {
            mag_shl_bits(&[mant], total as usize)
        } else if total > -64 {
            vec![mant >> (-total) as usize]
        } else {
            vec![0]
        };
        let mut v = BigFixed {
            sign: if mag_is_zero(&mag) { 0 } else { sign },
            limbs: mag,
            frac_limbs: prec.frac_limbs,
        };
        v.pad();
        v
    }

    fn pad(&mut self) {
        if self.limbs.len() < self.frac_limbs + 1 {
            self.limbs.resize(self.frac_limbs + 1, 0);
        }
        mag_trim(&mut self.limbs, self.frac_limbs + 1);
        if mag_is_zero(&self.limbs) {
            self.sign = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign < 0
    }

    pub fn neg(&self) -> Self {
        let mut v = self.clone();
        v.sign = -v.sign;
        v
    }

    pub fn abs(&self) -> Self {
        let mut v = self.clone();
        if v.sign != 0 {
            v.sign = 1;
        }
        v
    }

    pub fn to_f64(&self) -> f64 {
        let bl = mag_bit_len(&self.limbs);
        if bl == 0 {
            return 0.0;
        }
        // take the top 64 bits and scale
        let top = bl.saturating_sub(64);
        let head = mag_shr_bits(&self.limbs, top);
        let mut x = 0.0f64;
        for (i, &l) in head.iter().enumerate().take(2) {
            x += l as f64 * 2f64.powi(64 * i as i32);
        }
        let e = top as i64 - 64 * self.frac_limbs as i64;
        let v = x * 2f64.powi(e.clamp(-1400, 1400) as i32);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    /// log2 of the magnitude, or None for zero (saturation-free size probe).
    pub fn log2_abs(&self) -> Option<f64> {
        let bl = mag_bit_len(&self.limbs);
        if bl == 0 {
            return None;
        }
        let top = bl.saturating_sub(53);
        let head = mag_shr_bits(&self.limbs, top);
        let mut x = 0.0f64;
        for (i, &l) in head.iter().enumerate().take(2) {
            x += l as f64 * 2f64.powi(64 * i as i32);
        }
        Some(x.log2() + top as f64 - 64.0 * self.frac_limbs as f64)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.frac_limbs, other.frac_limbs);
        if self.sign == 0 {
            return other.clone();
        }
        if other.sign == 0 {
            return self.clone();
        }
        let mut out;
        if self.sign == other.sign {
            out = BigFixed {
                sign: self.sign,
                limbs: mag_add(&self.limbs, &other.limbs),
                frac_limbs: self.frac_limbs,
            };
        } else {
            match mag_cmp(&self.limbs, &other.limbs) {
                Ordering::Equal => return Self::zero(self.prec()),
                Ordering::Greater => {
                    out = BigFixed {
                        sign: self.sign,
                        limbs: mag_sub(&self.limbs, &other.limbs),
                        frac_limbs: self.frac_limbs,
                    };
                }
                Ordering::Less => {
                    out = BigFixed {
                        sign: other.sign,
                        limbs: mag_sub(&other.limbs, &self.limbs),
                        frac_limbs: self.frac_limbs,
                    };
                }
            }
        }
        out.pad();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.frac_limbs, other.frac_limbs);
        if self.sign == 0 || other.sign == 0 {
            return Self::zero(self.prec());
        }
        let full = mag_mul(&self.limbs, &other.limbs);
        let mut out = BigFixed {
            sign: self.sign * other.sign,
            limbs: full[self.frac_limbs..].to_vec(),
            frac_limbs: self.frac_limbs,
        };
        out.pad();
        out
    }

    pub fn mul_small(&self, s: u64) -> Self {
        if self.sign == 0 || s == 0 {
            return Self::zero(self.prec());
        }
        let mut limbs = self.limbs.clone();
        mag_mul_small(&mut limbs, s);
        let mut out = BigFixed {
            sign: self.sign,
            limbs,
            frac_limbs: self.frac_limbs,
        };
        out.pad();
        out
    }

    pub fn div_small(&self, s: u64) -> Self {
        assert!(s != 0);
        let mut limbs = self.limbs.clone();
        mag_div_small(&mut limbs, s);
        let mut out = BigFixed {
            sign: self.sign,
            limbs,
            frac_limbs: self.frac_limbs,
        };
        out.pad();
        out
    }

    pub fn shr_bits(&self, bits: usize) -> Self {
        let mut out = BigFixed {
            sign: self.sign,
            limbs: mag_shr_bits(&self.limbs, bits),
            frac_limbs: self.frac_limbs,
        };
        out.pad();
        out
    }

    pub fn shl_bits(&self, bits: usize) -> Self {
        let mut out = BigFixed {
            sign: self.sign,
            limbs: mag_shl_bits(&self.limbs, bits),
            frac_limbs: self.frac_limbs,
        };
        out.pad();
        out
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        mag_cmp(&self.limbs, &other.limbs)
    }

    /// Newton-Raphson reciprocal.
    pub fn recip(&self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        let prec = self.prec();
        // scale so the magnitude is ~1: self = m · 2^e with m in [0.5, 1)
        let e = mag_bit_len(&self.limbs) as i64 - 64 * self.frac_limbs as i64;
        let m = if e >= 0 {
            self.abs().shr_bits(e as usize)
        } else {
            self.abs().shl_bits((-e) as usize)
        };
        // 1/m from f64, then refine: x <- x(2 - m x)
        let mut x = BigFixed::from_f64(1.0 / m.to_f64(), prec);
        let two = BigFixed::from_u64(2, prec);
        let iters = 6 + (prec.frac_limbs as f64).log2().ceil() as usize;
        for _ in 0..iters {
            let t = two.sub(&m.mul(&x));
            x = x.mul(&t);
        }
        // undo scaling: 1/self = (1/m) · 2^{-e}
        let mut out = if e >= 0 {
            x.shr_bits(e as usize)
        } else {
            x.shl_bits((-e) as usize)
        };
        out.sign = self.sign * out.sign.abs();
        out.pad();
        out
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Re-express at another precision (dropping or zero-filling low limbs).
    pub fn to_prec(&self, prec: Prec) -> Self {
        let mut out = if prec.frac_limbs >= self.frac_limbs {
            let mut limbs = vec![0u64; prec.frac_limbs - self.frac_limbs];
            limbs.extend_from_slice(&self.limbs);
            BigFixed {
                sign: self.sign,
                limbs,
                frac_limbs: prec.frac_limbs,
            }
        } else {
            BigFixed {
                sign: self.sign,
                limbs: self.limbs[self.frac_limbs - prec.frac_limbs..].to_vec(),
                frac_limbs: prec.frac_limbs,
            }
        };
        out.pad();
        out
    }
}

// -- cached constants ---------------------------------------------------------

struct Consts {
    pi: BigFixed,
    ln2: BigFixed,
    ln_two_pi_half: BigFixed,
}

fn consts_for(prec: Prec) -> Arc<Consts> {
    static CACHE: OnceLock<Mutex<std::collections::HashMap<usize, Arc<Consts>>>> = OnceLock::new();
    let map = CACHE.get_or_init(|| Mutex::new(std::collections::HashMap::new()));
    let mut guard = map.lock().unwrap();
    if let Some(c) = guard.get(&prec.frac_limbs) {
        return c.clone();
    }
    // π by Machin: 16 atan(1/5) - 4 atan(1/239)
    let pi = atan_inv(5, prec)
        .mul_small(16)
        .sub(&atan_inv(239, prec).mul_small(4));
    let ln2 = atanh_inv(3, prec).mul_small(2);
    let ln_pi = ln_normalized(&pi, &ln2);
    let ln_two_pi_half = ln2.add(&ln_pi).shr_bits(1);
    let c = Arc::new(Consts {
        pi,
        ln2,
        ln_two_pi_half,
    });
    guard.insert(prec.frac_limbs, c.clone());
    c
}

fn atan_inv(k: u64, prec: Prec) -> BigFixed {
    let inv = BigFixed::from_u64(1, prec).div_small(k);
    let inv2 = inv.mul(&inv);
    let mut term = inv;
    let mut sum = BigFixed::zero(prec);
    let mut j = 0u64;
    loop {
        let contrib = term.div_small(2 * j + 1);
        sum = if j % 2 == 0 {
            sum.add(&contrib)
        } else {
            sum.sub(&contrib)
        };
        term = term.mul(&inv2);
        if term.is_zero() {
            break;
        }
        j += 1;
    }
    sum
}

fn atanh_inv(k: u64, prec: Prec) -> BigFixed {
    let inv = BigFixed::from_u64(1, prec).div_small(k);
    let inv2 = inv.mul(&inv);
    let mut term = inv;
    let mut sum = BigFixed::zero(prec);
    let mut j = 0u64;
    loop {
        sum = sum.add(&term.div_small(2 * j + 1));
        term = term.mul(&inv2);
        if term.is_zero() {
            break;
        }
        j += 1;
    }
    sum
}

pub fn pi(prec: Prec) -> BigFixed {
    consts_for(prec).pi.clone()
}

/// exp(x); |x| must stay within a few thousand.
pub fn exp(x: &BigFixed) -> BigFixed {
    let prec = x.prec();
    let c = consts_for(prec);
    let xf = x.to_f64();
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let kl = if k >= 0 {
        c.ln2.mul_small(k as u64)
    } else {
        c.ln2.mul_small((-k) as u64).neg()
    };
    let r = x.sub(&kl);
    let mut term = BigFixed::one(prec);
    let mut sum = BigFixed::one(prec);
    let mut n = 1u64;
    loop {
        term = term.mul(&r).div_small(n);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
        n += 1;
        if n > 500 {
            break;
        }
    }
    if k >= 0 {
        sum.shl_bits(k as usize)
    } else {
        sum.shr_bits((-k) as usize)
    }
}

fn ln_normalized(x: &BigFixed, ln2: &BigFixed) -> BigFixed {
    // atanh series after scaling x into [1, 2); ln2 passed in so this is
    // usable from inside the constants initializer itself
    let prec = x.prec();
    let e = mag_bit_len(&x.limbs) as i64 - 64 * x.frac_limbs as i64 - 1;
    let m = if e >= 0 {
        x.shr_bits(e as usize)
    } else {
        x.shl_bits((-e) as usize)
    };
    let one = BigFixed::one(prec);
    let u = m.sub(&one).div(&m.add(&one));
    let u2 = u.mul(&u);
    let mut term = u.clone();
    let mut sum = BigFixed::zero(prec);
    let mut j = 0u64;
    loop {
        sum = sum.add(&term.div_small(2 * j + 1));
        term = term.mul(&u2);
        if term.is_zero() {
            break;
        }
        j += 1;
    }
    let ln_m = sum.shl_bits(1);
    if e >= 0 {
        ln_m.add(&ln2.mul_small(e as u64))
    } else {
        ln_m.sub(&ln2.mul_small((-e) as u64))
    }
}

/// ln(x), x > 0.
pub fn ln(x: &BigFixed) -> BigFixed {
    assert!(x.sign > 0, "ln of non-positive value");
    let prec = x.prec();
    let c = consts_for(prec);
    ln_normalized(x, &c.ln2)
}

/// sin(πx), exactly zero at integer x.
pub fn sinpi(x: &BigFixed) -> BigFixed {
    let prec = x.prec();
    let c = consts_for(prec);
    let n = x.to_f64().round();
    let r = x.sub(&BigFixed::from_f64(n, prec));
    if r.is_zero() {
        return BigFixed::zero(prec);
    }
    let w = c.pi.mul(&r); // |w| <= π/2
    let w2 = w.mul(&w);
    let mut term = w.clone();
    let mut sum = w;
    let mut k = 1u64;
    loop {
        term = term.mul(&w2).div_small(2 * k).div_small(2 * k + 1).neg();
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
        k += 1;
        if k > 200 {
            break;
        }
    }
    if (n as i64) % 2 == 0 {
        sum
    } else {
        sum.neg()
    }
}

// -- Bernoulli / Stirling ----------------------------------------------------

/// Tangent numbers T_1, T_2, ... as raw integer magnitudes (all positive),
/// grown on demand. B_{2m} = (-1)^{m-1} · 2m · T_m / (2^{2m}(2^{2m}-1)).
fn tangent_numbers(count: usize) -> Arc<Vec<Vec<u64>>> {
    static CACHE: OnceLock<Mutex<Arc<Vec<Vec<u64>>>>> = OnceLock::new();
    let cell = CACHE.get_or_init(|| Mutex::new(Arc::new(Vec::new())));
    let mut guard = cell.lock().unwrap();
    if guard.len() >= count {
        return guard.clone();
    }
    let n = count.max(guard.len() * 2).max(32);
    // Brent-Zimmermann integer triangle
    let mut t: Vec<Vec<u64>> = Vec::with_capacity(n);
    t.push(vec![1]); // T_1
    for k in 2..=n {
        let mut v = t[k - 2].clone();
        mag_mul_small(&mut v, (k - 1) as u64);
        t.push(v);
    }
    for k in 2..=n {
        for j in k..=n {
            let mut a = t[j - 2].clone();
            mag_mul_small(&mut a, (j - k) as u64);
            let mut b = t[j - 1].clone();
            mag_mul_small(&mut b, (j - k + 2) as u64);
            mag_add_assign(&mut a, &b);
            t[j - 1] = a;
        }
    }
    let arc = Arc::new(t);
    *guard = arc.clone();
    arc
}

/// Stirling coefficients B_{2m}/(2m(2m-1)) for m = 1..=count at the given
/// precision.
fn stirling_coeffs(count: usize, prec: Prec) -> Arc<Vec<BigFixed>> {
    static CACHE: OnceLock<Mutex<std::collections::HashMap<usize, Arc<Vec<BigFixed>>>>> =
        OnceLock::new();
    let map = CACHE.get_or_init(|| Mutex::new(std::collections::HashMap::new()));
    {
        let guard = map.lock().unwrap();
        if let Some(v) = guard.get(&prec.frac_limbs) {
            if v.len() >= count {
                return v.clone();
            }
        }
    }
    let tangents = tangent_numbers(count);
    let mut coeffs = Vec::with_capacity(count);
    for m in 1..=count {
        // C_m = (-1)^{m-1} T_m / ((2m-1) · 2^{2m} · (2^{2m}-1))
        let mut limbs = vec![0u64; prec.frac_limbs];
        limbs.extend_from_slice(&tangents[m - 1]);
        let mut v = BigFixed {
            sign: if m % 2 == 1 { 1 } else { -1 },
            limbs,
            frac_limbs: prec.frac_limbs,
        };
        v.pad();
        v = v.div_small(2 * m as u64 - 1).shr_bits(2 * m);
        // divide by (2^{2m} - 1): x/(2^{2m}-1) = Σ_{j>=1} x >> 2mj
        let mut acc = BigFixed::zero(prec);
        let mut y = v.shr_bits(2 * m);
        while !y.is_zero() {
            acc = acc.add(&y);
            y = y.shr_bits(2 * m);
        }
        coeffs.push(acc);
    }
    let arc = Arc::new(coeffs);
    map.lock().unwrap().insert(prec.frac_limbs, arc.clone());
    arc
}

/// Ratios C_m/C_{m-1} of the Stirling coefficients (plus C_1 itself), so the
/// series can be carried as a running term with modest factors. The naive
/// form C_m · y^{1-2m} pairs a huge coefficient with a value near the
/// fixed-point grid floor and amplifies its quantization error by |C_m|.
fn stirling_ratios(count: usize, prec: Prec) -> Arc<(BigFixed, Vec<BigFixed>)> {
    static CACHE: OnceLock<Mutex<std::collections::HashMap<usize, Arc<(BigFixed, Vec<BigFixed>)>>>> =
        OnceLock::new();
    let map = CACHE.get_or_init(|| Mutex::new(std::collections::HashMap::new()));
    {
        let guard = map.lock().unwrap();
        if let Some(v) = guard.get(&prec.frac_limbs) {
            if v.1.len() + 1 >= count {
                return v.clone();
            }
        }
    }
    let coeffs = stirling_coeffs(count.max(24), prec);
    let mut ratios = Vec::with_capacity(coeffs.len() - 1);
    for m in 1..coeffs.len() {
        ratios.push(coeffs[m].div(&coeffs[m - 1]));
    }
    let arc = Arc::new((coeffs[0].clone(), ratios));
    map.lock().unwrap().insert(prec.frac_limbs, arc.clone());
    arc
}

/// ln Γ(x) for x > 0 via argument shifting and the Stirling series with exact
/// Bernoulli rationals.
pub fn lngamma(x: &BigFixed, prec: Prec) -> BigFixed {
    assert!(x.sign > 0);
    let digits = -prec.eps_log10() - 6.0;
    let x_min = (digits * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI) * 1.3)
        .max(24.0);
    let mut y = x.clone();
    let mut shift_product: Option<BigFixed> = None;
    while y.to_f64() < x_min {
        shift_product = Some(match shift_product {
            None => y.clone(),
            Some(p) => p.mul(&y),
        });
        y = y.add(&BigFixed::one(prec));
    }
    let c = consts_for(prec);
    let ln_y = ln(&y);
    let half = BigFixed::one(prec).shr_bits(1);
    let mut s = y.sub(&half).mul(&ln_y).sub(&y).add(&c.ln_two_pi_half);
    let inv = y.recip();
    let inv2 = inv.mul(&inv);
    // running term C_m y^{1-2m}: start at C_1/y, multiply by ratio/y² onward
    let mut ratios = stirling_ratios(24, prec);
    let mut term = ratios.0.mul(&inv);
    let mut m = 1usize;
    loop {
        if term.is_zero() {
            break;
        }
        s = s.add(&term);
        if m > ratios.1.len() {
            ratios = stirling_ratios(m + 16, prec);
        }
        term = term.mul(&ratios.1[m - 1]).mul(&inv2);
        m += 1;
        if m > 2000 {
            break;
        }
    }
    if let Some(p) = shift_product {
        s = s.sub(&ln(&p));
    }
    s
}

/// 1/Γ(x) for arbitrary real x in big precision (0 at the poles).
pub fn rgamma(x: &BigFixed, prec: Prec) -> BigFixed {
    if x.sign > 0 && x.to_f64() >= 0.5 {
        exp(&lngamma(x, prec).neg())
    } else {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        let s = sinpi(x);
        if s.is_zero() {
            return BigFixed::zero(prec);
        }
        let one_minus = BigFixed::one(prec).sub(x);
        let g = exp(&lngamma(&one_minus, prec));
        s.mul(&g).div(&consts_for(prec).pi)
    }
}

/// Complex value in big precision.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFixed,
    pub im: BigFixed,
}

impl BigComplex {
    pub fn from_c64(z: num_complex::Complex64, prec: Prec) -> Self {
        BigComplex {
            re: BigFixed::from_f64(z.re, prec),
            im: BigFixed::from_f64(z.im, prec),
        }
    }

    pub fn zero(prec: Prec) -> Self {
        BigComplex {
            re: BigFixed::zero(prec),
            im: BigFixed::zero(prec),
        }
    }

    pub fn one(prec: Prec) -> Self {
        BigComplex {
            re: BigFixed::one(prec),
            im: BigFixed::zero(prec),
        }
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, s: &BigFixed) -> Self {
        BigComplex {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    /// Magnitude as log10, or None for zero.
    pub fn log10_abs(&self) -> Option<f64> {
        let lr = self.re.log2_abs();
        let li = self.im.log2_abs();
        let l2 = match (lr, li) {
            (None, None) => return None,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.max(b) + 0.5 * (1.0 + 2f64.powf(-(a - b).abs() * 2.0)).log2(),
        };
        Some(l2 * std::f64::consts::LN_2 / std::f64::consts::LN_10)
    }

    pub fn recip(&self) -> Self {
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let inv = n.recip();
        BigComplex {
            re: self.re.mul(&inv),
            im: self.im.mul(&inv).neg(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Prec = Prec { frac_limbs: 4 };

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn roundtrip_f64() {
        for &x in &[0.0, 1.0, -3.75, 1e-18, 7.0 / 3.0, 1e18] {
            let v = BigFixed::from_f64(x, P);
            assert_eq!(v.to_f64(), x);
        }
    }

    #[test]
    fn add_sub_mul() {
        let a = BigFixed::from_f64(2.5, P);
        let b = BigFixed::from_f64(-1.25, P);
        assert_eq!(a.add(&b).to_f64(), 1.25);
        assert_eq!(a.sub(&b).to_f64(), 3.75);
        assert_eq!(a.mul(&b).to_f64(), -3.125);
        assert_eq!(a.mul_small(4).to_f64(), 10.0);
        assert_eq!(a.div_small(2).to_f64(), 1.25);
    }

    #[test]
    fn reciprocal_newton() {
        for &x in &[3.0, 1e-8, 7.77e12, -0.3] {
            let v = BigFixed::from_f64(x, P);
            let r = v.recip();
            let back = r.mul(&v).to_f64();
            assert!(close(back, 1.0, 1e-30), "recip of {x}: {back}");
        }
    }

    #[test]
    fn pi_and_ln2_against_f64() {
        let prec = Prec::for_digits(50);
        assert!(close(pi(prec).to_f64(), std::f64::consts::PI, 1e-15));
        assert!(close(
            consts_for(prec).ln2.to_f64(),
            std::f64::consts::LN_2,
            1e-15
        ));
    }

    #[test]
    fn exp_ln_roundtrip() {
        let prec = Prec::for_digits(40);
        for &x in &[0.3, 1.0, 10.5, 120.0] {
            let v = BigFixed::from_f64(x, prec);
            let r = ln(&exp(&v));
            assert!(close(r.to_f64(), x, 1e-35), "exp/ln at {x}");
        }
    }

    #[test]
    fn lngamma_integers_factorial() {
        let prec = Prec::for_digits(45);
        // Γ(11) = 10! = 3628800
        let g = exp(&lngamma(&BigFixed::from_f64(11.0, prec), prec));
        assert!(close(g.to_f64(), 3628800.0, 1e-30));
        // Γ(1/2) = √π
        let gh = exp(&lngamma(&BigFixed::from_f64(0.5, prec), prec));
        assert!(close(gh.to_f64(), std::f64::consts::PI.sqrt(), 1e-15));
    }

    #[test]
    fn bernoulli_via_tangent_numbers() {
        // spot-check the Stirling coefficients against the exact rationals:
        // C_1 = 1/12, C_2 = -1/360, C_7 = B14/(14·13) = 7/(6·182) = 1/156
        let prec = Prec::for_digits(40);
        let c = stirling_coeffs(8, prec);
        assert!(close(c[0].to_f64(), 1.0 / 12.0, 1e-30));
        assert!(close(c[1].to_f64(), -1.0 / 360.0, 1e-30));
        assert!(close(c[6].to_f64(), 1.0 / 156.0, 1e-30));
    }

    #[test]
    fn rgamma_poles_and_reflection() {
        let prec = Prec::for_digits(40);
        for &x in &[0.0, -1.0, -5.0] {
            assert!(rgamma(&BigFixed::from_f64(x, prec), prec).is_zero());
        }
        // 1/Γ(-0.5) = -1/(2√π)
        let r = rgamma(&BigFixed::from_f64(-0.5, prec), prec);
        let expected = -1.0 / (2.0 * std::f64::consts::PI.sqrt());
        assert!(close(r.to_f64(), expected, 1e-14));
    }

    #[test]
    fn sinpi_values() {
        let prec = Prec::for_digits(40);
        assert!(sinpi(&BigFixed::from_f64(3.0, prec)).is_zero());
        assert!(close(sinpi(&BigFixed::from_f64(0.5, prec)).to_f64(), 1.0, 1e-30));
        assert!(close(
            sinpi(&BigFixed::from_f64(1.0 / 6.0, prec)).to_f64(),
            0.5,
            1e-25
        ));
    }

    #[test]
    fn complex_mul_and_recip() {
        let prec = Prec::for_digits(40);
        let z = BigComplex::from_c64(num_complex::Complex64::new(1.5, -2.5), prec);
        let w = z.mul(&z.recip()).to_c64();
        assert!(close(w.re, 1.0, 1e-30) && w.im.abs() < 1e-30);
    }
}
