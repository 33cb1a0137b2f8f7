//! Exact arithmetic in the cyclotomic field `Q(ζ)`, `ζ` a primitive 12th root of unity.
//!
//! Elements are stored as `c₀ + c₁ζ + c₂ζ² + c₃ζ³` reduced modulo
//! `Φ₁₂(ζ) = ζ⁴ − ζ² + 1`. The field contains `i = ζ³` and the primitive cube
//! root of unity `ω = ζ⁴ = ζ² − 1`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Builds the rational `p/q`. Panics if `q == 0`.
pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Element of `Q(ζ₁₂)` in reduced power-basis form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    c: [Rational; 4],
}

impl Scalar {
    pub fn from_coeffs(c: [Rational; 4]) -> Self {
        Scalar { c }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Scalar { c: c.map(|v| Rational::from_integer(BigInt::from(v))) }
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn zero() -> Self {
        Scalar { c: [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        Self::from_rational(rational(p, q))
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut s = Self::zero();
        s.c[0] = r;
        s
    }

    /// The square root of −1 used throughout, `i = ζ³`.
    pub fn i() -> Self {
        zeta_power(3)
    }

    /// The primitive cube root of unity `ω = ζ⁴`.
    pub fn omega() -> Self {
        zeta_power(4)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.c[0].clone())
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // a⁻¹ = σ₅(a)σ₇(a)σ₁₁(a) / N(a) with N(a) the field norm, a rational.
        let conj = self.galois(5) * self.galois(7) * self.galois(11);
        let norm = (self * &conj).to_rational().ok_or_else(|| Error::Internal("field norm is not rational".into()))?;
        Ok(conj.scale(&(Rational::one() / norm)))
    }

    /// Image under the Galois automorphism `ζ ↦ ζᵏ` (`k` coprime to 12).
    pub fn galois(&self, k: i64) -> Scalar {
        let mut out = Scalar::zero();
        for (j, cj) in self.c.iter().enumerate() {
            if !cj.is_zero() {
                out += zeta_power(k * j as i64).scale(cj);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        if r.is_one() {
            return self.clone();
        }
        Scalar { c: std::array::from_fn(|k| if self.c[k].is_zero() { Rational::zero() } else { &self.c[k] * r }) }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Value under the complex embedding `ζ ↦ exp(2πi·j/12)`.
    pub fn embed(&self, j: i64) -> Complex64 {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 12.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for cj in &self.c {
            acc += p * cj.to_f64().unwrap_or(f64::NAN);
            p *= z;
        }
        acc
    }

    /// All `n`-th roots of `self` lying in `Q(ζ₁₂)` that can be recovered
    /// from double-precision approximations.
    ///
    /// Candidates are located numerically through two non-conjugate complex
    /// embeddings, rounded to small-height rationals and then checked
    /// exactly, so every returned value satisfies `r^n == self`. Roots with
    /// very large coefficients may be missed.
    pub fn nth_roots(&self, n: u32) -> Vec<Scalar> {
        match n {
            0 => return Vec::new(),
            1 => return vec![self.clone()],
            _ => {}
        }
        if self.is_zero() {
            return vec![Scalar::zero()];
        }
        let z1 = self.embed(1);
        let z5 = self.embed(5);
        let roots = |z: Complex64| -> Vec<Complex64> {
            let (r, theta) = z.to_polar();
            let rr = r.powf(1.0 / n as f64);
            (0..n)
                .map(|m| {
                    let a = (theta + 2.0 * std::f64::consts::PI * m as f64) / n as f64;
                    Complex64::from_polar(rr, a)
                })
                .collect()
        };
        let inv = embedding_inverse();
        let mut found: Vec<Scalar> = Vec::new();
        for w1 in roots(z1) {
            for w5 in roots(z5) {
                let rhs = [w1.re, w1.im, w5.re, w5.im];
                let mut coeffs = Vec::with_capacity(4);
                for row in inv.iter() {
                    let v: f64 = row.iter().zip(rhs.iter()).map(|(a, b)| a * b).sum();
                    match approx_rational(v) {
                        Some(q) => coeffs.push(q),
                        None => break,
                    }
                }
                if coeffs.len() != 4 {
                    continue;
                }
                let cand = Scalar { c: [coeffs[0].clone(), coeffs[1].clone(), coeffs[2].clone(), coeffs[3].clone()] };
                if found.contains(&cand) {
                    continue;
                }
                if cand.pow(n as i64).map(|p| &p == self).unwrap_or(false) {
                    found.push(cand);
                }
            }
        }
        found
    }

    /// Random element with small rational coefficients.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
        let mut c = [0i64; 4].map(|_| Rational::zero());
        for slot in c.iter_mut() {
            let num: i64 = rng.gen_range(-6..=6);
            let den: i64 = rng.gen_range(1..=5);
            *slot = rational(num, den);
        }
        Scalar { c }
    }

    /// Random nonzero rational, as used for sampling the norm-one torus.
    pub fn random_nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
        loop {
            let num: i64 = rng.gen_range(-9..=9);
            let den: i64 = rng.gen_range(1..=7);
            if num != 0 {
                return Scalar::from_frac(num, den);
            }
        }
    }
}

/// `ζ₁₂^k` in reduced form; `zeta_power(12) == 1`.
pub fn zeta_power(k: i64) -> Scalar {
    let k = k.rem_euclid(12);
    let (sign, j) = if k >= 6 { (-1, k - 6) } else { (1, k) };
    let base: [i64; 4] = match j {
        0 => [1, 0, 0, 0],
        1 => [0, 1, 0, 0],
        2 => [0, 0, 1, 0],
        3 => [0, 0, 0, 1],
        // ζ⁴ = ζ² − 1
        4 => [-1, 0, 1, 0],
        // ζ⁵ = ζ³ − ζ
        _ => [0, -1, 0, 1],
    };
    Scalar::from_ints(base.map(|v| v * sign))
}

#[allow(clippy::needless_range_loop)]
fn embedding_inverse() -> [[f64; 4]; 4] {
    // Rows: Re/Im of ζ^k under the embeddings j = 1 and j = 5.
    let mut m = [[0.0f64; 8]; 4];
    for k in 0..4 {
        let a1 = 2.0 * std::f64::consts::PI * (k as f64) / 12.0;
        let a5 = 2.0 * std::f64::consts::PI * (5 * k) as f64 / 12.0;
        m[0][k] = a1.cos();
        m[1][k] = a1.sin();
        m[2][k] = a5.cos();
        m[3][k] = a5.sin();
    }
    for (r, row) in m.iter_mut().enumerate() {
        row[4 + r] = 1.0;
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap_or(col);
        m.swap(col, piv);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for r in 0..4 {
            if r != col {
                let f = m[r][col];
                if f != 0.0 {
                    for c in 0..8 {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    let mut inv = [[0.0; 4]; 4];
    for r in 0..4 {
        inv[r].copy_from_slice(&m[r][4..8]);
    }
    inv
}

/// Continued-fraction recovery of a small-height rational from a float.
fn approx_rational(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let tol = 1e-9 * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..40 {
        let a = rest.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if k1 > 1_000_000_000 {
            return None;
        }
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(Rational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = rest - a;
        if frac.abs() < 1e-15 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

fn mul_raw(a: &Scalar, b: &Scalar) -> Scalar {
    // Matrices in this crate are mostly rational; skip the full product.
    if a.is_rational() {
        return b.scale(&a.c[0]);
    }
    if b.is_rational() {
        return a.scale(&b.c[0]);
    }
    let mut p: [Rational; 7] = std::array::from_fn(|_| Rational::zero());
    for (i, ai) in a.c.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.c.iter().enumerate() {
            if !bj.is_zero() {
                p[i + j] += ai * bj;
            }
        }
    }
    // ζᵏ = ζᵏ⁻² − ζᵏ⁻⁴ for k ≥ 4.
    for k in (4..7).rev() {
        if !p[k].is_zero() {
            let v = std::mem::take(&mut p[k]);
            p[k - 2] += &v;
            p[k - 4] -= v;
        }
    }
    let [c0, c1, c2, c3, ..] = p;
    Scalar { c: [c0, c1, c2, c3] }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = mul_raw(self, rhs);
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { c: self.c.map(|v| -v) }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    let mut out = a.clone();
    out += b;
    out
});
forward_binop!(Sub, sub, |a, b| {
    let mut out = a.clone();
    out -= b;
    out
});
forward_binop!(Mul, mul, mul_raw);

/// Panics on division by zero; use [`Scalar::inv`] for the fallible form.
impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.c[0]);
        }
        let mut first = true;
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let neg = ck.is_negative();
            let mag = ck.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "ζ")?,
                (1, false) => write!(f, "{mag}ζ")?,
                (_, true) => write!(f, "ζ^{k}")?,
                (_, false) => write!(f, "{mag}ζ^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.c.iter().map(|r| r.to_string()).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs: Vec<String> = Vec::deserialize(d)?;
        if strs.len() != 4 {
            return Err(D::Error::custom(format!("scalar needs 4 coefficients, got {}", strs.len())));
        }
        let mut c: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        for (slot, s) in c.iter_mut().zip(strs.iter()) {
            *slot = s.trim().parse::<Rational>().map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}")))?;
        }
        Ok(Scalar { c })
    }
}
