//! Arithmetic context `(p, f, e)` and exponent arithmetic for characters of
//! `k^×` (level 1) and `l^×` (level 2), where `k` has `q = p^f` elements and
//! `l` is its quadratic extension.
//!
//! A character of `k^×` is stored as its exponent `c` with respect to the
//! fixed embedding `σ_0`, i.e. as `σ_0^c`. Under this convention the
//! fundamental character `ω_{σ_i}` has exponent `p^{f-i} mod (q - 1)`, so
//! `e_0 = 1` and `p · e_{i+1} ≡ e_i`. Level 2 is the same with `2f` in place
//! of `f` and modulus `q^2 - 1`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Level of a character: 1 for `k^×`, 2 for `l^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Level {
    One,
    Two,
}

impl Level {
    pub fn as_u8(self) -> u8 {
        match self {
            Level::One => 1,
            Level::Two => 2,
        }
    }
}

/// The arithmetic context of a finite extension `K / Q_p` with residue
/// degree `f` and ramification index `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldDatum {
    p: u64,
    f: u32,
    e: u32,
    q: u64,
    m1: u64,
    m2: u64,
}

/// A character exponent, reduced to `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharExponent {
    value: u64,
    level: Level,
}

impl CharExponent {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn level(self) -> Level {
        self.level
    }
}

impl fmt::Display for CharExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Base-`p` digit vector of length `f` or `2f` with entries in `[0, p - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitVector {
    digits: Vec<u32>,
}

impl DigitVector {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// False only for the all-`(p - 1)` vector.
    pub fn is_canonical(&self, p: u64) -> bool {
        !self.digits.iter().all(|&d| u64::from(d) == p - 1)
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.digits
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldDatum {
    pub fn new(p: u64, f: u32, e: u32) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidField { p, f, e, reason: reason.into() };
        if !is_prime(p) {
            return Err(invalid("p must be prime"));
        }
        if p == 2 {
            return Err(invalid("p must be odd"));
        }
        if f == 0 || e == 0 {
            return Err(invalid("f and e must be positive"));
        }
        // q^2 must fit comfortably; exponent arithmetic multiplies residues mod q^2 - 1.
        let q = p.checked_pow(f).ok_or_else(|| invalid("p^f overflows"))?;
        let q2 = q
            .checked_mul(q)
            .filter(|&v| v < (1 << 31))
            .ok_or_else(|| invalid("p^(2f) too large"))?;
        Ok(FieldDatum { p, f, e, q, m1: q - 1, m2: q2 - 1 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// `q = p^f`, the size of the residue field.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m1(&self) -> u64 {
        self.m1
    }

    pub fn m2(&self) -> u64 {
        self.m2
    }

    pub fn modulus(&self, level: Level) -> u64 {
        match level {
            Level::One => self.m1,
            Level::Two => self.m2,
        }
    }

    /// Number of embeddings at the given level: `f` or `2f`.
    pub fn embeddings(&self, level: Level) -> usize {
        match level {
            Level::One => self.f as usize,
            Level::Two => 2 * self.f as usize,
        }
    }

    pub fn exponent(&self, value: i128, level: Level) -> CharExponent {
        let m = i128::from(self.modulus(level));
        CharExponent { value: value.rem_euclid(m) as u64, level }
    }

    pub fn level_one(&self, value: i128) -> CharExponent {
        self.exponent(value, Level::One)
    }

    pub fn level_two(&self, value: i128) -> CharExponent {
        self.exponent(value, Level::Two)
    }

    pub fn add(&self, a: CharExponent, b: CharExponent) -> Result<CharExponent> {
        same_level(a, b)?;
        Ok(self.exponent(i128::from(a.value) + i128::from(b.value), a.level))
    }

    pub fn sub(&self, a: CharExponent, b: CharExponent) -> Result<CharExponent> {
        same_level(a, b)?;
        Ok(self.exponent(i128::from(a.value) - i128::from(b.value), a.level))
    }

    pub fn scale(&self, a: CharExponent, k: i128) -> CharExponent {
        self.exponent(i128::from(a.value) * k, a.level)
    }

    /// Exponent of `ω_{σ_i}` (level 1) or `ω_{σ'_i}` (level 2).
    pub fn fundamental_exponent(&self, i: usize, level: Level) -> Result<CharExponent> {
        let n = self.embeddings(level);
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, bound: n });
        }
        let m = self.modulus(level);
        let mut v = 1u64 % m;
        for _ in 0..(n - i) % n {
            v = v * self.p % m;
        }
        Ok(CharExponent { value: v, level })
    }

    fn fundamental_exponents(&self, level: Level) -> Vec<u64> {
        (0..self.embeddings(level))
            .map(|i| self.fundamental_exponent(i, level).expect("index in range").value)
            .collect()
    }

    /// The unique digit vector `γ`, not all `p - 1`, with
    /// `Σ γ_i e_i ≡ c` modulo the level's modulus.
    pub fn digits_of(&self, c: CharExponent) -> DigitVector {
        // With e_0 = 1 and e_i = p^{n-i}, γ_0 is the units digit of c and
        // γ_i is the base-p digit at position n - i.
        let n = self.embeddings(c.level);
        let mut base_p = Vec::with_capacity(n);
        let mut v = c.value;
        for _ in 0..n {
            base_p.push((v % self.p) as u32);
            v /= self.p;
        }
        let digits = (0..n).map(|i| base_p[(n - i) % n]).collect();
        DigitVector { digits }
    }

    /// `Σ d_i e_i` reduced modulo the level's modulus.
    pub fn exponent_of_digits(&self, d: &DigitVector) -> Result<CharExponent> {
        let level = self.level_for_len(d.len())?;
        let m = self.modulus(level);
        let v = d
            .digits
            .iter()
            .zip(self.fundamental_exponents(level))
            .fold(0u64, |acc, (&g, e)| (acc + u64::from(g) * e) % m);
        Ok(CharExponent { value: v, level })
    }

    /// Validates a digit vector of length `f` or `2f`.
    pub fn digit_vector(&self, digits: Vec<u32>) -> Result<DigitVector> {
        self.level_for_len(digits.len())?;
        self.check_digits(&digits)?;
        Ok(DigitVector { digits })
    }

    pub(crate) fn check_digits(&self, digits: &[u32]) -> Result<()> {
        for (position, &digit) in digits.iter().enumerate() {
            if u64::from(digit) >= self.p {
                return Err(Error::DigitRange { digit, max: (self.p - 1) as u32, position });
            }
        }
        Ok(())
    }

    fn level_for_len(&self, len: usize) -> Result<Level> {
        if len == self.f as usize {
            Ok(Level::One)
        } else if len == 2 * self.f as usize {
            Ok(Level::Two)
        } else {
            Err(Error::LengthMismatch { expected: self.f as usize, got: len })
        }
    }

    /// Exponent of the mod-p cyclotomic character on inertia, `(∏_i ω_{σ_i})^e`.
    pub fn cyclotomic_exponent(&self) -> CharExponent {
        let sum: u64 = self.fundamental_exponents(Level::One).iter().sum();
        self.level_one(i128::from(sum) * i128::from(self.e))
    }

    /// The level-2 exponent of `θ ∘ N_{l/k}` for a level-1 `θ`.
    pub fn norm_lift(&self, theta: CharExponent) -> Result<CharExponent> {
        expect_level(theta, Level::One)?;
        Ok(self.level_two(i128::from(theta.value) * i128::from(self.q + 1)))
    }

    /// Writes a level-2 character as `θ ∘ N_{l/k}` when it factors through the norm.
    pub fn factor_through_norm(&self, c: CharExponent) -> Result<Option<CharExponent>> {
        expect_level(c, Level::Two)?;
        let n = self.q + 1;
        Ok(c.value.is_multiple_of(n).then(|| self.level_one(i128::from(c.value / n))))
    }
}

impl fmt::Display for FieldDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} f={} e={}", self.p, self.f, self.e)
    }
}

fn same_level(a: CharExponent, b: CharExponent) -> Result<()> {
    expect_level(b, a.level)
}

pub(crate) fn expect_level(c: CharExponent, level: Level) -> Result<()> {
    if c.level == level {
        Ok(())
    } else {
        Err(Error::LevelMismatch { expected: level.as_u8(), got: c.level.as_u8() })
    }
}
