//! Serre weights `σ̄_{t,s} = ⊗_j (det^{t_j} Sym^{s_j} k^2) ⊗_{σ_j} F`.
//!
//! A weight is keyed by its `s`-vector and the exponent of its determinant
//! twist `∏_j det^{t_j} ∘ σ_j`. The `t`-vector itself is only defined up to
//! the digit relation, so it is recovered on demand in canonical form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field_arith::{expect_level, CharExponent, DigitVector, FieldDatum, Level};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SerreWeight {
    s: Vec<u32>,
    twist: CharExponent,
    field: FieldDatum,
}

impl SerreWeight {
    /// Builds a weight from an `s`-vector and a level-1 twist exponent.
    pub fn new(fd: &FieldDatum, s: Vec<u32>, twist: CharExponent) -> Result<Self> {
        if s.len() != fd.f() as usize {
            return Err(Error::LengthMismatch { expected: fd.f() as usize, got: s.len() });
        }
        fd.check_digits(&s)?;
        expect_level(twist, Level::One)?;
        Ok(SerreWeight { s, twist, field: *fd })
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn twist(&self) -> CharExponent {
        self.twist
    }

    pub fn field(&self) -> &FieldDatum {
        &self.field
    }

    /// Canonical `t`-digits of the twist (never all `p - 1`).
    pub fn t_digits(&self) -> DigitVector {
        self.field.digits_of(self.twist)
    }

    /// Exponent of `∏_j ω_{σ_j}^{s_j}`.
    pub fn s_exponent(&self) -> CharExponent {
        let d = self.field.digit_vector(self.s.clone()).expect("validated at construction");
        self.field.exponent_of_digits(&d).expect("length f")
    }

    pub fn is_steinberg(&self) -> bool {
        let top = (self.field.p() - 1) as u32;
        self.s.iter().all(|&s| s == top)
    }

    pub fn twist_by(&self, c: CharExponent) -> Result<Self> {
        Ok(SerreWeight { s: self.s.clone(), twist: self.field.add(self.twist, c)?, field: self.field })
    }

    pub fn dim(&self) -> u64 {
        self.s.iter().map(|&s| u64::from(s) + 1).product()
    }

    /// The `"w:s0,s1,...;c"` key.
    pub fn key(&self) -> String {
        self.to_string()
    }

    pub fn parse(fd: &FieldDatum, input: &str) -> Result<Self> {
        let spec = WeightSpec::from_str(input)?;
        let twist = fd.level_one(i128::from(spec.twist));
        SerreWeight::new(fd, spec.s, twist).map_err(|e| Error::parse(input, 2, e.to_string()))
    }
}

impl fmt::Display for SerreWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.s.iter().map(u32::to_string).collect();
        write!(f, "w:{};{}", s.join(","), self.twist.value())
    }
}

/// Unvalidated `"w:s0,...;c"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpec {
    pub s: Vec<u32>,
    pub twist: u64,
}

impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let body = input
            .strip_prefix("w:")
            .ok_or_else(|| Error::parse(input, 0, "weight spec must start with \"w:\""))?;
        let (digits, twist) = body
            .split_once(';')
            .ok_or_else(|| Error::parse(input, input.len(), "missing ';' before the twist exponent"))?;
        let mut s = Vec::new();
        let mut pos = 2;
        for part in digits.split(',') {
            let d = part.trim().parse::<u32>().map_err(|_| Error::parse(input, pos, "expected a digit"))?;
            s.push(d);
            pos += part.len() + 1;
        }
        let twist_pos = 2 + digits.len() + 1;
        let twist = twist
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::parse(input, twist_pos, "expected a twist exponent"))?;
        Ok(WeightSpec { s, twist })
    }
}

/// `σ̄_{t,s}` from digit vectors; an all-`(p - 1)` `t` is accepted and
/// canonicalizes to the trivial twist.
pub fn weight_from_st(fd: &FieldDatum, s: Vec<u32>, t: Vec<u32>) -> Result<SerreWeight> {
    if t.len() != fd.f() as usize {
        return Err(Error::LengthMismatch { expected: fd.f() as usize, got: t.len() });
    }
    let t = fd.digit_vector(t)?;
    let twist = fd.exponent_of_digits(&t)?;
    SerreWeight::new(fd, s, twist)
}

pub fn is_steinberg(w: &SerreWeight) -> bool {
    w.is_steinberg()
}

pub fn twist_weight(w: &SerreWeight, c: CharExponent) -> Result<SerreWeight> {
    w.twist_by(c)
}

pub fn weight_dim(w: &SerreWeight) -> u64 {
    w.dim()
}

/// All weights, ordered by `s`-vector (lexicographic) and then twist.
pub fn enumerate_weights(fd: &FieldDatum, include_steinberg: bool) -> Vec<SerreWeight> {
    let f = fd.f() as usize;
    let p = fd.p() as u32;
    let mut out = Vec::new();
    let mut s = vec![0u32; f];
    loop {
        for c in 0..fd.m1() {
            let w = SerreWeight { s: s.clone(), twist: fd.level_one(i128::from(c)), field: *fd };
            if include_steinberg || !w.is_steinberg() {
                out.push(w);
            }
        }
        // odometer, last digit fastest
        let mut i = f;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            s[i] += 1;
            if s[i] < p {
                break;
            }
            s[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn fd(p: u64, f: u32) -> FieldDatum {
        FieldDatum::new(p, f, 1).unwrap()
    }

    #[test]
    fn weight_from_st_examples() {
        let k = fd(3, 1);
        let triv = weight_from_st(&k, vec![0], vec![0]).unwrap();
        assert_eq!((triv.s(), triv.twist().value(), triv.dim()), (&[0][..], 0, 1));

        let st = weight_from_st(&k, vec![2], vec![2]).unwrap();
        assert!(st.is_steinberg());
        assert_eq!(st.twist().value(), 0);
        assert_eq!(st.t_digits().digits(), &[0]);

        let k = fd(3, 2);
        let w = weight_from_st(&k, vec![1, 0], vec![2, 1]).unwrap();
        assert_eq!(w.twist().value(), 5);

        assert!(matches!(weight_from_st(&k, vec![3, 0], vec![0, 0]), Err(Error::DigitRange { .. })));
        assert!(matches!(weight_from_st(&k, vec![0, 0], vec![0, 4]), Err(Error::DigitRange { .. })));
    }

    #[test]
    fn steinberg_predicate() {
        let k = fd(3, 1);
        assert!(SerreWeight::new(&k, vec![2], k.level_one(0)).unwrap().is_steinberg());
        assert!(!SerreWeight::new(&k, vec![1], k.level_one(1)).unwrap().is_steinberg());
        let k = fd(3, 2);
        assert!(!SerreWeight::new(&k, vec![2, 1], k.level_one(0)).unwrap().is_steinberg());
    }

    #[test]
    fn twisting() {
        let k = fd(3, 1);
        let w = SerreWeight::new(&k, vec![1], k.level_one(0)).unwrap();
        assert_eq!(twist_weight(&w, k.level_one(0)).unwrap(), w);
        let w1 = twist_weight(&w, k.level_one(1)).unwrap();
        assert_eq!((w1.s(), w1.twist().value()), (&[1][..], 1));
        assert_eq!(twist_weight(&w, k.level_one(k.m1() as i128)).unwrap(), w);
        assert!(twist_weight(&w, k.level_two(1)).is_err());
    }

    #[test]
    fn dims() {
        let k = fd(5, 2);
        assert_eq!(SerreWeight::new(&k, vec![0, 0], k.level_one(3)).unwrap().dim(), 1);
        assert_eq!(SerreWeight::new(&k, vec![3, 2], k.level_one(0)).unwrap().dim(), 12);
        let k = fd(3, 1);
        assert_eq!(SerreWeight::new(&k, vec![1], k.level_one(0)).unwrap().dim(), 2);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_weights(&fd(3, 1), true).len(), 6);
        assert_eq!(enumerate_weights(&fd(3, 1), false).len(), 4);
        assert_eq!(enumerate_weights(&fd(5, 1), true).len(), 20);
        for (p, f) in [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 3)] {
            let k = fd(p, f);
            let all = enumerate_weights(&k, true);
            assert_eq!(all.len() as u64, k.q() * k.m1());
            let distinct: BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
            assert_eq!(all.iter().filter(|w| w.is_steinberg()).count() as u64, k.m1());
            let mut sorted = all.clone();
            sorted.sort();
            assert_eq!(sorted, all);
        }
    }

    #[test]
    fn twist_equality_is_residue_equality() {
        // all pairs of t-vectors at (3,2)
        let k = fd(3, 2);
        let ts: Vec<Vec<u32>> = (0..9).map(|c| vec![c % 3, c / 3]).collect();
        for t in &ts {
            for u in &ts {
                let a = weight_from_st(&k, vec![1, 0], t.clone()).unwrap();
                let b = weight_from_st(&k, vec![1, 0], u.clone()).unwrap();
                let et = (t[0] + 3 * t[1]) % 8;
                let eu = (u[0] + 3 * u[1]) % 8;
                assert_eq!(a == b, et == eu);
            }
        }
    }

    #[test]
    fn key_round_trip() {
        let k = fd(5, 2);
        for w in enumerate_weights(&k, true).into_iter().step_by(37) {
            assert_eq!(SerreWeight::parse(&k, &w.key()).unwrap(), w);
        }
        assert!(matches!(SerreWeight::parse(&k, "x:1,2;3"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(SerreWeight::parse(&k, "w:1,2"), Err(Error::Parse { .. })));
        assert!(matches!(SerreWeight::parse(&k, "w:1,a;3"), Err(Error::Parse { position: 4, .. })));
        assert!(SerreWeight::parse(&k, "w:1;3").is_err());
    }
}
