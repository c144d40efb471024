//! Inertial data of reducible mod-p representations of niveau 1, matching
//! against the dense families of points on each component, and the
//! potentially Barsotti–Tate lift predicate
//! `W(r̄) ∩ JH(σ̄(τ)) ≠ ∅`.
//!
//! The family attached to a weight `σ̄_{t,s}` consists of extensions of
//! `ε̄^{-1} ∏ ω_{σ_i}^{t_i}` by `∏ ω_{σ_i}^{s_i + t_i}`, peu ramifiée when the
//! ratio of the two characters is cyclotomic. Matched weight sets are the
//! weights whose family has the given inertial datum; this is the fragment
//! of `W(r̄)` the library can compute.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::cycles::{BasisKind, Cycle};
use crate::error::{Error, Result};
use crate::field_arith::{expect_level, CharExponent, FieldDatum, Level};
use crate::jh::jh_set;
use crate::tame_types::TameType;
use crate::weights::{enumerate_weights, SerreWeight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RamFlag {
    Peu,
    Tres,
    NotApplicable,
}

impl RamFlag {
    pub fn tag(self) -> &'static str {
        match self {
            RamFlag::Peu => "peu",
            RamFlag::Tres => "tres",
            RamFlag::NotApplicable => "na",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Niveau {
    One,
    Two,
}

/// Semisimplified restriction to inertia, plus the peu/très flag.
///
/// Niveau 1: `sub_exp` and `quot_exp` are the level-1 exponents of the
/// subrepresentation and quotient characters. Niveau 2: `sub_exp` is a
/// level-2 exponent `η` and `quot_exp = q η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InertialDatum {
    niveau: Niveau,
    sub_exp: CharExponent,
    quot_exp: CharExponent,
    ram_flag: RamFlag,
}

impl InertialDatum {
    pub fn niveau_one(fd: &FieldDatum, sub: CharExponent, quot: CharExponent, flag: RamFlag) -> Result<Self> {
        expect_level(sub, Level::One)?;
        expect_level(quot, Level::One)?;
        let cyclotomic = fd.sub(sub, quot)? == fd.cyclotomic_exponent();
        if cyclotomic == (flag == RamFlag::NotApplicable) {
            return Err(Error::InvalidDatum(format!(
                "flag {} with sub {sub}, quot {quot}: peu/tres is required exactly when the ratio is cyclotomic",
                flag.tag()
            )));
        }
        Ok(InertialDatum { niveau: Niveau::One, sub_exp: sub, quot_exp: quot, ram_flag: flag })
    }

    pub fn niveau_two(fd: &FieldDatum, eta: CharExponent) -> Result<Self> {
        expect_level(eta, Level::Two)?;
        let conj = fd.scale(eta, fd.q() as i128);
        if conj == eta {
            return Err(Error::InvalidDatum(format!("{eta} is fixed by Frobenius; not niveau 2")));
        }
        Ok(InertialDatum { niveau: Niveau::Two, sub_exp: eta.min(conj), quot_exp: eta.max(conj), ram_flag: RamFlag::NotApplicable })
    }

    pub fn niveau(&self) -> Niveau {
        self.niveau
    }

    pub fn sub_exp(&self) -> CharExponent {
        self.sub_exp
    }

    pub fn quot_exp(&self) -> CharExponent {
        self.quot_exp
    }

    pub fn ram_flag(&self) -> RamFlag {
        self.ram_flag
    }

    pub fn key(&self) -> String {
        self.to_string()
    }

    /// Parses `"n1:sub,quot,flag"` (flag one of `peu`, `tres`, `na`) or `"n2:c"`.
    pub fn parse(fd: &FieldDatum, input: &str) -> Result<Self> {
        if let Some(body) = input.strip_prefix("n1:") {
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::parse(input, 3, "expected \"n1:sub,quot,flag\""));
            }
            let mut pos = 3;
            let mut nums = [0i128; 2];
            for (slot, part) in nums.iter_mut().zip(&parts) {
                *slot = part.trim().parse().map_err(|_| Error::parse(input, pos, "expected an integer exponent"))?;
                pos += part.len() + 1;
            }
            let flag = match parts[2].trim() {
                "peu" => RamFlag::Peu,
                "tres" => RamFlag::Tres,
                "na" => RamFlag::NotApplicable,
                _ => return Err(Error::parse(input, pos, "flag must be peu, tres or na")),
            };
            InertialDatum::niveau_one(fd, fd.level_one(nums[0]), fd.level_one(nums[1]), flag)
                .map_err(|e| Error::parse(input, 3, e.to_string()))
        } else if let Some(body) = input.strip_prefix("n2:") {
            let c: i128 = body.trim().parse().map_err(|_| Error::parse(input, 3, "expected an integer exponent"))?;
            InertialDatum::niveau_two(fd, fd.level_two(c)).map_err(|e| Error::parse(input, 3, e.to_string()))
        } else {
            Err(Error::parse(input, 0, "datum spec must start with \"n1:\" or \"n2:\""))
        }
    }
}

impl fmt::Display for InertialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.niveau {
            Niveau::One => write!(f, "n1:{},{},{}", self.sub_exp, self.quot_exp, self.ram_flag.tag()),
            Niveau::Two => write!(f, "n2:{}", self.sub_exp),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Sub and quotient compared in the order the families are written.
    #[default]
    Ordered,
    /// Either order, ignoring the extension for the swapped orientation.
    Unordered,
}

/// The inertial datum of the dense family of points attached to `w`.
pub fn datum_for_weight(fd: &FieldDatum, w: &SerreWeight) -> Result<InertialDatum> {
    if w.is_steinberg() {
        return Err(Error::SteinbergInput(w.key()));
    }
    let sub = fd.add(w.s_exponent(), w.twist())?;
    let quot = fd.sub(w.twist(), fd.cyclotomic_exponent())?;
    let flag = if fd.sub(sub, quot)? == fd.cyclotomic_exponent() { RamFlag::Peu } else { RamFlag::NotApplicable };
    InertialDatum::niveau_one(fd, sub, quot, flag)
}

pub fn match_weights(fd: &FieldDatum, d: &InertialDatum) -> Result<BTreeSet<SerreWeight>> {
    match_weights_with(fd, d, MatchMode::Ordered)
}

pub fn match_weights_with(fd: &FieldDatum, d: &InertialDatum, mode: MatchMode) -> Result<BTreeSet<SerreWeight>> {
    if d.niveau == Niveau::Two {
        return Err(Error::UnsupportedNiveau(2));
    }
    if d.ram_flag == RamFlag::Tres {
        return Ok(BTreeSet::new());
    }
    let mut out = BTreeSet::new();
    for w in enumerate_weights(fd, false) {
        let dw = datum_for_weight(fd, &w)?;
        let ordered = dw == *d;
        let swapped = mode == MatchMode::Unordered && dw.sub_exp == d.quot_exp && dw.quot_exp == d.sub_exp;
        if ordered || swapped {
            out.insert(w);
        }
    }
    Ok(out)
}

pub fn has_pbt_lift_of_type(fd: &FieldDatum, d: &InertialDatum, tau: &TameType) -> Result<bool> {
    Ok(pbt_lift_types(fd, d, std::slice::from_ref(tau))?[0])
}

/// [`has_pbt_lift_of_type`] for each of `types`, matching the datum once.
pub fn pbt_lift_types(fd: &FieldDatum, d: &InertialDatum, types: &[TameType]) -> Result<Vec<bool>> {
    let matched = match_weights(fd, d)?;
    types
        .iter()
        .map(|tau| Ok(jh_set(tau)?.iter().any(|(_, w)| matched.contains(w))))
        .collect()
}

/// Sum of the Z-side components containing the point.
pub fn components_through(fd: &FieldDatum, d: &InertialDatum) -> Result<Cycle> {
    let mut c = Cycle::zero(BasisKind::ZSide);
    for w in match_weights(fd, d)? {
        c.add_term(&w, &BigInt::one())?;
    }
    Ok(c)
}

/// Every valid niveau-1 datum, in `(sub, quot, flag)` order.
pub fn all_niveau_one_data(fd: &FieldDatum) -> Vec<InertialDatum> {
    let mut out = Vec::new();
    for sub in 0..fd.m1() as i128 {
        for quot in 0..fd.m1() as i128 {
            for flag in [RamFlag::Peu, RamFlag::Tres, RamFlag::NotApplicable] {
                if let Ok(d) = InertialDatum::niveau_one(fd, fd.level_one(sub), fd.level_one(quot), flag) {
                    out.push(d);
                }
            }
        }
    }
    out
}
