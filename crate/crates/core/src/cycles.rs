//! Cycles: integer formal sums of irreducible components.
//!
//! Z-side cycles live in the free abelian group on the components of the
//! stack of descent-data representations, which are labelled by
//! non-Steinberg weights. X-side cycles live on the components of the
//! reduced stack of all two-dimensional representations, labelled by every
//! Serre weight.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_arith::{expect_level, CharExponent, FieldDatum, Level};
use crate::groth_solver::NSolution;
use crate::jh::jh_set;
use crate::tame_types::TameType;
use crate::weights::SerreWeight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Non-Steinberg labels only.
    ZSide,
    /// All weight labels.
    XSide,
}

impl BasisKind {
    pub fn tag(self) -> &'static str {
        match self {
            BasisKind::ZSide => "Z",
            BasisKind::XSide => "X",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    basis: BasisKind,
    terms: BTreeMap<SerreWeight, BigInt>,
}

impl Cycle {
    pub fn zero(basis: BasisKind) -> Self {
        Cycle { basis, terms: BTreeMap::new() }
    }

    /// The component `[w]`.
    pub fn unit(basis: BasisKind, w: &SerreWeight) -> Result<Self> {
        let mut c = Cycle::zero(basis);
        c.add_term(w, &BigInt::one())?;
        Ok(c)
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn add_term(&mut self, w: &SerreWeight, coeff: &BigInt) -> Result<()> {
        if self.basis == BasisKind::ZSide && w.is_steinberg() {
            return Err(Error::SteinbergInput(w.key()));
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(w.clone()).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(w);
        }
        Ok(())
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, other: &Cycle, k: &BigInt) -> Result<()> {
        if other.basis != self.basis {
            return Err(Error::IdentityViolation("adding cycles on different bases".into()));
        }
        for (w, c) in &other.terms {
            self.add_term(w, &(c * k))?;
        }
        Ok(())
    }

    pub fn coeff(&self, w: &SerreWeight) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SerreWeight, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &SerreWeight> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn is_reduced_effective(&self) -> bool {
        self.terms.values().all(One::is_one)
    }

    /// Image under the inclusion of Z-side labels into X-side labels.
    pub fn to_x_side(&self) -> Cycle {
        Cycle { basis: BasisKind::XSide, terms: self.terms.clone() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CycleJson::from(self)).expect("cycle json")
    }

    pub fn from_json(fd: &FieldDatum, value: &serde_json::Value) -> Result<Self> {
        let raw: CycleJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::parse(&value.to_string(), 0, e.to_string()))?;
        let basis = match raw.basis.as_str() {
            "Z" => BasisKind::ZSide,
            "X" => BasisKind::XSide,
            other => return Err(Error::parse(other, 0, "basis must be \"Z\" or \"X\"")),
        };
        let mut c = Cycle::zero(basis);
        for t in raw.terms {
            let w = SerreWeight::parse(fd, &t.weight)?;
            let k = BigInt::from_str(&t.coeff.to_string())
                .map_err(|_| Error::parse(&t.coeff.to_string(), 0, "coefficient must be an integer"))?;
            c.add_term(&w, &k)?;
        }
        Ok(c)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| if c.is_one() { format!("[{}:{w}]", self.basis.tag()) } else { format!("{c}[{}:{w}]", self.basis.tag()) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct CycleJson {
    basis: String,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    weight: String,
    coeff: serde_json::Number,
}

pub(crate) fn big_to_json(c: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&c.to_string()).expect("integers are valid json numbers")
}

impl From<&Cycle> for CycleJson {
    fn from(c: &Cycle) -> Self {
        CycleJson {
            basis: c.basis.tag().to_string(),
            terms: c.terms.iter().map(|(w, k)| TermJson { weight: w.key(), coeff: big_to_json(k) }).collect(),
        }
    }
}

pub fn is_effective(c: &Cycle) -> bool {
    c.is_effective()
}

pub fn is_reduced_effective(c: &Cycle) -> bool {
    c.is_reduced_effective()
}

/// `Z(τ) = Σ_{J ∈ P_τ} [σ̄(τ)_J]`.
pub fn z_of_type(tau: &TameType) -> Result<Cycle> {
    let mut c = Cycle::zero(BasisKind::ZSide);
    for (_, w) in jh_set(tau)? {
        c.add_term(&w, &BigInt::one())?;
    }
    Ok(c)
}

/// `Σ_τ n_τ(σ) Z(τ)` without any postcondition.
pub fn bm_cycle_sum(sol: &NSolution) -> Result<Cycle> {
    let mut c = Cycle::zero(BasisKind::ZSide);
    for (tau, n) in sol.terms() {
        c.add_scaled(&z_of_type(tau)?, n)?;
    }
    Ok(c)
}

/// `Z(σ) = Σ_τ n_τ(σ) Z(τ)`, checked to be the single component `[σ]`.
pub fn bm_cycle(w: &SerreWeight, sol: &NSolution) -> Result<Cycle> {
    if w.is_steinberg() {
        return Err(Error::SteinbergInput(w.key()));
    }
    let c = bm_cycle_sum(sol)?;
    let expected = Cycle::unit(BasisKind::ZSide, w)?;
    if c != expected {
        return Err(Error::IdentityViolation(format!("Z({w}) = {c}, expected {expected}")));
    }
    Ok(c)
}

/// Both sides of `Z(τ) = Σ_{σ ∈ JH(σ̄(τ))} Z(σ)`.
pub fn z_identity_sides(tau: &TameType, sols: &BTreeMap<SerreWeight, NSolution>) -> Result<(Cycle, Cycle)> {
    let lhs = z_of_type(tau)?;
    let mut rhs = Cycle::zero(BasisKind::ZSide);
    for (_, sigma) in jh_set(tau)? {
        let sol = sols.get(&sigma).ok_or_else(|| Error::MissingSolution(sigma.key()))?;
        rhs.add_scaled(&bm_cycle_sum(sol)?, &BigInt::one())?;
    }
    Ok((lhs, rhs))
}

pub fn verify_z_identity(tau: &TameType, sols: &BTreeMap<SerreWeight, NSolution>) -> Result<bool> {
    let (lhs, rhs) = z_identity_sides(tau, sols)?;
    Ok(lhs == rhs)
}

/// `Z^σ`: `[X:σ]` for non-Steinberg `σ`, and `[X:χ] + [X:χ⊗St]` for `σ = χ ⊗ St`.
pub fn x_cycle_for_weight(w: &SerreWeight) -> Cycle {
    let mut c = Cycle::zero(BasisKind::XSide);
    c.add_term(w, &BigInt::one()).expect("x-side accepts every label");
    if w.is_steinberg() {
        let chi = SerreWeight::new(w.field(), vec![0; w.s().len()], w.twist()).expect("valid digits");
        c.add_term(&chi, &BigInt::one()).expect("x-side accepts every label");
    }
    c
}

/// Special fibre cycle of the potentially Barsotti–Tate stack of type `τ`,
/// `Σ_σ m_σ(τ) Z^σ`.
pub fn x_special_fibre_cycle(tau: &TameType) -> Result<Cycle> {
    let factors = jh_set(tau)?;
    let mut c = Cycle::zero(BasisKind::XSide);
    let mut direct = Cycle::zero(BasisKind::XSide);
    for (_, w) in &factors {
        c.add_scaled(&x_cycle_for_weight(w), &BigInt::one())?;
        direct.add_term(w, &BigInt::one())?;
    }
    if c != direct {
        return Err(Error::IdentityViolation(format!("special fibre of {tau}: {c} ≠ {direct}")));
    }
    Ok(c)
}

/// Special fibre cycle of the semistable stack of the Steinberg type twisted by `χ`.
pub fn x_ss_steinberg_cycle(fd: &FieldDatum, chi: CharExponent) -> Result<Cycle> {
    expect_level(chi, Level::One)?;
    let st = SerreWeight::new(fd, vec![(fd.p() - 1) as u32; fd.f() as usize], chi)?;
    Ok(x_cycle_for_weight(&st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groth_solver::{build_decomp_matrix, solve_all, solve_n};
    use crate::tame_types::{enumerate_tame_types, make_principal_series};

    fn fd(p: u64, f: u32) -> FieldDatum {
        FieldDatum::new(p, f, 1).unwrap()
    }

    fn w(k: &FieldDatum, s: &[u32], c: i128) -> SerreWeight {
        SerreWeight::new(k, s.to_vec(), k.level_one(c)).unwrap()
    }

    #[test]
    fn predicates() {
        let k = fd(3, 1);
        let zero = Cycle::zero(BasisKind::ZSide);
        assert!(zero.is_effective() && zero.is_reduced_effective());
        let a = w(&k, &[0], 0);
        let b = w(&k, &[1], 0);
        let mut diff = Cycle::unit(BasisKind::ZSide, &a).unwrap();
        diff.add_term(&b, &BigInt::from(-1)).unwrap();
        assert!(!diff.is_effective());
        let mut two = Cycle::zero(BasisKind::ZSide);
        two.add_term(&a, &BigInt::from(2)).unwrap();
        assert!(two.is_effective() && !two.is_reduced_effective());
        two.add_term(&a, &BigInt::from(-2)).unwrap();
        assert!(two.is_zero());
        assert!(Cycle::unit(BasisKind::ZSide, &w(&k, &[2], 0)).is_err());
    }

    #[test]
    fn z_of_type_examples() {
        let k = fd(3, 1);
        let triv = make_principal_series(&k, k.level_one(0), k.level_one(0)).unwrap();
        assert_eq!(z_of_type(&triv).unwrap(), Cycle::unit(BasisKind::ZSide, &w(&k, &[0], 0)).unwrap());
        let ps = make_principal_series(&k, k.level_one(0), k.level_one(1)).unwrap();
        let z = z_of_type(&ps).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z.coeff(&w(&k, &[1], 0)).is_one() && z.coeff(&w(&k, &[1], 1)).is_one());
        for tau in enumerate_tame_types(&k) {
            assert!(z_of_type(&tau).unwrap().is_reduced_effective());
        }
    }

    #[test]
    fn bm_cycles_are_units_and_choice_free() {
        let k = fd(3, 1);
        let m = build_decomp_matrix(&k).unwrap();
        let sols = solve_all(&m).unwrap();
        for (sigma, sol) in &sols {
            let unit = Cycle::unit(BasisKind::ZSide, sigma).unwrap();
            assert_eq!(bm_cycle(sigma, sol).unwrap(), unit);
            assert_eq!(bm_cycle(sigma, &sol.perturbed(&[1, -1])).unwrap(), unit);
            assert_eq!(bm_cycle(sigma, &sol.perturbed(&[0, 5])).unwrap(), unit);
        }
        let st = w(&k, &[2], 0);
        let any = sols.values().next().unwrap();
        assert!(matches!(bm_cycle(&st, any), Err(Error::SteinbergInput(_))));
        // a solution for a different weight violates the postcondition
        let triv = w(&k, &[0], 0);
        let other = solve_n(&m, &w(&k, &[1], 1)).unwrap();
        assert!(matches!(bm_cycle(&triv, &other), Err(Error::IdentityViolation(_))));
    }

    #[test]
    fn z_identity() {
        let k = fd(3, 1);
        let m = build_decomp_matrix(&k).unwrap();
        let mut sols = solve_all(&m).unwrap();
        for tau in m.cols() {
            assert!(verify_z_identity(tau, &sols).unwrap(), "{tau}");
        }
        let triv = make_principal_series(&k, k.level_one(0), k.level_one(0)).unwrap();
        let (lhs, rhs) = z_identity_sides(&triv, &sols).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(rhs, bm_cycle(&w(&k, &[0], 0), &sols[&w(&k, &[0], 0)]).unwrap());

        let ps = make_principal_series(&k, k.level_one(0), k.level_one(1)).unwrap();
        let target = w(&k, &[1], 0);
        let zero = vec![BigInt::zero(); m.cols().len()];
        let bogus = sols[&target].with_coeffs(&zero);
        sols.insert(target, bogus);
        assert!(!verify_z_identity(&ps, &sols).unwrap());
        sols.clear();
        assert!(matches!(verify_z_identity(&ps, &sols), Err(Error::MissingSolution(_))));
    }

    #[test]
    fn x_side() {
        let k = fd(3, 1);
        let a = w(&k, &[1], 0);
        assert_eq!(x_cycle_for_weight(&a), Cycle::unit(BasisKind::XSide, &a).unwrap());
        let st = x_ss_steinberg_cycle(&k, k.level_one(0)).unwrap();
        let mut expected = Cycle::unit(BasisKind::XSide, &w(&k, &[0], 0)).unwrap();
        expected.add_term(&w(&k, &[2], 0), &BigInt::one()).unwrap();
        assert_eq!(st, expected);
        assert_eq!(st.len(), 2);
        assert!(st.is_effective() && st.is_reduced_effective());
        assert!(x_ss_steinberg_cycle(&k, k.level_two(0)).is_err());

        let ps = make_principal_series(&k, k.level_one(0), k.level_one(1)).unwrap();
        let x = x_special_fibre_cycle(&ps).unwrap();
        assert_eq!(x.len(), 2);
        for tau in enumerate_tame_types(&k) {
            let x = x_special_fibre_cycle(&tau).unwrap();
            assert!(x.support().all(|w| !w.is_steinberg()));
            assert_eq!(x, z_of_type(&tau).unwrap().to_x_side());
        }
    }

    #[test]
    fn json_round_trip() {
        let k = fd(5, 1);
        let mut c = Cycle::zero(BasisKind::ZSide);
        c.add_term(&w(&k, &[3], 1), &BigInt::from(-4)).unwrap();
        c.add_term(&w(&k, &[0], 2), &BigInt::from(7)).unwrap();
        c.add_term(&w(&k, &[1], 0), &"123456789012345678901234567890".parse::<BigInt>().unwrap()).unwrap();
        let j = c.to_json();
        assert_eq!(j["basis"], "Z");
        let keys: Vec<&str> = j["terms"].as_array().unwrap().iter().map(|t| t["weight"].as_str().unwrap()).collect();
        assert_eq!(keys, vec!["w:0;2", "w:1;0", "w:3;1"]);
        assert_eq!(
            j.to_string(),
            r#"{"basis":"Z","terms":[{"weight":"w:0;2","coeff":7},{"weight":"w:1;0","coeff":123456789012345678901234567890},{"weight":"w:3;1","coeff":-4}]}"#
        );
        assert_eq!(Cycle::from_json(&k, &j).unwrap(), c);
        let x = x_ss_steinberg_cycle(&k, k.level_one(1)).unwrap();
        assert_eq!(Cycle::from_json(&k, &x.to_json()).unwrap(), x);
        let bad = serde_json::json!({"basis": "Z", "terms": [{"weight": "w:4;0", "coeff": 1}]});
        assert!(Cycle::from_json(&k, &bad).is_err());
    }
}
