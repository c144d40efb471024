//! Two-dimensional tame inertial types `τ = η ⊕ η'`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_arith::{expect_level, CharExponent, DigitVector, FieldDatum, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeKind {
    Scalar,
    PrincipalSeries,
    Cuspidal,
}

impl TypeKind {
    pub fn name(self) -> &'static str {
        match self {
            TypeKind::Scalar => "scalar",
            TypeKind::PrincipalSeries => "principal_series",
            TypeKind::Cuspidal => "cuspidal",
        }
    }
}

/// A tame inertial type in canonical form.
///
/// Principal series (and scalar) types store level-1 exponents with
/// `eta <= eta_prime`. Cuspidal types store level-2 exponents with `eta` the
/// smaller element of its Frobenius orbit and `eta_prime = q * eta`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TameType {
    kind: TypeKind,
    eta: CharExponent,
    eta_prime: CharExponent,
    gamma: DigitVector,
    field: FieldDatum,
}

impl TameType {
    pub fn kind(&self) -> TypeKind {
        self.kind
    }

    pub fn eta(&self) -> CharExponent {
        self.eta
    }

    pub fn eta_prime(&self) -> CharExponent {
        self.eta_prime
    }

    /// Digits of `η (η')^{-1}`, of length `f'`.
    pub fn gamma(&self) -> &DigitVector {
        &self.gamma
    }

    pub fn field(&self) -> &FieldDatum {
        &self.field
    }

    pub fn is_scalar(&self) -> bool {
        self.kind == TypeKind::Scalar
    }

    pub fn is_cuspidal(&self) -> bool {
        self.kind == TypeKind::Cuspidal
    }

    /// `f` for principal series and scalar types, `2f` for cuspidal ones.
    pub fn f_prime(&self) -> usize {
        self.gamma.len()
    }

    /// Dimension of the characteristic-zero representation attached to the type.
    pub fn expected_dim(&self) -> u64 {
        let q = self.field.q();
        match self.kind {
            TypeKind::Scalar => 1,
            TypeKind::PrincipalSeries => q + 1,
            TypeKind::Cuspidal => q - 1,
        }
    }

    pub fn key(&self) -> String {
        self.to_string()
    }

    /// Parses `"ps:a,b"` or `"cusp:c"`.
    pub fn parse(fd: &FieldDatum, input: &str) -> Result<Self> {
        let number = |s: &str, pos: usize| {
            s.trim().parse::<i128>().map_err(|_| Error::parse(input, pos, "expected an integer exponent"))
        };
        if let Some(body) = input.strip_prefix("ps:") {
            let (a, b) = body
                .split_once(',')
                .ok_or_else(|| Error::parse(input, input.len(), "expected \"ps:a,b\""))?;
            let b_pos = 4 + a.len();
            let a = number(a, 3)?;
            let b = number(b, b_pos)?;
            make_principal_series(fd, fd.level_one(a), fd.level_one(b))
        } else if let Some(body) = input.strip_prefix("cusp:") {
            let c = number(body, 5)?;
            make_cuspidal(fd, fd.level_two(c)).map_err(|e| Error::parse(input, 5, e.to_string()))
        } else {
            Err(Error::parse(input, 0, "type spec must start with \"ps:\" or \"cusp:\""))
        }
    }
}

impl fmt::Display for TameType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TypeKind::Cuspidal => write!(f, "cusp:{}", self.eta.value()),
            _ => write!(f, "ps:{},{}", self.eta.value(), self.eta_prime.value()),
        }
    }
}

/// The principal series type `a ⊕ b` (scalar when `a = b`).
pub fn make_principal_series(fd: &FieldDatum, a: CharExponent, b: CharExponent) -> Result<TameType> {
    expect_level(a, Level::One)?;
    expect_level(b, Level::One)?;
    let (eta, eta_prime) = if a <= b { (a, b) } else { (b, a) };
    principal_series_ordered(fd, eta, eta_prime)
}

/// The principal series type with `(η, η')` kept in the given order, so that
/// `γ` is computed from `η (η')^{-1}` as written. Both orders describe the
/// same isomorphism class; [`make_principal_series`] is the canonical form.
pub fn principal_series_ordered(fd: &FieldDatum, eta: CharExponent, eta_prime: CharExponent) -> Result<TameType> {
    expect_level(eta, Level::One)?;
    expect_level(eta_prime, Level::One)?;
    let kind = if eta == eta_prime { TypeKind::Scalar } else { TypeKind::PrincipalSeries };
    let gamma = fd.digits_of(fd.sub(eta, eta_prime)?);
    Ok(TameType { kind, eta, eta_prime, gamma, field: *fd })
}

/// The cuspidal type `η ⊕ η^q` for a level-2 exponent with `η ≠ η^q`.
pub fn make_cuspidal(fd: &FieldDatum, eta: CharExponent) -> Result<TameType> {
    expect_level(eta, Level::Two)?;
    let q = i128::from(fd.q());
    if fd.scale(eta, q - 1).value() == 0 {
        return Err(Error::Regularity { eta: eta.value() });
    }
    let eta = eta.min(fd.scale(eta, q));
    let eta_prime = fd.scale(eta, q);
    let gamma = fd.digits_of(fd.scale(eta, 1 - q));
    Ok(TameType { kind: TypeKind::Cuspidal, eta, eta_prime, gamma, field: *fd })
}

/// All tame types: scalars, then principal series `a < b`, then cuspidal
/// orbit representatives, each in increasing exponent order.
pub fn enumerate_tame_types(fd: &FieldDatum) -> Vec<TameType> {
    let m1 = fd.m1() as i128;
    let mut out = Vec::new();
    for a in 0..m1 {
        out.push(make_principal_series(fd, fd.level_one(a), fd.level_one(a)).expect("level 1"));
    }
    for a in 0..m1 {
        for b in a + 1..m1 {
            out.push(make_principal_series(fd, fd.level_one(a), fd.level_one(b)).expect("level 1"));
        }
    }
    let q = i128::from(fd.q());
    for c in 0..fd.m2() as i128 {
        let eta = fd.level_two(c);
        let conj = fd.scale(eta, q);
        if conj != eta && eta < conj {
            out.push(make_cuspidal(fd, eta).expect("regular"));
        }
    }
    out
}
