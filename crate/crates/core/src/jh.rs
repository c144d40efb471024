//! Shapes, the admissible set `P_τ`, and the Jordan–Hölder factors
//! `σ̄(τ)_J` of the reduction of a tame type.

use std::fmt;

use crate::error::{Error, Result};
use crate::field_arith::Level;
use crate::tame_types::{TameType, TypeKind};
use crate::weights::{weight_from_st, SerreWeight};

/// A subset `J ⊂ Z/f'Z`, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    bits: u64,
    len: usize,
}

impl Shape {
    pub fn empty(len: usize) -> Self {
        Shape { bits: 0, len }
    }

    pub fn from_members(len: usize, members: &[usize]) -> Self {
        let bits = members.iter().fold(0u64, |acc, &i| acc | 1 << (i % len));
        Shape { bits, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// `δ_J(i)`, with `i` taken modulo `f'`.
    pub fn contains(&self, i: usize) -> bool {
        self.bits >> (i % self.len) & 1 == 1
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.contains(i)).collect()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", m.join(","))
    }
}

/// One Jordan–Hölder factor, with the digit vectors it was assembled from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JhFactor {
    pub shape: Shape,
    pub weight: SerreWeight,
    /// `s_{J,i}` over `Z/f'Z`, before restriction to `[0, f)`.
    pub s_full: Vec<u32>,
    pub t_full: Vec<u32>,
}

/// Every shape for `τ`: `{∅}` if scalar, all `2^f` subsets of `Z/fZ` for
/// principal series, and the `2^f` subsets of `Z/2fZ` with
/// `i ∈ J ⇔ i + f ∉ J` for cuspidal types.
pub fn all_shapes(tau: &TameType) -> Vec<Shape> {
    let n = tau.f_prime();
    match tau.kind() {
        TypeKind::Scalar => vec![Shape::empty(n)],
        TypeKind::PrincipalSeries => (0..1u64 << n).map(|bits| Shape { bits, len: n }).collect(),
        TypeKind::Cuspidal => {
            let f = n / 2;
            let low_mask = (1u64 << f) - 1;
            let mut out: Vec<Shape> = (0..1u64 << f)
                .map(|low| Shape { bits: low | ((!low & low_mask) << f), len: n })
                .collect();
            out.sort();
            out
        }
    }
}

fn is_admissible(tau: &TameType, shape: &Shape) -> bool {
    let n = tau.f_prime();
    let top = (tau.field().p() - 1) as u32;
    let gamma = tau.gamma().digits();
    (0..n).all(|i| {
        let prev = shape.contains(i + n - 1);
        let here = shape.contains(i);
        !(prev && !here && gamma[i] == top) && !(!prev && here && gamma[i] == 0)
    })
}

/// The admissible shapes `P_τ`.
pub fn p_tau(tau: &TameType) -> Vec<Shape> {
    if tau.is_scalar() {
        return vec![Shape::empty(tau.f_prime())];
    }
    all_shapes(tau).into_iter().filter(|j| is_admissible(tau, j)).collect()
}

fn shape_is_valid(tau: &TameType, shape: &Shape) -> bool {
    if shape.len() != tau.f_prime() {
        return false;
    }
    if tau.is_scalar() {
        return shape.is_empty();
    }
    if tau.is_cuspidal() {
        let f = tau.f_prime() / 2;
        if (0..f).any(|i| shape.contains(i) == shape.contains(i + f)) {
            return false;
        }
    }
    is_admissible(tau, shape)
}

/// `σ̄(τ)_J` for an admissible shape `J`.
pub fn jh_factor(tau: &TameType, shape: &Shape) -> Result<JhFactor> {
    if !shape_is_valid(tau, shape) {
        return Err(Error::ShapeNotAdmissible { shape: shape.to_string(), tau: tau.to_string() });
    }
    let fd = tau.field();
    let n = tau.f_prime();
    let top = fd.p() as i64 - 1;
    let gamma = tau.gamma().digits();
    let mut s_full = Vec::with_capacity(n);
    let mut t_full = Vec::with_capacity(n);
    for (i, &g) in gamma.iter().enumerate() {
        let g = i64::from(g);
        let in_j = i64::from(shape.contains(i));
        let (s, t) = if shape.contains(i + n - 1) {
            (top - g - (1 - in_j), g + (1 - in_j))
        } else {
            (g - in_j, 0)
        };
        if !(0..=top).contains(&s) || !(0..=top).contains(&t) {
            return Err(Error::IdentityViolation(format!(
                "shape {shape} of {tau} produced digits s={s}, t={t} at index {i}"
            )));
        }
        s_full.push(s as u32);
        t_full.push(t as u32);
    }

    let weight = if tau.is_cuspidal() {
        let f = n / 2;
        if (0..f).any(|i| s_full[i] != s_full[i + f]) {
            return Err(Error::NormFactor(format!(
                "s-digits {s_full:?} of {tau} at shape {shape} are not f-periodic"
            )));
        }
        let t = fd.digit_vector(t_full.clone())?;
        let character = fd.add(tau.eta_prime(), fd.exponent_of_digits(&t)?)?;
        debug_assert_eq!(character.level(), Level::Two);
        let theta = fd.factor_through_norm(character)?.ok_or_else(|| {
            Error::NormFactor(format!(
                "character {character} of {tau} at shape {shape} does not factor through the norm"
            ))
        })?;
        SerreWeight::new(fd, s_full[..f].to_vec(), theta)?
    } else {
        weight_from_st(fd, s_full.clone(), t_full.clone())?.twist_by(tau.eta_prime())?
    };
    Ok(JhFactor { shape: *shape, weight, s_full, t_full })
}

/// `[(J, σ̄(τ)_J) for J ∈ P_τ]`.
pub fn jh_set(tau: &TameType) -> Result<Vec<(Shape, SerreWeight)>> {
    p_tau(tau).iter().map(|j| jh_factor(tau, j).map(|x| (x.shape, x.weight))).collect()
}

/// All factors with their digit data.
pub fn jh_factors(tau: &TameType) -> Result<Vec<JhFactor>> {
    p_tau(tau).iter().map(|j| jh_factor(tau, j)).collect()
}

/// `m_σ(τ) ∈ {0, 1}`.
pub fn m_multiplicity(tau: &TameType, w: &SerreWeight) -> Result<u8> {
    Ok(u8::from(jh_set(tau)?.iter().any(|(_, x)| x == w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_arith::FieldDatum;
    use crate::tame_types::{enumerate_tame_types, make_cuspidal, make_principal_series, principal_series_ordered};

    fn fd(p: u64, f: u32) -> FieldDatum {
        FieldDatum::new(p, f, 1).unwrap()
    }

    fn ps(k: &FieldDatum, a: i128, b: i128) -> TameType {
        make_principal_series(k, k.level_one(a), k.level_one(b)).unwrap()
    }

    fn w(k: &FieldDatum, s: &[u32], c: i128) -> SerreWeight {
        SerreWeight::new(k, s.to_vec(), k.level_one(c)).unwrap()
    }

    #[test]
    fn shape_lists() {
        let k = fd(3, 1);
        assert_eq!(all_shapes(&ps(&k, 0, 0)), vec![Shape::empty(1)]);
        assert_eq!(all_shapes(&ps(&k, 0, 1)), vec![Shape::empty(1), Shape::from_members(1, &[0])]);
        let cusp = make_cuspidal(&k, k.level_two(1)).unwrap();
        let shapes = all_shapes(&cusp);
        assert_eq!(shapes, vec![Shape::from_members(2, &[0]), Shape::from_members(2, &[1])]);
        // brute-force filter of all four subsets
        let brute: Vec<Shape> = (0..4u64)
            .map(|bits| Shape { bits, len: 2 })
            .filter(|j| j.contains(0) != j.contains(1))
            .collect();
        assert_eq!(shapes, brute);
    }

    #[test]
    fn p_tau_examples() {
        let k = fd(3, 1);
        assert_eq!(p_tau(&ps(&k, 1, 1)), vec![Shape::empty(1)]);
        assert_eq!(p_tau(&ps(&k, 0, 1)).len(), 2);
        let cusp = make_cuspidal(&k, k.level_two(1)).unwrap();
        assert_eq!(cusp.gamma().digits(), &[0, 2]);
        assert_eq!(p_tau(&cusp), vec![Shape::from_members(2, &[1])]);
    }

    #[test]
    fn jh_factor_examples() {
        let k = fd(3, 1);
        // (η, η') = (1, 0): γ = [1]
        let tau = principal_series_ordered(&k, k.level_one(1), k.level_one(0)).unwrap();
        assert_eq!(tau.gamma().digits(), &[1]);
        let a = jh_factor(&tau, &Shape::empty(1)).unwrap();
        assert_eq!(a.weight, w(&k, &[1], 0));
        assert_eq!((a.s_full.clone(), a.t_full.clone()), (vec![1], vec![0]));
        let b = jh_factor(&tau, &Shape::from_members(1, &[0])).unwrap();
        assert_eq!(b.weight, w(&k, &[1], 1));
        assert_eq!((b.s_full.clone(), b.t_full.clone()), (vec![1], vec![1]));

        // canonical order (0, 1) swaps which shape carries which weight
        let canon = ps(&k, 0, 1);
        assert_eq!(jh_factor(&canon, &Shape::empty(1)).unwrap().weight, w(&k, &[1], 1));
        assert_eq!(jh_factor(&canon, &Shape::from_members(1, &[0])).unwrap().weight, w(&k, &[1], 0));

        let cusp = make_cuspidal(&k, k.level_two(1)).unwrap();
        let x = jh_factor(&cusp, &Shape::from_members(2, &[1])).unwrap();
        assert_eq!(x.s_full, vec![1, 1]);
        assert_eq!(x.weight.s(), &[1]);
        // η' = 3 and t = [1, 0], so the character is 3 + 1 = 4 = 1 · (q + 1)
        assert_eq!(x.t_full, vec![1, 0]);
        assert_eq!(x.weight.twist().value(), 1);

        assert!(matches!(
            jh_factor(&cusp, &Shape::from_members(2, &[0])),
            Err(Error::ShapeNotAdmissible { .. })
        ));
        assert!(matches!(
            jh_factor(&cusp, &Shape::from_members(2, &[0, 1])),
            Err(Error::ShapeNotAdmissible { .. })
        ));
        assert!(jh_factor(&canon, &Shape::empty(2)).is_err());
    }

    #[test]
    fn order_swap_invariance() {
        for (p, f) in [(3, 1), (5, 1), (3, 2)] {
            let k = fd(p, f);
            for a in 0..k.m1() as i128 {
                for b in 0..k.m1() as i128 {
                    let x = principal_series_ordered(&k, k.level_one(a), k.level_one(b)).unwrap();
                    let y = principal_series_ordered(&k, k.level_one(b), k.level_one(a)).unwrap();
                    let mut wx: Vec<_> = jh_set(&x).unwrap().into_iter().map(|t| t.1).collect();
                    let mut wy: Vec<_> = jh_set(&y).unwrap().into_iter().map(|t| t.1).collect();
                    wx.sort();
                    wy.sort();
                    assert_eq!(wx, wy);
                }
            }
        }
    }

    #[test]
    fn jh_set_examples() {
        let k = fd(3, 1);
        assert_eq!(jh_set(&ps(&k, 0, 0)).unwrap(), vec![(Shape::empty(1), w(&k, &[0], 0))]);
        let set: Vec<SerreWeight> = jh_set(&ps(&k, 0, 1)).unwrap().into_iter().map(|x| x.1).collect();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&w(&k, &[1], 0)) && set.contains(&w(&k, &[1], 1)));
    }

    #[test]
    fn multiplicity_examples() {
        let k = fd(3, 1);
        let triv = ps(&k, 0, 0);
        assert_eq!(m_multiplicity(&triv, &w(&k, &[0], 0)).unwrap(), 1);
        assert_eq!(m_multiplicity(&triv, &w(&k, &[2], 0)).unwrap(), 0);
        assert_eq!(m_multiplicity(&ps(&k, 0, 1), &w(&k, &[0], 0)).unwrap(), 0);
    }

    #[test]
    fn dimension_identity_small_grid() {
        for (p, f) in [(3, 1), (5, 1), (3, 2), (7, 1)] {
            for tau in enumerate_tame_types(&fd(p, f)) {
                let factors = jh_set(&tau).unwrap();
                let dim: u64 = factors.iter().map(|(_, w)| w.dim()).sum();
                assert_eq!(dim, tau.expected_dim(), "{tau} at p={p} f={f}");
                assert!(factors.iter().all(|(_, w)| !w.is_steinberg()));
            }
        }
    }

    #[test]
    fn cuspidal_orbit_choice_does_not_matter() {
        // recompute with the other orbit representative by shifting γ and J by f
        for (p, f) in [(3, 1), (5, 1), (3, 2)] {
            let k = fd(p, f);
            for tau in enumerate_tame_types(&k).into_iter().filter(|t| t.is_cuspidal()) {
                let mut a: Vec<_> = jh_set(&tau).unwrap().into_iter().map(|x| x.1).collect();
                a.sort();
                let mut b = weights_with_swapped_roles(&tau);
                b.sort();
                assert_eq!(a, b, "{tau}");
            }
        }
    }

    /// Manual evaluation of the cuspidal recipe with `η` and `η^q` swapped.
    fn weights_with_swapped_roles(tau: &TameType) -> Vec<SerreWeight> {
        let k = *tau.field();
        let q = k.q() as i128;
        let eta = tau.eta_prime();
        let eta_prime = tau.eta();
        let gamma = k.digits_of(k.sub(eta, eta_prime).unwrap());
        let n = gamma.len();
        let f = n / 2;
        let top = k.p() as i64 - 1;
        let mut out = Vec::new();
        for low in 0..1u64 << f {
            let bits = low | ((!low & ((1 << f) - 1)) << f);
            let j = Shape { bits, len: n };
            let g = gamma.digits();
            let ok = (0..n).all(|i| {
                let prev = j.contains(i + n - 1);
                let here = j.contains(i);
                !(prev && !here && g[i] as i64 == top) && !(!prev && here && g[i] == 0)
            });
            if !ok {
                continue;
            }
            let mut s = vec![0u32; n];
            let mut t = vec![0u32; n];
            for i in 0..n {
                let gi = g[i] as i64;
                let d = i64::from(j.contains(i));
                if j.contains(i + n - 1) {
                    s[i] = (top - gi - (1 - d)) as u32;
                    t[i] = (gi + 1 - d) as u32;
                } else {
                    s[i] = (gi - d) as u32;
                }
            }
            let tv = k.digit_vector(t).unwrap();
            let chi = k.add(eta_prime, k.exponent_of_digits(&tv).unwrap()).unwrap();
            assert_eq!(chi.value() % (q as u64 + 1), 0);
            let theta = k.level_one((chi.value() / (q as u64 + 1)) as i128);
            out.push(SerreWeight::new(&k, s[..f].to_vec(), theta).unwrap());
        }
        out
    }
}
