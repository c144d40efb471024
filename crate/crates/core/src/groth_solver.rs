//! Integer linear algebra in the Grothendieck group of `F[GL_2(k)]`-modules:
//! the decomposition matrix `m_σ(τ)`, integer solutions `n_τ(σ)` of
//! `σ = Σ_τ n_τ(σ) σ̄(τ)`, and the orthogonality relation
//! `Σ_τ n_τ(σ) m_{σ'}(τ) = δ_{σ,σ'}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field_arith::FieldDatum;
use crate::hnf::{ColumnHnf, EchelonLattice};
use crate::jh::jh_set;
use crate::tame_types::{enumerate_tame_types, TameType};
use crate::weights::{enumerate_weights, SerreWeight};

/// Sparse integer vector indexed by column (tame type) position.
pub type SparseVec = BTreeMap<usize, BigInt>;

/// Rows are non-Steinberg weights, columns are tame types, entries are `m_σ(τ)`.
#[derive(Debug)]
pub struct DecompMatrix {
    field: FieldDatum,
    rows: Vec<SerreWeight>,
    cols: Arc<Vec<TameType>>,
    /// Row indices of the nonzero entries of each column, ascending.
    support: Vec<Vec<usize>>,
    row_index: HashMap<SerreWeight, usize>,
    solver: OnceLock<Arc<Solver>>,
}

#[derive(Debug)]
struct Solver {
    hnf: ColumnHnf,
    kernel: Arc<EchelonLattice>,
}

/// An integer solution of `M n = e_σ`.
#[derive(Debug, Clone)]
pub struct NSolution {
    weight: SerreWeight,
    coeffs: SparseVec,
    types: Arc<Vec<TameType>>,
    kernel: Arc<EchelonLattice>,
}

impl NSolution {
    pub fn weight(&self) -> &SerreWeight {
        &self.weight
    }

    pub fn coeffs(&self) -> &SparseVec {
        &self.coeffs
    }

    pub fn coeff(&self, tau: &TameType) -> BigInt {
        self.types
            .iter()
            .position(|t| t == tau)
            .and_then(|j| self.coeffs.get(&j).cloned())
            .unwrap_or_default()
    }

    /// Nonzero `(τ, n_τ(σ))` pairs in column order.
    pub fn terms(&self) -> impl Iterator<Item = (&TameType, &BigInt)> {
        self.coeffs.iter().map(|(&j, c)| (&self.types[j], c))
    }

    pub fn kernel(&self) -> &EchelonLattice {
        &self.kernel
    }

    pub fn types(&self) -> &[TameType] {
        &self.types
    }

    pub fn dense(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.types.len()];
        for (&j, c) in &self.coeffs {
            v[j] = c.clone();
        }
        v
    }

    /// Same weight with arbitrary coefficients; used to build wrong or
    /// perturbed candidates.
    pub fn with_coeffs(&self, dense: &[BigInt]) -> NSolution {
        NSolution { coeffs: to_sparse(dense), ..self.clone() }
    }

    /// Adds `Σ_i k_i b_i` for the echelon kernel basis `b_i`.
    pub fn perturbed(&self, combination: &[i64]) -> NSolution {
        let mut v = self.dense();
        for (b, &k) in self.kernel.basis().iter().zip(combination) {
            if k == 0 {
                continue;
            }
            let k = BigInt::from(k);
            for (x, y) in v.iter_mut().zip(b) {
                *x += &k * y;
            }
        }
        self.with_coeffs(&v)
    }

    /// Whether `self - other` lies in the integer kernel of `M`.
    pub fn differs_by_kernel(&self, other: &NSolution) -> bool {
        let diff: Vec<BigInt> = self.dense().iter().zip(other.dense()).map(|(a, b)| a - b).collect();
        self.kernel.contains(&diff)
    }

    /// The canonical representative of the coset `self + ker M`.
    pub fn canonical(&self) -> NSolution {
        self.with_coeffs(&self.kernel.reduce(&self.dense()))
    }
}

fn to_sparse(dense: &[BigInt]) -> SparseVec {
    dense.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect()
}

impl DecompMatrix {
    pub fn field(&self) -> &FieldDatum {
        &self.field
    }

    pub fn rows(&self) -> &[SerreWeight] {
        &self.rows
    }

    pub fn cols(&self) -> &[TameType] {
        &self.cols
    }

    pub fn row_of(&self, w: &SerreWeight) -> Option<usize> {
        self.row_index.get(w).copied()
    }

    pub fn col_of(&self, tau: &TameType) -> Option<usize> {
        self.cols.binary_search(tau).ok().or_else(|| self.cols.iter().position(|t| t == tau))
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        u8::from(self.support[col].binary_search(&row).is_ok())
    }

    pub fn column_support(&self, col: usize) -> &[usize] {
        &self.support[col]
    }

    pub fn column_sums(&self) -> Vec<usize> {
        self.support.iter().map(Vec::len).collect()
    }

    /// `M n` for a sparse `n`.
    pub fn apply(&self, n: &SparseVec) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rows.len()];
        for (&j, c) in n {
            for &i in &self.support[j] {
                out[i] += c;
            }
        }
        out
    }

    fn dense_columns(&self) -> Vec<Vec<BigInt>> {
        self.support
            .iter()
            .map(|s| {
                let mut c = vec![BigInt::zero(); self.rows.len()];
                for &i in s {
                    c[i] = BigInt::one();
                }
                c
            })
            .collect()
    }

    fn solver(&self) -> Arc<Solver> {
        self.solver
            .get_or_init(|| {
                let hnf = ColumnHnf::compute(self.rows.len(), self.dense_columns());
                let kernel = Arc::new(EchelonLattice::new(self.cols.len(), hnf.kernel().to_vec()));
                Arc::new(Solver { hnf, kernel })
            })
            .clone()
    }

    /// Rank of `M` over `Z`.
    pub fn rank(&self) -> usize {
        self.solver().hnf.rank()
    }

    /// Whether the columns of `M` generate `Z^{rows}`.
    pub fn spans_lattice(&self) -> bool {
        self.solver().hnf.is_identity()
    }

    pub fn kernel(&self) -> Arc<EchelonLattice> {
        self.solver().kernel.clone()
    }
}

/// The decomposition matrix over all tame types and non-Steinberg weights.
pub fn build_decomp_matrix(fd: &FieldDatum) -> Result<DecompMatrix> {
    let rows = enumerate_weights(fd, false);
    let row_index: HashMap<SerreWeight, usize> = rows.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let cols = enumerate_tame_types(fd);
    let support = cols
        .par_iter()
        .map(|tau| {
            let mut s = Vec::new();
            for (shape, w) in jh_set(tau)? {
                let i = row_index.get(&w).copied().ok_or_else(|| {
                    Error::IdentityViolation(format!("{tau} has Steinberg factor {w} at shape {shape}"))
                })?;
                s.push(i);
            }
            s.sort_unstable();
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompMatrix {
        field: *fd,
        rows,
        cols: Arc::new(cols),
        support,
        row_index,
        solver: OnceLock::new(),
    })
}

/// The canonical integer solution of `M n = e_σ`.
///
/// The Hermite normal form gives a particular solution; it is then reduced
/// against an echelon basis of `ker M` so that the answer depends only on
/// `σ` and the column order, not on the elimination path.
pub fn solve_n(m: &DecompMatrix, w: &SerreWeight) -> Result<NSolution> {
    if w.is_steinberg() {
        return Err(Error::SteinbergInput(w.key()));
    }
    let row = m.row_of(w).ok_or_else(|| Error::NoIntegerSolution(w.key()))?;
    let solver = m.solver();
    let mut b = vec![BigInt::zero(); m.rows.len()];
    b[row] = BigInt::one();
    let x = solver.hnf.solve(&b).ok_or_else(|| Error::NoIntegerSolution(w.key()))?;
    let x = solver.kernel.reduce(&x);
    let sol = NSolution { weight: w.clone(), coeffs: to_sparse(&x), types: m.cols.clone(), kernel: solver.kernel.clone() };
    if m.apply(&sol.coeffs) != b {
        return Err(Error::IdentityViolation(format!("M·n ≠ e_σ after solving for {w}")));
    }
    Ok(sol)
}

/// Canonical solutions for every non-Steinberg weight.
pub fn solve_all(m: &DecompMatrix) -> Result<BTreeMap<SerreWeight, NSolution>> {
    let _ = m.solver();
    m.rows.par_iter().map(|w| solve_n(m, w).map(|s| (w.clone(), s))).collect()
}

/// First failure of `Σ_τ n_τ(σ) m_{σ'}(τ) = δ_{σ,σ'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityDefect {
    pub sigma: SerreWeight,
    pub sigma_prime: SerreWeight,
    pub value: BigInt,
    pub expected: BigInt,
}

pub fn orthogonality_defect(
    m: &DecompMatrix,
    sols: &BTreeMap<SerreWeight, NSolution>,
) -> Result<Option<OrthogonalityDefect>> {
    for (i, sigma) in m.rows.iter().enumerate() {
        let sol = sols.get(sigma).ok_or_else(|| Error::MissingSolution(sigma.key()))?;
        if let Some(d) = pairing_defect(m, i, sol) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Checks one row of the orthogonality relation.
pub fn pairing_defect(m: &DecompMatrix, row: usize, sol: &NSolution) -> Option<OrthogonalityDefect> {
    let image = m.apply(&sol.coeffs);
    image.into_iter().enumerate().find_map(|(k, value)| {
        let expected = BigInt::from(u8::from(k == row));
        (value != expected).then(|| OrthogonalityDefect {
            sigma: m.rows[row].clone(),
            sigma_prime: m.rows[k].clone(),
            value,
            expected,
        })
    })
}

pub fn verify_orthogonality(m: &DecompMatrix, sols: &BTreeMap<SerreWeight, NSolution>) -> Result<bool> {
    Ok(orthogonality_defect(m, sols)?.is_none())
}
