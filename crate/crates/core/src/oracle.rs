//! Brute-force reference computations that share no code path with the
//! library's fast routes. The verification suites compare the two.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field_arith::{CharExponent, FieldDatum};
use crate::groth_solver::DecompMatrix;

/// All digit vectors `γ ∈ [0, p-1]^n`, not all `p - 1`, with `Σ γ_i p^{n-i} ≡ c`
/// (`p^n` read as 1 for `i = 0`).
pub fn digits_by_search(fd: &FieldDatum, c: CharExponent) -> Vec<Vec<u32>> {
    let n = fd.embeddings(c.level());
    let m = fd.modulus(c.level());
    let p = fd.p();
    // e_i recomputed from the defining recursion p·e_{i+1} = e_i, e_0 = 1
    let mut e = vec![0u64; n];
    e[0] = 1 % m;
    for i in 1..n {
        e[i] = (1..m).find(|&x| x * p % m == e[i - 1]).unwrap_or(0);
    }
    let mut hits = Vec::new();
    let total = p.pow(n as u32);
    for code in 0..total {
        let mut x = code;
        let digits: Vec<u32> = (0..n)
            .map(|_| {
                let d = x % p;
                x /= p;
                d as u32
            })
            .collect();
        if digits.iter().all(|&d| u64::from(d) == p - 1) {
            continue;
        }
        let v = digits.iter().zip(&e).map(|(&d, &ei)| u64::from(d) * ei).sum::<u64>() % m;
        if v == c.value() {
            hits.push(digits);
        }
    }
    hits
}

/// `(scalar, principal series, cuspidal)` counts by direct enumeration of
/// character pairs and Frobenius orbits.
pub fn type_counts_by_search(fd: &FieldDatum) -> (usize, usize, usize) {
    let m1 = fd.m1();
    let m2 = fd.m2();
    let q = fd.q();
    let mut pairs = BTreeSet::new();
    for a in 0..m1 {
        for b in 0..m1 {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let scalar = pairs.iter().filter(|(a, b)| a == b).count();
    let ps = pairs.len() - scalar;
    let mut orbits = BTreeSet::new();
    for c in 0..m2 {
        let mut orbit = BTreeSet::new();
        let mut x = c;
        loop {
            orbit.insert(x);
            x = x * q % m2;
            if x == c {
                break;
            }
        }
        // orbits of size one are characters of k^×, i.e. principal series data
        if orbit.len() == 2 {
            orbits.insert(orbit);
        }
    }
    (scalar, ps, orbits.len())
}

/// Nonzero integer vectors with support size at most `max_support` and
/// entries in `{±1, …, ±bound}` solving `M n = e_row`, as
/// `(row, dense vector)` pairs.
pub fn sparse_solutions(m: &DecompMatrix, max_support: usize, bound: i64) -> Vec<(usize, Vec<BigInt>)> {
    let mut search = SparseSearch {
        m,
        values: (1..=bound).flat_map(|v| [v, -v]).collect(),
        support: Vec::new(),
        acc: vec![0; m.rows().len()],
        out: Vec::new(),
    };
    search.extend(0, max_support);
    search.out
}

struct SparseSearch<'a> {
    m: &'a DecompMatrix,
    values: Vec<i64>,
    support: Vec<(usize, i64)>,
    // M applied to the current support
    acc: Vec<i64>,
    out: Vec<(usize, Vec<BigInt>)>,
}

impl SparseSearch<'_> {
    fn record(&mut self) {
        let mut nz = self.acc.iter().enumerate().filter(|(_, &a)| a != 0);
        if let (Some((row, &1)), None) = (nz.next(), nz.next()) {
            let mut v = vec![BigInt::zero(); self.m.cols().len()];
            for &(j, c) in &self.support {
                v[j] = BigInt::from(c);
            }
            self.out.push((row, v));
        }
    }

    fn extend(&mut self, start: usize, left: usize) {
        if !self.support.is_empty() {
            self.record();
        }
        if left == 0 {
            return;
        }
        let m = self.m;
        for j in start..m.cols().len() {
            for k in 0..self.values.len() {
                let c = self.values[k];
                for &i in m.column_support(j) {
                    self.acc[i] += c;
                }
                self.support.push((j, c));
                self.extend(j + 1, left - 1);
                self.support.pop();
                for &i in m.column_support(j) {
                    self.acc[i] -= c;
                }
            }
        }
    }
}

/// Number of candidate vectors [`sparse_solutions`] would examine.
pub fn sparse_search_size(ncols: usize, max_support: usize, bound: i64) -> u128 {
    let mut total = 0u128;
    let mut choose = 1u128;
    for k in 1..=max_support {
        choose = choose * (ncols + 1 - k) as u128 / k as u128;
        total += choose * (2 * bound as u128).pow(k as u32);
    }
    total
}

/// Integer determinant by fraction-free Gaussian elimination.
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// gcd of all maximal minors of `M` (rows ≤ cols). It is 1 exactly when
/// the columns of `M` generate `Z^rows`.
pub fn maximal_minor_gcd(m: &DecompMatrix) -> BigInt {
    let r = m.rows().len();
    let c = m.cols().len();
    assert!(r <= c);
    let mut g = BigInt::zero();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let sub: Vec<Vec<BigInt>> =
            (0..r).map(|i| idx.iter().map(|&j| BigInt::from(m.entry(i, j))).collect()).collect();
        g = g.gcd(&determinant(sub));
        if g.is_one() {
            return g;
        }
        // next combination
        let mut k = r;
        loop {
            if k == 0 {
                return g.abs();
            }
            k -= 1;
            if idx[k] < c - r + k {
                idx[k] += 1;
                for t in k + 1..r {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Number of maximal minors of an `r × c` matrix.
/// Saturates at `u128::MAX`.
pub fn maximal_minor_count(r: usize, c: usize) -> u128 {
    let k = r.min(c - r);
    (0..k).try_fold(1u128, |acc, i| acc.checked_mul((c - i) as u128).map(|x| x / (i + 1) as u128)).unwrap_or(u128::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groth_solver::build_decomp_matrix;

    #[test]
    fn minor_count_saturates() {
        assert_eq!(maximal_minor_count(4, 6), 15);
        assert_eq!(maximal_minor_count(6, 6), 1);
        assert_eq!(maximal_minor_count(576, 600), u128::MAX);
    }

    #[test]
    fn determinant_small() {
        let a = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(7), BigInt::from(4)],
        ];
        assert_eq!(determinant(a), BigInt::one());
        let z = vec![vec![BigInt::zero(), BigInt::one()], vec![BigInt::zero(), BigInt::one()]];
        assert!(determinant(z).is_zero());
    }

    #[test]
    fn minors_and_search_three_one() {
        let k = FieldDatum::new(3, 1, 1).unwrap();
        let m = build_decomp_matrix(&k).unwrap();
        assert!(maximal_minor_gcd(&m).is_one());
        assert_eq!(maximal_minor_count(4, 6), 15);
        let sols = sparse_solutions(&m, 2, 1);
        assert_eq!(sparse_search_size(6, 2, 1), 12 + 15 * 4);
        let rows: BTreeSet<usize> = sols.iter().map(|s| s.0).collect();
        // each 1-dimensional weight is the reduction of a scalar type
        assert!(rows.len() >= 2);
        assert_eq!(type_counts_by_search(&k), (2, 1, 3));
        assert_eq!(digits_by_search(&k, k.level_two(6)), vec![vec![0, 2]]);
    }
}
