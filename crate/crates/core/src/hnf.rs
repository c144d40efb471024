//! Column-style Hermite normal form over `Z` with the unimodular transform.
//!
//! For an `r × n` integer matrix `M` this computes `U ∈ GL_n(Z)` and
//! `H = M U` such that the first `rank` columns of `H` are in echelon form
//! (column `j` is zero above its pivot row, pivot rows strictly increase,
//! pivots are positive, and entries left of a pivot lie in `[0, pivot)`),
//! and the remaining columns are zero. The trailing columns of `U` then
//! form a basis of the integer kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct ColumnHnf {
    rows: usize,
    /// Columns of `H`, each of length `rows`.
    h: Vec<Vec<BigInt>>,
    /// Columns of `U`, each of length `ncols`.
    u: Vec<Vec<BigInt>>,
    pivot_rows: Vec<usize>,
}

/// `dst[start..] -= q * src[start..]`, skipping zeros of `src`.
fn sub_multiple(dst: &mut [BigInt], src: &[BigInt], q: &BigInt, start: usize) {
    for (d, s) in dst[start..].iter_mut().zip(&src[start..]) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &mut lo[b])
    }
}

impl ColumnHnf {
    /// `columns[j]` is column `j` of `M`; every column has length `rows`.
    pub fn compute(rows: usize, columns: Vec<Vec<BigInt>>) -> Self {
        let n = columns.len();
        assert!(columns.iter().all(|c| c.len() == rows), "ragged matrix");
        let mut h = columns;
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut pivot_rows = Vec::new();
        let mut k = 0;

        for r in 0..rows {
            if k == n {
                break;
            }
            loop {
                let best = (k..n)
                    .filter(|&j| !h[j][r].is_zero())
                    .min_by(|&a, &b| h[a][r].abs().cmp(&h[b][r].abs()).then(a.cmp(&b)));
                let Some(best) = best else { break };
                h.swap(k, best);
                u.swap(k, best);
                let mut clean = true;
                for j in k + 1..n {
                    if h[j][r].is_zero() {
                        continue;
                    }
                    let q = h[j][r].div_floor(&h[k][r]);
                    let (dst, src) = pair_mut(&mut h, j, k);
                    sub_multiple(dst, src, &q, r);
                    let (dst, src) = pair_mut(&mut u, j, k);
                    sub_multiple(dst, src, &q, 0);
                    if !h[j][r].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if h.get(k).is_some_and(|c| !c[r].is_zero()) {
                if h[k][r].is_negative() {
                    h[k].iter_mut().for_each(|x| *x = -&*x);
                    u[k].iter_mut().for_each(|x| *x = -&*x);
                }
                for j in 0..k {
                    let q = h[j][r].div_floor(&h[k][r]);
                    if q.is_zero() {
                        continue;
                    }
                    let (dst, src) = pair_mut(&mut h, j, k);
                    sub_multiple(dst, src, &q, r);
                    let (dst, src) = pair_mut(&mut u, j, k);
                    sub_multiple(dst, src, &q, 0);
                }
                pivot_rows.push(r);
                k += 1;
            }
        }
        ColumnHnf { rows, h, u, pivot_rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.h.len()
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn h_column(&self, j: usize) -> &[BigInt] {
        &self.h[j]
    }

    pub fn u_column(&self, j: usize) -> &[BigInt] {
        &self.u[j]
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    /// Whether `H` restricted to its pivot rows is the identity, i.e. the
    /// columns of `M` span all of `Z^rows`.
    pub fn is_identity(&self) -> bool {
        self.rank() == self.rows
            && (0..self.rank()).all(|j| self.h[j].iter().enumerate().all(|(i, x)| x == &BigInt::from(u8::from(i == j))))
    }

    /// Basis of the integer kernel of `M` (trailing columns of `U`).
    pub fn kernel(&self) -> &[Vec<BigInt>] {
        &self.u[self.rank()..]
    }

    /// An integer `x` with `M x = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows);
        let rank = self.rank();
        let mut residual = b.to_vec();
        let mut y = vec![BigInt::zero(); rank];
        let mut next_pivot = 0;
        for r in 0..self.rows {
            if next_pivot < rank && self.pivot_rows[next_pivot] == r {
                let j = next_pivot;
                let (q, rem) = residual[r].div_rem(&self.h[j][r]);
                if !rem.is_zero() {
                    return None;
                }
                if !q.is_zero() {
                    sub_multiple(&mut residual, &self.h[j], &q, r);
                }
                y[j] = q;
                next_pivot += 1;
            } else if !residual[r].is_zero() {
                return None;
            }
        }
        let n = self.cols();
        let mut x = vec![BigInt::zero(); n];
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (xi, uij) in x.iter_mut().zip(&self.u[j]) {
                if !uij.is_zero() {
                    *xi += yj * uij;
                }
            }
        }
        Some(x)
    }
}

/// A sublattice of `Z^n` in echelon form, used to pick canonical coset
/// representatives.
#[derive(Debug, Clone)]
pub struct EchelonLattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl EchelonLattice {
    /// Brings a generating set of vectors of length `dim` into echelon form.
    pub fn new(dim: usize, generators: Vec<Vec<BigInt>>) -> Self {
        let hnf = ColumnHnf::compute(dim, generators);
        let rank = hnf.rank();
        let basis = (0..rank).map(|j| hnf.h_column(j).to_vec()).collect();
        EchelonLattice { dim, basis, pivots: hnf.pivot_rows().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// The coset representative of `v` whose pivot coordinates lie in
    /// `(-c/2, c/2]` for each pivot value `c`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        let two = BigInt::from(2);
        for (b, &r) in self.basis.iter().zip(&self.pivots) {
            let c = &b[r];
            let (mut q, rem) = v[r].div_mod_floor(c);
            if &rem * &two > *c {
                q += 1;
            }
            if !q.is_zero() {
                sub_multiple(&mut v, b, &q, 0);
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for (b, &r) in self.basis.iter().zip(&self.pivots) {
            let (q, rem) = v[r].div_rem(&b[r]);
            if !rem.is_zero() {
                return false;
            }
            sub_multiple(&mut v, b, &q, 0);
        }
        v.iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> (usize, Vec<Vec<BigInt>>) {
        let r = rows.len();
        let n = rows[0].len();
        let cols = (0..n).map(|j| (0..r).map(|i| BigInt::from(rows[i][j])).collect()).collect();
        (r, cols)
    }

    fn mul(rows: usize, m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); rows];
        for (col, xj) in m.iter().zip(x) {
            for (o, a) in out.iter_mut().zip(col) {
                *o += a * xj;
            }
        }
        out
    }

    /// Determinant by fraction-free elimination, for unimodularity checks.
    fn det(cols: &[Vec<BigInt>]) -> BigInt {
        let n = cols.len();
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
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
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn check_form(m_rows: usize, m: &[Vec<BigInt>], hnf: &ColumnHnf) {
        let n = m.len();
        // H = M U
        for j in 0..n {
            assert_eq!(mul(m_rows, m, hnf.u_column(j)), hnf.h_column(j));
        }
        assert!(det(&(0..n).map(|j| hnf.u_column(j).to_vec()).collect::<Vec<_>>()).abs().is_one());
        let piv = hnf.pivot_rows();
        assert!(piv.windows(2).all(|w| w[0] < w[1]));
        for (j, &r) in piv.iter().enumerate() {
            let col = hnf.h_column(j);
            assert!(col[..r].iter().all(Zero::is_zero));
            assert!(col[r].is_positive());
            for jj in 0..j {
                let x = &hnf.h_column(jj)[r];
                assert!(!x.is_negative() && x < &col[r]);
            }
        }
        for j in hnf.rank()..n {
            assert!(hnf.h_column(j).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn small_example() {
        let (r, m) = big(&[&[2, 3, 4], &[0, 1, 5]]);
        let hnf = ColumnHnf::compute(r, m.clone());
        check_form(r, &m, &hnf);
        assert_eq!(hnf.rank(), 2);
        assert!(hnf.is_identity());
        let b = vec![BigInt::from(7), BigInt::from(-3)];
        let x = hnf.solve(&b).unwrap();
        assert_eq!(mul(r, &m, &x), b);
        assert_eq!(hnf.kernel().len(), 1);
        assert!(mul(r, &m, &hnf.kernel()[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn detects_non_integral_systems() {
        let (r, m) = big(&[&[2, 4], &[0, 0]]);
        let hnf = ColumnHnf::compute(r, m);
        assert_eq!(hnf.rank(), 1);
        assert!(hnf.solve(&[BigInt::from(1), BigInt::zero()]).is_none());
        assert!(hnf.solve(&[BigInt::from(2), BigInt::from(1)]).is_none());
        assert!(hnf.solve(&[BigInt::from(6), BigInt::zero()]).is_some());
    }

    #[test]
    fn lattice_reduction_is_canonical() {
        let gens = vec![
            vec![BigInt::from(3), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(2), BigInt::from(2)],
        ];
        let lat = EchelonLattice::new(3, gens.clone());
        let v = vec![BigInt::from(5), BigInt::from(-7), BigInt::from(1)];
        let w: Vec<BigInt> = v.iter().zip(&gens[0]).zip(&gens[1]).map(|((a, b), c)| a + b * 4 - c * 3).collect();
        assert_eq!(lat.reduce(&v), lat.reduce(&w));
        let diff: Vec<BigInt> = v.iter().zip(&w).map(|(a, b)| a - b).collect();
        assert!(lat.contains(&diff));
        assert!(!lat.contains(&[BigInt::one(), BigInt::zero(), BigInt::zero()]));
    }

    fn matrix() -> impl Strategy<Value = (usize, Vec<Vec<BigInt>>)> {
        (1usize..5, 1usize..6).prop_flat_map(|(rows, cols)| {
            prop::collection::vec(prop::collection::vec(-4i64..5, rows), cols)
                .prop_map(move |m| (rows, m.into_iter().map(|c| c.into_iter().map(BigInt::from).collect()).collect()))
        })
    }

    proptest! {
        #[test]
        fn hnf_invariants((rows, m) in matrix()) {
            let cols = m.len();
            let hnf = ColumnHnf::compute(rows, m.clone());
            check_form(rows, &m, &hnf);
            for k in hnf.kernel() {
                prop_assert!(mul(rows, &m, k).iter().all(Zero::is_zero));
            }
            // anything in the column span is solvable
            let x0: Vec<BigInt> = (0..cols).map(|j| BigInt::from(j as i64 - 2)).collect();
            let target = mul(rows, &m, &x0);
            let x = hnf.solve(&target).expect("in the image");
            prop_assert_eq!(mul(rows, &m, &x), target);
            let lat = EchelonLattice::new(cols, hnf.kernel().to_vec());
            prop_assert_eq!(lat.rank(), cols - hnf.rank());
            let diff: Vec<BigInt> = x.iter().zip(&x0).map(|(a, b)| a - b).collect();
            prop_assert!(lat.contains(&diff));
            prop_assert_eq!(lat.reduce(&x), lat.reduce(&x0));
        }
    }
}
