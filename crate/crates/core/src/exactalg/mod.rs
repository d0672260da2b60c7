//! Exact integer linear algebra: Hermite and Smith normal forms, kernels, integer solving.
//!
//! Dense routines work on `Vec<Vec<BigInt>>` and are meant for matrices up to a few
//! hundred rows. Large sparse boundary matrices go through [`sparse::Cokernel`].

pub mod sparse;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use sparse::Cokernel;

/// Sparse integer matrix keyed by `(row, col)`. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

pub type Dense = Vec<Vec<BigInt>>;

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    /// Builds a matrix by summing duplicate coordinates.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet ({i},{j}) out of bounds");
            let e = m.entries.entry((i, j)).or_insert_with(BigInt::zero);
            *e += v;
        }
        m.entries.retain(|_, v| !v.is_zero());
        m
    }

    pub fn from_dense(d: &Dense, cols: usize) -> Self {
        let mut m = Self::zeros(d.len(), cols);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Dense {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (&(i, j), v) in &other.entries {
            by_row[i].push((j, v));
        }
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                *acc.entry((i, j)).or_insert_with(BigInt::zero) += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        IntMatrix { rows: self.rows, cols: other.cols, entries: acc }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in matrix-vector product");
        let mut out = vec![BigInt::zero(); self.rows];
        for (&(i, j), v) in &self.entries {
            out[i] += v * &x[j];
        }
        out
    }

    /// Column `j` as sparse `(row, value)` pairs with `i64` values.
    pub fn columns_i64(&self) -> Option<Vec<Vec<(usize, i64)>>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (&(i, j), v) in &self.entries {
            cols[j].push((i, v.to_i64()?));
        }
        for c in &mut cols {
            c.sort_unstable_by_key(|e| e.0);
        }
        Some(cols)
    }
}

/// Smith form `L·M·R = D`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub l: IntMatrix,
    pub r: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries of `D`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn identity_dense(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(m: &mut Dense, dst: usize, src: usize, q: &BigInt) {
    // row_dst -= q * row_src
    if q.is_zero() {
        return;
    }
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_axpy(m: &mut Dense, dst: usize, src: usize, q: &BigInt) {
    // col_dst -= q * col_src
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
}

fn swap_cols(m: &mut Dense, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Row Hermite normal form: returns `(H, U)` with `U` unimodular and `U·M = H`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.to_dense();
    let mut u = identity_dense(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()));
            let Some(p) = pivot else { break };
            a.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !a[i][c].is_zero() {
                    let q = floor_div(&a[i][c], &a[r][c]);
                    row_axpy(&mut a, i, r, &q);
                    row_axpy(&mut u, i, r, &q);
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < rows && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -&*x;
                }
                for x in u[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = floor_div(&a[i][c], &a[r][c]);
                row_axpy(&mut a, i, r, &q);
                row_axpy(&mut u, i, r, &q);
            }
            r += 1;
        }
    }
    (IntMatrix::from_dense(&a, cols), IntMatrix::from_dense(&u, rows))
}

/// Output of the dense Smith reduction; transforms are present only when requested.
pub(crate) struct DenseSnf {
    pub diag: Vec<BigInt>,
    pub l: Option<Dense>,
    pub l_inv: Option<Dense>,
    pub r: Option<Dense>,
}

/// Dense Smith reduction with minimal-absolute-value pivoting.
pub(crate) fn snf_dense(mut a: Dense, cols: usize, want_l: bool, want_r: bool) -> DenseSnf {
    let rows = a.len();
    let mut l = want_l.then(|| identity_dense(rows));
    let mut l_inv = want_l.then(|| identity_dense(rows));
    let mut r = want_r.then(|| identity_dense(cols));
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // minimal nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() {
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => a[i][j].abs() < a[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                        if a[i][j].abs().is_one() {
                            break;
                        }
                    }
                }
            }
            if let Some((bi, bj)) = best {
                if a[bi][bj].abs().is_one() {
                    break;
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows_all(&mut a, &mut l, &mut l_inv, t, pi);
        swap_cols(&mut a, t, pj);
        if let Some(r) = r.as_mut() {
            swap_cols(r, t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = floor_div(&a[i][t], &a[t][t]);
                    row_op(&mut a, &mut l, &mut l_inv, i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = floor_div(&a[t][j], &a[t][t]);
                    col_axpy(&mut a, j, t, &q);
                    if let Some(r) = r.as_mut() {
                        col_axpy(r, j, t, &q);
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // move the smallest remaining entry of row/col t into the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    swap_rows_all(&mut a, &mut l, &mut l_inv, t, best.0);
                }
                if best.1 != t {
                    swap_cols(&mut a, t, best.1);
                    if let Some(r) = r.as_mut() {
                        swap_cols(r, t, best.1);
                    }
                }
                continue;
            }
            // divisibility of the trailing block
            let p = a[t][t].clone();
            let mut offender = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_zero() && !a[i][j].is_multiple_of(&p) {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_op(&mut a, &mut l, &mut l_inv, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            let minus_one = -BigInt::one();
            let zero_to_neg = |m: &mut Dense, i: usize| {
                for x in m[i].iter_mut() {
                    *x = -&*x;
                }
            };
            zero_to_neg(&mut a, t);
            if let Some(l) = l.as_mut() {
                zero_to_neg(l, t);
            }
            if let Some(li) = l_inv.as_mut() {
                for row in li.iter_mut() {
                    row[t] = &row[t] * &minus_one;
                }
            }
        }
        t += 1;
    }
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    DenseSnf { diag, l, l_inv, r }
}

fn swap_rows_all(a: &mut Dense, l: &mut Option<Dense>, l_inv: &mut Option<Dense>, x: usize, y: usize) {
    if x == y {
        return;
    }
    a.swap(x, y);
    if let Some(l) = l.as_mut() {
        l.swap(x, y);
    }
    if let Some(li) = l_inv.as_mut() {
        swap_cols(li, x, y);
    }
}

/// `row_dst -= q * row_src` on `a` and `L`, with the inverse update on `L⁻¹`.
fn row_op(a: &mut Dense, l: &mut Option<Dense>, l_inv: &mut Option<Dense>, dst: usize, src: usize, q: &BigInt) {
    row_axpy(a, dst, src, q);
    if let Some(l) = l.as_mut() {
        row_axpy(l, dst, src, q);
    }
    if let Some(li) = l_inv.as_mut() {
        // L ← E L with E = I − q e_dst e_srcᵀ, so L⁻¹ ← L⁻¹ (I + q e_dst e_srcᵀ)
        let neg = -q;
        col_axpy(li, src, dst, &neg);
    }
}

/// Smith normal form with both transforms.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let out = snf_dense(m.to_dense(), cols, true, true);
    let mut d = IntMatrix::zeros(rows, cols);
    for (i, v) in out.diag.iter().enumerate() {
        d.set(i, i, v.clone());
    }
    SnfResult {
        d,
        l: IntMatrix::from_dense(&out.l.unwrap(), rows),
        r: IntMatrix::from_dense(&out.r.unwrap(), cols),
    }
}

/// Invariant factors only (no transform bookkeeping), including zeros for rank deficiency.
pub fn snf_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    snf_dense(m.to_dense(), m.cols(), false, false).diag
}

pub fn rank(m: &IntMatrix) -> usize {
    snf_diagonal(m).iter().filter(|d| !d.is_zero()).count()
}

/// Basis of the integer kernel lattice `{x : M·x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let cols = m.cols();
    let out = snf_dense(m.to_dense(), cols, false, true);
    let r = out.r.unwrap();
    let rk = out.diag.iter().filter(|d| !d.is_zero()).count();
    (rk..cols).map(|j| (0..cols).map(|i| r[i][j].clone()).collect()).collect()
}

/// Some integer solution of `M·x = b`, or `None` when there is none.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::Usage(format!(
            "right-hand side has length {} but matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    let cols = m.cols();
    let out = snf_dense(m.to_dense(), cols, true, true);
    let l = out.l.unwrap();
    let r = out.r.unwrap();
    let lb: Vec<BigInt> = l
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect();
    let mut y = vec![BigInt::zero(); cols];
    for (i, v) in lb.iter().enumerate() {
        let d = out.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !v.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, rem) = v.div_rem(&d);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    let x = (0..cols).map(|i| (0..cols).map(|j| &r[i][j] * &y[j]).sum()).collect();
    Ok(Some(x))
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.to_dense();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
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
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}
