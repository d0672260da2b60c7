//! Cokernel of a sparse integer relation matrix.
//!
//! Unit pivots are eliminated by column operations first (cheap, exact, and they never
//! touch the surviving generators). Whatever is left is handed to the dense Smith
//! reduction. Elimination runs in checked `i64` and restarts in `BigInt` on overflow.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{snf_dense, Dense};
use crate::error::{Error, Result};

trait Scalar: Clone + Debug + PartialEq {
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn unit_sign(&self) -> Option<i64>;
    /// `a - b*c`, or `None` on overflow.
    fn mul_sub(a: &Self, b: &Self, c: &Self) -> Option<Self>;
    fn mul_small(&self, s: i64) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn nil() -> Self {
        0
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn unit_sign(&self) -> Option<i64> {
        (*self == 1 || *self == -1).then_some(*self)
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self) -> Option<Self> {
        a.checked_sub(b.checked_mul(*c)?)
    }
    fn mul_small(&self, s: i64) -> Option<Self> {
        self.checked_mul(s)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn unit_sign(&self) -> Option<i64> {
        if self.abs().is_one() {
            self.to_i64()
        } else {
            None
        }
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self) -> Option<Self> {
        Some(a - b * c)
    }
    fn mul_small(&self, s: i64) -> Option<Self> {
        Some(self * s)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

struct Pivot {
    row: usize,
    sign: i64,
    /// Other entries of the pivot column at elimination time.
    column: Vec<(usize, BigInt)>,
}

/// `Z^nrows / span(columns)` with torsion generators and dual functionals.
pub struct Cokernel {
    nrows: usize,
    rank: usize,
    torsion: Vec<BigInt>,
    generators: Vec<Vec<(usize, BigInt)>>,
    pivots: Vec<Pivot>,
    residual_rows: Vec<usize>,
    /// Rows of the residual left transform belonging to the torsion factors.
    functional_rows: Vec<Vec<BigInt>>,
}

struct Elimination<T> {
    pivots: Vec<Pivot>,
    residual_rows: Vec<usize>,
    residual: Dense,
    residual_cols: usize,
    _marker: std::marker::PhantomData<T>,
}

fn eliminate<T: Scalar>(
    nrows: usize,
    columns: Vec<Vec<(usize, T)>>,
    keep_pivots: bool,
) -> std::result::Result<Elimination<T>, Overflow> {
    let mut cols = columns;
    let mut rows: Vec<HashSet<usize>> = vec![HashSet::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for (i, _) in c {
            rows[*i].insert(j);
        }
    }
    let mut alive = vec![true; cols.len()];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        cols.iter().enumerate().map(|(j, c)| Reverse((c.len(), j))).collect();
    let mut pivots = Vec::new();
    while let Some(Reverse((len, c))) = heap.pop() {
        if !alive[c] || cols[c].len() != len {
            continue;
        }
        if len == 0 {
            alive[c] = false;
            continue;
        }
        let choice = cols[c]
            .iter()
            .filter_map(|(i, v)| v.unit_sign().map(|s| (rows[*i].len(), *i, s)))
            .min();
        let Some((_, r, sign)) = choice else { continue };
        let pcol = std::mem::take(&mut cols[c]);
        let touched: Vec<usize> = rows[r].iter().copied().filter(|&j| j != c).collect();
        for j in touched {
            let a = match cols[j].binary_search_by_key(&r, |e| e.0) {
                Ok(pos) => cols[j][pos].1.clone(),
                Err(_) => continue,
            };
            let factor = a.mul_small(sign).ok_or(Overflow)?;
            let old = std::mem::take(&mut cols[j]);
            let mut merged = Vec::with_capacity(old.len() + pcol.len());
            let (mut x, mut y) = (0, 0);
            while x < old.len() || y < pcol.len() {
                let take_old = y >= pcol.len() || (x < old.len() && old[x].0 < pcol[y].0);
                let take_new = x >= old.len() || (y < pcol.len() && pcol[y].0 < old[x].0);
                if take_old {
                    merged.push(old[x].clone());
                    x += 1;
                } else if take_new {
                    let (i, ref v) = pcol[y];
                    let nv = T::mul_sub(&T::nil(), &factor, v).ok_or(Overflow)?;
                    rows[i].insert(j);
                    merged.push((i, nv));
                    y += 1;
                } else {
                    let i = old[x].0;
                    let nv = T::mul_sub(&old[x].1, &factor, &pcol[y].1).ok_or(Overflow)?;
                    if nv.is_nil() {
                        rows[i].remove(&j);
                    } else {
                        merged.push((i, nv));
                    }
                    x += 1;
                    y += 1;
                }
            }
            heap.push(Reverse((merged.len(), j)));
            cols[j] = merged;
        }
        for (i, _) in &pcol {
            rows[*i].remove(&c);
        }
        alive[c] = false;
        if keep_pivots {
            pivots.push(Pivot {
                row: r,
                sign,
                column: pcol.iter().filter(|e| e.0 != r).map(|(i, v)| (*i, v.to_big())).collect(),
            });
        } else {
            pivots.push(Pivot { row: r, sign, column: Vec::new() });
        }
    }
    let live: Vec<usize> = (0..cols.len()).filter(|&j| alive[j] && !cols[j].is_empty()).collect();
    let mut residual_rows: Vec<usize> = live.iter().flat_map(|&j| cols[j].iter().map(|e| e.0)).collect();
    residual_rows.sort_unstable();
    residual_rows.dedup();
    let pos = |r: usize| residual_rows.binary_search(&r).unwrap();
    let mut residual = vec![vec![BigInt::zero(); live.len()]; residual_rows.len()];
    for (k, &j) in live.iter().enumerate() {
        for (i, v) in &cols[j] {
            residual[pos(*i)][k] = v.to_big();
        }
    }
    Ok(Elimination {
        pivots,
        residual_rows,
        residual,
        residual_cols: live.len(),
        _marker: std::marker::PhantomData,
    })
}

impl Cokernel {
    /// Presents `Z^nrows / span(columns)`. Each column is a sparse `(row, value)` list.
    pub fn new(nrows: usize, columns: &[Vec<(usize, i64)>], max_dense: usize) -> Result<Self> {
        Self::build(nrows, columns, true, max_dense)
    }

    /// Rank of the relation lattice only.
    pub fn rank_of(nrows: usize, columns: &[Vec<(usize, i64)>], max_dense: usize) -> Result<usize> {
        Ok(Self::build(nrows, columns, false, max_dense)?.rank)
    }

    fn build(nrows: usize, columns: &[Vec<(usize, i64)>], full: bool, max_dense: usize) -> Result<Self> {
        for c in columns {
            debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0), "column rows must be sorted");
        }
        let elim = match eliminate::<i64>(nrows, columns.to_vec(), full) {
            Ok(e) => Elimination {
                pivots: e.pivots,
                residual_rows: e.residual_rows,
                residual: e.residual,
                residual_cols: e.residual_cols,
                _marker: std::marker::PhantomData::<BigInt>,
            },
            Err(Overflow) => {
                let big: Vec<Vec<(usize, BigInt)>> = columns
                    .iter()
                    .map(|c| c.iter().map(|(i, v)| (*i, BigInt::from(*v))).collect())
                    .collect();
                match eliminate::<BigInt>(nrows, big, full) {
                    Ok(e) => e,
                    Err(Overflow) => unreachable!("BigInt arithmetic cannot overflow"),
                }
            }
        };
        let cells = elim.residual_rows.len() * elim.residual_cols;
        if cells > max_dense {
            return Err(Error::Resource(format!(
                "residual block {}x{} after sparse elimination exceeds the dense ceiling",
                elim.residual_rows.len(),
                elim.residual_cols
            )));
        }
        let dense = snf_dense(elim.residual, elim.residual_cols, full, false);
        let residual_rank = dense.diag.iter().filter(|d| !d.is_zero()).count();
        let rank = elim.pivots.len() + residual_rank;
        let mut torsion = Vec::new();
        let mut generators = Vec::new();
        let mut functional_rows = Vec::new();
        if full {
            let l = dense.l.unwrap();
            let l_inv = dense.l_inv.unwrap();
            for (t, d) in dense.diag.iter().enumerate() {
                if d.is_zero() || d.is_one() {
                    continue;
                }
                torsion.push(d.clone());
                let g: Vec<(usize, BigInt)> = elim
                    .residual_rows
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| !l_inv[*k][t].is_zero())
                    .map(|(k, &row)| (row, l_inv[k][t].clone()))
                    .collect();
                generators.push(g);
                functional_rows.push(l[t].clone());
            }
        }
        Ok(Cokernel {
            nrows,
            rank,
            torsion,
            generators,
            pivots: elim.pivots,
            residual_rows: elim.residual_rows,
            functional_rows,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn free_rank(&self) -> usize {
        self.nrows - self.rank
    }

    /// Invariant factors greater than one, in divisibility order.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Sparse vectors in `Z^nrows` whose classes generate the torsion, one per factor.
    pub fn generators(&self) -> &[Vec<(usize, BigInt)>] {
        &self.generators
    }

    /// Integer functional on `Z^nrows`, reduced mod the `j`-th torsion factor, that
    /// vanishes on the relations, is 1 on generator `j` and 0 on the others.
    pub fn functional_mod(&self, j: usize) -> Vec<BigInt> {
        let d = &self.torsion[j];
        let mut vals = vec![BigInt::zero(); self.nrows];
        for (k, &row) in self.residual_rows.iter().enumerate() {
            vals[row] = self.functional_rows[j][k].mod_floor(d);
        }
        for p in self.pivots.iter().rev() {
            let mut acc = BigInt::zero();
            for (i, v) in &p.column {
                if !vals[*i].is_zero() {
                    acc += v * &vals[*i];
                }
            }
            vals[p.row] = (-(acc * p.sign)).mod_floor(d);
        }
        vals
    }
}
