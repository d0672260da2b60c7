//! Finite abelian groups `⊕ Z/mᵢ` in coordinates, homomorphisms between them, and
//! kernels/cokernels as subquotient presentations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{hnf, kernel_basis, snf_dense, solve_integer, IntMatrix};

fn to_u64(v: &BigInt) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::Resource(format!("invariant factor {v} does not fit in 64 bits")))
}

/// Invariant factors (> 1, divisibility-ordered) of `⊕ Z/mᵢ`.
pub fn canonical_factors(moduli: &[u64]) -> Vec<u64> {
    let n = moduli.len();
    let d: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::from(moduli[i]) } else { BigInt::zero() }).collect())
        .collect();
    snf_dense(d, n, false, false)
        .diag
        .iter()
        .filter(|x| !x.is_one() && !x.is_zero())
        .map(|x| x.to_u64().unwrap())
        .collect()
}

pub fn group_order(moduli: &[u64]) -> u128 {
    moduli.iter().map(|&m| m as u128).product()
}

/// A homomorphism `⊕ Z/src → ⊕ Z/dst` given on coordinates by an integer matrix.
#[derive(Clone, Debug, Serialize)]
pub struct FinHom {
    pub src: Vec<u64>,
    pub dst: Vec<u64>,
    /// `dst.len()` rows, `src.len()` columns.
    pub matrix: Vec<Vec<i64>>,
}

/// The subgroup `L / D·Z^k` of `⊕ Z/ambient` where `L ⊇ D·Z^k` is a lattice.
#[derive(Clone, Debug, Serialize)]
pub struct Subquotient {
    pub ambient: Vec<u64>,
    pub invariant_factors: Vec<u64>,
    /// Generators in ambient coordinates, one per invariant factor.
    pub generators: Vec<Vec<i64>>,
    #[serde(skip)]
    basis: IntMatrix,
    #[serde(skip)]
    transform: Vec<Vec<BigInt>>,
    #[serde(skip)]
    kept: Vec<usize>,
}

impl FinHom {
    pub fn new(src: Vec<u64>, dst: Vec<u64>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != dst.len() || matrix.iter().any(|r| r.len() != src.len()) {
            return Err(Error::Contract("homomorphism matrix has wrong shape".into()));
        }
        let h = FinHom { src, dst, matrix };
        for (j, &d) in h.src.iter().enumerate() {
            for (i, &e) in h.dst.iter().enumerate() {
                if (h.matrix[i][j] as i128 * d as i128).rem_euclid(e as i128) != 0 {
                    return Err(Error::Contract(format!(
                        "coordinate map is not well defined: column {j} of order {d} maps to order not dividing it"
                    )));
                }
            }
        }
        Ok(h)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<u64> {
        self.dst
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let s: i128 = self.matrix[i].iter().zip(x).map(|(a, b)| *a as i128 * *b as i128).sum();
                s.rem_euclid(e as i128) as u64
            })
            .collect()
    }

    fn stacked(&self) -> IntMatrix {
        let k = self.src.len();
        let m = self.dst.len();
        let mut t = Vec::new();
        for i in 0..m {
            for j in 0..k {
                t.push((i, j, self.matrix[i][j]));
            }
            t.push((i, k + i, self.dst[i] as i64));
        }
        IntMatrix::from_triplets(m, k + m, t)
    }

    pub fn kernel(&self) -> Result<Subquotient> {
        let k = self.src.len();
        let mut spanning: Vec<Vec<BigInt>> = kernel_basis(&self.stacked()).into_iter().map(|v| v[..k].to_vec()).collect();
        for j in 0..k {
            let mut v = vec![BigInt::zero(); k];
            v[j] = BigInt::from(self.src[j]);
            spanning.push(v);
        }
        Subquotient::new(self.src.clone(), spanning)
    }

    pub fn cokernel_factors(&self) -> Result<Vec<u64>> {
        let m = self.stacked();
        let diag = snf_dense(m.to_dense(), m.cols(), false, false).diag;
        let mut out = Vec::new();
        for d in diag {
            if d.is_zero() {
                return Err(Error::Contract("cokernel has a free part".into()));
            }
            if !d.is_one() {
                out.push(to_u64(&d)?);
            }
        }
        Ok(out)
    }

    pub fn image_order(&self) -> Result<u128> {
        let k = self.kernel()?;
        Ok(group_order(&self.src) / group_order(&k.invariant_factors))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.invariant_factors.is_empty())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel_factors()?.is_empty())
    }
}

impl Subquotient {
    /// `spanning` generates a lattice containing `ambient_j · e_j` for every `j`.
    pub fn new(ambient: Vec<u64>, spanning: Vec<Vec<BigInt>>) -> Result<Self> {
        let k = ambient.len();
        if k == 0 {
            return Ok(Subquotient {
                ambient,
                invariant_factors: vec![],
                generators: vec![],
                basis: IntMatrix::zeros(0, 0),
                transform: vec![],
                kept: vec![],
            });
        }
        let rows = spanning.len();
        let span = IntMatrix::from_dense(&spanning, k);
        let (h, _) = hnf(&span);
        let mut basis = IntMatrix::zeros(k, k);
        let mut r = 0;
        for i in 0..rows {
            let row: Vec<BigInt> = (0..k).map(|j| h.get(i, j)).collect();
            if row.iter().all(|x| x.is_zero()) {
                continue;
            }
            for (j, v) in row.into_iter().enumerate() {
                basis.set(j, r, v);
            }
            r += 1;
        }
        if r != k {
            return Err(Error::Contract("lattice is not of full rank".into()));
        }
        let mut c = vec![vec![BigInt::zero(); k]; k];
        for j in 0..k {
            let mut e = vec![BigInt::zero(); k];
            e[j] = BigInt::from(ambient[j]);
            let y = solve_integer(&basis, &e)?
                .ok_or_else(|| Error::Contract("sublattice not contained in lattice".into()))?;
            for i in 0..k {
                c[i][j] = y[i].clone();
            }
        }
        let s = snf_dense(c, k, true, false);
        let p = s.l.unwrap();
        let p_inv = s.l_inv.unwrap();
        let mut invariant_factors = Vec::new();
        let mut generators = Vec::new();
        let mut kept = Vec::new();
        for (i, d) in s.diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            invariant_factors.push(to_u64(d)?);
            kept.push(i);
            let col: Vec<BigInt> = (0..k).map(|t| p_inv[t][i].clone()).collect();
            let g = basis.mul_vec(&col);
            generators.push(
                g.iter()
                    .zip(&ambient)
                    .map(|(x, &m)| x.mod_floor(&BigInt::from(m)).to_i64().unwrap())
                    .collect(),
            );
        }
        Ok(Subquotient { ambient, invariant_factors, generators, basis, transform: p, kept })
    }

    pub fn order(&self) -> u128 {
        group_order(&self.invariant_factors)
    }

    /// Coordinates of an ambient element lying in the subgroup.
    pub fn coordinates(&self, x: &[i64]) -> Result<Vec<u64>> {
        if x.len() != self.ambient.len() {
            return Err(Error::Contract("coordinate vector has wrong length".into()));
        }
        if self.ambient.is_empty() {
            return Ok(vec![]);
        }
        let b: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let y = solve_integer(&self.basis, &b)?
            .ok_or_else(|| Error::Contract("element does not lie in the subgroup".into()))?;
        Ok(self
            .kept
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&i, &s)| {
                let z: BigInt = self.transform[i].iter().zip(&y).map(|(a, b)| a * b).sum();
                z.mod_floor(&BigInt::from(s)).to_u64().unwrap()
            })
            .collect())
    }
}
