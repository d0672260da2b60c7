//! The normalized double bar complex `C^{p,q}` of `K ⋊ G` with Q/Z coefficients, its
//! sub- and quotient complexes, the two differentials, and integer boundary matrices.
//!
//! A cell at bidegree `(p,q)` is a tuple `(g₁..g_p ; k₁..k_q)` of non-identity elements.
//! Cells are numbered lexicographically (g's most significant) over non-identity indices.
//! In total degree `n` the bidegrees are concatenated in increasing `p`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circle::CircleValue;
use crate::error::{Error, Limits, Result};
use crate::groups::{trivial_action, FiniteGroup, GroupAction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "param")]
pub enum Shape {
    /// Every bidegree.
    Full,
    /// Rows `q ≥ 1`.
    A,
    /// `p ≥ 1` and `q ≥ 1`.
    B,
    /// Rows `1 ≤ q ≤ r`, the quotient of `A` by the rows above `r`.
    ATrunc(usize),
    /// The single row `q = q₀` with `δ_G` only.
    RowStrip(usize),
    /// The ordinary normalized bar complex of K (column `p = 0`, trivial G).
    SingleGroup,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Full => write!(f, "full"),
            Shape::A => write!(f, "a"),
            Shape::B => write!(f, "b"),
            Shape::ATrunc(r) => write!(f, "atrunc:{r}"),
            Shape::RowStrip(q) => write!(f, "row:{q}"),
            Shape::SingleGroup => write!(f, "single"),
        }
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("unknown complex {s:?} (full, a, b, atrunc:r, row:q, single)"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (head.to_ascii_lowercase().as_str(), arg) {
            ("full", None) => Ok(Shape::Full),
            ("a", None) => Ok(Shape::A),
            ("b", None) => Ok(Shape::B),
            ("atrunc", Some(r)) if r >= 1 => Ok(Shape::ATrunc(r)),
            ("row", Some(q)) => Ok(Shape::RowStrip(q)),
            ("single", None) => Ok(Shape::SingleGroup),
            _ => Err(bad()),
        }
    }
}

/// Which double complex, over which `(K, G, ρ)`.
#[derive(Clone, Debug)]
pub struct ComplexSpec {
    pub action: GroupAction,
    pub shape: Shape,
    g_nonid: Vec<usize>,
    k_nonid: Vec<usize>,
    g_pos: Vec<usize>,
    k_pos: Vec<usize>,
}

const NONE: usize = usize::MAX;

fn positions(g: &FiniteGroup) -> (Vec<usize>, Vec<usize>) {
    let nonid = g.non_identity();
    let mut pos = vec![NONE; g.order()];
    for (i, &x) in nonid.iter().enumerate() {
        pos[x] = i;
    }
    (nonid, pos)
}

impl ComplexSpec {
    pub fn new(action: &GroupAction, shape: Shape) -> Self {
        let action = if shape == Shape::SingleGroup {
            trivial_action(&FiniteGroup::trivial(), &action.target)
        } else {
            action.clone()
        };
        let (g_nonid, g_pos) = positions(&action.group);
        let (k_nonid, k_pos) = positions(&action.target);
        ComplexSpec { action, shape, g_nonid, k_nonid, g_pos, k_pos }
    }

    /// The normalized bar complex of a single group.
    pub fn single_group(h: &FiniteGroup) -> Self {
        Self::new(&trivial_action(&FiniteGroup::trivial(), h), Shape::SingleGroup)
    }

    pub fn with_shape(&self, shape: Shape) -> Self {
        Self::new(&self.action, shape)
    }

    pub fn g(&self) -> &FiniteGroup {
        &self.action.group
    }

    pub fn k(&self) -> &FiniteGroup {
        &self.action.target
    }

    pub fn describe(&self) -> String {
        match self.shape {
            Shape::SingleGroup => format!("single({})", self.k().name()),
            s => format!("{}({} by {}, {})", s, self.k().name(), self.g().name(), self.action.name()),
        }
    }

    pub fn admits(&self, p: usize, q: usize) -> bool {
        match self.shape {
            Shape::Full => true,
            Shape::A => q >= 1,
            Shape::B => p >= 1 && q >= 1,
            Shape::ATrunc(r) => q >= 1 && q <= r,
            Shape::RowStrip(q0) => q == q0,
            Shape::SingleGroup => p == 0,
        }
    }

    /// Admitted bidegrees of total degree `n`, increasing in `p`.
    pub fn bidegrees(&self, n: usize) -> Vec<(usize, usize)> {
        (0..=n).map(|p| (p, n - p)).filter(|&(p, q)| self.admits(p, q)).collect()
    }

    pub fn cell_count(&self, p: usize, q: usize) -> usize {
        self.g_nonid.len().pow(p as u32) * self.k_nonid.len().pow(q as u32)
    }

    /// Total cell count in degree `n`.
    pub fn cells(&self, n: usize) -> usize {
        self.bidegrees(n).iter().map(|&(p, q)| self.cell_count(p, q)).sum()
    }

    /// Offset of bidegree `(p, n−p)` inside the degree-`n` basis.
    pub fn offset(&self, p: usize, q: usize) -> Option<usize> {
        if !self.admits(p, q) {
            return None;
        }
        let n = p + q;
        Some(self.bidegrees(n).iter().take_while(|&&(pp, _)| pp < p).map(|&(a, b)| self.cell_count(a, b)).sum())
    }

    /// Index of the tuple, or `None` if some entry is an identity.
    pub fn encode(&self, g: &[usize], k: &[usize]) -> Option<usize> {
        let (ng, nk) = (self.g_nonid.len(), self.k_nonid.len());
        let mut idx = 0usize;
        for &x in g {
            let d = self.g_pos[x];
            if d == NONE {
                return None;
            }
            idx = idx * ng + d;
        }
        for &x in k {
            let d = self.k_pos[x];
            if d == NONE {
                return None;
            }
            idx = idx * nk + d;
        }
        Some(idx)
    }

    /// Tuple of cell `idx` at `(p,q)`.
    pub fn decode(&self, p: usize, q: usize, mut idx: usize) -> (Vec<usize>, Vec<usize>) {
        let (ng, nk) = (self.g_nonid.len(), self.k_nonid.len());
        let mut k = vec![0; q];
        for j in (0..q).rev() {
            k[j] = self.k_nonid[idx % nk];
            idx /= nk;
        }
        let mut g = vec![0; p];
        for i in (0..p).rev() {
            g[i] = self.g_nonid[idx % ng];
            idx /= ng;
        }
        (g, k)
    }

    /// Faces of a cell in the G-direction: `(g', k', sign)` for the `(p−1, q)` cochain
    /// evaluations appearing in `δ_G`. Faces containing an identity are skipped.
    pub fn g_faces(&self, g: &[usize], k: &[usize], mut f: impl FnMut(&[usize], &[usize], i64)) {
        let p = g.len();
        if p == 0 {
            return;
        }
        let grp = self.g();
        f(&g[1..], k, 1);
        let mut buf = Vec::with_capacity(p);
        for i in 1..p {
            let m = grp.mul(g[i - 1], g[i]);
            if m == grp.identity() {
                continue;
            }
            buf.clear();
            buf.extend_from_slice(&g[..i - 1]);
            buf.push(m);
            buf.extend_from_slice(&g[i + 1..]);
            f(&buf, k, if i % 2 == 0 { 1 } else { -1 });
        }
        let last = g[p - 1];
        let moved: Vec<usize> = k.iter().map(|&x| self.action.act(last, x)).collect();
        f(&g[..p - 1], &moved, if p % 2 == 0 { 1 } else { -1 });
    }

    /// Faces in the K-direction for `δ_K` (without the total-complex sign).
    pub fn k_faces(&self, g: &[usize], k: &[usize], mut f: impl FnMut(&[usize], &[usize], i64)) {
        let q = k.len();
        if q == 0 {
            return;
        }
        let grp = self.k();
        f(g, &k[1..], 1);
        let mut buf = Vec::with_capacity(q);
        for j in 1..q {
            let m = grp.mul(k[j - 1], k[j]);
            if m == grp.identity() {
                continue;
            }
            buf.clear();
            buf.extend_from_slice(&k[..j - 1]);
            buf.push(m);
            buf.extend_from_slice(&k[j + 1..]);
            f(g, &buf, if j % 2 == 0 { 1 } else { -1 });
        }
        f(g, &k[..q - 1], if q % 2 == 0 { 1 } else { -1 });
    }

    /// Columns of `∂_n : C_n → C_{n−1}` (the transpose of the degree `n−1 → n`
    /// coboundary), with entries summed over coincident faces. Rows are sorted.
    pub fn boundary_columns(&self, n: usize) -> Vec<Vec<(usize, i64)>> {
        let mut cols = Vec::with_capacity(self.cells(n));
        for (p, q) in self.bidegrees(n) {
            let g_ok = p >= 1 && self.admits(p - 1, q);
            let k_ok = q >= 1 && self.admits(p, q - 1);
            let g_off = if g_ok { self.offset(p - 1, q).unwrap() } else { 0 };
            let k_off = if k_ok { self.offset(p, q - 1).unwrap() } else { 0 };
            let ksign = if p % 2 == 0 { 1 } else { -1 };
            for idx in 0..self.cell_count(p, q) {
                let (g, k) = self.decode(p, q, idx);
                let mut col: Vec<(usize, i64)> = Vec::new();
                if g_ok {
                    self.g_faces(&g, &k, |a, b, s| {
                        if let Some(i) = self.encode(a, b) {
                            col.push((g_off + i, s));
                        }
                    });
                }
                if k_ok {
                    self.k_faces(&g, &k, |a, b, s| {
                        if let Some(i) = self.encode(a, b) {
                            col.push((k_off + i, s * ksign));
                        }
                    });
                }
                cols.push(merge_entries(col));
            }
        }
        cols
    }

    /// `∂_n` as an [`crate::exactalg::IntMatrix`], rows = cells(n−1), cols = cells(n).
    pub fn boundary_matrix(&self, n: usize) -> crate::exactalg::IntMatrix {
        let rows = if n == 0 { 0 } else { self.cells(n - 1) };
        let cols = self.boundary_columns(n);
        let ncols = cols.len();
        crate::exactalg::IntMatrix::from_triplets(
            rows,
            ncols,
            cols.into_iter().enumerate().flat_map(|(j, c)| c.into_iter().map(move |(i, v)| (i, j, v))),
        )
    }

    pub fn check_size(&self, n: usize, limits: &Limits) -> Result<()> {
        for (p, q) in self.bidegrees(n) {
            let est = self.cell_count(p, q) * (p + q + 2);
            if est > limits.max_nnz {
                return Err(Error::Resource(format!(
                    "boundary block at bidegree ({p},{q}) of {} has ~{est} nonzeros, above the ceiling {}",
                    self.describe(),
                    limits.max_nnz
                )));
            }
        }
        let order = self.g().order().max(self.k().order());
        if order > limits.max_group_order {
            return Err(Error::Resource(format!("group order {order} exceeds ceiling {}", limits.max_group_order)));
        }
        Ok(())
    }
}

fn merge_entries(mut col: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    col.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(col.len());
    for (i, v) in col {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// A circle-valued cochain at one bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub p: usize,
    pub q: usize,
    pub values: Vec<CircleValue>,
}

impl Cochain {
    pub fn zero(spec: &ComplexSpec, p: usize, q: usize) -> Self {
        Cochain { p, q, values: vec![CircleValue::ZERO; spec.cell_count(p, q)] }
    }

    pub fn from_fn(spec: &ComplexSpec, p: usize, q: usize, mut f: impl FnMut(&[usize], &[usize]) -> CircleValue) -> Self {
        let values = (0..spec.cell_count(p, q))
            .map(|i| {
                let (g, k) = spec.decode(p, q, i);
                f(&g, &k)
            })
            .collect();
        Cochain { p, q, values }
    }

    /// Uniformly random values with denominator `den`.
    pub fn random(spec: &ComplexSpec, p: usize, q: usize, den: i128, rng: &mut impl Rng) -> Self {
        let values = (0..spec.cell_count(p, q)).map(|_| CircleValue::new(rng.gen_range(0..den), den)).collect();
        Cochain { p, q, values }
    }

    /// Value at a tuple; tuples containing an identity evaluate to zero.
    pub fn eval(&self, spec: &ComplexSpec, g: &[usize], k: &[usize]) -> CircleValue {
        debug_assert_eq!((g.len(), k.len()), (self.p, self.q));
        match spec.encode(g, k) {
            Some(i) => self.values[i],
            None => CircleValue::ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!((self.p, self.q), (other.p, other.q));
        Cochain { p: self.p, q: self.q, values: self.values.iter().zip(&other.values).map(|(a, b)| *a + *b).collect() }
    }

    pub fn scale(&self, s: i64) -> Cochain {
        Cochain { p: self.p, q: self.q, values: self.values.iter().map(|v| v.scale(s)).collect() }
    }
}

fn target_check(spec: &ComplexSpec, p: usize, q: usize) -> Result<()> {
    if spec.admits(p, q) {
        Ok(())
    } else {
        Err(Error::Contract(format!("bidegree ({p},{q}) is outside {}", spec.describe())))
    }
}

/// `δ_G f` at `(p+1, q)`.
pub fn delta_g(spec: &ComplexSpec, f: &Cochain) -> Result<Cochain> {
    let (p, q) = (f.p + 1, f.q);
    target_check(spec, p, q)?;
    Ok(Cochain::from_fn(spec, p, q, |g, k| {
        let mut acc = CircleValue::ZERO;
        spec.g_faces(g, k, |a, b, s| acc += f.eval(spec, a, b).scale(s));
        acc
    }))
}

/// `δ_K f` at `(p, q+1)`.
pub fn delta_k(spec: &ComplexSpec, f: &Cochain) -> Result<Cochain> {
    let (p, q) = (f.p, f.q + 1);
    target_check(spec, p, q)?;
    Ok(Cochain::from_fn(spec, p, q, |g, k| {
        let mut acc = CircleValue::ZERO;
        spec.k_faces(g, k, |a, b, s| acc += f.eval(spec, a, b).scale(s));
        acc
    }))
}

/// An element of `Tot^n`: one cochain per admitted bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalCochain {
    pub degree: usize,
    pub components: BTreeMap<(usize, usize), Cochain>,
}

impl TotalCochain {
    pub fn zero(spec: &ComplexSpec, n: usize) -> Self {
        TotalCochain {
            degree: n,
            components: spec.bidegrees(n).into_iter().map(|(p, q)| ((p, q), Cochain::zero(spec, p, q))).collect(),
        }
    }

    pub fn random(spec: &ComplexSpec, n: usize, den: i128, rng: &mut impl Rng) -> Self {
        TotalCochain {
            degree: n,
            components: spec
                .bidegrees(n)
                .into_iter()
                .map(|(p, q)| ((p, q), Cochain::random(spec, p, q, den, rng)))
                .collect(),
        }
    }

    /// Builds from components; missing admitted bidegrees are zero, extra ones are an error.
    pub fn from_components(spec: &ComplexSpec, n: usize, parts: Vec<Cochain>) -> Result<Self> {
        let mut t = Self::zero(spec, n);
        for c in parts {
            if c.p + c.q != n || !spec.admits(c.p, c.q) {
                return Err(Error::Contract(format!("component ({},{}) not admitted in degree {n}", c.p, c.q)));
            }
            if c.values.len() != spec.cell_count(c.p, c.q) {
                return Err(Error::Contract("component has wrong length".into()));
            }
            t.components.insert((c.p, c.q), c);
        }
        Ok(t)
    }

    pub fn component(&self, p: usize, q: usize) -> Option<&Cochain> {
        self.components.get(&(p, q))
    }

    /// Values in the degree-`n` cell basis.
    pub fn flatten(&self) -> Vec<CircleValue> {
        self.components.values().flat_map(|c| c.values.iter().copied()).collect()
    }

    pub fn from_flat(spec: &ComplexSpec, n: usize, flat: &[CircleValue]) -> Self {
        assert_eq!(flat.len(), spec.cells(n), "flat vector has wrong length");
        let mut components = BTreeMap::new();
        let mut at = 0;
        for (p, q) in spec.bidegrees(n) {
            let c = spec.cell_count(p, q);
            components.insert((p, q), Cochain { p, q, values: flat[at..at + c].to_vec() });
            at += c;
        }
        TotalCochain { degree: n, components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &TotalCochain) -> TotalCochain {
        assert_eq!(self.degree, o.degree);
        TotalCochain {
            degree: self.degree,
            components: self.components.iter().map(|(k, c)| (*k, c.add(&o.components[k]))).collect(),
        }
    }

    pub fn scale(&self, s: i64) -> TotalCochain {
        TotalCochain { degree: self.degree, components: self.components.iter().map(|(k, c)| (*k, c.scale(s))).collect() }
    }

    /// Restricts to the bidegrees admitted by another shape over the same groups.
    pub fn restrict(&self, target: &ComplexSpec) -> TotalCochain {
        let mut t = TotalCochain::zero(target, self.degree);
        for (k, c) in &self.components {
            if t.components.contains_key(k) {
                t.components.insert(*k, c.clone());
            }
        }
        t
    }
}

/// `d x`: the `(p,q)` component is `δ_G x_{p−1,q} + (−1)^p δ_K x_{p,q−1}`.
pub fn total_differential(spec: &ComplexSpec, x: &TotalCochain) -> TotalCochain {
    let n = x.degree + 1;
    let mut out = TotalCochain::zero(spec, n);
    for ((p, q), comp) in out.components.iter_mut() {
        let (p, q) = (*p, *q);
        if p >= 1 {
            if let Some(src) = x.components.get(&(p - 1, q)) {
                *comp = comp.add(&delta_g(spec, src).unwrap());
            }
        }
        if q >= 1 {
            if let Some(src) = x.components.get(&(p, q - 1)) {
                let d = delta_k(spec, src).unwrap();
                *comp = comp.add(&if p % 2 == 0 { d } else { d.scale(-1) });
            }
        }
    }
    out
}

/// One entry of a cochain file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CochainEntry {
    pub tuple: [Vec<usize>; 2],
    pub value: CircleValue,
}

/// On-disk cochain: nonzero entries only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CochainFile {
    pub bidegree: [usize; 2],
    pub entries: Vec<CochainEntry>,
}

impl CochainFile {
    pub fn from_cochain(spec: &ComplexSpec, c: &Cochain) -> Self {
        let entries = c
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| {
                let (g, k) = spec.decode(c.p, c.q, i);
                CochainEntry { tuple: [g, k], value: *v }
            })
            .collect();
        CochainFile { bidegree: [c.p, c.q], entries }
    }

    pub fn to_cochain(&self, spec: &ComplexSpec) -> Result<Cochain> {
        let [p, q] = self.bidegree;
        let mut c = Cochain::zero(spec, p, q);
        for e in &self.entries {
            let [g, k] = &e.tuple;
            if g.len() != p || k.len() != q {
                return Err(Error::Usage(format!("tuple {:?} does not match bidegree ({p},{q})", e.tuple)));
            }
            if g.iter().any(|&x| x >= spec.g().order()) || k.iter().any(|&x| x >= spec.k().order()) {
                return Err(Error::Usage(format!("tuple {:?} has out-of-range elements", e.tuple)));
            }
            match spec.encode(g, k) {
                Some(i) => c.values[i] = e.value,
                None if e.value.is_zero() => {}
                None => return Err(Error::Contract(format!("nonzero value on degenerate tuple {:?}", e.tuple))),
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{conjugation_action, cyclic, inversion_action, trivial_action};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cell_counts() {
        let rho = inversion_action(&cyclic(4)).unwrap();
        let a = ComplexSpec::new(&rho, Shape::A);
        assert_eq!(a.cell_count(2, 1), 3);
        assert_eq!(a.cells(3), 39);
        let full = ComplexSpec::new(&rho, Shape::Full);
        assert_eq!(full.cells(0), 1);
        let b = ComplexSpec::new(&inversion_action(&cyclic(2)).unwrap(), Shape::B);
        assert_eq!(b.cell_count(1, 1), 1);
    }

    #[test]
    fn encode_decode_roundtrip() {
        let rho = conjugation_action(&cyclic(3));
        let spec = ComplexSpec::new(&rho, Shape::Full);
        for i in 0..spec.cell_count(2, 2) {
            let (g, k) = spec.decode(2, 2, i);
            assert_eq!(spec.encode(&g, &k), Some(i));
        }
        assert_eq!(spec.encode(&[0, 1], &[1]), None);
    }

    #[test]
    fn delta_examples() {
        let k = cyclic(3);
        let rho = inversion_action(&k).unwrap();
        let spec = ComplexSpec::new(&rho, Shape::Full);
        let f = Cochain::from_fn(&spec, 0, 1, |_, k| CircleValue::new(k[0] as i128, 3));
        let d = delta_g(&spec, &f).unwrap();
        assert_eq!(d.eval(&spec, &[1], &[1]), CircleValue::new(2, 3));
        let triv = ComplexSpec::new(&trivial_action(&cyclic(2), &k), Shape::Full);
        let f = Cochain::random(&triv, 0, 1, 7, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(delta_g(&triv, &f).unwrap().is_zero());
        let z2 = ComplexSpec::single_group(&cyclic(2));
        let f = Cochain::from_fn(&z2, 0, 1, |_, _| CircleValue::new(1, 2));
        assert_eq!(delta_k(&z2, &f).unwrap().values, vec![CircleValue::ZERO]);
    }

    #[test]
    fn shape_outside_is_an_error() {
        let spec = ComplexSpec::new(&conjugation_action(&cyclic(2)), Shape::A);
        let f = Cochain::zero(&spec, 0, 1);
        assert!(delta_k(&spec, &f).is_ok());
        let row = ComplexSpec::new(&conjugation_action(&cyclic(2)), Shape::RowStrip(1));
        assert!(delta_k(&row, &Cochain::zero(&row, 1, 1)).is_err());
    }

    #[test]
    fn boundary_square_zero_small() {
        let rho = inversion_action(&cyclic(3)).unwrap();
        let spec = ComplexSpec::new(&rho, Shape::A);
        let d3 = spec.boundary_matrix(3);
        let d4 = spec.boundary_matrix(4);
        assert!(d3.mul(&d4).is_zero());
        let z2 = ComplexSpec::single_group(&cyclic(2));
        assert!(z2.boundary_matrix(1).is_zero());
    }

    #[test]
    fn shape_parsing() {
        assert_eq!("atrunc:2".parse::<Shape>().unwrap(), Shape::ATrunc(2));
        assert_eq!("row:3".parse::<Shape>().unwrap(), Shape::RowStrip(3));
        assert!("atrunc:0".parse::<Shape>().is_err());
    }
}
