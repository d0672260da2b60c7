//! Twisted equivariant bundles over `K`, their β-twisted tensor product, fusion rings,
//! and the coquasi-bialgebra `ℂ^G # K`.
//!
//! Circle values become complex numbers through `e(c) = exp(2πi·c)`. Splitting is done in
//! floating point; every integer output is rounded and re-validated.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circle::CircleValue;
use crate::complexes::{delta_g, delta_k, total_differential, Cochain, ComplexSpec, Shape, TotalCochain};
use crate::error::{Error, Limits, Result};
use crate::groups::{orbits_and_stabilizers, FiniteGroup, GroupAction};
use crate::shuffle::dpr_cocycle;
use crate::structures::{MultiplicativeStructure, PseudomonoidStructure};

/// Tolerance for eigenvalue clustering and representation checks.
pub const SPLIT_TOL: f64 = 1e-9;
/// Maximum distance from an integer accepted when rounding structure constants.
pub const ROUND_TOL: f64 = 1e-6;

pub fn e(c: CircleValue) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * c.to_f64())
}

/// `(α, β, θ)` on the A complex of an action; θ is optional for plain multiplicative structures.
#[derive(Clone, Debug)]
pub struct Twist {
    pub action: GroupAction,
    spec: ComplexSpec,
    pub alpha: Cochain,
    pub beta: Cochain,
    pub theta: Option<Cochain>,
}

impl Twist {
    /// Checks `δ_Gα = 0` and `δ_Gβ + δ_Kα = 0`; with θ present, closedness of the triple.
    pub fn new(action: &GroupAction, alpha: Cochain, beta: Cochain, theta: Option<Cochain>) -> Result<Self> {
        let spec = ComplexSpec::new(action, Shape::A);
        if (alpha.p, alpha.q, beta.p, beta.q) != (2, 1, 1, 2)
            || alpha.values.len() != spec.cell_count(2, 1)
            || beta.values.len() != spec.cell_count(1, 2)
        {
            return Err(Error::Contract("α must sit at (2,1) and β at (1,2)".into()));
        }
        if !delta_g(&spec, &alpha)?.is_zero() {
            return Err(Error::Contract("δ_G α ≠ 0".into()));
        }
        if !delta_g(&spec, &beta)?.add(&delta_k(&spec, &alpha)?).is_zero() {
            return Err(Error::Contract("δ_G β + δ_K α ≠ 0".into()));
        }
        if let Some(t) = &theta {
            let total = TotalCochain::from_components(&spec, 3, vec![alpha.clone(), beta.clone(), t.clone()])?;
            if !total_differential(&spec, &total).is_zero() {
                return Err(Error::Contract("α ⊕ β ⊕ θ is not closed".into()));
            }
        }
        Ok(Twist { action: action.clone(), spec, alpha, beta, theta })
    }

    pub fn trivial(action: &GroupAction) -> Self {
        let spec = ComplexSpec::new(action, Shape::A);
        Twist {
            alpha: Cochain::zero(&spec, 2, 1),
            beta: Cochain::zero(&spec, 1, 2),
            theta: Some(Cochain::zero(&spec, 0, 3)),
            action: action.clone(),
            spec,
        }
    }

    pub fn from_multiplicative(action: &GroupAction, m: &MultiplicativeStructure) -> Result<Self> {
        Self::new(action, m.alpha.clone(), m.beta.clone(), None)
    }

    pub fn from_pseudomonoid(action: &GroupAction, m: &PseudomonoidStructure) -> Result<Self> {
        Self::new(action, m.alpha.clone(), m.beta.clone(), Some(m.theta.clone()))
    }

    /// The DPR triple of a 3-cocycle `w` on `G`, for `G` acting on itself by conjugation.
    pub fn dpr(action: &GroupAction, w: &Cochain) -> Result<Self> {
        let spec = ComplexSpec::new(action, Shape::A);
        let t = dpr_cocycle(&spec, w)?;
        let c = |p, q| t.component(p, q).cloned().unwrap();
        Self::new(action, c(2, 1), c(1, 2), Some(c(0, 3)))
    }

    /// Replaces θ without checking closedness, for building counterexamples.
    pub fn with_theta_unchecked(&self, theta: Cochain) -> Twist {
        Twist { theta: Some(theta), ..self.clone() }
    }

    pub fn spec(&self) -> &ComplexSpec {
        &self.spec
    }

    pub fn g(&self) -> &FiniteGroup {
        &self.action.group
    }

    pub fn k(&self) -> &FiniteGroup {
        &self.action.target
    }

    #[inline]
    pub fn alpha_at(&self, g: usize, h: usize, x: usize) -> CircleValue {
        self.alpha.eval(&self.spec, &[g, h], &[x])
    }

    #[inline]
    pub fn beta_at(&self, g: usize, x: usize, y: usize) -> CircleValue {
        self.beta.eval(&self.spec, &[g], &[x, y])
    }

    #[inline]
    pub fn theta_at(&self, x: usize, y: usize, z: usize) -> CircleValue {
        match &self.theta {
            Some(t) => t.eval(&self.spec, &[], &[x, y, z]),
            None => CircleValue::ZERO,
        }
    }
}

/// A graded vector space over `K` with an α-twisted `G`-action:
/// `blocks[g][k]` maps `H_k` to `H_{g·k}`.
#[derive(Clone, Debug)]
pub struct EquivariantBundle {
    pub grading: Vec<usize>,
    pub blocks: Vec<Vec<DMatrix<Complex64>>>,
}

impl EquivariantBundle {
    pub fn dim(&self) -> usize {
        self.grading.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.grading.len()).filter(|&k| self.grading[k] > 0).collect()
    }

    /// Largest deviation from `g·(h·z) = α(g,h||k)(gh·z)`, from identity acting trivially,
    /// and from the block shapes.
    pub fn twist_residual(&self, twist: &Twist) -> Result<f64> {
        let (g, rho) = (twist.g(), &twist.action);
        if self.grading.len() != twist.k().order() || self.blocks.len() != g.order() {
            return Err(Error::Contract("bundle does not match the action".into()));
        }
        for a in g.elements() {
            for k in 0..self.grading.len() {
                let m = &self.blocks[a][k];
                if m.shape() != (self.grading[rho.act(a, k)], self.grading[k]) {
                    return Err(Error::Contract(format!("block ({a},{k}) has the wrong shape")));
                }
            }
        }
        let mut worst: f64 = 0.0;
        for k in self.support() {
            let id = DMatrix::<Complex64>::identity(self.grading[k], self.grading[k]);
            worst = worst.max((&self.blocks[g.identity()][k] - id).norm());
            for b in g.elements() {
                let hk = rho.act(b, k);
                for a in g.elements() {
                    let lhs = &self.blocks[a][hk] * &self.blocks[b][k];
                    let rhs = &self.blocks[g.mul(a, b)][k] * e(twist.alpha_at(a, b, k));
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        Ok(worst)
    }

    /// `tr(blocks[g][k])` at a fixed point `g·k = k`.
    pub fn trace(&self, g: usize, k: usize) -> Complex64 {
        self.blocks[g][k].trace()
    }

    pub fn direct_sum(&self, other: &EquivariantBundle) -> EquivariantBundle {
        let grading: Vec<usize> = self.grading.iter().zip(&other.grading).map(|(a, b)| a + b).collect();
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(a, b)| {
                        let mut m = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
                        m.view_mut((0, 0), a.shape()).copy_from(a);
                        m.view_mut(a.shape(), b.shape()).copy_from(b);
                        m
                    })
                    .collect()
            })
            .collect();
        EquivariantBundle { grading, blocks }
    }
}

/// A projective representation `ρ(s)ρ(t) = e(c(s,t))ρ(st)`.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    pub matrices: Vec<DMatrix<Complex64>>,
}

impl ProjectiveRep {
    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn character(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>() / a.len() as f64
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let y = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&y + y.adjoint()) * Complex64::new(0.5, 0.0)
}

/// All `c`-projective irreducibles of `S`, split out of the twisted regular representation.
/// `c[s][t]` must be a normalized 2-cocycle.
pub fn projective_irreps(s: &FiniteGroup, c: &[Vec<CircleValue>], seed: u64, limits: &Limits) -> Result<Vec<ProjectiveRep>> {
    let n = s.order();
    if n > limits.max_irrep_order {
        return Err(Error::Resource(format!("stabilizer of order {n} exceeds the irrep ceiling {}", limits.max_irrep_order)));
    }
    for a in s.elements() {
        for b in s.elements() {
            for d in s.elements() {
                if c[b][d] - c[s.mul(a, b)][d] + c[a][s.mul(b, d)] - c[a][b] != CircleValue::ZERO {
                    return Err(Error::Contract("c is not a 2-cocycle".into()));
                }
            }
        }
    }
    let regular: Vec<DMatrix<Complex64>> = s
        .elements()
        .map(|a| {
            let mut m = DMatrix::zeros(n, n);
            for t in s.elements() {
                m[(s.mul(a, t), t)] = e(c[a][t]);
            }
            m
        })
        .collect();
    let mut last = String::new();
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let x = random_hermitian(n, &mut rng);
        let mut p = DMatrix::<Complex64>::zeros(n, n);
        for l in &regular {
            p += l * &x * l.adjoint();
        }
        p /= Complex64::new(n as f64, 0.0);
        let eig = p.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let scale = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match clusters.last_mut() {
                Some(cl) if (eig.eigenvalues[i] - eig.eigenvalues[*cl.last().unwrap()]).abs() < 1e-7 * scale => cl.push(i),
                _ => clusters.push(vec![i]),
            }
        }
        let mut found: Vec<ProjectiveRep> = Vec::new();
        let mut ok = true;
        for cl in clusters {
            let u = DMatrix::from_fn(n, cl.len(), |r, j| eig.eigenvectors[(r, cl[j])]);
            let mats: Vec<DMatrix<Complex64>> = regular.iter().map(|l| u.adjoint() * l * &u).collect();
            let invariant = regular.iter().zip(&mats).all(|(l, m)| (l * &u - &u * m).norm() < 1e-7);
            let rep = ProjectiveRep { matrices: mats };
            let chi = rep.character();
            if !invariant || (inner(&chi, &chi).re - 1.0).abs() > 1e-6 {
                ok = false;
                last = "eigenspace is not an irreducible subrepresentation".into();
                break;
            }
            if !found.iter().any(|f| inner(&f.character(), &chi).norm() > 0.5) {
                found.push(rep);
            }
        }
        if ok {
            let total: usize = found.iter().map(|r| r.dim() * r.dim()).sum();
            if total == n {
                return Ok(found);
            }
            last = format!("Σ d² = {total} ≠ {n}");
        }
    }
    Err(Error::Numerical(format!("projective splitting failed (seed {seed}): {last}")))
}

/// An irreducible object: induced from an `α_x`-projective irrep of the stabilizer of `x`.
#[derive(Clone, Debug)]
pub struct IrreducibleObject {
    pub orbit: usize,
    pub representative: usize,
    pub tag: usize,
    pub rep_dim: usize,
    pub orbit_size: usize,
    pub stabilizer_character: Vec<Complex64>,
    pub bundle: EquivariantBundle,
}

impl IrreducibleObject {
    pub fn dim(&self) -> usize {
        self.rep_dim * self.orbit_size
    }
}

fn character_key(chi: &[Complex64]) -> Vec<(i64, i64)> {
    chi.iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect()
}

/// Irreducibles of `Bun_G(K)` under the twist, ordered by orbit, descending dimension,
/// then stabilizer character.
pub fn irreducible_objects(twist: &Twist, seed: u64, limits: &Limits) -> Result<Vec<IrreducibleObject>> {
    let (g, k, rho) = (twist.g(), twist.k(), &twist.action);
    let mut out = Vec::new();
    for (oi, orb) in orbits_and_stabilizers(&rho.as_permutation_action()).into_iter().enumerate() {
        let x = orb.representative;
        let (stab, emb) = g.subgroup(&orb.stabilizer, format!("Stab({})", k.label(x)))?;
        let c: Vec<Vec<CircleValue>> =
            stab.elements().map(|a| stab.elements().map(|b| twist.alpha_at(emb[a], emb[b], x)).collect()).collect();
        let mut irreps = projective_irreps(&stab, &c, seed.wrapping_add(oi as u64 * 1000), limits)?;
        irreps.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| character_key(&b.character()).cmp(&character_key(&a.character()))));
        // coset representatives r with r·x = point, identity first
        let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
        reps.insert(x, g.identity());
        for a in g.elements() {
            reps.entry(rho.act(a, x)).or_insert(a);
        }
        let sub_index = |a: usize| emb.iter().position(|&s| s == a).expect("stabilizer element");
        for (tag, irr) in irreps.iter().enumerate() {
            let d = irr.dim();
            let mut grading = vec![0; k.order()];
            for &p in &orb.elements {
                grading[p] = d;
            }
            let blocks = g
                .elements()
                .map(|a| {
                    k.elements()
                        .map(|pt| {
                            let tgt = rho.act(a, pt);
                            if grading[pt] == 0 {
                                return DMatrix::zeros(grading[tgt], 0);
                            }
                            let (ri, rj) = (reps[&pt], reps[&tgt]);
                            let s = g.mul(g.inv(rj), g.mul(a, ri));
                            let phase = e(twist.alpha_at(a, ri, x) - twist.alpha_at(rj, s, x));
                            &irr.matrices[sub_index(s)] * phase
                        })
                        .collect()
                })
                .collect();
            out.push(IrreducibleObject {
                orbit: oi,
                representative: x,
                tag,
                rep_dim: d,
                orbit_size: orb.elements.len(),
                stabilizer_character: irr.character(),
                bundle: EquivariantBundle { grading, blocks },
            });
        }
    }
    Ok(out)
}

/// `V ⊗ W` graded by products, with `σ` acting by `β[σ||x|y] (σ⊳v_x ⊗ σ⊳w_y)`.
pub fn tensor_object(v: &EquivariantBundle, w: &EquivariantBundle, twist: &Twist) -> Result<EquivariantBundle> {
    let (g, k, rho) = (twist.g(), twist.k(), &twist.action);
    if v.grading.len() != k.order() || w.grading.len() != k.order() {
        return Err(Error::Contract("bundles over different groups".into()));
    }
    // summands[k] = [(x, y, offset)]
    let mut summands: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); k.order()];
    let mut grading = vec![0; k.order()];
    for x in v.support() {
        for y in w.support() {
            let z = k.mul(x, y);
            summands[z].push((x, y, grading[z]));
            grading[z] += v.grading[x] * w.grading[y];
        }
    }
    let offset = |x: usize, y: usize| summands[k.mul(x, y)].iter().find(|s| s.0 == x && s.1 == y).unwrap().2;
    let blocks = g
        .elements()
        .map(|a| {
            k.elements()
                .map(|z| {
                    let tz = rho.act(a, z);
                    let mut m = DMatrix::zeros(grading[tz], grading[z]);
                    for &(x, y, off) in &summands[z] {
                        let (tx, ty) = (rho.act(a, x), rho.act(a, y));
                        let block = v.blocks[a][x].kronecker(&w.blocks[a][y]) * e(twist.beta_at(a, x, y));
                        m.view_mut((offset(tx, ty), off), block.shape()).copy_from(&block);
                    }
                    m
                })
                .collect()
        })
        .collect();
    Ok(EquivariantBundle { grading, blocks })
}

fn round_checked(z: Complex64, what: &str) -> Result<(u64, f64)> {
    let r = z.re.round();
    let res = (z - Complex64::new(r, 0.0)).norm();
    if res > ROUND_TOL || r < 0.0 {
        return Err(Error::Numerical(format!("{what} = {z} is not a nonnegative integer")));
    }
    Ok((r as u64, res))
}

fn hom_trace(v: &EquivariantBundle, w: &EquivariantBundle, twist: &Twist) -> Complex64 {
    let (g, rho) = (twist.g(), &twist.action);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in g.elements() {
        for x in v.support() {
            if rho.act(a, x) == x && w.grading[x] > 0 {
                let inv = v.blocks[a][x].clone().try_inverse().expect("bundle blocks are invertible");
                acc += w.trace(a, x) * inv.trace();
            }
        }
    }
    acc / g.order() as f64
}

/// `dim Hom(V, W)`: the averaged trace of `f ↦ (g⊳)∘f∘(g⊳)⁻¹` on grading-preserving maps.
pub fn hom_dimension(v: &EquivariantBundle, w: &EquivariantBundle, twist: &Twist) -> Result<u64> {
    Ok(round_checked(hom_trace(v, w, twist), "hom dimension")?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionLabel {
    pub orbit_representative: String,
    pub tag: usize,
    pub dim: u64,
}

/// A based ring with structure constants `n[i][j][k] = N_{ij}^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionRing {
    pub rank: usize,
    pub labels: Vec<FusionLabel>,
    pub n: Vec<Vec<Vec<u64>>>,
    pub unit: usize,
    pub dims: Vec<u64>,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionRingReport {
    pub rank: usize,
    pub unit: usize,
    pub labels: Vec<FusionLabel>,
    /// `(i, j, k, N_{ij}^k)` for the nonzero constants.
    pub constants: Vec<(usize, usize, usize, u64)>,
    pub max_residual: f64,
    pub invertible_orders: Vec<usize>,
}

impl FusionRing {
    pub fn new(labels: Vec<FusionLabel>, n: Vec<Vec<Vec<u64>>>, unit: usize) -> Result<Self> {
        let rank = labels.len();
        if n.len() != rank || n.iter().any(|r| r.len() != rank || r.iter().any(|c| c.len() != rank)) || unit >= rank {
            return Err(Error::Contract("structure constants have the wrong shape".into()));
        }
        let dims = labels.iter().map(|l| l.dim).collect();
        let r = FusionRing { rank, labels, n, unit, dims, max_residual: 0.0 };
        r.check_invariants()?;
        Ok(r)
    }

    /// The group ring `Z[G]` with its group basis.
    pub fn group_ring(g: &FiniteGroup) -> Self {
        let r = g.order();
        let mut n = vec![vec![vec![0; r]; r]; r];
        for a in g.elements() {
            for b in g.elements() {
                n[a][b][g.mul(a, b)] = 1;
            }
        }
        let labels = g.elements().map(|a| FusionLabel { orbit_representative: g.label(a).to_string(), tag: 0, dim: 1 }).collect();
        FusionRing::new(labels, n, g.identity()).unwrap()
    }

    /// Unit, dimension and associativity identities, exactly.
    pub fn check_invariants(&self) -> Result<()> {
        let r = self.rank;
        for j in 0..r {
            for k in 0..r {
                let want = (j == k) as u64;
                if self.n[self.unit][j][k] != want || self.n[j][self.unit][k] != want {
                    return Err(Error::Verification(format!("unit axiom fails at ({j},{k})")));
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                let s: u64 = (0..r).map(|k| self.n[i][j][k] * self.dims[k]).sum();
                if s != self.dims[i] * self.dims[j] {
                    return Err(Error::Verification(format!("dimension identity fails at ({i},{j})")));
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let a: u64 = (0..r).map(|m| self.n[i][j][m] * self.n[m][k][l]).sum();
                        let b: u64 = (0..r).map(|m| self.n[j][k][m] * self.n[i][m][l]).sum();
                        if a != b {
                            return Err(Error::Verification(format!("associativity fails at ({i},{j},{k};{l})")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `(d_k, N_{kk}^k, Σ_j N_{kj}^k)`.
    pub fn fingerprint(&self, k: usize) -> (u64, u64, u64) {
        (self.dims[k], self.n[k][k][k], (0..self.rank).map(|j| self.n[k][j][k]).sum())
    }

    /// Labels `i` with some `j` such that `i ⊗ j = 1`.
    pub fn invertibles(&self) -> Vec<usize> {
        (0..self.rank)
            .filter(|&i| self.dims[i] == 1 && (0..self.rank).any(|j| self.n[i][j][self.unit] == 1))
            .collect()
    }

    /// Orders of the invertible labels under fusion, sorted.
    pub fn invertible_orders(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .invertibles()
            .into_iter()
            .map(|i| {
                let (mut cur, mut ord) = (i, 1);
                while cur != self.unit {
                    cur = (0..self.rank).find(|&k| self.n[cur][i][k] == 1).unwrap();
                    ord += 1;
                }
                ord
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn report(&self) -> FusionRingReport {
        let mut constants = Vec::new();
        for i in 0..self.rank {
            for j in 0..self.rank {
                for k in 0..self.rank {
                    if self.n[i][j][k] != 0 {
                        constants.push((i, j, k, self.n[i][j][k]));
                    }
                }
            }
        }
        FusionRingReport {
            rank: self.rank,
            unit: self.unit,
            labels: self.labels.clone(),
            constants,
            max_residual: self.max_residual,
            invertible_orders: self.invertible_orders(),
        }
    }
}

/// `Groth(Bun_G(K))` under the twist: `N_{ij}^k = dim Hom(X_k, X_i ⊗ X_j)`.
pub fn fusion_ring(twist: &Twist, seed: u64, limits: &Limits) -> Result<FusionRing> {
    let objs = irreducible_objects(twist, seed, limits)?;
    let r = objs.len();
    let k = twist.k();
    let unit = objs
        .iter()
        .position(|o| o.representative == k.identity() && o.dim() == 1 && o.stabilizer_character.iter().all(|z| (z - 1.0).norm() < 1e-6))
        .ok_or_else(|| Error::Verification("no unit object".into()))?;
    let mut n = vec![vec![vec![0; r]; r]; r];
    let mut worst: f64 = 0.0;
    for i in 0..r {
        for j in 0..r {
            let t = tensor_object(&objs[i].bundle, &objs[j].bundle, twist)?;
            for (l, x) in objs.iter().enumerate() {
                let (v, res) = round_checked(hom_trace(&x.bundle, &t, twist), "fusion coefficient")?;
                n[i][j][l] = v;
                worst = worst.max(res);
            }
        }
    }
    let labels = objs
        .iter()
        .map(|o| FusionLabel { orbit_representative: k.label(o.representative).to_string(), tag: o.tag, dim: o.dim() as u64 })
        .collect();
    let mut ring = FusionRing::new(labels, n, unit)?;
    ring.max_residual = worst;
    Ok(ring)
}

/// A permutation `π` with `π(unit) = unit`, `d_{π i} = d_i` and `N_{ij}^k = N'_{π i π j}^{π k}`.
pub fn based_ring_isomorphic(a: &FusionRing, b: &FusionRing) -> Option<Vec<usize>> {
    if a.rank != b.rank {
        return None;
    }
    let r = a.rank;
    let fa: Vec<_> = (0..r).map(|i| a.fingerprint(i)).collect();
    let fb: Vec<_> = (0..r).map(|i| b.fingerprint(i)).collect();
    let (mut sa, mut sb) = (fa.clone(), fb.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb || fa[a.unit] != fb[b.unit] {
        return None;
    }
    let cands: Vec<Vec<usize>> = (0..r).map(|i| (0..r).filter(|&j| fa[i] == fb[j]).collect()).collect();
    let mut order: Vec<usize> = (0..r).filter(|&i| i != a.unit).collect();
    order.sort_by_key(|&i| (cands[i].len(), i));
    order.insert(0, a.unit);
    let mut perm = vec![usize::MAX; r];
    let mut used = vec![false; r];
    fn consistent(a: &FusionRing, b: &FusionRing, perm: &[usize], assigned: &[usize], i: usize) -> bool {
        for &x in assigned {
            for &y in assigned {
                let involves = x == i || y == i;
                for &z in assigned {
                    if (involves || z == i) && a.n[x][y][z] != b.n[perm[x]][perm[y]][perm[z]] {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn search(
        a: &FusionRing,
        b: &FusionRing,
        order: &[usize],
        cands: &[Vec<usize>],
        pos: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let i = order[pos];
        let options: Vec<usize> = if pos == 0 { vec![b.unit] } else { cands[i].clone() };
        for j in options {
            if used[j] {
                continue;
            }
            perm[i] = j;
            used[j] = true;
            if consistent(a, b, perm, &order[..=pos], i) && search(a, b, order, cands, pos + 1, perm, used) {
                return true;
            }
            used[j] = false;
            perm[i] = usize::MAX;
        }
        false
    }
    if search(a, b, &order, &cands, 0, &mut perm, &mut used) {
        Some(perm)
    } else {
        None
    }
}

/// `ℂ^G # K` with basis `δ_σ#x` at index `σ·|K| + x`.
#[derive(Clone, Debug)]
pub struct CoquasiBialgebra {
    pub g_order: usize,
    pub k_order: usize,
    pub labels: Vec<String>,
    /// `product[i][j] = Some((k, c))` when `b_i b_j = c·b_k`.
    pub product: Vec<Vec<Option<(usize, Complex64)>>>,
    /// `Δ(b_i) = Σ c·b_j ⊗ b_k`.
    pub coproduct: Vec<Vec<(usize, usize, Complex64)>>,
    /// `φ(b_i, b_j, b_k)` at `associator[(i·n + j)·n + k]`.
    pub associator: Vec<Complex64>,
    pub counit: Vec<f64>,
    /// Coordinates of the unit `Σ_σ δ_σ#e`.
    pub unit: Vec<f64>,
}

/// How θ enters the associator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AssociatorOrientation {
    Theta,
    ThetaInverse,
}

impl CoquasiBialgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    fn phi(&self, i: usize, j: usize, k: usize) -> Complex64 {
        let n = self.dim();
        self.associator[(i * n + j) * n + k]
    }

    #[inline]
    fn g_label(&self, i: usize) -> usize {
        i / self.k_order
    }

    fn is_e(&self, i: usize) -> bool {
        self.g_label(i) == 0
    }
}

/// Builds `ℂ^G # K` from a closed triple. Requires the identity of `G` at index 0.
pub fn coquasi_bialgebra(twist: &Twist, orientation: AssociatorOrientation) -> Result<CoquasiBialgebra> {
    let (g, k, rho) = (twist.g(), twist.k(), &twist.action);
    if g.identity() != 0 {
        return Err(Error::Contract("the identity of G must have index 0".into()));
    }
    let (ng, nk) = (g.order(), k.order());
    let n = ng * nk;
    let idx = |s: usize, x: usize| s * nk + x;
    let labels = (0..n).map(|i| format!("δ_{}#{}", g.label(i / nk), k.label(i % nk))).collect();
    let mut product = vec![vec![None; n]; n];
    for s in g.elements() {
        for x in k.elements() {
            for y in k.elements() {
                product[idx(s, x)][idx(s, y)] = Some((idx(s, k.mul(x, y)), e(twist.beta_at(s, x, y))));
            }
        }
    }
    let coproduct = (0..n)
        .map(|i| {
            let (s, x) = (i / nk, i % nk);
            g.elements()
                .map(|a| {
                    let b = g.mul(g.inv(a), s);
                    (idx(a, rho.act(b, x)), idx(b, x), e(twist.alpha_at(a, b, x)))
                })
                .collect()
        })
        .collect();
    let mut associator = vec![Complex64::new(0.0, 0.0); n * n * n];
    for x in k.elements() {
        for y in k.elements() {
            for z in k.elements() {
                let t = twist.theta_at(x, y, z);
                let t = if orientation == AssociatorOrientation::Theta { t } else { -t };
                associator[(idx(0, x) * n + idx(0, y)) * n + idx(0, z)] = e(t);
            }
        }
    }
    let counit = (0..n).map(|i| if i / nk == 0 { 1.0 } else { 0.0 }).collect();
    let unit = (0..n).map(|i| if i % nk == k.identity() { 1.0 } else { 0.0 }).collect();
    Ok(CoquasiBialgebra { g_order: ng, k_order: nk, labels, product, coproduct, associator, counit, unit })
}

/// Largest residual per axiom, plus the first offending basis tuple if any exceeds the tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct CoquasiReport {
    pub dimension: usize,
    pub coassociativity: f64,
    pub counit: f64,
    pub multiplicative_coproduct: f64,
    pub unit: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    /// Associativity of the product; zero exactly in the θ-trivial case.
    pub associativity: f64,
    pub tolerance: f64,
    pub counterexample: Option<(String, Vec<usize>)>,
}

impl CoquasiReport {
    pub fn passes(&self) -> bool {
        self.counterexample.is_none()
    }
}

type Vector = BTreeMap<usize, Complex64>;
type Tensor2 = BTreeMap<(usize, usize), Complex64>;
type Tensor3 = BTreeMap<(usize, usize, usize), Complex64>;

fn add_to<K: Ord>(m: &mut BTreeMap<K, Complex64>, k: K, c: Complex64) {
    *m.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
}

fn diff_norm<K: Ord + Clone>(a: &BTreeMap<K, Complex64>, b: &BTreeMap<K, Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, v) in a {
        worst = worst.max((v - b.get(k).copied().unwrap_or_default()).norm());
    }
    for (k, v) in b {
        if !a.contains_key(k) {
            worst = worst.max(v.norm());
        }
    }
    worst
}

/// Exhaustive check of the coalgebra, unit, (q1)–(q3) and multiplicativity axioms.
pub fn verify_coquasi_axioms(h: &CoquasiBialgebra, tolerance: f64) -> CoquasiReport {
    let n = h.dim();
    let mut rep = CoquasiReport {
        dimension: n,
        coassociativity: 0.0,
        counit: 0.0,
        multiplicative_coproduct: 0.0,
        unit: 0.0,
        q1: 0.0,
        q2: 0.0,
        q3: 0.0,
        associativity: 0.0,
        tolerance,
        counterexample: None,
    };
    let note = |rep: &mut CoquasiReport, axiom: &str, r: f64, tuple: Vec<usize>| {
        let slot = match axiom {
            "coassociativity" => &mut rep.coassociativity,
            "counit" => &mut rep.counit,
            "multiplicative_coproduct" => &mut rep.multiplicative_coproduct,
            "unit" => &mut rep.unit,
            "q1" => &mut rep.q1,
            "q2" => &mut rep.q2,
            "q3" => &mut rep.q3,
            _ => &mut rep.associativity,
        };
        *slot = slot.max(r);
        if r > tolerance && rep.counterexample.is_none() && axiom != "associativity" {
            rep.counterexample = Some((axiom.to_string(), tuple));
        }
    };
    let mul = |i: usize, j: usize| h.product[i][j];
    let delta2 = |i: usize| -> Tensor3 {
        let mut t = Tensor3::new();
        for &(a, b, c) in &h.coproduct[i] {
            for &(a1, a2, c2) in &h.coproduct[a] {
                add_to(&mut t, (a1, a2, b), c * c2);
            }
        }
        t
    };
    for i in 0..n {
        // coassociativity
        let left = delta2(i);
        let mut right = Tensor3::new();
        for &(a, b, c) in &h.coproduct[i] {
            for &(b1, b2, c2) in &h.coproduct[b] {
                add_to(&mut right, (a, b1, b2), c * c2);
            }
        }
        note(&mut rep, "coassociativity", diff_norm(&left, &right), vec![i]);
        // counit
        let mut l = Vector::new();
        let mut r = Vector::new();
        for &(a, b, c) in &h.coproduct[i] {
            add_to(&mut l, b, c * h.counit[a]);
            add_to(&mut r, a, c * h.counit[b]);
        }
        let id: Vector = [(i, Complex64::new(1.0, 0.0))].into_iter().collect();
        note(&mut rep, "counit", diff_norm(&l, &id).max(diff_norm(&r, &id)), vec![i]);
        // unit
        let mut ul = Vector::new();
        let mut ur = Vector::new();
        for u in 0..n {
            if h.unit[u] != 0.0 {
                if let Some((k, c)) = mul(u, i) {
                    add_to(&mut ul, k, c * h.unit[u]);
                }
                if let Some((k, c)) = mul(i, u) {
                    add_to(&mut ur, k, c * h.unit[u]);
                }
            }
        }
        note(&mut rep, "unit", diff_norm(&ul, &id).max(diff_norm(&ur, &id)), vec![i]);
    }
    // Δ(1) = 1 ⊗ 1
    {
        let mut d = Tensor2::new();
        let mut want = Tensor2::new();
        for u in 0..n {
            if h.unit[u] != 0.0 {
                for &(a, b, c) in &h.coproduct[u] {
                    add_to(&mut d, (a, b), c);
                }
                for v in 0..n {
                    if h.unit[v] != 0.0 {
                        add_to(&mut want, (u, v), Complex64::new(1.0, 0.0));
                    }
                }
            }
        }
        note(&mut rep, "unit", diff_norm(&d, &want), vec![]);
    }
    for i in 0..n {
        for j in 0..n {
            // Δ(b_i b_j) = Δ(b_i)Δ(b_j), ε(b_i b_j) = ε(b_i)ε(b_j)
            let mut lhs = Tensor2::new();
            let mut eps = 0.0;
            if let Some((k, c)) = mul(i, j) {
                for &(a, b, c2) in &h.coproduct[k] {
                    add_to(&mut lhs, (a, b), c * c2);
                }
                eps = (c * h.counit[k]).norm();
            }
            let mut rhs = Tensor2::new();
            for &(a1, b1, c1) in &h.coproduct[i] {
                for &(a2, b2, c2) in &h.coproduct[j] {
                    if let (Some((a, ca)), Some((b, cb))) = (mul(a1, a2), mul(b1, b2)) {
                        add_to(&mut rhs, (a, b), c1 * c2 * ca * cb);
                    }
                }
            }
            let r = diff_norm(&lhs, &rhs).max((eps - h.counit[i] * h.counit[j]).abs());
            note(&mut rep, "multiplicative_coproduct", r, vec![i, j]);
            // (q1): φ(1,a,b) = φ(a,1,b) = φ(a,b,1) = ε(a)ε(b)
            let mut worst: f64 = 0.0;
            let want = h.counit[i] * h.counit[j];
            let mut s = [Complex64::new(0.0, 0.0); 3];
            for u in 0..n {
                if h.unit[u] != 0.0 {
                    s[0] += h.phi(u, i, j) * h.unit[u];
                    s[1] += h.phi(i, u, j) * h.unit[u];
                    s[2] += h.phi(i, j, u) * h.unit[u];
                }
            }
            for v in s {
                worst = worst.max((v - want).norm());
            }
            note(&mut rep, "q1", worst, vec![i, j]);
        }
    }
    // (q2): a₁(b₁c₁) φ(a₂,b₂,c₂) = φ(a₁,b₁,c₁) (a₂b₂)c₂, and plain associativity
    for i in 0..n {
        for j in 0..n {
            if h.g_label(i) != h.g_label(j) {
                continue;
            }
            for k in 0..n {
                if h.g_label(j) != h.g_label(k) {
                    continue;
                }
                let mut lhs = Vector::new();
                let mut rhs = Vector::new();
                for &(a1, a2, ca) in &h.coproduct[i] {
                    for &(b1, b2, cb) in &h.coproduct[j] {
                        for &(c1, c2, cc) in &h.coproduct[k] {
                            let coef = ca * cb * cc;
                            let p2 = h.phi(a2, b2, c2);
                            if p2.norm() > 0.0 {
                                if let Some((bc, x)) = mul(b1, c1) {
                                    if let Some((r, y)) = mul(a1, bc) {
                                        add_to(&mut lhs, r, coef * x * y * p2);
                                    }
                                }
                            }
                            let p1 = h.phi(a1, b1, c1);
                            if p1.norm() > 0.0 {
                                if let Some((ab, x)) = mul(a2, b2) {
                                    if let Some((r, y)) = mul(ab, c2) {
                                        add_to(&mut rhs, r, coef * x * y * p1);
                                    }
                                }
                            }
                        }
                    }
                }
                note(&mut rep, "q2", diff_norm(&lhs, &rhs), vec![i, j, k]);
                let assoc_l = mul(i, j).and_then(|(ij, x)| mul(ij, k).map(|(r, y)| (r, x * y)));
                let assoc_r = mul(j, k).and_then(|(jk, x)| mul(i, jk).map(|(r, y)| (r, x * y)));
                let r = match (assoc_l, assoc_r) {
                    (Some((r1, c1)), Some((r2, c2))) if r1 == r2 => (c1 - c2).norm(),
                    (None, None) => 0.0,
                    _ => 2.0,
                };
                note(&mut rep, "associativity", r, vec![i, j, k]);
            }
        }
    }
    // (q3): φ(h₁,g₁,f₁e₁) φ(h₂g₂,f₂,e₂) = φ(g₁,f₁,e₁) φ(h₁,g₂f₂,e₂) φ(h₂,g₃,f₃)
    let d2: Vec<Tensor3> = (0..n).map(delta2).collect();
    for hi in 0..n {
        for gi in 0..n {
            for fi in 0..n {
                for ei in 0..n {
                    let mut lhs = Complex64::new(0.0, 0.0);
                    for &(h1, h2, ch) in &h.coproduct[hi] {
                        if !h.is_e(h1) {
                            continue;
                        }
                        for &(g1, g2, cg) in &h.coproduct[gi] {
                            if !h.is_e(g1) {
                                continue;
                            }
                            let Some((hg, chg)) = mul(h2, g2) else { continue };
                            for &(f1, f2, cf) in &h.coproduct[fi] {
                                if !h.is_e(f1) {
                                    continue;
                                }
                                for &(e1, e2, ce) in &h.coproduct[ei] {
                                    let Some((fe, cfe)) = mul(f1, e1) else { continue };
                                    let p = h.phi(h1, g1, fe);
                                    if p.norm() == 0.0 {
                                        continue;
                                    }
                                    lhs += ch * cg * cf * ce * cfe * chg * p * h.phi(hg, f2, e2);
                                }
                            }
                        }
                    }
                    let mut rhs = Complex64::new(0.0, 0.0);
                    for (&(g1, g2, g3), &cg) in &d2[gi] {
                        if !h.is_e(g1) || !h.is_e(g3) {
                            continue;
                        }
                        for (&(f1, f2, f3), &cf) in &d2[fi] {
                            if !h.is_e(f1) || !h.is_e(f3) {
                                continue;
                            }
                            let Some((gf, cgf)) = mul(g2, f2) else { continue };
                            for &(e1, e2, ce) in &h.coproduct[ei] {
                                let p1 = h.phi(g1, f1, e1);
                                if p1.norm() == 0.0 {
                                    continue;
                                }
                                for &(h1, h2, ch) in &h.coproduct[hi] {
                                    let p2 = h.phi(h1, gf, e2);
                                    let p3 = h.phi(h2, g3, f3);
                                    rhs += ch * cg * cf * ce * cgf * p1 * p2 * p3;
                                }
                            }
                        }
                    }
                    note(&mut rep, "q3", (lhs - rhs).norm(), vec![hi, gi, fi, ei]);
                }
            }
        }
    }
    rep
}
