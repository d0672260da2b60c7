//! Pseudomonoid classes, multiplicative structures `MS_G(K)`, the lifting obstructions
//! and the comparison map `φ: H³(Tot A) → MS_G(K)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian::{group_order, FinHom, Subquotient};
use crate::circle::CircleValue;
use crate::cohomology::{
    class_of, invariant_cohomology, representatives_of, t_cohomology, t_cohomology_of, AbelianGroupPresentation,
    CohomologyClass, InvariantComplex, RowCohomology,
};
use crate::complexes::{delta_g, delta_k, total_differential, Cochain, ComplexSpec, Shape, TotalCochain};
use crate::error::{Error, Limits, Result};
use crate::exactalg::{snf_dense, IntMatrix};
use crate::groups::{equivariant_automorphisms, GroupAction, GroupHom};
use crate::shuffle::dpr_cocycle;

/// `(α, β)` with `δ_Gα = 0`, `δ_Gβ + δ_Kα = 0` and `[δ_Kβ] = 0`.
#[derive(Clone, Debug)]
pub struct MultiplicativeStructure {
    pub alpha: Cochain,
    pub beta: Cochain,
}

impl MultiplicativeStructure {
    pub fn new(action: &GroupAction, alpha: Cochain, beta: Cochain, limits: &Limits) -> Result<Self> {
        let a = ComplexSpec::new(action, Shape::A);
        if (alpha.p, alpha.q, beta.p, beta.q) != (2, 1, 1, 2) {
            return Err(Error::Contract("α must sit at (2,1) and β at (1,2)".into()));
        }
        if !delta_g(&a, &alpha)?.is_zero() {
            return Err(Error::Contract("δ_G α ≠ 0".into()));
        }
        if !delta_g(&a, &beta)?.add(&delta_k(&a, &alpha)?).is_zero() {
            return Err(Error::Contract("δ_G β + δ_K α ≠ 0".into()));
        }
        let row = RowCohomology::new(action, 3, 1, limits)?;
        if row.class_of(&delta_k(&a, &beta)?)?.iter().any(|&c| c != 0) {
            return Err(Error::Contract("[δ_K β] ≠ 0".into()));
        }
        Ok(MultiplicativeStructure { alpha, beta })
    }
}

/// `α ⊕ β ⊕ θ` closed in `Tot(A)`.
#[derive(Clone, Debug)]
pub struct PseudomonoidStructure {
    pub alpha: Cochain,
    pub beta: Cochain,
    pub theta: Cochain,
}

impl PseudomonoidStructure {
    pub fn new(action: &GroupAction, alpha: Cochain, beta: Cochain, theta: Cochain) -> Result<Self> {
        let a = ComplexSpec::new(action, Shape::A);
        let t = TotalCochain::from_components(&a, 3, vec![alpha.clone(), beta.clone(), theta.clone()])?;
        if !total_differential(&a, &t).is_zero() {
            return Err(Error::Contract("α ⊕ β ⊕ θ is not closed".into()));
        }
        Ok(PseudomonoidStructure { alpha, beta, theta })
    }

    pub fn from_total(action: &GroupAction, t: &TotalCochain) -> Result<Self> {
        let c = |p, q| t.component(p, q).cloned().ok_or_else(|| Error::Contract("missing component".into()));
        Self::new(action, c(2, 1)?, c(1, 2)?, c(0, 3)?)
    }

    pub fn total(&self, action: &GroupAction) -> TotalCochain {
        let a = ComplexSpec::new(action, Shape::A);
        TotalCochain::from_components(&a, 3, vec![self.alpha.clone(), self.beta.clone(), self.theta.clone()]).unwrap()
    }
}

/// `H³(Tot A)` with representatives.
pub fn pseudomonoid_classes(action: &GroupAction, limits: &Limits) -> Result<AbelianGroupPresentation> {
    t_cohomology(&ComplexSpec::new(action, Shape::A), 3, limits)
}

/// Integer matrix of `δ_G: C^{p,q} → C^{p+1,q}`.
pub fn delta_g_matrix(spec: &ComplexSpec, p: usize, q: usize) -> IntMatrix {
    let mut t = Vec::new();
    for r in 0..spec.cell_count(p + 1, q) {
        let (g, k) = spec.decode(p + 1, q, r);
        spec.g_faces(&g, &k, |a, b, s| {
            if let Some(c) = spec.encode(a, b) {
                t.push((r, c, s));
            }
        });
    }
    IntMatrix::from_triplets(spec.cell_count(p + 1, q), spec.cell_count(p, q), t)
}

/// Some `x` with `M·x = c` over `Q/Z`, or `None`.
pub fn solve_circle(m: &IntMatrix, c: &[CircleValue]) -> Result<Option<Vec<CircleValue>>> {
    if c.len() != m.rows() {
        return Err(Error::Contract("right-hand side has wrong length".into()));
    }
    let cols = m.cols();
    if c.iter().all(|v| v.is_zero()) {
        return Ok(Some(vec![CircleValue::ZERO; cols]));
    }
    let den = c.iter().fold(1u64, |a, v| a.lcm(&v.den()));
    let bd = BigInt::from(den);
    let num: Vec<BigInt> = c.iter().map(|v| BigInt::from(v.num() * (den / v.den()))).collect();
    let s = snf_dense(m.to_dense(), cols, true, true);
    let l = s.l.unwrap();
    let r = s.r.unwrap();
    let lc: Vec<BigInt> =
        l.iter().map(|row| row.iter().zip(&num).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(&bd)).collect();
    let scale = s.diag.iter().filter(|d| !d.is_zero()).fold(BigInt::from(1), |a, d| a.lcm(d));
    let big_den = &bd * &scale;
    let mut u = vec![BigInt::zero(); cols];
    for (i, v) in lc.iter().enumerate() {
        match s.diag.get(i) {
            Some(d) if !d.is_zero() => u[i] = v * (&scale / d),
            _ => {
                if !v.is_zero() {
                    return Ok(None);
                }
            }
        }
    }
    let den_i = big_den.to_i128().ok_or_else(|| Error::Numerical("denominator overflow".into()))?;
    let x = (0..cols)
        .map(|i| {
            let v: BigInt = (0..cols).map(|j| &r[i][j] * &u[j]).sum();
            CircleValue::new(v.mod_floor(&big_den).to_i128().unwrap(), den_i)
        })
        .collect();
    Ok(Some(x))
}

/// `β` with `δ_Gβ = −δ_Kα`, when `d₁[α] = 0`.
pub fn lift_alpha(action: &GroupAction, alpha: &Cochain) -> Result<Option<Cochain>> {
    let a = ComplexSpec::new(action, Shape::A);
    if !delta_g(&a, alpha)?.is_zero() {
        return Err(Error::Contract("α is not δ_G-closed".into()));
    }
    let rhs: Vec<CircleValue> = delta_k(&a, alpha)?.values.iter().map(|v| -*v).collect();
    Ok(solve_circle(&delta_g_matrix(&a, 1, 2), &rhs)?.map(|values| Cochain { p: 1, q: 2, values }))
}

/// `θ` with `δ_Gθ = δ_Kβ`, when `d₂[α] = 0`.
pub fn lift_beta(action: &GroupAction, alpha: &Cochain, beta: &Cochain) -> Result<Option<Cochain>> {
    let a = ComplexSpec::new(action, Shape::A);
    if !delta_g(&a, beta)?.add(&delta_k(&a, alpha)?).is_zero() {
        return Err(Error::Contract("(α, β) does not satisfy δ_Gβ + δ_Kα = 0".into()));
    }
    let rhs = delta_k(&a, beta)?.values;
    Ok(solve_circle(&delta_g_matrix(&a, 0, 3), &rhs)?.map(|values| Cochain { p: 0, q: 3, values }))
}

/// `d₃[α] = [δ_Kθ]` in `H⁴` of the G-invariant K-cochains.
pub fn obstruction_d3(
    action: &GroupAction,
    alpha: &Cochain,
    beta: &Cochain,
    theta: &Cochain,
    limits: &Limits,
) -> Result<CohomologyClass> {
    let a = ComplexSpec::new(action, Shape::A);
    let t = TotalCochain::from_components(&a, 3, vec![alpha.clone(), beta.clone(), theta.clone()])?;
    let d = total_differential(&a, &t);
    if d.components.iter().any(|(&(p, _), c)| p > 0 && !c.is_zero()) {
        return Err(Error::Contract("(α, β, θ) does not close away from the K-row".into()));
    }
    let inv = InvariantComplex::new(action);
    let pres = invariant_cohomology(action, 4, limits)?;
    let dk = delta_k(&a, theta)?;
    pres.class_of_values(&inv.orbit_values(&dk)?)
}

/// `MS_G(K) ⊆ H³(Tot A_{≤2})`, the kernel of `[α⊕β] ↦ [−δ_Kβ] ∈ H¹_G(K³)`.
#[derive(Clone, Debug)]
pub struct MsPresentation {
    /// `H³(Tot A_{≤2})`.
    pub ambient: AbelianGroupPresentation,
    /// The connecting map into the row-3 cohomology.
    pub obstruction: FinHom,
    pub subgroup: Subquotient,
    pub truncated: ComplexSpec,
}

impl MsPresentation {
    pub fn invariant_factors(&self) -> &[u64] {
        &self.subgroup.invariant_factors
    }

    pub fn order(&self) -> u128 {
        self.subgroup.order()
    }

    /// Representative `(α, β)` for each MS generator.
    pub fn representatives(&self) -> Vec<TotalCochain> {
        self.subgroup
            .generators
            .iter()
            .map(|coords| {
                TotalCochain::from_flat(&self.truncated, 3, &self.ambient.cocycle_with_coordinates(coords))
            })
            .collect()
    }

    /// Coordinates of a closed `α ⊕ β` (on `A_{≤2}`) in MS.
    pub fn class_of(&self, t: &TotalCochain) -> Result<Vec<u64>> {
        let c = class_of(&self.truncated, &self.ambient, t)?;
        self.subgroup.coordinates(&c.coordinates_i64())
    }
}

pub fn multiplicative_structures(action: &GroupAction, limits: &Limits) -> Result<MsPresentation> {
    let truncated = ComplexSpec::new(action, Shape::ATrunc(2));
    let a = ComplexSpec::new(action, Shape::A);
    let ambient = t_cohomology(&truncated, 3, limits)?;
    if ambient.free_rank > 0 {
        return Err(Error::Numerical("H³ of the truncated complex has a free part".into()));
    }
    let row = RowCohomology::new(action, 3, 1, limits)?;
    let reps = representatives_of(&truncated, &ambient);
    let mut columns = Vec::with_capacity(reps.len());
    for r in &reps {
        let beta = r.component(1, 2).unwrap();
        let nu = delta_k(&a, beta)?.scale(-1);
        columns.push(row.class_of(&nu)?);
    }
    let dst = row.moduli();
    let matrix = (0..dst.len()).map(|i| columns.iter().map(|c| c[i] as i64).collect()).collect();
    let obstruction = FinHom::new(ambient.invariant_factors.clone(), dst, matrix)?;
    let subgroup = obstruction.kernel()?;
    Ok(MsPresentation { ambient, obstruction, subgroup, truncated })
}

/// `φ: H³(Tot A) → MS_G(K)`, with kernel and cokernel.
#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub source: Vec<u64>,
    pub target: Vec<u64>,
    /// Rows indexed by MS coordinates, columns by `H³(Tot A)` generators.
    pub matrix: Vec<Vec<i64>>,
    pub kernel: Vec<u64>,
    pub kernel_generators: Vec<Vec<i64>>,
    pub cokernel: Vec<u64>,
}

pub fn phi_map(action: &GroupAction, limits: &Limits) -> Result<(PhiReport, FinHom)> {
    let a = ComplexSpec::new(action, Shape::A);
    let h3 = t_cohomology(&a, 3, limits)?;
    let ms = multiplicative_structures(action, limits)?;
    let mut columns = Vec::new();
    for r in representatives_of(&a, &h3) {
        columns.push(ms.class_of(&r.restrict(&ms.truncated))?);
    }
    let dst = ms.invariant_factors().to_vec();
    let matrix: Vec<Vec<i64>> = (0..dst.len()).map(|i| columns.iter().map(|c| c[i] as i64).collect()).collect();
    let hom = FinHom::new(h3.invariant_factors.clone(), dst.clone(), matrix.clone())?;
    let k = hom.kernel()?;
    let report = PhiReport {
        source: h3.invariant_factors.clone(),
        target: dst,
        matrix,
        kernel: k.invariant_factors.clone(),
        kernel_generators: k.generators.clone(),
        cokernel: hom.cokernel_factors()?,
    };
    Ok((report, hom))
}

/// The image of `H³(C*(K,T)^G) → H³(Tot A)` as a subgroup.
pub fn invariant_image(action: &GroupAction, limits: &Limits) -> Result<Subquotient> {
    let a = ComplexSpec::new(action, Shape::A);
    let h3 = t_cohomology(&a, 3, limits)?;
    let inv = InvariantComplex::new(action);
    let pres = invariant_cohomology(action, 3, limits)?;
    let mut spanning = Vec::new();
    for j in 0..pres.invariant_factors.len() {
        let theta = inv.expand(3, &pres.representative_values(j));
        let t = TotalCochain::from_components(&a, 3, vec![theta])?;
        let c = class_of(&a, &h3, &t)?;
        spanning.push(c.coordinates.iter().map(|&x| BigInt::from(x)).collect());
    }
    for (j, &d) in h3.invariant_factors.iter().enumerate() {
        let mut v = vec![BigInt::zero(); h3.invariant_factors.len()];
        v[j] = BigInt::from(d);
        spanning.push(v);
    }
    Subquotient::new(h3.invariant_factors, spanning)
}

/// Order of `ker(H⁴(C*(K,T)^G) → H⁴(Tot A))`.
pub fn invariant_h4_kernel(action: &GroupAction, limits: &Limits) -> Result<Vec<u64>> {
    let a = ComplexSpec::new(action, Shape::A);
    let h4 = t_cohomology(&a, 4, limits)?;
    let inv = InvariantComplex::new(action);
    let pres = invariant_cohomology(action, 4, limits)?;
    let mut columns = Vec::new();
    for j in 0..pres.invariant_factors.len() {
        let t = TotalCochain::from_components(&a, 4, vec![inv.expand(4, &pres.representative_values(j))])?;
        columns.push(class_of(&a, &h4, &t)?.coordinates);
    }
    let matrix = (0..h4.invariant_factors.len()).map(|i| columns.iter().map(|c| c[i] as i64).collect()).collect();
    Ok(FinHom::new(pres.invariant_factors.clone(), h4.invariant_factors.clone(), matrix)?.kernel()?.invariant_factors)
}

/// Class of `(α_w, β_w)` in `MS_G(G)` for a 3-cocycle `w` on `G` acting on itself by conjugation.
pub fn mult_class_of_dpr(action: &GroupAction, w: &Cochain, limits: &Limits) -> Result<Vec<u64>> {
    let a = ComplexSpec::new(action, Shape::A);
    let ms = multiplicative_structures(action, limits)?;
    ms.class_of(&dpr_cocycle(&a, w)?.restrict(&ms.truncated))
}

/// `H¹_G(K,T)_mult` inside `H¹_G(K,T)`.
#[derive(Clone, Debug, Serialize)]
pub struct H1Mult {
    pub ambient: Vec<u64>,
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<Vec<i64>>,
}

/// A `δ_G`-closed `(1,1)` cochain with the given orbit-wise classes; each orbit
/// summand gets `χ[g||y] = f(t_{gy}⁻¹ g t_y)` with `t_y x = y`.
fn h1_row_representative(action: &GroupAction, row: &RowCohomology, coords: &[i64]) -> Result<Cochain> {
    let spec = ComplexSpec::new(action, Shape::RowStrip(1));
    let g = &action.group;
    let mut chi = Cochain::zero(&spec, 1, 1);
    let mut at = 0;
    for s in &row.equivariant.summands {
        let pres = &s.presentation;
        let nf = pres.invariant_factors.len();
        if nf == 0 {
            continue;
        }
        let mut f = vec![CircleValue::ZERO; s.stabilizer.order()];
        for (j, &c) in coords[at..at + nf].iter().enumerate() {
            for (h, v) in pres.representative_values(j).into_iter().enumerate() {
                // representative values are indexed by non-identity stabilizer elements
                let elem = s.stabilizer.non_identity()[h];
                f[elem] += v.scale(c);
            }
        }
        at += nf;
        let x = s.orbit.representative;
        let (_, kx) = spec.decode(0, 1, x);
        let mut t = vec![None; action.target.order()];
        for e in g.elements() {
            let y = action.act(e, kx[0]);
            if t[y].is_none() {
                t[y] = Some(e);
            }
        }
        let stab_index = |e: usize| s.orbit.stabilizer.iter().position(|&z| z == e).unwrap();
        for y in s.orbit.elements.iter().map(|&c| spec.decode(0, 1, c).1[0]) {
            for e in g.non_identity() {
                let gy = action.act(e, y);
                let st = g.mul(g.mul(g.inv(t[gy].unwrap()), e), t[y].unwrap());
                let idx = spec.encode(&[e], &[y]).unwrap();
                chi.values[idx] = f[stab_index(st)];
            }
        }
    }
    Ok(chi)
}

pub fn h1_mult(action: &GroupAction, limits: &Limits) -> Result<H1Mult> {
    let a = ComplexSpec::new(action, Shape::A);
    let row1 = RowCohomology::new(action, 1, 1, limits)?;
    let row2 = RowCohomology::new(action, 2, 1, limits)?;
    let src = row1.moduli();
    let mut columns = Vec::new();
    for j in 0..src.len() {
        let mut e = vec![0; src.len()];
        e[j] = 1;
        let chi = h1_row_representative(action, &row1, &e)?;
        debug_assert_eq!(row1.class_of(&chi)?, e.iter().map(|&x| x as u64).collect::<Vec<_>>());
        columns.push(row2.class_of(&delta_k(&a, &chi)?)?);
    }
    let dst = row2.moduli();
    let matrix = (0..dst.len()).map(|i| columns.iter().map(|c| c[i] as i64).collect()).collect();
    let k = FinHom::new(src.clone(), dst, matrix)?.kernel()?;
    Ok(H1Mult { ambient: src, invariant_factors: k.invariant_factors, generators: k.generators })
}

/// Orbits of `Aut_G(K)` on `H³(Tot A)` coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct PsdmnModuli {
    pub invariant_factors: Vec<u64>,
    pub automorphisms: usize,
    /// One coordinate matrix per automorphism (rows = target coordinates).
    pub action_matrices: Vec<Vec<Vec<i64>>>,
    /// Each orbit sorted, lexicographically minimal coordinate first; orbits sorted by it.
    pub orbits: Vec<Vec<Vec<u64>>>,
}

impl PsdmnModuli {
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.len()).collect()
    }
}

/// `f*F[g||k] = F[g||f(k)]` on every component.
pub fn pullback_by_automorphism(spec: &ComplexSpec, f: &GroupHom, t: &TotalCochain) -> TotalCochain {
    TotalCochain {
        degree: t.degree,
        components: t
            .components
            .iter()
            .map(|(&(p, q), c)| {
                let moved = Cochain::from_fn(spec, p, q, |g, k| {
                    let fk: Vec<usize> = k.iter().map(|&x| f.apply(x)).collect();
                    c.eval(spec, g, &fk)
                });
                ((p, q), moved)
            })
            .collect(),
    }
}

pub fn psdmn_moduli(action: &GroupAction, limits: &Limits) -> Result<PsdmnModuli> {
    let a = ComplexSpec::new(action, Shape::A);
    let pres = pseudomonoid_classes(action, limits)?;
    let reps = representatives_of(&a, &pres);
    let autos = equivariant_automorphisms(action, limits)?;
    let mut action_matrices = Vec::with_capacity(autos.len());
    for f in &autos {
        let cols: Vec<Vec<u64>> = reps
            .iter()
            .map(|r| class_of(&a, &pres, &pullback_by_automorphism(&a, f, r)).map(|c| c.coordinates))
            .collect::<Result<_>>()?;
        let n = pres.invariant_factors.len();
        action_matrices.push((0..n).map(|i| cols.iter().map(|c| c[i] as i64).collect()).collect::<Vec<Vec<i64>>>());
    }
    let total = group_order(&pres.invariant_factors);
    if total > limits.max_enumeration as u128 {
        return Err(Error::Resource(format!("{total} classes exceed the enumeration ceiling")));
    }
    let moduli = pres.invariant_factors.clone();
    let apply = |m: &Vec<Vec<i64>>, x: &[u64]| -> Vec<u64> {
        m.iter()
            .zip(&moduli)
            .map(|(row, &d)| {
                let s: i128 = row.iter().zip(x).map(|(a, b)| *a as i128 * *b as i128).sum();
                s.rem_euclid(d as i128) as u64
            })
            .collect()
    };
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    let mut x = vec![0u64; moduli.len()];
    for _ in 0..total {
        if !seen.contains(&x) {
            let orbit: BTreeSet<Vec<u64>> = action_matrices.iter().map(|m| apply(m, &x)).chain([x.clone()]).collect();
            seen.extend(orbit.iter().cloned());
            orbits.push(orbit.into_iter().collect::<Vec<_>>());
        }
        // odometer, last coordinate fastest
        for i in (0..x.len()).rev() {
            x[i] += 1;
            if x[i] < moduli[i] {
                break;
            }
            x[i] = 0;
        }
    }
    orbits.sort();
    Ok(PsdmnModuli { invariant_factors: pres.invariant_factors, automorphisms: autos.len(), action_matrices, orbits })
}

/// `H^n` of the invariant K-complex, exposed for reports.
pub fn invariant_presentation(action: &GroupAction, n: usize, limits: &Limits) -> Result<AbelianGroupPresentation> {
    t_cohomology_of(&InvariantComplex::new(action), n, limits)
}
