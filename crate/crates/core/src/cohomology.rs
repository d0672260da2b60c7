//! Circle-coefficient cohomology through integer homology.
//!
//! Since Q/Z is injective, `H^n(Hom(D_*, Q/Z)) ≅ Hom(H_n(D_*), Q/Z)`. The torsion of
//! `H_n` is read off the cokernel of `∂_{n+1}`; its generators are cycles `zᵢ` and a
//! cocycle `f` has coordinates `cᵢ = dᵢ·f(zᵢ) ∈ Z/dᵢ`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian::canonical_factors;
use crate::circle::CircleValue;
use crate::complexes::{total_differential, Cochain, ComplexSpec, Shape, TotalCochain};
use crate::error::{Error, Limits, Result};
use crate::exactalg::{kernel_basis, Cokernel, IntMatrix};
use crate::groups::{orbits_and_stabilizers, FiniteGroup, GroupAction, GroupHom, Orbit, PermutationAction};

const MAX_DENSE: usize = 4_000_000;

/// Anything that provides a chain complex of free abelian groups on finite bases.
pub trait ChainSource {
    fn describe(&self) -> String;
    fn cells(&self, n: usize) -> usize;
    /// Columns of `∂_n`, sorted by row.
    fn boundary_columns(&self, n: usize) -> Vec<Vec<(usize, i64)>>;
    fn check_size(&self, _n: usize, _limits: &Limits) -> Result<()> {
        Ok(())
    }
}

impl ChainSource for ComplexSpec {
    fn describe(&self) -> String {
        ComplexSpec::describe(self)
    }
    fn cells(&self, n: usize) -> usize {
        ComplexSpec::cells(self, n)
    }
    fn boundary_columns(&self, n: usize) -> Vec<Vec<(usize, i64)>> {
        ComplexSpec::boundary_columns(self, n)
    }
    fn check_size(&self, n: usize, limits: &Limits) -> Result<()> {
        ComplexSpec::check_size(self, n, limits)
    }
}

/// `H^n(·, Q/Z) ≅ ⊕ Z/dᵢ` (plus `(Q/Z)^free_rank` when homology has a free part).
#[derive(Clone, Debug, Serialize)]
pub struct AbelianGroupPresentation {
    pub complex: String,
    pub degree: usize,
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
    /// Homology generators as sparse integer chains in the degree-`n` cell basis.
    pub generator_cycles: Vec<Vec<(usize, BigInt)>>,
    #[serde(skip)]
    pub cells: usize,
    #[serde(skip)]
    functionals: Vec<Vec<u64>>,
}

/// Coordinates of a class in `⊕ Z/dᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CohomologyClass {
    pub moduli: Vec<u64>,
    pub coordinates: Vec<u64>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|&c| c == 0)
    }

    /// Additive order of the class.
    pub fn order(&self) -> u64 {
        self.coordinates
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &m)| m / c.gcd(&m))
            .fold(1, |a, b| a.lcm(&b))
    }

    pub fn coordinates_i64(&self) -> Vec<i64> {
        self.coordinates.iter().map(|&c| c as i64).collect()
    }
}

impl AbelianGroupPresentation {
    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// Coordinates of a cocycle given by its values on the degree-`n` cells.
    pub fn class_of_values(&self, f: &[CircleValue]) -> Result<CohomologyClass> {
        if f.len() != self.cells {
            return Err(Error::Contract(format!("cochain has {} values, complex has {} cells", f.len(), self.cells)));
        }
        let mut coordinates = Vec::with_capacity(self.invariant_factors.len());
        for (z, &d) in self.generator_cycles.iter().zip(&self.invariant_factors) {
            let v: CircleValue = z
                .iter()
                .map(|(i, c)| f[*i].scale(c.mod_floor(&BigInt::from(f[*i].den())).to_i64().unwrap()))
                .sum();
            if d % v.den() != 0 {
                return Err(Error::Contract("cochain is not a cocycle (pairing with a torsion cycle)".into()));
            }
            coordinates.push(v.num() * (d / v.den()));
        }
        Ok(CohomologyClass { moduli: self.invariant_factors.clone(), coordinates })
    }

    /// Cocycle with class the `j`-th unit vector.
    pub fn representative_values(&self, j: usize) -> Vec<CircleValue> {
        let d = self.invariant_factors[j] as i128;
        self.functionals[j].iter().map(|&v| CircleValue::new(v as i128, d)).collect()
    }

    /// Cocycle with the given class coordinates.
    pub fn cocycle_with_coordinates(&self, coords: &[i64]) -> Vec<CircleValue> {
        let mut out = vec![CircleValue::ZERO; self.cells];
        for (j, &c) in coords.iter().enumerate() {
            if c.rem_euclid(self.invariant_factors[j] as i64) == 0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.representative_values(j)) {
                *o += v.scale(c);
            }
        }
        out
    }
}

/// Invariant factors and generator cycles of `H_n` of a chain source.
pub fn t_cohomology_of(source: &dyn ChainSource, n: usize, limits: &Limits) -> Result<AbelianGroupPresentation> {
    source.check_size(n + 1, limits)?;
    let cells = source.cells(n);
    let upper = source.boundary_columns(n + 1);
    let nnz: usize = upper.iter().map(|c| c.len()).sum();
    if nnz > limits.max_nnz {
        return Err(Error::Resource(format!(
            "boundary in degree {} of {} has {nnz} nonzeros, above the ceiling {}",
            n + 1,
            source.describe(),
            limits.max_nnz
        )));
    }
    let coker = Cokernel::new(cells, &upper, MAX_DENSE)?;
    let lower_rank = if n == 0 {
        0
    } else {
        Cokernel::rank_of(source.cells(n - 1), &source.boundary_columns(n), MAX_DENSE)?
    };
    let mut invariant_factors = Vec::new();
    for d in coker.torsion() {
        invariant_factors.push(
            d.to_u64()
                .filter(|&x| x < (1 << 62))
                .ok_or_else(|| Error::Resource(format!("invariant factor {d} too large")))?,
        );
    }
    let functionals = (0..invariant_factors.len())
        .map(|j| coker.functional_mod(j).iter().map(|v| v.to_u64().unwrap()).collect())
        .collect();
    Ok(AbelianGroupPresentation {
        complex: source.describe(),
        degree: n,
        free_rank: coker.free_rank() - lower_rank,
        invariant_factors,
        generator_cycles: coker.generators().to_vec(),
        cells,
        functionals,
    })
}

/// `H^n(Tot(spec), T)`.
pub fn t_cohomology(spec: &ComplexSpec, n: usize, limits: &Limits) -> Result<AbelianGroupPresentation> {
    t_cohomology_of(spec, n, limits)
}

/// Class of a cocycle of `Tot(spec)`; errors if `f` is not closed.
pub fn class_of(spec: &ComplexSpec, pres: &AbelianGroupPresentation, f: &TotalCochain) -> Result<CohomologyClass> {
    if f.degree != pres.degree {
        return Err(Error::Contract("cochain degree differs from presentation degree".into()));
    }
    if !total_differential(spec, f).is_zero() {
        return Err(Error::Contract("cochain is not a cocycle".into()));
    }
    pres.class_of_values(&f.flatten())
}

/// Whether a cocycle is a coboundary.
pub fn is_coboundary(spec: &ComplexSpec, pres: &AbelianGroupPresentation, f: &TotalCochain) -> Result<bool> {
    if pres.free_rank > 0 {
        return is_coboundary_by_kernel(spec, f);
    }
    Ok(class_of(spec, pres, f)?.is_zero())
}

/// The direct criterion: `f` vanishes on a basis of the cycle lattice `ker ∂_n`.
pub fn is_coboundary_by_kernel(spec: &ComplexSpec, f: &TotalCochain) -> Result<bool> {
    if !total_differential(spec, f).is_zero() {
        return Err(Error::Contract("cochain is not a cocycle".into()));
    }
    let n = f.degree;
    let flat = f.flatten();
    let dn = if n == 0 { IntMatrix::zeros(0, spec.cells(0)) } else { spec.boundary_matrix(n) };
    for z in kernel_basis(&dn) {
        let v: CircleValue = z
            .iter()
            .zip(&flat)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| {
                let den = x.den() as i64;
                x.scale(c.mod_floor(&BigInt::from(den)).to_i64().unwrap())
            })
            .sum();
        if !v.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cocycles `f_j` dual to the homology generators.
pub fn cocycle_representatives(spec: &ComplexSpec, n: usize, limits: &Limits) -> Result<Vec<TotalCochain>> {
    let pres = t_cohomology(spec, n, limits)?;
    Ok(representatives_of(spec, &pres))
}

pub fn representatives_of(spec: &ComplexSpec, pres: &AbelianGroupPresentation) -> Vec<TotalCochain> {
    (0..pres.invariant_factors.len())
        .map(|j| TotalCochain::from_flat(spec, pres.degree, &pres.representative_values(j)))
        .collect()
}

/// `(f*w)[h₁|…|h_n] = w[f h₁|…|f h_n]` on normalized bar cochains.
pub fn pullback_cochain(f: &GroupHom, w: &Cochain) -> Cochain {
    let src = ComplexSpec::single_group(&f.source);
    let dst = ComplexSpec::single_group(&f.target);
    Cochain::from_fn(&src, 0, w.q, |_, k| {
        let img: Vec<usize> = k.iter().map(|&x| f.apply(x)).collect();
        w.eval(&dst, &[], &img)
    })
}

/// The complex of G-invariant normalized cochains on K with `δ_K`, presented through the
/// coinvariant chain complex whose cells are G-orbits of normalized tuples.
pub struct InvariantComplex {
    action: GroupAction,
    bar: ComplexSpec,
}

impl InvariantComplex {
    pub fn new(action: &GroupAction) -> Self {
        InvariantComplex { action: action.clone(), bar: ComplexSpec::single_group(&action.target) }
    }

    /// Orbit id of every normalized `n`-tuple, and one representative per orbit.
    pub fn orbits(&self, n: usize) -> (Vec<usize>, Vec<usize>) {
        let cells = self.bar.cell_count(0, n);
        let mut id = vec![usize::MAX; cells];
        let mut reps = Vec::new();
        for c in 0..cells {
            if id[c] != usize::MAX {
                continue;
            }
            let (_, k) = self.bar.decode(0, n, c);
            for g in self.action.group.elements() {
                let moved: Vec<usize> = k.iter().map(|&x| self.action.act(g, x)).collect();
                id[self.bar.encode(&[], &moved).unwrap()] = reps.len();
            }
            reps.push(c);
        }
        (id, reps)
    }

    /// Values on orbit representatives of a G-invariant `(0,n)` cochain.
    pub fn orbit_values(&self, f: &Cochain) -> Result<Vec<CircleValue>> {
        let (id, reps) = self.orbits(f.q);
        for (c, &o) in id.iter().enumerate() {
            if f.values[c] != f.values[reps[o]] {
                return Err(Error::Contract("cochain is not G-invariant".into()));
            }
        }
        Ok(reps.iter().map(|&r| f.values[r]).collect())
    }

    /// Expands orbit values to a cochain on all tuples.
    pub fn expand(&self, n: usize, vals: &[CircleValue]) -> Cochain {
        let (id, _) = self.orbits(n);
        Cochain { p: 0, q: n, values: id.iter().map(|&o| vals[o]).collect() }
    }
}

impl ChainSource for InvariantComplex {
    fn describe(&self) -> String {
        format!("invariant({} by {}, {})", self.action.target.name(), self.action.group.name(), self.action.name())
    }
    fn cells(&self, n: usize) -> usize {
        self.orbits(n).1.len()
    }
    fn boundary_columns(&self, n: usize) -> Vec<Vec<(usize, i64)>> {
        if n == 0 {
            return vec![Vec::new(); self.cells(0)];
        }
        let (lower_id, _) = self.orbits(n - 1);
        let (_, reps) = self.orbits(n);
        reps.iter()
            .map(|&r| {
                let (_, k) = self.bar.decode(0, n, r);
                let mut col = Vec::new();
                self.bar.k_faces(&[], &k, |_, b, s| {
                    if let Some(i) = self.bar.encode(&[], b) {
                        col.push((lower_id[i], s));
                    }
                });
                col.sort_unstable_by_key(|e| e.0);
                let mut merged: Vec<(usize, i64)> = Vec::new();
                for (i, v) in col {
                    match merged.last_mut() {
                        Some(l) if l.0 == i => l.1 += v,
                        _ => merged.push((i, v)),
                    }
                }
                merged.retain(|e| e.1 != 0);
                merged
            })
            .collect()
    }
    fn check_size(&self, n: usize, limits: &Limits) -> Result<()> {
        let est = self.bar.cell_count(0, n) * (n + 2);
        if est > limits.max_nnz {
            return Err(Error::Resource(format!("invariant complex in degree {n} too large (~{est} nonzeros)")));
        }
        Ok(())
    }
}

/// `H^n(C*(K,T)^G)`.
pub fn invariant_cohomology(action: &GroupAction, n: usize, limits: &Limits) -> Result<AbelianGroupPresentation> {
    t_cohomology_of(&InvariantComplex::new(action), n, limits)
}

/// One orbit's contribution `H^p(Stab, T)` to equivariant cohomology.
#[derive(Clone, Debug)]
pub struct OrbitSummand {
    pub orbit: Orbit,
    pub stabilizer: FiniteGroup,
    pub presentation: AbelianGroupPresentation,
}

/// `H^p_G(X, T) ≅ ⊕_orbits H^p(Stab_x, T)`.
#[derive(Clone, Debug)]
pub struct EquivariantCohomology {
    pub degree: usize,
    pub summands: Vec<OrbitSummand>,
    pub invariant_factors: Vec<u64>,
}

impl EquivariantCohomology {
    /// Concatenated moduli of the orbit summands (not merged).
    pub fn moduli(&self) -> Vec<u64> {
        self.summands.iter().flat_map(|s| s.presentation.invariant_factors.iter().copied()).collect()
    }
}

pub fn equivariant_cohomology(x: &PermutationAction, p: usize, limits: &Limits) -> Result<EquivariantCohomology> {
    let orbits = orbits_and_stabilizers(x);
    let mut cache: BTreeMap<Vec<usize>, (FiniteGroup, AbelianGroupPresentation)> = BTreeMap::new();
    let mut summands = Vec::with_capacity(orbits.len());
    for orbit in orbits {
        if orbit.stabilizer.len() > limits.max_group_order {
            return Err(Error::Resource(format!("stabilizer of order {} exceeds ceiling", orbit.stabilizer.len())));
        }
        let entry = match cache.get(&orbit.stabilizer) {
            Some(e) => e.clone(),
            None => {
                let (s, _) = x.group.subgroup(&orbit.stabilizer, format!("Stab({})", orbit.representative))?;
                let pres = t_cohomology(&ComplexSpec::single_group(&s), p, limits)?;
                cache.insert(orbit.stabilizer.clone(), (s.clone(), pres.clone()));
                (s, pres)
            }
        };
        summands.push(OrbitSummand { orbit, stabilizer: entry.0, presentation: entry.1 });
    }
    let all: Vec<u64> = summands.iter().flat_map(|s| s.presentation.invariant_factors.iter().copied()).collect();
    Ok(EquivariantCohomology { degree: p, invariant_factors: canonical_factors(&all), summands })
}

/// Cohomology of one row `q` of the double complex in G-degree `p`, i.e. `H^p_G` of the
/// G-set of normalized `q`-tuples, with classes read by restriction to stabilizers.
pub struct RowCohomology {
    spec: ComplexSpec,
    pub equivariant: EquivariantCohomology,
    q: usize,
}

impl RowCohomology {
    pub fn new(action: &GroupAction, q: usize, p: usize, limits: &Limits) -> Result<Self> {
        let spec = ComplexSpec::new(action, Shape::RowStrip(q));
        let cells = spec.cell_count(0, q);
        if cells > limits.max_nnz {
            return Err(Error::Resource(format!("row {q} has {cells} tuples, above the ceiling")));
        }
        let perm = action
            .group
            .elements()
            .map(|g| {
                (0..cells)
                    .map(|c| {
                        let (_, k) = spec.decode(0, q, c);
                        let moved: Vec<usize> = k.iter().map(|&x| action.act(g, x)).collect();
                        spec.encode(&[], &moved).unwrap()
                    })
                    .collect()
            })
            .collect();
        let x = PermutationAction { group: action.group.clone(), degree: cells, perm };
        let equivariant = equivariant_cohomology(&x, p, limits)?;
        Ok(RowCohomology { spec, equivariant, q })
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.equivariant.moduli()
    }

    /// Coordinates (concatenated over orbits) of a `δ_G`-closed cochain at `(p, q)`.
    pub fn class_of(&self, f: &Cochain) -> Result<Vec<u64>> {
        if f.q != self.q || f.p != self.equivariant.degree {
            return Err(Error::Contract("cochain is not in this row and degree".into()));
        }
        let p = f.p;
        let mut out = Vec::new();
        for s in &self.equivariant.summands {
            if s.presentation.invariant_factors.is_empty() {
                continue;
            }
            let (_, k) = self.spec.decode(0, self.q, s.orbit.representative);
            let sub = ComplexSpec::single_group(&s.stabilizer);
            let restricted = Cochain::from_fn(&sub, 0, p, |_, h| {
                let g: Vec<usize> = h.iter().map(|&i| s.orbit.stabilizer[i]).collect();
                f.eval(&self.spec, &g, &k)
            });
            out.extend(s.presentation.class_of_values(&restricted.values)?.coordinates);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, inversion_action, trivial_action};

    #[test]
    fn cyclic_degree_three() {
        let lim = Limits::default();
        for n in 2..=4 {
            let spec = ComplexSpec::single_group(&cyclic(n));
            assert_eq!(t_cohomology(&spec, 3, &lim).unwrap().invariant_factors, vec![n as u64]);
        }
    }

    #[test]
    fn z2_representative() {
        let lim = Limits::default();
        let spec = ComplexSpec::single_group(&cyclic(2));
        let reps = cocycle_representatives(&spec, 3, &lim).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].flatten(), vec![CircleValue::new(1, 2)]);
    }

    #[test]
    fn class_ignores_coboundaries_with_other_denominators() {
        use rand::SeedableRng;
        let lim = Limits::default();
        let spec = ComplexSpec::new(&inversion_action(&cyclic(4)).unwrap(), Shape::A);
        let pres = t_cohomology(&spec, 3, &lim).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let b = total_differential(&spec, &TotalCochain::random(&spec, 2, 35, &mut rng));
        for (j, r) in representatives_of(&spec, &pres).iter().enumerate() {
            let c = class_of(&spec, &pres, &r.add(&b)).unwrap();
            let want: Vec<u64> = (0..pres.invariant_factors.len()).map(|i| (i == j) as u64).collect();
            assert_eq!(c.coordinates, want);
        }
        assert!(is_coboundary(&spec, &pres, &b).unwrap());
        assert!(is_coboundary_by_kernel(&spec, &b).unwrap());
    }

    #[test]
    fn dihedral_small() {
        let lim = Limits::default();
        let spec = ComplexSpec::new(&inversion_action(&cyclic(4)).unwrap(), Shape::A);
        assert_eq!(t_cohomology(&spec, 3, &lim).unwrap().invariant_factors, vec![2, 4]);
        let spec = ComplexSpec::new(&inversion_action(&cyclic(5)).unwrap(), Shape::A);
        assert_eq!(t_cohomology(&spec, 3, &lim).unwrap().invariant_factors, vec![5]);
    }

    #[test]
    fn equivariant_examples() {
        let lim = Limits::default();
        let x = inversion_action(&cyclic(5)).unwrap().as_permutation_action();
        assert_eq!(equivariant_cohomology(&x, 1, &lim).unwrap().invariant_factors, vec![2]);
        let pt = PermutationAction { group: cyclic(2), degree: 1, perm: vec![vec![0], vec![0]] };
        assert!(equivariant_cohomology(&pt, 2, &lim).unwrap().invariant_factors.is_empty());
        let triv = trivial_action(&cyclic(3), &cyclic(2)).as_permutation_action();
        assert_eq!(equivariant_cohomology(&triv, 1, &lim).unwrap().moduli(), vec![3, 3]);
    }
}
