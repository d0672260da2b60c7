use std::collections::BTreeSet;

use equik::abelian::canonical_factors;
use equik::circle::CircleValue;
use equik::cohomology::{cocycle_representatives, representatives_of};
use equik::complexes::{delta_g, delta_k, Cochain, ComplexSpec, Shape};
use equik::groups::{conjugation_action, cyclic, inversion_action, symmetric, trivial_action, GroupAction};
use equik::shuffle::dpr_cocycle;
use equik::structures::{
    invariant_h4_kernel, invariant_image, lift_alpha, lift_beta, multiplicative_structures, mult_class_of_dpr,
    obstruction_d3, phi_map, pseudomonoid_classes, psdmn_moduli, MultiplicativeStructure, PseudomonoidStructure,
};
use equik::Limits;

fn corpus() -> Vec<GroupAction> {
    vec![
        inversion_action(&cyclic(3)).unwrap(),
        inversion_action(&cyclic(4)).unwrap(),
        inversion_action(&cyclic(5)).unwrap(),
        conjugation_action(&cyclic(2)),
        conjugation_action(&cyclic(3)),
        conjugation_action(&cyclic(4)),
        trivial_action(&cyclic(2), &cyclic(2)),
        trivial_action(&cyclic(3), &cyclic(2)),
    ]
}

#[test]
fn pseudomonoid_class_groups() {
    let lim = Limits::default();
    let f = |a: &GroupAction| pseudomonoid_classes(a, &lim).unwrap().invariant_factors;
    assert_eq!(f(&inversion_action(&cyclic(4)).unwrap()), vec![2, 4]);
    assert!(f(&inversion_action(&cyclic(5)).unwrap()).len() <= 1);
    assert_eq!(f(&trivial_action(&cyclic(2), &cyclic(2))), vec![2, 2]);
}

#[test]
fn phi_kernel_is_invariant_image_and_cokernel_matches_h4() {
    let lim = Limits::default();
    for a in corpus() {
        let (report, hom) = phi_map(&a, &lim).unwrap();
        let image = invariant_image(&a, &lim).unwrap();
        let kernel = hom.kernel().unwrap();
        assert_eq!(kernel.invariant_factors, image.invariant_factors, "{}", a.name());
        for g in &kernel.generators {
            image.coordinates(g).unwrap();
        }
        let coker = invariant_h4_kernel(&a, &lim).unwrap();
        assert_eq!(report.cokernel, coker, "{}", a.name());
    }
}

#[test]
fn phi_examples() {
    let lim = Limits::default();
    let (r, _) = phi_map(&trivial_action(&cyclic(3), &cyclic(2)), &lim).unwrap();
    assert_eq!(r.kernel, vec![2]);
    assert!(r.cokernel.is_empty());
    let (r, _) = phi_map(&conjugation_action(&cyclic(4)), &lim).unwrap();
    assert_eq!(r.kernel, vec![4]);
    assert!(r.cokernel.is_empty());
    let (r, _) = phi_map(&inversion_action(&cyclic(5)).unwrap(), &lim).unwrap();
    assert_eq!(r.kernel, vec![5]);
    assert!(r.target.is_empty() && r.cokernel.is_empty());
}

#[test]
fn ms_representatives_are_multiplicative() {
    let lim = Limits::default();
    for a in corpus() {
        let ms = multiplicative_structures(&a, &lim).unwrap();
        for r in ms.representatives() {
            let (al, be) = (r.component(2, 1).unwrap().clone(), r.component(1, 2).unwrap().clone());
            MultiplicativeStructure::new(&a, al, be, &lim).unwrap();
        }
    }
}

#[test]
fn psdmn_orbits() {
    let lim = Limits::default();
    let m = psdmn_moduli(&inversion_action(&cyclic(4)).unwrap(), &lim).unwrap();
    assert_eq!(m.invariant_factors, vec![2, 4]);
    assert_eq!(m.automorphisms, 2);
    assert_eq!(m.orbit_count(), 8);
    assert!(m.action_matrices.iter().all(|a| *a == vec![vec![1, 0], vec![0, 1]]));
    let m = psdmn_moduli(&conjugation_action(&cyclic(4)), &lim).unwrap();
    assert_eq!(m.invariant_factors, vec![4, 4]);
    // independent model: (a,(x,y)) ↦ (ax, a²y) on Z/4⊕Z/4 for a ∈ {1,3}
    let mut model = BTreeSet::new();
    for x in 0..4u64 {
        for y in 0..4u64 {
            let o: BTreeSet<(u64, u64)> = [1u64, 3].iter().map(|a| ((a * x) % 4, (a * a * y) % 4)).collect();
            model.insert(o);
        }
    }
    let mut want: Vec<usize> = model.iter().map(|o| o.len()).collect();
    want.sort();
    let mut got = m.orbit_sizes();
    got.sort();
    assert_eq!(got, want);
    assert_eq!(m.orbit_count(), 12);
}

#[test]
fn dpr_triple_lifts_and_obstructions_vanish() {
    let lim = Limits::default();
    for g in [cyclic(2), cyclic(3), cyclic(4), symmetric(3).unwrap()] {
        let act = conjugation_action(&g);
        let a = ComplexSpec::new(&act, Shape::A);
        let bar = ComplexSpec::single_group(&g);
        for w in cocycle_representatives(&bar, 3, &lim).unwrap() {
            let w = w.components[&(0, 3)].clone();
            let t = dpr_cocycle(&a, &w).unwrap();
            let (al, be, th) = (t.components[&(2, 1)].clone(), t.components[&(1, 2)].clone(), t.components[&(0, 3)].clone());
            let beta = lift_alpha(&act, &al).unwrap().expect("d1 vanishes");
            let diff = beta.add(&be.scale(-1));
            assert!(delta_g(&a, &diff).unwrap().is_zero());
            assert!(lift_beta(&act, &al, &be).unwrap().is_some());
            assert!(obstruction_d3(&act, &al, &be, &th, &lim).unwrap().is_zero());
            PseudomonoidStructure::new(&act, al, be, th).unwrap();
        }
    }
}

#[test]
fn lift_alpha_matches_brute_force() {
    let act = inversion_action(&cyclic(3)).unwrap();
    let a = ComplexSpec::new(&act, Shape::A);
    let (na, nb) = (a.cell_count(2, 1), a.cell_count(1, 2));
    let den: usize = 12;
    let betas: Vec<Cochain> = (0..den.pow(nb as u32))
        .map(|mut code| {
            let values = (0..nb)
                .map(|_| {
                    let v = code % den;
                    code /= den;
                    CircleValue::new(v as i128, den as i128)
                })
                .collect();
            Cochain { p: 1, q: 2, values }
        })
        .collect();
    let images: BTreeSet<Vec<CircleValue>> = betas.iter().map(|b| delta_g(&a, b).unwrap().values).collect();
    let mut tried = 0;
    for code in 0..6usize.pow(na as u32) {
        let mut c = code;
        let values = (0..na)
            .map(|_| {
                let v = c % 6;
                c /= 6;
                CircleValue::new(v as i128, 6)
            })
            .collect();
        let alpha = Cochain { p: 2, q: 1, values };
        if !delta_g(&a, &alpha).unwrap().is_zero() {
            continue;
        }
        tried += 1;
        let rhs: Vec<CircleValue> = delta_k(&a, &alpha).unwrap().values.iter().map(|v| -*v).collect();
        let brute = images.contains(&rhs);
        let lift = lift_alpha(&act, &alpha).unwrap();
        assert_eq!(lift.is_some(), brute);
        if let Some(b) = lift {
            assert_eq!(delta_g(&a, &b).unwrap().values, rhs);
        }
    }
    assert!(tried > 1);
}

#[test]
fn lift_beta_detects_non_multiplicative_pairs() {
    let lim = Limits::default();
    let act = trivial_action(&cyclic(2), &cyclic(3));
    let ms = multiplicative_structures(&act, &lim).unwrap();
    assert!(ms.ambient.order() > ms.order());
    let reps = representatives_of(&ms.truncated, &ms.ambient);
    let mut witnesses = 0;
    for (j, r) in reps.iter().enumerate() {
        let (al, be) = (r.component(2, 1).unwrap(), r.component(1, 2).unwrap());
        let obstructed = ms.obstruction.apply(&unit(reps.len(), j)).iter().any(|&c| c != 0);
        assert_eq!(lift_beta(&act, al, be).unwrap().is_none(), obstructed);
        witnesses += obstructed as usize;
    }
    assert!(witnesses > 0);
    let zero = Cochain::zero(&ms.truncated, 2, 1);
    let b0 = lift_alpha(&act, &zero).unwrap().unwrap();
    assert!(b0.is_zero());
    assert!(lift_beta(&act, &zero, &b0).unwrap().unwrap().is_zero());
}

fn unit(n: usize, j: usize) -> Vec<i64> {
    (0..n).map(|i| (i == j) as i64).collect()
}

#[test]
fn dpr_class_in_cyclic_ms_is_doubling() {
    let lim = Limits::default();
    for n in 2..=6usize {
        let act = conjugation_action(&cyclic(n));
        let bar = ComplexSpec::single_group(&cyclic(n));
        let w = cocycle_representatives(&bar, 3, &lim).unwrap().remove(0).components[&(0, 3)].clone();
        let c = mult_class_of_dpr(&act, &w, &lim).unwrap();
        assert_eq!(c.len(), 1);
        let order = n as u64 / num_integer::gcd(c[0], n as u64);
        assert_eq!(order, n as u64 / num_integer::gcd(n as u64, 2), "n = {n}");
        let w3 = w.scale(3);
        let c3 = mult_class_of_dpr(&act, &w3, &lim).unwrap();
        assert_eq!(c3[0], (3 * c[0]) % n as u64);
    }
}

#[test]
fn invariant_factor_merge() {
    assert_eq!(canonical_factors(&[2, 2, 4]), vec![2, 2, 4]);
}

/// Oracle for the Aut-action on `H³(Tot A(Z/4 ⋊ Z/2))`: pull the automorphism
/// `(a,g) ↦ (−a,g)` back through the plain bar complex of the dihedral group of order 8,
/// where `H³ = H³(Tot A) ⊕ H³(Z/2)` and the second summand is fixed.
#[test]
fn z4_inversion_orbits_match_dihedral_bar_complex() {
    use equik::cohomology::{class_of, pullback_cochain, t_cohomology};
    use equik::complexes::TotalCochain;
    use equik::groups::{semidirect_product, GroupHom};
    let lim = Limits::default();
    let rho = inversion_action(&cyclic(4)).unwrap();
    let sdp = semidirect_product(&rho);
    let d4 = sdp.group.clone();
    let bar = ComplexSpec::single_group(&d4);
    let pres = t_cohomology(&bar, 3, &lim).unwrap();
    assert_eq!(pres.invariant_factors, vec![2, 2, 4]);
    let img = d4
        .elements()
        .map(|x| {
            let (a, g) = sdp.pair(x);
            sdp.index(cyclic(4).inv(a), g)
        })
        .collect();
    let f = GroupHom::new(d4.clone(), d4.clone(), img).unwrap();
    let cols: Vec<Vec<u64>> = representatives_of(&bar, &pres)
        .iter()
        .map(|r| {
            let pw = pullback_cochain(&f, &r.components[&(0, 3)]);
            class_of(&bar, &pres, &TotalCochain::from_components(&bar, 3, vec![pw]).unwrap()).unwrap().coordinates
        })
        .collect();
    let m = &pres.invariant_factors;
    let mut orbits = BTreeSet::new();
    for code in 0..16u64 {
        let mut c = code;
        let x: Vec<u64> = m.iter().map(|&d| {
            let v = c % d;
            c /= d;
            v
        }).collect();
        let y: Vec<u64> = (0..3).map(|i| (0..3).map(|j| cols[j][i] * x[j]).sum::<u64>() % m[i]).collect();
        orbits.insert([x, y].into_iter().collect::<BTreeSet<_>>());
    }
    // the automorphism fixes every class
    assert_eq!(orbits.len(), 16);
}
