use equik::circle::CircleValue;
use equik::complexes::{total_differential, Cochain, ComplexSpec, Shape, TotalCochain};
use equik::fusion::{
    based_ring_isomorphic, coquasi_bialgebra, fusion_ring, irreducible_objects, tensor_object, verify_coquasi_axioms,
    AssociatorOrientation, FusionRing, Twist,
};
use equik::groups::{conjugation_action, cyclic, quaternion8, symmetric, GroupAction};
use equik::Limits;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::{character_oracle, corpus, dpr};

#[test]
fn corpus_rings_satisfy_invariants() {
    let lim = Limits::default();
    for (name, t) in corpus() {
        let objs = irreducible_objects(&t, 5, &lim).unwrap();
        let r = fusion_ring(&t, 5, &lim).unwrap();
        assert_eq!(r.rank, objs.len(), "{name}");
        assert!(r.max_residual < 1e-6, "{name}: {}", r.max_residual);
        r.check_invariants().unwrap();
        // per orbit Σ d² = |stabilizer|, i.e. |O|·Σ d² = |G|
        let orbits = objs.iter().map(|o| o.orbit).max().unwrap() + 1;
        for orb in 0..orbits {
            let s: usize = objs.iter().filter(|o| o.orbit == orb).map(|o| o.rep_dim * o.rep_dim * o.orbit_size).sum();
            assert_eq!(s, t.g().order(), "{name}");
        }
        for x in &objs {
            assert!(x.bundle.twist_residual(&t).unwrap() < 1e-9, "{name}");
            for y in &objs {
                let xy = tensor_object(&x.bundle, &y.bundle, &t).unwrap();
                assert!(xy.twist_residual(&t).unwrap() < 1e-9, "{name}");
                assert_eq!(xy.dim(), x.bundle.dim() * y.bundle.dim());
            }
        }
    }
}

#[test]
fn untwisted_doubles_match_character_oracle() {
    let lim = Limits::default();
    for g in [cyclic(2), cyclic(3), symmetric(3).unwrap()] {
        let r = fusion_ring(&Twist::trivial(&conjugation_action(&g)), 0, &lim).unwrap();
        let oracle = character_oracle(&g);
        assert!(based_ring_isomorphic(&r, &oracle).is_some(), "{}", g.name());
    }
}

#[test]
fn quaternion_double_has_22_simples() {
    let objs = irreducible_objects(&Twist::trivial(&conjugation_action(&quaternion8())), 0, &Limits::default()).unwrap();
    let mut per_orbit = vec![0; 5];
    for o in &objs {
        per_orbit[o.orbit] += 1;
    }
    assert_eq!(objs.len(), 22);
    per_orbit.sort();
    assert_eq!(per_orbit, vec![4, 4, 4, 5, 5]);
}

#[test]
fn unit_tensor_is_identity_on_objects() {
    let t = dpr(&symmetric(3).unwrap(), 1);
    let lim = Limits::default();
    let objs = irreducible_objects(&t, 0, &lim).unwrap();
    let r = fusion_ring(&t, 0, &lim).unwrap();
    let unit = &objs[r.unit].bundle;
    for x in &objs {
        let ux = tensor_object(unit, &x.bundle, &t).unwrap();
        assert_eq!(ux.grading, x.bundle.grading);
        for (a, b) in ux.blocks.iter().flatten().zip(x.bundle.blocks.iter().flatten()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn z2_dpr_ring_is_klein() {
    let lim = Limits::default();
    let z2 = cyclic(2);
    let tw = fusion_ring(&dpr(&z2, 1), 0, &lim).unwrap();
    let un = fusion_ring(&Twist::trivial(&conjugation_action(&z2)), 0, &lim).unwrap();
    assert_eq!(tw.rank, 4);
    assert_eq!(tw.invertible_orders(), vec![1, 2, 2, 2]);
    assert!(based_ring_isomorphic(&tw, &un).is_some());
}

#[test]
fn z3_twisted_rings_differ_from_untwisted() {
    let lim = Limits::default();
    let z3 = cyclic(3);
    let rings: Vec<FusionRing> = (0..3).map(|c| fusion_ring(&dpr(&z3, c), 0, &lim).unwrap()).collect();
    assert_eq!(rings[0].invertible_orders().iter().filter(|&&o| o == 9).count(), 0);
    assert_eq!(rings[1].invertible_orders().iter().filter(|&&o| o == 9).count(), 6);
    assert!(based_ring_isomorphic(&rings[0], &rings[1]).is_none());
    assert!(based_ring_isomorphic(&rings[0], &rings[2]).is_none());
    assert!(based_ring_isomorphic(&rings[1], &rings[2]).is_some());
}

#[test]
fn z4_rings_follow_doubling() {
    let lim = Limits::default();
    let z4 = cyclic(4);
    let rings: Vec<FusionRing> = (0..4).map(|c| fusion_ring(&dpr(&z4, c), 0, &lim).unwrap()).collect();
    let p = based_ring_isomorphic(&rings[0], &rings[2]).expect("classes 0 and 2 agree");
    for i in 0..16 {
        for j in 0..16 {
            for k in 0..16 {
                assert_eq!(rings[0].n[i][j][k], rings[2].n[p[i]][p[j]][p[k]]);
            }
        }
    }
    assert!(based_ring_isomorphic(&rings[0], &rings[1]).is_none());
    assert!(based_ring_isomorphic(&rings[1], &rings[3]).is_some());
}

#[test]
fn cohomologous_twists_give_isomorphic_rings() {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in [cyclic(3), cyclic(4), symmetric(3).unwrap()] {
        let act = conjugation_action(&g);
        let base = dpr(&g, 1);
        let a = ComplexSpec::new(&act, Shape::A);
        let eta = TotalCochain::random(&a, 2, 12, &mut rng);
        let shift = total_differential(&a, &eta);
        let c = |p, q| base_component(&base, p, q).add(shift.component(p, q).unwrap());
        let moved = Twist::new(&act, c(2, 1), c(1, 2), Some(c(0, 3))).unwrap();
        let r1 = fusion_ring(&base, 0, &lim).unwrap();
        let r2 = fusion_ring(&moved, 0, &lim).unwrap();
        assert!(based_ring_isomorphic(&r1, &r2).is_some(), "{}", g.name());
    }
}

fn base_component(t: &Twist, p: usize, q: usize) -> Cochain {
    match (p, q) {
        (2, 1) => t.alpha.clone(),
        (1, 2) => t.beta.clone(),
        _ => t.theta.clone().unwrap(),
    }
}

fn assert_coquasi(act: &GroupAction, t: &Twist) {
    let h = coquasi_bialgebra(t, AssociatorOrientation::ThetaInverse).unwrap();
    assert_eq!(h.dim(), act.group.order() * act.target.order());
    let rep = verify_coquasi_axioms(&h, 1e-9);
    assert!(rep.passes(), "{}: {rep:?}", act.name());
    if t.theta.as_ref().map_or(true, |th| th.is_zero()) {
        assert!(rep.associativity < 1e-12);
    }
}

#[test]
fn coquasi_axioms_hold_on_corpus() {
    for (_, t) in corpus() {
        assert_coquasi(&t.action.clone(), &t);
    }
    let z4 = cyclic(4);
    assert_coquasi(&conjugation_action(&z4), &Twist::trivial(&conjugation_action(&z4)));
}

#[test]
fn uninverted_associator_fails_q2_for_s3() {
    let t = dpr(&symmetric(3).unwrap(), 1);
    let rep = verify_coquasi_axioms(&coquasi_bialgebra(&t, AssociatorOrientation::Theta).unwrap(), 1e-9);
    assert_eq!(rep.counterexample.unwrap().0, "q2");
    assert!(rep.q3 < 1e-9);
}

#[test]
fn z2_dpr_associator_is_minus_one_at_the_nontrivial_triple() {
    let t = dpr(&cyclic(2), 1);
    let h = coquasi_bialgebra(&t, AssociatorOrientation::ThetaInverse).unwrap();
    let n = h.dim();
    let i = 1; // δ_e # 1
    assert!((h.associator[(i * n + i) * n + i] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    assert!(verify_coquasi_axioms(&h, 1e-9).unit < 1e-12);
}

#[test]
fn perturbed_theta_breaks_q3() {
    let t = dpr(&cyclic(3), 1);
    let spec = t.spec().clone();
    let mut theta = t.theta.clone().unwrap();
    let i = spec.encode(&[], &[1, 1, 1]).unwrap();
    theta.values[i] = theta.values[i] + CircleValue::new(1, 5);
    let bad = t.with_theta_unchecked(theta);
    let rep = verify_coquasi_axioms(&coquasi_bialgebra(&bad, AssociatorOrientation::ThetaInverse).unwrap(), 1e-9);
    assert!(!rep.passes());
    assert!(rep.q3 > 1e-3);
    assert_eq!(rep.counterexample.as_ref().unwrap().0, "q3");
}
