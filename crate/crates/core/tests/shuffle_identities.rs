use equik::cohomology::{class_of, cocycle_representatives, pullback_cochain, t_cohomology};
use equik::complexes::{delta_k, total_differential, Cochain, ComplexSpec, Shape};
use equik::groups::{conjugation_action, cyclic, inversion_action, semidirect_product, symmetric, FiniteGroup};
use equik::shuffle::{bar_to_total, dpr_cocycle, tau1_dual, tau_commutes, tau_dual};
use equik::Limits;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_groups() -> Vec<FiniteGroup> {
    vec![cyclic(2), cyclic(3), cyclic(4), symmetric(3).unwrap()]
}

#[test]
fn tau_is_a_chain_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in small_groups() {
        let spec = ComplexSpec::new(&conjugation_action(&k), Shape::Full);
        let bar = ComplexSpec::single_group(&k);
        for n in 1..=3 {
            let w = Cochain::random(&bar, 0, n, 12, &mut rng);
            assert!(tau_commutes(&spec, &w).unwrap(), "{} degree {n}", k.name());
        }
    }
}

#[test]
fn comparison_map_is_a_chain_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let actions = vec![
        conjugation_action(&symmetric(3).unwrap()),
        inversion_action(&cyclic(3)).unwrap(),
        inversion_action(&cyclic(4)).unwrap(),
    ];
    for rho in actions {
        let spec = ComplexSpec::new(&rho, Shape::Full);
        let sdp = semidirect_product(&rho);
        let bar = ComplexSpec::single_group(&sdp.group);
        for n in 1..=2 {
            let f = Cochain::random(&bar, 0, n, 6, &mut rng);
            let lhs = bar_to_total(&spec, &sdp, &delta_k(&bar, &f).unwrap()).unwrap();
            let rhs = total_differential(&spec, &bar_to_total(&spec, &sdp, &f).unwrap());
            assert_eq!(lhs, rhs, "{} degree {n}", rho.name());
        }
    }
}

#[test]
fn tau_dual_is_mu_pullback_through_comparison() {
    let lim = Limits::default();
    for k in small_groups() {
        let rho = conjugation_action(&k);
        let spec = ComplexSpec::new(&rho, Shape::Full);
        let sdp = semidirect_product(&rho);
        let mu = sdp.mu.clone().unwrap();
        let bar = ComplexSpec::single_group(&k);
        for n in 2..=3 {
            let pres = t_cohomology(&spec, n, &lim).unwrap();
            for w in cocycle_representatives(&bar, n, &lim).unwrap() {
                let w = w.components[&(0, n)].clone();
                let t = tau_dual(&spec, &w).unwrap();
                let m = bar_to_total(&spec, &sdp, &pullback_cochain(&mu, &w)).unwrap();
                assert_eq!(class_of(&spec, &pres, &t).unwrap(), class_of(&spec, &pres, &m).unwrap());
                // ι_G and ι_K restrictions recover w
                assert_eq!(t.components[&(n, 0)].values, w.values);
                assert_eq!(t.components[&(0, n)].values, w.values);
            }
        }
    }
}

#[test]
fn dpr_equals_tau1_and_is_closed() {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for g in small_groups() {
        let spec = ComplexSpec::new(&conjugation_action(&g), Shape::A);
        let bar = ComplexSpec::single_group(&g);
        let mut ws: Vec<Cochain> =
            cocycle_representatives(&bar, 3, &lim).unwrap().into_iter().map(|w| w.components[&(0, 3)].clone()).collect();
        // a coboundary plus a representative is still a cocycle
        let b = delta_k(&bar, &Cochain::random(&bar, 0, 2, 5, &mut rng)).unwrap();
        ws.push(ws[0].add(&b));
        for w in ws {
            let d = dpr_cocycle(&spec, &w).unwrap();
            assert_eq!(d, tau1_dual(&spec, &w).unwrap());
            assert!(total_differential(&spec, &d).is_zero());
        }
    }
}

#[test]
fn dpr_rejects_non_cocycles() {
    let g = cyclic(3);
    let spec = ComplexSpec::new(&conjugation_action(&g), Shape::A);
    let bar = ComplexSpec::single_group(&g);
    let w = Cochain::random(&bar, 0, 3, 7, &mut ChaCha8Rng::seed_from_u64(1));
    if !delta_k(&bar, &w).unwrap().is_zero() {
        assert!(dpr_cocycle(&spec, &w).is_err());
    }
}
