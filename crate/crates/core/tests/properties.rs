use equik::abelian::canonical_factors;
use equik::circle::CircleValue;
use equik::cohomology::{class_of, t_cohomology};
use equik::complexes::{delta_g, delta_k, total_differential, Cochain, ComplexSpec, Shape, TotalCochain};
use equik::exactalg::{determinant, kernel_basis, snf, IntMatrix};
use equik::fusion::{based_ring_isomorphic, FusionLabel, FusionRing};
use equik::groups::{conjugation_action, cyclic, dihedral, inversion_action, symmetric, trivial_action, GroupAction};
use equik::shuffle::shuffles;
use equik::Limits;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn actions() -> Vec<GroupAction> {
    vec![
        conjugation_action(&cyclic(3)),
        conjugation_action(&symmetric(3).unwrap()),
        inversion_action(&cyclic(4)).unwrap(),
        trivial_action(&cyclic(2), &cyclic(3)),
    ]
}

fn shapes() -> Vec<Shape> {
    vec![Shape::Full, Shape::A, Shape::B, Shape::ATrunc(1)]
}

fn circle() -> impl Strategy<Value = CircleValue> {
    (-50i128..50, 1i128..24).prop_map(|(n, d)| CircleValue::new(n, d))
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..7, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn circle_values_form_a_group(a in circle(), b in circle(), c in circle()) {
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a + CircleValue::zero(), a);
        prop_assert!((a - a).is_zero());
        prop_assert_eq!(a.scale(a.order() as i64), CircleValue::zero());
        prop_assert_eq!(a.to_string().parse::<CircleValue>().unwrap(), a);
    }

    #[test]
    fn total_differential_squares_to_zero(ai in 0usize..4, si in 0usize..4, n in 1usize..3, seed in any::<u64>()) {
        let spec = ComplexSpec::new(&actions()[ai], shapes()[si]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = TotalCochain::random(&spec, n, 12, &mut rng);
        prop_assert!(total_differential(&spec, &total_differential(&spec, &x)).is_zero());
    }

    #[test]
    fn horizontal_and_vertical_differentials_commute(ai in 0usize..4, p in 0usize..2, q in 0usize..3, seed in any::<u64>()) {
        let spec = ComplexSpec::new(&actions()[ai], Shape::Full);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Cochain::random(&spec, p, q, 10, &mut rng);
        let gk = delta_g(&spec, &delta_k(&spec, &f).unwrap()).unwrap();
        let kg = delta_k(&spec, &delta_g(&spec, &f).unwrap()).unwrap();
        prop_assert_eq!(gk, kg);
        prop_assert!(delta_g(&spec, &delta_g(&spec, &f).unwrap()).unwrap().is_zero());
        prop_assert!(delta_k(&spec, &delta_k(&spec, &f).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn classes_ignore_coboundaries(ai in 0usize..4, seed in any::<u64>(), pick in any::<u64>()) {
        let lim = Limits::default();
        let spec = ComplexSpec::new(&actions()[ai], Shape::A);
        let pres = t_cohomology(&spec, 3, &lim).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords: Vec<i64> = pres.invariant_factors.iter().enumerate().map(|(i, _)| ((pick >> (4 * i)) & 15) as i64).collect();
        let z = TotalCochain::from_flat(&spec, 3, &pres.cocycle_with_coordinates(&coords));
        let b = total_differential(&spec, &TotalCochain::random(&spec, 2, 9, &mut rng));
        prop_assert!(total_differential(&spec, &z).is_zero());
        let c1 = class_of(&spec, &pres, &z).unwrap();
        let c2 = class_of(&spec, &pres, &z.add(&b)).unwrap();
        prop_assert_eq!(&c1.coordinates, &c2.coordinates);
        let expect: Vec<u64> = coords.iter().zip(&pres.invariant_factors).map(|(c, m)| (*c as u64) % m).collect();
        prop_assert_eq!(c1.coordinates, expect);
    }

    #[test]
    fn shuffle_counts_are_binomial(p in 0usize..6, q in 0usize..6) {
        let s = shuffles(p, q);
        let binom = (1..=p as u64).fold(1u64, |acc, i| acc * (q as u64 + i) / i);
        prop_assert_eq!(s.len() as u64, binom);
        for sh in &s {
            let steps = sh.vertical_steps();
            prop_assert_eq!(steps.len(), p + q);
            prop_assert_eq!(steps.iter().filter(|v| **v).count(), q);
        }
    }

    #[test]
    fn smith_form_is_a_factorization(rows in small_matrix()) {
        let m = IntMatrix::from_rows(&rows);
        let s = snf(&m);
        prop_assert_eq!(s.l.mul(&m).mul(&s.r), s.d.clone());
        prop_assert!(determinant(&s.l).abs() == BigInt::from(1));
        prop_assert!(determinant(&s.r).abs() == BigInt::from(1));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        let ker = kernel_basis(&m);
        prop_assert_eq!(ker.len() + s.rank(), m.cols());
        for v in ker {
            prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn canonical_factors_are_idempotent(moduli in prop::collection::vec(1u64..40, 0..5)) {
        let c = canonical_factors(&moduli);
        prop_assert_eq!(canonical_factors(&c), c.clone());
        prop_assert!(c.iter().all(|&m| m > 1));
        for w in c.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        let order: u64 = moduli.iter().product();
        prop_assert_eq!(c.iter().product::<u64>(), order);
    }

    #[test]
    fn relabeled_group_rings_are_recognized(gi in 0usize..4, seed in any::<u64>()) {
        let g = [cyclic(4), dihedral(3), cyclic(6), symmetric(3).unwrap()][gi].clone();
        let a = FusionRing::group_ring(&g);
        let r = a.rank;
        let mut perm: Vec<usize> = (0..r).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut n = vec![vec![vec![0; r]; r]; r];
        let mut labels = vec![FusionLabel { orbit_representative: String::new(), tag: 0, dim: 1 }; r];
        for i in 0..r {
            labels[perm[i]] = a.labels[i].clone();
            for j in 0..r {
                for k in 0..r {
                    n[perm[i]][perm[j]][perm[k]] = a.n[i][j][k];
                }
            }
        }
        let b = FusionRing::new(labels, n, perm[a.unit]).unwrap();
        let w = based_ring_isomorphic(&a, &b).expect("relabeling is an isomorphism");
        prop_assert_eq!(w[a.unit], b.unit);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    prop_assert_eq!(a.n[i][j][k], b.n[w[i]][w[j]][w[k]]);
                }
            }
        }
    }
}
