#![allow(dead_code)]

use equik::circle::CircleValue;
use equik::cohomology::cocycle_representatives;
use equik::complexes::{Cochain, ComplexSpec};
use equik::fusion::{e, FusionLabel, FusionRing, Twist};
use equik::groups::{conjugation_action, cyclic, symmetric, trivial_action, FiniteGroup};
use equik::Limits;
use num_complex::Complex64;

pub fn generator(g: &FiniteGroup) -> Cochain {
    let bar = ComplexSpec::single_group(g);
    cocycle_representatives(&bar, 3, &Limits::default()).unwrap().remove(0).components[&(0, 3)].clone()
}

pub fn dpr(g: &FiniteGroup, class: i64) -> Twist {
    Twist::dpr(&conjugation_action(g), &generator(g).scale(class)).unwrap()
}

pub fn corpus() -> Vec<(String, Twist)> {
    let mut out = vec![("trivial Z/2 on Z/3".to_string(), Twist::trivial(&trivial_action(&cyclic(2), &cyclic(3))))];
    for g in [cyclic(2), cyclic(3), cyclic(4), symmetric(3).unwrap()] {
        out.push((format!("DPR {}", g.name()), dpr(&g, 1)));
    }
    out
}

/// Irreducible characters of a centralizer, computed without any matrix splitting:
/// cyclic groups from a generator, S₃ from element orders.
pub fn centralizer_characters(g: &FiniteGroup, c: &[usize]) -> Vec<Vec<Complex64>> {
    let n = c.len();
    if let Some(&t) = c.iter().find(|&&x| g.element_order(x) == n) {
        let mut power = vec![0usize; g.order()];
        let mut cur = g.identity();
        for m in 0..n {
            power[cur] = m;
            cur = g.mul(cur, t);
        }
        return (0..n)
            .map(|j| (0..g.order()).map(|x| e(CircleValue::new((j * power[x]) as i128, n as i128))).collect())
            .collect();
    }
    assert_eq!(n, 6, "only cyclic centralizers and S3 are supported");
    let by_order = |vals: [f64; 3]| -> Vec<Complex64> {
        (0..g.order())
            .map(|x| match g.element_order(x) {
                1 => vals[0],
                2 => vals[1],
                _ => vals[2],
            })
            .map(|v| Complex64::new(v, 0.0))
            .collect()
    };
    vec![by_order([1.0, 1.0, 1.0]), by_order([1.0, -1.0, 1.0]), by_order([2.0, 0.0, -1.0])]
}

/// Fusion ring of the untwisted double from pairs (class, centralizer irrep).
pub fn character_oracle(g: &FiniteGroup) -> FusionRing {
    let comm = |a: usize, b: usize| g.mul(a, b) == g.mul(b, a);
    let mut seen = vec![false; g.order()];
    // characters Φ(h, k) on commuting pairs
    let mut objects: Vec<(Vec<Vec<Complex64>>, u64, String)> = Vec::new();
    for a in g.elements() {
        if seen[a] {
            continue;
        }
        let class: Vec<usize> = g.elements().map(|r| g.conj(r, a)).collect();
        for &x in &class {
            seen[x] = true;
        }
        let mut class_set = class.clone();
        class_set.sort();
        class_set.dedup();
        let cent: Vec<usize> = g.elements().filter(|&h| comm(h, a)).collect();
        for chi in centralizer_characters(g, &cent) {
            let mut phi = vec![vec![Complex64::new(0.0, 0.0); g.order()]; g.order()];
            for &k in &class_set {
                let r = g.elements().find(|&r| g.conj(r, a) == k).unwrap();
                for h in g.elements().filter(|&h| comm(h, k)) {
                    phi[h][k] = chi[g.conj(g.inv(r), h)];
                }
            }
            let dim = (chi[g.identity()].re.round() as u64) * class_set.len() as u64;
            objects.push((phi, dim, g.label(a).to_string()));
        }
    }
    let r = objects.len();
    let mut n = vec![vec![vec![0u64; r]; r]; r];
    for i in 0..r {
        for j in 0..r {
            let mut t = vec![vec![Complex64::new(0.0, 0.0); g.order()]; g.order()];
            for h in g.elements() {
                for x in g.elements().filter(|&x| comm(h, x)) {
                    for y in g.elements().filter(|&y| comm(h, y)) {
                        t[h][g.mul(x, y)] += objects[i].0[h][x] * objects[j].0[h][y];
                    }
                }
            }
            for (l, z) in objects.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for h in g.elements() {
                    for k in g.elements() {
                        acc += t[h][k] * z.0[h][k].conj();
                    }
                }
                let v = acc.re / g.order() as f64;
                assert!((v - v.round()).abs() < 1e-9 && acc.im.abs() < 1e-6);
                n[i][j][l] = v.round() as u64;
            }
        }
    }
    let unit = objects.iter().position(|o| o.2 == g.label(g.identity()) && o.1 == 1).unwrap();
    let labels = objects.iter().map(|o| FusionLabel { orbit_representative: o.2.clone(), tag: 0, dim: o.1 }).collect();
    FusionRing::new(labels, n, unit).unwrap()
}
