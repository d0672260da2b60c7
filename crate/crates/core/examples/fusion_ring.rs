//! Fusion rings of the twisted Drinfeld doubles of Z/4, compared as based rings.

use equik::cohomology::cocycle_representatives;
use equik::complexes::ComplexSpec;
use equik::fusion::{based_ring_isomorphic, fusion_ring, Twist};
use equik::groups::{conjugation_action, cyclic};
use equik::Limits;

fn main() -> equik::Result<()> {
    let lim = Limits::default();
    let k = cyclic(4);
    let rho = conjugation_action(&k);
    let w = cocycle_representatives(&ComplexSpec::single_group(&k), 3, &lim)?.remove(0).components[&(0, 3)].clone();
    let rings = (0..4)
        .map(|c| fusion_ring(&Twist::dpr(&rho, &w.scale(c))?, 0, &lim))
        .collect::<equik::Result<Vec<_>>>()?;
    for (c, r) in rings.iter().enumerate() {
        println!("class {c}: rank {}, unit {}, invertible orders {:?}", r.rank, r.unit, r.invertible_orders());
    }
    for (a, b) in [(0, 1), (0, 2), (1, 3)] {
        match based_ring_isomorphic(&rings[a], &rings[b]) {
            Some(p) => println!("{a} ≅ {b} via {p:?}"),
            None => println!("{a} ≇ {b}"),
        }
    }
    Ok(())
}
