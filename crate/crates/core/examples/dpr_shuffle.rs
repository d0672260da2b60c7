//! The DPR cocycle of a class in H³(K,T), its shuffle description, and its image in MS.

use equik::cohomology::cocycle_representatives;
use equik::complexes::{total_differential, ComplexSpec, Shape};
use equik::groups::{conjugation_action, cyclic};
use equik::shuffle::{dpr_cocycle, tau1_dual};
use equik::structures::mult_class_of_dpr;
use equik::Limits;

fn main() -> equik::Result<()> {
    let lim = Limits::default();
    for n in 2..=6 {
        let k = cyclic(n);
        let rho = conjugation_action(&k);
        let bar = ComplexSpec::single_group(&k);
        let w = cocycle_representatives(&bar, 3, &lim)?.remove(0).components[&(0, 3)].clone();
        let spec = ComplexSpec::new(&rho, Shape::A);
        let d = dpr_cocycle(&spec, &w)?;
        assert_eq!(d, tau1_dual(&spec, &w)?);
        assert!(total_differential(&spec, &d).is_zero());
        println!("Z/{n}: generator ↦ {:?} in MS", mult_class_of_dpr(&rho, &w, &lim)?);
    }
    Ok(())
}
