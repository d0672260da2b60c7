//! Multiplicative structures, the map φ, and H¹_mult for a few small actions.

use equik::groups::{conjugation_action, cyclic, inversion_action, trivial_action};
use equik::structures::{h1_mult, multiplicative_structures, phi_map};
use equik::Limits;

fn main() -> equik::Result<()> {
    let lim = Limits::default();
    let actions = vec![
        inversion_action(&cyclic(4))?,
        inversion_action(&cyclic(5))?,
        conjugation_action(&cyclic(6)),
        trivial_action(&cyclic(4), &cyclic(6)),
    ];
    for a in &actions {
        let ms = multiplicative_structures(a, &lim)?;
        let (phi, _) = phi_map(a, &lim)?;
        let h1 = h1_mult(a, &lim)?;
        println!("{} acting on {} by {}", a.group.name(), a.target.name(), a.name());
        println!("  MS       {:?}", ms.invariant_factors());
        println!("  ker φ    {:?}   coker φ {:?}", phi.kernel, phi.cokernel);
        println!("  H¹_mult  {:?}", h1.invariant_factors);
    }
    Ok(())
}
