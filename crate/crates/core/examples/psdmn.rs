//! Pseudomonoid classes modulo equivariant automorphisms.

use equik::groups::{conjugation_action, cyclic, inversion_action};
use equik::structures::psdmn_moduli;
use equik::Limits;

fn main() -> equik::Result<()> {
    let lim = Limits::default();
    for a in [inversion_action(&cyclic(4))?, conjugation_action(&cyclic(4))] {
        let m = psdmn_moduli(&a, &lim)?;
        println!("{} on {}: classes {:?}, {} automorphisms, {} orbits", a.name(), a.target.name(), m.invariant_factors, m.automorphisms, m.orbit_count());
        for o in &m.orbits {
            println!("  {o:?}");
        }
    }
    Ok(())
}
