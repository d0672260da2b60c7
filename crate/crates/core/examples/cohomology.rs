//! H³ of the total complex for the dihedral groups Z/n ⋊ Z/2.

use equik::cohomology::{t_cohomology, invariant_cohomology};
use equik::complexes::{ComplexSpec, Shape};
use equik::groups::{cyclic, inversion_action};
use equik::Limits;

fn main() -> equik::Result<()> {
    let lim = Limits::default();
    for n in 3..=6 {
        let rho = inversion_action(&cyclic(n))?;
        for shape in [Shape::Full, Shape::A, Shape::B] {
            let h = t_cohomology(&ComplexSpec::new(&rho, shape), 3, &lim)?;
            println!("Z/{n} ⋊ Z/2  {:>4}  H³ = {:?}", shape.to_string(), h.invariant_factors);
        }
        println!("             inv   H³ = {:?}", invariant_cohomology(&rho, 3, &lim)?.invariant_factors);
    }
    Ok(())
}
