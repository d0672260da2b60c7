//! Build ℂ^G # K from a DPR twist and check the coquasi-bialgebra axioms.

use equik::cohomology::cocycle_representatives;
use equik::complexes::ComplexSpec;
use equik::fusion::{coquasi_bialgebra, verify_coquasi_axioms, AssociatorOrientation, Twist};
use equik::groups::{conjugation_action, symmetric};
use equik::Limits;

fn main() -> equik::Result<()> {
    let k = symmetric(3)?;
    let rho = conjugation_action(&k);
    let w = cocycle_representatives(&ComplexSpec::single_group(&k), 3, &Limits::default())?.remove(0).components[&(0, 3)].clone();
    let twist = Twist::dpr(&rho, &w)?;
    for orientation in [AssociatorOrientation::ThetaInverse, AssociatorOrientation::Theta] {
        let h = coquasi_bialgebra(&twist, orientation)?;
        let rep = verify_coquasi_axioms(&h, 1e-9);
        println!("{orientation:?}: dim {}, passes {}", h.dim(), rep.passes());
        println!("  q1 {:.1e}  q2 {:.1e}  q3 {:.1e}  assoc {:.1e}", rep.q1, rep.q2, rep.q3, rep.associativity);
        if let Some((axiom, at)) = rep.counterexample {
            println!("  first failure: {axiom} at {at:?}");
        }
    }
    Ok(())
}
