//! For tensegrities the conic test may use only bars and members that carry
//! nonzero stress in some level. The one-pole tensegrity certifies
//! dimensional rigidity from its pole stress alone, but that stress leaves
//! the cables and strut silent; one extra level with zero restricted energy
//! stresses every member and completes the universal-rigidity argument.

use unirigid::certificate::decide_universal;
use unirigid::fixtures;
use unirigid::numerics::TolerancePolicy;
use unirigid::stress::{is_proper, stress_matrix_from_vector};

fn main() -> unirigid::Result<()> {
    let tol = TolerancePolicy::default();
    let fw = fixtures::one_pole();
    println!(
        "one pole: {} bars, {} cables/struts",
        fw.graph.members().iter().filter(|m| m.kind == unirigid::MemberKind::Bar).count(),
        fw.graph.members().iter().filter(|m| m.kind != unirigid::MemberKind::Bar).count(),
    );

    let dim_only = fixtures::one_pole_certificate_dimensional();
    let verdict = decide_universal(&fw, &dim_only, &tol);
    println!("\npole stress only:");
    println!("  dimensionally rigid: {:?}", verdict.dimensionally_rigid);
    println!("  universally rigid:   {:?}", verdict.universally_rigid);
    println!(
        "  unstressed cables/struts left out of the conic test: {:?}",
        verdict.unstressed_members
    );

    let full = fixtures::one_pole_certificate_universal();
    let w2 = &full.levels[1];
    let om2 = stress_matrix_from_vector(&fw.graph, w2)?;
    println!("\nextra level: proper = {}, values {:?}", is_proper(w2, &fw.graph), w2.values());
    println!("  stress matrix:\n{}", om2.matrix());
    let verdict = decide_universal(&fw, &full, &tol);
    println!("  rank contributed: {}", verdict.per_level[1].rank);
    println!("  dimensionally rigid: {:?}", verdict.dimensionally_rigid);
    println!("  universally rigid:   {:?}", verdict.universally_rigid);
    Ok(())
}
