//! The complete graph on a unit square is the textbook one-shot case: a
//! single PSD equilibrium stress of rank n - d - 1 = 1 whose member
//! directions avoid any conic at infinity. One level, done.

use unirigid::certificate::decide_universal;
use unirigid::fixtures;
use unirigid::numerics::TolerancePolicy;
use unirigid::stress::{equilibrium_stress_space, stress_matrix_from_vector};

fn main() -> unirigid::Result<()> {
    let tol = TolerancePolicy::default();
    let fw = fixtures::k4_square();

    let basis = equilibrium_stress_space(&fw, &tol);
    println!("equilibrium stress space dimension: {}", basis.len());
    let om = stress_matrix_from_vector(&fw.graph, &basis[0])?;
    println!("stress matrix:\n{}", om.matrix());
    println!(
        "rank {} = n - d - 1 = {}",
        unirigid::numerical_rank(om.matrix(), &tol)?,
        fw.vertex_count() - 2 - 1
    );

    let verdict = decide_universal(&fw, &fixtures::k4_certificate(), &tol);
    println!("dimensionally rigid: {:?}", verdict.dimensionally_rigid);
    println!("universally rigid:   {:?}", verdict.universally_rigid);

    // the same decomposition works with cable sides and strut diagonals,
    // because the certifying stress respects those signs
    let tensegrity = fixtures::k4_square_tensegrity();
    let verdict = decide_universal(&tensegrity, &fixtures::k4_certificate(), &tol);
    println!(
        "as a cable/strut tensegrity: universally rigid = {:?}",
        verdict.universally_rigid
    );
    Ok(())
}
