//! Run the full reduction on the ladder: two collinear triangles joined by
//! three parallel rungs. Two levels of PSD stress accumulate rank
//! 2 + 1 = n - d - 1, proving dimensional rigidity, but all members point in
//! only two directions, so the framework still flexes affinely in the plane.

use unirigid::certificate::decide_universal;
use unirigid::fixtures;
use unirigid::numerics::TolerancePolicy;
use unirigid::reduction::{run_reduction, ReductionOutcome, SearchMode};

fn main() -> unirigid::Result<()> {
    let tol = TolerancePolicy::default();
    let fw = fixtures::ladder();
    println!(
        "ladder: {} vertices, {} members, affine span {}",
        fw.vertex_count(),
        fw.member_count(),
        unirigid::affine_span(&fw.config, &tol).dim
    );

    let result = run_reduction(&fw, &SearchMode::random(0), &tol)?;
    println!("level ranks: {:?}", result.ranks());
    println!(
        "rank sum {} vs n - d - 1 = {}",
        result.ranks().iter().sum::<usize>(),
        fw.vertex_count() - result.span_dim - 1
    );

    let ReductionOutcome::Certificate(cert) = &result.outcome else {
        panic!("the ladder should certify");
    };
    let verdict = decide_universal(&fw, cert, &tol);
    println!("dimensionally rigid: {:?}", verdict.dimensionally_rigid);
    println!("universally rigid:   {:?}", verdict.universally_rigid);
    if let Some(conic) = &verdict.conic {
        println!("conic at infinity:\n{}", conic.matrix());
    }

    // one extra bar breaks the conic and the same stresses certify more
    let strengthened = fixtures::ladder_with_diagonal();
    let verdict = decide_universal(
        &strengthened,
        &fixtures::ladder_with_diagonal_certificate(),
        &tol,
    );
    println!(
        "with one extra diagonal bar: universally rigid = {:?}",
        verdict.universally_rigid
    );
    Ok(())
}
