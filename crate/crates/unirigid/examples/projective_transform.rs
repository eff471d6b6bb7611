//! Dimensional rigidity is projectively invariant; universal rigidity is
//! not. Send the straight ladder through a projective map that makes the
//! poles converge: the transformed certificate still verifies with the same
//! ranks, and the image framework even becomes universally rigid because
//! the map breaks the two-direction degeneracy. Crossing the exceptional
//! line swaps cables with struts, shown on the square tensegrity.

use unirigid::certificate::{decide_universal, projective_transform, verify_certificate};
use unirigid::fixtures;
use unirigid::framework::{distinct_projective_directions, member_directions};
use unirigid::numerics::TolerancePolicy;

fn main() -> unirigid::Result<()> {
    let tol = TolerancePolicy::default();
    let fw = fixtures::ladder();
    let cert = fixtures::ladder_certificate();

    let before = decide_universal(&fw, &cert, &tol);
    println!(
        "straight ladder: dimensionally {:?}, universally {:?}",
        before.dimensionally_rigid, before.universally_rigid
    );

    let (orchard, orchard_cert) = projective_transform(&fw, &cert, &fixtures::orchard_map(), &tol)?;
    let verdict = verify_certificate(&orchard, &orchard_cert, &tol);
    println!(
        "orchard image: certificate accepted = {}, ranks {:?}",
        verdict.accepted(),
        verdict.per_level.iter().map(|l| l.rank).collect::<Vec<_>>()
    );
    let dirs = member_directions(&orchard, None, &tol);
    let vectors: Vec<_> = dirs.directions.iter().map(|(_, v)| v.clone()).collect();
    println!(
        "member directions: 2 before, {} after the map",
        distinct_projective_directions(&vectors, &tol)
    );
    let after = decide_universal(&orchard, &orchard_cert, &tol);
    println!(
        "orchard image: dimensionally {:?}, universally {:?}",
        after.dimensionally_rigid, after.universally_rigid
    );

    // a map whose exceptional line passes between the square's vertices
    let tenseg = fixtures::k4_square_tensegrity();
    let map = unirigid::ProjectiveMap::new(nalgebra::DMatrix::from_row_slice(
        3,
        3,
        &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, -0.5],
    ))?;
    let (flipped, flipped_cert) = projective_transform(&tenseg, &fixtures::k4_certificate(), &map, &tol)?;
    println!("\nsquare tensegrity across the line x = 1/2:");
    for (a, b) in tenseg.graph.members().iter().zip(flipped.graph.members()) {
        if a.kind != b.kind {
            println!("  member ({}, {}): {:?} -> {:?}", a.i + 1, a.j + 1, a.kind, b.kind);
        }
    }
    let verdict = decide_universal(&flipped, &flipped_cert, &tol);
    println!(
        "  transformed certificate: accepted = {}, universally {:?}",
        verdict.accepted(),
        verdict.universally_rigid
    );
    Ok(())
}
