//! The conic at infinity is what separates dimensional from universal
//! rigidity: a nonzero symmetric form vanishing on every member direction
//! licenses an affine flex. In the plane that happens exactly when the
//! members point in at most two projective directions.

use unirigid::certificate::conic_at_infinity;
use unirigid::fixtures;
use unirigid::framework::{distinct_projective_directions, member_directions};
use unirigid::numerics::TolerancePolicy;

fn main() -> unirigid::Result<()> {
    let tol = TolerancePolicy::default();
    for (name, fw) in [
        ("ladder", fixtures::ladder()),
        ("ladder + diagonal", fixtures::ladder_with_diagonal()),
        ("triangle", fixtures::triangle()),
        ("four poles", fixtures::four_pole()),
    ] {
        let dirs = member_directions(&fw, None, &tol);
        let vectors: Vec<_> = dirs.directions.iter().map(|(_, v)| v.clone()).collect();
        let distinct = distinct_projective_directions(&vectors, &tol);
        match conic_at_infinity(&vectors, &tol)? {
            Some(form) => println!(
                "{name}: {distinct} projective directions, conic exists:\n{}",
                form.matrix()
            ),
            None => println!("{name}: {distinct} projective directions, no conic"),
        }
    }
    Ok(())
}
