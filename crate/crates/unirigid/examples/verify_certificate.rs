//! Certificates are evidence, not hints: the verifier replays every level
//! and rejects anything that does not hold exactly as supplied. Watch a good
//! certificate pass and two tampered ones fail for different reasons.

use unirigid::certificate::{verify_certificate, Certificate};
use unirigid::fixtures;
use unirigid::numerics::TolerancePolicy;
use unirigid::stress::StressVector;

fn main() {
    let tol = TolerancePolicy::default();
    let fw = fixtures::ladder();

    let good = fixtures::ladder_certificate();
    let verdict = verify_certificate(&fw, &good, &tol);
    println!("genuine certificate accepted: {}", verdict.accepted());
    for (i, level) in verdict.per_level.iter().enumerate() {
        println!(
            "  level {}: rank {}, residual {:.2e}",
            i + 1,
            level.rank,
            level.equilibrium_residual
        );
    }

    // flip the sign of the first level: restricted matrix becomes NSD, and
    // the verifier does not negate on the caller's behalf
    let negated = Certificate::new(vec![
        good.levels[0].scale(-1.0),
        good.levels[1].clone(),
    ]);
    let verdict = verify_certificate(&fw, &negated, &tol);
    println!(
        "negated level 1 rejected: {}",
        verdict.failure.map(|f| f.to_string()).unwrap_or_default()
    );

    // drop the second level: the rank sum falls short of n - d - 1
    let truncated = Certificate::new(vec![good.levels[0].clone()]);
    let verdict = verify_certificate(&fw, &truncated, &tol);
    println!(
        "truncated certificate rejected: {}",
        verdict.failure.map(|f| f.to_string()).unwrap_or_default()
    );

    // a stress that is not in restricted equilibrium at its level
    let shuffled = Certificate::new(vec![
        StressVector::new(vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, -2.0]),
    ]);
    let verdict = verify_certificate(&fw, &shuffled, &tol);
    println!(
        "out-of-order level rejected: {}",
        verdict.failure.map(|f| f.to_string()).unwrap_or_default()
    );
}
