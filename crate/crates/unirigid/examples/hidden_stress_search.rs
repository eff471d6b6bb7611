//! A framework whose three-dimensional equilibrium stress space hides a
//! single PSD ray: random combinations are indefinite almost surely, so
//! plain sampling must report an inconclusive search (never a refutation).
//! Alternating projections between the PSD cone and the candidate image
//! space recover the ray and complete the certificate.

use unirigid::fixtures;
use unirigid::numerics::{psd_classify, DefiniteKind, TolerancePolicy};
use unirigid::reduction::{run_reduction, ReductionOutcome, SearchMode};
use unirigid::stress::{equilibrium_stress_space, stress_matrix_from_vector, StressVector};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> unirigid::Result<()> {
    let tol = TolerancePolicy::default();
    let fw = fixtures::hidden_stress();
    let basis = equilibrium_stress_space(&fw, &tol);
    println!("equilibrium stress space dimension: {}", basis.len());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..200 {
        let mut w = StressVector::zeros(fw.member_count());
        for b in &basis {
            w = w.add(&b.scale(rng.random_range(-1.0..1.0)));
        }
        let om = stress_matrix_from_vector(&fw.graph, &w)?;
        let class = psd_classify(om.matrix(), &tol)?;
        *counts.entry(format!("{}", class.kind)).or_insert(0usize) += 1;
    }
    println!("200 random stress samples classify as: {counts:?}");

    let sampled = run_reduction(&fw, &SearchMode::random(0), &tol)?;
    match &sampled.outcome {
        ReductionOutcome::Inconclusive { detail, .. } => {
            println!("plain sampling: inconclusive ({detail})")
        }
        other => println!("plain sampling: {other:?}"),
    }

    let refined = run_reduction(
        &fw,
        &SearchMode::RandomizedMaxRank { seed: 0, samples: 64, refine: true },
        &tol,
    )?;
    match &refined.outcome {
        ReductionOutcome::Certificate(_) => println!(
            "with alternating-projection refinement: certificate, ranks {:?}",
            refined.ranks()
        ),
        other => println!("with refinement: {other:?}"),
    }

    // the hidden ray in closed form: the concentric-triangle core stress
    let core = fixtures::hidden_stress_core_ray();
    let om = stress_matrix_from_vector(&fw.graph, &core)?;
    let class = psd_classify(om.matrix(), &tol)?;
    assert_eq!(class.kind, DefiniteKind::Psd);
    println!("core ray: PSD of rank {}", class.rank);
    Ok(())
}
