//! Step through the reduction on the four-pole framework level by level:
//! three iterations with restricted stress matrix ranks 4, 4 and 1. The
//! second level stresses every horizontal member, yet a third level on the
//! pole long members is still needed before the affine set shrinks to the
//! plane.

use unirigid::fixtures;
use unirigid::numerics::TolerancePolicy;
use unirigid::reduction::{
    candidate_space, find_next_stress, initial_state, update_basis, SearchMode, SearchOutcome,
};

fn main() -> unirigid::Result<()> {
    let tol = TolerancePolicy::default();
    let fw = fixtures::four_pole();
    let span = unirigid::affine_span(&fw.config, &tol).dim;
    println!(
        "four poles: n = {}, m = {}, d = {span}, target rank sum {}",
        fw.vertex_count(),
        fw.member_count(),
        fw.vertex_count() - span - 1
    );

    let mut state = initial_state(&fw);
    loop {
        let di = state.basis.affine_dim();
        if di == span {
            println!("affine set dimension reached d = {span}; done");
            break;
        }
        let space = candidate_space(&state, &tol);
        println!(
            "\nlevel {}: basis rows {}, candidate space {} (quotient {})",
            state.level + 1,
            state.basis.rows(),
            space.basis.len(),
            space.quotient_dim
        );
        match find_next_stress(&state, &SearchMode::random(0), &tol)? {
            SearchOutcome::Found { stress, psd } => {
                println!(
                    "  accepted stress with restricted matrix rank {} (eigenvalues in [{:.3}, {:.3}])",
                    psd.rank, psd.min_eig, psd.max_eig
                );
                state = update_basis(&state, &stress, &tol)?;
            }
            other => {
                println!("  stopped: {other:?}");
                break;
            }
        }
    }
    println!(
        "\nranks: {:?}",
        state.history.iter().map(|l| l.rank).collect::<Vec<_>>()
    );

    // the closed-form last level: positive on the long members of the outer
    // poles, negative on the long members of the inner ones
    let w3 = fixtures::four_pole_final_level_stress();
    println!(
        "closed-form final level on the pole long members: {:?}",
        w3.values().iter().filter(|w| **w != 0.0).collect::<Vec<_>>()
    );
    Ok(())
}
