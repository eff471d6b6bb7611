//! Equilibrium stress spaces of the fixtures: the left null space of the
//! rigidity matrix. Its dimension is the number of independent self-stresses
//! the reduction has to work with at the first level.

use unirigid::fixtures;
use unirigid::framework::{rigidity_matrix, Framework};
use unirigid::numerics::{numerical_rank, TolerancePolicy};
use unirigid::stress::equilibrium_stress_space;

fn describe(name: &str, fw: &Framework, tol: &TolerancePolicy) {
    let r = rigidity_matrix(fw);
    let rank = numerical_rank(&r, tol).unwrap();
    let basis = equilibrium_stress_space(fw, tol);
    println!(
        "{name}: m = {}, rank R = {rank}, stress space dimension = {}",
        fw.member_count(),
        basis.len()
    );
}

fn main() {
    let tol = TolerancePolicy::default();
    describe("triangle      ", &fixtures::triangle(), &tol);
    describe("square 4-cycle", &fixtures::square_cycle(), &tol);
    describe("complete K4   ", &fixtures::k4_square(), &tol);
    describe("collinear pole", &fixtures::collinear_triple(), &tol);
    describe("ladder        ", &fixtures::ladder(), &tol);
    describe("one pole      ", &fixtures::one_pole(), &tol);
    describe("four poles    ", &fixtures::four_pole(), &tol);
    describe("hidden stress ", &fixtures::hidden_stress(), &tol);

    // the K4 stress written out
    let fw = fixtures::k4_square();
    let basis = equilibrium_stress_space(&fw, &tol);
    let scale = basis[0].get(0);
    let scaled: Vec<f64> = basis[0].values().iter().map(|w| w / scale).collect();
    println!("\nK4 stress, normalized: {scaled:?} (sides then diagonals)");
}
