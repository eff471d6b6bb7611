//! Decide dimensional and universal rigidity of bar and tensegrity
//! frameworks by constructing and verifying iterated PSD stress
//! certificates.
//!
//! A framework is a graph of bars (and optionally cables and struts) on a
//! point configuration. An equilibrium stress whose matrix is PSD pins the
//! framework to an affine family of configurations; when one stress is not
//! enough, the engine iterates — restrict to the affine set the first stress
//! cuts out, look for a stress in *restricted* equilibrium there, and repeat.
//! The framework is dimensionally rigid exactly when the restricted stress
//! matrix ranks accumulated this way add up to `n - d - 1`, and universally
//! rigid when additionally the stressed member directions do not lie on a
//! conic at infinity.
//!
//! The crate is organized around that loop:
//!
//! * [`framework`] — graphs, configurations, the squared-length measurement
//!   map and its rigidity matrix;
//! * [`stress`] — stress vectors/matrices, energy, equilibrium, properness;
//! * [`reduction`] — the iteration: basis matrices, restricted equilibrium
//!   spaces, exact one-dimensional decisions and randomized search;
//! * [`certificate`] — the strict verifier, the conic-at-infinity test, and
//!   projective transforms of certified frameworks;
//! * [`numerics`] — tolerance-aware rank/kernel/eigenvalue primitives;
//! * [`io`] — JSON schemas for frameworks, certificates and reports;
//! * [`fixtures`] — ready-made frameworks used by the examples and tests.
//!
//! Start with the examples: `cargo run --example analyze_ladder`.

pub mod certificate;
pub mod error;
pub mod fixtures;
pub mod framework;
pub mod io;
pub mod numerics;
pub mod reduction;
pub mod stress;

pub use certificate::{
    conic_at_infinity, decide_universal, projective_transform, verify_certificate, Certificate,
    ConicForm, ProjectiveMap, TriState, Verdict,
};
pub use error::{Error, Result};
pub use framework::{
    affine_span, diagonal_combination, member_directions, rigidity_map, rigidity_matrix,
    Configuration, Framework, Graph, Member, MemberKind, SpanInfo,
};
pub use numerics::{
    homogeneous_solution_space, kernel_basis, numerical_rank, psd_classify, DefiniteKind,
    PsdClass, TolerancePolicy,
};
pub use reduction::{
    find_next_stress, initial_state, restricted_equilibrium_space, restricted_stress_matrix,
    run_reduction, update_basis, BasisMatrix, ReductionOutcome, ReductionResult, ReductionState,
    SearchMode, SearchOutcome,
};
pub use stress::{
    equilibrium_stress_space, is_equilibrium, is_proper, stress_energy,
    stress_matrix_from_vector, StressMatrix, StressVector,
};
