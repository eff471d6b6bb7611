//! The facial-reduction engine: maintain a basis matrix for the current
//! affine set, find restricted equilibrium stresses whose restricted stress
//! matrix is nonzero PSD, shrink the basis through the kernel, and terminate
//! with a certificate or a refutation.
//!
//! Levels are counted from 1. At level `i` the engine holds a basis matrix
//! `B` with `d + 1` rows for the current affine set; a candidate stress `w`
//! must satisfy the restricted equilibrium condition `P Omega(w) B^t = 0`,
//! and its restricted stress matrix `B Omega(w) B^t` must be nonzero PSD.
//! Accepting `w` replaces `B` by a basis of the part of its row span
//! annihilated by the restricted matrix, dropping exactly `rank` rows.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::framework::{affine_span, Framework};
use crate::numerics::{
    self, kernel_basis, numerical_rank, psd_classify, DefiniteKind, PsdClass, TolerancePolicy,
};
use crate::stress::{is_proper, stress_matrix_from_vector, StressMatrix, StressVector};

/// Row basis of the coordinate space of a universal configuration for the
/// current affine set, kept in reduced row echelon form so that equal row
/// spans produce identical matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMatrix {
    b: DMatrix<f64>,
}

impl BasisMatrix {
    pub fn identity(n: usize) -> Self {
        BasisMatrix {
            b: DMatrix::identity(n, n),
        }
    }

    /// Canonicalize an arbitrary row basis (rows spanning the space).
    pub fn from_rows(rows: DMatrix<f64>, tol: &TolerancePolicy) -> Self {
        BasisMatrix {
            b: numerics::rref(&rows, tol),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.b.nrows()
    }

    /// Affine-span dimension of a universal configuration for this set.
    pub fn affine_dim(&self) -> usize {
        self.b.nrows().saturating_sub(1)
    }
}

/// One accepted level of the reduction.
#[derive(Debug, Clone)]
pub struct LevelRecord {
    pub stress: StressVector,
    pub rank: usize,
    pub psd: PsdClass,
}

/// Snapshot of the reduction after `level` accepted stresses.
#[derive(Debug, Clone)]
pub struct ReductionState {
    pub framework: Framework,
    pub level: usize,
    pub basis: BasisMatrix,
    pub history: Vec<LevelRecord>,
}

/// Start of the iteration: level 0 with the identity basis.
pub fn initial_state(fw: &Framework) -> ReductionState {
    ReductionState {
        framework: fw.clone(),
        level: 0,
        basis: BasisMatrix::identity(fw.vertex_count()),
        history: Vec::new(),
    }
}

/// `B Omega B^t`, symmetrized.
pub fn restricted_stress_matrix(b: &BasisMatrix, om: &StressMatrix) -> Result<DMatrix<f64>> {
    if b.matrix().ncols() != om.n() {
        return Err(Error::DimensionMismatch {
            what: "restricted stress matrix",
            expected: b.matrix().ncols(),
            found: om.n(),
        });
    }
    let raw = b.matrix() * om.matrix() * b.matrix().transpose();
    Ok((&raw + raw.transpose()) * 0.5)
}

/// Noise floor for a restricted form `B Omega B^t`: eigenvalues below this
/// are cancellation residue of the sandwich product, not signal. Scales with
/// the basis and stress magnitudes so the decision survives rescaled inputs.
pub(crate) fn form_zero_floor(b: &BasisMatrix, om_scale: f64, tol: &TolerancePolicy) -> f64 {
    let bn = b.matrix().norm();
    tol.rank_rel_tol * bn * bn * om_scale.max(1.0) + tol.zero_abs_tol
}

/// Classify a restricted form, coercing eigenvalues below `floor` to zero.
pub(crate) fn classify_form(
    form: &DMatrix<f64>,
    floor: f64,
    tol: &TolerancePolicy,
) -> PsdClass {
    let psd = psd_classify(form, tol).expect("restricted forms are symmetric by construction");
    if psd.min_eig.abs().max(psd.max_eig.abs()) < floor {
        PsdClass { kind: DefiniteKind::Zero, rank: 0, ..psd }
    } else {
        psd
    }
}

/// Kernel of a symmetric form from its eigendecomposition, splitting the
/// spectrum with exactly the threshold `classify_form` used for the rank, so
/// `rank + kernel columns` always equals the size.
pub(crate) fn form_kernel(form: &DMatrix<f64>, tol: &TolerancePolicy) -> DMatrix<f64> {
    let (values, vectors) = numerics::symmetric_eigen(form);
    let lam_max = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cut = tol.rank_rel_tol * lam_max;
    let keep: Vec<usize> = (0..values.len())
        .filter(|&i| values[i].abs() <= cut)
        .collect();
    let mut kernel = DMatrix::zeros(form.nrows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        kernel.set_column(c, &vectors.column(i));
    }
    kernel
}

/// Orthonormal basis of `{w : P Omega(w) B^t = 0}`, the stresses in
/// restricted equilibrium with respect to the affine set described by `b`.
pub fn restricted_equilibrium_space(
    fw: &Framework,
    b: &BasisMatrix,
    tol: &TolerancePolicy,
) -> Vec<StressVector> {
    let p = fw.config.matrix();
    let bm = b.matrix();
    let dim = fw.config.dim();
    let db = b.rows();
    let m = fw.member_count();
    // column per member: vec of (p_i - p_j) (b_i - b_j)^t
    let mut a = DMatrix::zeros(dim * db, m);
    for (k, mem) in fw.graph.members().iter().enumerate() {
        let dp = p.column(mem.i) - p.column(mem.j);
        let dbv = bm.column(mem.i) - bm.column(mem.j);
        for r in 0..dim {
            for c in 0..db {
                a[(r * db + c, k)] = dp[r] * dbv[c];
            }
        }
    }
    let basis = kernel_basis(&a, tol).expect("assembled system is finite");
    (0..basis.ncols())
        .map(|c| StressVector::new(basis.column(c).iter().copied().collect()))
        .collect()
}

/// The restricted-equilibrium stresses at a level together with the dimension
/// of their image under `w -> B Omega(w) B^t`. Stresses mapping to zero can
/// never advance the reduction, so decisions are made on the quotient.
#[derive(Debug, Clone)]
pub struct CandidateSpace {
    pub basis: Vec<StressVector>,
    pub quotient_dim: usize,
}

fn restricted_form_columns(
    fw: &Framework,
    b: &BasisMatrix,
    basis: &[StressVector],
) -> DMatrix<f64> {
    let db = b.rows();
    let mut z = DMatrix::zeros(db * db, basis.len());
    for (c, w) in basis.iter().enumerate() {
        let om = stress_matrix_from_vector(&fw.graph, w).expect("basis stress lengths agree");
        let form = restricted_stress_matrix(b, &om).expect("dimensions agree");
        for (idx, v) in form.iter().enumerate() {
            z[(idx, c)] = *v;
        }
    }
    z
}

/// Analyze the candidate space at the state's current level.
pub fn candidate_space(state: &ReductionState, tol: &TolerancePolicy) -> CandidateSpace {
    let basis = restricted_equilibrium_space(&state.framework, &state.basis, tol);
    let quotient_dim = if basis.is_empty() {
        0
    } else {
        let z = restricted_form_columns(&state.framework, &state.basis, &basis);
        // basis stresses have unit norm, so forms below the basis-scaled
        // floor are sandwich-product noise
        let floor = form_zero_floor(&state.basis, 1.0, tol);
        let smax = z.clone().svd(false, false).singular_values.amax();
        if smax < floor {
            0
        } else {
            numerical_rank(&z, tol).expect("form map is finite")
        }
    };
    CandidateSpace { basis, quotient_dim }
}

/// How to look for the next stress.
#[derive(Debug, Clone)]
pub enum SearchMode {
    /// Decide exactly when the candidate space (modulo stresses with zero
    /// restricted matrix) is at most one-dimensional; otherwise give up.
    Exact1d,
    /// Exact decision for candidate spaces of dimension <= 1; otherwise
    /// sample seeded random combinations and keep a PSD candidate of maximal
    /// rank. With `refine` set, failed sampling falls back to alternating
    /// projections between the PSD cone and the candidate image space.
    RandomizedMaxRank {
        seed: u64,
        samples: usize,
        refine: bool,
    },
    /// Consume caller-provided stresses, one per level, validating each.
    UserSupplied(Vec<StressVector>),
}

impl SearchMode {
    pub fn random(seed: u64) -> Self {
        SearchMode::RandomizedMaxRank {
            seed,
            samples: 128,
            refine: false,
        }
    }
}

/// Outcome of one search step.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// An acceptable stress: restricted equilibrium, restricted matrix
    /// nonzero PSD (negated here if it was NSD), proper for tensegrities.
    Found { stress: StressVector, psd: PsdClass },
    /// No acceptable stress exists at this level. Only reported when the
    /// candidate space is zero-dimensional, or one-dimensional with an
    /// indefinite representative.
    ProvablyNone { detail: String },
    /// The search budget ran out without a decision either way.
    SearchFailed { detail: String },
}

fn classify_candidate(
    state: &ReductionState,
    w: &StressVector,
    tol: &TolerancePolicy,
) -> (StressVector, PsdClass) {
    let om = stress_matrix_from_vector(&state.framework.graph, w).expect("member count agrees");
    let form = restricted_stress_matrix(&state.basis, &om).expect("dimensions agree");
    let floor = form_zero_floor(&state.basis, om.matrix().norm(), tol);
    let psd = classify_form(&form, floor, tol);
    if psd.kind == DefiniteKind::Nsd {
        let psd = classify_form(&(-form), floor, tol);
        (w.scale(-1.0), psd)
    } else {
        (w.clone(), psd)
    }
}

fn combine(basis: &[StressVector], coeffs: &[f64]) -> StressVector {
    let mut acc = StressVector::zeros(basis[0].len());
    for (w, &c) in basis.iter().zip(coeffs) {
        acc = acc.add(&w.scale(c));
    }
    acc
}

/// Exact decision on a one-dimensional quotient: the representative whose
/// restricted matrix spans the image, classified with automatic negation.
fn decide_one_dimensional(
    state: &ReductionState,
    space: &CandidateSpace,
    proper_required: bool,
    tol: &TolerancePolicy,
) -> SearchOutcome {
    let z = restricted_form_columns(&state.framework, &state.basis, &space.basis);
    let svd = z.svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let top = svd
        .singular_values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let coeffs: Vec<f64> = v_t.row(top).iter().copied().collect();
    let rep = combine(&space.basis, &coeffs);
    let (candidate, psd) = classify_candidate(state, &rep, tol);
    if psd.kind != DefiniteKind::Psd || psd.rank == 0 {
        return SearchOutcome::ProvablyNone {
            detail: format!(
                "one-dimensional candidate space with {} representative",
                psd.kind
            ),
        };
    }
    if proper_required && !is_proper(&candidate, &state.framework.graph) {
        // properness is a property of the vector, and stresses with zero
        // restricted matrix could still repair the signs; this is a failed
        // search, not a proof of emptiness
        return SearchOutcome::SearchFailed {
            detail: "the PSD orientation of the candidate ray violates cable/strut signs".into(),
        };
    }
    SearchOutcome::Found { stress: candidate, psd }
}

/// Alternating projections between the PSD cone and the image of the
/// candidate space under `w -> B Omega(w) B^t`, mapped back to a stress.
fn refine_candidate(
    state: &ReductionState,
    space: &CandidateSpace,
    rng: &mut ChaCha8Rng,
    tol: &TolerancePolicy,
) -> Option<StressVector> {
    let db = state.basis.rows();
    let z = restricted_form_columns(&state.framework, &state.basis, &space.basis);
    let svd = z.clone().svd(true, false);
    let u = svd.u.expect("svd requested u");
    let smax = svd.singular_values.amax();
    if smax < tol.zero_abs_tol {
        return None;
    }
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol.rank_rel_tol * smax)
        .count();
    // orthonormal basis of the image, in vec coordinates
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let mut uz = DMatrix::zeros(db * db, rank);
    for (c, &i) in order[..rank].iter().enumerate() {
        uz.set_column(c, &u.column(i));
    }
    let start: Vec<f64> = (0..space.basis.len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let mut x = &z * DVector::from_column_slice(&start);
    if x.norm() < tol.zero_abs_tol {
        return None;
    }
    x /= x.norm();
    for _ in 0..300 {
        let m = DMatrix::from_fn(db, db, |r, c| x[c * db + r]);
        let sym = (&m + m.transpose()) * 0.5;
        let (values, vectors) = numerics::symmetric_eigen(&sym);
        let clipped = DMatrix::from_fn(db, db, |r, c| {
            (0..db)
                .map(|k| vectors[(r, k)] * values[k].max(0.0) * vectors[(c, k)])
                .sum()
        });
        let vecd = DVector::from_iterator(db * db, clipped.iter().copied());
        x = &uz * (uz.transpose() * vecd);
        let nx = x.norm();
        if nx < tol.zero_abs_tol {
            return None;
        }
        x /= nx;
    }
    // map the refined matrix back to a stress in the candidate space
    let coeffs = z.svd(true, true).solve(&x, tol.zero_abs_tol).ok()?;
    let coeffs: Vec<f64> = coeffs.iter().copied().collect();
    Some(combine(&space.basis, &coeffs))
}

/// Look for a stress acceptable at the state's current level.
///
/// Returns an error only for rejected user-supplied stresses; search
/// exhaustion is reported in the outcome, distinguishing a provably empty
/// candidate space from a failed search.
pub fn find_next_stress(
    state: &ReductionState,
    mode: &SearchMode,
    tol: &TolerancePolicy,
) -> Result<SearchOutcome> {
    let proper_required = state.framework.graph.is_tensegrity();
    if let SearchMode::UserSupplied(stresses) = mode {
        let Some(w) = stresses.get(state.level) else {
            return Ok(SearchOutcome::SearchFailed {
                detail: format!("no user stress supplied for level {}", state.level + 1),
            });
        };
        return validate_user_stress(state, w, proper_required, tol).map(|psd| {
            SearchOutcome::Found { stress: w.clone(), psd }
        });
    }
    let space = candidate_space(state, tol);
    match space.quotient_dim {
        0 => Ok(SearchOutcome::ProvablyNone {
            detail: "every restricted equilibrium stress has zero restricted matrix".into(),
        }),
        1 => Ok(decide_one_dimensional(state, &space, proper_required, tol)),
        q => match mode {
            SearchMode::Exact1d => Ok(SearchOutcome::SearchFailed {
                detail: format!("candidate space has dimension {q}; exact decision unavailable"),
            }),
            SearchMode::RandomizedMaxRank { seed, samples, refine } => Ok(randomized_search(
                state,
                &space,
                *seed,
                *samples,
                *refine,
                proper_required,
                tol,
            )),
            SearchMode::UserSupplied(_) => unreachable!("handled above"),
        },
    }
}

fn randomized_search(
    state: &ReductionState,
    space: &CandidateSpace,
    seed: u64,
    samples: usize,
    refine: bool,
    proper_required: bool,
    tol: &TolerancePolicy,
) -> SearchOutcome {
    let level_seed = seed ^ (state.level as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(level_seed);
    let k = space.basis.len();
    let mut best: Option<(StressVector, PsdClass)> = None;
    let mut saw_indefinite = false;
    for _ in 0..samples {
        let coeffs: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let w = combine(&space.basis, &coeffs);
        let (candidate, psd) = classify_candidate(state, &w, tol);
        match psd.kind {
            DefiniteKind::Psd if psd.rank > 0 => {
                if proper_required && !is_proper(&candidate, &state.framework.graph) {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, b)| psd.rank > b.rank) {
                    best = Some((candidate, psd));
                }
            }
            DefiniteKind::Indefinite => saw_indefinite = true,
            _ => {}
        }
    }
    if best.is_none() && refine {
        for _ in 0..8 {
            let Some(w) = refine_candidate(state, space, &mut rng, tol) else {
                continue;
            };
            let (candidate, psd) = classify_candidate(state, &w, tol);
            if psd.kind == DefiniteKind::Psd
                && psd.rank > 0
                && (!proper_required || is_proper(&candidate, &state.framework.graph))
            {
                best = Some((candidate, psd));
                break;
            }
        }
    }
    match best {
        Some((stress, psd)) => SearchOutcome::Found { stress, psd },
        None => SearchOutcome::SearchFailed {
            detail: format!(
                "no PSD candidate in {} samples over a {}-dimensional candidate space{}",
                samples,
                space.quotient_dim,
                if saw_indefinite { " (indefinite samples seen)" } else { "" }
            ),
        },
    }
}

fn validate_user_stress(
    state: &ReductionState,
    w: &StressVector,
    proper_required: bool,
    tol: &TolerancePolicy,
) -> Result<PsdClass> {
    let fw = &state.framework;
    if w.len() != fw.member_count() {
        return Err(Error::DimensionMismatch {
            what: "user stress length",
            expected: fw.member_count(),
            found: w.len(),
        });
    }
    let om = stress_matrix_from_vector(&fw.graph, w)?;
    let p = fw.config.matrix();
    let bt = state.basis.matrix().transpose();
    let residual = (p * om.matrix() * &bt).norm();
    let scale = p.norm() * om.matrix().norm() * bt.norm();
    if residual > tol.rank_rel_tol * scale + tol.zero_abs_tol {
        return Err(Error::StressRejected(format!(
            "level {}: restricted equilibrium residual {residual:.3e} exceeds tolerance",
            state.level + 1
        )));
    }
    let form = restricted_stress_matrix(&state.basis, &om)?;
    let floor = form_zero_floor(&state.basis, om.matrix().norm(), tol);
    let psd = classify_form(&form, floor, tol);
    if psd.kind != DefiniteKind::Psd || psd.rank == 0 {
        return Err(Error::StressRejected(format!(
            "level {}: restricted stress matrix is {}, need nonzero PSD",
            state.level + 1,
            psd.kind
        )));
    }
    if proper_required && !is_proper(w, &fw.graph) {
        return Err(Error::StressRejected(format!(
            "level {}: stress violates cable/strut signs",
            state.level + 1
        )));
    }
    Ok(psd)
}

/// Accept `w` and shrink the basis: the new rows span the part of the old
/// row span annihilated by the restricted stress matrix, so exactly
/// `rank` rows disappear.
pub fn update_basis(
    state: &ReductionState,
    w: &StressVector,
    tol: &TolerancePolicy,
) -> Result<ReductionState> {
    let om = stress_matrix_from_vector(&state.framework.graph, w)?;
    let form = restricted_stress_matrix(&state.basis, &om)?;
    let floor = form_zero_floor(&state.basis, om.matrix().norm(), tol);
    let psd = classify_form(&form, floor, tol);
    if psd.kind == DefiniteKind::Zero {
        return Err(Error::StressRejected(
            "restricted stress matrix is zero; nothing to reduce".into(),
        ));
    }
    let kernel = form_kernel(&form, tol);
    let new_rows = kernel.transpose() * state.basis.matrix();
    let basis = BasisMatrix::from_rows(new_rows, tol);
    let mut history = state.history.clone();
    history.push(LevelRecord {
        stress: w.clone(),
        rank: psd.rank,
        psd,
    });
    Ok(ReductionState {
        framework: state.framework.clone(),
        level: state.level + 1,
        basis,
        history,
    })
}

/// Why and where the reduction stopped.
#[derive(Debug, Clone)]
pub enum ReductionOutcome {
    /// The final affine set matches the affine span of the input: the
    /// accumulated stresses certify dimensional rigidity.
    Certificate(Certificate),
    /// No stress exists at a level where the affine set still exceeds the
    /// input span: the framework is not dimensionally rigid, and equivalent
    /// frameworks of this affine span dimension exist.
    MaxAffineDim(usize),
    /// The search gave up without proving emptiness; no verdict.
    Inconclusive {
        affine_dim: usize,
        level: usize,
        detail: String,
    },
}

/// Full result of a reduction run.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub outcome: ReductionOutcome,
    pub final_basis: BasisMatrix,
    pub levels: Vec<LevelRecord>,
    /// Affine-span dimension of the input configuration.
    pub span_dim: usize,
}

impl ReductionResult {
    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.rank).collect()
    }
}

/// Run the iteration until the affine set cannot shrink further.
pub fn run_reduction(
    fw: &Framework,
    mode: &SearchMode,
    tol: &TolerancePolicy,
) -> Result<ReductionResult> {
    tol.validate()?;
    let d = affine_span(&fw.config, tol).dim;
    let mut state = initial_state(fw);
    loop {
        let di = state.basis.affine_dim();
        if di == d {
            let cert = Certificate {
                levels: state.history.iter().map(|l| l.stress.clone()).collect(),
                declared_ranks: Some(state.history.iter().map(|l| l.rank).collect()),
            };
            return Ok(ReductionResult {
                outcome: ReductionOutcome::Certificate(cert),
                final_basis: state.basis,
                levels: state.history,
                span_dim: d,
            });
        }
        if di < d {
            return Ok(ReductionResult {
                outcome: ReductionOutcome::Inconclusive {
                    affine_dim: di,
                    level: state.level,
                    detail: "basis dimension fell below the affine span; tolerance breakdown"
                        .into(),
                },
                final_basis: state.basis,
                levels: state.history,
                span_dim: d,
            });
        }
        match find_next_stress(&state, mode, tol)? {
            SearchOutcome::Found { stress, .. } => {
                state = update_basis(&state, &stress, tol)?;
            }
            SearchOutcome::ProvablyNone { .. } => {
                return Ok(ReductionResult {
                    outcome: ReductionOutcome::MaxAffineDim(di),
                    final_basis: state.basis,
                    levels: state.history,
                    span_dim: d,
                });
            }
            SearchOutcome::SearchFailed { detail } => {
                return Ok(ReductionResult {
                    outcome: ReductionOutcome::Inconclusive {
                        affine_dim: di,
                        level: state.level + 1,
                        detail,
                    },
                    final_basis: state.basis,
                    levels: state.history,
                    span_dim: d,
                });
            }
        }
    }
}
