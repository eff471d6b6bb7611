//! Certificates and their strict verifier, the conic-at-infinity test that
//! separates dimensional from universal rigidity, and projective transforms
//! of frameworks and certificates.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{
    affine_span, member_directions, Configuration, Framework, MemberKind,
};
use crate::numerics::{
    kernel_basis, DefiniteKind, PsdClass, TolerancePolicy,
};
use crate::reduction::{restricted_stress_matrix, BasisMatrix};
use crate::stress::{is_proper, stress_matrix_from_vector, StressVector};

/// An ordered list of stress vectors, one per level, optionally annotated
/// with the ranks the producer claims for their restricted stress matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub levels: Vec<StressVector>,
    pub declared_ranks: Option<Vec<usize>>,
}

impl Certificate {
    pub fn new(levels: Vec<StressVector>) -> Self {
        Certificate { levels, declared_ranks: None }
    }

    pub fn empty() -> Self {
        Certificate { levels: Vec::new(), declared_ranks: None }
    }
}

/// Nonzero symmetric form vanishing on every tested direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicForm {
    a: DMatrix<f64>,
}

impl ConicForm {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }
}

/// Three-valued verdict component: a refutation is a claim, and a failed
/// search is not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Inconclusive,
}

/// Evidence recorded for one certificate level during verification.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub psd: PsdClass,
    pub rank: usize,
    pub equilibrium_residual: f64,
    pub proper: bool,
    /// The restricted stress matrix `B Omega B^t` checked at this level.
    pub restricted: DMatrix<f64>,
}

/// Which condition broke during verification.
#[derive(Debug, Clone, PartialEq)]
pub enum VerificationFailure {
    Equilibrium { level: usize, residual: f64 },
    NotPsd { level: usize, kind: DefiniteKind },
    ZeroBeforeFinalLevel { level: usize },
    Improper { level: usize },
    RankSum { got: usize, want: usize },
    DeclaredRankMismatch { level: usize, declared: usize, got: usize },
    StressLength { level: usize },
}

impl std::fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Equilibrium { level, residual } => {
                write!(f, "restricted equilibrium violated at level {level} (residual {residual:.3e})")
            }
            Self::NotPsd { level, kind } => write!(f, "{kind} at level {level}"),
            Self::ZeroBeforeFinalLevel { level } => {
                write!(f, "zero restricted stress matrix at non-final level {level}")
            }
            Self::Improper { level } => write!(f, "improper stress at level {level}"),
            Self::RankSum { got, want } => write!(f, "rank sum {got}, need {want}"),
            Self::DeclaredRankMismatch { level, declared, got } => {
                write!(f, "declared rank {declared} at level {level}, recomputed {got}")
            }
            Self::StressLength { level } => write!(f, "stress length mismatch at level {level}"),
        }
    }
}

/// Structured decision with per-level evidence.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub dimensionally_rigid: TriState,
    pub universally_rigid: TriState,
    pub per_level: Vec<LevelReport>,
    pub rank_sum: usize,
    pub conic: Option<ConicForm>,
    pub failure: Option<VerificationFailure>,
    /// Cable/strut members that never carry nonzero stress in any level
    /// (excluded from the conic test for tensegrities).
    pub unstressed_members: Vec<usize>,
}

impl Verdict {
    fn rejected(failure: VerificationFailure, per_level: Vec<LevelReport>, rank_sum: usize) -> Self {
        Verdict {
            dimensionally_rigid: TriState::Inconclusive,
            universally_rigid: TriState::Inconclusive,
            per_level,
            rank_sum,
            conic: None,
            failure: Some(failure),
            unstressed_members: Vec::new(),
        }
    }

    pub fn accepted(&self) -> bool {
        self.failure.is_none()
    }
}

/// Replay the reduction with the supplied stresses and accept only if every
/// level passes and the ranks add up to `n - d - 1`.
///
/// The verifier is strict: NSD matrices are not negated and an indefinite or
/// early-zero level rejects the certificate. A zero restricted stress matrix
/// is tolerated only at the final level, where it adds nothing to the rank
/// sum but may stress additional members (the tensegrity route to the conic
/// test). A rejected certificate refutes nothing; both verdict components
/// come back inconclusive along with the failed condition.
pub fn verify_certificate(fw: &Framework, cert: &Certificate, tol: &TolerancePolicy) -> Verdict {
    let n = fw.vertex_count();
    let d = affine_span(&fw.config, tol).dim;
    let want = n - d - 1;
    let proper_required = fw.graph.is_tensegrity();
    let p = fw.config.matrix();
    let mut basis = BasisMatrix::identity(n);
    let mut per_level = Vec::new();
    let mut rank_sum = 0usize;
    for (idx, w) in cert.levels.iter().enumerate() {
        let level = idx + 1;
        if w.len() != fw.member_count() {
            return Verdict::rejected(VerificationFailure::StressLength { level }, per_level, rank_sum);
        }
        let om = stress_matrix_from_vector(&fw.graph, w).expect("length checked");
        let bt = basis.matrix().transpose();
        let residual = (p * om.matrix() * &bt).norm();
        let scale = p.norm() * om.matrix().norm() * bt.norm();
        if residual > tol.rank_rel_tol * scale + tol.zero_abs_tol {
            return Verdict::rejected(
                VerificationFailure::Equilibrium { level, residual },
                per_level,
                rank_sum,
            );
        }
        let proper = !proper_required || is_proper(w, &fw.graph);
        if !proper {
            return Verdict::rejected(VerificationFailure::Improper { level }, per_level, rank_sum);
        }
        let form = restricted_stress_matrix(&basis, &om).expect("dimensions agree");
        let floor = crate::reduction::form_zero_floor(&basis, om.matrix().norm(), tol);
        let psd = crate::reduction::classify_form(&form, floor, tol);
        match psd.kind {
            DefiniteKind::Psd => {
                rank_sum += psd.rank;
                let kernel = crate::reduction::form_kernel(&form, tol);
                per_level.push(LevelReport {
                    psd,
                    rank: psd.rank,
                    equilibrium_residual: residual,
                    proper,
                    restricted: form,
                });
                basis = BasisMatrix::from_rows(kernel.transpose() * basis.matrix(), tol);
            }
            DefiniteKind::Zero => {
                if idx + 1 != cert.levels.len() {
                    return Verdict::rejected(
                        VerificationFailure::ZeroBeforeFinalLevel { level },
                        per_level,
                        rank_sum,
                    );
                }
                per_level.push(LevelReport {
                    psd,
                    rank: 0,
                    equilibrium_residual: residual,
                    proper,
                    restricted: form,
                });
            }
            kind => {
                return Verdict::rejected(VerificationFailure::NotPsd { level, kind }, per_level, rank_sum);
            }
        }
        if let Some(declared) = cert.declared_ranks.as_ref().and_then(|r| r.get(idx)) {
            let got = per_level.last().unwrap().rank;
            if *declared != got {
                return Verdict::rejected(
                    VerificationFailure::DeclaredRankMismatch { level, declared: *declared, got },
                    per_level,
                    rank_sum,
                );
            }
        }
    }
    if rank_sum != want {
        return Verdict::rejected(
            VerificationFailure::RankSum { got: rank_sum, want },
            per_level,
            rank_sum,
        );
    }
    Verdict {
        dimensionally_rigid: TriState::Yes,
        universally_rigid: TriState::Inconclusive,
        per_level,
        rank_sum,
        conic: None,
        failure: None,
        unstressed_members: Vec::new(),
    }
}

/// Solve `v^t A v = 0` over symmetric `d x d` matrices `A` for the given
/// nonzero directions. Returns a normalized nonzero solution when the
/// homogeneous system has one, `None` otherwise.
pub fn conic_at_infinity(
    directions: &[DVector<f64>],
    tol: &TolerancePolicy,
) -> Result<Option<ConicForm>> {
    let d = directions.first().map(|v| v.len()).unwrap_or(0);
    if d == 0 {
        return Err(Error::InvalidConfiguration(
            "conic test needs directions of dimension >= 1".into(),
        ));
    }
    let mut unit = Vec::with_capacity(directions.len());
    for v in directions {
        let norm = v.norm();
        if norm <= tol.zero_abs_tol || v.len() != d {
            return Err(Error::InvalidConfiguration(
                "conic test directions must be nonzero and of equal dimension".into(),
            ));
        }
        unit.push(v / norm);
    }
    // unknowns: upper triangle of A, off-diagonal entries doubled in the row
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let mut sys = DMatrix::zeros(unit.len(), pairs.len());
    for (r, v) in unit.iter().enumerate() {
        for (c, &(i, j)) in pairs.iter().enumerate() {
            sys[(r, c)] = v[i] * v[j] * if i == j { 1.0 } else { 2.0 };
        }
    }
    let null = kernel_basis(&sys, tol)?;
    if null.ncols() == 0 {
        return Ok(None);
    }
    let coeffs = null.column(0);
    let mut a = DMatrix::zeros(d, d);
    for (c, &(i, j)) in pairs.iter().enumerate() {
        a[(i, j)] = coeffs[c];
        a[(j, i)] = coeffs[c];
    }
    // normalize: largest entry magnitude 1, first nonzero entry positive
    let max_abs = a.amax();
    a /= max_abs;
    if let Some(first) = a.iter().find(|x| x.abs() > tol.zero_abs_tol) {
        if *first < 0.0 {
            a = -a;
        }
    }
    // directions are unit vectors here, so the residual bound is relative
    // to the form alone
    let residual = unit
        .iter()
        .map(|v| (v.transpose() * &a * v)[(0, 0)].abs())
        .fold(0.0f64, f64::max);
    if residual > tol.rank_rel_tol * a.norm() {
        return Ok(None);
    }
    Ok(Some(ConicForm { a }))
}

/// Members whose directions enter the conic test: all of them for a bar
/// framework; bars plus cables/struts carrying nonzero stress in some level
/// for a tensegrity. Also reports the cable/strut members left unstressed.
fn conic_member_set(fw: &Framework, cert: &Certificate, tol: &TolerancePolicy) -> (Vec<usize>, Vec<usize>) {
    let mut included = Vec::new();
    let mut unstressed = Vec::new();
    for (k, m) in fw.graph.members().iter().enumerate() {
        if m.kind == MemberKind::Bar {
            included.push(k);
            continue;
        }
        let stressed = cert.levels.iter().any(|w| {
            k < w.len() && w.get(k).abs() > tol.zero_abs_tol * w.norm_inf().max(1.0)
        });
        if stressed {
            included.push(k);
        } else {
            unstressed.push(k);
        }
    }
    (included, unstressed)
}

/// Verify the certificate and, if it holds, decide universal rigidity via
/// the conic test over the stressed member directions.
pub fn decide_universal(fw: &Framework, cert: &Certificate, tol: &TolerancePolicy) -> Verdict {
    let mut verdict = verify_certificate(fw, cert, tol);
    if !verdict.accepted() {
        return verdict;
    }
    let (included, unstressed) = conic_member_set(fw, cert, tol);
    verdict.unstressed_members = unstressed;
    let dirs = member_directions(fw, Some(&included), tol);
    let vectors: Vec<DVector<f64>> = dirs.directions.iter().map(|(_, v)| v.clone()).collect();
    if vectors.is_empty() || vectors[0].is_empty() {
        // no usable directions: affine flexes cannot be excluded
        verdict.universally_rigid = TriState::No;
        return verdict;
    }
    match conic_at_infinity(&vectors, tol).expect("directions are nonzero") {
        Some(form) => {
            verdict.conic = Some(form);
            verdict.universally_rigid = TriState::No;
        }
        None => {
            verdict.universally_rigid = TriState::Yes;
        }
    }
    verdict
}

/// Nonsingular projective transform of `R^d`, stored as its
/// `(d+1) x (d+1)` homogeneous matrix `[[A, b], [c^t, delta]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMap {
    t: DMatrix<f64>,
}

impl ProjectiveMap {
    pub fn new(t: DMatrix<f64>) -> Result<Self> {
        if t.nrows() != t.ncols() || t.nrows() < 2 {
            return Err(Error::InvalidProjectiveMap(format!(
                "matrix must be square of size (d+1) >= 2, got {}x{}",
                t.nrows(),
                t.ncols()
            )));
        }
        if !t.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("projective map"));
        }
        let rank = crate::numerics::numerical_rank(&t, &TolerancePolicy::default())?;
        if rank < t.nrows() {
            return Err(Error::InvalidProjectiveMap("matrix is singular".into()));
        }
        Ok(ProjectiveMap { t })
    }

    pub fn identity(d: usize) -> Self {
        ProjectiveMap { t: DMatrix::identity(d + 1, d + 1) }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.t
    }

    pub fn dim(&self) -> usize {
        self.t.nrows() - 1
    }

    /// Homogeneous weight `c^t p + delta` of a point; zero means the point
    /// lies on the exceptional hyperplane.
    pub fn weight(&self, p: &DVector<f64>) -> f64 {
        let d = self.dim();
        (0..d).map(|k| self.t[(d, k)] * p[k]).sum::<f64>() + self.t[(d, d)]
    }

    pub fn apply(&self, p: &DVector<f64>) -> DVector<f64> {
        let d = self.dim();
        let w = self.weight(p);
        DVector::from_fn(d, |r, _| {
            ((0..d).map(|k| self.t[(r, k)] * p[k]).sum::<f64>() + self.t[(r, d)]) / w
        })
    }
}

/// Apply a projective transform to a framework and its certificate.
///
/// Point `i` maps to `(A p_i + b) / w_i` with `w_i = c^t p_i + delta`; each
/// level's stress scalar on `{i, j}` is multiplied by `w_i w_j`, and a
/// cable/strut flips kind exactly when its segment crosses the exceptional
/// hyperplane (`w_i w_j < 0`). Vertices on the hyperplane are input errors.
pub fn projective_transform(
    fw: &Framework,
    cert: &Certificate,
    map: &ProjectiveMap,
    tol: &TolerancePolicy,
) -> Result<(Framework, Certificate)> {
    let d = fw.config.dim();
    if map.dim() != d {
        return Err(Error::DimensionMismatch {
            what: "projective map size",
            expected: d + 1,
            found: map.dim() + 1,
        });
    }
    let n = fw.vertex_count();
    let scale = fw.config.matrix().amax().max(1.0);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let w = map.weight(&fw.config.point(i));
        if w.abs() <= tol.zero_abs_tol * scale {
            return Err(Error::VertexOnHyperplane(i));
        }
        weights.push(w);
    }
    let coords = DMatrix::from_fn(d, n, |r, c| map.apply(&fw.config.point(c))[r]);
    let members = fw
        .graph
        .members()
        .iter()
        .map(|m| {
            let crosses = weights[m.i] * weights[m.j] < 0.0;
            let kind = match (m.kind, crosses) {
                (MemberKind::Cable, true) => MemberKind::Strut,
                (MemberKind::Strut, true) => MemberKind::Cable,
                (k, _) => k,
            };
            crate::framework::Member::new(m.i, m.j, kind)
        })
        .collect();
    let graph = crate::framework::Graph::new(n, members)?;
    let config = Configuration::new(coords)?;
    let transformed = Framework::new(graph, config)?;
    let levels = cert
        .levels
        .iter()
        .map(|w| {
            StressVector::new(
                fw.graph
                    .members()
                    .iter()
                    .enumerate()
                    .map(|(k, m)| w.get(k) * weights[m.i] * weights[m.j])
                    .collect(),
            )
        })
        .collect();
    Ok((
        transformed,
        Certificate { levels, declared_ranks: cert.declared_ranks.clone() },
    ))
}
