//! Framework data model: graphs with bar/cable/strut members, point
//! configurations, the squared-length measurement map and its rigidity
//! matrix, member directions, and affine-span analysis.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::TolerancePolicy;

/// Constraint kind carried by a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberKind {
    /// Fixed length.
    Bar,
    /// May not get longer.
    Cable,
    /// May not get shorter.
    Strut,
}

/// A member between two vertices (0-based indices, `i < j` after
/// normalization).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Member {
    pub i: usize,
    pub j: usize,
    pub kind: MemberKind,
}

impl Member {
    pub fn bar(i: usize, j: usize) -> Self {
        Member { i, j, kind: MemberKind::Bar }
    }

    pub fn new(i: usize, j: usize, kind: MemberKind) -> Self {
        Member { i, j, kind }
    }
}

/// A loopless graph without duplicate members on vertices `0..n`.
///
/// Member order is preserved from construction; every per-member vector in
/// the crate (measurements, stresses) uses this order.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    members: Vec<Member>,
}

impl Graph {
    pub fn new(n: usize, members: Vec<Member>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidGraph("graph needs at least one member".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let members: Vec<Member> = members
            .into_iter()
            .map(|m| {
                if m.i == m.j {
                    return Err(Error::InvalidGraph(format!("loop at vertex {}", m.i)));
                }
                if m.i >= n || m.j >= n {
                    return Err(Error::InvalidGraph(format!(
                        "member ({}, {}) out of range for n = {}",
                        m.i, m.j, n
                    )));
                }
                let (a, b) = if m.i < m.j { (m.i, m.j) } else { (m.j, m.i) };
                if !seen.insert((a, b)) {
                    return Err(Error::InvalidGraph(format!("duplicate member ({a}, {b})")));
                }
                Ok(Member { i: a, j: b, kind: m.kind })
            })
            .collect::<Result<_>>()?;
        Ok(Graph { n, members })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Index of the member on the unordered pair `{i, j}`, if present.
    pub fn member_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.members.iter().position(|m| (m.i, m.j) == key)
    }

    /// True when any member is a cable or strut.
    pub fn is_tensegrity(&self) -> bool {
        self.members.iter().any(|m| m.kind != MemberKind::Bar)
    }
}

/// Point configuration stored as its `dim x n` configuration matrix
/// (point `i` is column `i`).
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    coords: DMatrix<f64>,
}

impl Configuration {
    pub fn new(coords: DMatrix<f64>) -> Result<Self> {
        if coords.ncols() < 2 {
            return Err(Error::InvalidConfiguration(
                "configuration needs at least 2 points".into(),
            ));
        }
        if !coords.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("configuration coordinates"));
        }
        Ok(Configuration { coords })
    }

    /// Build from a list of points, all of the same dimension.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfiguration("no points".into()));
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidConfiguration(
                "points have inconsistent dimensions".into(),
            ));
        }
        let m = DMatrix::from_fn(dim, points.len(), |r, c| points[c][r]);
        Configuration::new(m)
    }

    pub fn dim(&self) -> usize {
        self.coords.nrows()
    }

    pub fn len(&self) -> usize {
        self.coords.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.ncols() == 0
    }

    pub fn point(&self, i: usize) -> DVector<f64> {
        self.coords.column(i).into_owned()
    }

    /// The `dim x n` configuration matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.coords
    }
}

/// A graph together with a configuration of its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Framework {
    pub graph: Graph,
    pub config: Configuration,
}

impl Framework {
    pub fn new(graph: Graph, config: Configuration) -> Result<Self> {
        if graph.vertex_count() != config.len() {
            return Err(Error::DimensionMismatch {
                what: "framework vertex count",
                expected: graph.vertex_count(),
                found: config.len(),
            });
        }
        Ok(Framework { graph, config })
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn member_count(&self) -> usize {
        self.graph.member_count()
    }
}

/// Affine span of a configuration: dimension, centroid, orthonormal basis of
/// the span, and the isometric projection into span coordinates.
#[derive(Debug, Clone)]
pub struct SpanInfo {
    /// Dimension of the affine span.
    pub dim: usize,
    /// Centroid of the points.
    pub origin: DVector<f64>,
    /// `ambient_dim x dim` orthonormal basis of the span directions.
    pub basis: DMatrix<f64>,
    /// The configuration re-expressed in span coordinates (`dim x n`),
    /// isometric to the input.
    pub projected: Configuration,
}

/// Affine span of the configuration via SVD of the centered coordinates.
pub fn affine_span(config: &Configuration, tol: &TolerancePolicy) -> SpanInfo {
    let p = config.matrix();
    let n = config.len();
    let origin = p.column_mean();
    let centered = DMatrix::from_fn(p.nrows(), n, |r, c| p[(r, c)] - origin[r]);
    let svd = centered.clone().svd(true, false);
    let u = svd.u.expect("svd requested u");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let smax = order
        .first()
        .map(|&i| svd.singular_values[i])
        .unwrap_or(0.0);
    let d = if smax < tol.zero_abs_tol {
        0
    } else {
        order
            .iter()
            .filter(|&&i| svd.singular_values[i] > tol.rank_rel_tol * smax)
            .count()
    };
    let mut basis = DMatrix::zeros(p.nrows(), d);
    for (col, &i) in order[..d].iter().enumerate() {
        basis.set_column(col, &u.column(i));
    }
    let projected = basis.transpose() * &centered;
    SpanInfo {
        dim: d,
        origin,
        basis,
        projected: Configuration { coords: projected },
    }
}

/// Measurement vector: squared Euclidean length of every member, in member
/// order.
pub fn rigidity_map(fw: &Framework) -> DVector<f64> {
    let p = fw.config.matrix();
    DVector::from_iterator(
        fw.member_count(),
        fw.graph
            .members()
            .iter()
            .map(|m| (p.column(m.i) - p.column(m.j)).norm_squared()),
    )
}

/// The `m x (dim * n)` rigidity matrix `R(p)` with `R(p) p = f(p)`.
///
/// The configuration vector stacks point coordinates, point `i` occupying
/// entries `i*dim .. (i+1)*dim`. The row for member `{i, j}` carries the
/// block `p_i - p_j` at `i` and its negative at `j`.
pub fn rigidity_matrix(fw: &Framework) -> DMatrix<f64> {
    let p = fw.config.matrix();
    let dim = fw.config.dim();
    let mut r = DMatrix::zeros(fw.member_count(), dim * fw.vertex_count());
    for (k, m) in fw.graph.members().iter().enumerate() {
        let d = p.column(m.i) - p.column(m.j);
        for c in 0..dim {
            r[(k, m.i * dim + c)] = d[c];
            r[(k, m.j * dim + c)] = -d[c];
        }
    }
    r
}

/// Member directions expressed in span coordinates.
#[derive(Debug, Clone)]
pub struct MemberDirections {
    /// `(member index, direction)` pairs; directions are nonzero vectors of
    /// length `span.dim`.
    pub directions: Vec<(usize, DVector<f64>)>,
    /// Members skipped because their endpoints coincide.
    pub skipped: Vec<usize>,
}

/// Directions `p_i - p_j` of the selected members (all members when `subset`
/// is `None`), projected into the affine-span basis of the configuration.
/// Zero-length members are skipped and reported.
pub fn member_directions(
    fw: &Framework,
    subset: Option<&[usize]>,
    tol: &TolerancePolicy,
) -> MemberDirections {
    let span = affine_span(&fw.config, tol);
    let p = fw.config.matrix();
    let scale = p.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    let mut directions = Vec::new();
    let mut skipped = Vec::new();
    let all: Vec<usize>;
    let indices: &[usize] = match subset {
        Some(s) => s,
        None => {
            all = (0..fw.member_count()).collect();
            &all
        }
    };
    for &k in indices {
        let m = fw.graph.members()[k];
        let v = p.column(m.i) - p.column(m.j);
        if v.norm() <= tol.zero_abs_tol * scale {
            skipped.push(k);
        } else {
            directions.push((k, span.basis.transpose() * v));
        }
    }
    MemberDirections { directions, skipped }
}

/// Count of pairwise distinct projective directions among the given vectors.
/// A reporting helper; two directions count as equal when their unit vectors
/// agree up to sign within roughly square-root machine precision.
pub fn distinct_projective_directions(dirs: &[DVector<f64>], _tol: &TolerancePolicy) -> usize {
    let mut reps: Vec<DVector<f64>> = Vec::new();
    for v in dirs {
        let u = v / v.norm();
        let fresh = reps
            .iter()
            .all(|r| (r - &u).norm().min((r + &u).norm()) > 1e-8);
        if fresh {
            reps.push(u);
        }
    }
    reps.len()
}

/// Stack two configurations on a shared vertex set into one of dimension
/// `dim(p) + dim(q)`, point `i` becoming `(cos(theta) p_i, sin(theta) q_i)`.
///
/// For every graph on the shared vertices the measurement of the result is
/// `cos^2(theta) f(p) + sin^2(theta) f(q)`.
pub fn diagonal_combination(
    p: &Configuration,
    q: &Configuration,
    theta: f64,
) -> Result<Configuration> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            what: "diagonal_combination point counts",
            expected: p.len(),
            found: q.len(),
        });
    }
    let (c, s) = (theta.cos(), theta.sin());
    let dim = p.dim() + q.dim();
    let m = DMatrix::from_fn(dim, p.len(), |r, col| {
        if r < p.dim() {
            c * p.matrix()[(r, col)]
        } else {
            s * q.matrix()[(r - p.dim(), col)]
        }
    });
    Configuration::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::numerics::numerical_rank;
    use proptest::prelude::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn graph_rejects_loops_and_duplicates() {
        assert!(Graph::new(3, vec![Member::bar(1, 1)]).is_err());
        assert!(Graph::new(3, vec![Member::bar(0, 1), Member::bar(1, 0)]).is_err());
        assert!(Graph::new(3, vec![Member::bar(0, 3)]).is_err());
        assert!(Graph::new(3, vec![]).is_err());
    }

    #[test]
    fn ladder_span_is_planar() {
        let fw = fixtures::ladder();
        let span = affine_span(&fw.config, &tol());
        assert_eq!(span.dim, 2);
        // projection into span coordinates is isometric
        let p = fw.config.matrix();
        let q = span.projected.matrix();
        for i in 0..fw.vertex_count() {
            for j in i + 1..fw.vertex_count() {
                let before = (p.column(i) - p.column(j)).norm();
                let after = (q.column(i) - q.column(j)).norm();
                assert!((before - after).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ladder_basis_rows_are_independent() {
        let b = fixtures::ladder_midpoint_basis();
        assert_eq!(numerical_rank(&b, &tol()).unwrap(), 4);
    }

    #[test]
    fn collinear_points_span_a_line() {
        let c = Configuration::from_points(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.0]])
            .unwrap();
        assert_eq!(affine_span(&c, &tol()).dim, 1);
    }

    #[test]
    fn repeated_point_cloud_spans_nothing() {
        let c = Configuration::from_points(&vec![vec![3.0, -1.0]; 4]).unwrap();
        assert_eq!(affine_span(&c, &tol()).dim, 0);
    }

    #[test]
    fn ladder_measurements() {
        let fw = fixtures::ladder();
        let f = rigidity_map(&fw);
        let expect = [1.0, 1.0, 4.0, 1.0, 1.0, 4.0, 1.0, 1.0, 1.0];
        for (a, b) in f.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn k4_measurements_have_diagonals_last() {
        let f = rigidity_map(&fixtures::k4_square());
        let expect = [1.0, 1.0, 1.0, 1.0, 2.0, 2.0];
        for (a, b) in f.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn coincident_member_measures_zero() {
        let g = Graph::new(2, vec![Member::bar(0, 1)]).unwrap();
        let c = Configuration::from_points(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        let fw = Framework::new(g, c).unwrap();
        assert_eq!(rigidity_map(&fw)[0], 0.0);
        assert_eq!(rigidity_matrix(&fw).row(0).amax(), 0.0);
    }

    #[test]
    fn rigidity_matrix_identity_on_ladder() {
        let fw = fixtures::ladder();
        let r = rigidity_matrix(&fw);
        let dim = fw.config.dim();
        let pvec = DVector::from_iterator(
            dim * fw.vertex_count(),
            (0..fw.vertex_count()).flat_map(|i| {
                let p = fw.config.point(i);
                (0..dim).map(move |c| p[c])
            }),
        );
        let diff = &r * pvec - rigidity_map(&fw);
        assert!(diff.amax() < 1e-12);
    }

    #[test]
    fn triangle_rigidity_matrix_rank() {
        let fw = fixtures::triangle();
        let r = rigidity_matrix(&fw);
        assert_eq!(r.shape(), (3, 6));
        assert_eq!(numerical_rank(&r, &tol()).unwrap(), 3);
    }

    #[test]
    fn ladder_has_two_member_directions() {
        let fw = fixtures::ladder();
        let md = member_directions(&fw, None, &tol());
        assert!(md.skipped.is_empty());
        let dirs: Vec<_> = md.directions.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(distinct_projective_directions(&dirs, &tol()), 2);
    }

    #[test]
    fn triangle_has_three_member_directions() {
        let fw = fixtures::triangle();
        let md = member_directions(&fw, None, &tol());
        let dirs: Vec<_> = md.directions.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(distinct_projective_directions(&dirs, &tol()), 3);
    }

    #[test]
    fn collinear_pole_has_one_direction_in_1d() {
        let fw = fixtures::collinear_triple();
        let md = member_directions(&fw, None, &tol());
        assert_eq!(md.directions[0].1.len(), 1);
        let dirs: Vec<_> = md.directions.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(distinct_projective_directions(&dirs, &tol()), 1);
    }

    #[test]
    fn diagonal_combination_endpoints_are_isometric() {
        let fw = fixtures::ladder();
        let p = &fw.config;
        let comb = diagonal_combination(p, p, 0.0).unwrap();
        let fw2 = Framework::new(fw.graph.clone(), comb).unwrap();
        assert!((rigidity_map(&fw2) - rigidity_map(&fw)).amax() < 1e-12);
        let comb = diagonal_combination(p, p, std::f64::consts::FRAC_PI_2).unwrap();
        let fw2 = Framework::new(fw.graph.clone(), comb).unwrap();
        assert!((rigidity_map(&fw2) - rigidity_map(&fw)).amax() < 1e-12);
    }

    #[test]
    fn diagonal_combination_mismatched_counts_error() {
        let a = Configuration::from_points(&[vec![0.0], vec![1.0]]).unwrap();
        let b = Configuration::from_points(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert!(diagonal_combination(&a, &b, 0.3).is_err());
    }

    prop_compose! {
        fn arb_config(n: usize)(
            coords in proptest::collection::vec(-5.0f64..5.0, 2 * n)
        ) -> Configuration {
            Configuration::new(DMatrix::from_fn(2, n, |r, c| coords[2 * c + r])).unwrap()
        }
    }

    proptest! {
        #[test]
        fn measurements_invariant_under_isometry(
            cfg in arb_config(6),
            angle in 0.0f64..std::f64::consts::TAU,
            tx in -3.0f64..3.0, ty in -3.0f64..3.0
        ) {
            let fw = Framework::new(fixtures::ladder().graph, cfg.clone()).unwrap();
            let rot = DMatrix::from_row_slice(2, 2,
                &[angle.cos(), -angle.sin(), angle.sin(), angle.cos()]);
            let moved = DMatrix::from_fn(2, cfg.len(), |r, c| {
                rot.row(r).transpose().dot(&cfg.matrix().column(c))
                    + if r == 0 { tx } else { ty }
            });
            let fw2 = Framework::new(fw.graph.clone(), Configuration::new(moved).unwrap()).unwrap();
            prop_assert!((rigidity_map(&fw) - rigidity_map(&fw2)).amax() < 1e-9);
        }

        #[test]
        fn combination_measurement_identity(
            p in arb_config(6),
            q in arb_config(6),
            theta in 0.0f64..std::f64::consts::FRAC_PI_2
        ) {
            let g = fixtures::ladder().graph;
            let comb = diagonal_combination(&p, &q, theta).unwrap();
            let f = rigidity_map(&Framework::new(g.clone(), comb).unwrap());
            let fp = rigidity_map(&Framework::new(g.clone(), p).unwrap());
            let fq = rigidity_map(&Framework::new(g, q).unwrap());
            let expect = fp * theta.cos().powi(2) + fq * theta.sin().powi(2);
            prop_assert!((f - expect).amax() < 1e-9);
        }

        #[test]
        fn projection_is_idempotent(cfg in arb_config(5)) {
            let span = affine_span(&cfg, &tol());
            let again = affine_span(&span.projected, &tol());
            prop_assert_eq!(span.dim, again.dim);
        }
    }
}
