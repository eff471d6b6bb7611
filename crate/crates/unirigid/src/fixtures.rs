//! Built-in frameworks exercising the full range of behavior: poles
//! (collinear triangles), the ladder, complete and cyclic squares, a
//! tensegrity needing an extra certificate level, a three-stage pole row,
//! and a framework whose PSD stresses hide inside a larger stress space.
//!
//! Every runnable example and most tests start from these.

use nalgebra::DMatrix;

use crate::certificate::{Certificate, ProjectiveMap};
use crate::framework::{Configuration, Framework, Graph, Member, MemberKind};
use crate::stress::StressVector;

fn fw(points: &[(f64, f64)], members: Vec<Member>) -> Framework {
    let pts: Vec<Vec<f64>> = points.iter().map(|&(x, y)| vec![x, y]).collect();
    Framework::new(
        Graph::new(points.len(), members).expect("fixture graph is valid"),
        Configuration::from_points(&pts).expect("fixture coordinates are valid"),
    )
    .expect("fixture is consistent")
}

/// Two vertical poles (collinear triangles with midpoints) joined by three
/// horizontal rungs. Dimensionally rigid in the plane with certificate ranks
/// `[2, 1]`, but not universally rigid: all members point in only two
/// directions.
///
/// Vertices: `0 = (0,1)`, `1 = (0,-1)`, `2 = (1,-1)`, `3 = (1,1)`,
/// `4 = (0,0)` (midpoint of 0-1), `5 = (1,0)` (midpoint of 2-3).
pub fn ladder() -> Framework {
    fw(
        &[(0.0, 1.0), (0.0, -1.0), (1.0, -1.0), (1.0, 1.0), (0.0, 0.0), (1.0, 0.0)],
        vec![
            Member::bar(0, 4),
            Member::bar(1, 4),
            Member::bar(0, 1),
            Member::bar(2, 5),
            Member::bar(3, 5),
            Member::bar(2, 3),
            Member::bar(0, 3),
            Member::bar(1, 2),
            Member::bar(4, 5),
        ],
    )
}

/// First-level ladder stress: `2` on each short pole member, `-1` on each
/// long one, rungs unstressed.
pub fn ladder_level1_stress() -> StressVector {
    StressVector::new(vec![2.0, 2.0, -1.0, 2.0, 2.0, -1.0, 0.0, 0.0, 0.0])
}

/// Second-level ladder stress: `1` on the outer rungs, `-2` on the middle
/// one. In equilibrium only after the pole constraints are imposed.
pub fn ladder_level2_stress() -> StressVector {
    StressVector::new(vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, -2.0])
}

pub fn ladder_certificate() -> Certificate {
    Certificate {
        levels: vec![ladder_level1_stress(), ladder_level2_stress()],
        declared_ranks: Some(vec![2, 1]),
    }
}

/// The 6x6 stress matrix of [`ladder_level1_stress`], written out.
pub fn ladder_level1_matrix() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        6,
        6,
        &[
            1.0, 1.0, 0.0, 0.0, -2.0, 0.0,
            1.0, 1.0, 0.0, 0.0, -2.0, 0.0,
            0.0, 0.0, 1.0, 1.0, 0.0, -2.0,
            0.0, 0.0, 1.0, 1.0, 0.0, -2.0,
            -2.0, -2.0, 0.0, 0.0, 4.0, 0.0,
            0.0, 0.0, -2.0, -2.0, 0.0, 4.0,
        ],
    )
}

/// Canonical basis of the kernel of [`ladder_level1_matrix`]: the affine
/// set where each midpoint stays the average of its pole ends.
pub fn ladder_midpoint_basis() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        6,
        &[
            1.0, 0.0, 0.0, 0.0, 0.5, 0.0,
            0.0, 1.0, 0.0, 0.0, 0.5, 0.0,
            0.0, 0.0, 1.0, 0.0, 0.0, 0.5,
            0.0, 0.0, 0.0, 1.0, 0.0, 0.5,
        ],
    )
}

/// The rank-1 restricted stress matrix of the second ladder level, up to the
/// factor 1/2 introduced by the midpoint parametrization.
pub fn ladder_level2_restricted() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0, -1.0, 1.0, -1.0,
            -1.0, 1.0, -1.0, 1.0,
            1.0, -1.0, 1.0, -1.0,
            -1.0, 1.0, -1.0, 1.0,
        ],
    )
}

/// The ladder with one extra diagonal bar `{0, 2}`, which adds a third
/// member direction and upgrades the same certificate to universal rigidity.
pub fn ladder_with_diagonal() -> Framework {
    let base = ladder();
    let mut members = base.graph.members().to_vec();
    members.push(Member::bar(0, 2));
    fw(
        &[(0.0, 1.0), (0.0, -1.0), (1.0, -1.0), (1.0, 1.0), (0.0, 0.0), (1.0, 0.0)],
        members,
    )
}

/// The ladder certificate padded with a zero on the extra diagonal.
pub fn ladder_with_diagonal_certificate() -> Certificate {
    let pad = |w: &StressVector| {
        let mut v = w.values().to_vec();
        v.push(0.0);
        StressVector::new(v)
    };
    Certificate {
        levels: vec![pad(&ladder_level1_stress()), pad(&ladder_level2_stress())],
        declared_ranks: Some(vec![2, 1]),
    }
}

/// Non-degenerate triangle: no equilibrium stress, `n - d - 1 = 0`, so the
/// empty certificate already proves dimensional rigidity.
pub fn triangle() -> Framework {
    fw(
        &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
        vec![Member::bar(0, 1), Member::bar(1, 2), Member::bar(0, 2)],
    )
}

/// Complete graph on the unit square, diagonals last: the classic
/// super-stable framework with a single rank-1 PSD stress.
pub fn k4_square() -> Framework {
    fw(
        &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        vec![
            Member::bar(0, 1),
            Member::bar(1, 2),
            Member::bar(2, 3),
            Member::bar(0, 3),
            Member::bar(0, 2),
            Member::bar(1, 3),
        ],
    )
}

/// The square with cable sides and strut diagonals; its stress is proper.
pub fn k4_square_tensegrity() -> Framework {
    fw(
        &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        vec![
            Member::new(0, 1, MemberKind::Cable),
            Member::new(1, 2, MemberKind::Cable),
            Member::new(2, 3, MemberKind::Cable),
            Member::new(0, 3, MemberKind::Cable),
            Member::new(0, 2, MemberKind::Strut),
            Member::new(1, 3, MemberKind::Strut),
        ],
    )
}

/// Single-level certificate for the square: `1` on sides, `-1` on diagonals.
pub fn k4_certificate() -> Certificate {
    Certificate {
        levels: vec![StressVector::new(vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0])],
        declared_ranks: Some(vec![1]),
    }
}

/// The unit square without diagonals: no equilibrium stress at all, and a
/// folded realization spans three dimensions, so it is refuted.
pub fn square_cycle() -> Framework {
    fw(
        &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        vec![
            Member::bar(0, 1),
            Member::bar(1, 2),
            Member::bar(2, 3),
            Member::bar(0, 3),
        ],
    )
}

/// A single pole on the line: three collinear points, all pairs connected.
pub fn collinear_triple() -> Framework {
    let pts = vec![vec![0.0], vec![2.0], vec![1.0]];
    Framework::new(
        Graph::new(3, vec![Member::bar(0, 1), Member::bar(0, 2), Member::bar(1, 2)]).unwrap(),
        Configuration::from_points(&pts).unwrap(),
    )
    .unwrap()
}

/// One vertical pole plus an apex attached to all three pole vertices: two
/// cables to the pole ends and a strut to the midpoint.
///
/// The pole stress alone certifies dimensional rigidity, but universal
/// rigidity needs a second, rank-zero level that puts nonzero stress on the
/// cables and strut so their directions enter the conic test.
pub fn one_pole() -> Framework {
    fw(
        &[(0.0, 1.0), (0.0, -1.0), (0.0, 0.0), (1.0, 0.0)],
        vec![
            Member::bar(0, 1),
            Member::bar(0, 2),
            Member::bar(1, 2),
            Member::new(0, 3, MemberKind::Cable),
            Member::new(1, 3, MemberKind::Cable),
            Member::new(2, 3, MemberKind::Strut),
        ],
    )
}

/// Rank-1 pole stress of the one-pole tensegrity (bars only).
pub fn one_pole_level1_stress() -> StressVector {
    StressVector::new(vec![-1.0, 2.0, 2.0, 0.0, 0.0, 0.0])
}

/// Extra stress with zero energy on the pole-constrained affine set and
/// nonzero values on every member; proper for the cable/strut assignment.
pub fn one_pole_level2_stress() -> StressVector {
    StressVector::new(vec![-2.0, 2.0, 2.0, 2.0, 2.0, -4.0])
}

pub fn one_pole_certificate_dimensional() -> Certificate {
    Certificate {
        levels: vec![one_pole_level1_stress()],
        declared_ranks: Some(vec![1]),
    }
}

pub fn one_pole_certificate_universal() -> Certificate {
    Certificate {
        levels: vec![one_pole_level1_stress(), one_pole_level2_stress()],
        declared_ranks: Some(vec![1, 0]),
    }
}

/// Four vertical poles at equal horizontal spacing, every pole joined to the
/// other three by a horizontal member. Needs three reduction levels, with
/// ranks `[4, 4, 1]`.
///
/// Within the left pole the middle vertex splits its segment 2:1 (the top
/// line sits twice as far from the middle line as the bottom line does);
/// vertex 4 is the midpoint of the second pole and vertex 7 the midpoint of
/// the third. All horizontal members join vertices at equal heights, which
/// pins the remaining coordinates.
pub fn four_pole() -> Framework {
    fw(
        &[
            (0.0, 2.0), (0.0, 0.0), (0.0, -1.0),   // pole A: 0, 1, 2
            (1.0, -4.0), (1.0, -1.0), (1.0, 2.0),  // pole B: 3, 4, 5
            (2.0, 2.0), (2.0, -1.0), (2.0, -4.0),  // pole C: 6, 7, 8
            (3.0, -1.0), (3.0, 0.0), (3.0, 2.0),   // pole D: 9, 10, 11
        ],
        vec![
            Member::bar(0, 1),
            Member::bar(1, 2),
            Member::bar(0, 2),
            Member::bar(3, 4),
            Member::bar(4, 5),
            Member::bar(3, 5),
            Member::bar(6, 7),
            Member::bar(7, 8),
            Member::bar(6, 8),
            Member::bar(9, 10),
            Member::bar(10, 11),
            Member::bar(9, 11),
            Member::bar(0, 6),  // top line, poles A-C
            Member::bar(1, 10), // middle line, poles A-D
            Member::bar(2, 4),  // poles A-B
            Member::bar(3, 8),  // poles B-C
            Member::bar(7, 9),  // poles C-D
            Member::bar(5, 11), // poles B-D
        ],
    )
}

/// The third-level stress of the four-pole run: `4` on the long members of
/// the outer poles, `-1` on the long members of the inner ones.
pub fn four_pole_final_level_stress() -> StressVector {
    let mut v = vec![0.0; 18];
    v[2] = 4.0;
    v[11] = 4.0;
    v[5] = -1.0;
    v[8] = -1.0;
    StressVector::new(v)
}

/// Two concentric triangles joined at corresponding vertices (a super-stable
/// core), plus three degree-3 vertices each hung inside a triangle of two
/// outer vertices and one inner vertex.
///
/// The equilibrium stress space is three-dimensional but only one ray of it
/// is PSD: any stress touching the hanging vertices has a sign pattern that
/// the twisting motion of the inner triangle rules out. Random sampling sees
/// only indefinite matrices, so the search must report failure rather than a
/// refutation.
pub fn hidden_stress() -> Framework {
    let rho = 0.5;
    let angles = [0.25, 0.25 + 1.0 / 3.0, 0.25 + 2.0 / 3.0].map(|t| t * std::f64::consts::TAU);
    let outer: Vec<(f64, f64)> = angles.iter().map(|a| (a.cos(), a.sin())).collect();
    let inner: Vec<(f64, f64)> = outer.iter().map(|&(x, y)| (rho * x, rho * y)).collect();
    let blue: Vec<(f64, f64)> = (0..3)
        .map(|k| {
            let (ax, ay) = outer[k];
            let (bx, by) = outer[(k + 1) % 3];
            let (cx, cy) = inner[k];
            ((ax + bx + cx) / 3.0, (ay + by + cy) / 3.0)
        })
        .collect();
    let mut points = outer;
    points.extend(inner);
    points.extend(blue);
    let mut members = vec![
        Member::bar(0, 1),
        Member::bar(1, 2),
        Member::bar(0, 2),
        Member::bar(3, 4),
        Member::bar(4, 5),
        Member::bar(3, 5),
        Member::bar(0, 3),
        Member::bar(1, 4),
        Member::bar(2, 5),
    ];
    for k in 0..3 {
        let b = 6 + k;
        members.push(Member::bar(b, k));
        members.push(Member::bar(b, (k + 1) % 3));
        members.push(Member::bar(b, 3 + k));
    }
    fw(&points, members)
}

/// Equilibrium stress of the concentric-triangle core of [`hidden_stress`],
/// zero on the hanging vertices: `-1` on outer edges, `2` on inner edges,
/// `6` on the radial connectors. The unique PSD ray of the stress space.
pub fn hidden_stress_core_ray() -> StressVector {
    let mut v = vec![0.0; 18];
    v[0] = -1.0;
    v[1] = -1.0;
    v[2] = -1.0;
    v[3] = 2.0;
    v[4] = 2.0;
    v[5] = 2.0;
    v[6] = 6.0;
    v[7] = 6.0;
    v[8] = 6.0;
    StressVector::new(v)
}

/// A projective map sending the straight ladder to an orchard-ladder shape
/// (poles converging instead of parallel), with every vertex on the same
/// side of the exceptional line.
pub fn orchard_map() -> ProjectiveMap {
    ProjectiveMap::new(DMatrix::from_row_slice(
        3,
        3,
        &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0 / 3.0, 1.0],
    ))
    .expect("orchard map is nonsingular")
}
