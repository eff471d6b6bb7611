//! Stress vectors and matrices, stress energy, equilibrium tests, stress
//! spaces, and tensegrity properness.
//!
//! A stress assigns one scalar per member. Its matrix form has the negated
//! scalars off-diagonal and row sums exactly zero, so the associated energy
//! is translation invariant.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::framework::{Configuration, Framework, Graph, MemberKind};
use crate::numerics::{kernel_basis, TolerancePolicy};

/// One scalar per member, in the graph's member order.
#[derive(Debug, Clone, PartialEq)]
pub struct StressVector {
    values: Vec<f64>,
}

impl StressVector {
    pub fn new(values: Vec<f64>) -> Self {
        StressVector { values }
    }

    pub fn zeros(m: usize) -> Self {
        StressVector { values: vec![0.0; m] }
    }

    /// Build from `(i, j, w)` triples; pairs must be members of `g`.
    pub fn from_pairs(g: &Graph, pairs: &[(usize, usize, f64)]) -> Result<Self> {
        let mut values = vec![0.0; g.member_count()];
        for &(i, j, w) in pairs {
            let k = g.member_index(i, j).ok_or_else(|| {
                Error::InvalidStress(format!("({i}, {j}) is not a member of the graph"))
            })?;
            values[k] += w;
        }
        Ok(StressVector { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.values)
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    pub fn scale(&self, c: f64) -> StressVector {
        StressVector {
            values: self.values.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &StressVector) -> StressVector {
        StressVector {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Symmetric `n x n` stress matrix with zero row sums and zeros at
/// off-diagonal non-member pairs. Construct via [`stress_matrix_from_vector`].
#[derive(Debug, Clone, PartialEq)]
pub struct StressMatrix {
    omega: DMatrix<f64>,
}

impl StressMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.omega.nrows()
    }
}

/// The stress matrix of `w`: entry `(i, j)` is `-w_ij` off-diagonal, and
/// each diagonal entry is the sum of the incident member scalars.
pub fn stress_matrix_from_vector(g: &Graph, w: &StressVector) -> Result<StressMatrix> {
    if w.len() != g.member_count() {
        return Err(Error::DimensionMismatch {
            what: "stress vector length",
            expected: g.member_count(),
            found: w.len(),
        });
    }
    let n = g.vertex_count();
    let mut omega = DMatrix::zeros(n, n);
    for (k, m) in g.members().iter().enumerate() {
        let wij = w.get(k);
        omega[(m.i, m.j)] -= wij;
        omega[(m.j, m.i)] -= wij;
        omega[(m.i, m.i)] += wij;
        omega[(m.j, m.j)] += wij;
    }
    Ok(StressMatrix { omega })
}

/// Stress energy `sum_{i<j} w_ij (p_i - p_j)^2`.
pub fn stress_energy(w: &StressVector, fw: &Framework) -> f64 {
    let p = fw.config.matrix();
    fw.graph
        .members()
        .iter()
        .enumerate()
        .map(|(k, m)| w.get(k) * (p.column(m.i) - p.column(m.j)).norm_squared())
        .sum()
}

/// Whether `P Omega = 0` within a threshold relative to `|P| |Omega|`.
pub fn is_equilibrium(om: &StressMatrix, config: &Configuration, tol: &TolerancePolicy) -> bool {
    if om.n() != config.len() {
        return false;
    }
    let p = config.matrix();
    let residual = (p * om.matrix()).norm();
    residual <= tol.rank_rel_tol * p.norm() * om.matrix().norm() + tol.zero_abs_tol
}

/// Orthonormal basis of the equilibrium stress space
/// `{w : w R(p) = 0}`, the left null space of the rigidity matrix.
pub fn equilibrium_stress_space(fw: &Framework, tol: &TolerancePolicy) -> Vec<StressVector> {
    let rt = crate::framework::rigidity_matrix(fw).transpose();
    let basis = kernel_basis(&rt, tol).expect("rigidity matrix is finite");
    (0..basis.ncols())
        .map(|c| StressVector::new(basis.column(c).iter().copied().collect()))
        .collect()
}

/// Proper stress test: nonnegative on cables, nonpositive on struts, free on
/// bars, with a small slack scaled to the stress magnitude.
pub fn is_proper(w: &StressVector, g: &Graph) -> bool {
    let slack = TolerancePolicy::default().zero_abs_tol * w.norm_inf().max(1.0);
    g.members().iter().enumerate().all(|(k, m)| match m.kind {
        MemberKind::Bar => true,
        MemberKind::Cable => w.get(k) >= -slack,
        MemberKind::Strut => w.get(k) <= slack,
    })
}
