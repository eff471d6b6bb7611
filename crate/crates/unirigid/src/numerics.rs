//! Tolerance-aware dense linear algebra: numerical rank, orthonormal kernel
//! bases, PSD classification of symmetric matrices, and homogeneous solves.
//!
//! Every rank-like decision in this crate is made relative to the largest
//! singular value (or eigenvalue) of the matrix at hand, so the outcome is
//! invariant under positive rescaling of the input. An absolute floor
//! (`zero_abs_tol`) catches all-zero matrices where a relative test would
//! divide by zero.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds controlling rank, kernel and definiteness decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Singular values below `rank_rel_tol * sigma_max` count as zero.
    pub rank_rel_tol: f64,
    /// Eigenvalues above `-psd_rel_tol * |lambda|_max` count as nonnegative.
    pub psd_rel_tol: f64,
    /// Absolute floor below which a whole matrix counts as zero.
    pub zero_abs_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rank_rel_tol: 1e-9,
            psd_rel_tol: 1e-9,
            zero_abs_tol: 1e-12,
        }
    }
}

impl TolerancePolicy {
    /// Policy with the given relative tolerance for both rank and PSD tests.
    pub fn with_rel_tol(rel: f64) -> Result<Self> {
        let p = TolerancePolicy {
            rank_rel_tol: rel,
            psd_rel_tol: rel,
            ..Default::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rank_rel_tol > 0.0 && self.psd_rel_tol > 0.0 && self.zero_abs_tol > 0.0) {
            return Err(Error::InvalidTolerance(
                "all tolerances must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// Sign class of a symmetric matrix under a tolerance policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefiniteKind {
    Zero,
    Psd,
    Nsd,
    Indefinite,
}

impl std::fmt::Display for DefiniteKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DefiniteKind::Zero => write!(f, "zero"),
            DefiniteKind::Psd => write!(f, "PSD"),
            DefiniteKind::Nsd => write!(f, "NSD"),
            DefiniteKind::Indefinite => write!(f, "indefinite"),
        }
    }
}

/// Result of classifying a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdClass {
    pub kind: DefiniteKind,
    pub rank: usize,
    pub min_eig: f64,
    pub max_eig: f64,
}

fn ensure_finite(m: &DMatrix<f64>, what: &'static str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Singular values of `m`, sorted descending.
fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

fn rank_from_singular_values(s: &[f64], tol: &TolerancePolicy) -> usize {
    match s.first() {
        None => 0,
        Some(&smax) if smax < tol.zero_abs_tol => 0,
        Some(&smax) => s.iter().filter(|&&x| x > tol.rank_rel_tol * smax).count(),
    }
}

/// Number of singular values of `m` above `rank_rel_tol * sigma_max`
/// (zero when the whole matrix is below `zero_abs_tol`).
pub fn numerical_rank(m: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<usize> {
    ensure_finite(m, "numerical_rank input")?;
    Ok(rank_from_singular_values(&singular_values(m), tol))
}

/// Orthonormal basis for `{x : Mx = 0}`, returned as the columns of an
/// `ncols(M) x (ncols(M) - rank(M))` matrix.
pub fn kernel_basis(m: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<DMatrix<f64>> {
    ensure_finite(m, "kernel_basis input")?;
    let n = m.ncols();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let max_abs = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if m.nrows() == 0 || max_abs < tol.zero_abs_tol {
        return Ok(DMatrix::identity(n, n));
    }
    // A thin SVD of a wide matrix only yields min(rows, cols) right singular
    // vectors; pad with zero rows so all n of them are available.
    let work = if m.nrows() < n {
        let mut padded = DMatrix::zeros(n, n);
        padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let sorted: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let rank = rank_from_singular_values(&sorted, tol);
    let mut basis = DMatrix::zeros(n, n - rank);
    for (col, &row_idx) in order[rank..].iter().enumerate() {
        basis.set_column(col, &v_t.row(row_idx).transpose());
    }
    Ok(basis)
}

/// Eigenvalues (ascending) and matching eigenvectors of a symmetric matrix.
pub(crate) fn symmetric_eigen(s: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = s.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(s.nrows(), s.ncols());
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Classify a symmetric matrix by the signs of its eigenvalues.
///
/// The input is symmetrized as `(S + S^t)/2` first; a deviation from symmetry
/// beyond tolerance is an input error.
pub fn psd_classify(s: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<PsdClass> {
    ensure_finite(s, "psd_classify input")?;
    if s.nrows() != s.ncols() {
        return Err(Error::DimensionMismatch {
            what: "psd_classify",
            expected: s.nrows(),
            found: s.ncols(),
        });
    }
    let max_abs = s.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let asym = (s - s.transpose()).iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if asym > tol.zero_abs_tol * f64::max(1.0, max_abs) {
        return Err(Error::NotSymmetric(asym));
    }
    let sym = (s + s.transpose()) * 0.5;
    if sym.nrows() == 0 {
        return Ok(PsdClass {
            kind: DefiniteKind::Zero,
            rank: 0,
            min_eig: 0.0,
            max_eig: 0.0,
        });
    }
    let (values, _) = symmetric_eigen(&sym);
    let min_eig = values[0];
    let max_eig = values[values.len() - 1];
    let lam_max = f64::max(min_eig.abs(), max_eig.abs());
    if lam_max < tol.zero_abs_tol {
        return Ok(PsdClass {
            kind: DefiniteKind::Zero,
            rank: 0,
            min_eig,
            max_eig,
        });
    }
    let rank = values
        .iter()
        .filter(|&&l| l.abs() > tol.rank_rel_tol * lam_max)
        .count();
    let kind = if min_eig >= -tol.psd_rel_tol * lam_max {
        DefiniteKind::Psd
    } else if max_eig <= tol.psd_rel_tol * lam_max {
        DefiniteKind::Nsd
    } else {
        DefiniteKind::Indefinite
    };
    Ok(PsdClass {
        kind,
        rank,
        min_eig,
        max_eig,
    })
}

/// Orthonormal basis columns for `{x : Ax = 0}` under the default policy.
///
/// Generic entry point for homogeneous linear systems; `kernel_basis` is the
/// tolerance-aware variant.
pub fn homogeneous_solution_space(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    kernel_basis(a, &TolerancePolicy::default())
}

/// Reduced row echelon form of the row span of `m`, with zero rows dropped.
///
/// This is the canonical representative of a row span: leading entries are 1,
/// each pivot column is zero elsewhere, pivots move strictly right. Used to
/// make basis matrices reproducible independent of the kernel basis that
/// produced them.
pub(crate) fn rref(m: &DMatrix<f64>, tol: &TolerancePolicy) -> DMatrix<f64> {
    let mut a = m.clone();
    let scale = a.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale < tol.zero_abs_tol {
        return DMatrix::zeros(0, m.ncols());
    }
    let pivot_tol = 10.0 * tol.rank_rel_tol * scale;
    let (rows, cols) = a.shape();
    let mut piv_r = 0;
    for c in 0..cols {
        if piv_r >= rows {
            break;
        }
        let (k, best) = (piv_r..rows)
            .map(|r| (r, a[(r, c)].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if best <= pivot_tol {
            continue;
        }
        a.swap_rows(piv_r, k);
        let inv = 1.0 / a[(piv_r, c)];
        for cc in 0..cols {
            a[(piv_r, cc)] *= inv;
        }
        a[(piv_r, c)] = 1.0;
        for r in 0..rows {
            if r != piv_r {
                let factor = a[(r, c)];
                if factor != 0.0 {
                    for cc in 0..cols {
                        a[(r, cc)] -= factor * a[(piv_r, cc)];
                    }
                    a[(r, c)] = 0.0;
                }
            }
        }
        piv_r += 1;
    }
    a.rows(0, piv_r).into_owned()
}
