//! JSON file formats and deterministic reports.
//!
//! Frameworks and certificates use 1-based vertex indices on disk; the
//! in-memory types are 0-based. Reports serialize with a fixed field order
//! so identical inputs, tolerances and seed produce identical bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, TriState, Verdict};
use crate::error::{Error, Result};
use crate::framework::{Configuration, Framework, Graph, Member, MemberKind};
use crate::numerics::TolerancePolicy;
use crate::reduction::{ReductionOutcome, ReductionResult};
use crate::stress::StressVector;

/// On-disk framework document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameworkFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub members: Vec<MemberFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MemberFile {
    /// 1-based vertex index.
    pub i: usize,
    /// 1-based vertex index.
    pub j: usize,
    #[serde(default = "default_kind")]
    pub kind: MemberKind,
}

fn default_kind() -> MemberKind {
    MemberKind::Bar
}

impl FrameworkFile {
    pub fn from_framework(fw: &Framework) -> Self {
        FrameworkFile {
            dim: fw.config.dim(),
            vertices: (0..fw.vertex_count())
                .map(|i| fw.config.point(i).iter().copied().collect())
                .collect(),
            members: fw
                .graph
                .members()
                .iter()
                .map(|m| MemberFile { i: m.i + 1, j: m.j + 1, kind: m.kind })
                .collect(),
        }
    }

    pub fn into_framework(self) -> Result<Framework> {
        let n = self.vertices.len();
        for (idx, v) in self.vertices.iter().enumerate() {
            if v.len() != self.dim {
                return Err(Error::Schema(format!(
                    "vertex {} has {} coordinates, expected dim = {}",
                    idx + 1,
                    v.len(),
                    self.dim
                )));
            }
        }
        let members = self
            .members
            .iter()
            .map(|m| {
                if m.i == 0 || m.j == 0 || m.i > n || m.j > n {
                    return Err(Error::Schema(format!(
                        "member ({}, {}) out of range for {} vertices (indices are 1-based)",
                        m.i, m.j, n
                    )));
                }
                Ok(Member::new(m.i - 1, m.j - 1, m.kind))
            })
            .collect::<Result<Vec<_>>>()?;
        let graph = Graph::new(n, members)?;
        let config = Configuration::from_points(&self.vertices)?;
        Framework::new(graph, config)
    }
}

/// On-disk certificate document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    pub levels: Vec<CertificateLevelFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_ranks: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateLevelFile {
    pub stress: Vec<StressEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StressEntry {
    /// 1-based vertex index.
    pub i: usize,
    /// 1-based vertex index.
    pub j: usize,
    pub w: f64,
}

impl CertificateFile {
    pub fn from_certificate(cert: &Certificate, graph: &Graph) -> Self {
        CertificateFile {
            levels: cert
                .levels
                .iter()
                .map(|w| CertificateLevelFile {
                    stress: graph
                        .members()
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| w.get(*k) != 0.0)
                        .map(|(k, m)| StressEntry { i: m.i + 1, j: m.j + 1, w: w.get(k) })
                        .collect(),
                })
                .collect(),
            declared_ranks: cert.declared_ranks.clone(),
        }
    }

    pub fn into_certificate(self, graph: &Graph) -> Result<Certificate> {
        let levels = self
            .levels
            .iter()
            .map(|level| {
                let pairs: Vec<(usize, usize, f64)> = level
                    .stress
                    .iter()
                    .map(|e| {
                        if e.i == 0 || e.j == 0 {
                            return Err(Error::Schema(
                                "stress entries use 1-based vertex indices".into(),
                            ));
                        }
                        Ok((e.i - 1, e.j - 1, e.w))
                    })
                    .collect::<Result<_>>()?;
                StressVector::from_pairs(graph, &pairs)
                    .map_err(|e| Error::Schema(format!("certificate references {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate { levels, declared_ranks: self.declared_ranks })
    }
}

pub fn read_framework(path: &Path) -> Result<Framework> {
    let text = std::fs::read_to_string(path)?;
    let file: FrameworkFile = serde_json::from_str(&text)?;
    file.into_framework()
}

pub fn write_framework(path: &Path, fw: &Framework) -> Result<()> {
    let file = FrameworkFile::from_framework(fw);
    std::fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
    Ok(())
}

pub fn read_certificate(path: &Path, graph: &Graph) -> Result<Certificate> {
    let text = std::fs::read_to_string(path)?;
    let file: CertificateFile = serde_json::from_str(&text)?;
    file.into_certificate(graph)
}

pub fn write_certificate(path: &Path, cert: &Certificate, graph: &Graph) -> Result<()> {
    let file = CertificateFile::from_certificate(cert, graph);
    std::fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
    Ok(())
}

/// One level of evidence in a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelReportFile {
    pub rank: usize,
    pub psd: String,
    pub min_eig: f64,
    pub max_eig: f64,
    pub equilibrium_residual: f64,
    pub proper: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted_matrix: Option<Vec<Vec<f64>>>,
}

/// Deterministic JSON mirror of a verdict, plus provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub tolerances: TolerancePolicy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub vertex_count: usize,
    pub member_count: usize,
    pub span_dim: usize,
    pub dimensionally_rigid: TriState,
    pub universally_rigid: TriState,
    pub rank_sum: usize,
    pub ranks: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_affine_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub levels: Vec<LevelReportFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conic: Option<Vec<Vec<f64>>>,
    pub unstressed_members: Vec<usize>,
    pub exit_code: i32,
}

fn tri_exit(dimensional: TriState, universal: TriState, failed: bool) -> i32 {
    if failed {
        return 20;
    }
    match (dimensional, universal) {
        (TriState::Yes, TriState::Yes) => 0,
        (TriState::Yes, _) => 10,
        (TriState::No, _) => 20,
        _ => 30,
    }
}

impl VerdictReport {
    fn base(command: &str, fw: &Framework, span_dim: usize, tol: &TolerancePolicy) -> Self {
        VerdictReport {
            tool: "unirigid".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            tolerances: *tol,
            mode: None,
            seed: None,
            vertex_count: fw.vertex_count(),
            member_count: fw.member_count(),
            span_dim,
            dimensionally_rigid: TriState::Inconclusive,
            universally_rigid: TriState::Inconclusive,
            rank_sum: 0,
            ranks: Vec::new(),
            max_affine_dim: None,
            failure: None,
            detail: None,
            levels: Vec::new(),
            conic: None,
            unstressed_members: Vec::new(),
            exit_code: 30,
        }
    }

    fn absorb_verdict(&mut self, verdict: &Verdict, embed: bool) {
        self.dimensionally_rigid = verdict.dimensionally_rigid;
        self.universally_rigid = verdict.universally_rigid;
        self.rank_sum = verdict.rank_sum;
        self.ranks = verdict.per_level.iter().map(|l| l.rank).collect();
        self.failure = verdict.failure.as_ref().map(|f| f.to_string());
        self.conic = verdict.conic.as_ref().map(|c| matrix_rows(c.matrix()));
        self.unstressed_members = verdict.unstressed_members.clone();
        self.levels = verdict
            .per_level
            .iter()
            .map(|l| LevelReportFile {
                rank: l.rank,
                psd: l.psd.kind.to_string(),
                min_eig: l.psd.min_eig,
                max_eig: l.psd.max_eig,
                equilibrium_residual: l.equilibrium_residual,
                proper: l.proper,
                restricted_matrix: embed.then(|| matrix_rows(&l.restricted)),
            })
            .collect();
        self.exit_code = tri_exit(
            verdict.dimensionally_rigid,
            verdict.universally_rigid,
            verdict.failure.is_some(),
        );
    }

    /// Report for a verification run.
    pub fn for_verification(
        fw: &Framework,
        span_dim: usize,
        verdict: &Verdict,
        tol: &TolerancePolicy,
        embed: bool,
    ) -> Self {
        let mut report = Self::base("verify", fw, span_dim, tol);
        report.absorb_verdict(verdict, embed);
        report
    }

    /// Report for an analysis run; `verdict` present when a certificate was
    /// produced and decided.
    pub fn for_analysis(
        fw: &Framework,
        result: &ReductionResult,
        verdict: Option<&Verdict>,
        mode: &str,
        seed: Option<u64>,
        tol: &TolerancePolicy,
        embed: bool,
    ) -> Self {
        let mut report = Self::base("analyze", fw, result.span_dim, tol);
        report.mode = Some(mode.into());
        report.seed = seed;
        match &result.outcome {
            ReductionOutcome::Certificate(_) => {
                if let Some(v) = verdict {
                    report.absorb_verdict(v, embed);
                }
            }
            ReductionOutcome::MaxAffineDim(d) => {
                report.dimensionally_rigid = TriState::No;
                report.universally_rigid = TriState::No;
                report.max_affine_dim = Some(*d);
                report.ranks = result.ranks();
                report.rank_sum = report.ranks.iter().sum();
                report.detail = Some(format!(
                    "equivalent frameworks with affine span {d} exist; no further stress"
                ));
                report.exit_code = 20;
            }
            ReductionOutcome::Inconclusive { affine_dim, level, detail } => {
                report.max_affine_dim = Some(*affine_dim);
                report.ranks = result.ranks();
                report.rank_sum = report.ranks.iter().sum();
                report.detail = Some(format!("level {level}: {detail}"));
                report.exit_code = 30;
            }
        }
        report
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn matrix_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| m.row(r).iter().copied().collect())
        .collect()
}
