//! Command-line front end: analyze frameworks, verify certificates, run the
//! conic test, inspect stress spaces, and apply projective transforms.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use unirigid::certificate::{decide_universal, projective_transform, ProjectiveMap};
use unirigid::error::Error;
use unirigid::framework::{affine_span, member_directions};
use unirigid::io::{self, VerdictReport};
use unirigid::numerics::TolerancePolicy;
use unirigid::reduction::{run_reduction, ReductionOutcome, SearchMode};
use unirigid::stress::equilibrium_stress_space;
use unirigid::conic_at_infinity;

#[derive(Parser)]
#[command(
    name = "unirigid",
    version,
    about = "Dimensional and universal rigidity via iterated PSD stress certificates",
    after_help = "EXIT CODES:\n  \
          0   universally rigid\n  \
         10   dimensionally rigid only\n  \
         20   refuted (or certificate rejected)\n  \
         30   inconclusive\n  \
          2   parse or schema error\n  \
          3   vertex on the exceptional hyperplane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact1d,
    Random,
    User,
}

#[derive(Subcommand)]
enum Command {
    /// Run the reduction on a framework and decide its rigidity.
    Analyze {
        framework: PathBuf,
        /// Stress search strategy per level.
        #[arg(long, value_enum, default_value = "random")]
        mode: ModeArg,
        /// Seed for the randomized search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample budget per level for the randomized search.
        #[arg(long, default_value_t = 128)]
        samples: usize,
        /// Fall back to alternating projections when sampling fails.
        #[arg(long)]
        refine: bool,
        /// Certificate file supplying one stress per level (mode=user).
        #[arg(long)]
        stresses: Option<PathBuf>,
        /// Relative tolerance for rank and PSD decisions.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the report here; the certificate goes next to it.
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Include each level's restricted stress matrix in the report.
        #[arg(long)]
        embed_matrices: bool,
    },
    /// Check a certificate against a framework.
    Verify {
        framework: PathBuf,
        certificate: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Include each level's restricted stress matrix in the report.
        #[arg(long)]
        embed_matrices: bool,
    },
    /// Solve for a conic at infinity through the member directions.
    Conic { framework: PathBuf },
    /// Dimension and basis of the equilibrium stress space.
    StressSpace { framework: PathBuf },
    /// Apply a projective transform to a framework and its certificate.
    Transform {
        framework: PathBuf,
        certificate: PathBuf,
        /// JSON file holding the (d+1)x(d+1) homogeneous map matrix.
        map_spec: PathBuf,
        /// Output path for the transformed framework.
        #[arg(long)]
        out_framework: Option<PathBuf>,
        /// Output path for the transformed certificate.
        #[arg(long)]
        out_certificate: Option<PathBuf>,
    },
}

fn tolerances(tol: Option<f64>) -> Result<TolerancePolicy, Error> {
    match tol {
        Some(rel) => TolerancePolicy::with_rel_tol(rel),
        None => Ok(TolerancePolicy::default()),
    }
}

fn certificate_path_alongside(report: &Path) -> PathBuf {
    match report.extension().and_then(|e| e.to_str()) {
        Some("json") => report.with_extension("cert.json"),
        _ => {
            let mut p = report.as_os_str().to_owned();
            p.push(".cert.json");
            PathBuf::from(p)
        }
    }
}

fn emit(report: &VerdictReport, json_out: Option<&Path>) -> Result<(), Error> {
    let text = report.to_json();
    match json_out {
        Some(path) => std::fs::write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            framework,
            mode,
            seed,
            samples,
            refine,
            stresses,
            tol,
            json_out,
            embed_matrices,
        } => {
            let tol = tolerances(tol)?;
            let fw = io::read_framework(&framework)?;
            let (mode_name, search, used_seed) = match mode {
                ModeArg::Exact1d => ("exact1d", SearchMode::Exact1d, None),
                ModeArg::Random => (
                    "random",
                    SearchMode::RandomizedMaxRank { seed, samples, refine },
                    Some(seed),
                ),
                ModeArg::User => {
                    let path = stresses.ok_or_else(|| {
                        Error::Schema("--mode user requires --stresses <certificate>".into())
                    })?;
                    let cert = io::read_certificate(&path, &fw.graph)?;
                    ("user", SearchMode::UserSupplied(cert.levels), None)
                }
            };
            let result = run_reduction(&fw, &search, &tol)?;
            let verdict = match &result.outcome {
                ReductionOutcome::Certificate(cert) => Some(decide_universal(&fw, cert, &tol)),
                _ => None,
            };
            let report = VerdictReport::for_analysis(
                &fw,
                &result,
                verdict.as_ref(),
                mode_name,
                used_seed,
                &tol,
                embed_matrices,
            );
            emit(&report, json_out.as_deref())?;
            if let (Some(out), ReductionOutcome::Certificate(cert)) =
                (json_out.as_deref(), &result.outcome)
            {
                io::write_certificate(&certificate_path_alongside(out), cert, &fw.graph)?;
            }
            Ok(report.exit_code)
        }
        Command::Verify { framework, certificate, tol, json_out, embed_matrices } => {
            let tol = tolerances(tol)?;
            let fw = io::read_framework(&framework)?;
            let cert = io::read_certificate(&certificate, &fw.graph)?;
            let span = affine_span(&fw.config, &tol);
            let verdict = decide_universal(&fw, &cert, &tol);
            let report =
                VerdictReport::for_verification(&fw, span.dim, &verdict, &tol, embed_matrices);
            emit(&report, json_out.as_deref())?;
            Ok(report.exit_code)
        }
        Command::Conic { framework } => {
            let tol = TolerancePolicy::default();
            let fw = io::read_framework(&framework)?;
            let dirs = member_directions(&fw, None, &tol);
            let vectors: Vec<_> = dirs.directions.iter().map(|(_, v)| v.clone()).collect();
            if vectors.is_empty() || vectors[0].is_empty() {
                println!("none (no usable member directions)");
                return Ok(0);
            }
            match conic_at_infinity(&vectors, &tol)? {
                Some(form) => {
                    let rows = io::matrix_rows(form.matrix());
                    println!("{}", serde_json::to_string(&rows)?);
                }
                None => println!("none"),
            }
            Ok(0)
        }
        Command::StressSpace { framework } => {
            let tol = TolerancePolicy::default();
            let fw = io::read_framework(&framework)?;
            let basis = equilibrium_stress_space(&fw, &tol);
            println!("dimension: {}", basis.len());
            for (idx, w) in basis.iter().enumerate() {
                let entries: Vec<String> = fw
                    .graph
                    .members()
                    .iter()
                    .enumerate()
                    .map(|(k, m)| format!("({},{}): {:+.6}", m.i + 1, m.j + 1, w.get(k)))
                    .collect();
                println!("basis[{idx}]: {}", entries.join("  "));
            }
            Ok(0)
        }
        Command::Transform {
            framework,
            certificate,
            map_spec,
            out_framework,
            out_certificate,
        } => {
            let tol = TolerancePolicy::default();
            let fw = io::read_framework(&framework)?;
            let cert = io::read_certificate(&certificate, &fw.graph)?;
            let rows: Vec<Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(&map_spec)?)?;
            let size = rows.len();
            if rows.iter().any(|r| r.len() != size) {
                return Err(Error::Schema("map matrix must be square".into()));
            }
            let flat: Vec<f64> = rows.into_iter().flatten().collect();
            let map = ProjectiveMap::new(nalgebra::DMatrix::from_row_slice(size, size, &flat))?;
            let (fw2, cert2) = projective_transform(&fw, &cert, &map, &tol)?;
            let fw_path = out_framework
                .unwrap_or_else(|| framework.with_extension("transformed.json"));
            let cert_path = out_certificate
                .unwrap_or_else(|| certificate.with_extension("transformed.json"));
            io::write_framework(&fw_path, &fw2)?;
            io::write_certificate(&cert_path, &cert2, &fw2.graph)?;
            println!(
                "wrote {} and {}",
                fw_path.display(),
                cert_path.display()
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::VertexOnHyperplane(_) => 3,
                // a rejected user stress is refuted evidence, not bad input
                Error::StressRejected(_) => 20,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
