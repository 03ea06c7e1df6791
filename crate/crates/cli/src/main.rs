//! quasicomb: exact lattice/coset algebra, comb distributions and their
//! symbolic Fourier transform, with numerical verification commands.
//!
//! Exit codes: 0 success, 2 input/parse error, 3 unsupported operation,
//! 4 verification/tolerance failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use quasicomb_core::comb::CombDistribution;
use quasicomb_core::detect;
use quasicomb_core::error::Error;
use quasicomb_core::fourier;
use quasicomb_core::io::Document;
use quasicomb_core::lattice::Lattice;
use quasicomb_core::testfn::{self, AlmostPeriodScan, TestFunction};
use quasicomb_core::wfunc::WFunction;
use quasicomb_core::coset_ring;

mod examples;

#[derive(Parser)]
#[command(
    name = "quasicomb",
    version,
    about = "lattice comb distributions and their Fourier transforms"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fourier transform of a distribution document.
    Fourier {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inverse Fourier transform of a distribution document.
    Ifourier {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair a distribution with a test function: prints <f, phi> and the
    /// certified truncation bound.
    Pair {
        distribution: PathBuf,
        testfunction: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Check Poisson's formula for a lattice document (standard Gaussian
    /// test function unless one is supplied).
    PoissonCheck {
        lattice: PathBuf,
        testfunction: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Lattice algebra on lattice documents.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Normalize a coset expression into disjoint cosets plus residue.
    Normalize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a CSV point cloud by a union of lattice cosets.
    Detect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_j: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan for epsilon-almost periods of a coefficient function. The input
    /// is a distribution document (the first comb term's coefficient is
    /// scanned) or a bare W-function term list.
    AlmostPeriods {
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Scan window "lo:hi" for the shift tau.
        #[arg(long, default_value = "0:50")]
        window: String,
        #[arg(long, default_value_t = 0.01)]
        pitch: f64,
    },
    /// Run a named verification preset and report the residual.
    VerifyExample { name: String },
}

#[derive(Subcommand)]
enum LatticeOp {
    /// Dual (conjugate) lattice.
    Dual {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersection of two lattices.
    Intersect {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Index [ambient : sub] of a sublattice.
    Index { sub: PathBuf, ambient: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::UnsupportedTerm(_) | Error::NumericModeUnsupported => 3,
        Error::NonconvergentTail { .. } => 4,
        _ => 2,
    }
}

fn load_distribution(path: &Path) -> Result<CombDistribution, Error> {
    match Document::load_from_path(path)? {
        Document::Distribution(d) => Ok(d),
        other => Err(Error::Document(format!(
            "expected a distribution document, got {}",
            other.kind()
        ))),
    }
}

fn load_lattice(path: &Path) -> Result<Lattice, Error> {
    match Document::load_from_path(path)? {
        Document::Lattice(l) => Ok(l),
        other => Err(Error::Document(format!(
            "expected a lattice document, got {}",
            other.kind()
        ))),
    }
}

fn load_testfunction(path: &Path) -> Result<TestFunction, Error> {
    match Document::load_from_path(path)? {
        Document::TestFunction(t) => Ok(t),
        other => Err(Error::Document(format!(
            "expected a testfunction document, got {}",
            other.kind()
        ))),
    }
}

fn emit(doc: &Document, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => doc.save_to_path(path),
        None => {
            println!("{}", doc.save_string());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Fourier { input, out } => {
            let f = load_distribution(&input)?;
            let ft = fourier::fourier(&f)?;
            emit(&Document::Distribution(ft), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Ifourier { input, out } => {
            let f = load_distribution(&input)?;
            let ift = fourier::inverse_fourier(&f)?;
            emit(&Document::Distribution(ift), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Pair {
            distribution,
            testfunction,
            tol,
        } => {
            let f = load_distribution(&distribution)?;
            let phi = load_testfunction(&testfunction)?;
            let p = testfn::pair(&f, &phi, tol)?;
            println!(
                "{}",
                json!({
                    "value": [p.value.re, p.value.im],
                    "certified_bound": p.certified_bound,
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::PoissonCheck {
            lattice,
            testfunction,
            tol,
        } => {
            let l = load_lattice(&lattice)?;
            let phi = match testfunction {
                Some(p) => load_testfunction(&p)?,
                None => TestFunction::gaussian(l.dim()),
            };
            let rep = testfn::poisson_check(&l, &phi, tol)?;
            println!(
                "{}",
                json!({
                    "lhs": [rep.lhs.re, rep.lhs.im],
                    "rhs": [rep.rhs.re, rep.rhs.im],
                    "residual": rep.residual,
                    "certified_bound": rep.certified_bound,
                    "passes": rep.passes,
                })
            );
            if rep.passes {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("poisson residual {} exceeds tol {}", rep.residual, tol);
                Ok(ExitCode::from(4))
            }
        }
        Cmd::Lattice { op } => run_lattice(op),
        Cmd::Normalize { input, out } => {
            let expr = match Document::load_from_path(&input)? {
                Document::CosetExpression(e) => e,
                other => {
                    return Err(Error::Document(format!(
                        "expected a coset_expression document, got {}",
                        other.kind()
                    )))
                }
            };
            let sys = coset_ring::normalize(&expr)?;
            let report = json!({
                "cosets": sys
                    .full_rank_cosets
                    .iter()
                    .map(|c| serde_json::to_value(c).expect("coset serializes"))
                    .collect::<Vec<_>>(),
                "residue": sys
                    .residue
                    .iter()
                    .map(|(s, m)| json!({
                        "rank": s.rank(),
                        "generators": s.generators().iter()
                            .map(|g| g.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "offset": s.offset().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "multiplicity": m,
                    }))
                    .collect::<Vec<_>>(),
            });
            emit(&Document::Report(report), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Detect {
            input,
            max_j,
            tol,
            out,
        } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::Document(format!("read {input:?}: {e}")))?;
            let cloud = detect::PointCloud::from_csv(&text)?;
            let fit = detect::fit_cosets(&cloud, max_j, tol)?;
            eprintln!(
                "fit: J={} uncovered={} overcover={}",
                fit.j,
                fit.uncovered.len(),
                fit.overcover.len()
            );
            emit(&Document::Fit(fit), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::AlmostPeriods {
            input,
            epsilon,
            window,
            pitch,
        } => {
            let g = load_wfunction(&input)?;
            let (lo, hi) = parse_window(&window)?;
            let mut scan = AlmostPeriodScan::new(epsilon, (lo, hi), pitch);
            if g.dim() > 1 {
                let mut dir = vec![0.0; g.dim()];
                dir[0] = 1.0;
                scan.direction = Some(dir);
            }
            let rep = testfn::almost_periods(&g, &scan);
            println!(
                "{}",
                json!({
                    "epsilon": rep.epsilon,
                    "window": [rep.window.0, rep.window.1],
                    "scan_pitch": rep.scan_pitch,
                    "sample_pitch": rep.sample_pitch,
                    "periods_found": rep.periods_found.len(),
                    "first_periods": rep.periods_found.iter().take(16).collect::<Vec<_>>(),
                    "max_gap": rep.max_gap,
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyExample { name } => examples::run(&name),
    }
}

fn run_lattice(op: LatticeOp) -> Result<ExitCode, Error> {
    match op {
        LatticeOp::Dual { input, out } => {
            let l = load_lattice(&input)?;
            emit(&Document::Lattice(l.dual()), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        LatticeOp::Intersect { a, b, out } => {
            let la = load_lattice(&a)?;
            let lb = load_lattice(&b)?;
            let both = la.intersect(&lb)?;
            emit(&Document::Lattice(both), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        LatticeOp::Index { sub, ambient } => {
            let ls = load_lattice(&sub)?;
            let la = load_lattice(&ambient)?;
            let idx = Lattice::index_in(&ls, &la)?;
            println!("{}", json!({ "index": idx }));
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// A distribution document (first comb term's coefficient) or a bare
/// W-function term list.
fn load_wfunction(path: &Path) -> Result<WFunction, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("read {path:?}: {e}")))?;
    if let Ok(Document::Distribution(d)) = Document::load_str(&text) {
        for term in d.terms() {
            if let quasicomb_core::CombTerm::Atoms { coeff, .. } = term {
                return Ok(coeff.clone());
            }
        }
        return Err(Error::Document(
            "distribution has no comb term with a coefficient".into(),
        ));
    }
    serde_json::from_str::<WFunction>(&text).map_err(|e| {
        Error::Document(format!(
            "neither a distribution document nor a W-function term list: {e}"
        ))
    })
}

fn parse_window(s: &str) -> Result<(f64, f64), Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::Document(format!(
            "window must be \"lo:hi\", got {s:?}"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|e| Error::Document(format!("window lo: {e}")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|e| Error::Document(format!("window hi: {e}")))?;
    if !(lo < hi) {
        return Err(Error::Document("window lo must be below hi".into()));
    }
    Ok((lo, hi))
}
