//! Command-line front end.
//!
//! Exit codes: 0 success, 1 semantic failure (a set that is not SIC),
//! 2 usage or parse error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::infotheory::{
    self, bounds_for_dimension, scrooge_asymptote, sic_upper_asymptote, BoundSet,
    InformationBreakdown,
};
use crate::optimize::{self, RNG_ALGORITHM};
use crate::sic::{self, FiducialFile, SicCertificate};
use crate::states::{
    pretty_good_povm, sic_ensemble_from_povm, Ensemble, OperatorSetFile, Povm, SetKind,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sicinfo",
    version,
    about = "Information extraction from quantum ensembles and measurements"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of closed-form bounds for d = 2..=dmax.
    Bounds {
        #[arg(long, default_value_t = 100)]
        dmax: usize,
    },
    /// Check the SIC conditions on an operator-list file or a built-in set.
    VerifySic {
        /// JSON file of kind povm, ensemble or operators.
        path: Option<PathBuf>,
        #[arg(long, value_parser = parse_builtin, conflicts_with = "path")]
        builtin: Option<Builtin>,
    },
    /// Mutual information of an ensemble measured by a POVM.
    Mutinfo {
        #[arg(long, required_unless_present = "ensemble_builtin")]
        ensemble: Option<PathBuf>,
        #[arg(long, value_parser = parse_builtin, conflicts_with = "ensemble")]
        ensemble_builtin: Option<Builtin>,
        #[arg(long, required_unless_present_any = ["povm_builtin", "pretty_good"])]
        povm: Option<PathBuf>,
        #[arg(long, value_parser = parse_builtin, conflicts_with = "povm")]
        povm_builtin: Option<Builtin>,
        /// Measure with the pretty-good POVM of the ensemble.
        #[arg(long, conflicts_with_all = ["povm", "povm_builtin"])]
        pretty_good: bool,
    },
    /// Certified lower bound on the informational power of a POVM.
    Power {
        #[command(flatten)]
        source: PovmSource,
        #[arg(long, default_value_t = 100)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ensemble size cap (default d²).
        #[arg(long)]
        max_support: Option<usize>,
    },
    /// Minimum outcome entropy over pure states.
    Minent {
        #[command(flatten)]
        source: PovmSource,
        #[arg(long, default_value_t = 100)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte-Carlo estimate of the rank-one informational-power floor.
    Scrooge {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a built-in set (or its pretty-good partner) as JSON.
    Export {
        #[arg(long, value_parser = parse_builtin)]
        builtin: Builtin,
        #[arg(long, value_enum)]
        kind: ExportKind,
        /// Export the pretty-good POVM of the ensemble instead.
        #[arg(long)]
        pretty_good: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Ensemble,
    Povm,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PovmSource {
    /// POVM JSON file.
    #[arg(long)]
    pub povm: Option<PathBuf>,
    #[arg(long, value_parser = parse_builtin)]
    pub builtin: Option<Builtin>,
    /// Fiducial JSON file; measures with its Weyl–Heisenberg orbit.
    #[arg(long)]
    pub fiducial: Option<PathBuf>,
}

/// Sets constructed in code rather than shipped as data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Tetrahedral,
    Antitetrahedral,
    Qutrit,
    QutritOrthonormal,
    Basis(usize),
}

fn parse_builtin(s: &str) -> std::result::Result<Builtin, String> {
    match s {
        "tetrahedral" => Ok(Builtin::Tetrahedral),
        "antitetrahedral" => Ok(Builtin::Antitetrahedral),
        "qutrit" => Ok(Builtin::Qutrit),
        "qutrit-orthonormal" => Ok(Builtin::QutritOrthonormal),
        other => match other.strip_prefix("basis-").map(str::parse::<usize>) {
            Some(Ok(d)) if d >= 1 => Ok(Builtin::Basis(d)),
            _ => Err(format!(
                "unknown built-in `{other}` (expected tetrahedral, antitetrahedral, qutrit, qutrit-orthonormal, basis-<d>)"
            )),
        },
    }
}

impl Builtin {
    /// Measurement form: SIC POVMs as is, pure-state ensembles rescaled to projectors.
    pub fn povm(self) -> Povm {
        match self {
            Builtin::Tetrahedral => sic::tetrahedral_povm(),
            Builtin::Antitetrahedral => {
                Povm::from_pure_effects(&[0.5; 4], &sic::antitetrahedral_kets())
                    .expect("antitetrahedral POVM is valid")
            }
            Builtin::Qutrit => sic::qutrit_sic_povm(),
            Builtin::QutritOrthonormal => {
                Povm::from_pure_effects(&[1.0; 3], &sic::qutrit_orthonormal_kets())
                    .expect("orthonormal basis is a POVM")
            }
            Builtin::Basis(d) => Povm::computational_basis(d),
        }
    }

    /// Ensemble form: SIC POVMs renormalized to SIC ensembles.
    pub fn ensemble(self) -> Ensemble {
        match self {
            Builtin::Tetrahedral | Builtin::Qutrit => {
                sic_ensemble_from_povm(&self.povm()).expect("built-in SIC renormalizes")
            }
            Builtin::Antitetrahedral => sic::antitetrahedral_ensemble(),
            Builtin::QutritOrthonormal => sic::qutrit_orthonormal_ensemble(),
            Builtin::Basis(d) => {
                let p = Povm::computational_basis(d);
                Ensemble::new(
                    p.effects()
                        .iter()
                        .map(|e| e.scale(1.0 / d as f64))
                        .collect(),
                )
                .expect("uniform basis ensemble is valid")
            }
        }
    }
}

/// Failure of a command, mapped onto an exit code.
#[derive(Debug)]
enum CmdError {
    Usage(String),
    Failed(String),
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        CmdError::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<String, CmdError>;

/// CSV table of bounds for `d = 2..=dmax` with trailing comment rows.
pub fn bounds_csv(dmax: usize) -> Result<String> {
    let rows = bounds_table(dmax)?;
    let mut out = String::from("d,holevo,sic_upper,scrooge_lower,rastegin_cond,pg_sic_value\n");
    for b in &rows {
        writeln!(
            out,
            "{},{:.6},{:.6},{:.6},{:.6},{:.6}",
            b.dim, b.holevo, b.sic_upper, b.scrooge_lower, b.rastegin_cond, b.pg_sic_value
        )
        .unwrap();
    }
    writeln!(
        out,
        "# asymptotes: scrooge_lower->{:.6}, sic_upper->{:.1}",
        scrooge_asymptote(),
        sic_upper_asymptote()
    )
    .unwrap();
    writeln!(
        out,
        "# note: pg_sic_value is evaluated on the SIC joint distribution; the coefficient form (2d log d - (d-1) log(d+1))/(d^2(d+1)) gives {:.6} at d=2",
        infotheory::pg_sic_coefficient_form(2)?
    )
    .unwrap();
    Ok(out)
}

pub fn bounds_table(dmax: usize) -> Result<Vec<BoundSet>> {
    if dmax < 2 {
        return Err(Error::InvalidDimension(dmax));
    }
    (2..=dmax).map(bounds_for_dimension).collect()
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn cmd_bounds(dmax: usize, format: Format) -> CmdResult {
    if dmax < 2 {
        return Err(CmdError::Usage(format!(
            "--dmax must be at least 2, got {dmax}"
        )));
    }
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Table {
                rows: Vec<BoundSet>,
                scrooge_lower_asymptote: f64,
                sic_upper_asymptote: f64,
            }
            Ok(to_json(&Table {
                rows: bounds_table(dmax)?,
                scrooge_lower_asymptote: scrooge_asymptote(),
                sic_upper_asymptote: sic_upper_asymptote(),
            }))
        }
        Format::Text | Format::Csv => Ok(bounds_csv(dmax)?),
    }
}

fn load_operator_file(path: &Path) -> std::result::Result<OperatorSetFile, CmdError> {
    Ok(OperatorSetFile::read(path)?)
}

fn certificate_output(cert: &SicCertificate) -> CmdResult {
    let verdict = if cert.passes { "PASS" } else { "FAIL" };
    let mut out = format!("{verdict}: {}\n", cert.summary());
    out.push_str(&to_json(cert));
    if cert.passes {
        Ok(out)
    } else {
        Err(CmdError::Failed(out))
    }
}

fn cmd_verify_sic(path: Option<PathBuf>, builtin: Option<Builtin>) -> CmdResult {
    let ops = match (path, builtin) {
        (_, Some(b)) => b.povm().into_effects(),
        (Some(path), None) => load_operator_file(&path)?.operators()?,
        (None, None) => {
            return Err(CmdError::Usage("give a file or --builtin".into()));
        }
    };
    certificate_output(&sic::is_sic(&ops)?)
}

#[derive(Serialize)]
struct MutinfoReport {
    dim: usize,
    #[serde(flatten)]
    breakdown: InformationBreakdown,
}

fn cmd_mutinfo(
    ensemble: Option<PathBuf>,
    ensemble_builtin: Option<Builtin>,
    povm: Option<PathBuf>,
    povm_builtin: Option<Builtin>,
    pretty_good: bool,
    format: Format,
) -> CmdResult {
    let e = match (ensemble, ensemble_builtin) {
        (_, Some(b)) => b.ensemble(),
        (Some(path), None) => load_operator_file(&path)?.to_ensemble()?,
        (None, None) => return Err(CmdError::Usage("missing ensemble".into())),
    };
    let p = if pretty_good {
        pretty_good_povm(&e)?
    } else {
        match (povm, povm_builtin) {
            (_, Some(b)) => b.povm(),
            (Some(path), None) => load_operator_file(&path)?.to_povm()?,
            (None, None) => return Err(CmdError::Usage("missing POVM".into())),
        }
    };
    let joint = infotheory::joint_distribution(&e, &p)?;
    let b = InformationBreakdown::of(&joint);
    Ok(match format {
        Format::Json => to_json(&MutinfoReport {
            dim: e.dim(),
            breakdown: b,
        }),
        Format::Text | Format::Csv => format!(
            "I={:.6}\nH(X)={:.6}\nH(Y)={:.6}\nH(X,Y)={:.6}\nH(Y|X)={:.6}\n",
            b.mutual_information, b.h_x, b.h_y, b.h_xy, b.h_y_given_x
        ),
    })
}

fn resolve_povm(source: &PovmSource) -> std::result::Result<Povm, CmdError> {
    if let Some(b) = source.builtin {
        return Ok(b.povm());
    }
    if let Some(path) = &source.povm {
        return Ok(load_operator_file(path)?.to_povm()?);
    }
    if let Some(path) = &source.fiducial {
        let f = FiducialFile::read(path)?.to_state()?;
        return Ok(sic::wh_covariant_povm(&f));
    }
    Err(CmdError::Usage(
        "give --povm, --builtin or --fiducial".into(),
    ))
}

fn cmd_scrooge(dim: usize, samples: usize, seed: u64, format: Format) -> CmdResult {
    let estimate = optimize::scrooge_lower_bound_estimate(dim, samples, seed)?;
    let closed_form = infotheory::scrooge_lower(dim)?;
    Ok(match format {
        Format::Json => {
            #[derive(Serialize)]
            struct ScroogeReport<'a> {
                dim: usize,
                samples: usize,
                seed: u64,
                rng: &'a str,
                estimate: f64,
                closed_form: f64,
            }
            to_json(&ScroogeReport {
                dim,
                samples,
                seed,
                rng: RNG_ALGORITHM,
                estimate,
                closed_form,
            })
        }
        Format::Text | Format::Csv => {
            format!("estimate={estimate:.6}\nclosed_form={closed_form:.6}\n")
        }
    })
}

fn cmd_export(builtin: Builtin, kind: ExportKind, pretty_good: bool) -> CmdResult {
    let file = match (kind, pretty_good) {
        (ExportKind::Ensemble, _) => OperatorSetFile::from_ensemble(&builtin.ensemble()),
        (ExportKind::Povm, false) => OperatorSetFile::from_povm(&builtin.povm()),
        (ExportKind::Povm, true) => {
            OperatorSetFile::from_povm(&pretty_good_povm(&builtin.ensemble())?)
        }
    };
    debug_assert!(matches!(file.kind, SetKind::Ensemble | SetKind::Povm));
    let mut s = file.to_json();
    s.push('\n');
    Ok(s)
}

fn execute(cli: Cli) -> CmdResult {
    let format = cli.format;
    match cli.command {
        Command::Bounds { dmax } => cmd_bounds(dmax, format),
        Command::VerifySic { path, builtin } => cmd_verify_sic(path, builtin),
        Command::Mutinfo {
            ensemble,
            ensemble_builtin,
            povm,
            povm_builtin,
            pretty_good,
        } => cmd_mutinfo(
            ensemble,
            ensemble_builtin,
            povm,
            povm_builtin,
            pretty_good,
            format,
        ),
        Command::Power {
            source,
            starts,
            seed,
            max_support,
        } => {
            let p = resolve_povm(&source)?;
            let cap = max_support.unwrap_or(p.dim() * p.dim());
            let report = optimize::informational_power_lower_bound(&p, starts, seed, cap)?;
            Ok(to_json(&report))
        }
        Command::Minent {
            source,
            starts,
            seed,
        } => {
            let p = resolve_povm(&source)?;
            Ok(to_json(&optimize::min_output_entropy(&p, starts, seed)?))
        }
        Command::Scrooge { dim, samples, seed } => cmd_scrooge(dim, samples, seed, format),
        Command::Export {
            builtin,
            kind,
            pretty_good,
        } => cmd_export(builtin, kind, pretty_good),
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let out_path = cli.out.clone();
    let (code, body) = match execute(cli) {
        Ok(body) => (EXIT_OK, body),
        Err(CmdError::Failed(body)) => (EXIT_FAILED, body),
        Err(CmdError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    match out_path {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, body) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = stdout.write_all(body.as_bytes());
        }
    }
    code
}
