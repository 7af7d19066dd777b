//! The `p4surf` command line: the two pipelines and wrappers around the
//! kernel operations for user-supplied ideal and matrix files.
//!
//! Exit codes: 0 pass, 1 assertion failure or failed computation, 2 usage
//! or parse error.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cohomology::{IdealCohomology, SheafCohomology};
use crate::construct::bridge::{bridge_link, link};
use crate::construct::liaison::{liaison_example, liaison_pipeline};
use crate::construct::monad::monad_pipeline;
use crate::construct::report::{run_dir, write_run};
use crate::construct::ConstructionReport;
use crate::error::{Error, Result};
use crate::groebner;
use crate::hilbert::{self, HilbertData};
use crate::ideal::{smoothness_certificate, Ideal, Verdict};
use crate::module::GradedModule;
use crate::parse::{format_ideal, parse_ideal, parse_matrix, parse_poly_file};
use crate::poly::Ring;
use crate::resolve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Seed for every "general" choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Characteristic of the coefficient field.
    #[arg(long = "char", global = true, default_value_t = 31991)]
    pub characteristic: u32,
    /// Root directory for pipeline run directories.
    #[arg(long, global = true, default_value = "runs")]
    pub out: PathBuf,
    /// Overwrite an existing run directory.
    #[arg(long, global = true)]
    pub force: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Groebner basis cache directory (default: $P4SURF_CACHE).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Parser, Debug)]
#[command(name = "p4surf", version, about = "Surfaces in P^4 over prime fields")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the elliptic surface from its monad and verify it.
    Monad {
        /// Also link X ∪ X0 to the general type surface T.
        #[arg(long)]
        bridge: bool,
    },
    /// Build the elliptic surface by two links and verify it.
    Liaison {
        /// Use the worked example for L, U0, U1 and D.
        #[arg(long)]
        example: bool,
    },
    /// Betti table of S/I (ideal file) or of coker A (matrix file).
    Betti { file: PathBuf },
    /// Hilbert series data of S/I or coker A.
    Hilbert { file: PathBuf },
    /// Table of h^i(I(j)) or h^i(F(j)) for the sheaf of a module.
    CohomologyTable {
        file: PathBuf,
        /// Twist range `lo:hi`.
        #[arg(long, default_value = "-1:3", allow_hyphen_values = true)]
        range: String,
    },
    /// Jacobian criterion for a codimension-2 ideal.
    SmoothCheck { file: PathBuf },
    /// The ideal linked to `file` by a complete intersection.
    Link {
        /// Comma-separated `.poly` files, or a single ideal file.
        #[arg(long)]
        ci: String,
        file: PathBuf,
        /// Write the residual ideal here instead of stdout.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Surface invariants of an ideal file, or of a JSON report (`-` reads
    /// standard input).
    Invariants {
        #[arg(default_value = "-")]
        file: String,
    },
}

/// Runs the command line and maps the outcome to an exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    init(&cli.config);
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("p4surf: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 2,
        _ => 1,
    }
}

fn init(config: &RunConfig) {
    let level = match config.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    if let Some(n) = config.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let dir = if config.no_cache {
        None
    } else {
        config.cache_dir.clone().or_else(|| std::env::var_os("P4SURF_CACHE").map(PathBuf::from))
    };
    groebner::set_cache_dir(dir);
}

/// Executes one command; `Ok(false)` means a check failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let c = &cli.config;
    let ring = Ring::p4(c.characteristic)?;
    match &cli.command {
        Command::Monad { bridge } => {
            let mut run = monad_pipeline(c.seed, c.characteristic)?;
            let mut files = run.artifacts.files(&ring);
            if *bridge {
                let art = bridge_link(&run.artifacts.ix, c.seed, &mut run.report)?;
                files.extend(art.files(&ring));
            }
            let name = if *bridge { "monad-bridge" } else { "monad" };
            finish(c, name, &files, &run.report)
        }
        Command::Liaison { example } => {
            let run = if *example {
                liaison_example(c.seed, c.characteristic)?
            } else {
                liaison_pipeline(c.seed, c.characteristic)?
            };
            finish(c, &run.report.pipeline.clone(), &run.artifacts.files(&ring), &run.report)
        }
        Command::Betti { file } => {
            let res = match read_input(&ring, file)? {
                Input::Ideal(i) => resolve::resolve_ideal(&ring, i.gens(), resolve::DEFAULT_MAX_STEPS)?,
                Input::Module(m) => resolve::minimal_free_resolution(&ring, &m, resolve::DEFAULT_MAX_STEPS)?,
            };
            let table = res.betti_table()?;
            emit(c, &table.to_text(), &json!(table.records()));
            Ok(true)
        }
        Command::Hilbert { file } => {
            let h = match read_input(&ring, file)? {
                Input::Ideal(i) => i.hilbert(),
                Input::Module(m) => {
                    HilbertData::from_basis(&groebner::buchberger(&ring, m.generators(), m.presentation.cols())?)
                }
            };
            let values: Vec<i64> = (0..=8).map(|d| h.function(d)).collect();
            let poly: Vec<i64> = (0..=4).map(|m| h.polynomial(m)).collect();
            let text = format!(
                "numerator (from t^{}): {:?}\nprojective dimension: {}\ndegree: {}\nHF(0..8): {:?}\nHP(0..4): {:?}\n",
                h.lo,
                h.numerator,
                h.projective_dim(),
                h.degree,
                values,
                poly
            );
            let value = json!({
                "lo": h.lo, "numerator": h.numerator, "projective_dim": h.projective_dim(),
                "degree": h.degree, "hilbert_function": values, "hilbert_polynomial": poly,
            });
            emit(c, &text, &value);
            Ok(true)
        }
        Command::CohomologyTable { file, range } => {
            let (lo, hi) = parse_range(range)?;
            let table = match read_input(&ring, file)? {
                Input::Ideal(i) => IdealCohomology::new(&i)?.table(lo, hi),
                Input::Module(m) => {
                    let sheaf = SheafCohomology::new(&ring, &m)?;
                    let mut entries = std::collections::BTreeMap::new();
                    for j in lo..=hi {
                        for i in 0..ring.nvars {
                            entries.insert((i, j), sheaf.h(i, j));
                        }
                    }
                    crate::cohomology::CohomologyTable { jmin: lo, jmax: hi, entries }
                }
            };
            emit(c, &table.to_text(), &serde_json::to_value(&table)?);
            Ok(true)
        }
        Command::SmoothCheck { file } => {
            let ideal = read_ideal(&ring, file)?;
            let cert = smoothness_certificate(&ideal, 2)?;
            let text = format!(
                "verdict: {:?}\n{} generators, {} minors, m-primary from degree {:?}\n{}{}\n",
                cert.verdict,
                cert.generators,
                cert.minors,
                cert.m_primary_degree,
                if cert.locus.is_empty() { String::new() } else { format!("singular locus: {}\n", cert.locus.join(", ")) },
                cert.note
            );
            emit(c, &text, &serde_json::to_value(&cert)?);
            Ok(cert.verdict == Verdict::Smooth)
        }
        Command::Link { ci, file, output } => {
            let ideal = read_ideal(&ring, file)?;
            let parts: Vec<&str> = ci.split(',').filter(|s| !s.is_empty()).collect();
            let gens = if parts.len() == 1 {
                parse_ideal(&ring, &read(Path::new(parts[0]))?)?
            } else {
                parts.iter().map(|p| parse_poly_file(&ring, &read(Path::new(p))?)).collect::<Result<_>>()?
            };
            if !gens.iter().all(|g| ideal.contains(g)) {
                return Err(Error::Usage("the complete intersection does not contain the ideal".into()));
            }
            let residual = link(&gens, &ideal)?;
            let body = format_ideal(&ring, residual.gens());
            match output {
                Some(path) => std::fs::write(path, &body)?,
                None => emit(c, &body, &json!(residual.to_strings())),
            }
            Ok(true)
        }
        Command::Invariants { file } => {
            let text = if file == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                read(Path::new(file))?
            };
            if text.trim_start().starts_with('{') {
                let report = ConstructionReport::from_json(&text)?;
                let inv = report
                    .invariants
                    .ok_or_else(|| Error::Usage("the report carries no invariants".into()))?;
                emit(c, &invariants_text(&inv), &serde_json::to_value(inv)?);
                return Ok(report.verdict);
            }
            let ideal = Ideal::new(&ring, parse_ideal(&ring, &text)?)?;
            let coh = IdealCohomology::new(&ideal)?;
            let inv = crate::cohomology::surface_invariants(&coh)?;
            emit(c, &invariants_text(&inv), &serde_json::to_value(inv)?);
            Ok(true)
        }
    }
}

fn invariants_text(inv: &hilbert::SurfaceInvariants) -> String {
    format!(
        "d = {}, pi = {}, chi = {}, p_g = {}, q = {}, K^2 = {}, s = {}\n",
        inv.d, inv.pi, inv.chi, inv.pg, inv.q, inv.k2, inv.s
    )
}

fn finish(c: &RunConfig, name: &str, files: &[(String, String)], report: &ConstructionReport) -> Result<bool> {
    let dir = run_dir(&c.out, name, c.seed, c.characteristic, c.force)?;
    write_run(&dir, files, report)?;
    match c.format {
        Format::Text => out(&format!("{}\nrun directory: {}\n", report.to_text(), dir.display())),
        Format::Json => out(&format!("{}\n", report.to_json())),
    }
    Ok(report.verdict)
}

fn emit(c: &RunConfig, text: &str, value: &serde_json::Value) {
    match c.format {
        Format::Text => out(text),
        Format::Json => out(&format!("{value}\n")),
    }
}

// A closed pipe on stdout is not an error worth a panic.
fn out(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

enum Input {
    Ideal(Ideal),
    Module(GradedModule),
}

/// A matrix file (header `rows ... cols ...`) is read as the module it
/// presents; anything else as an ideal.
fn read_input(ring: &Ring, path: &Path) -> Result<Input> {
    let text = read(path)?;
    let first = text.lines().map(|l| l.trim()).find(|l| !l.is_empty() && !l.starts_with('#'));
    if first.is_some_and(|l| l.starts_with("rows")) {
        Ok(Input::Module(GradedModule::coker(parse_matrix(ring, &text)?)))
    } else {
        Ok(Input::Ideal(Ideal::new(ring, parse_ideal(ring, &text)?)?))
    }
}

fn read_ideal(ring: &Ring, path: &Path) -> Result<Ideal> {
    match read_input(ring, path)? {
        Input::Ideal(i) => Ok(i),
        Input::Module(_) => Err(Error::Usage(format!("{} holds a matrix, expected an ideal", path.display()))),
    }
}

/// Parses `lo:hi`.
pub fn parse_range(s: &str) -> Result<(i32, i32)> {
    let bad = || Error::Usage(format!("bad range '{s}', expected lo:hi"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-1:3").unwrap(), (-1, 3));
        assert!(parse_range("3:1").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Usage("x".into())), 2);
        assert_eq!(exit_code(&Error::parse(1, 1, "x")), 2);
        assert_eq!(exit_code(&Error::Construction("x".into())), 1);
        assert!(Ring::p4(4).is_err());
    }
}
