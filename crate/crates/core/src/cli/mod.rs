//! Command-line front end. Exit codes: 0 when every check passes, 1 when
//! any check fails, 2 for invalid configuration.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::error::QoscError;
use crate::suite::{self, Command, OutputFormat, Report, RunConfig, Sweep};

pub mod render;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "qosc",
    version,
    about = "Verify the gl_q(n)-covariant oscillator algebra on a truncated Fock space",
    after_help = "Units: hbar = omega = m = 1. Complex values are written a+bi, e.g. 0.3, 0.2-0.1i, 0.5i."
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Deformation parameter, 0 < q < 1
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    q: f64,
    /// Number of oscillator modes n
    #[arg(long, default_value_t = 2)]
    modes: usize,
    /// Occupation cutoff M per mode
    #[arg(long, default_value_t = 5)]
    cutoff: usize,
    /// Acceptance tolerance applied to every check (default: per-check)
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Safe-sector margin (default: per-suite)
    #[arg(long)]
    margin: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Commands {
    /// Defining relations of the oscillator algebra
    Relations(Common),
    /// q-exponential recurrence, series/product agreement, Jackson integral
    Qfunctions(Common),
    /// Energy levels against both closed forms
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Keep only the lowest K levels
        #[arg(long)]
        levels: Option<usize>,
        /// Energies closer than this share a degeneracy group
        #[arg(long)]
        degeneracy_tol: Option<f64>,
    },
    /// Coherent-state normalization and lowering relation
    Coherent {
        #[command(flatten)]
        common: Common,
        /// Comma-separated z_1,...,z_n (default: random samples)
        #[arg(long, value_parser = parse_complex_list, allow_hyphen_values = true)]
        z: Option<ComplexList>,
    },
    /// Resolution of the identity by coherent states
    Completeness(Common),
    /// Shift, power and Weyl-Heisenberg identities
    Weyl {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_complex_list, allow_hyphen_values = true)]
        s: Option<ComplexList>,
        #[arg(long, value_parser = parse_complex_list, allow_hyphen_values = true)]
        t: Option<ComplexList>,
    },
    /// Hamiltonian forms and the q-canonical commutator
    Commutator(Common),
    /// Every suite, plus an optional level-flow sweep over q
    Report {
        #[command(flatten)]
        common: Common,
        /// q0:q1:steps
        #[arg(long)]
        sweep: Option<String>,
        /// CSV file for the sweep rows
        #[arg(long)]
        sweep_output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct ComplexList(Vec<Complex64>);

fn parse_complex_list(s: &str) -> Result<ComplexList, String> {
    s.split(',')
        .map(|part| parse_complex(part.trim()))
        .collect::<Result<_, _>>()
        .map(ComplexList)
}

/// `a`, `bi`, `a+bi`, `a-bi`; decimal point only.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let z: Complex64 = s.parse().map_err(|_| format!("'{s}' is not a complex literal a+bi"))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(z)
}

fn config_from(common: Common) -> RunConfig {
    RunConfig {
        q: common.q,
        modes: common.modes,
        cutoff: common.cutoff,
        tol: common.tol,
        margin: common.margin,
        format: common.format.into(),
        output: common.output,
        ..RunConfig::default()
    }
}

struct Invocation {
    command: Command,
    config: RunConfig,
    sweep_output: Option<PathBuf>,
}

fn invocation(cli: Cli) -> Result<Invocation, QoscError> {
    let mut sweep_output = None;
    let (command, config) = match cli.command {
        Commands::Relations(c) => (Command::Relations, config_from(c)),
        Commands::Qfunctions(c) => (Command::Qfunctions, config_from(c)),
        Commands::Spectrum {
            common,
            levels,
            degeneracy_tol,
        } => (
            Command::Spectrum,
            RunConfig {
                levels,
                degeneracy_tol,
                ..config_from(common)
            },
        ),
        Commands::Coherent { common, z } => (
            Command::Coherent,
            RunConfig {
                z: z.map(|l| l.0),
                ..config_from(common)
            },
        ),
        Commands::Completeness(c) => (Command::Completeness, config_from(c)),
        Commands::Weyl { common, s, t } => (
            Command::Weyl,
            RunConfig {
                s: s.map(|l| l.0),
                t: t.map(|l| l.0),
                ..config_from(common)
            },
        ),
        Commands::Commutator(c) => (Command::Commutator, config_from(c)),
        Commands::Report {
            common,
            sweep,
            sweep_output: out,
        } => {
            sweep_output = out;
            let sweep = sweep.map(|s| s.parse::<Sweep>()).transpose()?;
            (
                Command::Report,
                RunConfig {
                    sweep,
                    ..config_from(common)
                },
            )
        }
    };
    Ok(Invocation {
        command,
        config,
        sweep_output,
    })
}

fn is_config_error(err: &QoscError) -> bool {
    matches!(
        err,
        QoscError::InvalidQ(_)
            | QoscError::InvalidParameter(_)
            | QoscError::Domain { .. }
            | QoscError::ModeCount { .. }
            | QoscError::ModeOutOfRange { .. }
            | QoscError::OutsideCutoff { .. }
            | QoscError::MarginInsufficient { .. }
    )
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(report: &Report, sweep_output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), String> {
    let body = render::render(report).map_err(|e| format!("cannot render report: {e}"))?;
    match &report.config.output {
        Some(path) => write_atomic(path, body.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string())?,
    }
    if let (Some(path), Some(rows)) = (sweep_output, &report.sweep) {
        let csv = render::sweep_csv(rows).map_err(|e| format!("cannot render sweep: {e}"))?;
        write_atomic(path, csv.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let inv = match invocation(cli) {
        Ok(inv) => inv,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let report = match suite::run(inv.command, &inv.config) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return if is_config_error(&e) { EXIT_CONFIG } else { EXIT_FAIL };
        }
    };
    if let Err(msg) = emit(&report, inv.sweep_output.as_deref(), stdout) {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_CONFIG;
    }
    if report.passed() {
        EXIT_PASS
    } else {
        let _ = writeln!(
            stderr,
            "{} of {} checks failed",
            report.summary.failed, report.summary.total
        );
        EXIT_FAIL
    }
}

/// Shared by the binary.
pub fn main_exit() -> ! {
    let code = run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["qosc"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("0.3+0.2i").unwrap(), Complex64::new(0.3, 0.2));
        assert_eq!(parse_complex("-0.1-2i").unwrap(), Complex64::new(-0.1, -2.0));
        assert_eq!(parse_complex("0.5i").unwrap(), Complex64::new(0.0, 0.5));
        assert!(parse_complex("0,5").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("inf").is_err());
        assert_eq!(parse_complex_list("0.3, 0.2").unwrap().0.len(), 2);
    }

    #[test]
    fn invalid_q_is_a_config_error() {
        let (code, _, err) = exec(&["relations", "--q", "1.5"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("(0, 1)"), "{err}");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(exec(&["bogus"]).0, EXIT_CONFIG);
        assert_eq!(exec(&["relations", "--modes", "x"]).0, EXIT_CONFIG);
        assert_eq!(exec(&["weyl", "--s", "0.1,zz"]).0, EXIT_CONFIG);
        assert_eq!(exec(&["report", "--sweep", "0.1:0.9"]).0, EXIT_CONFIG);
        assert_eq!(exec(&["--help"]).0, EXIT_PASS);
    }

    #[test]
    fn relations_pass_and_fail() {
        let (code, out, _) = exec(&["relations", "--q", "0.5", "--modes", "2", "--cutoff", "5"]);
        assert_eq!(code, EXIT_PASS);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], "relations");
        let (code, out, _) = exec(&[
            "relations", "--q", "0.5", "--modes", "1", "--cutoff", "2", "--margin", "0", "--format", "text",
        ]);
        assert_eq!(code, EXIT_FAIL);
        assert!(out.contains("FAIL") && out.contains("truncation"), "{out}");
    }

    #[test]
    fn margin_too_small_for_commutator() {
        assert_eq!(exec(&["commutator", "--margin", "1"]).0, EXIT_CONFIG);
    }
}
