//! Command-line front end. Payloads go to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 ok, 2 input or parse error, 3 precondition violation,
//! 4 numerical failure (cap or iteration exhaustion).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bench::{run_benchmark, write_csv};
use crate::config::DEFAULTS;
use crate::duality::{polar_rpi, verify_rpi, RpiSource};
use crate::error::{Error, ErrorClass};
use crate::fixed_point::{equation_residual, iterate, StepTrace};
use crate::mlf::{construct_max, construct_sum, MlfCertificate};
use crate::numerics::{spectral_radius, Matrix};
use crate::sets::{planar, polar, HPolytope, SetExpr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mlyap", version, about = "Minkowski-Lyapunov functions and RPI sets for x+ = Ax")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    Max,
    Sum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Inequality,
    Equation,
    Rpi,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the spectral radius of a matrix.
    SpectralRadius { matrix: PathBuf },
    /// Build a max- or sum-form certificate.
    Construct {
        #[arg(long, value_enum)]
        form: FormArg,
        matrix: PathBuf,
        set: PathBuf,
        /// Defaults to (rho + 1) / 2.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = DEFAULTS.power_cap)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a certificate at every row of a headerless CSV.
    Eval { cert: PathBuf, points: PathBuf },
    /// Run the set recursion from a polytopic base set.
    FixedPoint {
        matrix: PathBuf,
        set: PathBuf,
        #[arg(long, default_value_t = DEFAULTS.fixed_point)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULTS.max_iter)]
        max_iter: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate or fixed-point result by sampling.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "inequality")]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Minimal-k timing protocol on random stable matrices; CSV on stdout.
    Bench {
        #[arg(long, value_parser = parse_dims, default_value = "2,3,5,8,13,21,34")]
        dims: Dims,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULTS.power_cap)]
        cap: usize,
    },
    /// Counterclockwise vertex list of a planar polytope.
    #[command(name = "export-2d")]
    Export2d {
        input: PathBuf,
        /// Export the polar set instead.
        #[arg(long)]
        polar: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone)]
struct Dims(Vec<usize>);

fn parse_dims(s: &str) -> Result<Dims, String> {
    let dims: Vec<usize> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| format!("bad dimension {t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if dims.is_empty() || dims.contains(&0) {
        return Err("dimensions must be a nonempty list of positive integers".into());
    }
    Ok(Dims(dims))
}

/// Output of the `fixed-point` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPointDoc {
    #[serde(rename = "S")]
    pub s: HPolytope,
    #[serde(rename = "A")]
    pub a: Matrix,
    #[serde(rename = "Q")]
    pub q: SetExpr,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub finitely_determined: bool,
    pub converged: bool,
    pub final_hausdorff: f64,
    #[serde(default)]
    pub trace: Vec<StepTrace>,
}

/// Matrices may be given as `{"rows": [...]}` or as a bare array of rows.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Wrapped(Matrix),
    Bare(Vec<Vec<f64>>),
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<i32, Failure>;

fn io_fail(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_fail(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Lib(Error::Parse(format!("{}: {e}", path.display()))))
}

fn read_matrix(path: &Path) -> Result<Matrix, Failure> {
    match read_json::<MatrixFile>(path)? {
        MatrixFile::Wrapped(m) => Ok(m),
        MatrixFile::Bare(rows) => Matrix::from_rows(&rows).map_err(|e| Failure::Lib(Error::Parse(e.to_string()))),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| io_fail(p, e)),
        None => writeln!(out, "{text}").map_err(|e| Failure::Io(e.to_string())),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("payloads serialize")
}

/// Fixed-point notation with 15 significant digits where reasonable.
pub fn format_significant(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.14e}")
    }
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e.class() {
                ErrorClass::Input => EXIT_INPUT,
                ErrorClass::Precondition => EXIT_PRECONDITION,
                ErrorClass::Numerical => EXIT_NUMERICAL,
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::SpectralRadius { matrix } => {
            let a = read_matrix(&matrix)?;
            if !a.is_square() {
                return Err(Error::InvalidArgument("matrix must be square".into()).into());
            }
            emit(out, None, &format_significant(spectral_radius(&a, DEFAULTS.eigen)?))?;
            Ok(EXIT_OK)
        }
        Command::Construct { form, matrix, set, gamma, cap, out: dest } => {
            let a = read_matrix(&matrix)?;
            let q: SetExpr = read_json(&set)?;
            let cert = match form {
                FormArg::Max => construct_max(&a, &q, gamma, cap)?,
                FormArg::Sum => construct_sum(&a, &q, gamma, cap)?,
            };
            emit(out, dest.as_deref(), &to_json(&cert))?;
            Ok(EXIT_OK)
        }
        Command::Eval { cert, points } => {
            let cert: MlfCertificate = read_json(&cert)?;
            let text = read_text(&points)?;
            let mut lines = Vec::new();
            for (no, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let x: Vec<f64> = line
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| Error::Parse(format!("{} line {}: {e}", points.display(), no + 1)))?;
                lines.push(format!("{}", cert.eval(&x)?));
            }
            for l in lines {
                emit(out, None, &l)?;
            }
            Ok(EXIT_OK)
        }
        Command::FixedPoint { matrix, set, tol, max_iter, out: dest } => {
            let a = read_matrix(&matrix)?;
            let q: SetExpr = read_json(&set)?;
            let rows = q
                .h_rows()
                .ok_or_else(|| Error::Unsupported("the recursion needs a polytopic base set".into()))?;
            let qh = HPolytope::new(q.dim(), rows)?;
            let r = iterate(&a, &qh, tol, max_iter)?;
            let converged = r.converged;
            let doc = FixedPointDoc {
                s: r.s,
                a,
                q,
                diagnostics: Diagnostics {
                    iterations: r.iterations,
                    finitely_determined: r.finitely_determined,
                    converged,
                    final_hausdorff: r.final_hausdorff,
                    trace: r.trace,
                },
            };
            emit(out, dest.as_deref(), &to_json(&doc))?;
            Ok(if converged { EXIT_OK } else { EXIT_NUMERICAL })
        }
        Command::Verify { input, mode, samples, seed } => verify(&input, mode, samples, seed, out),
        Command::Bench { dims, seed, cap } => {
            let rows = run_benchmark(&dims.0, seed, cap)?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf).map_err(|e| Failure::Io(e.to_string()))?;
            out.write_all(&buf).map_err(|e| Failure::Io(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::Export2d { input, polar: want_polar, out: dest } => {
            let set = match read_json::<SetExpr>(&input) {
                Ok(s) => s,
                Err(_) => SetExpr::HPolytope(read_json::<FixedPointDoc>(&input)?.s),
            };
            let set = if want_polar { polar(&set)? } else { set };
            let vertices = planar::polygon(&set)?;
            emit(out, dest.as_deref(), &to_json(&serde_json::json!({ "vertices": vertices })))?;
            Ok(EXIT_OK)
        }
    }
}

enum Subject {
    Certificate(MlfCertificate),
    FixedPoint(FixedPointDoc),
}

fn read_subject(path: &Path) -> Result<Subject, Failure> {
    let text = read_text(path)?;
    if let Ok(c) = serde_json::from_str::<MlfCertificate>(&text) {
        return Ok(Subject::Certificate(c));
    }
    serde_json::from_str::<FixedPointDoc>(&text)
        .map(Subject::FixedPoint)
        .map_err(|e| Failure::Lib(Error::Parse(format!("{}: neither a certificate nor a fixed-point result: {e}", path.display()))))
}

fn verify(input: &Path, mode: Mode, samples: usize, seed: u64, out: &mut dyn Write) -> CmdResult {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()).into());
    }
    let subject = read_subject(input)?;
    let report = match (mode, subject) {
        (Mode::Inequality, Subject::Certificate(c)) => {
            let r = c.verify_inequality(samples, seed)?;
            serde_json::json!({ "max_violation": r.max_violation, "argmax": r.argmax, "samples": samples, "seed": seed })
        }
        (Mode::Inequality, Subject::FixedPoint(d)) => {
            let s = SetExpr::HPolytope(d.s);
            let r = crate::sampling::unit_sphere(s.dim(), samples, seed)
                .iter()
                .map(|x| Ok(s.gauge(&d.a.mul_vec(x)?)? + d.q.gauge(x)? - s.gauge(x)?))
                .collect::<Result<Vec<f64>, Error>>()?
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            serde_json::json!({ "max_violation": r, "samples": samples, "seed": seed })
        }
        (Mode::Equation, Subject::FixedPoint(d)) => {
            let r = equation_residual(&SetExpr::HPolytope(d.s), &d.a, &d.q, samples, seed)?;
            serde_json::json!({ "equation_residual": r, "samples": samples, "seed": seed })
        }
        (Mode::Equation, Subject::Certificate(c)) => {
            let mut worst = 0.0f64;
            for x in crate::sampling::unit_sphere(c.dim(), samples, seed) {
                worst = worst.max(c.residual(&x)?.abs());
            }
            serde_json::json!({ "equation_residual": worst, "samples": samples, "seed": seed })
        }
        (Mode::Rpi, subject) => {
            let (z, a, q) = match subject {
                Subject::Certificate(c) => {
                    let (a, q) = (c.a.clone(), c.q.clone());
                    (polar_rpi(RpiSource::Certificate(c)), a, q)
                }
                Subject::FixedPoint(d) => (polar_rpi(RpiSource::Polytope(d.s)), d.a, d.q),
            };
            let r = verify_rpi(&z, &a, &polar(&q)?, samples, seed)?;
            serde_json::to_value(r).expect("report serializes")
        }
    };
    emit(out, None, &to_json(&report))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.2), "0.200000000000000");
        assert_eq!(format_significant(1.0), "1.00000000000000");
        assert_eq!(format_significant(0.0), "0");
    }

    #[test]
    fn dims_parser() {
        assert_eq!(parse_dims("2, 3,5").unwrap().0, vec![2, 3, 5]);
        assert!(parse_dims("").is_err());
        assert!(parse_dims("2,x").is_err());
        assert!(parse_dims("0").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["mlyap", "bench", "--dims", ""], &mut o, &mut e), EXIT_INPUT);
        assert_eq!(run(["mlyap", "nope"], &mut o, &mut e), EXIT_INPUT);
        assert_eq!(run(["mlyap", "spectral-radius", "/nonexistent/file.json"], &mut o, &mut e), EXIT_INPUT);
    }
}
