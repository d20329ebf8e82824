//! The `superint` command line.
//!
//! Exit status: 0 on success, 1 when verification fails, 2 on argument
//! errors, 3 when a trajectory leaves the domain.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::catalog::{self, CatalogEntry, Expression};
use crate::dynamics::{self, DynamicsError, Integrator, PhasePoint, SimConfig, TableError};
use crate::phasepoly::{parse, poisson_bracket, PhasePoly};
use crate::ring::Rational;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "superint", about = "Exact checks of higher-order integrals for Holt-type potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite and write the JSON report.
    Verify {
        #[arg(long, default_value = "full")]
        suite: String,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the exact Poisson bracket {F, G}.
    Bracket {
        /// Catalog name or literal expression.
        f: String,
        /// Catalog name or literal expression.
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        k1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k3: Option<String>,
    },
    /// Inspect catalog entries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Integrate a catalog potential and report invariant drift.
    Simulate {
        potential: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        k1: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        k2: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        k3: f64,
        /// Start point as x,y,px,py.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        start: PhasePoint,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value = "leapfrog2")]
        integrator: Integrator,
        #[arg(long, default_value_t = dynamics::DEFAULT_Y_MIN)]
        y_min: f64,
        /// Trajectory table path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Show { name: String },
}

fn parse_point(s: &str) -> Result<PhasePoint, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [x, y, px, py] => Ok(PhasePoint::new(*x, *y, *px, *py)),
        _ => Err(format!("expected 4 comma-separated numbers, got {}", v.len())),
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| format!("'{s}' is not a rational: {e}"))
}

/// A catalog name or a literal expression.
fn resolve_expr(arg: &str) -> Result<PhasePoly, String> {
    match catalog::build(arg) {
        Ok(e) => match e.expression {
            Expression::Poly(p) => Ok(p),
            Expression::Field(_) => Err(format!("'{arg}' is a vector field, not a function")),
        },
        Err(_) => parse(arg).map_err(|e| format!("'{arg}': {e}")),
    }
}

/// Parse `argv` (including the program name) and run.
pub fn run<I, T, O, E>(argv: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn emit_report<O: Write, E: Write>(
    report: &verify::VerificationReport,
    path: Option<PathBuf>,
    out: &mut O,
    err: &mut E,
) -> Result<i32, Failure> {
    let json = report.to_json();
    match path {
        Some(p) => {
            std::fs::write(&p, json + "\n")?;
            for c in &report.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                writeln!(out, "{mark} {}", c.id)?;
            }
        }
        None => writeln!(out, "{json}")?,
    }
    for c in report.failed() {
        writeln!(err, "{} failed; residual: {}", c.id, c.residual_rendered.as_deref().unwrap_or(""))?;
    }
    Ok(if report.all_passed { EXIT_OK } else { EXIT_FAILED })
}

fn execute<O: Write, E: Write>(cmd: Command, out: &mut O, err: &mut E) -> Result<i32, Failure> {
    match cmd {
        Command::Verify { suite, out: path } => {
            if !verify::SUITES.contains(&suite.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown suite '{suite}' (available: {})",
                    verify::SUITES.join(", ")
                )));
            }
            emit_report(&verify::full_suite(), path, out, err)
        }
        Command::Bracket { f, g, k1, k2, k3 } => {
            let f = resolve_expr(&f).map_err(Failure::Usage)?;
            let g = resolve_expr(&g).map_err(Failure::Usage)?;
            let values = [k1, k2, k3]
                .map(|v| v.as_deref().map(parse_rational).transpose());
            let mut subst: [Option<Rational>; 3] = [None, None, None];
            for (slot, v) in subst.iter_mut().zip(values) {
                *slot = v.map_err(Failure::Usage)?;
            }
            let b = poisson_bracket(&f, &g).substitute_params(&subst);
            writeln!(out, "{b}")?;
            Ok(EXIT_OK)
        }
        Command::Catalog { action } => {
            match action {
                CatalogAction::List => {
                    for e in catalog::list() {
                        writeln!(out, "{}\t{}\t{}\t{}", e.name, e.kind, e.momentum_order, e.source)?;
                    }
                }
                CatalogAction::Show { name } => {
                    let e = catalog::build(&name).map_err(|e| Failure::Usage(e.to_string()))?;
                    writeln!(out, "{}", e.expression)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Simulate {
            potential,
            k1,
            k2,
            k3,
            start,
            h,
            t_end,
            integrator,
            y_min,
            out: path,
        } => {
            let entry = catalog::build(&potential).map_err(|e| Failure::Usage(e.to_string()))?;
            let base_name = if entry.name == "H_U" { "U" } else { entry.name.as_str() };
            let names = catalog::invariants_for(base_name).map_err(|e| Failure::Usage(e.to_string()))?;
            let invariants: Vec<CatalogEntry> =
                names.iter().map(|n| catalog::build(n).expect("catalog name")).collect();
            let cfg = SimConfig {
                h,
                t_end,
                integrator,
                y_min,
                k: [k1, k2, k3],
            };
            let traj = match dynamics::integrate(&entry, start, &cfg) {
                Ok(t) => t,
                Err(e @ DynamicsError::DomainViolation { .. }) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_DOMAIN);
                }
                Err(e) => return Err(Failure::Usage(e.to_string())),
            };
            let mut w = BufWriter::new(File::create(&path)?);
            match dynamics::write_table(&mut w, &traj, &invariants, cfg.k) {
                Ok(()) => {}
                Err(TableError::Io(e)) => return Err(Failure::Io(e)),
                Err(TableError::Dynamics(e)) => return Err(Failure::Usage(e.to_string())),
            }
            w.flush()?;
            let report = dynamics::drift_report(&traj, &invariants, cfg.k)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            write!(out, "{report}")?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{run_suite, SuiteInputs};

    #[test]
    fn failed_verification_exits_1() {
        let mut inputs = SuiteInputs::from_catalog();
        inputs.k3_4 = &inputs.k3_4 + &PhasePoly::x();
        let report = run_suite(&inputs);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = emit_report(&report, None, &mut out, &mut err).ok().unwrap();
        assert_eq!(code, EXIT_FAILED);
        let doc: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(doc["all_passed"], false);
        let err = String::from_utf8(err).unwrap();
        assert!(err.contains("conserved.K3_4 failed; residual: "));
    }

    #[test]
    fn point_and_rational_arguments() {
        assert_eq!(parse_point("1, 2,-3,4e-1").unwrap(), PhasePoint::new(1.0, 2.0, -3.0, 0.4));
        assert!(parse_point("1,2").is_err());
        assert_eq!(parse_rational("-3/6").unwrap(), crate::ring::rat(-1, 2));
        assert!(parse_rational("0.5").is_err());
    }
}
