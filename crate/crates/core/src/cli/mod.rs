//! Batch front end: config loading, the five commands, CSV/JSON output and
//! exit codes.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | invalid configuration or arguments |
//! | 2 | verification ran but a tolerance was exceeded |
//! | 3 | numerical or convergence failure |

mod args;
mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

pub use args::{run_from_args, Args, Command};
pub use config::{Format, GridConfig, MassConfig, OutputConfig, ReferenceConfig, RunConfig, SampleConfig};

use crate::oracles::operator::MASS_FLOOR;
use crate::pct::{compare_paper_form, DeviationReport, EquationTag, TargetSystem};
use crate::refmodels::SpectrumTable;
use crate::verify::{verify, VerificationReport, VerifySettings};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_TOLERANCE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("invalid configuration: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("numerical failure: {0}")]
    Numeric(#[source] crate::Error),
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Parse { .. } | Self::Invalid(_) | Self::Io { .. } => EXIT_VALIDATION,
            Self::Numeric(_) => EXIT_NUMERIC,
        }
    }

    /// Parameter and domain errors are the user's; the rest are numerical.
    pub(crate) fn from_invalid(e: crate::Error) -> Self {
        use crate::Error::*;
        match e {
            InvalidParameters(v) => Self::Invalid(v),
            Constraint { relation } => Self::Invalid(vec![format!("{relation} violated")]),
            Domain(_) | Unsupported(_) | Range { .. } | Degree { .. } => Self::Invalid(vec![e.to_string()]),
            other => Self::Numeric(other),
        }
    }
}

/// What a command produced: the document for `--output`, one-line notes
/// for stderr, and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub body: String,
    pub notes: Vec<String>,
    pub exit_code: u8,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Floats with 17 significant digits, which round-trip every `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Comma separated, header first, LF line endings.
pub fn csv_table(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize)]
struct ValidationDocument {
    valid: bool,
    violations: Vec<String>,
}

pub fn cmd_validate(config: &RunConfig) -> CommandOutput {
    let violations = config.violations();
    let valid = violations.is_empty();
    let body = match config.output.format {
        Format::Json => json(&ValidationDocument {
            valid,
            violations: violations.clone(),
        }),
        Format::Csv => {
            let mut s = String::from("violation\n");
            for v in &violations {
                let _ = writeln!(s, "\"{}\"", v.replace('"', "\"\""));
            }
            s
        }
    };
    let notes = if valid {
        vec!["configuration is valid".to_string()]
    } else {
        violations.iter().map(|v| format!("violation: {v}")).collect()
    };
    CommandOutput {
        body,
        notes,
        exit_code: if valid { EXIT_OK } else { EXIT_VALIDATION },
    }
}

/// Analytic energies of the first `levels` states of the built target.
pub fn spectrum(config: &RunConfig) -> Result<SpectrumTable, CliError> {
    Ok(config.target()?.reference().spectrum_table(config.levels))
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let table = spectrum(config)?;
    let body = match config.output.format {
        Format::Json => json(&table),
        Format::Csv => {
            let mut s = String::from("k,energy,parity\n");
            for l in &table.levels {
                let parity = serde_json::to_value(l.parity).expect("parity serializes");
                let _ = writeln!(
                    s,
                    "{},{},{}",
                    l.k,
                    format_float(l.energy),
                    parity.as_str().unwrap_or("")
                );
            }
            s
        }
    };
    Ok(CommandOutput {
        body,
        notes: Vec::new(),
        exit_code: EXIT_OK,
    })
}

/// `z` points used by `build-target` and `compare-paper`.
pub fn sample_points(ts: &TargetSystem, config: &RunConfig) -> Result<Vec<f64>, CliError> {
    let n = config.sample.points;
    match config.sample.z_range {
        Some((a, b)) => {
            let dom = ts.z_domain();
            if !(a >= dom.lo && b <= dom.hi) {
                return Err(CliError::Invalid(vec![format!(
                    "sample range ({a}, {b}) outside the z domain {dom}"
                )]));
            }
            Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
        }
        None => {
            let range = ts.profile().map_range();
            let eps = config.grid.eps_map;
            let (lo, hi) = (range.lo + eps, range.hi - eps);
            if lo >= hi {
                return Err(CliError::Invalid(vec![format!(
                    "grid.eps_map = {eps} leaves nothing of the range {range}"
                )]));
            }
            (0..n)
                .map(|j| {
                    let y = lo + (hi - lo) * (j as f64 + 0.5) / n as f64;
                    ts.profile().map_inverse(y).map_err(CliError::Numeric)
                })
                .collect()
        }
    }
}

/// Sampled target: columns `z, m, f, U_target, psi_0 … psi_{K−1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetTable {
    pub target: TargetSystem,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Sample points dropped because `m` vanishes there.
    pub skipped: Vec<f64>,
}

pub fn target_table(config: &RunConfig) -> Result<TargetTable, CliError> {
    let ts = config.target()?;
    let points = sample_points(&ts, config)?;
    let quad = VerifySettings::default().quad;
    let states = (0..config.levels)
        .map(|k| ts.transported_state(k, &quad))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(CliError::Numeric)?;
    let mut columns: Vec<String> = ["z", "m", "f", "U_target"].iter().map(|s| s.to_string()).collect();
    columns.extend((0..config.levels).map(|k| format!("psi_{k}")));
    let profile = ts.profile();
    let mut rows = Vec::with_capacity(points.len());
    let mut skipped = Vec::new();
    for z in points {
        let m = profile.mass_value(z).map_err(CliError::Numeric)?;
        if m < MASS_FLOOR {
            skipped.push(z);
            continue;
        }
        let mut row = vec![
            z,
            m,
            profile.map_forward(z).map_err(CliError::Numeric)?,
            ts.target_potential(z).map_err(CliError::Numeric)?,
        ];
        for s in &states {
            row.push(s.value(z).map_err(CliError::Numeric)?);
        }
        rows.push(row);
    }
    Ok(TargetTable {
        target: ts,
        columns,
        rows,
        skipped,
    })
}

pub fn cmd_build_target(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let table = target_table(config)?;
    let body = match config.output.format {
        Format::Json => json(&table),
        Format::Csv => csv_table(&table.columns, &table.rows),
    };
    let ts = &table.target;
    let mut notes = vec![format!(
        "target: mass kind {} with {} ({:?} mode), mapping constant {}, {} samples",
        ts.profile().kind(),
        ts.reference().kind(),
        ts.mode(),
        ts.profile().shift(),
        table.rows.len()
    )];
    if !table.skipped.is_empty() {
        notes.push(format!("skipped {} points where m = 0", table.skipped.len()));
    }
    Ok(CommandOutput {
        body,
        notes,
        exit_code: EXIT_OK,
    })
}

pub fn verify_settings(config: &RunConfig) -> VerifySettings {
    VerifySettings {
        levels: config.levels,
        grid: config.grid.n,
        eps_map: config.grid.eps_map,
        tolerances: config.tolerances,
        ..VerifySettings::default()
    }
}

pub fn verification(config: &RunConfig) -> Result<VerificationReport, CliError> {
    let ts = config.target()?;
    ts.truncated_domain(config.grid.eps_map)
        .map_err(CliError::from_invalid)?;
    verify(&ts, &verify_settings(config)).map_err(CliError::Numeric)
}

pub fn cmd_verify(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let report = verification(config)?;
    let body = match config.output.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut s = String::from(
                "k,e_analytic,e_numeric,abs_err,rel_err,residual_norm,nodes_reference,nodes_transported,nodes_numeric\n",
            );
            for ((row, res), nodes) in report.rows.iter().zip(&report.residual_norms).zip(&report.node_counts) {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    row.k,
                    format_float(row.e_analytic),
                    format_float(row.e_numeric),
                    format_float(row.abs_err),
                    format_float(row.rel_err),
                    format_float(*res),
                    nodes.reference,
                    nodes.transported,
                    nodes.numeric
                );
            }
            s
        }
    };
    let c = &report.checks;
    let conv = &report.convergence;
    let mut notes = vec![
        format!(
            "max rel err {:.3e} (tol {:e}), gram defect {:.3e}, grids {:?}",
            report.max_rel_err(),
            report.tolerances.isospectral_rel,
            report.gram_defect,
            conv.grids.iter().map(|g| g.n).collect::<Vec<_>>()
        ),
        format!(
            "checks: isospectral {}, residual {}, gram {}, nodes {}, truncation {}",
            c.isospectral, c.residual, c.gram, c.nodes, c.truncation
        ),
    ];
    notes.push(if report.passed {
        "verification passed".to_string()
    } else {
        "verification FAILED".to_string()
    });
    Ok(CommandOutput {
        body,
        notes,
        exit_code: if report.passed { EXIT_OK } else { EXIT_TOLERANCE },
    })
}

pub fn paper_comparison(config: &RunConfig, tag: EquationTag) -> Result<DeviationReport, CliError> {
    if config.mass.kind != tag.mass_kind() || config.reference.kind() != tag.reference_kind() {
        return Err(CliError::Invalid(vec![format!(
            "{tag} is a kind {} + {} form, configuration is kind {} + {}",
            tag.mass_kind(),
            tag.reference_kind(),
            config.mass.kind,
            config.reference.kind()
        )]));
    }
    let ts = config.target()?;
    let points = sample_points(&ts, config)?;
    compare_paper_form(&ts, tag, &points).map_err(CliError::from_invalid)
}

fn optional(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

pub fn cmd_compare_paper(config: &RunConfig, tag: EquationTag) -> Result<CommandOutput, CliError> {
    let report = paper_comparison(config, tag)?;
    let body = match config.output.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut s = String::from("z,engine,paper,deviation\n");
            for p in &report.points {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    format_float(p.z),
                    optional(p.engine),
                    optional(p.paper),
                    optional(p.deviation)
                );
            }
            s
        }
    };
    Ok(CommandOutput {
        body,
        notes: vec![format!(
            "{}: max |deviation| {:.6e}, mean {:.6e} over {} points ({} skipped)",
            report.label, report.max_abs_deviation, report.mean_abs_deviation, report.evaluated, report.skipped
        )],
        exit_code: EXIT_OK,
    })
}

pub fn run(command: &Command, config: &RunConfig) -> Result<CommandOutput, CliError> {
    match command {
        Command::Validate => Ok(cmd_validate(config)),
        Command::Spectrum => cmd_spectrum(config),
        Command::BuildTarget => cmd_build_target(config),
        Command::Verify => cmd_verify(config),
        Command::ComparePaper { tag } => cmd_compare_paper(config, *tag),
    }
}

/// Writes the body to `path`, or stdout when `None`.
pub fn write_body(body: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}
