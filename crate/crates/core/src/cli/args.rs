use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::{run, write_body, CliError, Format, RunConfig, EXIT_OK, EXIT_VALIDATION};
use crate::pct::{CorrectionCoefficient, EquationTag};

#[derive(Debug, Clone, Parser)]
#[command(name = "pdem", version, about = "Build and verify position-dependent-mass targets")]
pub struct Args {
    /// Run configuration (flat `key = value` file).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_name = "csv|json")]
    pub format: Option<Format>,
    /// Number of levels, overriding `levels` in the config.
    #[arg(long, global = true, value_name = "K")]
    pub levels: Option<usize>,
    /// Use 1/(8m) in the mass correction term.
    #[arg(long, global = true)]
    pub debug_correction_eighth: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check parameter invariants and the strict mapping relation.
    Validate,
    /// Analytic energies of the first K levels.
    Spectrum,
    /// Sample m, f, U_target and the transported states.
    BuildTarget,
    /// Numerical isospectrality check.
    Verify,
    /// Engine potential against a published closed form.
    ComparePaper {
        /// Eq14, Eq19, Eq24, Eq27, Eq28, Eq29, Eq32, Eq33 or Eq34.
        tag: EquationTag,
    },
}

impl Args {
    /// Loads the config and applies the command-line overrides.
    pub fn config(&self) -> Result<RunConfig, CliError> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| CliError::Invalid(vec!["--config <PATH> is required".to_string()]))?;
        let mut config = RunConfig::load(path)?;
        if let Some(p) = &self.output {
            config.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            config.output.format = f;
        }
        if let Some(k) = self.levels {
            if k == 0 {
                return Err(CliError::Invalid(vec!["--levels must be at least 1".to_string()]));
            }
            config.levels = k;
        }
        if self.debug_correction_eighth {
            config.correction = CorrectionCoefficient::Eighth;
        }
        Ok(config)
    }

    /// Runs the command, writes its output and returns the exit code.
    pub fn execute(&self) -> u8 {
        let outcome = self.config().and_then(|config| {
            let out = run(&self.command, &config)?;
            write_body(&out.body, config.output.path.as_deref())?;
            Ok(out)
        });
        match outcome {
            Ok(out) => {
                for n in &out.notes {
                    eprintln!("{n}");
                }
                out.exit_code
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        }
    }
}

/// Entry point for the binary. Usage errors exit with 1, not clap's 2,
/// because 2 means a tolerance failure here.
pub fn run_from_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Args::try_parse_from(args) {
        Ok(a) => a.execute(),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            }
        }
    }
}
