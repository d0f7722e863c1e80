//! Flat `section.key = value` run configuration.
//!
//! ```text
//! # flat target
//! mass.kind = I
//! mass.alpha = 1
//! mass.beta = 0
//! mass.gamma = 1
//! mass.delta = 1
//! reference.kind = STP
//! reference.mu = 2
//! levels = 4
//! grid.n = auto
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::CliError;
use crate::massprofiles::{validate, MassKind, MassParameters, MassProfile};
use crate::pct::{build_target, CorrectionCoefficient, Mode, TargetSystem};
use crate::refmodels::{ReferenceKind, ReferenceModel};
use crate::verify::{GridChoice, Tolerances};

const KEYS: &[&str] = &[
    "mass.kind",
    "mass.alpha",
    "mass.beta",
    "mass.gamma",
    "mass.delta",
    "reference.kind",
    "reference.mu",
    "reference.chi",
    "reference.lambda",
    "mode",
    "levels",
    "grid.n",
    "grid.eps_map",
    "tolerances.isospectral_rel",
    "tolerances.residual",
    "tolerances.gram",
    "output.format",
    "output.path",
    "sample.points",
    "sample.z_min",
    "sample.z_max",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassConfig {
    pub kind: MassKind,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Read by kind I only; 0 when absent.
    pub delta: f64,
}

impl MassConfig {
    pub fn params(&self) -> MassParameters {
        MassParameters::new(self.alpha, self.beta, self.gamma, self.delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ReferenceConfig {
    Stp { mu: f64 },
    Scp { mu: f64 },
    Ptp { chi: f64, lambda: f64 },
}

impl ReferenceConfig {
    pub fn kind(&self) -> ReferenceKind {
        match self {
            Self::Stp { .. } => ReferenceKind::Stp,
            Self::Scp { .. } => ReferenceKind::Scp,
            Self::Ptp { .. } => ReferenceKind::Ptp,
        }
    }

    pub fn model(&self) -> crate::Result<ReferenceModel> {
        match *self {
            Self::Stp { mu } => ReferenceModel::stp(mu),
            Self::Scp { mu } => ReferenceModel::scp(mu),
            Self::Ptp { chi, lambda } => ReferenceModel::ptp(chi, lambda),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub n: GridChoice,
    pub eps_map: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
}

/// Where `build-target` and `compare-paper` sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleConfig {
    pub points: usize,
    /// Uniform in `z` when both are set, otherwise uniform in `y` over the
    /// `eps_map`-truncated range.
    pub z_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mass: MassConfig,
    pub reference: ReferenceConfig,
    pub mode: Mode,
    pub levels: usize,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
    pub sample: SampleConfig,
    /// Not a config key; set from the command line.
    pub correction: CorrectionCoefficient,
}

struct Entries {
    origin: String,
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(source: &str, text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Parse {
                origin: source.to_string(),
                line,
                message,
            };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(err(format!("empty value for `{key}`")));
            }
            if let Some((first, _)) = map.insert(key.to_string(), (line, value.to_string())) {
                return Err(err(format!("`{key}` already set on line {first}")));
            }
        }
        Ok(Self {
            origin: source.to_string(),
            map,
        })
    }

    fn error(&self, key: &str, message: String) -> CliError {
        CliError::Parse {
            origin: self.origin.clone(),
            line: self.map.get(key).map_or(0, |(l, _)| *l),
            message,
        }
    }

    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let Some((line, value)) = self.map.remove(key) else {
            return Ok(None);
        };
        value.parse().map(Some).map_err(|e| CliError::Parse {
            origin: self.origin.clone(),
            line,
            message: format!("`{key}`: {e}"),
        })
    }

    fn require<T: FromStr>(&mut self, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.take(key)?.ok_or_else(|| CliError::Parse {
            origin: self.origin.clone(),
            line: 0,
            message: format!("missing key `{key}`"),
        })
    }
}

fn parse_grid_n(s: &str) -> Result<GridChoice, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(GridChoice::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 3 => Ok(GridChoice::Fixed(n)),
        _ => Err(format!("expected `auto` or an integer >= 3, found `{s}`")),
    }
}

impl FromStr for RunConfig {
    type Err = CliError;
    fn from_str(text: &str) -> Result<Self, CliError> {
        Self::parse_named("<config>", text)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_named(&path.display().to_string(), &text)
    }

    /// Parses without checking the physics; see [`Self::target`].
    pub fn parse_named(source: &str, text: &str) -> Result<Self, CliError> {
        let mut e = Entries::parse(source, text)?;
        let kind: MassKind = e.require("mass.kind")?;
        let mass = MassConfig {
            kind,
            alpha: e.require("mass.alpha")?,
            beta: e.require("mass.beta")?,
            gamma: e.require("mass.gamma")?,
            delta: if kind == MassKind::I {
                e.require("mass.delta")?
            } else {
                e.take("mass.delta")?.unwrap_or(0.0)
            },
        };
        let reference_kind: ReferenceKind = e.require("reference.kind")?;
        let reference = match reference_kind {
            ReferenceKind::Stp => ReferenceConfig::Stp {
                mu: e.require("reference.mu")?,
            },
            ReferenceKind::Scp => ReferenceConfig::Scp {
                mu: e.require("reference.mu")?,
            },
            ReferenceKind::Ptp => ReferenceConfig::Ptp {
                chi: e.require("reference.chi")?,
                lambda: e.require("reference.lambda")?,
            },
        };
        let defaults = Tolerances::default();
        let grid_n = match e.map.remove("grid.n") {
            Some((line, v)) => parse_grid_n(&v).map_err(|message| CliError::Parse {
                origin: source.to_string(),
                line,
                message: format!("`grid.n`: {message}"),
            })?,
            None => GridChoice::Auto,
        };
        let z_min: Option<f64> = e.take("sample.z_min")?;
        let z_max: Option<f64> = e.take("sample.z_max")?;
        let z_range = match (z_min, z_max) {
            (Some(a), Some(b)) if a < b => Some((a, b)),
            (None, None) => None,
            _ => {
                return Err(e.error(
                    "sample.z_min",
                    "sample.z_min and sample.z_max must be given together with z_min < z_max".to_string(),
                ))
            }
        };
        let config = Self {
            mass,
            reference,
            mode: e.take("mode")?.unwrap_or_default(),
            levels: e.take("levels")?.unwrap_or(4),
            grid: GridConfig {
                n: grid_n,
                eps_map: e.take("grid.eps_map")?.unwrap_or(1e-4),
            },
            tolerances: Tolerances {
                isospectral_rel: e
                    .take("tolerances.isospectral_rel")?
                    .unwrap_or(defaults.isospectral_rel),
                residual: e.take("tolerances.residual")?.unwrap_or(defaults.residual),
                gram: e.take("tolerances.gram")?.unwrap_or(defaults.gram),
            },
            output: OutputConfig {
                format: e.take("output.format")?.unwrap_or_default(),
                path: e.take::<String>("output.path")?.map(PathBuf::from),
            },
            sample: SampleConfig {
                points: e.take("sample.points")?.unwrap_or(201),
                z_range,
            },
            correction: CorrectionCoefficient::Quarter,
        };
        if let Some(key) = e.map.keys().next() {
            return Err(e.error(key, format!("`{key}` does not apply to this configuration")));
        }
        if config.levels == 0 {
            return Err(CliError::Invalid(vec!["levels >= 1".to_string()]));
        }
        if config.sample.points < 2 {
            return Err(CliError::Invalid(vec!["sample.points >= 2".to_string()]));
        }
        Ok(config)
    }

    /// Parameter violations, reference strength violations and, in strict
    /// mode, the unmet mapping relation.
    pub fn violations(&self) -> Vec<String> {
        let params = self.mass.params();
        let mut out: Vec<String> = validate(&params, self.mass.kind)
            .iter()
            .map(ToString::to_string)
            .collect();
        if let Err(crate::Error::InvalidParameters(v)) = self.reference.model() {
            out.extend(v);
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("tolerances.isospectral_rel", t.isospectral_rel),
            ("tolerances.residual", t.residual),
            ("tolerances.gram", t.gram),
            ("grid.eps_map", self.grid.eps_map),
        ] {
            if !(v.is_finite() && v > 0.0) {
                out.push(format!("{name} > 0 violated ({name} = {v})"));
            }
        }
        if out.is_empty() && self.mode == Mode::Strict {
            let c = crate::massprofiles::strict_constraint(self.mass.kind, self.reference.kind());
            if !c.satisfied(&params) {
                let required = c.enforce(&params);
                out.push(format!(
                    "{} violated for strict {} + {} (required alpha = {}, delta = {})",
                    c.parameter_relation,
                    self.mass.kind,
                    self.reference.kind(),
                    required.alpha,
                    required.delta
                ));
            }
        }
        out
    }

    /// The target system, or every violation found.
    pub fn target(&self) -> Result<TargetSystem, CliError> {
        let violations = self.violations();
        if !violations.is_empty() {
            return Err(CliError::Invalid(violations));
        }
        let profile = MassProfile::new(self.mass.kind, self.mass.params()).map_err(CliError::from_invalid)?;
        let reference = self.reference.model().map_err(CliError::from_invalid)?;
        build_target(&profile, &reference, self.mode)
            .map(|ts| ts.with_correction(self.correction))
            .map_err(CliError::from_invalid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAT: &str = "\
# flat target
mass.kind = I
mass.alpha = 1
mass.beta = 0
mass.gamma = 1
mass.delta = 1   # strict STP needs delta = sqrt(Delta)/2
reference.kind = STP
reference.mu = 2
";

    #[test]
    fn parses_with_defaults() {
        let c: RunConfig = FLAT.parse().unwrap();
        assert_eq!(c.mass.kind, MassKind::I);
        assert_eq!(c.reference, ReferenceConfig::Stp { mu: 2.0 });
        assert_eq!(c.levels, 4);
        assert_eq!(c.grid.n, GridChoice::Auto);
        assert_eq!(c.mode, Mode::Strict);
        assert!(c.violations().is_empty());
        assert!(c.target().is_ok());
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let text = format!("{FLAT}mass.epsilon = 3\n");
        match text.parse::<RunConfig>() {
            Err(CliError::Parse { line, message, .. }) => {
                assert_eq!(line, 9);
                assert!(message.contains("mass.epsilon"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_and_inapplicable_keys_are_rejected() {
        assert!(format!("{FLAT}levels = 3\nlevels = 4\n").parse::<RunConfig>().is_err());
        assert!(format!("{FLAT}reference.chi = 2\n").parse::<RunConfig>().is_err());
    }

    #[test]
    fn grid_n_accepts_auto_or_integer() {
        let c: RunConfig = format!("{FLAT}grid.n = 3999\n").parse().unwrap();
        assert_eq!(c.grid.n, GridChoice::Fixed(3999));
        assert!(format!("{FLAT}grid.n = lots\n").parse::<RunConfig>().is_err());
    }

    #[test]
    fn violations_name_the_relation() {
        let c: RunConfig = FLAT.replace("mass.alpha = 1", "mass.alpha = -1").parse().unwrap();
        assert!(c.violations().iter().any(|v| v.contains("Delta > 0")));
        let c: RunConfig = FLAT.replace("mass.delta = 1 ", "mass.delta = 2 ").parse().unwrap();
        assert!(c.violations().iter().any(|v| v.contains("delta = sqrt(Delta)/2")));
        let scaled: RunConfig = format!("{}mode = scaled\n", FLAT.replace("mass.delta = 1 ", "mass.delta = 2 "))
            .parse()
            .unwrap();
        assert!(scaled.violations().is_empty());
    }
}
