//! Target potentials in their published closed forms, evaluated literally
//! with the published coefficients, and deviation reports against the engine.
//!
//! These expressions are comparators only. Several of them do not agree with
//! the composition computed by [`TargetSystem::target_potential`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::massprofiles::{MassKind, MassParameters};
use crate::pct::TargetSystem;
use crate::refmodels::{ReferenceKind, ReferenceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EquationTag {
    Eq14,
    Eq19,
    Eq24,
    Eq27,
    Eq28,
    Eq29,
    Eq32,
    Eq33,
    Eq34,
}

impl EquationTag {
    pub const ALL: [EquationTag; 9] = [
        Self::Eq14,
        Self::Eq19,
        Self::Eq24,
        Self::Eq27,
        Self::Eq28,
        Self::Eq29,
        Self::Eq32,
        Self::Eq33,
        Self::Eq34,
    ];

    pub fn mass_kind(&self) -> MassKind {
        match self {
            Self::Eq14 | Self::Eq19 | Self::Eq24 => MassKind::I,
            Self::Eq27 | Self::Eq28 | Self::Eq29 => MassKind::II,
            Self::Eq32 | Self::Eq33 | Self::Eq34 => MassKind::III,
        }
    }

    pub fn reference_kind(&self) -> ReferenceKind {
        match self {
            Self::Eq14 | Self::Eq27 | Self::Eq32 => ReferenceKind::Stp,
            Self::Eq19 | Self::Eq28 | Self::Eq33 => ReferenceKind::Scp,
            Self::Eq24 | Self::Eq29 | Self::Eq34 => ReferenceKind::Ptp,
        }
    }
}

impl std::str::FromStr for EquationTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let digits = t.strip_prefix("eq").unwrap_or(&t);
        Self::ALL
            .into_iter()
            .find(|tag| tag.to_string()[2..] == *digits)
            .ok_or_else(|| Error::Domain(format!("unknown equation tag `{s}`")))
    }
}

impl std::fmt::Display for EquationTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Published coefficient set; entries not used by a tag are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PaperFormCoefficients {
    pub u0: f64,
    pub u01: Option<f64>,
    pub u02: Option<f64>,
    pub kappa: Option<f64>,
    pub sigma: Option<f64>,
    pub omega: Option<f64>,
    pub u_bar_0: Option<f64>,
    pub u_tilde_0: Option<f64>,
    pub u_hat_0: Option<f64>,
    pub u_bar_omega: Option<f64>,
    pub u_tilde_omega: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PaperFormId {
    pub tag: EquationTag,
    pub coefficients: PaperFormCoefficients,
    pub params: MassParameters,
}

impl PaperFormId {
    /// `U₀ = μ(μ−1)` for STP/SCP; for PTP `U₀ = 2` with
    /// `U₀₁ = U₀χ(χ−1)/2`, `U₀₂ = U₀λ(λ−1)/2`.
    pub fn new(tag: EquationTag, params: &MassParameters, reference: &ReferenceModel) -> Result<Self> {
        if reference.kind() != tag.reference_kind() {
            return Err(Error::Unsupported(format!(
                "{tag} is a {} form, reference is {}",
                tag.reference_kind(),
                reference.kind()
            )));
        }
        let MassParameters {
            alpha,
            beta,
            gamma,
            delta,
        } = *params;
        let mut c = PaperFormCoefficients::default();
        match reference.chi_lambda() {
            Some((chi, lambda)) => {
                c.u0 = 2.0;
                c.u01 = Some(c.u0 * chi * (chi - 1.0) / 2.0);
                c.u02 = Some(c.u0 * lambda * (lambda - 1.0) / 2.0);
            }
            None => {
                let mu = reference.mu().unwrap_or(1.0);
                c.u0 = mu * (mu - 1.0);
            }
        }
        let u0 = c.u0;
        match tag {
            EquationTag::Eq14 | EquationTag::Eq19 => {
                let kappa = 4.0 * delta * delta / params.discriminant();
                c.kappa = Some(kappa);
                c.u_bar_0 = Some(kappa * u0);
            }
            EquationTag::Eq24 => {
                c.u_bar_omega = Some(1.0 + 4.0 * delta * delta / params.discriminant() * u0);
            }
            EquationTag::Eq27 | EquationTag::Eq28 | EquationTag::Eq29 => {
                let sigma = alpha * alpha / (4.0 * beta.powi(8) * gamma.powi(8));
                c.sigma = Some(sigma);
                c.u_tilde_0 = Some(sigma * u0);
            }
            EquationTag::Eq32 | EquationTag::Eq33 => {
                let kappa = 81.0 * beta.powi(4) * gamma.powi(4) / (alpha * alpha);
                c.kappa = Some(kappa);
                c.u_hat_0 = Some(kappa * u0);
            }
            EquationTag::Eq34 => {
                let omega = alpha * alpha / (81.0 * beta.powi(4) * gamma.powi(4));
                c.omega = Some(omega);
                c.u_tilde_omega = Some(omega * u0);
            }
        }
        Ok(Self {
            tag,
            coefficients: c,
            params: *params,
        })
    }

    /// The potential-strength part of the published form, without the
    /// mass-dependent bracket.
    pub fn leading_term(&self, z: f64) -> f64 {
        let c = &self.coefficients;
        let MassParameters { beta, gamma, .. } = self.params;
        let lin = beta + 2.0 * gamma * z;
        let get = |v: Option<f64>| v.unwrap_or(f64::NAN);
        match self.tag {
            EquationTag::Eq14 => get(c.u_bar_0) * lin * lin,
            EquationTag::Eq19 => get(c.u_bar_0) / (lin * lin),
            EquationTag::Eq24 => get(c.u_bar_omega) * (get(c.u01) / (lin * lin) + get(c.u02) * lin * lin),
            EquationTag::Eq27 | EquationTag::Eq28 => get(c.u_tilde_0) / z.powi(4),
            EquationTag::Eq29 => {
                let ut = get(c.u_tilde_0);
                -(get(c.u01) / ut) / z.powi(4) + get(c.u02) * (1.0 + ut * z.powi(4))
            }
            EquationTag::Eq32 => get(c.u_hat_0) * z.powi(6),
            EquationTag::Eq33 => get(c.u_hat_0) / z.powi(6),
            EquationTag::Eq34 => {
                let uw = get(c.u_tilde_omega);
                -(get(c.u01) / uw) / z.powi(6) + get(c.u02) * (1.0 + uw * z.powi(6))
            }
        }
    }

    /// The mass-dependent bracket, with the sign it carries in the form.
    pub fn mass_term(&self, z: f64) -> f64 {
        let MassParameters {
            alpha,
            beta,
            gamma,
            delta,
        } = self.params;
        match self.tag.mass_kind() {
            MassKind::I => {
                let p = alpha + beta * z + gamma * z * z;
                let lin = beta + 2.0 * gamma * z;
                (-(7.0 * beta + 8.0 * gamma + 2.0 * gamma * z) + 8.0 * lin * lin / p)
                    / (32.0 * p.powi(4) * delta * delta)
            }
            MassKind::II => {
                let sigma = alpha * alpha / (4.0 * beta.powi(8) * gamma.powi(8));
                let c = 5.0 / (32.0 * sigma);
                -((21.0 / (8.0 * alpha * alpha)) * z.powi(4) + c / z.powi(4) + c / (beta.powi(4) * gamma.powi(4)))
            }
            MassKind::III => {
                let r = beta * beta + gamma * gamma * z.powi(6);
                -(4.0 * r * r / z.powi(6) - 3.0 * gamma * gamma * r + 9.0 * gamma.powi(4) * z.powi(6)) / (alpha * alpha)
            }
        }
    }
}

/// The published expression for `id.tag` at `z`.
pub fn paper_form_potential(id: &PaperFormId, z: f64) -> Result<f64> {
    if id.tag.mass_kind() == MassKind::II && z <= 0.0 {
        return Err(Error::Domain(format!("z = {z} outside (0, inf)")));
    }
    let v = id.leading_term(z) + id.mass_term(z);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{} is not finite at z = {z}", id.tag)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationPoint {
    pub z: f64,
    pub engine: Option<f64>,
    pub paper: Option<f64>,
    pub deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub label: String,
    pub coefficients: Option<PaperFormCoefficients>,
    pub points: Vec<DeviationPoint>,
    /// Points where both sides evaluated.
    pub evaluated: usize,
    pub skipped: usize,
    pub max_abs_deviation: f64,
    pub mean_abs_deviation: f64,
}

/// `|engine − paper|` over `grid`; points where either side fails are kept
/// in the table but left out of the summary.
pub fn deviation_report<A, B>(label: &str, engine: A, paper: B, grid: &[f64]) -> DeviationReport
where
    A: Fn(f64) -> Result<f64>,
    B: Fn(f64) -> Result<f64>,
{
    let points: Vec<DeviationPoint> = grid
        .iter()
        .map(|&z| {
            let e = engine(z).ok().filter(|v| v.is_finite());
            let p = paper(z).ok().filter(|v| v.is_finite());
            DeviationPoint {
                z,
                engine: e,
                paper: p,
                deviation: e.zip(p).map(|(a, b)| (a - b).abs()),
            }
        })
        .collect();
    let devs: Vec<f64> = points.iter().filter_map(|p| p.deviation).collect();
    let evaluated = devs.len();
    DeviationReport {
        label: label.to_string(),
        coefficients: None,
        skipped: points.len() - evaluated,
        points,
        evaluated,
        max_abs_deviation: devs.iter().fold(0.0, |m: f64, d| m.max(*d)),
        mean_abs_deviation: if evaluated == 0 {
            0.0
        } else {
            devs.iter().sum::<f64>() / evaluated as f64
        },
    }
}

/// Engine potential of `ts` against the published form `tag`.
pub fn compare_paper_form(ts: &TargetSystem, tag: EquationTag, grid: &[f64]) -> Result<DeviationReport> {
    if ts.profile().kind() != tag.mass_kind() {
        return Err(Error::Unsupported(format!(
            "{tag} is a kind {} form, profile is kind {}",
            tag.mass_kind(),
            ts.profile().kind()
        )));
    }
    let id = PaperFormId::new(tag, ts.profile().params(), ts.reference())?;
    let mut report = deviation_report(
        &tag.to_string(),
        |z| ts.target_potential(z),
        |z| paper_form_potential(&id, z),
        grid,
    );
    report.coefficients = Some(id.coefficients);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::massprofiles::MassProfile;
    use crate::pct::{build_target, Mode};

    fn flat() -> TargetSystem {
        let p = MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.0)).unwrap();
        build_target(&p, &ReferenceModel::stp(2.0).unwrap(), Mode::Strict).unwrap()
    }

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn tags_parse_and_print() {
        for tag in EquationTag::ALL {
            assert_eq!(tag.to_string().parse::<EquationTag>().unwrap(), tag);
        }
        assert_eq!("eq27".parse::<EquationTag>().unwrap(), EquationTag::Eq27);
        assert!("Eq15".parse::<EquationTag>().is_err());
    }

    #[test]
    fn eq14_leading_coefficient() {
        let ts = flat();
        let id = PaperFormId::new(EquationTag::Eq14, ts.profile().params(), ts.reference()).unwrap();
        assert_eq!(id.coefficients.kappa, Some(1.0));
        assert_eq!(id.coefficients.u_bar_0, Some(2.0));
        assert_eq!(id.leading_term(1.0), 8.0);
        assert!((ts.target_potential(1.0).unwrap() + 1.0).abs() < 1e-13);
    }

    #[test]
    fn eq32_kappa() {
        let p = MassParameters::new(3.0, 1.0, 1.0, 0.0);
        let id = PaperFormId::new(EquationTag::Eq32, &p, &ReferenceModel::stp(2.0).unwrap()).unwrap();
        assert_eq!(id.coefficients.kappa, Some(9.0));
    }

    #[test]
    fn flat_target_deviates_from_eq14() {
        let r = compare_paper_form(&flat(), EquationTag::Eq14, &linspace(-2.0, 2.0, 101)).unwrap();
        assert_eq!(r.points.len(), 101);
        assert_eq!(r.evaluated, 101);
        assert!(r.max_abs_deviation > 1.0);
    }

    #[test]
    fn identical_forms_have_zero_deviation() {
        let f = |z: f64| Ok(z.sin() + z * z);
        let r = deviation_report("stub", f, f, &linspace(-1.0, 1.0, 21));
        assert_eq!(r.max_abs_deviation, 0.0);
        assert_eq!(r.mean_abs_deviation, 0.0);
    }

    #[test]
    fn kind_three_report_skips_the_singular_point() {
        let p = MassProfile::new(MassKind::III, MassParameters::new(3.0, 1.0, 1.0, 0.0)).unwrap();
        let ts = build_target(&p, &ReferenceModel::stp(2.0).unwrap(), Mode::Strict).unwrap();
        let r = compare_paper_form(&ts, EquationTag::Eq32, &linspace(-1.0, 1.0, 21)).unwrap();
        assert_eq!(r.skipped, 1);
        let r = compare_paper_form(&ts, EquationTag::Eq32, &linspace(0.2, 2.0, 19)).unwrap();
        assert_eq!(r.skipped, 0);
        assert!(r.max_abs_deviation > 0.0);
    }

    #[test]
    fn incompatible_tag_is_rejected() {
        assert!(compare_paper_form(&flat(), EquationTag::Eq32, &[1.0]).is_err());
        assert!(compare_paper_form(&flat(), EquationTag::Eq19, &[1.0]).is_err());
    }
}
