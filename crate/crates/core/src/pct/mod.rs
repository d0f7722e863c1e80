//! Point canonical transformation from a constant-mass reference onto a
//! position-dependent-mass target.
//!
//! With `y = f(z) + c`, `f′ = √m` and `Ψ = m^{1/4} Φ(f(z) + c)`:
//!
//! ```text
//! E_k = ℰ_k
//! U(z) = U_ref(f(z) + c) + (1/(4m)) [m″/m − (7/4)(m′/m)²]
//! ```

pub mod paper_forms;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::massprofiles::{strict_constraint, MassProfile};
use crate::oracles::operator::MASS_FLOOR;
use crate::oracles::quadrature::QuadratureSettings;
use crate::refmodels::ReferenceModel;

pub use paper_forms::{
    compare_paper_form, deviation_report, paper_form_potential, DeviationPoint, DeviationReport, EquationTag,
    PaperFormCoefficients, PaperFormId,
};

/// Prefactor of the mass correction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionCoefficient {
    /// `1/(4m)`, consistent with `H = −d/dz (1/m) d/dz + U`.
    #[default]
    Quarter,
    /// `1/(8m)`, the half-kinetic-prefactor variant. Wrong in these units;
    /// exists to show the verification can tell them apart.
    Eighth,
}

impl CorrectionCoefficient {
    pub fn value(&self) -> f64 {
        match self {
            Self::Quarter => 0.25,
            Self::Eighth => 0.125,
        }
    }
}

/// `V_m(z) = (1/(4m)) [m″/m − (7/4)(m′/m)²]`.
pub fn mass_correction(profile: &MassProfile, z: f64) -> Result<f64> {
    mass_correction_with(profile, z, CorrectionCoefficient::Quarter)
}

pub fn mass_correction_with(profile: &MassProfile, z: f64, coefficient: CorrectionCoefficient) -> Result<f64> {
    let m = profile.mass_value(z)?;
    if m < MASS_FLOOR {
        return Err(Error::Singular { z });
    }
    // In terms of s = √m the bracket is 2s″/s − 5(s′/s)².
    let (s, ds, d2s) = profile.root_derivatives(z);
    let q = ds / s;
    Ok(coefficient.value() / (s * s) * (2.0 * d2s / s - 5.0 * q * q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Mass parameters obey the constraint that maps onto the unit-scale
    /// reference domain.
    #[default]
    Strict,
    /// The reference is rescaled to whatever range the mass produces.
    Scaled,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "strict" => Ok(Self::Strict),
            "scaled" => Ok(Self::Scaled),
            other => Err(Error::Domain(format!("unknown mode `{other}`"))),
        }
    }
}

/// A constructed PDEM problem. Energies are those of the reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetSystem {
    profile: MassProfile,
    reference: ReferenceModel,
    mode: Mode,
    correction: CorrectionCoefficient,
}

/// Builds the target, fixing the mapping constant (and in scaled mode the
/// reference scale) so that the mapping range is the reference domain.
pub fn build_target(profile: &MassProfile, reference: &ReferenceModel, mode: Mode) -> Result<TargetSystem> {
    let (profile, reference) = match mode {
        Mode::Strict => {
            let c = strict_constraint(profile.kind(), reference.kind());
            if !c.satisfied(profile.params()) {
                return Err(Error::Constraint {
                    relation: c.parameter_relation,
                });
            }
            if reference.scale() != 1.0 {
                return Err(Error::Constraint {
                    relation: "reference scale = 1".to_string(),
                });
            }
            (profile.with_shift(c.shift), *reference)
        }
        Mode::Scaled => {
            let range = profile.with_shift(0.0).map_range();
            let unit = reference.kind().canonical_domain();
            let reference = reference.with_scale(unit.half_length() / range.half_length())?;
            let shift = reference.domain().center() - range.center();
            (profile.with_shift(shift), reference)
        }
    };
    let range = profile.map_range();
    let domain = reference.domain();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
    if !(close(range.lo, domain.lo) && close(range.hi, domain.hi)) {
        return Err(Error::Domain(format!(
            "mapping range {range} does not match the reference domain {domain}"
        )));
    }
    Ok(TargetSystem {
        profile,
        reference,
        mode,
        correction: CorrectionCoefficient::Quarter,
    })
}

impl TargetSystem {
    pub fn with_correction(mut self, correction: CorrectionCoefficient) -> Self {
        self.correction = correction;
        self
    }

    /// The profile with its mapping constant set.
    pub fn profile(&self) -> &MassProfile {
        &self.profile
    }

    pub fn reference(&self) -> &ReferenceModel {
        &self.reference
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn correction(&self) -> CorrectionCoefficient {
        self.correction
    }

    pub fn z_domain(&self) -> Interval {
        self.profile.z_domain()
    }

    /// `U_ref(f(z) + c) + V_m(z)`.
    pub fn target_potential(&self, z: f64) -> Result<f64> {
        let correction = mass_correction_with(&self.profile, z, self.correction)?;
        let y = self.profile.map_forward_unchecked(z);
        Ok(self.reference.potential_unchecked(y) + correction)
    }

    pub fn target_energy(&self, k: usize) -> f64 {
        self.reference.energy(k)
    }

    /// `z` interval whose image stays `eps_map` inside the reference domain.
    pub fn truncated_domain(&self, eps_map: f64) -> Result<Interval> {
        let range = self.profile.map_range();
        if !(eps_map > 0.0 && 2.0 * eps_map < range.length()) {
            return Err(Error::Domain(format!(
                "eps_map = {eps_map} does not fit inside the mapping range {range}"
            )));
        }
        Ok(Interval::new(
            self.profile.map_inverse(range.lo + eps_map)?,
            self.profile.map_inverse(range.hi - eps_map)?,
        ))
    }

    /// `Ψ_k = m^{1/4} N_k Φ_k(f(z) + c)` with `N_k` the reference
    /// normalization, so `∫ Ψ_k² dz = ∫ (N_k Φ_k)² dy = 1`.
    pub fn transported_state(&self, k: usize, quad: &QuadratureSettings) -> Result<TransportedState> {
        Ok(TransportedState {
            system: *self,
            k,
            norm: self.reference.normalization(k, quad)?,
        })
    }

    /// Single evaluation of the normalized `Ψ_k`; prefer
    /// [`Self::transported_state`] for repeated use.
    pub fn transport_wavefunction(&self, k: usize, z: f64) -> Result<f64> {
        self.transported_state(k, &QuadratureSettings::default())?.value(z)
    }
}

/// A normalized transported eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportedState {
    system: TargetSystem,
    k: usize,
    norm: f64,
}

impl TransportedState {
    pub fn level(&self) -> usize {
        self.k
    }

    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn value(&self, z: f64) -> Result<f64> {
        let m = self.system.profile.mass_value(z)?;
        if m < MASS_FLOOR {
            return Err(Error::Singular { z });
        }
        self.value_at(z)
    }

    fn value_at(&self, z: f64) -> Result<f64> {
        let s = self.system.profile.sqrt_mass_unchecked(z);
        if s == 0.0 {
            return Ok(0.0);
        }
        let y = self.system.profile.map_forward_unchecked(z);
        let phi = self.system.reference.wavefunction_unchecked(self.k, y)?;
        Ok(s.abs().sqrt() * self.norm * phi)
    }

    /// Total version for quadrature and sampling: `0` at mass zeros.
    pub fn value_unchecked(&self, z: f64) -> f64 {
        self.value_at(z).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::massprofiles::{MassKind, MassParameters};
    use crate::refmodels::ReferenceKind;
    use std::f64::consts::PI;

    fn flat() -> MassProfile {
        MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.0)).unwrap()
    }

    #[test]
    fn correction_examples() {
        let p = flat();
        assert!((mass_correction(&p, 0.0).unwrap() + 1.0).abs() < 1e-15);
        assert!((mass_correction(&p, 1.0).unwrap() + 3.0).abs() < 1e-14);
        for z in [-3.0, -0.4, 0.0, 0.9, 2.5] {
            let want = -2.0 * z * z - 1.0;
            assert!((mass_correction(&p, z).unwrap() - want).abs() < 1e-13 * (1.0 + want.abs()));
        }
        let e = mass_correction_with(&p, 1.0, CorrectionCoefficient::Eighth).unwrap();
        assert!((e + 1.5).abs() < 1e-14);
    }

    #[test]
    fn correction_formula_matches_mass_derivatives() {
        let p = MassProfile::new(MassKind::II, MassParameters::new(3.0, 0.8, 1.3, 0.0)).unwrap();
        for z in [0.3, 0.9, 1.7] {
            let (m, d1, d2) = p.mass_derivatives(z).unwrap();
            let want = 1.0 / (4.0 * m) * (d2 / m - 1.75 * (d1 / m).powi(2));
            let got = mass_correction(&p, z).unwrap();
            assert!((got - want).abs() < 1e-10 * want.abs());
        }
    }

    #[test]
    fn correction_is_singular_at_mass_zero() {
        let p = MassProfile::new(MassKind::III, MassParameters::new(3.0, 1.0, 1.0, 0.0)).unwrap();
        assert!(matches!(mass_correction(&p, 0.0), Err(Error::Singular { .. })));
    }

    #[test]
    fn flat_potential_is_constant() {
        let ts = build_target(&flat(), &ReferenceModel::stp(2.0).unwrap(), Mode::Strict).unwrap();
        for i in 0..=100 {
            let z = -5.0 + 0.1 * i as f64;
            assert!((ts.target_potential(z).unwrap() + 1.0).abs() < 1e-12, "z = {z}");
        }
        let free = build_target(&flat(), &ReferenceModel::stp(1.0).unwrap(), Mode::Strict).unwrap();
        assert!((free.target_potential(0.7).unwrap() + 2.0 * 0.49 + 1.0).abs() < 1e-13);
        let three = build_target(&flat(), &ReferenceModel::stp(3.0).unwrap(), Mode::Strict).unwrap();
        assert!((three.target_potential(1.5).unwrap() - (4.0 * 2.25 - 1.0)).abs() < 1e-12);
        assert_eq!(ts.target_energy(0), 2.0);
        assert_eq!(ts.target_energy(3), 23.0);
    }

    #[test]
    fn kind_three_composition() {
        let p = MassProfile::new(MassKind::III, MassParameters::new(3.0, 1.0, 1.0, 0.0)).unwrap();
        let ts = build_target(&p, &ReferenceModel::stp(2.0).unwrap(), Mode::Strict).unwrap();
        for z in [0.3f64, 0.8, 1.1] {
            let want = 2.0 * z.powi(6) + mass_correction(&p, z).unwrap();
            let got = ts.target_potential(z).unwrap();
            assert!((got - want).abs() < 1e-11 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn ptp_composition_at_center() {
        let p = MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 0.5)).unwrap();
        let ts = build_target(&p, &ReferenceModel::ptp(2.0, 2.0).unwrap(), Mode::Strict).unwrap();
        let want = 8.0 + mass_correction(&p, 0.0).unwrap();
        assert!((ts.target_potential(0.0).unwrap() - want).abs() < 1e-12);
        assert_eq!(ts.profile().shift(), PI / 4.0);
    }

    #[test]
    fn strict_mode_rejects_violations() {
        let p = MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 0.7)).unwrap();
        let r = build_target(&p, &ReferenceModel::stp(2.0).unwrap(), Mode::Strict);
        match r {
            Err(Error::Constraint { relation }) => assert!(relation.contains("delta")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scaled_mode_fits_any_range() {
        let p = MassProfile::new(MassKind::I, MassParameters::new(2.0, 0.4, 1.5, 0.7)).unwrap();
        for rk in [ReferenceKind::Stp, ReferenceKind::Scp, ReferenceKind::Ptp] {
            let reference = match rk {
                ReferenceKind::Ptp => ReferenceModel::ptp(2.0, 3.0).unwrap(),
                ReferenceKind::Stp => ReferenceModel::stp(2.0).unwrap(),
                ReferenceKind::Scp => ReferenceModel::scp(2.0).unwrap(),
            };
            let ts = build_target(&p, &reference, Mode::Scaled).unwrap();
            let range = ts.profile().map_range();
            let dom = ts.reference().domain();
            assert!((range.lo - dom.lo).abs() < 1e-12 && (range.hi - dom.hi).abs() < 1e-12);
            assert!(ts.target_energy(0) > 0.0);
        }
    }

    #[test]
    fn transported_ground_state_of_flat_target() {
        let ts = build_target(&flat(), &ReferenceModel::stp(2.0).unwrap(), Mode::Strict).unwrap();
        let s0 = ts.transported_state(0, &QuadratureSettings::default()).unwrap();
        let ratio = s0.value(0.0).unwrap();
        for z in [-2.0f64, 0.5, 3.0] {
            let want = ratio * (1.0 + z * z).powf(-1.5);
            assert!((s0.value(z).unwrap() - want).abs() < 1e-13);
        }
        assert_eq!(ts.transport_wavefunction(1, 0.0).unwrap(), 0.0);
    }
}
