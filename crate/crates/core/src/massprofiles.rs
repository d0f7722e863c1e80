//! The three parametric mass families, their mapping functions
//! `f(z) = ∫ √m dz` and the parameter relations that make the mapping range
//! coincide with a reference domain.
//!
//! | kind | `m(z)`                         | `z` domain |
//! |------|--------------------------------|------------|
//! | I    | `[δ/(α + βz + γz²)]²`          | ℝ          |
//! | II   | `[αz/(β⁴ + γ⁴z⁴)]²`            | (0, ∞)     |
//! | III  | `[αz²/(β² + γ²z⁶)]²`           | ℝ          |
//!
//! Everything is computed from `s = √m ≥ 0` and its derivatives, so
//! `m = s²`, `m′ = 2ss′`, `m″ = 2(s′² + ss″)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::oracles::quadrature::{integrate, QuadratureSettings};
use crate::refmodels::ReferenceKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MassKind {
    I,
    II,
    III,
}

impl std::str::FromStr for MassKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "1" => Ok(Self::I),
            "II" | "2" => Ok(Self::II),
            "III" | "3" => Ok(Self::III),
            other => Err(Error::Domain(format!("unknown mass kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for MassKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
        })
    }
}

/// `δ` is only read by kind I.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassParameters {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl MassParameters {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// `Δ = 4αγ − β²`
    pub fn discriminant(&self) -> f64 {
        4.0 * self.alpha * self.gamma - self.beta * self.beta
    }
}

/// One violated parameter relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub relation: String,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} violated ({})", self.relation, self.detail)
    }
}

/// Checks the parameter invariants of `kind`; an empty list means valid.
pub fn validate(params: &MassParameters, kind: MassKind) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut check = |ok: bool, relation: &str, detail: String| {
        if !ok {
            out.push(Violation {
                relation: relation.to_string(),
                detail,
            });
        }
    };
    let p = params;
    let finite = [p.alpha, p.beta, p.gamma, p.delta].iter().all(|v| v.is_finite());
    check(finite, "finite parameters", format!("{p:?}"));
    match kind {
        MassKind::I => {
            check(p.gamma > 0.0, "gamma > 0", format!("gamma = {}", p.gamma));
            check(p.delta > 0.0, "delta > 0", format!("delta = {}", p.delta));
            let d = p.discriminant();
            check(d > 0.0, "Delta > 0", format!("Delta = 4*alpha*gamma - beta^2 = {d}"));
        }
        MassKind::II => {
            check(p.alpha > 0.0, "alpha > 0", format!("alpha = {}", p.alpha));
            check(p.beta != 0.0, "beta != 0", format!("beta = {}", p.beta));
            check(p.gamma != 0.0, "gamma != 0", format!("gamma = {}", p.gamma));
        }
        MassKind::III => {
            check(p.alpha > 0.0, "alpha > 0", format!("alpha = {}", p.alpha));
            check(p.beta > 0.0, "beta > 0", format!("beta = {}", p.beta));
            check(p.gamma > 0.0, "gamma > 0", format!("gamma = {}", p.gamma));
        }
    }
    out
}

/// A validated mass distribution with its mapping constant `shift`, so that
/// `y = f(z) + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassProfile {
    kind: MassKind,
    params: MassParameters,
    shift: f64,
}

const BISECTION_Y_TOL: f64 = 1e-12;
const BISECTION_MAX_STEPS: usize = 200;

impl MassProfile {
    pub fn new(kind: MassKind, params: MassParameters) -> Result<Self> {
        let violations = validate(&params, kind);
        if !violations.is_empty() {
            return Err(Error::InvalidParameters(
                violations.iter().map(ToString::to_string).collect(),
            ));
        }
        Ok(Self {
            kind,
            params,
            shift: 0.0,
        })
    }

    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    pub fn kind(&self) -> MassKind {
        self.kind
    }

    pub fn params(&self) -> &MassParameters {
        &self.params
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn z_domain(&self) -> Interval {
        match self.kind {
            MassKind::I | MassKind::III => Interval::real_line(),
            MassKind::II => Interval::new(0.0, f64::INFINITY),
        }
    }

    /// Where the unshifted map vanishes.
    pub fn center(&self) -> f64 {
        match self.kind {
            MassKind::I => -self.params.beta / (2.0 * self.params.gamma),
            MassKind::II | MassKind::III => 0.0,
        }
    }

    /// Interior zero of `m`, if any.
    pub fn interior_mass_zero(&self) -> Option<f64> {
        match self.kind {
            MassKind::III => Some(0.0),
            MassKind::I | MassKind::II => None,
        }
    }

    fn check(&self, z: f64) -> Result<()> {
        if self.z_domain().contains(z) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "z = {z} outside the kind {} domain {}",
                self.kind,
                self.z_domain()
            )))
        }
    }

    /// `(s, s′, s″)` with `s = √m`, no domain check.
    pub(crate) fn root_derivatives(&self, z: f64) -> (f64, f64, f64) {
        let MassParameters {
            alpha,
            beta,
            gamma,
            delta,
        } = self.params;
        match self.kind {
            MassKind::I => {
                let p = alpha + beta * z + gamma * z * z;
                let dp = beta + 2.0 * gamma * z;
                let s = delta / p;
                let ds = -delta * dp / (p * p);
                let d2s = delta * (2.0 * dp * dp - 2.0 * gamma * p) / (p * p * p);
                (s, ds, d2s)
            }
            MassKind::II => {
                let b4 = beta.powi(4);
                let g4 = gamma.powi(4);
                let z4 = z.powi(4);
                let q = b4 + g4 * z4;
                let s = alpha * z / q;
                let ds = alpha * (b4 - 3.0 * g4 * z4) / (q * q);
                let d2s = alpha * g4 * z.powi(3) * (12.0 * g4 * z4 - 20.0 * b4) / (q * q * q);
                (s, ds, d2s)
            }
            MassKind::III => {
                let b2 = beta * beta;
                let g2 = gamma * gamma;
                let z6 = z.powi(6);
                let r = b2 + g2 * z6;
                let s = alpha * z * z / r;
                let ds = 2.0 * alpha * z * (b2 - 2.0 * g2 * z6) / (r * r);
                let d2s = 2.0 * alpha * (b2 * b2 - 25.0 * b2 * g2 * z6 + 10.0 * g2 * g2 * z6 * z6) / (r * r * r);
                (s, ds, d2s)
            }
        }
    }

    /// `√m(z)` without a domain check (kind II is extended by its formula).
    pub(crate) fn sqrt_mass_unchecked(&self, z: f64) -> f64 {
        self.root_derivatives(z).0
    }

    /// `(m, m′, m″)` at `z`.
    pub fn mass_derivatives(&self, z: f64) -> Result<(f64, f64, f64)> {
        self.check(z)?;
        let (s, ds, d2s) = self.root_derivatives(z);
        Ok((s * s, 2.0 * s * ds, 2.0 * (ds * ds + s * d2s)))
    }

    pub fn mass_value(&self, z: f64) -> Result<f64> {
        self.mass_derivatives(z).map(|d| d.0)
    }

    pub fn mass_d1(&self, z: f64) -> Result<f64> {
        self.mass_derivatives(z).map(|d| d.1)
    }

    pub fn mass_d2(&self, z: f64) -> Result<f64> {
        self.mass_derivatives(z).map(|d| d.2)
    }

    /// Unshifted antiderivative of `√m`, zero at [`Self::center`].
    fn antiderivative(&self, z: f64) -> f64 {
        let MassParameters {
            alpha,
            beta,
            gamma,
            delta,
        } = self.params;
        match self.kind {
            MassKind::I => {
                let root = self.params.discriminant().sqrt();
                2.0 * delta / root * ((beta + 2.0 * gamma * z) / root).atan()
            }
            MassKind::II => {
                let (b2, g2) = (beta * beta, gamma * gamma);
                alpha / (2.0 * b2 * g2) * (g2 * z * z / b2).atan()
            }
            MassKind::III => alpha / (3.0 * beta * gamma) * (gamma * z.powi(3) / beta).atan(),
        }
    }

    /// `y = f(z) + shift`.
    pub fn map_forward(&self, z: f64) -> Result<f64> {
        self.check(z)?;
        Ok(self.antiderivative(z) + self.shift)
    }

    pub(crate) fn map_forward_unchecked(&self, z: f64) -> f64 {
        self.antiderivative(z) + self.shift
    }

    /// `∫_{z_from}^{z_to} √m dz` by quadrature (no shift).
    pub fn map_forward_quadrature(&self, z_from: f64, z_to: f64, quad: &QuadratureSettings) -> Result<f64> {
        let dom = self.z_domain();
        for z in [z_from, z_to] {
            if !(z >= dom.lo && z <= dom.hi) || !z.is_finite() {
                return Err(Error::Domain(format!(
                    "quadrature endpoint {z} outside the closure of {dom}"
                )));
            }
        }
        integrate(|z| self.sqrt_mass_unchecked(z), Interval::new(z_from, z_to), quad)
    }

    /// Open range of `f + shift` over the z domain.
    pub fn map_range(&self) -> Interval {
        let MassParameters {
            alpha,
            beta,
            gamma,
            delta,
        } = self.params;
        let base = match self.kind {
            MassKind::I => {
                let half = PI * delta / self.params.discriminant().sqrt();
                Interval::new(-half, half)
            }
            MassKind::II => Interval::new(0.0, alpha * PI / (4.0 * beta * beta * gamma * gamma)),
            MassKind::III => {
                let half = alpha * PI / (6.0 * beta * gamma);
                Interval::new(-half, half)
            }
        };
        base.shifted(self.shift)
    }

    fn check_range(&self, y: f64) -> Result<()> {
        let range = self.map_range();
        if range.contains(y) {
            Ok(())
        } else {
            Err(Error::Range {
                value: y,
                lo: range.lo,
                hi: range.hi,
            })
        }
    }

    /// The unique `z` with `map_forward(z) = y`.
    pub fn map_inverse(&self, y: f64) -> Result<f64> {
        self.check_range(y)?;
        let MassParameters {
            alpha,
            beta,
            gamma,
            delta,
        } = self.params;
        let t = y - self.shift;
        let z = match self.kind {
            MassKind::I => {
                let root = self.params.discriminant().sqrt();
                (-beta + root * (root * t / (2.0 * delta)).tan()) / (2.0 * gamma)
            }
            MassKind::II => {
                let (b2, g2) = (beta * beta, gamma * gamma);
                (b2 / g2 * (2.0 * b2 * g2 * t / alpha).tan()).sqrt()
            }
            MassKind::III => (beta / gamma * (3.0 * beta * gamma * t / alpha).tan()).cbrt(),
        };
        if z.is_finite() && self.z_domain().contains(z) {
            Ok(z)
        } else {
            self.map_inverse_bisection(y)
        }
    }

    /// Monotone bisection for `map_forward(z) = y`.
    pub fn map_inverse_bisection(&self, y: f64) -> Result<f64> {
        self.check_range(y)?;
        let f = |z: f64| self.antiderivative(z) + self.shift;
        let center = self.center();
        let dom = self.z_domain();
        let (mut lo, mut hi) = match self.kind {
            MassKind::II => (0.0, 1.0),
            _ => (center - 1.0, center + 1.0),
        };
        while f(hi) < y {
            hi = center + 2.0 * (hi - center);
            if !hi.is_finite() {
                return Err(Error::Convergence(format!("no bracket for y = {y}")));
            }
        }
        if dom.lo.is_infinite() {
            while f(lo) > y {
                lo = center - 2.0 * (center - lo);
                if !lo.is_finite() {
                    return Err(Error::Convergence(format!("no bracket for y = {y}")));
                }
            }
        }
        for _ in 0..BISECTION_MAX_STEPS {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if (fm - y).abs() <= BISECTION_Y_TOL || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if fm < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::Convergence(format!(
            "map inverse bisection for y = {y} exceeded {BISECTION_MAX_STEPS} steps"
        )))
    }
}

/// Which parameter a strict constraint pins, as a multiple of a derived
/// quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
enum Pinned {
    /// `δ = factor · √Δ`
    Delta { factor: f64 },
    /// `α = factor · β²γ²`
    AlphaSquares { factor: f64 },
    /// `α = factor · βγ`
    AlphaProduct { factor: f64 },
}

/// The parameter relation and mapping constant that make
/// `range(f) + shift` equal a reference domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintSpec {
    pub mass_kind: MassKind,
    pub reference_kind: ReferenceKind,
    pub parameter_relation: String,
    pub shift: f64,
    pinned: Pinned,
}

impl ConstraintSpec {
    fn required(&self, p: &MassParameters) -> f64 {
        match self.pinned {
            Pinned::Delta { factor } => factor * p.discriminant().sqrt(),
            Pinned::AlphaSquares { factor } => factor * p.beta * p.beta * p.gamma * p.gamma,
            Pinned::AlphaProduct { factor } => factor * p.beta * p.gamma,
        }
    }

    fn actual(&self, p: &MassParameters) -> f64 {
        match self.pinned {
            Pinned::Delta { .. } => p.delta,
            Pinned::AlphaSquares { .. } | Pinned::AlphaProduct { .. } => p.alpha,
        }
    }

    /// Relation holds to `10⁻¹²` relative.
    pub fn satisfied(&self, p: &MassParameters) -> bool {
        let need = self.required(p);
        let have = self.actual(p);
        need.is_finite() && (have - need).abs() <= 1e-12 * need.abs()
    }

    /// Parameters with the pinned one replaced by its required value.
    ///
    /// For kind I the pinned `δ` does not enter `Δ`; for kinds II and III
    /// `α` is solved from `β`, `γ`.
    pub fn enforce(&self, p: &MassParameters) -> MassParameters {
        let value = self.required(p);
        let mut out = *p;
        match self.pinned {
            Pinned::Delta { .. } => out.delta = value,
            Pinned::AlphaSquares { .. } | Pinned::AlphaProduct { .. } => out.alpha = value,
        }
        out
    }
}

/// Relation and shift for strict (unscaled) composition.
pub fn strict_constraint(kind: MassKind, reference: ReferenceKind) -> ConstraintSpec {
    use MassKind::*;
    use ReferenceKind::*;
    let (relation, pinned, shift) = match (kind, reference) {
        (I, Stp) => ("delta = sqrt(Delta)/2", Pinned::Delta { factor: 0.5 }, 0.0),
        (I, Scp) => ("delta = sqrt(Delta)/2", Pinned::Delta { factor: 0.5 }, PI / 2.0),
        (I, Ptp) => ("delta = sqrt(Delta)/4", Pinned::Delta { factor: 0.25 }, PI / 4.0),
        (II, Stp) => (
            "alpha = 4 beta^2 gamma^2",
            Pinned::AlphaSquares { factor: 4.0 },
            -PI / 2.0,
        ),
        (II, Scp) => ("alpha = 4 beta^2 gamma^2", Pinned::AlphaSquares { factor: 4.0 }, 0.0),
        (II, Ptp) => ("alpha = 2 beta^2 gamma^2", Pinned::AlphaSquares { factor: 2.0 }, 0.0),
        (III, Stp) => ("alpha = 3 beta gamma", Pinned::AlphaProduct { factor: 3.0 }, 0.0),
        (III, Scp) => ("alpha = 3 beta gamma", Pinned::AlphaProduct { factor: 3.0 }, PI / 2.0),
        (III, Ptp) => (
            "alpha = 3 beta gamma / 2",
            Pinned::AlphaProduct { factor: 1.5 },
            PI / 4.0,
        ),
    };
    ConstraintSpec {
        mass_kind: kind,
        reference_kind: reference,
        parameter_relation: relation.to_string(),
        shift,
        pinned,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical() -> MassProfile {
        MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.0)).unwrap()
    }

    #[test]
    fn kind_one_values() {
        let p = canonical();
        assert_eq!(p.mass_value(0.0).unwrap(), 1.0);
        assert_eq!(p.mass_value(1.0).unwrap(), 0.25);
        assert_eq!(p.mass_d1(0.0).unwrap(), 0.0);
        assert!((p.mass_d1(1.0).unwrap() + 0.5).abs() < 1e-15);
        assert!((p.mass_d2(0.0).unwrap() + 4.0).abs() < 1e-15);
    }

    #[test]
    fn kind_two_vanishes_at_origin() {
        let p = MassProfile::new(MassKind::II, MassParameters::new(4.0, 1.0, 1.0, 0.0)).unwrap();
        assert!(p.mass_value(1e-9).unwrap() < 1e-15);
        assert!(p.mass_value(0.0).is_err());
        assert!(p.mass_value(-1.0).is_err());
    }

    #[test]
    fn canonical_map() {
        let p = canonical();
        assert_eq!(p.map_forward(0.0).unwrap(), 0.0);
        assert!((p.map_forward(1.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((p.map_inverse(PI / 4.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(p.map_inverse(0.0).unwrap().abs() < 1e-15);
        let r = p.map_range();
        assert!((r.lo + PI / 2.0).abs() < 1e-15 && (r.hi - PI / 2.0).abs() < 1e-15);
        assert!(matches!(p.map_inverse(PI / 2.0), Err(Error::Range { .. })));
    }

    #[test]
    fn kind_two_and_three_examples() {
        let two = MassProfile::new(MassKind::II, MassParameters::new(4.0, 1.0, 1.0, 0.0)).unwrap();
        assert!((two.map_forward(1.0).unwrap() - PI / 2.0).abs() < 1e-15);
        let r = two.map_range();
        assert_eq!(r.lo, 0.0);
        assert!((r.hi - PI).abs() < 1e-15);

        let three = MassProfile::new(MassKind::III, MassParameters::new(3.0, 1.0, 1.0, 0.0)).unwrap();
        let q = three
            .map_forward_quadrature(0.0, 1.0, &QuadratureSettings::default())
            .unwrap();
        assert!((q - PI / 4.0).abs() < 1e-10);
        assert!((three.map_forward(1.0).unwrap() - PI / 4.0).abs() < 1e-15);
        let r = three.map_range();
        assert!((r.hi - PI / 2.0).abs() < 1e-15 && (r.lo + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn empty_quadrature_interval() {
        let p = canonical();
        let q = p
            .map_forward_quadrature(0.7, 0.7, &QuadratureSettings::default())
            .unwrap();
        assert_eq!(q, 0.0);
    }

    #[test]
    fn bisection_agrees_with_closed_form() {
        for (kind, params) in [
            (MassKind::I, MassParameters::new(2.0, 0.5, 1.5, 0.8)),
            (MassKind::II, MassParameters::new(3.0, 1.2, -0.7, 0.0)),
            (MassKind::III, MassParameters::new(2.0, 0.6, 1.4, 0.0)),
        ] {
            let p = MassProfile::new(kind, params).unwrap().with_shift(0.3);
            let r = p.map_range();
            for t in [0.1, 0.35, 0.5, 0.8, 0.95] {
                let y = r.lo + t * r.length();
                let a = p.map_inverse(y).unwrap();
                let b = p.map_inverse_bisection(y).unwrap();
                assert!((p.map_forward(a).unwrap() - y).abs() < 1e-12, "{kind}");
                assert!((p.map_forward(b).unwrap() - y).abs() <= 1e-12, "{kind}");
            }
        }
    }

    #[test]
    fn validation_messages() {
        assert!(validate(&MassParameters::new(1.0, 0.0, 1.0, 1.0), MassKind::I).is_empty());
        let v = validate(&MassParameters::new(0.0, 2.0, 1.0, 1.0), MassKind::I);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].relation, "Delta > 0");
        assert!(v[0].detail.contains("-4"));
        let v = validate(&MassParameters::new(-1.0, 1.0, 1.0, 0.0), MassKind::III);
        assert_eq!(v[0].relation, "alpha > 0");
        let v = validate(&MassParameters::new(1.0, 0.0, 0.0, 0.0), MassKind::II);
        assert_eq!(v.len(), 2);
        assert!(MassProfile::new(MassKind::I, MassParameters::new(0.0, 2.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn constraint_table() {
        let c = strict_constraint(MassKind::I, ReferenceKind::Stp);
        assert_eq!(c.shift, 0.0);
        assert!(c.satisfied(&MassParameters::new(1.0, 0.0, 1.0, 1.0)));
        assert!(!c.satisfied(&MassParameters::new(1.0, 0.0, 1.0, 0.9)));
        let c = strict_constraint(MassKind::III, ReferenceKind::Stp);
        assert!(c.satisfied(&MassParameters::new(3.0, 1.0, 1.0, 0.0)));
        let c = strict_constraint(MassKind::II, ReferenceKind::Scp);
        assert!(c.satisfied(&MassParameters::new(4.0, 1.0, 1.0, 0.0)));
        assert_eq!(c.shift, 0.0);
        let fixed = c.enforce(&MassParameters::new(1.0, 2.0, 0.5, 0.0));
        assert_eq!(fixed.alpha, 4.0);
    }

    #[test]
    fn every_constraint_maps_onto_its_reference_domain() {
        let base = MassParameters::new(1.3, 0.4, 0.9, 1.0);
        for kind in [MassKind::I, MassKind::II, MassKind::III] {
            for rk in [ReferenceKind::Stp, ReferenceKind::Scp, ReferenceKind::Ptp] {
                let c = strict_constraint(kind, rk);
                let params = c.enforce(&base);
                assert!(c.satisfied(&params));
                let p = MassProfile::new(kind, params).unwrap().with_shift(c.shift);
                let range = p.map_range();
                let want = rk.canonical_domain();
                assert!((range.lo - want.lo).abs() < 1e-12, "{kind} {rk:?}");
                assert!((range.hi - want.hi).abs() < 1e-12, "{kind} {rk:?}");
            }
        }
    }
}
