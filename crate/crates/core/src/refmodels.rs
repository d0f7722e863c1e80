//! Exactly solvable constant-mass references on trigonometric domains.
//!
//! With argument scale `a` and `t = a·y`:
//!
//! * STP: `μ(μ−1) tan²(t)` on `(−π/2a, π/2a)`
//! * SCP: `μ(μ−1) cot²(t)` on `(0, π/a)`
//! * PTP: `χ(χ−1)/sin²(t) + λ(λ−1)/cos²(t)` on `(0, π/2a)`
//!
//! For `a ≠ 1` the spectrum is `a²·Ê_k(μ̃)` with `μ̃(μ̃−1) = μ(μ−1)/a²`
//! (see [`scaled_mu`]); the same rule applies to `χ` and `λ` separately.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::oracles::quadrature::{integrate_panels, QuadratureSettings};
use crate::specfun::hyp2f1_terminating;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReferenceKind {
    #[serde(rename = "STP")]
    Stp,
    #[serde(rename = "SCP")]
    Scp,
    #[serde(rename = "PTP")]
    Ptp,
}

impl ReferenceKind {
    /// Domain at unit scale.
    pub fn canonical_domain(&self) -> Interval {
        match self {
            Self::Stp => Interval::new(-FRAC_PI_2, FRAC_PI_2),
            Self::Scp => Interval::new(0.0, PI),
            Self::Ptp => Interval::new(0.0, FRAC_PI_2),
        }
    }
}

impl std::str::FromStr for ReferenceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "STP" => Ok(Self::Stp),
            "SCP" => Ok(Self::Scp),
            "PTP" => Ok(Self::Ptp),
            other => Err(Error::Domain(format!("unknown reference kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Stp => "STP",
            Self::Scp => "SCP",
            Self::Ptp => "PTP",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// `μ̃ = (1 + √(1 + 4U₀/a²))/2`, the root `≥ 1` of `μ̃(μ̃−1) = U₀/a²`.
pub fn scaled_mu(u0: f64, a: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 4.0 * u0 / (a * a)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceModel {
    kind: ReferenceKind,
    /// `μ` for STP/SCP, `χ` for PTP.
    first: f64,
    /// `λ` for PTP, unused otherwise.
    second: f64,
    scale: f64,
}

fn check_strength(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameters(vec![format!(
            "{name} >= 1 violated ({name} = {v})"
        )]))
    }
}

impl ReferenceModel {
    pub fn stp(mu: f64) -> Result<Self> {
        check_strength("mu", mu)?;
        Ok(Self {
            kind: ReferenceKind::Stp,
            first: mu,
            second: 0.0,
            scale: 1.0,
        })
    }

    pub fn scp(mu: f64) -> Result<Self> {
        Ok(Self {
            kind: ReferenceKind::Scp,
            ..Self::stp(mu)?
        })
    }

    pub fn ptp(chi: f64, lambda: f64) -> Result<Self> {
        check_strength("chi", chi)?;
        check_strength("lambda", lambda)?;
        Ok(Self {
            kind: ReferenceKind::Ptp,
            first: chi,
            second: lambda,
            scale: 1.0,
        })
    }

    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameters(vec![format!(
                "scale > 0 violated (scale = {scale})"
            )]));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn kind(&self) -> ReferenceKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `μ` (STP/SCP only).
    pub fn mu(&self) -> Option<f64> {
        (self.kind != ReferenceKind::Ptp).then_some(self.first)
    }

    /// `(χ, λ)` (PTP only).
    pub fn chi_lambda(&self) -> Option<(f64, f64)> {
        (self.kind == ReferenceKind::Ptp).then_some((self.first, self.second))
    }

    pub fn domain(&self) -> Interval {
        let d = self.kind.canonical_domain();
        Interval::new(d.lo / self.scale, d.hi / self.scale)
    }

    /// Parameters entering the unit-scale formulas after rescaling.
    fn effective(&self) -> (f64, f64) {
        let eff = |p: f64| scaled_mu(p * (p - 1.0), self.scale);
        if self.scale == 1.0 {
            (self.first, self.second)
        } else {
            (eff(self.first), eff(self.second))
        }
    }

    fn check(&self, y: f64) -> Result<()> {
        if self.domain().contains(y) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "y = {y} outside the {} domain {}",
                self.kind,
                self.domain()
            )))
        }
    }

    pub fn potential(&self, y: f64) -> Result<f64> {
        self.check(y)?;
        Ok(self.potential_unchecked(y))
    }

    pub(crate) fn potential_unchecked(&self, y: f64) -> f64 {
        let t = self.scale * y;
        let (p, q) = (self.first, self.second);
        match self.kind {
            ReferenceKind::Stp => p * (p - 1.0) * t.tan().powi(2),
            ReferenceKind::Scp => p * (p - 1.0) / t.tan().powi(2),
            ReferenceKind::Ptp => p * (p - 1.0) / t.sin().powi(2) + q * (q - 1.0) / t.cos().powi(2),
        }
    }

    pub fn parity(&self, k: usize) -> Parity {
        match self.kind {
            ReferenceKind::Ptp => Parity::None,
            _ if k.is_multiple_of(2) => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// Energy of level `k` in the combined ascending order.
    pub fn energy(&self, k: usize) -> f64 {
        let (p, q) = self.effective();
        let a2 = self.scale * self.scale;
        let n = (k / 2) as f64;
        let unit = match self.kind {
            ReferenceKind::Ptp => (2.0 * k as f64 + p + q).powi(2),
            _ if k.is_multiple_of(2) => 4.0 * n * (n + p) + p,
            _ => (2.0 * n + 1.0) * (2.0 * n + 2.0 * p + 1.0) + p,
        };
        a2 * unit
    }

    pub fn spectrum_table(&self, count: usize) -> SpectrumTable {
        SpectrumTable {
            levels: (0..count)
                .map(|k| SpectrumLevel {
                    k,
                    energy: self.energy(k),
                    parity: self.parity(k),
                })
                .collect(),
        }
    }

    /// Unnormalized eigenfunction of level `k`.
    pub fn wavefunction_raw(&self, k: usize, y: f64) -> Result<f64> {
        self.check(y)?;
        self.wavefunction_unchecked(k, y)
    }

    /// Same formula without the domain check; closure endpoints give `0`.
    pub(crate) fn wavefunction_unchecked(&self, k: usize, y: f64) -> Result<f64> {
        let t = self.scale * y;
        let (p, q) = self.effective();
        let (s, c) = t.sin_cos();
        let pow = |x: f64, e: f64| x.max(0.0).powf(e);
        Ok(match self.kind {
            ReferenceKind::Stp => {
                let n = k / 2;
                if k.is_multiple_of(2) {
                    pow(c, p) * hyp2f1_terminating(n, n as f64 + p, p + 0.5, c * c)?
                } else {
                    s * pow(c, p) * hyp2f1_terminating(n, n as f64 + p + 1.0, p + 0.5, c * c)?
                }
            }
            ReferenceKind::Scp => {
                let n = k / 2;
                if k.is_multiple_of(2) {
                    pow(s, p) * hyp2f1_terminating(n, n as f64 + p, p + 0.5, s * s)?
                } else {
                    c * pow(s, p) * hyp2f1_terminating(n, n as f64 + p + 1.0, p + 0.5, s * s)?
                }
            }
            ReferenceKind::Ptp => pow(s, p) * pow(c, q) * hyp2f1_terminating(k, k as f64 + p + q, p + 0.5, s * s)?,
        })
    }

    /// Panel breakpoints used for quadrature over the domain.
    pub(crate) fn breakpoints(&self, k: usize) -> Vec<f64> {
        let d = self.domain();
        let panels = 8 + 2 * k;
        (0..=panels)
            .map(|i| d.lo + d.length() * i as f64 / panels as f64)
            .collect()
    }

    /// `N > 0` with `∫ |N Φ_k|² dy = 1`.
    pub fn normalization(&self, k: usize, quad: &QuadratureSettings) -> Result<f64> {
        // Probe once so unsupported levels fail before quadrature.
        self.wavefunction_unchecked(k, self.domain().center())?;
        let integral = integrate_panels(
            |y| self.wavefunction_unchecked(k, y).unwrap_or(f64::NAN).powi(2),
            &self.breakpoints(k),
            quad,
        )?;
        Ok(1.0 / integral.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumLevel {
    pub k: usize,
    pub energy: f64,
    pub parity: Parity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub levels: Vec<SpectrumLevel>,
}

impl SpectrumTable {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

/// The `μ = 3` "odd" SCP family in its published form,
/// `Σ_k (−n)_k (n+3)_k / (k! (7/2)_k) sin^{2k+3} y = sin³y ₂F₁(−n, n+3; 7/2; sin²y)`.
///
/// This is symmetric about `π/2` and coincides with the even `μ = 3` state, so
/// it is kept only for comparison against [`ReferenceModel::wavefunction_raw`].
pub fn scp_odd_printed(n: usize, y: f64) -> Result<f64> {
    let s = y.sin();
    Ok(s.powi(3) * hyp2f1_terminating(n, n as f64 + 3.0, 3.5, s * s)?)
}
