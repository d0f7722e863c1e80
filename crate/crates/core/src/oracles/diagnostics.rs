use crate::error::Result;
use crate::interval::Interval;
use crate::oracles::quadrature::{integrate_panels, QuadratureSettings};

/// Hamiltonian whose residual is measured.
pub enum ResidualSystem<'a> {
    /// `−Φ″ + U Φ`
    Constant { potential: &'a dyn Fn(f64) -> f64 },
    /// `−((1/m) Ψ′)′ + U Ψ`
    Pdem {
        mass: &'a dyn Fn(f64) -> f64,
        potential: &'a dyn Fn(f64) -> f64,
    },
}

/// Base stencil spacing relative to `1 + |z|`.
const STENCIL_REL: f64 = 2e-3;

fn d1(f: &dyn Fn(f64) -> f64, z: f64, h: f64) -> f64 {
    (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h)
}

fn d2(f: &dyn Fn(f64) -> f64, z: f64, h: f64) -> f64 {
    (-f(z - 2.0 * h) + 16.0 * f(z - h) - 30.0 * f(z) + 16.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h * h)
}

impl ResidualSystem<'_> {
    fn apply(&self, psi: &dyn Fn(f64) -> f64, z: f64, h: f64) -> f64 {
        match self {
            Self::Constant { potential } => -d2(psi, z, h) + potential(z) * psi(z),
            Self::Pdem { mass, potential } => {
                let inv_mass = |x: f64| 1.0 / mass(x);
                -(inv_mass(z) * d2(psi, z, h) + d1(&inv_mass, z, h) * d1(psi, z, h)) + potential(z) * psi(z)
            }
        }
    }
}

/// `max_i |HΨ − EΨ|(z_i) / ((|E| + 1) max_i |Ψ(z_i)|)` over `points`.
///
/// `H` uses five-point stencils at spacings `δ` and `δ/2`, combined by
/// Richardson extrapolation; `δ` shrinks near the ends of `domain` so every
/// stencil stays inside it.
pub fn residual_norm(
    system: &ResidualSystem<'_>,
    psi: &dyn Fn(f64) -> f64,
    energy: f64,
    points: &[f64],
    domain: Interval,
) -> f64 {
    let scale = points.iter().fold(0.0f64, |m, &z| m.max(psi(z).abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for &z in points {
        let edge = (z - domain.lo).min(domain.hi - z);
        let delta = (STENCIL_REL * (1.0 + z.abs())).min(0.2 * edge);
        let coarse = system.apply(psi, z, delta) - energy * psi(z);
        let fine = system.apply(psi, z, 0.5 * delta) - energy * psi(z);
        let r = (16.0 * fine - coarse) / 15.0;
        worst = worst.max(r.abs());
    }
    worst / ((energy.abs() + 1.0) * scale)
}

/// `G_ij = ∫ ψ_i ψ_j dz` over the panels `breakpoints[k]..breakpoints[k+1]`
/// (pass `[a, b]` for a single interval).
pub fn orthonormality_matrix(
    states: &[&dyn Fn(f64) -> f64],
    breakpoints: &[f64],
    quad: &QuadratureSettings,
) -> Result<Vec<Vec<f64>>> {
    let n = states.len();
    let mut gram = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = integrate_panels(|z| states[i](z) * states[j](z), breakpoints, quad)?;
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    Ok(gram)
}

/// `max |G − I|`.
pub fn gram_defect(gram: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}

/// Strict sign changes in `samples`, ignoring entries below
/// `10⁻¹² max|sample|`.
pub fn count_nodes(samples: &[f64]) -> usize {
    let max = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-12 * max;
    let mut last_sign = 0.0;
    let mut changes = 0;
    for v in samples.iter().filter(|v| v.abs() > floor) {
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            changes += 1;
        }
        last_sign = s;
    }
    changes
}
