//! Numerical isospectrality check of a [`TargetSystem`]: truncate, discretize,
//! solve on refined grids, extrapolate, and compare with the passthrough
//! energies. Also measures how well the transported analytic states solve
//! the target equation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::massprofiles::MassKind;
use crate::oracles::diagnostics::{count_nodes, gram_defect, orthonormality_matrix, residual_norm, ResidualSystem};
use crate::oracles::eigen::{eigenvector, lowest_eigenvalues, lowest_eigenvalues_near, richardson};
use crate::oracles::operator::{discretize_constant, discretize_pdem, Grid, TridiagonalOperator, MASS_FLOOR};
use crate::oracles::quadrature::{integrate_panels, QuadratureSettings};
use crate::pct::{CorrectionCoefficient, Mode, TargetSystem, TransportedState};
use crate::refmodels::{ReferenceKind, ReferenceModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// On `|E_numeric − E| / max(|E|, 1)`.
    pub isospectral_rel: f64,
    pub residual: f64,
    pub gram: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            isospectral_rel: 1e-5,
            residual: 1e-4,
            gram: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridChoice {
    /// Solve at `N` and `2N + 1`.
    Fixed(usize),
    /// Refine `N → 2N + 1` until successive extrapolations agree.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    pub levels: usize,
    pub grid: GridChoice,
    pub eps_map: f64,
    pub tolerances: Tolerances,
    pub initial_nodes: usize,
    pub max_nodes: usize,
    /// Repeat with `eps_map / 10` and require the shift to stay below a tenth
    /// of the tolerance.
    pub truncation_guard: bool,
    pub quad: QuadratureSettings,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            levels: 4,
            grid: GridChoice::Auto,
            eps_map: 1e-4,
            tolerances: Tolerances::default(),
            initial_nodes: 2001,
            max_nodes: 1 << 21,
            truncation_guard: true,
            quad: QuadratureSettings::default().with_tolerance(1e-11),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRow {
    pub k: usize,
    pub e_analytic: f64,
    pub e_numeric: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl LevelRow {
    fn new(k: usize, e_analytic: f64, e_numeric: f64) -> Self {
        let abs_err = (e_numeric - e_analytic).abs();
        Self {
            k,
            e_analytic,
            e_numeric,
            abs_err,
            rel_err: abs_err / e_analytic.abs().max(1.0),
        }
    }
}

/// Raw eigenvalues on one grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridLevel {
    pub n: usize,
    pub h: f64,
    pub eigenvalues: Vec<f64>,
    pub rel_errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationGuard {
    pub eps_map: f64,
    pub interval: Interval,
    pub n: usize,
    /// Nodes added on the left and right at unchanged spacing.
    pub added_nodes: (usize, usize),
    pub max_rel_shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceMetadata {
    pub interval: Interval,
    pub eps_map: f64,
    pub grids: Vec<GridLevel>,
    /// One extrapolated spectrum per consecutive grid pair.
    pub richardson: Vec<Vec<f64>>,
    pub n_used: usize,
    /// Grid on which the numeric eigenvectors for the node counts were taken.
    pub eigenvector_n: usize,
    pub pinned_nodes: usize,
    /// Raw errors shrink with every refinement, for every level.
    pub monotone: bool,
    pub guard: Option<TruncationGuard>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NodeCount {
    pub k: usize,
    pub reference: usize,
    pub transported: usize,
    pub numeric: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormCheck {
    pub k: usize,
    pub z_integral: f64,
    pub y_integral: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub isospectral: bool,
    pub residual: bool,
    pub gram: bool,
    pub nodes: bool,
    pub truncation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub mass_kind: MassKind,
    pub reference_kind: ReferenceKind,
    pub mode: Mode,
    pub correction: CorrectionCoefficient,
    pub tolerances: Tolerances,
    pub rows: Vec<LevelRow>,
    pub residual_norms: Vec<f64>,
    pub gram_defect: f64,
    pub norms: Vec<NormCheck>,
    pub node_counts: Vec<NodeCount>,
    pub convergence: ConvergenceMetadata,
    pub checks: Checks,
    pub passed: bool,
}

impl VerificationReport {
    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.rel_err))
    }
}

/// Node counts do not need the finest grid.
const EIGENVECTOR_MAX_NODES: usize = 1 << 16;

/// Interior zero of `m` strictly inside `interval`.
fn interior_zero(ts: &TargetSystem, interval: Interval) -> Option<f64> {
    ts.profile().interior_mass_zero().filter(|z0| interval.contains(*z0))
}

/// Truncated `z` interval used by the oracle. With an interior zero of `m`
/// the interval is made symmetric about it so that odd `N` puts it on a node.
pub fn oracle_interval(ts: &TargetSystem, eps_map: f64) -> Result<Interval> {
    let iv = ts.truncated_domain(eps_map)?;
    Ok(match interior_zero(ts, iv) {
        Some(z0) => {
            let half = (z0 - iv.lo).max(iv.hi - z0);
            Interval::new(z0 - half, z0 + half)
        }
        None => iv,
    })
}

fn grid_for(ts: &TargetSystem, interval: Interval, n: usize) -> Result<Grid> {
    let n = if interior_zero(ts, interval).is_some() && n.is_multiple_of(2) {
        n + 1
    } else {
        n
    };
    Grid::on(interval, n)
}

/// The target Hamiltonian discretized on `grid`.
pub fn oracle_operator(ts: &TargetSystem, grid: Grid) -> Result<TridiagonalOperator> {
    let profile = ts.profile();
    discretize_pdem(
        |z| profile.sqrt_mass_unchecked(z).powi(2),
        |z| ts.target_potential(z),
        grid,
    )
}

fn grid_level(
    ts: &TargetSystem,
    grid: Grid,
    levels: usize,
    previous: &[GridLevel],
) -> Result<(GridLevel, TridiagonalOperator)> {
    let op = oracle_operator(ts, grid)?;
    let eigenvalues = match previous {
        [.., c, f] => {
            let hints: Vec<(f64, f64)> = c
                .eigenvalues
                .iter()
                .zip(&f.eigenvalues)
                .map(|(c, f)| (f + (f - c) / 4.0, (f - c).abs() / 8.0))
                .collect();
            lowest_eigenvalues_near(&op, &hints)?
        }
        _ => lowest_eigenvalues(&op, levels)?,
    };
    let rel_errors = eigenvalues
        .iter()
        .enumerate()
        .map(|(k, e)| LevelRow::new(k, ts.target_energy(k), *e).rel_err)
        .collect();
    Ok((
        GridLevel {
            n: grid.n,
            h: grid.h(),
            eigenvalues,
            rel_errors,
        },
        op,
    ))
}

/// Raw eigenvalues at each `n` on the oracle interval, for convergence plots.
pub fn convergence_study(ts: &TargetSystem, eps_map: f64, nodes: &[usize], levels: usize) -> Result<Vec<GridLevel>> {
    let interval = oracle_interval(ts, eps_map)?;
    nodes
        .iter()
        .map(|&n| grid_level(ts, grid_for(ts, interval, n)?, levels, &[]).map(|(g, _)| g))
        .collect()
}

fn monotone(grids: &[GridLevel]) -> bool {
    grids.windows(2).all(|w| {
        w[0].rel_errors
            .iter()
            .zip(&w[1].rel_errors)
            .all(|(coarse, fine)| fine < coarse)
    })
}

fn max_rel_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Extends `grid` by whole steps towards the `eps_map / 10` interval so the
/// original nodes are kept.
fn guard_grid(ts: &TargetSystem, grid: Grid, eps_map: f64) -> Result<(Grid, usize, usize)> {
    let h = grid.h();
    let target = oracle_interval(ts, eps_map / 10.0)?;
    let dom = ts.z_domain();
    let mut left = ((grid.a - target.lo) / h).ceil().max(0.0) as usize;
    while left > 0 && grid.a - left as f64 * h <= dom.lo {
        left -= 1;
    }
    let mut right = ((target.hi - grid.b) / h).ceil().max(0.0) as usize;
    while right > 0 && grid.b + right as f64 * h >= dom.hi {
        right -= 1;
    }
    if interior_zero(ts, grid.interval()).is_some() {
        let both = left.min(right);
        left = both;
        right = both;
    }
    let g = Grid::new(
        grid.a - left as f64 * h,
        grid.b + right as f64 * h,
        grid.n + left + right,
    )?;
    Ok((g, left, right))
}

/// Uniform `y` points strictly inside the truncated range, mapped to `z`,
/// dropping zeros of `m`.
fn sample_points(ts: &TargetSystem, eps_map: f64, count: usize) -> Result<Vec<f64>> {
    let range = ts.profile().map_range();
    let (lo, hi) = (range.lo + eps_map, range.hi - eps_map);
    let mut out = Vec::with_capacity(count);
    for j in 1..=count {
        let y = lo + (hi - lo) * j as f64 / (count + 1) as f64;
        let z = ts.profile().map_inverse(y)?;
        if ts.profile().sqrt_mass_unchecked(z).powi(2) >= MASS_FLOOR {
            out.push(z);
        }
    }
    Ok(out)
}

/// Quadrature breakpoints in `z` from a uniform partition in `y`.
fn breakpoints(ts: &TargetSystem, eps_map: f64, panels: usize) -> Result<Vec<f64>> {
    let range = ts.profile().map_range();
    let (lo, hi) = (range.lo + eps_map, range.hi - eps_map);
    let mut out = (0..=panels)
        .map(|j| ts.profile().map_inverse(lo + (hi - lo) * j as f64 / panels as f64))
        .collect::<Result<Vec<f64>>>()?;
    if let Some(z0) = interior_zero(ts, Interval::new(out[0], out[panels])) {
        if !out.contains(&z0) {
            out.push(z0);
            out.sort_by(f64::total_cmp);
        }
    }
    Ok(out)
}

/// Residual of `state` for the target equation, with stencils kept on one
/// side of any interior zero of `m`.
fn transported_residual(ts: &TargetSystem, state: &TransportedState, points: &[f64], interval: Interval) -> f64 {
    let profile = ts.profile();
    let mass = |z: f64| profile.sqrt_mass_unchecked(z).powi(2);
    let potential = |z: f64| ts.target_potential(z).unwrap_or(f64::NAN);
    let system = ResidualSystem::Pdem {
        mass: &mass,
        potential: &potential,
    };
    let psi = |z: f64| state.value_unchecked(z);
    let energy = ts.target_energy(state.level());
    let scale = points.iter().fold(0.0f64, |m, &z| m.max(psi(z).abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let sides: Vec<(Vec<f64>, Interval)> = match interior_zero(ts, interval) {
        Some(z0) => vec![
            (
                points.iter().copied().filter(|z| *z < z0).collect(),
                Interval::new(interval.lo, z0),
            ),
            (
                points.iter().copied().filter(|z| *z > z0).collect(),
                Interval::new(z0, interval.hi),
            ),
        ],
        None => vec![(points.to_vec(), interval)],
    };
    sides
        .iter()
        .filter(|(pts, _)| !pts.is_empty())
        .map(|(pts, dom)| {
            let local = pts.iter().fold(0.0f64, |m, &z| m.max(psi(z).abs()));
            residual_norm(&system, &psi, energy, pts, *dom) * local / scale
        })
        .fold(0.0, f64::max)
}

/// Constant-mass check of a reference model: `−Φ″ + UΦ` on its whole
/// domain with Dirichlet ends, solved at `n` and `2n + 1` and extrapolated.
pub fn reference_spectrum(model: &ReferenceModel, n: usize, levels: usize) -> Result<Vec<LevelRow>> {
    let coarse = Grid::on(model.domain(), n)?;
    let solve = |g: Grid| lowest_eigenvalues(&discretize_constant(|y| model.potential(y), g)?, levels);
    let a = solve(coarse)?;
    let b = solve(coarse.refined())?;
    Ok(a.iter()
        .zip(&b)
        .enumerate()
        .map(|(k, (c, f))| LevelRow::new(k, model.energy(k), richardson(*c, *f)))
        .collect())
}

/// Runs the full oracle comparison for the first `settings.levels` levels.
pub fn verify(ts: &TargetSystem, settings: &VerifySettings) -> Result<VerificationReport> {
    let k_levels = settings.levels;
    if k_levels == 0 {
        return Err(Error::Domain("levels must be at least 1".to_string()));
    }
    let tol = settings.tolerances;
    let interval = oracle_interval(ts, settings.eps_map)?;

    let (first_n, fixed) = match settings.grid {
        GridChoice::Fixed(n) => (n, true),
        GridChoice::Auto => (settings.initial_nodes, false),
    };
    let mut grid = grid_for(ts, interval, first_n)?;
    let (level, _) = grid_level(ts, grid, k_levels, &[])?;
    let mut grids = vec![level];
    let mut extrapolated: Vec<Vec<f64>> = Vec::new();
    loop {
        let next = grid.refined();
        if next.n > settings.max_nodes {
            return Err(Error::Convergence(format!(
                "extrapolated eigenvalues not settled within {} nodes (last change {:e})",
                settings.max_nodes,
                match extrapolated.as_slice() {
                    [.., a, b] => max_rel_change(a, b),
                    _ => f64::INFINITY,
                }
            )));
        }
        let (level, _) = grid_level(ts, next, k_levels, &grids)?;
        let coarse = &grids.last().expect("at least one grid").eigenvalues;
        extrapolated.push(
            coarse
                .iter()
                .zip(&level.eigenvalues)
                .map(|(c, f)| richardson(*c, *f))
                .collect(),
        );
        grids.push(level);
        grid = next;
        if fixed {
            break;
        }
        if let [.., a, b] = extrapolated.as_slice() {
            if max_rel_change(a, b) <= tol.isospectral_rel / 10.0 {
                break;
            }
        }
    }
    let estimate = extrapolated.last().expect("one pair solved").clone();
    let rows: Vec<LevelRow> = estimate
        .iter()
        .enumerate()
        .map(|(k, e)| LevelRow::new(k, ts.target_energy(k), *e))
        .collect();

    let guard = if settings.truncation_guard {
        // finest solved grid whose extension fits in max_nodes
        let mut index = grids.len() - 2;
        let mut g = Grid {
            n: (grid.n - 1) / 2,
            ..grid
        };
        let mut extension = guard_grid(ts, g, settings.eps_map)?;
        while extension.0.n > settings.max_nodes && index > 0 {
            index -= 1;
            g = Grid { n: (g.n - 1) / 2, ..g };
            extension = guard_grid(ts, g, settings.eps_map)?;
        }
        let (ext, left, right) = extension;
        let base = &grids[index].eigenvalues;
        let hints: Vec<(f64, f64)> = base.iter().map(|e| (*e, 1e-6 * e.abs().max(1.0))).collect();
        let extended = lowest_eigenvalues_near(&oracle_operator(ts, ext)?, &hints)?;
        Some(TruncationGuard {
            eps_map: settings.eps_map / 10.0,
            interval: ext.interval(),
            n: ext.n,
            added_nodes: (left, right),
            max_rel_shift: max_rel_change(base, &extended),
        })
    } else {
        None
    };

    // Transported analytic states.
    let states = (0..k_levels)
        .map(|k| ts.transported_state(k, &settings.quad))
        .collect::<Result<Vec<_>>>()?;
    let points = sample_points(ts, settings.eps_map, 400)?;
    let residual_norms: Vec<f64> = states
        .iter()
        .map(|s| transported_residual(ts, s, &points, interval))
        .collect();

    let bps = breakpoints(ts, settings.eps_map, 64)?;
    let closures: Vec<Box<dyn Fn(f64) -> f64 + '_>> = states
        .iter()
        .map(|s| Box::new(move |z: f64| s.value_unchecked(z)) as Box<dyn Fn(f64) -> f64>)
        .collect();
    let refs: Vec<&dyn Fn(f64) -> f64> = closures.iter().map(|b| b.as_ref()).collect();
    let gram = orthonormality_matrix(&refs, &bps, &settings.quad)?;
    let reference = ts.reference();
    let mut norms = Vec::with_capacity(k_levels);
    for (k, s) in states.iter().enumerate() {
        let n2 = s.normalization().powi(2);
        let y_integral = integrate_panels(
            |y| n2 * reference.wavefunction_unchecked(k, y).unwrap_or(f64::NAN).powi(2),
            &reference.breakpoints(k),
            &settings.quad,
        )?;
        norms.push(NormCheck {
            k,
            z_integral: gram[k][k],
            y_integral,
        });
    }

    let node_points = sample_points(ts, settings.eps_map, 2000)?;
    let y_points: Vec<f64> = node_points
        .iter()
        .map(|z| ts.profile().map_forward_unchecked(*z))
        .collect();
    let mut node_counts = Vec::with_capacity(k_levels);
    let node_grid = grids
        .iter()
        .rev()
        .find(|g| g.n <= EIGENVECTOR_MAX_NODES)
        .unwrap_or(&grids[0]);
    let op = oracle_operator(ts, Grid::on(interval, node_grid.n)?)?;
    for (k, s) in states.iter().enumerate() {
        let phi: Vec<f64> = y_points
            .iter()
            .map(|y| reference.wavefunction_unchecked(k, *y).unwrap_or(f64::NAN))
            .collect();
        let psi: Vec<f64> = node_points.iter().map(|z| s.value_unchecked(*z)).collect();
        let vector = eigenvector(&op, node_grid.eigenvalues[k])?;
        node_counts.push(NodeCount {
            k,
            reference: count_nodes(&phi),
            transported: count_nodes(&psi),
            numeric: count_nodes(&vector),
        });
    }

    let checks = Checks {
        isospectral: rows.iter().all(|r| r.rel_err <= tol.isospectral_rel),
        residual: residual_norms.iter().all(|r| *r <= tol.residual),
        gram: gram_defect(&gram) <= tol.gram,
        nodes: node_counts
            .iter()
            .all(|c| c.reference == c.k && c.transported == c.k && c.numeric == c.k),
        truncation: guard
            .as_ref()
            .is_none_or(|g| g.max_rel_shift <= tol.isospectral_rel / 10.0),
    };
    let passed = checks.isospectral && checks.residual && checks.gram && checks.nodes && checks.truncation;
    Ok(VerificationReport {
        mass_kind: ts.profile().kind(),
        reference_kind: reference.kind(),
        mode: ts.mode(),
        correction: ts.correction(),
        tolerances: tol,
        rows,
        residual_norms,
        gram_defect: gram_defect(&gram),
        norms,
        node_counts,
        convergence: ConvergenceMetadata {
            interval,
            eps_map: settings.eps_map,
            monotone: monotone(&grids),
            n_used: grid.n,
            eigenvector_n: node_grid.n,
            pinned_nodes: op.pinned_nodes().len(),
            grids,
            richardson: extrapolated,
            guard,
        },
        checks,
        passed,
    })
}
