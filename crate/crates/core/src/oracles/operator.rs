use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Masses below this are treated as zeros of `m`.
pub const MASS_FLOOR: f64 = 1e-300;

/// Uniform grid with `n` interior nodes `a + i h`, `i = 1..=n`, and implied
/// Dirichlet values at `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Grid {
    pub const MIN_NODES: usize = 15;

    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::Domain(format!("grid needs finite a < b, got [{a}, {b}]")));
        }
        if n < Self::MIN_NODES {
            return Err(Error::Domain(format!(
                "grid needs at least {} interior nodes, got {n}",
                Self::MIN_NODES
            )));
        }
        Ok(Self { a, b, n })
    }

    pub fn on(interval: Interval, n: usize) -> Result<Self> {
        Self::new(interval.lo, interval.hi, n)
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / (self.n + 1) as f64
    }

    /// Interior node `i` in `1..=n`, as a weighted mean of the ends so the
    /// centre of a symmetric grid is exactly `0`.
    pub fn node(&self, i: usize) -> f64 {
        let m = (self.n + 1) as f64;
        (self.a * (m - i as f64) + self.b * i as f64) / m
    }

    pub fn nodes(&self) -> Vec<f64> {
        (1..=self.n).map(|i| self.node(i)).collect()
    }

    /// Midpoint between nodes `j` and `j + 1`, `j` in `0..=n`.
    pub fn midpoint(&self, j: usize) -> f64 {
        let m = 2.0 * (self.n + 1) as f64;
        let t = (2 * j + 1) as f64;
        (self.a * (m - t) + self.b * t) / m
    }

    /// Same interval with `2n + 1` interior nodes (every old node is kept).
    pub fn refined(&self) -> Self {
        Self {
            n: 2 * self.n + 1,
            ..*self
        }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.a, self.b)
    }
}

/// Flux-form representation `diag = (w_l + w_r)/h² + U`, `off = −w/h²`, kept
/// alongside the matrix so Sturm counts avoid subtracting huge diagonals.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct FluxForm {
    /// `n + 1` midpoint couplings `w/h²` with `w = 1/m`.
    pub coupling: Vec<f64>,
    /// `h²/w`, the reciprocals of `coupling`.
    pub inv_coupling: Vec<f64>,
    /// `n` node potentials; `+∞` marks a pinned node.
    pub potential: Vec<f64>,
}

impl FluxForm {
    fn new(inv_h2: f64, weights: &[f64], potential: Vec<f64>) -> Self {
        let coupling: Vec<f64> = weights.iter().map(|w| w * inv_h2).collect();
        Self {
            inv_coupling: coupling.iter().map(|c| 1.0 / c).collect(),
            coupling,
            potential,
        }
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    pub offdiagonal: Vec<f64>,
    pub grid: Option<Grid>,
    pub(crate) flux: Option<FluxForm>,
}

impl TridiagonalOperator {
    pub fn from_parts(diagonal: Vec<f64>, offdiagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || offdiagonal.len() + 1 != diagonal.len() {
            return Err(Error::Domain(format!(
                "tridiagonal sizes inconsistent: {} diagonal, {} off-diagonal",
                diagonal.len(),
                offdiagonal.len()
            )));
        }
        Ok(Self {
            diagonal,
            offdiagonal,
            grid: None,
            flux: None,
        })
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    /// Nodes where the mass vanishes; these carry a Dirichlet condition.
    pub fn pinned_nodes(&self) -> Vec<usize> {
        self.diagonal
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_infinite())
            .map(|(i, _)| i)
            .collect()
    }

    /// Spacing used for the discrete `ℓ²` norm (`1` without a grid).
    pub fn spacing(&self) -> f64 {
        self.grid.map_or(1.0, |g| g.h())
    }
}

/// `−Φ″ + U Φ`: `diag_i = 2/h² + U(z_i)`, `off_i = −1/h²`.
pub fn discretize_constant<U>(potential: U, grid: Grid) -> Result<TridiagonalOperator>
where
    U: Fn(f64) -> Result<f64>,
{
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let mut diagonal = Vec::with_capacity(grid.n);
    let mut values = Vec::with_capacity(grid.n);
    for z in grid.nodes() {
        let u = potential(z)?;
        if !u.is_finite() {
            return Err(Error::Domain(format!("potential is not finite at node z = {z}")));
        }
        values.push(u);
        diagonal.push(2.0 * inv_h2 + u);
    }
    Ok(TridiagonalOperator {
        diagonal,
        offdiagonal: vec![-inv_h2; grid.n - 1],
        grid: Some(grid),
        flux: Some(FluxForm::new(inv_h2, &vec![1.0; grid.n + 1], values)),
    })
}

/// `−(d/dz)((1/m) dΨ/dz) + U Ψ` in conservative form with `w = 1/m` taken at
/// midpoints: `diag_i = (w_{i−½} + w_{i+½})/h² + U(z_i)`, `off_i = −w_{i+½}/h²`.
///
/// A node where `m` vanishes is pinned (`Ψ = 0`): its row decouples and its
/// diagonal is `+∞`. A vanishing mass at a midpoint is a [`Error::Singular`].
pub fn discretize_pdem<M, U>(mass: M, potential: U, grid: Grid) -> Result<TridiagonalOperator>
where
    M: Fn(f64) -> f64,
    U: Fn(f64) -> Result<f64>,
{
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let mut weights = Vec::with_capacity(grid.n + 1);
    for j in 0..=grid.n {
        let z = grid.midpoint(j);
        let m = mass(z);
        if m < MASS_FLOOR || !m.is_finite() {
            return Err(Error::Singular { z });
        }
        weights.push(1.0 / m);
    }
    let mut values = Vec::with_capacity(grid.n);
    let mut diagonal = Vec::with_capacity(grid.n);
    for i in 1..=grid.n {
        let z = grid.node(i);
        let m = mass(z);
        if m < MASS_FLOOR {
            values.push(f64::INFINITY);
            diagonal.push(f64::INFINITY);
            continue;
        }
        let u = potential(z)?;
        if !u.is_finite() {
            return Err(Error::Domain(format!("potential is not finite at node z = {z}")));
        }
        values.push(u);
        diagonal.push((weights[i - 1] + weights[i]) * inv_h2 + u);
    }
    let offdiagonal = (1..grid.n)
        .map(|j| {
            if diagonal[j - 1].is_infinite() || diagonal[j].is_infinite() {
                0.0
            } else {
                -(weights[j] * inv_h2)
            }
        })
        .collect();
    Ok(TridiagonalOperator {
        diagonal,
        offdiagonal,
        grid: Some(grid),
        flux: Some(FluxForm::new(inv_h2, &weights, values)),
    })
}
