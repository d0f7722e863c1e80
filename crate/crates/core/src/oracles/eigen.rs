//! Sturm-sequence bisection for the lowest eigenvalues and shifted inverse
//! iteration for eigenvectors of a [`TridiagonalOperator`].

use crate::error::{Error, Result};
use crate::oracles::operator::{FluxForm, TridiagonalOperator};

/// Relative bisection width at which an eigenvalue is accepted.
pub const EIGENVALUE_REL_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 400;

/// Number of eigenvalues strictly below `lambda`.
pub fn sturm_count(op: &TridiagonalOperator, lambda: f64) -> usize {
    match &op.flux {
        Some(flux) => flux_count(flux, lambda),
        None => plain_count(&op.diagonal, &op.offdiagonal, lambda),
    }
}

fn plain_count(diagonal: &[f64], off: &[f64], lambda: f64) -> usize {
    let guard = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = diagonal[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diagonal.len() {
        let q_safe = if q.abs() < guard { guard.copysign(q) } else { q };
        q = (diagonal[i] - lambda) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// LDLᵀ pivots of `T − λ` written as `q_i = c_{i+½} + r_i` with
/// `c = w/h²` and `r_i = U_i − λ + r_{i−1} / (1 + r_{i−1}/c_{i−½})`, which
/// never forms the large diagonal explicitly.
fn flux_count(flux: &FluxForm, lambda: f64) -> usize {
    let c = &flux.coupling;
    let ic = &flux.inv_coupling;
    let u = &flux.potential;
    let mut count = 0;
    let mut r = c[0] + u[0] - lambda;
    if c[1] + r < 0.0 {
        count += 1;
    }
    for i in 1..u.len() {
        let carried = if r.is_infinite() {
            c[i]
        } else {
            let den = 1.0 + r * ic[i];
            let den = if den == 0.0 { f64::MIN_POSITIVE } else { den };
            r / den
        };
        r = u[i] - lambda + carried;
        if c[i + 1] + r < 0.0 {
            count += 1;
        }
    }
    count
}

/// [`sturm_count`] at several shifts. Four shifts share each pass, which
/// hides the latency of the serial recurrence.
pub fn sturm_counts(op: &TridiagonalOperator, lambdas: &[f64]) -> Vec<usize> {
    match &op.flux {
        Some(flux) => lambdas
            .chunks(LANES)
            .flat_map(|chunk| {
                let mut lanes = [chunk[0]; LANES];
                lanes[..chunk.len()].copy_from_slice(chunk);
                flux_count_lanes(flux, lanes)[..chunk.len()].to_vec()
            })
            .collect(),
        None => lambdas
            .iter()
            .map(|l| plain_count(&op.diagonal, &op.offdiagonal, *l))
            .collect(),
    }
}

const LANES: usize = 4;

fn flux_count_lanes(flux: &FluxForm, lambda: [f64; LANES]) -> [usize; LANES] {
    let c = &flux.coupling;
    let ic = &flux.inv_coupling;
    let u = &flux.potential;
    let mut count = [0; LANES];
    let mut r = [0.0; LANES];
    for l in 0..LANES {
        r[l] = c[0] + u[0] - lambda[l];
        count[l] += usize::from(c[1] + r[l] < 0.0);
    }
    for i in 1..u.len() {
        for l in 0..LANES {
            let carried = if r[l].is_infinite() {
                c[i]
            } else {
                let den = 1.0 + r[l] * ic[i];
                let den = if den == 0.0 { f64::MIN_POSITIVE } else { den };
                r[l] / den
            };
            r[l] = u[i] - lambda[l] + carried;
            count[l] += usize::from(c[i + 1] + r[l] < 0.0);
        }
    }
    count
}

/// Lower Gershgorin bound over the finite rows.
fn lower_bound(op: &TridiagonalOperator) -> f64 {
    let n = op.len();
    let mut lo = f64::INFINITY;
    for i in 0..n {
        if op.diagonal[i].is_infinite() {
            continue;
        }
        let left = if i > 0 { op.offdiagonal[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { op.offdiagonal[i].abs() } else { 0.0 };
        lo = lo.min(op.diagonal[i] - left - right);
    }
    if lo.is_finite() {
        lo - 1.0
    } else {
        -1.0
    }
}

/// The `k` smallest eigenvalues in ascending order.
pub fn lowest_eigenvalues(op: &TridiagonalOperator, k: usize) -> Result<Vec<f64>> {
    check_levels(op, k)?;
    let mut out = Vec::with_capacity(k);
    let mut lo = lower_bound(op);
    for index in 0..k {
        // grow an upper bracket holding more than `index` eigenvalues
        let mut step = lo.abs().max(1.0);
        let mut hi = lo + step;
        let mut grow = 0;
        while sturm_count(op, hi) <= index {
            step *= 2.0;
            hi = lo + step;
            grow += 1;
            if grow > 2000 || !hi.is_finite() {
                return Err(Error::Convergence(format!("no upper bracket for eigenvalue {index}")));
            }
        }
        let (value, a) = bisect(op, index, lo, hi)?;
        out.push(value);
        lo = a;
    }
    Ok(out)
}

/// Same as [`lowest_eigenvalues`] for `hints.len()` levels, starting from
/// `(centre, half_width)` brackets that are widened until they are valid.
/// All levels are bisected together.
pub fn lowest_eigenvalues_near(op: &TridiagonalOperator, hints: &[(f64, f64)]) -> Result<Vec<f64>> {
    check_levels(op, hints.len())?;
    let mut brackets = Vec::with_capacity(hints.len());
    for (index, &(centre, half_width)) in hints.iter().enumerate() {
        let w0 = half_width.abs().max(EIGENVALUE_REL_TOL * (1.0 + centre.abs()));
        let mut w = w0;
        let mut grow = 0;
        loop {
            let counts = sturm_counts(op, &[centre - w, centre + w]);
            if counts[0] <= index && counts[1] > index {
                break;
            }
            w *= 4.0;
            grow += 1;
            if grow > 1000 || !w.is_finite() {
                return Err(Error::Convergence(format!(
                    "no bracket for eigenvalue {index} near {centre}"
                )));
            }
        }
        brackets.push((centre - w, centre + w));
    }
    let open = |(a, b): (f64, f64)| {
        b - a > EIGENVALUE_REL_TOL * (1.0 + 0.5 * (a + b).abs()) && {
            let mid = 0.5 * (a + b);
            mid > a && mid < b
        }
    };
    let mut iterations = 0;
    loop {
        let active: Vec<usize> = (0..brackets.len()).filter(|i| open(brackets[*i])).collect();
        if active.is_empty() {
            break;
        }
        let mids: Vec<f64> = active.iter().map(|i| 0.5 * (brackets[*i].0 + brackets[*i].1)).collect();
        for ((&i, mid), count) in active.iter().zip(&mids).zip(sturm_counts(op, &mids)) {
            if count > i {
                brackets[i].1 = *mid;
            } else {
                brackets[i].0 = *mid;
            }
        }
        iterations += 1;
        if iterations > MAX_BISECTIONS {
            return Err(Error::Convergence(format!(
                "simultaneous bisection exceeded {MAX_BISECTIONS} steps"
            )));
        }
    }
    Ok(brackets.iter().map(|(a, b)| 0.5 * (a + b)).collect())
}

fn check_levels(op: &TridiagonalOperator, k: usize) -> Result<()> {
    let n = op.len() - op.pinned_nodes().len();
    if k > n {
        return Err(Error::Domain(format!(
            "requested {k} eigenvalues from an operator with {n} free rows"
        )));
    }
    Ok(())
}

/// Eigenvalue `index` inside `[a, b)`; returns it with the final lower end.
fn bisect(op: &TridiagonalOperator, index: usize, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let mut iterations = 0;
    while b - a > EIGENVALUE_REL_TOL * (1.0 + 0.5 * (a + b).abs()) {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if sturm_count(op, mid) > index {
            b = mid;
        } else {
            a = mid;
        }
        iterations += 1;
        if iterations > MAX_BISECTIONS {
            return Err(Error::Convergence(format!(
                "bisection for eigenvalue {index} exceeded {MAX_BISECTIONS} steps"
            )));
        }
    }
    Ok((0.5 * (a + b), a))
}

/// Second-order Richardson extrapolation from `N` and `2N + 1` interior
/// nodes (spacing halves exactly).
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

const MAX_INVERSE_ITERATIONS: usize = 50;

/// Unit eigenvector (`Σ x_i² h = 1`) for the eigenvalue nearest `estimate`,
/// signed so that the first component above `10⁻³ max|x|` is positive.
pub fn eigenvector(op: &TridiagonalOperator, estimate: f64) -> Result<Vec<f64>> {
    let n = op.len();
    let h = op.spacing();
    let pinned: Vec<bool> = op.diagonal.iter().map(|d| d.is_infinite()).collect();
    let shift = estimate + 1e-10 * (1.0 + estimate.abs());
    let lu = TridiagonalLu::factor(op, shift, &pinned);

    let mut x: Vec<f64> = (0..n)
        .map(|i| if pinned[i] { 0.0 } else { 1.0 + 0.01 * (i % 7) as f64 })
        .collect();
    normalize(&mut x, h);
    // ‖(T − σ)y‖ / ‖y‖ = ‖x‖ / ‖y‖ for y = (T − σ)⁻¹ x; within a (near)
    // degenerate cluster any converged vector is acceptable.
    let accept = 1e-8 * (1.0 + estimate.abs());
    for iteration in 0..MAX_INVERSE_ITERATIONS {
        let mut y = x.clone();
        lu.solve(&mut y);
        for (yi, p) in y.iter_mut().zip(&pinned) {
            if *p {
                *yi = 0.0;
            }
        }
        let growth = (y.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        if !growth.is_finite() || growth == 0.0 {
            break;
        }
        normalize(&mut y, h);
        fix_sign(&mut y);
        x = y;
        if iteration >= 1 && 1.0 / growth <= accept {
            return Ok(x);
        }
    }
    Err(Error::Convergence(format!(
        "inverse iteration near {estimate} did not settle in {MAX_INVERSE_ITERATIONS} steps"
    )))
}

fn normalize(x: &mut [f64], h: f64) {
    let norm = (x.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
    if norm > 0.0 && norm.is_finite() {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

fn fix_sign(x: &mut [f64]) {
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-3 * max) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// LU with partial pivoting of `T − σI` (tridiagonal, two super-diagonals
/// after pivoting).
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(op: &TridiagonalOperator, shift: f64, pinned: &[bool]) -> Self {
        let n = op.len();
        let mut d: Vec<f64> = op
            .diagonal
            .iter()
            .zip(pinned)
            .map(|(v, p)| if *p { 1.0 } else { v - shift })
            .collect();
        let mut dl = op.offdiagonal.clone();
        let mut du = op.offdiagonal.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let scale = op
            .diagonal
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1.0);
        let tiny = f64::EPSILON * scale;
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if let Some(last) = d.last_mut() {
            if *last == 0.0 {
                *last = tiny;
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
