use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    AdaptiveSimpson,
    GaussLegendreComposite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    /// Absolute tolerance on the integral.
    pub tolerance: f64,
    pub max_refinements: usize,
    pub rule: QuadratureRule,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_refinements: 40,
            rule: QuadratureRule::AdaptiveSimpson,
        }
    }
}

impl QuadratureSettings {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_rule(mut self, rule: QuadratureRule) -> Self {
        self.rule = rule;
        self
    }
}

/// Minimum bisection depth before the Simpson error estimate is trusted.
const MIN_SIMPSON_DEPTH: usize = 4;

/// Integrates `f` over a finite interval.
///
/// `f` is evaluated at the endpoints, so integrands with removable endpoint
/// behaviour must return finite values there.
pub fn integrate<F>(f: F, interval: Interval, settings: &QuadratureSettings) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !interval.is_finite() {
        return Err(Error::Domain(format!(
            "quadrature needs a finite interval, got {interval}"
        )));
    }
    if settings.tolerance < 1e-14 || !(settings.tolerance.is_finite()) {
        return Err(Error::Domain(format!(
            "quadrature tolerance {} below 1e-14",
            settings.tolerance
        )));
    }
    if interval.lo == interval.hi {
        return Ok(0.0);
    }
    if interval.lo > interval.hi {
        let swapped = Interval::new(interval.hi, interval.lo);
        return integrate(f, swapped, settings).map(|v| -v);
    }
    match settings.rule {
        QuadratureRule::AdaptiveSimpson => simpson(&f, interval, settings),
        QuadratureRule::GaussLegendreComposite => gauss_legendre(&f, interval, settings),
    }
}

/// Sums [`integrate`] over consecutive panels `[b_i, b_{i+1}]`, splitting the
/// tolerance evenly.
pub fn integrate_panels<F>(f: F, breakpoints: &[f64], settings: &QuadratureSettings) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if breakpoints.len() < 2 {
        return Ok(0.0);
    }
    let panels = (breakpoints.len() - 1) as f64;
    let per_panel = settings.with_tolerance((settings.tolerance / panels).max(1e-14));
    breakpoints
        .windows(2)
        .map(|w| integrate(&f, Interval::new(w[0], w[1]), &per_panel))
        .sum()
}

fn simpson<F: Fn(f64) -> f64>(f: &F, iv: Interval, s: &QuadratureSettings) -> Result<f64> {
    let (a, b) = (iv.lo, iv.hi);
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut ctx = SimpsonCtx {
        f,
        max_depth: s.max_refinements,
        failed: false,
    };
    let value = ctx.recurse(a, b, fa, fm, fb, whole, s.tolerance, 0);
    if ctx.failed || !value.is_finite() {
        return Err(Error::Quadrature {
            tolerance: s.tolerance,
            max_refinements: s.max_refinements,
            lo: a,
            hi: b,
        });
    }
    Ok(value)
}

struct SimpsonCtx<'a, F> {
    f: &'a F,
    max_depth: usize,
    failed: bool,
}

impl<F: Fn(f64) -> f64> SimpsonCtx<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn recurse(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        // Below this the estimate is dominated by rounding, not truncation.
        let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
        if depth >= MIN_SIMPSON_DEPTH && (delta.abs() <= 15.0 * tol || delta.abs() <= floor) {
            return left + right + delta / 15.0;
        }
        if depth >= self.max_depth || m <= a || m >= b {
            self.failed = true;
            return left + right;
        }
        self.recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
            + self.recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
    }
}

const GL_ORDER: usize = 10;

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on `P_n`.
fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, iv: Interval, s: &QuadratureSettings) -> Result<f64> {
    let (nodes, weights) = gauss_legendre_rule(GL_ORDER);
    let composite = |panels: usize| -> f64 {
        let h = iv.length() / panels as f64;
        (0..panels)
            .map(|p| {
                let a = iv.lo + p as f64 * h;
                let mid = a + 0.5 * h;
                nodes
                    .iter()
                    .zip(&weights)
                    .map(|(x, w)| w * f(mid + 0.5 * h * x))
                    .sum::<f64>()
                    * 0.5
                    * h
            })
            .sum()
    };
    let mut panels = 1usize;
    let mut previous = composite(panels);
    for _ in 0..s.max_refinements.min(24) {
        panels *= 2;
        let current = composite(panels);
        if (current - previous).abs() <= s.tolerance && current.is_finite() {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::Quadrature {
        tolerance: s.tolerance,
        max_refinements: s.max_refinements,
        lo: iv.lo,
        hi: iv.hi,
    })
}
