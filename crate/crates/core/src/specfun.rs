//! Pochhammer symbols and terminating Gauss hypergeometric polynomials.
//!
//! `₂F₁(−n, b; c; x)` is a degree-`n` polynomial. Its terms alternate in sign
//! and can exceed the final value by many orders of magnitude, so the default
//! evaluation carries every term and the running sum as an unevaluated pair of
//! doubles (error-free transformations), and falls back to exact rational
//! summation when a running error bound says the pair is not enough. The
//! plain mode keeps a single `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Rising factorial `a (a+1) … (a+k−1)`; `1` for `k = 0`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    if a <= 0.0 && a.fract() == 0.0 && (-a) < k as f64 {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summation {
    Plain,
    /// Double-double, exact when cancellation defeats it.
    Compensated,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyEvalSettings {
    pub max_degree: usize,
    pub summation: Summation,
}

impl Default for PolyEvalSettings {
    fn default() -> Self {
        Self {
            max_degree: 30,
            summation: Summation::Compensated,
        }
    }
}

impl PolyEvalSettings {
    /// `₂F₁(−n, b; c; x) = Σ_{k=0}^{n} (−n)_k (b)_k / ((c)_k k!) xᵏ`.
    pub fn hyp2f1_terminating(&self, n: usize, b: f64, c: f64, x: f64) -> Result<f64> {
        if n > self.max_degree {
            return Err(Error::Degree {
                degree: n,
                max_degree: self.max_degree,
            });
        }
        if !(b.is_finite() && c.is_finite() && x.is_finite()) {
            return Err(Error::Domain(format!("non-finite argument: b = {b}, c = {c}, x = {x}")));
        }
        for k in 0..n {
            if c + k as f64 == 0.0 {
                return Err(Error::Domain(format!("(c)_k vanishes: c = {c}, term {}", k + 1)));
            }
        }
        Ok(match self.summation {
            Summation::Plain => hyp2f1_plain(n, b, c, x),
            Summation::Compensated => hyp2f1_dd(n, b, c, x).unwrap_or_else(|| hyp2f1_exact(n, b, c, x)),
            Summation::Exact => hyp2f1_exact(n, b, c, x),
        })
    }
}

/// Terminating `₂F₁(−n, b; c; x)` with the default settings.
pub fn hyp2f1_terminating(n: usize, b: f64, c: f64, x: f64) -> Result<f64> {
    PolyEvalSettings::default().hyp2f1_terminating(n, b, c, x)
}

fn hyp2f1_plain(n: usize, b: f64, c: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - n as f64) * (b + kf) * x / ((c + kf) * (kf + 1.0));
        sum += term;
    }
    sum
}

/// `None` when the bound on the accumulated error exceeds `10⁻¹⁵ |sum|`.
fn hyp2f1_dd(n: usize, b: f64, c: f64, x: f64) -> Option<f64> {
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    let mut magnitude = 1.0;
    let xd = DoubleDouble::from(x);
    for k in 0..n {
        let kf = k as f64;
        let num = DoubleDouble::from(kf - n as f64) * DoubleDouble::sum(b, kf) * xd;
        let den = DoubleDouble::sum(c, kf) * DoubleDouble::from(kf + 1.0);
        term = term * num / den;
        sum = sum + term;
        magnitude += term.hi.abs();
    }
    // each term carries about 8(k+1) relative roundings of size 2^-104
    let bound = 8.0 * (n as f64 + 2.0).powi(2) * 2f64.powi(-104) * magnitude;
    let value = sum.to_f64();
    (bound <= 1e-15 * value.abs()).then_some(value)
}

fn hyp2f1_exact(n: usize, b: f64, c: f64, x: f64) -> f64 {
    let exact = |v: f64| BigRational::from_float(v).expect("finite input");
    let (b, c, x) = (exact(b), exact(c), exact(x));
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for k in 0..n {
        let kk = BigRational::from_integer(BigInt::from(k));
        let minus_n = BigRational::from_integer(BigInt::from(k as i64 - n as i64));
        term = term * minus_n * (&b + &kk) / ((&c + &kk) * (&kk + BigRational::one())) * &x;
        sum += &term;
    }
    sum.to_f64().unwrap_or(f64::NAN)
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Self { hi: s, lo: b - (s - a) }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        Self {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    /// Exact `a + b` as a pair.
    fn sum(a: f64, b: f64) -> Self {
        Self::two_sum(a, b)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for DoubleDouble {
    fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = Self::two_sum(self.hi, rhs.hi);
        let t = Self::two_sum(self.lo, rhs.lo);
        let s = Self::quick_two_sum(s.hi, s.lo + t.hi);
        Self::quick_two_sum(s.hi, s.lo + t.lo)
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let p = Self::two_prod(self.hi, rhs.hi);
        let lo = p.lo + (self.hi * rhs.lo + self.lo * rhs.hi);
        Self::quick_two_sum(p.hi, lo)
    }
}

impl std::ops::Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self + Self::from(-1.0) * (rhs * Self::from(q1));
        let q2 = r.hi / rhs.hi;
        let r = r + Self::from(-1.0) * (rhs * Self::from(q2));
        let q3 = r.hi / rhs.hi;
        let q = Self::quick_two_sum(q1, q2);
        q + Self::from(q3)
    }
}
