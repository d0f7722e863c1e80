use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use pdem::specfun::{hyp2f1_terminating, pochhammer, PolyEvalSettings};
use proptest::prelude::*;

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite")
}

/// `Σ (−n)_k (b)_k / ((c)_k k!) x^k` in exact rational arithmetic.
fn hyp2f1_rational(n: usize, b: f64, c: f64, x: f64) -> BigRational {
    let (b, c, x) = (exact(b), exact(c), exact(x));
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for k in 0..n {
        let kk = BigRational::from_integer(BigInt::from(k));
        let minus_n = BigRational::from_integer(BigInt::from(k as i64 - n as i64));
        term = term * minus_n * (&b + &kk) / ((&c + &kk) * (&kk + BigRational::one())) * &x;
        sum += &term;
    }
    sum
}

fn rel_err(approx: f64, exact: &BigRational) -> f64 {
    let diff = (exact - self::exact(approx)).abs();
    if exact.is_zero() {
        diff.to_f64().unwrap()
    } else {
        (diff / exact.abs()).to_f64().unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn matches_rational_brute_force(n in 0usize..=10, b in 0.0f64..30.0, c in 0.5f64..30.0, x in 0.0f64..=1.0) {
        let v = hyp2f1_terminating(n, b, c, x).unwrap();
        let e = rel_err(v, &hyp2f1_rational(n, b, c, x));
        prop_assert!(e <= 1e-13, "n={n} b={b} c={c} x={x}: {v} rel err {e:e}");
    }

    #[test]
    fn matches_rational_up_to_max_degree(n in 0usize..=30, b in 0.0f64..=70.0, c in 0.5f64..40.0, x in 0.0f64..=1.0) {
        let v = hyp2f1_terminating(n, b, c, x).unwrap();
        let e = rel_err(v, &hyp2f1_rational(n, b, c, x));
        prop_assert!(e <= 1e-13, "n={n} b={b} c={c} x={x}: {v} rel err {e:e}");
    }

    #[test]
    fn is_one_at_zero(n in 0usize..=30, b in -20.0f64..70.0, c in 0.5f64..40.0) {
        prop_assert_eq!(hyp2f1_terminating(n, b, c, 0.0).unwrap(), 1.0);
    }

    #[test]
    // products stay below 2^53, so both sides are exact
    fn pochhammer_splits(a in -12i32..12, half in any::<bool>(), j in 0usize..=4, k in 0usize..=4) {
        let a = a as f64 + if half { 0.5 } else { 0.0 };
        prop_assert_eq!(pochhammer(a, j + k), pochhammer(a, j) * pochhammer(a + j as f64, k));
    }
}

#[test]
fn printed_case_is_minus_one_over_63() {
    let v = hyp2f1_terminating(2, 4.0, 3.5, 1.0).unwrap();
    assert!((v + 1.0 / 63.0).abs() <= 1e-14);
}

#[test]
fn degree_above_the_limit_is_rejected() {
    let s = PolyEvalSettings::default();
    assert!(s.hyp2f1_terminating(s.max_degree + 1, 1.0, 1.0, 0.5).is_err());
}
