//! One line per acceptance criterion; exits non-zero if any fails.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use pdem::cli::{cmd_compare_paper, paper_comparison, RunConfig};
use pdem::massprofiles::{strict_constraint, MassKind, MassParameters, MassProfile};
use pdem::oracles::quadrature::QuadratureSettings;
use pdem::pct::{build_target, CorrectionCoefficient, EquationTag, Mode, TargetSystem};
use pdem::refmodels::{ReferenceKind, ReferenceModel};
use pdem::specfun::hyp2f1_terminating;
use pdem::verify::{reference_spectrum, verify, GridChoice, Tolerances, VerificationReport, VerifySettings};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn flat(mu: f64) -> TargetSystem {
    let p = MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.0)).unwrap();
    build_target(&p, &ReferenceModel::stp(mu).unwrap(), Mode::Strict).unwrap()
}

fn strict(kind: MassKind, reference: ReferenceModel) -> TargetSystem {
    let seed = match kind {
        MassKind::I => MassParameters::new(1.0, 0.0, 1.0, 1.0),
        _ => MassParameters::new(0.0, 1.0, 1.0, 0.0),
    };
    let params = strict_constraint(kind, reference.kind()).enforce(&seed);
    build_target(&MassProfile::new(kind, params).unwrap(), &reference, Mode::Strict).unwrap()
}

fn spectrum_against(report: &VerificationReport, want: &[f64], tol: f64) -> (bool, String) {
    let errs: Vec<f64> = report
        .rows
        .iter()
        .zip(want)
        .map(|(r, w)| rel(r.e_numeric, *w))
        .collect();
    let max = errs.iter().fold(0.0f64, |m, e| m.max(*e));
    let got: Vec<String> = report.rows.iter().map(|r| format!("{:.6}", r.e_numeric)).collect();
    (
        errs.len() == want.len() && max <= tol,
        format!("[{}] vs {want:?}, max rel err {max:.2e}", got.join(", ")),
    )
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cases: Vec<(&str, ReferenceModel, Vec<f64>)> = vec![
        (
            "STP mu=2",
            ReferenceModel::stp(2.0).unwrap(),
            vec![2.0, 7.0, 14.0, 23.0, 34.0],
        ),
        (
            "STP mu=1",
            ReferenceModel::stp(1.0).unwrap(),
            (1..=8).map(|k| (k * k) as f64).collect(),
        ),
        (
            "SCP mu=2",
            ReferenceModel::scp(2.0).unwrap(),
            vec![2.0, 7.0, 14.0, 23.0, 34.0],
        ),
        (
            "PTP 2,2",
            ReferenceModel::ptp(2.0, 2.0).unwrap(),
            vec![16.0, 36.0, 64.0],
        ),
    ];
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (name, model, want) in cases {
        let rows = reference_spectrum(&model, 3999, want.len()).map_err(|e| e.to_string())?;
        let err = rows
            .iter()
            .zip(&want)
            .fold(0.0f64, |m, (r, w)| m.max(rel(r.e_numeric, *w)));
        worst = worst.max(err);
        parts.push(format!("{name} {err:.1e}"));
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-6 && secs <= 10.0,
        format!("{}; max rel err {worst:.2e}, {secs:.1} s", parts.join(", ")),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let target = flat(2.0);
    let dev = (0..=1000)
        .map(|i| target.target_potential(-5.0 + 0.01 * i as f64).unwrap() + 1.0)
        .fold(0.0f64, |m, d| m.max(d.abs()));
    let settings = VerifySettings::default();
    let two = verify(&target, &settings).map_err(|e| e.to_string())?;
    let (ok2, d2) = spectrum_against(&two, &[2.0, 7.0, 14.0, 23.0], 1e-5);
    let three = verify(&flat(3.0), &settings).map_err(|e| e.to_string())?;
    let (ok3, d3) = spectrum_against(&three, &[3.0, 10.0, 19.0, 30.0], 1e-5);
    let secs = start.elapsed().as_secs_f64();
    check(
        dev <= 1e-12 && ok2 && ok3 && secs <= 30.0,
        format!("max |U + 1| {dev:.1e}; mu=2 {d2}; mu=3 {d3}; {secs:.1} s"),
    )
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, model, want) in [
        ("I+SCP", ReferenceModel::scp(2.0).unwrap(), vec![2.0, 7.0, 14.0, 23.0]),
        (
            "I+PTP",
            ReferenceModel::ptp(2.0, 2.0).unwrap(),
            vec![16.0, 36.0, 64.0, 100.0],
        ),
    ] {
        let report = verify(&strict(MassKind::I, model), &VerifySettings::default()).map_err(|e| e.to_string())?;
        let (pass, detail) = spectrum_against(&report, &want, 1e-5);
        ok &= pass;
        parts.push(format!("{name} {detail}"));
    }
    check(ok, parts.join("; "))
}

fn singular(kind: MassKind, model: ReferenceModel) -> Outcome {
    let settings = VerifySettings {
        levels: 3,
        grid: GridChoice::Fixed(7999),
        tolerances: Tolerances {
            isospectral_rel: 5e-3,
            ..Tolerances::default()
        },
        ..VerifySettings::default()
    };
    let report = verify(&strict(kind, model), &settings).map_err(|e| e.to_string())?;
    let (ok, detail) = spectrum_against(&report, &[2.0, 7.0, 14.0], 5e-3);
    let conv = &report.convergence;
    let n_max = conv.grids.iter().map(|g| g.n).max().unwrap_or(0);
    check(
        ok && conv.monotone && n_max <= 16001,
        format!("{detail}, grids up to N = {n_max}, monotone {}", conv.monotone),
    )
}

fn criterion_4_kind_ii() -> Outcome {
    singular(MassKind::II, ReferenceModel::scp(2.0).unwrap())
}

fn criterion_4_kind_iii() -> Outcome {
    singular(MassKind::III, ReferenceModel::stp(2.0).unwrap())
}

fn criterion_5() -> Outcome {
    let t = flat(2.0).with_correction(CorrectionCoefficient::Eighth);
    let report = verify(&t, &VerifySettings::default()).map_err(|e| e.to_string())?;
    let max = report.max_rel_err();
    check(
        max > 1e-3 && !report.passed,
        format!("1/(8m) gives max rel err {max:.2e}"),
    )
}

fn criterion_6() -> Outcome {
    let report = verify(&flat(2.0), &VerifySettings::default()).map_err(|e| e.to_string())?;
    let residual = report.residual_norms.iter().fold(0.0f64, |m, r| m.max(*r));
    let nodes: Vec<usize> = report
        .node_counts
        .iter()
        .map(|c| c.numeric.max(c.transported).max(c.reference))
        .collect();
    let nodes_ok = report
        .node_counts
        .iter()
        .all(|c| c.reference == c.k && c.transported == c.k && c.numeric == c.k);
    let norm_gap = report
        .norms
        .iter()
        .fold(0.0f64, |m, n| m.max((n.z_integral - n.y_integral).abs()));
    check(
        residual <= 1e-4 && report.gram_defect <= 1e-6 && nodes_ok && norm_gap <= 1e-8,
        format!(
            "residual {residual:.1e}, gram defect {:.1e}, nodes {nodes:?}, norm gap {norm_gap:.1e}",
            report.gram_defect
        ),
    )
}

fn d1(f: impl Fn(f64) -> f64, z: f64) -> f64 {
    let h = 1e-5 * (1.0 + z.abs());
    (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h)
}

fn criterion_7() -> Outcome {
    let quad = QuadratureSettings::default().with_tolerance(1e-13);
    let cases = [
        (MassKind::I, MassParameters::new(1.3, -0.7, 0.9, 1.1), -8.0, 8.0, 0.0),
        (MassKind::II, MassParameters::new(2.0, 1.5, -0.8, 0.0), 0.05, 6.0, 1.0),
        (MassKind::III, MassParameters::new(1.7, 0.9, 1.2, 0.0), -4.0, 4.0, 0.0),
    ];
    let (mut map_err, mut d_err) = (0.0f64, 0.0f64);
    for (kind, params, lo, hi, base) in cases {
        let p = MassProfile::new(kind, params).map_err(|e| e.to_string())?;
        let f0 = p.map_forward(base).unwrap();
        for i in 0..50 {
            let z = lo + (hi - lo) * (i as f64 + 0.37) / 50.0;
            let closed = p.map_forward(z).unwrap() - f0;
            let numeric = p.map_forward_quadrature(base, z, &quad).map_err(|e| e.to_string())?;
            map_err = map_err.max((closed - numeric).abs());
        }
        for i in 0..100 {
            let z = lo + (hi - lo) * (i as f64 + 0.37) / 100.0;
            let (m, dm, d2m) = p.mass_derivatives(z).unwrap();
            let scale = 1e-9 * (m.abs() + dm.abs() + d2m.abs());
            let fd1 = d1(|t| p.mass_value(t).unwrap(), z);
            let fd2 = d1(|t| p.mass_d1(t).unwrap(), z);
            d_err = d_err.max((fd1 - dm).abs() / (dm.abs() + scale));
            d_err = d_err.max((fd2 - d2m).abs() / (d2m.abs() + scale));
        }
    }
    check(
        map_err <= 1e-10 && d_err <= 1e-6,
        format!("kinds I, II, III: map vs quadrature {map_err:.1e}, derivatives vs differences {d_err:.1e}"),
    )
}

fn hyp2f1_rational(n: usize, b: f64, c: f64, x: f64) -> BigRational {
    let exact = |v: f64| BigRational::from_float(v).unwrap();
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

fn criterion_8() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = (0usize..=10, 0.0f64..30.0, 0.5f64..30.0, 0.0f64..=1.0);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let (n, b, c, x) = strategy.new_tree(&mut runner).unwrap().current();
        let v = hyp2f1_terminating(n, b, c, x).map_err(|e| e.to_string())?;
        let exact = hyp2f1_rational(n, b, c, x);
        let diff = (&exact - BigRational::from_float(v).unwrap()).abs();
        let err = if exact.is_zero() { diff } else { diff / exact.abs() };
        worst = worst.max(err.to_f64().unwrap());
    }
    let printed = hyp2f1_terminating(2, 4.0, 3.5, 1.0).map_err(|e| e.to_string())?;
    let gap = (printed + 1.0 / 63.0).abs();
    check(
        worst <= 1e-13 && gap <= 1e-14,
        format!("500 cases max rel err {worst:.1e}; (2, 4, 3.5, 1) = {printed:.17} (gap {gap:.1e})"),
    )
}

fn config_for(tag: EquationTag) -> RunConfig {
    let kind = tag.mass_kind();
    let reference = match tag.reference_kind() {
        ReferenceKind::Stp => "reference.kind = STP\nreference.mu = 2",
        ReferenceKind::Scp => "reference.kind = SCP\nreference.mu = 2",
        ReferenceKind::Ptp => "reference.kind = PTP\nreference.chi = 2\nreference.lambda = 2",
    };
    let seed = match kind {
        MassKind::I => MassParameters::new(1.0, 0.0, 1.0, 1.0),
        _ => MassParameters::new(0.0, 1.0, 1.0, 0.0),
    };
    let p = strict_constraint(kind, tag.reference_kind()).enforce(&seed);
    let delta = if kind == MassKind::I {
        format!("mass.delta = {}\n", p.delta)
    } else {
        String::new()
    };
    format!(
        "mass.kind = {kind}\nmass.alpha = {}\nmass.beta = {}\nmass.gamma = {}\n{delta}{reference}\nsample.points = 101\n",
        p.alpha, p.beta, p.gamma
    )
    .parse()
    .unwrap()
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for tag in EquationTag::ALL {
        let out = cmd_compare_paper(&config_for(tag), tag).map_err(|e| format!("{tag}: {e}"))?;
        if out.exit_code != 0 || !out.body.starts_with("z,engine,paper,deviation\n") {
            return Err(format!("{tag}: exit {}", out.exit_code));
        }
        parts.push(tag.to_string());
    }
    let report = paper_comparison(&config_for(EquationTag::Eq14), EquationTag::Eq14).map_err(|e| e.to_string())?;
    let c = report.coefficients.ok_or("Eq14 has no coefficients")?;
    let (alpha, beta, gamma, delta) = (1.0f64, 0.0f64, 1.0f64, 1.0f64);
    let kappa = 4.0 * delta * delta / (4.0 * alpha * gamma - beta * beta);
    let ok = c.kappa == Some(kappa) && c.u_bar_0 == Some(kappa * c.u0) && c.u_bar_0 == Some(2.0);
    check(
        ok,
        format!(
            "reports for {}; Eq14 kappa {:?}, U0 {}, kappa U0 {:?}",
            parts.join(" "),
            c.kappa,
            c.u0,
            c.u_bar_0
        ),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4 (kind II)", criterion_4_kind_ii),
        ("4 (kind III)", criterion_4_kind_iii),
        ("5", criterion_5),
        ("6", criterion_6),
        ("7", criterion_7),
        ("8", criterion_8),
        ("9", criterion_9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {name}: PASS - {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL - {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
