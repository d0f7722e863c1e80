//! Builds the constant-potential instance (`m = (1+z²)⁻²`, squared-tangent
//! reference with `μ = 2`) and confirms numerically that its spectrum is
//! `{2, 7, 14, 23}`.

use pdem::massprofiles::{MassKind, MassParameters, MassProfile};
use pdem::pct::{build_target, Mode};
use pdem::refmodels::ReferenceModel;
use pdem::verify::{verify, VerifySettings};

pub fn run_example() -> pdem::Result<()> {
    let profile = MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.0))?;
    let target = build_target(&profile, &ReferenceModel::stp(2.0)?, Mode::Strict)?;
    let report = verify(&target, &VerifySettings::default())?;

    println!("  k    analytic        numeric          rel err");
    for row in &report.rows {
        println!(
            "{:>3} {:>10.4} {:>16.10} {:>12.3e}",
            row.k, row.e_analytic, row.e_numeric, row.rel_err
        );
    }
    let c = &report.convergence;
    println!("oracle interval {}, finest grid N = {}", c.interval, c.n_used);
    if let Some(g) = &c.guard {
        println!("eps_map/10 shift {:.2e} on N = {}", g.max_rel_shift, g.n);
    }
    println!("verification {}", if report.passed { "passed" } else { "failed" });
    Ok(())
}

#[allow(dead_code)]
fn main() -> pdem::Result<()> {
    run_example()
}
