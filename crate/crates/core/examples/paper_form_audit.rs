//! Engine-built potentials against the nine published closed forms, each on
//! a strict configuration of the matching mass kind and reference.

use pdem::massprofiles::{strict_constraint, MassKind, MassParameters, MassProfile};
use pdem::pct::{build_target, compare_paper_form, EquationTag, Mode};
use pdem::refmodels::{ReferenceKind, ReferenceModel};

pub fn run_example() -> pdem::Result<()> {
    let symmetric: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
    let positive: Vec<f64> = (1..41).map(|i| 0.05 * i as f64).collect();
    for tag in EquationTag::ALL {
        let reference = match tag.reference_kind() {
            ReferenceKind::Stp => ReferenceModel::stp(2.0)?,
            ReferenceKind::Scp => ReferenceModel::scp(2.0)?,
            ReferenceKind::Ptp => ReferenceModel::ptp(2.0, 2.0)?,
        };
        let constraint = strict_constraint(tag.mass_kind(), reference.kind());
        let (params, grid) = match tag.mass_kind() {
            MassKind::I => (constraint.enforce(&MassParameters::new(1.0, 0.0, 1.0, 1.0)), &symmetric),
            MassKind::II => (constraint.enforce(&MassParameters::new(0.0, 1.0, 1.0, 0.0)), &positive),
            MassKind::III => (constraint.enforce(&MassParameters::new(0.0, 1.0, 1.0, 0.0)), &symmetric),
        };
        let target = build_target(&MassProfile::new(tag.mass_kind(), params)?, &reference, Mode::Strict)?;
        let report = compare_paper_form(&target, tag, grid)?;
        println!(
            "{tag} (kind {}, {}): max |dev| {:>12.4e}, mean {:>12.4e}, {} points, {} skipped",
            tag.mass_kind(),
            tag.reference_kind(),
            report.max_abs_deviation,
            report.mean_abs_deviation,
            report.evaluated,
            report.skipped
        );
        if tag == EquationTag::Eq14 {
            let c = report.coefficients.expect("set by compare_paper_form");
            println!("  kappa = {:?}, U0 = {}, kappa U0 = {:?}", c.kappa, c.u0, c.u_bar_0);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pdem::Result<()> {
    run_example()
}
