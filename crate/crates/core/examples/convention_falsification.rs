//! Same flat instance with the mass correction prefactor halved. The
//! oracle spectrum moves far outside tolerance.

use pdem::massprofiles::{MassKind, MassParameters, MassProfile};
use pdem::pct::{build_target, CorrectionCoefficient, Mode};
use pdem::refmodels::ReferenceModel;
use pdem::verify::{verify, GridChoice, VerifySettings};

pub fn run_example() -> pdem::Result<()> {
    let profile = MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.0))?;
    let target = build_target(&profile, &ReferenceModel::stp(2.0)?, Mode::Strict)?;
    let settings = VerifySettings {
        grid: GridChoice::Fixed(20_001),
        eps_map: 1e-2,
        truncation_guard: false,
        ..VerifySettings::default()
    };
    for c in [CorrectionCoefficient::Quarter, CorrectionCoefficient::Eighth] {
        let t = target.with_correction(c);
        let report = verify(&t, &settings)?;
        let energies: Vec<String> = report.rows.iter().map(|r| format!("{:.5}", r.e_numeric)).collect();
        println!(
            "{c:?} ({}/m): U(0) = {:+.4}, spectrum [{}], max rel err {:.2e}",
            c.value(),
            t.target_potential(0.0)?,
            energies.join(", "),
            report.max_rel_err()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pdem::Result<()> {
    run_example()
}
