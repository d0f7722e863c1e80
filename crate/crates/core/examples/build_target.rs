//! Composes target potentials: the flat instance, the harmonic-like `μ = 3`
//! variant, a singular-mass target and a scaled-mode target.

use pdem::massprofiles::{MassKind, MassParameters, MassProfile};
use pdem::pct::{build_target, mass_correction, Mode};
use pdem::refmodels::ReferenceModel;

pub fn run_example() -> pdem::Result<()> {
    let flat = MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.0))?;
    let c2 = build_target(&flat, &ReferenceModel::stp(2.0)?, Mode::Strict)?;
    let c3 = build_target(&flat, &ReferenceModel::stp(3.0)?, Mode::Strict)?;
    println!("     z   U (mu = 2)   U (mu = 3)   4z^2 - 1");
    for z in [-5.0, -1.0, 0.0, 0.5, 2.0, 5.0] {
        println!(
            "{z:>6} {:>12.9} {:>12.9} {:>10.4}",
            c2.target_potential(z)?,
            c3.target_potential(z)?,
            4.0 * z * z - 1.0
        );
    }

    let cubic = MassProfile::new(MassKind::III, MassParameters::new(3.0, 1.0, 1.0, 0.0))?;
    let t = build_target(&cubic, &ReferenceModel::stp(2.0)?, Mode::Strict)?;
    println!("kind III: U = 2z^6 + V_m");
    for z in [0.25, 0.5, 1.0, 1.5] {
        let v = mass_correction(t.profile(), z)?;
        println!(
            "  z = {z}: U = {:.9}, 2z^6 + V_m = {:.9}",
            t.target_potential(z)?,
            2.0 * z.powi(6) + v
        );
    }

    let wide = MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.7))?;
    match build_target(&wide, &ReferenceModel::stp(2.0)?, Mode::Strict) {
        Err(e) => println!("strict mode with delta = 1.7: {e}"),
        Ok(_) => unreachable!("delta = 1.7 breaks the strict relation"),
    }
    let scaled = build_target(&wide, &ReferenceModel::stp(2.0)?, Mode::Scaled)?;
    println!(
        "scaled mode: reference scale {:.6}, energies {:?}",
        scaled.reference().scale(),
        (0..4).map(|k| scaled.target_energy(k)).collect::<Vec<_>>()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> pdem::Result<()> {
    run_example()
}
