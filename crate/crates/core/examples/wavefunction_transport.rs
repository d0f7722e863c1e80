//! Transported eigenfunctions of the flat instance: norms in both variables
//! and node counts.

use std::f64::consts::FRAC_PI_2;

use pdem::massprofiles::{MassKind, MassParameters, MassProfile};
use pdem::oracles::diagnostics::count_nodes;
use pdem::oracles::quadrature::{integrate_panels, QuadratureSettings};
use pdem::pct::{build_target, Mode};
use pdem::refmodels::ReferenceModel;

pub fn run_example() -> pdem::Result<()> {
    let quad = QuadratureSettings::default().with_tolerance(1e-12);
    let profile = MassProfile::new(MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.0))?;
    let target = build_target(&profile, &ReferenceModel::stp(2.0)?, Mode::Strict)?;
    // uniform in y = arctan z, stopping 1e-9 short of the ends
    let in_z = |j: usize, n: usize| {
        let edge = FRAC_PI_2 - 1e-9;
        profile.map_inverse(-edge + 2.0 * edge * j as f64 / n as f64)
    };
    let breaks = (0..=64).map(|j| in_z(j, 64)).collect::<pdem::Result<Vec<f64>>>()?;
    let samples = (1..2000).map(|j| in_z(j, 2000)).collect::<pdem::Result<Vec<f64>>>()?;
    for k in 0..4 {
        let state = target.transported_state(k, &quad)?;
        let norm = integrate_panels(|z| state.value_unchecked(z).powi(2), &breaks, &quad)?;
        let values: Vec<f64> = samples.iter().map(|z| state.value_unchecked(*z)).collect();
        println!(
            "psi_{k}: psi(0) = {:+.6}, psi(1) = {:+.6}, integral {:.10}, nodes {}",
            state.value(0.0)?,
            state.value(1.0)?,
            norm,
            count_nodes(&values)
        );
    }
    let ground = target.transported_state(0, &quad)?;
    let ratio = |z: f64| ground.value_unchecked(z) * (1.0 + z * z).powf(1.5);
    println!(
        "psi_0 (1 + z^2)^(3/2) at z = 0, 1, 10: {:.10} {:.10} {:.10}",
        ratio(0.0),
        ratio(1.0),
        ratio(10.0)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> pdem::Result<()> {
    run_example()
}
