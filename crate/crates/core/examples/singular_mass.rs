//! Targets whose mass vanishes at `z = 0`. Kind II lives on `z > 0`; kind III
//! straddles the zero, where the grid pins `Ψ = 0`, which is not the
//! extension the transported states belong to.

use pdem::massprofiles::{MassKind, MassParameters, MassProfile};
use pdem::pct::{build_target, Mode};
use pdem::refmodels::ReferenceModel;
use pdem::verify::{verify, GridChoice, Tolerances, VerifySettings};

pub fn run_example() -> pdem::Result<()> {
    let settings = VerifySettings {
        levels: 3,
        grid: GridChoice::Fixed(7999),
        tolerances: Tolerances {
            isospectral_rel: 5e-3,
            ..Tolerances::default()
        },
        ..VerifySettings::default()
    };
    let cases = [
        (
            "kind II + cotangent",
            MassKind::II,
            MassParameters::new(4.0, 1.0, 1.0, 0.0),
            ReferenceModel::scp(2.0)?,
        ),
        (
            "kind III + tangent",
            MassKind::III,
            MassParameters::new(3.0, 1.0, 1.0, 0.0),
            ReferenceModel::stp(2.0)?,
        ),
    ];
    for (name, kind, params, reference) in cases {
        let target = build_target(&MassProfile::new(kind, params)?, &reference, Mode::Strict)?;
        let report = verify(&target, &settings)?;
        println!(
            "{name}: oracle interval {}, pinned nodes {}",
            report.convergence.interval, report.convergence.pinned_nodes
        );
        for g in &report.convergence.grids {
            println!(
                "  N = {:>6}: {:?}",
                g.n,
                g.eigenvalues.iter().map(|e| format!("{e:.6}")).collect::<Vec<_>>()
            );
        }
        for r in &report.rows {
            println!(
                "  E_{} = {:>4}: extrapolated {:.8}, rel err {:.2e}",
                r.k, r.e_analytic, r.e_numeric, r.rel_err
            );
        }
        println!("  monotone {}, passed {}", report.convergence.monotone, report.passed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pdem::Result<()> {
    run_example()
}
