//! Analytic spectra of the three constant-mass references next to a
//! finite-difference solve on the reference domain.

use pdem::refmodels::ReferenceModel;
use pdem::verify::reference_spectrum;

pub fn run_example() -> pdem::Result<()> {
    let cases = [
        ("tangent, mu = 2", ReferenceModel::stp(2.0)?, 5),
        ("tangent, mu = 1", ReferenceModel::stp(1.0)?, 8),
        ("cotangent, mu = 2", ReferenceModel::scp(2.0)?, 5),
        ("Poschl-Teller, chi = lambda = 2", ReferenceModel::ptp(2.0, 2.0)?, 3),
    ];
    for (name, model, levels) in cases {
        println!("{name} on {}", model.domain());
        for row in reference_spectrum(&model, 3999, levels)? {
            println!(
                "  E_{} = {:>6}   numeric {:.10}   rel err {:.1e}",
                row.k, row.e_analytic, row.e_numeric, row.rel_err
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pdem::Result<()> {
    run_example()
}
