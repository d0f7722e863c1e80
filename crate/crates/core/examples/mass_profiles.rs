//! The three mass families: closed-form mapping against quadrature, the
//! mapping range, and the parameter relation each reference needs.

use pdem::massprofiles::{strict_constraint, validate, MassKind, MassParameters, MassProfile};
use pdem::oracles::quadrature::QuadratureSettings;
use pdem::refmodels::ReferenceKind;

pub fn run_example() -> pdem::Result<()> {
    let quad = QuadratureSettings::default().with_tolerance(1e-13);
    let profiles = [
        (MassKind::I, MassParameters::new(1.0, 0.0, 1.0, 1.0), 0.0),
        (MassKind::II, MassParameters::new(4.0, 1.0, 1.0, 0.0), 0.5),
        (MassKind::III, MassParameters::new(3.0, 1.0, 1.0, 0.0), 0.0),
    ];
    for (kind, params, z0) in profiles {
        let p = MassProfile::new(kind, params)?;
        println!("kind {kind}: z in {}, f maps onto {}", p.z_domain(), p.map_range());
        for z in [0.7, 1.5, 3.0] {
            let closed = p.map_forward(z)? - p.map_forward(z0)?;
            let numeric = p.map_forward_quadrature(z0, z, &quad)?;
            let (m, dm, d2m) = p.mass_derivatives(z)?;
            println!(
                "  z = {z}: m = {m:.6}, m' = {dm:.6}, m'' = {d2m:.6}, f(z) - f({z0}) = {closed:.12} (quadrature {numeric:.12})"
            );
        }
        for r in [ReferenceKind::Stp, ReferenceKind::Scp, ReferenceKind::Ptp] {
            let c = strict_constraint(kind, r);
            println!(
                "  {r}: {} (shift {:.6}), holds here: {}",
                c.parameter_relation,
                c.shift,
                c.satisfied(&params)
            );
        }
    }

    let bad = MassParameters::new(-1.0, 0.0, 1.0, 1.0);
    for v in validate(&bad, MassKind::I) {
        println!("rejected: {v}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pdem::Result<()> {
    run_example()
}
