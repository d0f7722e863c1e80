//! Terminating hypergeometric polynomials and Pochhammer symbols.

use pdem::specfun::{hyp2f1_terminating, pochhammer, PolyEvalSettings, Summation};

pub fn run_example() -> pdem::Result<()> {
    println!("(1/2)_3 = {}, (-3)_4 = {}", pochhammer(0.5, 3), pochhammer(-3.0, 4));
    println!(
        "2F1(-2, 4; 3.5; 1) = {:.17} (exact -1/63 = {:.17})",
        hyp2f1_terminating(2, 4.0, 3.5, 1.0)?,
        -1.0 / 63.0
    );
    for n in [0, 1, 5, 10] {
        println!(
            "2F1(-{n}, {}; 2.5; 0.3) = {:+.15e}",
            n + 2,
            hyp2f1_terminating(n, n as f64 + 2.0, 2.5, 0.3)?
        );
    }
    let plain = PolyEvalSettings {
        summation: Summation::Plain,
        ..PolyEvalSettings::default()
    };
    println!(
        "single f64 sum, same case: {:+.15e}",
        plain.hyp2f1_terminating(10, 12.0, 2.5, 0.3)?
    );
    match hyp2f1_terminating(3, 1.0, -2.0, 0.5) {
        Err(e) => println!("c = -2 with n = 3: {e}"),
        Ok(v) => println!("c = -2 with n = 3: {v}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pdem::Result<()> {
    run_example()
}
