//! Drives the command layer in-process from a config string, as the `pdem`
//! binary does from a file.

use pdem::cli::{cmd_build_target, cmd_compare_paper, cmd_spectrum, cmd_validate, CliError, Format, RunConfig};
use pdem::pct::EquationTag;

const CONFIG: &str = "\
mass.kind = I
mass.alpha = 1
mass.beta = 0
mass.gamma = 1
mass.delta = 1
reference.kind = PTP
reference.chi = 2
reference.lambda = 2
levels = 3
sample.points = 4
";

pub fn run_example() -> Result<(), CliError> {
    let config: RunConfig = CONFIG.parse()?;
    let v = cmd_validate(&config);
    println!("validate -> exit {}: {:?}", v.exit_code, v.notes);

    let fixed: RunConfig = CONFIG.replace("mass.delta = 1", "mass.delta = 0.5").parse()?;
    print!("{}", cmd_spectrum(&fixed)?.body);
    print!("{}", cmd_build_target(&fixed)?.body);

    let mut json = fixed.clone();
    json.output.format = Format::Json;
    let report = cmd_compare_paper(&json, EquationTag::Eq24)?;
    println!("compare-paper Eq24 -> {}", report.notes.join(" "));
    match cmd_compare_paper(&fixed, EquationTag::Eq32) {
        Err(e) => println!("compare-paper Eq32 -> exit {}: {e}", e.exit_code()),
        Ok(_) => unreachable!("Eq32 needs a kind III profile"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), CliError> {
    run_example()
}
