use std::path::Path;
use std::process::{Command, Output};

use pdem::cli::{format_float, target_table, RunConfig};
use tempfile::TempDir;

const FLAT: &str = "\
mass.kind = I
mass.alpha = 1
mass.beta = 0
mass.gamma = 1
mass.delta = 1
reference.kind = STP
reference.mu = 2
";

const KIND_II_SCP: &str = "\
mass.kind = II
mass.alpha = 4
mass.beta = 1
mass.gamma = 1
reference.kind = SCP
reference.mu = 2
grid.n = 7999
tolerances.isospectral_rel = 5e-3
";

fn pdem(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.cfg");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_pdem"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn energies(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&pdem(dir.path(), FLAT, &["validate"])), 0);

    let o = pdem(
        dir.path(),
        &FLAT.replace("mass.gamma = 1", "mass.gamma = -1"),
        &["validate"],
    );
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("Delta > 0"), "{}", stderr(&o));

    let o = pdem(
        dir.path(),
        &FLAT.replace("mass.delta = 1", "mass.delta = 2"),
        &["validate"],
    );
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("sqrt(Delta)/2"), "{}", stderr(&o));

    let o = pdem(dir.path(), &format!("{FLAT}mass.epsilon = 1\n"), &["validate"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("mass.epsilon"), "{}", stderr(&o));
}

#[test]
fn usage_and_io_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&pdem(dir.path(), FLAT, &["no-such-command"])), 1);
    let o = Command::new(env!("CARGO_BIN_EXE_pdem"))
        .args(["validate", "--config"])
        .arg(dir.path().join("missing.cfg"))
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn spectrum_values() {
    let dir = TempDir::new().unwrap();
    let o = pdem(dir.path(), FLAT, &["spectrum", "--levels", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(energies(&stdout(&o)), vec![2.0, 7.0, 14.0, 23.0, 34.0]);

    let ptp = FLAT.replace("mass.delta = 1", "mass.delta = 0.5").replace(
        "reference.kind = STP\nreference.mu = 2",
        "reference.kind = PTP\nreference.chi = 2\nreference.lambda = 2",
    );
    let o = pdem(dir.path(), &ptp, &["spectrum", "--levels", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(energies(&stdout(&o)), vec![16.0, 36.0, 64.0]);

    let o = pdem(dir.path(), KIND_II_SCP, &["spectrum", "--levels", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(energies(&stdout(&o)), vec![2.0, 7.0]);
}

#[test]
fn build_target_header_and_flat_potential() {
    let dir = TempDir::new().unwrap();
    let config = format!("{FLAT}sample.z_min = -5\nsample.z_max = 5\nsample.points = 41\n");
    let o = pdem(dir.path(), &config, &["build-target"]);
    assert_eq!(code(&o), 0);
    let body = stdout(&o);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("z,m,f,U_target,psi_0,psi_1,psi_2,psi_3"));
    let mut count = 0;
    for l in lines {
        let u: f64 = l.split(',').nth(3).unwrap().parse().unwrap();
        assert!((u + 1.0).abs() <= 1e-12, "{l}");
        count += 1;
    }
    assert_eq!(count, 41);
}

#[test]
fn build_target_kind_iii_potential() {
    let dir = TempDir::new().unwrap();
    let config = "\
mass.kind = III
mass.alpha = 3
mass.beta = 1
mass.gamma = 1
reference.kind = STP
reference.mu = 2
sample.points = 50
";
    let o = pdem(dir.path(), config, &["build-target", "--levels", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = target_table(&config.parse::<RunConfig>().unwrap()).unwrap();
    let profile = table.target.profile();
    for row in &table.rows {
        let z = row[0];
        let correction = pdem::pct::mass_correction(profile, z).unwrap();
        let want = 2.0 * z.powi(6) + correction;
        assert!(
            (row[3] - want).abs() <= 1e-9 * (1.0 + want.abs()),
            "z={z}: {} vs {want}",
            row[3]
        );
    }
}

#[test]
fn build_target_csv_round_trips_bit_exactly() {
    let dir = TempDir::new().unwrap();
    let o = pdem(dir.path(), FLAT, &["build-target"]);
    let table = target_table(&FLAT.parse::<RunConfig>().unwrap()).unwrap();
    let body = stdout(&o);
    let parsed: Vec<Vec<f64>> = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(parsed.len(), table.rows.len());
    for (p, r) in parsed.iter().zip(&table.rows) {
        for (a, b) in p.iter().zip(r) {
            assert_eq!(a.to_bits(), b.to_bits(), "{} vs {}", format_float(*a), format_float(*b));
        }
    }
}

#[test]
fn output_is_deterministic_with_lf_endings() {
    let dir = TempDir::new().unwrap();
    let a = pdem(dir.path(), FLAT, &["build-target"]).stdout;
    let b = pdem(dir.path(), FLAT, &["build-target"]).stdout;
    assert_eq!(a, b);
    assert!(!a.contains(&b'\r'));
    assert_eq!(a.last(), Some(&b'\n'));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let o = pdem(dir.path(), FLAT, &["verify"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let body = stdout(&o);
    let rows: Vec<&str> = body.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(rows, ["0", "1", "2", "3"]);

    assert_eq!(
        code(&pdem(dir.path(), FLAT, &["verify", "--debug-correction-eighth"])),
        2
    );
    assert_eq!(code(&pdem(dir.path(), KIND_II_SCP, &["verify"])), 0);

    let strict = format!("{FLAT}tolerances.isospectral_rel = 1e-15\n");
    let o = pdem(dir.path(), &strict, &["verify"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn compare_paper() {
    let dir = TempDir::new().unwrap();
    let o = pdem(dir.path(), FLAT, &["compare-paper", "Eq14"]);
    assert_eq!(code(&o), 0);
    let body = stdout(&o);
    assert!(body.starts_with("z,engine,paper,deviation\n"));
    let max = body
        .lines()
        .skip(1)
        .filter_map(|l| l.split(',').nth(3).and_then(|d| d.parse::<f64>().ok()))
        .fold(0.0f64, |m, d| m.max(d.abs()));
    assert!(max > 1.0, "{max}");

    assert_eq!(code(&pdem(dir.path(), KIND_II_SCP, &["compare-paper", "Eq32"])), 1);
}

#[test]
fn json_output_and_output_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let o = pdem(
        dir.path(),
        FLAT,
        &["verify", "--format", "json", "--output", out.to_str().unwrap()],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    let row = &v["rows"][0];
    for key in ["k", "e_analytic", "e_numeric", "abs_err", "rel_err"] {
        assert!(row.get(key).is_some(), "missing {key} in {row}");
    }
    assert!(v["convergence"].is_object());
}
