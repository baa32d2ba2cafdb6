use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_helixwg");

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn helixwg(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Header and data rows of a `#`-commented CSV file.
fn table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().expect("header").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

/// Relative tolerance of a column; residual columns are only bounded.
fn column_tolerance(name: &str) -> Option<f64> {
    match name {
        "residual" => None,
        "eigenvalue" | "lowest_eigenvalue" | "shallow_well_ratio" | "energy" => Some(1e-7),
        _ => Some(1e-9),
    }
}

fn assert_matches_golden(produced: &Path, golden: &Path) {
    let (gh, grows) = table(golden);
    let (ph, prows) = table(produced);
    assert_eq!(gh, ph, "{}", golden.display());
    assert_eq!(grows.len(), prows.len(), "{}", golden.display());
    for (g, p) in grows.iter().zip(&prows) {
        for ((name, a), b) in gh.iter().zip(g).zip(p) {
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(y)) => match column_tolerance(name) {
                    Some(tol) => assert!(
                        (x - y).abs() <= tol * x.abs().max(1.0),
                        "{} column {name}: {x} vs {y}",
                        golden.display()
                    ),
                    None => assert!(y < 1e-8, "{name} {y}"),
                },
                _ => assert_eq!(a, b, "{} column {name}", golden.display()),
            }
        }
    }
}

fn run_fixture(name: &str, out: &Path) -> Output {
    let o = helixwg(&["run", here(&format!("fixtures/{name}.json")).to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    o
}

fn check_golden(name: &str, out: &Path) {
    for entry in std::fs::read_dir(here(&format!("golden/{name}"))).unwrap() {
        let g = entry.unwrap().path();
        assert_matches_golden(&out.join(g.file_name().unwrap()), &g);
    }
}

#[test]
fn frenet_matches_golden_and_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    run_fixture("frenet", dir.path());
    check_golden("frenet", dir.path());
    let (h, rows) = table(&dir.path().join("frenet.csv"));
    let k = h.iter().position(|c| c == "kappa").unwrap();
    assert!(rows.iter().all(|r| (r[k].parse::<f64>().unwrap() - 0.5).abs() < 1e-12));
}

#[test]
fn cross_spectrum_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    run_fixture("cross_spectrum", dir.path());
    check_golden("cross_spectrum", dir.path());
}

#[test]
fn effective_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_fixture("effective", dir.path());
    assert!(stdout(&o).contains("binds"));
    check_golden("effective", dir.path());
}

#[test]
fn phase_diagram_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    run_fixture("phase_diagram", dir.path());
    check_golden("phase_diagram", dir.path());
}

#[test]
fn critical_pitch_ribbon() {
    let dir = tempfile::tempdir().unwrap();
    let o = helixwg(&["critical-pitch", "--kind", "ribbon", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value: f64 = text
        .split("R0*beta0 = ")
        .nth(1)
        .and_then(|t| t.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .expect("pitch in summary");
    assert!((value - 2.2360).abs() < 1e-3, "{text}");
    check_golden("critical_pitch", dir.path());
}

#[test]
fn helical_tube_has_no_bound_states() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_fixture("tube_bind_flat", dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no bound states"), "{}", stdout(&o));
    check_golden("tube_bind_flat", dir.path());
}

#[test]
fn manifest_reruns_to_identical_tables() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    run_fixture("cross_spectrum", first.path());
    let manifest = first.path().join("manifest.json");
    let o = helixwg(&["run", manifest.to_str().unwrap(), "--out", second.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["energies.csv", "spectrum.csv"] {
        assert_eq!(table(&first.path().join(name)), table(&second.path().join(name)), "{name}");
    }
}

#[test]
fn params_block_and_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("params.json");
    std::fs::write(&params, r#"{ "helix": { "R0": 2.0, "beta0": 1.0 }, "samples": 5 }"#).unwrap();
    let o = helixwg(&["frenet", params.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("kappa0 = 0.4"));

    let desc = dir.path().join("desc.json");
    let json_dir = dir.path().join("json");
    let text = format!(
        r#"{{ "command": "critical-pitch", "params": {{ "kind": "circular" }}, "output": {{ "dir": {:?}, "format": "json" }} }}"#,
        json_dir.to_str().unwrap()
    );
    std::fs::write(&desc, text).unwrap();
    assert!(helixwg(&["run", desc.to_str().unwrap()]).status.success());
    let results: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json_dir.join("results.json")).unwrap()).unwrap();
    assert!(results.is_object() || results.is_array());
    assert!(json_dir.join("manifest.json").exists());
}

#[test]
fn exit_codes() {
    let bad = helixwg(&["run", here("fixtures/bad_radius.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    let malformed = helixwg(&["run", here("fixtures/malformed.json").to_str().unwrap()]);
    assert_eq!(malformed.status.code(), Some(2));
    let missing = helixwg(&["run", "/nonexistent/descriptor.json"]);
    assert_eq!(missing.status.code(), Some(5));
    let wrong = helixwg(&["cross-spectrum", here("fixtures/frenet.json").to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));
    assert_eq!(helixwg(&["no-such-command"]).status.code(), Some(2));
}
