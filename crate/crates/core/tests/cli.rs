use std::fs;
use std::process::{Command, Output};

use graphene_vdw::report::{read_curve_csv, read_text_table};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_graphene-vdw"));
    c.env_remove("GRAPHENE_VDW_ATOMS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_thermal_coefficient() {
    let o = run(&["eval", "--atom", "He*", "--model", "dirac", "--delta", "0.1", "--a", "500", "--temp", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let c3: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("C3 = "))
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((c3 / 0.0183565 - 1.0).abs() < 0.005, "{text}");
    assert!(text.contains("E = "));
}

#[test]
fn unknown_atom_exits_one() {
    let o = run(&["eval", "--atom", "Xx", "--model", "dirac", "--a", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("unknown atom `Xx`") && err.contains("He*"), "{err}");
}

#[test]
fn inconsistent_flags_exit_one() {
    let o = run(&["eval", "--atom", "H", "--model", "hydrodynamic", "--delta", "0.1", "--a", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["eval", "--atom", "H", "--model", "graphite", "--a", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["frobnicate"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn non_convergence_exits_two() {
    let o = run(&["eval", "--atom", "H", "--model", "dirac", "--a", "5", "--rel-tol", "1e-14", "--max-subdivisions", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let o = run(&["sweep", "--atom", "H", "--model", "dirac", "--delta", "0.01", "--grid", "3:100:6", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let (meta, curve) = read_curve_csv(fs::read(&path).unwrap().as_slice()).unwrap();
    assert_eq!(meta["atom"], "H");
    assert_eq!(meta["delta_eV"], "0.01");
    assert!(meta.contains_key("code_version") && meta.contains_key("quadrature.rel_tol"));
    assert_eq!(curve.points.len(), 6);
    curve.validate().unwrap();
}

#[test]
fn units_override_changes_c3_column() {
    let au = stdout(&run(&["sweep", "--atom", "Na", "--model", "hydro", "--grid", "10"]));
    let ev = stdout(&run(&["sweep", "--atom", "Na", "--model", "hydro", "--grid", "10", "--units", "eV-nm"]));
    let a = read_text_table(au.as_bytes(), Some(',')).unwrap();
    let e = read_text_table(ev.as_bytes(), Some(',')).unwrap();
    let ratio = e.column("c3_eV_nm3").unwrap()[0] / a.column("c3_au").unwrap()[0];
    assert!((ratio - 4.032e-3).abs() < 1e-15);
    assert_eq!(a.column("energy_eV"), e.column("energy_eV"));
}

#[test]
fn ratio_and_gapsweep_json() {
    let o = run(&["ratio", "--atom", "He*", "--grid", "3,100", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["data"]["rows"].as_array().unwrap();
    assert!((rows[0]["ratio"].as_f64().unwrap() - 1.33).abs() < 0.03);
    assert!(v["provenance"]["quadrature"]["rel_tol"].is_number());

    let o = run(&["gapsweep", "--atom", "H", "--a", "50", "--delta-grid", "1e-15,0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let t = read_text_table(o.stdout.as_slice(), Some(',')).unwrap();
    let spread: f64 = t.metadata["spread"].parse().unwrap();
    assert!((spread - 0.164).abs() < 0.02);
    assert_eq!(t.metadata["plateau_threshold"], "0.01");
}

#[test]
fn fit_prints_parameters() {
    let o = run(&["fit", "--atom", "Na", "--model", "dirac", "--delta", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let c4: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("C4 = "))
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((c4 / 7.11 - 1.0).abs() < 0.05, "{text}");
    assert!(text.contains("l = ") && text.contains("sub-1% range"));
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let atoms = dir.path().join("atoms.txt");
    fs::write(&atoms, "Rb, 319.0, 1.58\n").unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "atom = Rb\nmodel = dirac\na = 20\n").unwrap();

    let o = bin()
        .env("GRAPHENE_VDW_ATOMS", &atoms)
        .args(["eval", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    // command line wins over the file
    let o = bin()
        .env("GRAPHENE_VDW_ATOMS", &atoms)
        .args(["eval", "--config", cfg.to_str().unwrap(), "--atom", "Xx"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["eval", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "Rb is unknown without the atom file");
}

#[test]
fn reproduce_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("one");
    let second = dir.path().join("two");
    for d in [&first, &second] {
        let o = run(&["reproduce", "--out", d.to_str().unwrap(), "--jobs", "2"]);
        assert_eq!(o.status.code(), Some(0));
    }
    let mut names: Vec<_> = fs::read_dir(&first)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() > 40);
    for name in &names {
        let a = fs::read(first.join(name)).unwrap();
        let b = fs::read(second.join(name)).unwrap();
        assert!(a == b, "{name:?} differs between runs");
        assert!(a.starts_with(b"# code_version") || a.starts_with(b"{"), "{name:?} lacks provenance");
        if a.starts_with(b"{") {
            let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
            assert!(v["provenance"]["code_version"].is_string());
        }
    }
    let summary = fs::read_to_string(first.join("summary.txt")).unwrap();
    assert!(summary.lines().any(|l| l.starts_with("PASS [1]")));
    assert!(summary.contains("reference comparisons passed"));
}
