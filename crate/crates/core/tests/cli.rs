use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn thermalops(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermalops")).current_dir(dir).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bohr_spectrum_of_three_levels() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&thermalops(dir.path(), &["ham", "bohr", "--energies", "0,2,5"]));
    assert_eq!(v["distinct"], serde_json::json!([0.0, 2.0, 3.0, 5.0]));
    assert_eq!(v["degenerate"], false);
    assert_eq!(v["invocation"]["command"]["ham"]["bohr"]["system"]["energies"], serde_json::json!([0.0, 2.0, 5.0]));
}

#[test]
fn level_syntax_and_rational_constant() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&thermalops(dir.path(), &["ham", "rational", "--levels", "0:1,0.5:2,1.5:1", "--gap", "0.5"]));
    assert!((v["constant"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["spin_form"], true);
    let v = stdout_json(&thermalops(dir.path(), &["ham", "gibbs", "--energies", "0,1", "--beta", "0"]));
    assert_eq!(v["weights"], serde_json::json!([0.5, 0.5]));
}

#[test]
fn qubit_discontinuity_report() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&thermalops(dir.path(), &["exp", "discontinuity-qubit", "--q", "0.2"]));
    assert_eq!(v["values"]["bound"], 1.0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["parameters"]["q"], 0.2);
}

#[test]
fn cone_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "qubit", "cone", "--q", "0.45", "--bloch", "0.45,0.36,0.6835", "--grid", "40,40,60", "--svg", "cone.svg", "--csv",
        "cone.csv", "--out", "cone.json",
    ];
    let first = thermalops(dir.path(), &args);
    assert!(first.status.success() && first.stdout.is_empty());
    let read = |n: &str| std::fs::read(dir.path().join(n)).unwrap();
    let (csv, svg, json) = (read("cone.csv"), read("cone.svg"), read("cone.json"));
    assert!(thermalops(dir.path(), &args).status.success());
    assert_eq!(csv, read("cone.csv"));
    assert_eq!(svg, read("cone.svg"));
    assert_eq!(json, read("cone.json"));

    let text = String::from_utf8(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,z"));
    assert_eq!(lines.count(), 40 * 40 * 60 + 2);
    assert!(String::from_utf8(svg).unwrap().contains("<polyline"));
    let v = read_json(&dir.path().join("cone.json"));
    assert!((v["gibbs"][2].as_f64().unwrap() - 0.55 / 1.45).abs() < 1e-15);
    assert_eq!(v["invocation"]["svg"], "cone.svg");
}

#[test]
fn negative_bloch_components_parse() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&thermalops(dir.path(), &["qubit", "cone", "--q", "0.45", "--bloch", "-0.25,-0.2,-0.38", "--grid", "3,2,2"]));
    assert_eq!(v["input"], serde_json::json!([-0.25, -0.2, -0.38]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let parse = thermalops(dir.path(), &["ham", "bohr", "--energies", "0,x"]);
    assert_eq!(parse.status.code(), Some(1));
    assert_eq!(thermalops(dir.path(), &["ham", "bohr", "--bogus"]).status.code(), Some(1));
    assert_eq!(thermalops(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(thermalops(dir.path(), &["--version"]).status.code(), Some(0));

    let infeasible = thermalops(dir.path(), &["qubit", "psi-inv", "--lambda", "0.5", "--r", "0.9", "--q", "0.2"]);
    assert_eq!(infeasible.status.code(), Some(2));
    assert_eq!(stderr_json(&infeasible)["error"], "infeasible");
    let same_temp = thermalops(dir.path(), &["exp", "cmap", "--beta", "1", "--beta-prime", "1"]);
    assert_eq!(same_temp.status.code(), Some(2));
    assert_eq!(stderr_json(&same_temp)["error"], "invalid_argument");

    let cap = thermalops(
        dir.path(),
        &["qubit", "extreme", "--family", "finite", "--lambda", "0.5", "--m", "20", "--q", "0.2", "--mu", "3/2"],
    );
    assert_eq!(cap.status.code(), Some(3));
    assert_eq!(stderr_json(&cap)["error"], "dimension_cap");

    let missing = thermalops(dir.path(), &["channel", "validate", "--in", "nope.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(stderr_json(&missing)["error"], "io");
}

#[test]
fn spec_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let ext = stdout_json(&thermalops(
        dir.path(),
        &["qubit", "extreme", "--family", "interior", "--lambda", "0.5", "--phi", "-0.4", "--m", "4", "--q", "0.3", "--spec-out", "spec.json"],
    ));
    assert!(thermalops(dir.path(), &["thermal", "realize", "--in", "spec.json", "--out", "ch.json"]).status.success());
    let psi = stdout_json(&thermalops(dir.path(), &["qubit", "psi", "--in", "ch.json", "--q", "0.3"]));
    assert!((psi["lambda"].as_f64().unwrap() - ext["realized"]["lambda"].as_f64().unwrap()).abs() < 1e-15);
    assert_eq!(psi["membership"], "interior");

    let valid = stdout_json(&thermalops(dir.path(), &["channel", "validate", "--in", "ch.json", "--energies", "0,1", "--q", "0.3"]));
    assert_eq!(valid["pass"], true);

    assert!(thermalops(dir.path(), &["thermal", "compose", "--in", "spec.json", "--in", "spec.json", "--out", "sq.json"])
        .status
        .success());
    assert!(thermalops(dir.path(), &["thermal", "realize", "--in", "sq.json", "--out", "sq_ch.json"]).status.success());
    assert!(thermalops(dir.path(), &["channel", "compose", "--in", "ch.json", "--in", "ch.json", "--out", "ch2.json"])
        .status
        .success());
    let d = stdout_json(&thermalops(dir.path(), &["channel", "distance", "--in", "sq_ch.json", "--in", "ch2.json"]));
    assert!(d["choi_distance"].as_f64().unwrap() < 1e-12);

    let mix = thermalops(dir.path(), &["thermal", "mix", "--in", "spec.json", "--in", "sq.json", "--k", "1", "--d", "3"]);
    assert!(mix.status.success());
}

#[test]
fn decompose_writes_parts() {
    let dir = tempfile::tempdir().unwrap();
    // Qubit with bath levels 0, 1, 5, 6: two resonant components, identity coupling.
    let spec = serde_json::json!({
        "H_S": {"levels": [0.0, 1.0], "mult": [1, 1]},
        "H_B": {"levels": [0.0, 1.0, 5.0, 6.0], "mult": [1, 1, 1, 1]},
        "beta": 0.3,
        "U": {"rows": 8, "cols": 8, "data": (0..64).map(|k| if k % 9 == 0 { [1.0, 0.0] } else { [0.0, 0.0] }).collect::<Vec<_>>()},
    });
    std::fs::write(dir.path().join("s.json"), spec.to_string()).unwrap();
    let v = stdout_json(&thermalops(dir.path(), &["thermal", "decompose", "--in", "s.json", "--parts-dir", "parts"]));
    assert_eq!(v["parts"].as_array().unwrap().len(), 2);
    assert!(v["reconstruction_error"].as_f64().unwrap() < 1e-12);
    assert!(dir.path().join("parts/part1.json").exists());
}

#[test]
fn experiment_tables_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = thermalops(dir.path(), &["exp", "cmap", "--beta", "1", "--beta-prime", "0.5", "--json", "r.json", "--csv", "t.csv"]);
    assert!(out.status.success());
    let v = read_json(&dir.path().join("r.json"));
    assert_eq!(v["pass"], true);
    assert_eq!(v["parameters"]["multiplicity_cap"], 1_000_000_000_000_000u64);
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("energy,multiplicity,distance,gap,upper_bound"));
    assert_eq!(csv.lines().count(), 6);

    let conv = stdout_json(&thermalops(
        dir.path(),
        &["exp", "converge", "--kind", "finite-extreme", "--lambda", "0.5", "--mu", "2", "--q", "0.2", "--schedule", "3,4,5,6"],
    ));
    assert_eq!(conv["pass"], true);
    let embed = stdout_json(&thermalops(
        dir.path(),
        &["exp", "converge", "--kind", "spin-embed", "--energies", "0,1", "--bath-energies", "0,1,3", "--beta", "0.7", "--schedule", "1,2,4,8"],
    ));
    assert_eq!(embed["pass"], true);
    let no_table = thermalops(dir.path(), &["exp", "thermo-maj", "--x", "0.5,0.5", "--y", "1,0", "--d", "1,1", "--csv", "x.csv"]);
    assert_eq!(no_table.status.code(), Some(1));
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn thermo_majorization_and_surrogate() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&thermalops(dir.path(), &["exp", "thermo-maj", "--x", "0.3,0.7", "--y", "1,0", "--d", "1,1"]));
    assert_eq!(v["thermo_majorizes"], true);
    for (name, args) in [("a.json", ["0", "1", "0"]), ("b.json", ["0", "0", "0"])] {
        let p = ["qubit", "psi-inv", "--lambda", args[0], "--r", args[1], "--phi", args[2], "--q", "0.5", "--out", name];
        assert!(thermalops(dir.path(), &p).status.success());
    }
    let v = stdout_json(&thermalops(dir.path(), &["exp", "hausdorff", "--a", "a.json", "--b", "b.json"]));
    assert!((v["surrogate"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["metric"].as_str().unwrap().contains("surrogate"));
}

#[test]
fn semigroup_commands() {
    let dir = tempfile::tempdir().unwrap();
    let inv = stdout_json(&thermalops(dir.path(), &["qubit", "inverse", "--element", "0.2,0.5,0", "--q", "0.5"]));
    assert_eq!(inv["invertible"], true);
    let e = &inv["inverse"];
    let args = format!("{},{},{}", e["lambda"], e["c"][0], e["c"][1]);
    let id = stdout_json(&thermalops(dir.path(), &["qubit", "circ", "--first", "0.2,0.5,0", "--second", &args, "--q", "0.5"]));
    assert!(id["lambda"].as_f64().unwrap().abs() < 1e-15);
    assert!((id["c"][0].as_f64().unwrap() - 1.0).abs() < 1e-15);
    let m = stdout_json(&thermalops(dir.path(), &["qubit", "membership", "--lambda", "0.5", "--r", "0.6708203932499369", "--q", "0.2"]));
    assert_eq!(m["membership"], "boundary_not_reachable");
    let d = stdout_json(&thermalops(dir.path(), &["qubit", "dephase", "--phases", "0,3.141592653589793", "--q", "0.2"]));
    assert!((d["r_m"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
}
