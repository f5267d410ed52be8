use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sfdesign::design::LevelMatrix;
use sfdesign::io::levels_to_csv;
use sfdesign::oa::{galois_oa, oa_to_text};
use sfdesign::olh::tables;

fn sfdesign(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfdesign"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Data rows of a CSV file with a header line.
fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.trim().to_string()).collect())
        .collect()
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn gen_random_lh_writes_design_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = sfdesign(
        &["gen", "random-lh", "--n", "5", "--k", "3", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("levels.csv"));
    assert_eq!((rows.len(), rows[0].len()), (5, 3));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["seed"], 1);
    assert!(manifest["outputs"].as_array().unwrap().len() >= 2);
}

#[test]
fn missing_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&sfdesign(&["gen", "random-lh", "--k", "3"], dir.path())),
        2
    );
    assert_eq!(code(&sfdesign(&["frobnicate"], dir.path())), 2);
}

#[test]
fn construct_sun_matches_embedded_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = sfdesign(
        &["construct", "sun", "--c", "3", "--parity", "odd"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("design.csv")).unwrap();
    assert_eq!(csv, levels_to_csv(&tables::sun_17x8()));
}

#[test]
fn construct_coupling_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("olh_5_2.csv");
    let oa = dir.path().join("oa_25_5_6.txt");
    fs::write(&b, levels_to_csv(&tables::olh_5x2())).unwrap();
    fs::write(&oa, oa_to_text(&galois_oa(5, 6).unwrap())).unwrap();
    let out = dir.path().join("run");
    let o = sfdesign(
        &[
            "construct",
            "lin2009",
            "--b",
            b.to_str().unwrap(),
            "--oa",
            oa.to_str().unwrap(),
        ],
        &out,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out.join("design.csv"));
    assert_eq!((rows.len(), rows[0].len()), (25, 12));
}

#[test]
fn construct_double_writes_four_designs() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("olh_16_12.csv");
    fs::write(&b, levels_to_csv(&tables::olh_16x12())).unwrap();
    let out = dir.path().join("run");
    assert_eq!(
        code(&sfdesign(
            &["construct", "double", "--b", b.to_str().unwrap()],
            &out
        )),
        0
    );
    for name in [
        "design-32x12.csv",
        "design-64x24.csv",
        "design-128x48.csv",
        "design-256x96.csv",
    ] {
        assert!(out.join(name).exists(), "{name}");
    }
}

#[test]
fn eval_reports_default_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let design = dir.path().join("nolh.csv");
    fs::write(&design, levels_to_csv(&tables::nolh_13x12())).unwrap();
    let out = dir.path().join("run");
    assert_eq!(
        code(&sfdesign(
            &["eval", "--design", design.to_str().unwrap()],
            &out
        )),
        0
    );
    let r = report(&out);
    let metrics = r["metrics"].as_array().unwrap();
    let names: Vec<&str> = metrics
        .iter()
        .map(|m| m["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["phi_q", "rho_max", "rho_ave_sq", "cl2"]);
    let rho = metrics[1]["value"].as_f64().unwrap();
    assert!((rho - 0.0495).abs() < 5e-5);
}

#[test]
fn eval_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1,2\n3,x\n").unwrap();
    let o = sfdesign(&["eval", "--design", bad.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let missing = dir.path().join("missing.csv");
    assert_eq!(
        code(&sfdesign(
            &["eval", "--design", missing.to_str().unwrap()],
            dir.path()
        )),
        4
    );
    let good = dir.path().join("good.csv");
    fs::write(&good, levels_to_csv(&tables::olh_5x2())).unwrap();
    let o = sfdesign(
        &[
            "eval",
            "--design",
            good.to_str().unwrap(),
            "--metrics",
            "nonsense",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn plot_needs_two_columns() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    fs::write(&one, "0.1\n0.7\n").unwrap();
    assert_ne!(
        code(&sfdesign(
            &["plot", "--design", one.to_str().unwrap()],
            dir.path()
        )),
        0
    );
    let three = dir.path().join("three.csv");
    fs::write(&three, levels_to_csv(&tables::lh_5x3())).unwrap();
    let out = dir.path().join("run");
    assert_eq!(
        code(&sfdesign(
            &["plot", "--design", three.to_str().unwrap(), "--grid", "5"],
            &out
        )),
        0
    );
    let svg = fs::read_to_string(out.join("plot.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn verify_oa_rejects_a_mutated_array() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("oa.txt");
    let text = oa_to_text(&tables::oa_9x4());
    fs::write(&good, &text).unwrap();
    assert_eq!(
        code(&sfdesign(
            &["verify-oa", "--oa", good.to_str().unwrap()],
            &dir.path().join("a")
        )),
        0
    );
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let last = lines.last_mut().unwrap();
    let flipped = if last.ends_with('1') { "2" } else { "1" };
    last.replace_range(last.len() - 1.., flipped);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, lines.join("\n")).unwrap();
    assert_eq!(
        code(&sfdesign(
            &["verify-oa", "--oa", bad.to_str().unwrap()],
            &dir.path().join("b")
        )),
        3
    );
}

#[test]
fn rerun_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    assert_eq!(
        code(&sfdesign(
            &["gen", "random-lh", "--n", "6", "--k", "2", "--seed", "9"],
            &first
        )),
        0
    );
    let manifest = first.join("manifest.json");
    let again = dir.path().join("again");
    assert_eq!(
        code(&sfdesign(&["rerun", manifest.to_str().unwrap()], &again)),
        0
    );
    assert_eq!(
        fs::read(first.join("levels.csv")).unwrap(),
        fs::read(again.join("levels.csv")).unwrap()
    );

    let mut m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    m["outputs"][0]["sha256"] = serde_json::Value::String("0".repeat(64));
    fs::write(&manifest, m.to_string()).unwrap();
    assert_eq!(
        code(&sfdesign(
            &["rerun", manifest.to_str().unwrap()],
            &dir.path().join("third")
        )),
        3
    );
}

#[test]
fn oa_lh_from_file_is_latin() {
    let dir = tempfile::tempdir().unwrap();
    let oa = dir.path().join("oa_9_3_4.txt");
    fs::write(&oa, oa_to_text(&tables::oa_9x4())).unwrap();
    let out = dir.path().join("run");
    assert_eq!(
        code(&sfdesign(
            &["gen", "oa-lh", "--oa", oa.to_str().unwrap(), "--seed", "2"],
            &out
        )),
        0
    );
    let rows: Vec<Vec<i64>> = csv_rows(&out.join("levels.csv"))
        .iter()
        .map(|r| r.iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!((rows.len(), rows[0].len()), (9, 4));
    let d = LevelMatrix::latin_from_integers(&rows).unwrap();
    assert!(sfdesign::design::validate_latin_hypercube(&d).passed);
}
