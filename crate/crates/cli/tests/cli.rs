use lienard_cli::artifact::Artifact;
use lienard_cli::commands::cycles_artifact;
use lienard_cli::input::{read_input, Input};
use lienard_cli::sample::SampleReport;
use lienard_core::numerics::CycleOptions;
use lienard_core::reduction::reduce;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn lienard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lienard")).args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = lienard(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn in_dir(dir: &Path, args: &[&str]) {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--output", dir.to_str().unwrap()]);
    stdout_of(&full);
}

#[test]
fn harmonic_oscillator_reduces_to_f_zero_g_x() {
    let text = stdout_of(&["reduce", "--input", data("harmonic.json").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["artifact"], "reduced");
    assert_eq!(v["f_display"], "0");
    assert_eq!(v["g_display"], "x");
}

#[test]
fn two_cycle_family_displays() {
    let text = stdout_of(&["reduce", "--input", data("two_cycles.json").to_str().unwrap(), "--epsilon", "0"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["f_display"], "(x^2 + 2x) |1 + x|^-3");
}

#[test]
fn malformed_input_exits_2_with_line() {
    let out = lienard(&["reduce", "--input", data("malformed.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
    let out = lienard(&["reduce", "--input", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lienard(&["cycles", "--input", data("harmonic.json").to_str().unwrap(), "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn violated_inequality_exits_3_and_is_named() {
    let out = lienard(&["transversal", "--input", data("half_plane_violated.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("0 < 2c2 < b1"), "{err}");
}

#[test]
fn plotting_a_certificate_is_an_unknown_artifact() {
    let dir = tempfile::tempdir().unwrap();
    in_dir(dir.path(), &["certify", "--input", data("two_cycles.json").to_str().unwrap()]);
    let out = lienard(&["plot", "--input", dir.path().join("certify.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown artifact"));
}

#[test]
fn certify_reports_both_small_cycle_tests() {
    let text = stdout_of(&["certify", "--input", data("two_cycles.json").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let t1 = v["theorem1"].as_array().unwrap();
    assert_eq!(t1.len(), 2);
    assert!(t1.iter().all(|e| e["certificate"].is_object()), "{text}");
    assert!(v["abcd"]["certificate"].is_object());
}

#[test]
fn outputs_are_byte_identical() {
    let input = data("two_cycles.json");
    let args = ["cycles", "--input", input.to_str().unwrap(), "--box=-3.5,1.5"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
    let s = ["sample", "--region", "theorem5", "--n", "6", "--seed", "11"];
    assert_eq!(stdout_of(&s), stdout_of(&s));
}

/// Every polyline id has an `id_x,id_y` column pair with as many rows.
fn assert_consistent(dir: &Path) {
    let svg = std::fs::read_to_string(dir.join("plot.svg")).unwrap();
    let csv = std::fs::read_to_string(dir.join("plot.csv")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains(r#"version="1.1""#));
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let mut polylines = 0;
    for chunk in svg.split("<polyline id=\"").skip(1) {
        polylines += 1;
        let id = &chunk[..chunk.find('"').unwrap()];
        let col = header.iter().position(|h| *h == format!("{id}_x")).unwrap_or_else(|| panic!("no column for {id}"));
        assert_eq!(header[col + 1], format!("{id}_y"));
        let points = chunk.split("points=\"").nth(1).unwrap();
        let n_svg = points[..points.find('"').unwrap()].split_whitespace().count();
        let n_csv = rows.iter().filter(|r| !r[col].is_empty()).count();
        assert_eq!(n_svg, n_csv, "{id}");
    }
    assert!(polylines > 0);
    assert_eq!(header.len() % 2, 0);
}

#[test]
fn cycle_portrait_csv_matches_svg() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("two_cycles.json");
    in_dir(dir.path(), &["cycles", "--input", input.to_str().unwrap(), "--box=-3.5,1.5"]);
    in_dir(dir.path(), &["plot", "--input", dir.path().join("cycles.json").to_str().unwrap()]);
    assert_consistent(dir.path());
    let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert!(svg.contains(r#"id="cycle_1""#) && svg.contains(r#"id="cycle_2""#));
    assert!(svg.contains(r#"id="pole""#) && svg.contains("stroke-dasharray"));
}

#[test]
fn transversal_portrait_has_eight_arcs() {
    let dir = tempfile::tempdir().unwrap();
    in_dir(dir.path(), &["transversal", "--input", data("half_plane.json").to_str().unwrap()]);
    in_dir(dir.path(), &["plot", "--input", dir.path().join("transversal.json").to_str().unwrap()]);
    assert_consistent(dir.path());
    let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert_eq!((1..=8).filter(|k| svg.contains(&format!(r#"id="arc_{k}""#))).count(), 8);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("transversal.json")).unwrap()).unwrap();
    let max_vdot = v["report"]["max_vdot"].as_array().unwrap();
    assert!(max_vdot.iter().all(|m| m.as_f64().unwrap() < 0.0));
}

#[test]
fn empty_cycle_list_still_plots_equilibria() {
    let dir = tempfile::tempdir().unwrap();
    in_dir(dir.path(), &["cycles", "--input", data("focus.json").to_str().unwrap(), "--box=-2,2"]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cycles.json")).unwrap()).unwrap();
    assert!(v["cycles"].as_array().unwrap().is_empty());
    in_dir(dir.path(), &["plot", "--input", dir.path().join("cycles.json").to_str().unwrap()]);
    let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert!(svg.contains("<circle") && !svg.contains("cycle_1"));
}

#[test]
fn trajectory_artifact_plots() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("focus.json");
    in_dir(dir.path(), &["cycles", "--input", input.to_str().unwrap(), "--trajectory", "0.5,0", "--t-max", "10"]);
    in_dir(dir.path(), &["plot", "--input", dir.path().join("trajectory.json").to_str().unwrap()]);
    assert_consistent(dir.path());
}

#[test]
fn reduced_output_round_trips_through_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("two_cycles.json");
    in_dir(dir.path(), &["reduce", "--input", input.to_str().unwrap()]);
    let reduced = dir.path().join("reduce.json");
    let via_file = stdout_of(&["cycles", "--input", reduced.to_str().unwrap(), "--box=-3.5,1.5"]);
    let Artifact::Cycles { cycles: from_file, .. } = serde_json::from_str(&via_file).unwrap() else {
        panic!("not a cycles artifact")
    };
    let Input::Coefficients(c) = read_input(&input).unwrap() else { panic!() };
    let lf = reduce(&c.system(None)).unwrap();
    let Artifact::Cycles { cycles: direct, .. } = cycles_artifact(lf, [-3.5, 1.5], &CycleOptions::default()).unwrap()
    else {
        panic!()
    };
    assert_eq!(from_file.len(), 2);
    assert_eq!(from_file.len(), direct.len());
    for (a, b) in from_file.iter().zip(&direct) {
        for (u, v) in [
            (a.section_x, b.section_x),
            (a.period, b.period),
            (a.crossings[0], b.crossings[0]),
            (a.crossings[1], b.crossings[1]),
            (a.multiplier, b.multiplier),
        ] {
            assert!((u - v).abs() <= 1e-12 * (1.0 + v.abs()), "{u} vs {v}");
        }
    }
}

#[test]
fn empty_sample() {
    let text = stdout_of(&["sample", "--n", "0", "--seed", "3"]);
    let r: SampleReport = serde_json::from_str(&text).unwrap();
    assert_eq!((r.n_total, r.n_certified, r.n_cycles_found), (0, 0, 0));
    assert!(r.records.is_empty());
    assert_eq!(r.seed, 3);
}

#[test]
fn uniform_sample_is_internally_consistent() {
    let text = stdout_of(&["sample", "--region", "uniform", "--n", "12", "--seed", "5"]);
    let r: SampleReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.n_total, 12);
    assert_eq!(r.records.len(), 12);
    assert!(r.records.iter().enumerate().all(|(i, rec)| rec.index == i));
    assert_eq!(r.n_certified, r.records.iter().filter(|x| x.certificate.is_some()).count());
    assert_eq!(r.n_cycles_found, r.records.iter().filter(|x| x.cycles > 0).count());
    assert!(r.n_confirmed <= r.n_certified);
    assert!(r.records.iter().all(|x| !x.confirmed || x.cycles > 0));
}
