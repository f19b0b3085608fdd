//! The binary: exit codes, error lines and written files.

use std::path::Path;
use std::process::{Command, Output};

use spiralarc_cli::report::{OutputDoc, Report};

fn spiralarc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spiralarc"))
        .args(args)
        .output()
        .unwrap()
}

fn write_input(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn error_line(out: &Output) -> serde_json::Value {
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    let line = err.lines().last().unwrap();
    serde_json::from_str(line).unwrap()
}

const WORKED: &str = "version = 1\n[curve]\nc = 1.0\nalpha = -0.3\nbeta = 0.9\nk1 = 0.05\nk2 = 1.4\nlength = 2.13\n";

#[test]
fn success_prints_a_report() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), "w.toml", WORKED);
    let out = spiralarc(&["approx", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let doc = OutputDoc::from_toml(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let Report::Approx(r) = doc.report else {
        panic!("wrong report kind")
    };
    assert!((r.arc_lengths[0] + r.arc_lengths[1] - 2.13).abs() < 1e-9);
}

#[test]
fn bad_input_exits_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = spiralarc(&["approx", "--input", "/definitely/not/here.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "io");

    let input = write_input(tmp.path(), "v.toml", "version = 7\n");
    let out = spiralarc(&["bounds", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "validation");

    let input = write_input(
        tmp.path(),
        "o.toml",
        "version = 1\n[oval]\nk = [0.9, 0.8, 0.07, 0.85]\nl = [1.0, 1.0, 1.0, 1.0]\n",
    );
    let out = spiralarc(&["oval", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "invalid-data");

    let input = write_input(tmp.path(), "l.toml", &WORKED.replace("2.13", "5.0"));
    let out = spiralarc(&["approx", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "length-out-of-range");

    let out = spiralarc(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unresolvable_contact_function_exits_with_3() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(
        tmp.path(),
        "s.toml",
        "version = 1\n[oval]\nsymmetric = [1.5, 1e12]\n",
    );
    let out = spiralarc(&["oval", "--input", &input]);
    assert_eq!(out.status.code(), Some(3));
    let e = error_line(&out);
    assert_eq!(e["error"], "no-root");
    assert_eq!(e["exit"], 3);
}

#[test]
fn non_positive_tolerance_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(tmp.path(), "w.toml", WORKED);
    let out = spiralarc(&["approx", "--input", &input, "--tol", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn document_config_beats_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(
        tmp.path(),
        "m.toml",
        "version = 1\n[config]\ngrid = 6\n[model]\nk1 = 0.3\nk2 = 1.0\nlength = 3.0\n",
    );
    let out = spiralarc(&["model", "--input", &input, "--grid", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = OutputDoc::from_toml(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let Report::Model(r) = doc.report else {
        panic!("wrong report kind")
    };
    assert_eq!(r.grid, 6);
    assert_eq!(r.points, 7 * 7 * 7);
}

#[test]
fn writes_csv_svg_and_report_files() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_input(
        tmp.path(),
        "o.toml",
        "version = 1\n[config]\ngrid = 4\nsteps = 6\n[oval]\nsymmetric = [0.3, 2.0]\n",
    );
    let p = |n: &str| tmp.path().join(n).to_str().unwrap().to_string();
    let out = spiralarc(&[
        "oval", "--input", &input, "--out", &p("r.toml"), "--out-csv", &p("s.csv"), "--out-svg",
        &p("f.svg"), "--mu-resolution", "0.01",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(p("r.toml")).unwrap();
    let Report::Oval(r) = OutputDoc::from_toml(&report).unwrap().report else {
        panic!("wrong report kind")
    };
    assert!(r.predicted.is_some());
    let csv = std::fs::read_to_string(p("s.csv")).unwrap();
    assert!(csv.starts_with("angle,angle_over_pi,intersects,overlap_area\n"));
    assert_eq!(csv.lines().count(), 1 + r.samples);
    assert!(tmp.path().join("f-mid.svg").exists());
    for i in 0..r.contacts.len() {
        let svg = std::fs::read_to_string(tmp.path().join(format!("f-contact{i}.svg"))).unwrap();
        assert!(svg.contains("scale(1,-1)"));
    }
}
