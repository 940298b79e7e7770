//! Exit-code and output-shape tests for the command-line interface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn denjoy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_denjoy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn classify_exit_codes() {
    let eq = denjoy(&["classify", "[0;(2)]", "[0;1,(2)]"]);
    assert_eq!(eq.status.code(), Some(0));
    let text = stdout(&eq);
    assert!(text.contains("verdict: Equivalent"));
    assert!(text.contains("tail witness: (2)"));
    assert!(text.contains("matrix witness: [[0, 1], [1, 1]]"));

    let ne = denjoy(&["classify", "[0;(2)]", "[0;(1)]"]);
    assert_eq!(ne.status.code(), Some(1));
    assert!(stdout(&ne).contains("verdict: NotEquivalent"));

    let same = denjoy(&["classify", "[0;(2)]", "[0;(2)]"]);
    assert_eq!(same.status.code(), Some(0));

    let unknown = denjoy(&["classify", "[0;2,2,2,2]", "[0;1,2,2,2]", "--depth", "3"]);
    assert_eq!(unknown.status.code(), Some(2));

    let bad = denjoy(&["classify", "[0;(2)]", "not-a-cf"]);
    assert_eq!(bad.status.code(), Some(3));

    let usage = denjoy(&["classify"]);
    assert_eq!(usage.status.code(), Some(3));
}

#[test]
fn verify_passes_and_fails() {
    let ok = denjoy(&[
        "verify",
        "--alpha",
        "[0;(2)]",
        "--depth",
        "12",
        "--samples",
        "20",
        "--iters",
        "10",
        "--seed",
        "0",
        "--resolution",
        "3",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let text = stdout(&ok);
    assert!(text.contains("semiconjugacy"));
    assert!(text.contains("overall: pass"));

    // iters = 0 is a vacuous pass
    let vacuous = denjoy(&[
        "verify",
        "--alpha",
        "[0;(2)]",
        "--depth",
        "12",
        "--samples",
        "5",
        "--iters",
        "0",
        "--resolution",
        "3",
    ]);
    assert_eq!(vacuous.status.code(), Some(0));

    // a shallow map cannot host the default density resolution: the
    // resolved-depth failure is reported and the exit code is 1
    let shallow = denjoy(&[
        "verify",
        "--alpha",
        "[0;(2)]",
        "--depth",
        "1",
        "--samples",
        "5",
        "--iters",
        "5",
    ]);
    assert_eq!(shallow.status.code(), Some(1));
    let text = stdout(&shallow);
    assert!(text.contains("resolved-depth"), "{}", text);
    assert!(text.contains("overall: FAIL"));
}

#[test]
fn genus_reports_descriptor_json() {
    let out = denjoy(&["genus", "power(denjoy(m=1), k=3)"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["genus"], 4);
    assert_eq!(parsed["orientable"], true);

    let bad = denjoy(&["genus", "nonsense("]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn ends_reports_count_and_relation() {
    let out = denjoy(&["ends", "--alpha", "[0;(2)]", "--resolution", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "{\"resolution\": 4, \"count\": 1}");

    let rel_path = tmp("relation.json");
    let with_file = denjoy(&[
        "ends",
        "--alpha",
        "[0;(2)]",
        "--resolution",
        "2",
        "--out",
        rel_path.to_str().unwrap(),
    ]);
    assert_eq!(with_file.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rel_path).unwrap()).unwrap();
    assert_eq!(json["resolution"], 2);
    assert_eq!(json["arcs"].as_array().unwrap().len(), 5);
    assert!(!json["edges"].as_array().unwrap().is_empty());
}

#[test]
fn orbit_and_cantor_csv() {
    let orbit = denjoy(&[
        "orbit", "--alpha", "[0;(2)]", "--depth", "8", "--steps", "5",
    ]);
    assert_eq!(orbit.status.code(), Some(0));
    let text = stdout(&orbit);
    assert!(text.starts_with("step,kind,orbit_id,n,t_num,t_den,collapsed_mid,collapsed_radius"));
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().nth(1).unwrap().starts_with("0,gap,0,0,1,2"));

    let base = denjoy(&[
        "orbit", "--alpha", "[0;(2)]", "--depth", "8", "--steps", "3", "--base", "1/3",
    ]);
    assert_eq!(base.status.code(), Some(0));
    assert!(stdout(&base).lines().nth(1).unwrap().contains("base"));

    let cantor = denjoy(&["cantor", "--alpha", "[0;(2)]", "--depth", "4"]);
    assert_eq!(cantor.status.code(), Some(0));
    let text = stdout(&cantor);
    assert!(text.starts_with("index,left_mid,left_rad,right_mid,right_rad"));
    assert_eq!(text.lines().count(), 10); // header + 9 arcs
}

#[test]
fn complex_reports_chi_and_rank() {
    let torus = denjoy(&[
        "complex",
        "--kind",
        "torus",
        "--orbits",
        "3",
        "--truncation",
        "4",
    ]);
    assert_eq!(torus.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&torus)).unwrap();
    assert_eq!(json["chi"], -3);
    assert_eq!(json["free_rank"], 4);

    let spine = denjoy(&[
        "complex",
        "--kind",
        "spine",
        "--orbits",
        "1",
        "--truncation",
        "3",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&spine)).unwrap();
    assert_eq!(json["edges"], 7);
    assert_eq!(json["free_rank"], 6);

    let bad = denjoy(&["complex", "--kind", "simplicial"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn plot_writes_svg_and_csvs() {
    let svg_path = tmp("plot.svg");
    let out = denjoy(&[
        "plot",
        "--alpha",
        "[0;(2)]",
        "--depth",
        "0",
        "--out",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("stroke=\"red\""));
    assert!(std::fs::metadata(svg_path.with_extension("cantor.csv")).is_ok());
    assert!(std::fs::metadata(svg_path.with_extension("orbit.csv")).is_ok());

    // identical flags give identical bytes
    let svg_path2 = tmp("plot2.svg");
    let _ = denjoy(&[
        "plot",
        "--alpha",
        "[0;(2)]",
        "--depth",
        "0",
        "--out",
        svg_path2.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read(&svg_path).unwrap(),
        std::fs::read(&svg_path2).unwrap()
    );
}
