use std::process::{Command, Output};

use edwards_legendre::census::CensusTable;

fn edleg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edleg")).args(args).output().expect("edleg runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn census_over_f13() {
    let o = edleg(&["census", "--p", "13"]);
    assert_eq!(code(&o), 0);
    let t = CensusTable::from_csv(&stdout(&o)).unwrap();
    assert_eq!(t.classes.len(), 4);
    assert_eq!(t.classes.values().map(|c| c.n()).sum::<usize>(), 11);
    assert_eq!(t.n(-2), 6);
}

#[test]
fn census_artifacts_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for (fmt, m) in [("csv", "1"), ("json", "1"), ("csv", "2"), ("json", "3")] {
        let path = dir.path().join(format!("census-{m}.{fmt}"));
        let o = edleg(&["census", "--p", "5", "--m", m, "--format", fmt, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        let text = std::fs::read_to_string(&path).unwrap();
        let t = if fmt == "csv" { CensusTable::from_csv(&text) } else { CensusTable::from_json(&text) }.unwrap();
        let again = if fmt == "csv" { t.to_csv() } else { t.to_json() };
        assert_eq!(again, text);
        assert!(text.contains(&format!("5^{m}:")), "artifact names its field");
    }
}

#[test]
fn verify_katz_over_f13() {
    let o = edleg(&["verify", "--p", "13", "--theorem", "katz"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("VERIFIED katz-ratio"));
    assert!(s.contains("expected 3, observed 3") && s.contains("expected 2, observed 2"), "{s}");
}

#[test]
fn verify_every_id() {
    for (p, ids) in [
        ("13", &["6.5", "7.1", "7.2", "7.6", "7.8", "8.2", "8.4", "classes", "bijection", "all"][..]),
        ("7", &["6.5", "7.7", "7.8", "8.1", "all"][..]),
    ] {
        for id in ids {
            let o = edleg(&["verify", "--p", p, "--theorem", id]);
            assert_eq!(code(&o), 0, "{id} over {p}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
}

#[test]
fn verify_json_reports() {
    let o = edleg(&["verify", "--p", "3", "--m", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.len() >= 6);
    assert!(reports.iter().all(|r| r["status"] == "verified" && r["format_version"] == 1));
    assert!(reports.iter().any(|r| r["claim"] == "bijection"));
}

#[test]
fn wrong_residue_class_is_a_precondition_error() {
    assert_eq!(code(&edleg(&["verify", "--p", "13", "--theorem", "8.1"])), 3);
    assert_eq!(code(&edleg(&["verify", "--p", "7", "--theorem", "katz"])), 3);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&edleg(&["bogus"])), 1);
    assert_eq!(code(&edleg(&["census"])), 1);
    assert_eq!(code(&edleg(&["verify", "--p", "13", "--theorem", "9.9"])), 1);
    assert_eq!(code(&edleg(&["census", "--p", "13", "--format", "xml"])), 1);
    assert_eq!(code(&edleg(&["map", "--name", "nope", "--p", "13", "--d", "2"])), 1);
    assert_eq!(code(&edleg(&["map", "--name", "psi", "--p", "13"])), 1);
    assert_eq!(code(&edleg(&["classify", "--p", "13", "--d", "x"])), 1);
    assert_eq!(code(&edleg(&["--help"])), 0);
}

#[test]
fn bound_and_degenerate_errors_exit_3() {
    assert_eq!(code(&edleg(&["census", "--p", "101", "--max-q", "100"])), 3);
    assert_eq!(code(&edleg(&["census", "--p", "15"])), 3);
    assert_eq!(code(&edleg(&["classify", "--p", "13", "--d", "1"])), 3);
    assert_eq!(code(&edleg(&["map", "--name", "psi", "--p", "13", "--d", "1", "--point", "inf"])), 3);
}

#[test]
fn psi_sends_its_kernel_to_infinity() {
    let o = edleg(&["map", "--name", "psi", "--p", "13", "--d", "2", "--point", "0,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "inf\n");
    let o = edleg(&["map", "--name", "psi", "--p", "13", "--d", "2", "--point", "0,-1"]);
    assert_eq!(stdout(&o), "inf\n");
}

#[test]
fn point_grammar() {
    let base = ["map", "--name", "psi-dual", "--p", "13", "--d", "2", "--point"];
    let run = |pt: &str| edleg(&[&base[..], &[pt]].concat());
    let o = run("inf");
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "(0,1)\n"));
    // (0,0) is in the kernel; (1,0) goes to (0,−1)
    assert_eq!(stdout(&run("0,0")), "(0,1)\n");
    assert_eq!(stdout(&run("1,0")), "(0,12)\n");
    assert_eq!(code(&run("0;1")), 1);
    // coordinates are reduced, not rejected
    assert_eq!(stdout(&run("14,26")), stdout(&run("1,0")));
    // a point off the curve is the map's precondition, not a parse error
    assert_eq!(code(&run("1,1")), 3);
}

#[test]
fn extension_maps_need_opt_in() {
    let args = ["map", "--name", "rho+", "--p", "13", "--d", "2"];
    assert_eq!(code(&edleg(&args)), 3);
    let o = edleg(&[&args[..], &["--allow-extension", "--format", "json"]].concat());
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["defined_over"], "quadratic-extension");
    assert_eq!(v["membership"], true);
}

#[test]
fn map_verification_report() {
    let o = edleg(&[
        "map",
        "--name",
        "psi-twisted",
        "--p",
        "17",
        "--a",
        "3",
        "--d",
        "5",
        "--allow-extension",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["homomorphism"], true);
    assert_eq!(v["degree"], 2);
}

#[test]
fn huff_parameter() {
    let o = edleg(&["map", "--name", "huff", "--p", "13", "--a", "2", "--b", "5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // ((2−5)/(2+5))² = (−3/7)² = 9/49 = 9·4 = 36 ≡ 10
    assert_eq!(v["d"], "10");
    assert_eq!(v["counts_equal"], true);
    assert_eq!(code(&edleg(&["map", "--name", "huff", "--p", "13", "--a", "2", "--b", "2"])), 3);
}

#[test]
fn classify_over_f13() {
    let o = edleg(&["classify", "--p", "13", "--d", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trace"], 6);
    assert_eq!(v["order"], 8);
    assert_eq!(v["complete"], true);
    assert_eq!(v["original_isogenous"], false);
    let s = stdout(&edleg(&["classify", "--p", "13", "--d", "3"]));
    assert!(s.contains("trace,-2\n") && s.contains("original_isogenous,true\n"), "{s}");
}

#[test]
fn deuring_and_orbit() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&edleg(&["deuring", "--p", "7", "--format", "json"]))).unwrap();
    assert_eq!(v["roots"], serde_json::json!(["2", "4", "6"]));
    assert_eq!(v["class_number"], 1);
    assert_eq!(code(&edleg(&["deuring", "--p", "9"])), 3);
    let s = stdout(&edleg(&["orbit", "--p", "13", "--d", "3"]));
    let orbit: Vec<&str> = s.lines().next().unwrap().trim_start_matches("orbit,").split(' ').collect();
    assert_eq!(orbit.len(), 6);
    assert!(orbit.contains(&"3") && orbit.contains(&"9"));
}

#[test]
fn threads_flag_is_accepted() {
    let o = edleg(&["census", "--p", "31", "--threads", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), stdout(&edleg(&["census", "--p", "31"])));
}
