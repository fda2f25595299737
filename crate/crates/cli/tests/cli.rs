use std::collections::BTreeMap;
use std::process::{Command, Output};

use serde_json::Value as Json;

fn igeo(args: &[&str]) -> Output {
    igeo_env(args, None)
}

fn igeo_env(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_igeo"));
    cmd.args(args).env_remove("IGEO_SEED");
    if let Some(s) = seed {
        cmd.env("IGEO_SEED", s);
    }
    cmd.output().expect("igeo runs")
}

fn json(out: &Output) -> Json {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn records(doc: &Json) -> &Vec<Json> {
    doc["records"].as_array().expect("records array")
}

fn find<'a>(doc: &'a Json, quantity: &str) -> &'a Json {
    records(doc)
        .iter()
        .find(|r| r["quantity"] == quantity)
        .unwrap_or_else(|| panic!("no {quantity} record"))
}

#[test]
fn metric_in_theta_at_standard_normal() {
    let doc = json(&igeo(&[
        "metric", "--chart", "theta", "--point", "0,1", "--format", "json",
    ]));
    assert_eq!(doc["meta"]["command"], "metric");
    assert_eq!(doc["meta"]["chart"], "theta");
    assert_eq!(doc["meta"]["engine"], "closed_form");
    assert!(doc["meta"]["tool_version"].is_string());
    let g = &find(&doc, "g")["value"];
    let g: Vec<Vec<f64>> = serde_json::from_value(g.clone()).unwrap();
    assert_eq!(g, vec![vec![1.0, 0.0], vec![0.0, 2.0]]);
    assert_eq!(find(&doc, "g")["provenance"], "oracle");
}

#[test]
fn numbers_carry_seventeen_significant_digits() {
    let out = igeo(&["metric", "--point", "0,3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("1.1111111111111110e-1") || text.contains("1.1111111111111111e-1"),
        "{text}"
    );
}

#[test]
fn scalar_curvature_in_xi() {
    let doc = json(&igeo(&[
        "scalar",
        "--chart",
        "xi",
        "--point",
        "1,2",
        "--engine",
        "closed_form",
    ]));
    let k = find(&doc, "K")["value"].as_f64().unwrap();
    assert!((k + 0.5).abs() < 1e-8, "{k}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "christoffel",
        "--chart",
        "theta",
        "--grid",
        "-1:1:4,0.5:2:3",
        "--connection",
        "expectation",
        "--engine",
        "monte_carlo:5000",
    ];
    assert_eq!(igeo(&args).stdout, igeo(&args).stdout);
    let a = igeo_env(&args, Some("1234"));
    let b = igeo_env(&args, Some("1234"));
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert!(doc["meta"]["engine"].as_str().unwrap().ends_with(":1234"));
    assert_ne!(a.stdout, igeo_env(&args, Some("1235")).stdout);
}

/// `(c1, c2, quantity, compact JSON value)` for every record.
type Multiset = BTreeMap<(String, String, String, String), usize>;

#[test]
fn csv_and_json_carry_the_same_records() {
    for base in [
        vec!["curvature", "--chart", "xi", "--grid", "0:1:2,2:3:2"],
        vec!["audit", "--point", "0,1"],
        vec!["transform", "--chart", "theta", "--point", "1,2"],
    ] {
        let run = |fmt: &str| {
            let mut a = base.clone();
            a.extend(["--format", fmt]);
            igeo(&a)
        };
        let doc = json(&run("json"));
        let mut from_json = Multiset::new();
        for r in records(&doc) {
            let key = (
                r["point"][0].to_string(),
                r["point"][1].to_string(),
                r["quantity"].as_str().unwrap().to_string(),
                r["value"].to_string(),
            );
            *from_json.entry(key).or_default() += 1;
        }
        let csv_out = run("csv");
        assert!(csv_out.status.success());
        let mut rdr = csv::Reader::from_reader(csv_out.stdout.as_slice());
        assert_eq!(
            rdr.headers().unwrap().iter().collect::<Vec<_>>(),
            ["c1", "c2", "quantity", "value", "provenance"]
        );
        let mut from_csv = Multiset::new();
        for row in rdr.records() {
            let row = row.unwrap();
            let key = (
                row[0].to_string(),
                row[1].to_string(),
                row[2].to_string(),
                row[3].to_string(),
            );
            *from_csv.entry(key).or_default() += 1;
        }
        assert_eq!(from_json, from_csv, "{base:?}");
    }
}

#[test]
fn grid_records_follow_grid_order() {
    let doc = json(&igeo(&["metric", "--grid", "-1:1:3,1:2:2"]));
    let points: Vec<(f64, f64)> = records(&doc)
        .iter()
        .filter(|r| r["quantity"] == "det_g")
        .map(|r| {
            (
                r["point"][0].as_f64().unwrap(),
                r["point"][1].as_f64().unwrap(),
            )
        })
        .collect();
    let expected: Vec<(f64, f64)> = [-1.0, 0.0, 1.0]
        .iter()
        .flat_map(|&a| [1.0, 2.0].map(|b| (a, b)))
        .collect();
    assert_eq!(points, expected);
}

#[test]
fn audit_exit_status_depends_on_strict() {
    assert_eq!(igeo(&["audit", "--point", "0,1"]).status.code(), Some(0));
    assert_eq!(
        igeo(&["audit", "--point", "0,1", "--strict"]).status.code(),
        Some(3)
    );
}

#[test]
fn audit_records_use_audit_provenance() {
    let doc = json(&igeo(&["audit", "--point", "0,1"]));
    for r in records(&doc) {
        assert_eq!(r["provenance"], "audit");
        let v = &r["value"];
        for key in [
            "route",
            "published",
            "oracle",
            "abs_gap",
            "rel_gap",
            "verdict",
        ] {
            assert!(!v[key].is_null(), "{key} missing in {r}");
        }
    }
}

#[test]
fn domain_errors_exit_with_two() {
    let out = igeo(&["metric", "--point", "0,-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma > 0"));
    assert_eq!(
        igeo(&["metric", "--chart", "xi", "--point", "2,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        igeo(&["metric", "--grid", "0:1:2,-1:1:3"]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_with_sixty_four() {
    for args in [
        vec!["metric"],
        vec!["metric", "--point", "0"],
        vec!["metric", "--point", "a,b"],
        vec!["bogus", "--point", "0,1"],
        vec!["metric", "--point", "0,1", "--engine", "monte_carlo:10"],
        vec!["metric", "--point", "0,1", "--grid", "0:1:2,1:2:2"],
        vec!["audit", "--chart", "xi", "--point", "0,1"],
        vec![
            "metric",
            "--chart",
            "theta",
            "--point",
            "0,1",
            "--published",
        ],
    ] {
        assert_eq!(igeo(&args).status.code(), Some(64), "{args:?}");
    }
}

#[test]
fn help_and_version_succeed() {
    let out = igeo(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("audit"));
    assert_eq!(igeo(&["--version"]).status.code(), Some(0));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = igeo(&["metric", "--point", "0,1", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, igeo(&["metric", "--point", "0,1"]).stdout);
}

#[test]
fn unwritable_output_exits_with_io_status() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let out = igeo(&["metric", "--point", "0,1", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(74));
}

#[test]
fn published_values_are_marked_as_published() {
    let doc = json(&igeo(&[
        "scalar",
        "--chart",
        "xi",
        "--point",
        "0,1",
        "--published",
    ]));
    let k = find(&doc, "K");
    assert_eq!(k["provenance"], "paper");
    assert_eq!(k["value"].as_f64(), Some(1.5));
    let doc = json(&igeo(&[
        "metric",
        "--chart",
        "xi",
        "--point",
        "0,1",
        "--published",
    ]));
    assert_eq!(find(&doc, "det_G_d")["value"].as_f64(), Some(0.5));
}

#[test]
fn transform_round_trips_between_charts() {
    let doc = json(&igeo(&["transform", "--chart", "theta", "--point", "1,2"]));
    let xi: Vec<f64> = serde_json::from_value(find(&doc, "xi")["value"].clone()).unwrap();
    assert_eq!(xi, vec![1.0, 5.0]);
    let j: Vec<Vec<f64>> = serde_json::from_value(find(&doc, "J")["value"].clone()).unwrap();
    assert_eq!(j, vec![vec![1.0, 0.0], vec![2.0, 4.0]]);
    let back = json(&igeo(&["transform", "--chart", "xi", "--point", "1,5"]));
    let theta: Vec<f64> = serde_json::from_value(find(&back, "theta")["value"].clone()).unwrap();
    assert_eq!(theta, vec![1.0, 2.0]);
}

#[test]
fn text_format_is_aligned() {
    let out = igeo(&["metric", "--point", "0,1", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# metric chart=theta"));
    assert!(text.lines().any(|l| l.ends_with("[1  0]")));
    assert!(text.lines().any(|l| l.ends_with("[0  2]")));
}

#[test]
fn selftest_passes() {
    let out = igeo(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!(records(&doc).iter().all(|r| r["value"]["passed"] == true));
}
