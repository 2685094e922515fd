use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn chazy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chazy"))
        .args(args)
        .output()
        .expect("running chazy")
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn type_ok(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        _ => panic!("unsupported type {t}"),
    }
}

/// Covers the keywords the bundled schemas use: type, enum, required,
/// properties, additionalProperties: false, items and minimum.
fn validate(s: &Value, v: &Value, at: &str, errs: &mut Vec<String>) {
    match &s["type"] {
        Value::String(t) if !type_ok(t, v) => errs.push(format!("{at}: not {t}")),
        Value::Array(ts) if !ts.iter().any(|t| type_ok(t.as_str().unwrap(), v)) => {
            errs.push(format!("{at}: none of {ts:?}"))
        }
        _ => {}
    }
    if let Some(e) = s["enum"].as_array() {
        if !e.contains(v) {
            errs.push(format!("{at}: {v} not in enum"));
        }
    }
    if let (Some(m), Some(x)) = (s["minimum"].as_f64(), v.as_f64()) {
        if x < m {
            errs.push(format!("{at}: {x} < {m}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for r in s["required"].as_array().into_iter().flatten() {
            if !obj.contains_key(r.as_str().unwrap()) {
                errs.push(format!("{at}: missing {r}"));
            }
        }
        let props = s["properties"].as_object();
        for (k, x) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(ps) => validate(ps, x, &format!("{at}.{k}"), errs),
                None if s["additionalProperties"] == false => {
                    errs.push(format!("{at}: unexpected {k}"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            validate(items, x, &format!("{at}[{i}]"), errs);
        }
    }
}

fn assert_valid(schema_name: &str, v: &Value) {
    let mut errs = Vec::new();
    validate(&schema(schema_name), v, "$", &mut errs);
    assert!(errs.is_empty(), "{schema_name}: {errs:?}");
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn validator_rejects_bad_documents() {
    let s = schema("condition_report.schema.json");
    let mut errs = Vec::new();
    validate(
        &s,
        &serde_json::json!({"q": 0, "c1_roots": "x", "pass": true, "extra": 1}),
        "$",
        &mut errs,
    );
    assert_eq!(errs.len(), 5, "{errs:?}");
}

#[test]
fn check_output_and_exit_codes() {
    let o = chazy(&["check", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_valid("condition_report.schema.json", &v);
    assert_eq!(v["q"], 3);
    assert_eq!(v["pass"], true);
    assert!(v["millis"].is_u64());

    let o = chazy(&["check", "--q", "3", "--omit-timing"]);
    assert!(json(&o).get("millis").is_none());

    assert_eq!(chazy(&["check", "--q", "0"]).status.code(), Some(2));
    assert_eq!(chazy(&["check"]).status.code(), Some(2));
    assert_eq!(chazy(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn check_writes_file() {
    let d = scratch("check_out");
    let f = d.join("r.json");
    let o = chazy(&[
        "check",
        "--q",
        "2",
        "--omit-timing",
        "--out",
        f.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_valid("condition_report.schema.json", &v);
}

#[test]
fn scan_is_deterministic_across_job_counts() {
    let a = chazy(&[
        "scan",
        "--q-min",
        "1",
        "--q-max",
        "10",
        "--omit-timing",
        "--jobs",
        "1",
    ]);
    let b = chazy(&[
        "scan",
        "--q-min",
        "1",
        "--q-max",
        "10",
        "--omit-timing",
        "--jobs",
        "4",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_valid("scan.schema.json", &v);
    let qs: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["q"].as_u64().unwrap())
        .collect();
    assert_eq!(qs, (1..=10).collect::<Vec<_>>());
}

#[test]
fn scan_entry_matches_check() {
    let s = json(&chazy(&[
        "scan",
        "--q-min",
        "2",
        "--q-max",
        "2",
        "--omit-timing",
    ]));
    let c = json(&chazy(&["check", "--q", "2", "--omit-timing"]));
    assert_eq!(s, Value::Array(vec![c]));
}

#[test]
fn scan_rejects_empty_range() {
    let o = chazy(&["scan", "--q-min", "5", "--q-max", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn orbit_csv_and_summary() {
    let d = scratch("orbit_out");
    let o = chazy(&[
        "orbit",
        "--q",
        "1",
        "--omega",
        "1,2",
        "--samples",
        "400",
        "--out-dir",
        d.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_valid("orbit_summary.schema.json", &v);
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 2);
    for e in entries {
        let w = e["omega"].as_f64().unwrap();
        assert_eq!(e["x_zero_crossings"], 2);
        let csv = std::fs::read_to_string(d.join(e["csv"].as_str().unwrap())).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,x,y,z,H"));
        let rows: Vec<Vec<f64>> = lines
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect();
        assert!(rows.len() >= 400);
        for r in &rows {
            assert_eq!(r.len(), 5);
            assert!((r[4] + w * w).abs() < 1e-8 * w * w, "H = {}", r[4]);
        }
        let (first, last) = (&rows[0], rows.last().unwrap());
        assert_eq!(first[0], 0.0);
        assert!((last[0] - e["period"].as_f64().unwrap()).abs() < 1e-9);
        for k in 1..4 {
            assert!((first[k] - last[k]).abs() < 1e-6);
        }
    }
}

#[test]
fn trap_report() {
    let o = chazy(&["trap", "--q", "7", "--samples", "500"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_valid("trap_report.schema.json", &v);
    assert_eq!(v["pass"], true);
    assert_eq!(v["samples_per_piece"], 500);
    assert_eq!(v["pieces"].as_array().unwrap().len(), 7);

    let v = json(&chazy(&["trap", "--q", "2", "--samples", "100"]));
    assert_valid("trap_report.schema.json", &v);
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["pieces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 12);
    assert_eq!(&names[7..], ["S1", "S2", "S3", "S4", "S5"]);
}

#[test]
fn appendix_reports_mismatches() {
    let o = chazy(&["appendix"]);
    // the reference sign-variation values for p_6 and p_10 disagree with
    // the Sturm chain, so the command exits 1
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_valid("appendix_report.schema.json", &v);
    let checks = v["checks"].as_array().unwrap();
    let bad = checks.iter().filter(|c| c["ok"] == false).count();
    assert_eq!(v["mismatches"], bad as u64);
    assert!(checks
        .iter()
        .filter(|c| c["name"].as_str().unwrap().contains("roots in"))
        .all(|c| c["ok"] == true));
    assert!(!o.stderr.is_empty());
}
