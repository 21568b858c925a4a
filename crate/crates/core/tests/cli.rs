mod common;

use common::qosc;
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let out = qosc(args);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout))
    });
    (code, v)
}

#[test]
fn every_command_shares_the_envelope() {
    for cmd in ["relations", "qfunctions", "spectrum", "coherent", "completeness", "weyl", "commutator"] {
        let (code, v) = json(&[cmd]);
        assert_eq!(code, 0, "{cmd}");
        assert_eq!(v["command"], cmd);
        for key in ["config", "checks", "summary", "wall_time_s"] {
            assert!(v.get(key).is_some(), "{cmd} lacks {key}");
        }
        assert_eq!(v["config"]["q"], 0.5);
        assert_eq!(v["config"]["modes"], 2);
        assert_eq!(v["config"]["cutoff"], 5);
        let s = &v["summary"];
        assert_eq!(s["total"].as_u64(), Some(v["checks"].as_array().unwrap().len() as u64));
        assert_eq!(s["failed"], 0);
    }
}

#[test]
fn config_echo_includes_command_parameters() {
    let (code, v) = json(&["weyl", "--q", "0.5", "--modes", "2", "--s", "0.3,0.2", "--t", "0.2,0.3i"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["s"], serde_json::json!([[0.3, 0.0], [0.2, 0.0]]));
    assert_eq!(v["config"]["t"][1], serde_json::json!([0.0, 0.3]));
    let eqs: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["equation"].as_str().unwrap()).collect();
    for tag in ["Eq(21)", "Eq(22)", "Eq(23)"] {
        assert!(eqs.contains(&tag), "{tag}");
    }
}

#[test]
fn spectrum_csv_columns_and_first_row() {
    let out = qosc(&["spectrum", "--q", "0.5", "--modes", "2", "--cutoff", "6", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(&out.stdout[..]);
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["label", "E_numeric", "E_closed_corrected", "E_closed_printed", "degeneracy_id"]
    );
    let first = reader.records().next().unwrap().unwrap();
    assert_eq!(&first[0], "(0,0)");
    assert_eq!(first[1].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn levels_limit_rows() {
    let (_, v) = json(&["spectrum", "--levels", "3"]);
    assert_eq!(v["spectrum"].as_array().unwrap().len(), 3);
}

#[test]
fn near_degenerate_pair_needs_wider_grouping() {
    let group = |args: &[&str]| {
        let (_, v) = json(args);
        let entries = v["spectrum"].as_array().unwrap().clone();
        let find = |label: [u64; 2]| {
            entries
                .iter()
                .find(|e| e["label"] == serde_json::json!(label))
                .map(|e| e["degeneracy_group"].as_u64().unwrap())
                .unwrap()
        };
        (find([1, 0]), find([0, 1]))
    };
    let (a, b) = group(&["spectrum", "--q", "0.999", "--modes", "2"]);
    assert_ne!(a, b);
    let (a, b) = group(&["spectrum", "--q", "0.999", "--modes", "2", "--degeneracy-tol", "1e-3"]);
    assert_eq!(a, b);
}

#[test]
fn output_file_and_sweep_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let sweep = dir.path().join("sweep.csv");
    let out = qosc(&[
        "report",
        "--modes",
        "2",
        "--cutoff",
        "5",
        "--sweep",
        "0.1:0.9:9",
        "--sweep-output",
        sweep.to_str().unwrap(),
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let rows = v["sweep"].as_array().unwrap();
    // 9 q values times the 5^2 labels of the margin-1 sector
    assert_eq!(rows.len(), 9 * 25);
    let mut reader = csv::Reader::from_path(&sweep).unwrap();
    let qs: std::collections::BTreeSet<String> =
        reader.records().map(|r| r.unwrap()[0].to_string()).collect();
    assert_eq!(qs.len(), 9);
    // nothing but the two outputs left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn empty_sweep_is_a_single_q_report() {
    let (code, v) = json(&["report"]);
    assert_eq!(code, 0);
    assert!(v.get("sweep").is_none());
    assert!(v["spectrum"].as_array().is_some());
}

#[test]
fn unwritable_output_is_a_config_error() {
    let out = qosc(&["relations", "--output", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_configurations_exit_two() {
    for args in [
        &["relations", "--q", "0"][..],
        &["relations", "--q", "1"][..],
        &["relations", "--modes", "0"][..],
        &["relations", "--cutoff", "5", "--margin", "6"][..],
        &["coherent", "--modes", "2", "--z", "0.1"][..],
        &["coherent", "--modes", "1", "--q", "0.5", "--z", "1.5"][..],
        &["weyl", "--modes", "1", "--s", "0.7", "--t", "0.1"][..],
        &["spectrum", "--tol", "0"][..],
        &["report", "--sweep", "0.1:1.2:3"][..],
        &["relations", "--format", "xml"][..],
    ] {
        let out = qosc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn forced_failure_exits_one() {
    let out = qosc(&["relations", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_format_lists_checks() {
    let out = qosc(&["commutator", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 5);
    assert!(text.contains("0 failed"));
}

#[test]
fn json_output_is_deterministic() {
    for cmd in ["coherent", "qfunctions", "weyl"] {
        let (_, a) = json(&[cmd]);
        let (_, b) = json(&[cmd]);
        assert_eq!(common::without_wall_time(a), common::without_wall_time(b), "{cmd}");
    }
}
