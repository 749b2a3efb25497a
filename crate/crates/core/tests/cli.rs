use std::path::PathBuf;

use relaycap::cli;

fn network(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("networks")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("relaycap").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn capacity_reports() {
    let (code, out, _) = run(&["capacity", &network("line.json")]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "capacity = 2 (2.00000)");

    let (_, out, _) = run(&["capacity", "--gap", &network("line.json")]);
    assert!(out.contains("[2.00000, 10.0553]"), "{out}");

    let (_, out, _) = run(&["capacity", &network("empty.json")]);
    assert_eq!(out.trim(), "capacity = 0 (0.00000)");
}

#[test]
fn half_duplex_general_uses_state_enumeration() {
    let (code, out, err) = run(&["capacity", &network("mesh_hd.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("capacity = 12/7"), "{out}");
    assert!(err.contains("warning"), "{err}");
}

#[test]
fn json_capacity() {
    let (code, out, _) = run(&["capacity", "--json", &network("tightness.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["capacity"], "2000/1001");
}

#[test]
fn schedule_examples() {
    let (code, out, _) = run(&["schedule", "--verify", &network("line.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("verified rate = 2 (2.00000)"), "{out}");

    let (_, out, _) = run(&["schedule", "--json", "--verify", &network("line_hd.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let durations: Vec<&str> = v["schedule"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["duration"].as_str().unwrap())
        .collect();
    assert_eq!(durations, ["2/5", "3/5"]);
    assert_eq!(v["verified_rate"], "6/5");

    let (_, out, _) = run(&["schedule", "--json", &network("empty.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schedule"], serde_json::json!([{ "duration": "1", "active_links": [] }]));
}

#[test]
fn schedule_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, rate) in [("tightness.json", "2000/1001"), ("symmetric_hd.json", "1"), ("two_layer.json", "62/23")] {
        let path = dir.path().join(format!("{name}.schedule"));
        let path = path.to_str().unwrap();
        let (code, _, _) = run(&["schedule", &network(name), "-o", path]);
        assert_eq!(code, 0);
        let (code, out, err) = run(&["schedule", "--json", "--verify", "--schedule", path, &network(name)]);
        assert_eq!(code, 0, "{err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verified_rate"], rate, "{name}");
    }
}

#[test]
fn unsupported_half_duplex_schedule() {
    let (code, _, err) = run(&["schedule", &network("mesh_hd.json")]);
    assert_eq!(code, 3);
    assert!(err.contains("diamond"), "{err}");
}

#[test]
fn paths_report() {
    let (code, out, _) = run(&["paths", &network("tightness.json")]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("1000/1001").count(), 2, "{out}");
    assert!(out.contains("ratio to capacity = 1001/2000"), "{out}");

    let (_, out, _) = run(&["paths", &network("two_layer.json")]);
    assert!(out.contains("2M+1"), "{out}");

    let (_, out, _) = run(&["paths", &network("line.json")]);
    assert!(out.contains("0-1-2"), "{out}");
}

#[test]
fn check_passes() {
    for name in ["line.json", "symmetric_hd.json", "mesh_hd.json", "two_layer.json"] {
        let (code, out, _) = run(&["check", &network(name)]);
        assert_eq!(code, 0, "{name}: {out}");
        assert!(out.ends_with("result: PASS\n"), "{out}");
    }
    let (_, out, _) = run(&["check", &network("line.json")]);
    assert_eq!(out.matches("PASS").count(), 5);
}

#[test]
fn size_limit_exit_code() {
    let (code, _, err) = run(&["check", "--max-states", "2", &network("line.json")]);
    assert_eq!(code, 4);
    assert!(err.contains("size limit"), "{err}");
    let (code, _, _) = run(&["paths", "--max-paths", "1", &network("tightness.json")]);
    assert_eq!(code, 4);
}

#[test]
fn parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n_relays\": 1,\n\"mode\": \"fd\",\n\"links\": [{\"from\": 0, \"to\": 1, \"capacity\": 2}]}").unwrap();
    let (code, _, err) = run(&["capacity", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");

    std::fs::write(&bad, r#"{"n_relays": 1, "mode": "fd", "links": [{"from": 0, "to": 1, "capacity": "2/0"}]}"#).unwrap();
    let (code, _, err) = run(&["capacity", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("links[0].capacity"), "{err}");

    let (code, _, _) = run(&["capacity", "--epsilon", "zero", &network("line.json")]);
    assert_eq!(code, 2);
}

#[test]
fn epsilon_flag_changes_rounding() {
    let (_, coarse, _) = run(&["capacity", "--epsilon", "1/10", &network("measured.json")]);
    let (_, fine, _) = run(&["capacity", "--epsilon", "1/100000", &network("measured.json")]);
    assert_ne!(coarse, fine);
}
