use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn mlbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlbound")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = mlbound(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Rows of a curve CSV as `(grid, bound, value)`.
fn rows(csv: &str) -> Vec<(f64, String, f64)> {
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].parse().unwrap(), rec[1].to_string(), rec[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn upper_union_and_tsb_grid() {
    let csv = stdout(&["upper", "--bounds", "union,tsb", "--code", &data("hamming74.txt"), "--ebno", "0:6:0.5"]);
    let rows = rows(&csv);
    assert_eq!(rows.len(), 26);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0].1, "union");
        assert_eq!(pair[1].1, "tsb");
        assert_eq!(pair[0].0, pair[1].0);
        assert!(pair[1].2 <= pair[0].2, "{pair:?}");
        assert!((0.0..=1.0).contains(&pair[1].2));
    }
    assert_eq!(rows.last().unwrap().0, 6.0);
}

#[test]
fn density_worked_example() {
    let csv = stdout(&["density", "--capacity", "0.5", "--epsilon", "0.01", "--t", "4.33,5.68"]);
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let deltas: Vec<f64> = r.records().map(|x| x.unwrap()[3].parse().unwrap()).collect();
    assert!((deltas[0] - 13.16).abs() <= 0.01);
    assert!((deltas[1] - 17.27).abs() <= 0.01);
}

#[test]
fn lower_inverse_degree_weights_give_the_union() {
    let csv = stdout(&["lower", "--bound", "cohen-merhav", "--events", &data("events.json")]);
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let rec = r.records().next().unwrap().unwrap();
    let value: f64 = rec[1].parse().unwrap();
    assert!((value - 0.8).abs() < 1e-12);
}

#[test]
fn lower_bounds_for_a_code() {
    let csv = stdout(&["lower", "--bound", "decaen,cohen-merhav", "--code", &data("hamming74.txt"), "--ebno", "1:3:1"]);
    let rows = rows(&csv);
    assert_eq!(rows.len(), 6);
    for pair in rows.chunks(2) {
        assert!(pair[1].2 >= pair[0].2);
    }
}

#[test]
fn exit_codes_follow_error_classes() {
    let code = data("hamming74.txt");
    assert_eq!(mlbound(&["upper", "--bounds", "nope", "--code", &code, "--ebno-db", "1"]).status.code(), Some(2));
    assert_eq!(mlbound(&["upper", "--bounds", "tsb", "--code", &code, "--channel", "bsc", "--p", "0.1"]).status.code(), Some(2));
    assert_eq!(mlbound(&["upper", "--bounds", "union", "--code", "/nonexistent", "--ebno-db", "1"]).status.code(), Some(2));
    assert_eq!(mlbound(&["oracle", "--code", &code, "--method", "mc", "--ebno-db", "1"]).status.code(), Some(2));
    // A (40, 20) code is beyond the exhaustive oracles.
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.txt");
    let mut text = String::from("40 20\n");
    for i in 0..20 {
        let row: String = (0..40).map(|j| if j == i || j == i + 20 || (j >= 20 && (i + j) % 3 == 0) { '1' } else { '0' }).collect();
        text.push_str(&row);
        text.push('\n');
    }
    std::fs::write(&big, text).unwrap();
    let out = mlbound(&["oracle", "--code", big.to_str().unwrap(), "--method", "mc", "--ebno-db", "1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn outputs_are_reproducible_and_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_mlbound"))
            .env("MLBOUND_THREADS", threads)
            .args(["upper", "--bounds", "union,ds2,tsb", "--code", &data("hamming74.txt"), "--ebno", "1:3:1", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        let meta = std::fs::read_to_string(dir.path().join(format!("{name}.meta.json"))).unwrap();
        (std::fs::read(&out).unwrap(), meta)
    };
    let (a, meta_a) = run("a.csv", "1");
    let (b, meta_b) = run("b.csv", "2");
    assert_eq!(a, b);
    assert_eq!(meta_a, meta_b);
    let meta: serde_json::Value = serde_json::from_str(&meta_a).unwrap();
    assert_eq!(meta["curves"][2]["metadata"]["slice_clip"], true);
}

#[test]
fn monte_carlo_oracle_is_thread_independent() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_mlbound"))
            .env("MLBOUND_THREADS", threads)
            .args(["oracle", "--code", &data("hamming74.txt"), "--method", "mc", "--ebno-db", "2", "--samples", "50000", "--seed", "9"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn spectrum_files_feed_the_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("h.json");
    stdout(&["spectrum", "--code", &data("hamming74.txt"), "--out", spec.to_str().unwrap()]);
    let from_file = stdout(&["upper", "--bounds", "union", "--spectrum", spec.to_str().unwrap(), "--ebno-db", "2"]);
    let from_code = stdout(&["upper", "--bounds", "union", "--code", &data("hamming74.txt"), "--ebno-db", "2"]);
    assert_eq!(from_file, from_code);
}

#[test]
fn ensemble_pipeline_at_small_length() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("t16.json");
    stdout(&["turbo-iowef", "--ensemble", &data("turbo_n16.toml"), "--out", w.to_str().unwrap()]);
    let weights: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(weights["n"], 3 * 16 + 4 * 4);
    assert_eq!(weights["metadata"]["complete"], true);
    let csv = stdout(&["upper", "--bounds", "union,tsb", "--spectrum", w.to_str().unwrap(), "--ebno", "2:4:1"]);
    for pair in rows(&csv).chunks(2) {
        assert!(pair[1].2 <= pair[0].2);
    }
    let conv = stdout(&["conv-iowef", "--component", &data("rsc_37_21.toml"), "--length", "8"]);
    let conv: serde_json::Value = serde_json::from_str(&conv).unwrap();
    assert_eq!(conv["convention"], "parity");
}

#[test]
fn exact_bsc_oracle() {
    let csv = stdout(&["oracle", "--code", &data("hamming74.txt"), "--method", "exact", "--channel", "bsc", "--p", "0.05"]);
    let rows = rows(&csv);
    assert!((rows[0].2 - 0.0443).abs() < 1e-3);
}
