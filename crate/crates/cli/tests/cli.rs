use serde_json::Value;
use std::process::{Command, Output};

fn gl3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gl3")).args(args).output().expect("run gl3")
}

fn json(args: &[&str]) -> Value {
    let out = gl3(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn rows(v: &Value) -> &Vec<Value> {
    v["rows"].as_array().unwrap()
}

#[test]
fn kloosterman_table() {
    let v = json(&["kloosterman", "--a", "1", "--b", "1", "--c-min", "1", "--c-max", "10"]);
    assert_eq!(v["schema_version"], 1);
    let r = rows(&v);
    assert_eq!(r.len(), 10);
    let s3 = &r[2];
    assert_eq!(s3["c"], 3);
    assert!((s3["re"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!(r.iter().all(|row| row["margin"].as_f64().unwrap() >= -1e-9));

    let empty = json(&["kloosterman", "--a", "1", "--b", "1", "--c-min", "5", "--c-max", "4"]);
    assert!(rows(&empty).is_empty());

    let csv = gl3(&["kloosterman", "--a", "2", "--b", "3", "--c-min", "1", "--c-max", "7", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 1 + 7);
}

#[test]
fn delta_rows_and_format_parity() {
    let v = json(&["delta", "--n-min", "-6", "--n-max", "6", "--q", "5"]);
    for row in rows(&v) {
        let (n, d) = (row["n"].as_i64().unwrap(), row["delta"].as_f64().unwrap());
        if n == 0 {
            assert!((d - 1.0).abs() < 1e-12);
        } else {
            assert!(d.abs() < 1e-9);
        }
    }
    let csv = String::from_utf8(gl3(&["delta", "--n-min", "-6", "--n-max", "6", "--q", "5", "--format", "csv"]).stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let hdr = rdr.headers().unwrap().clone();
    let col = hdr.iter().position(|h| h == "delta").unwrap();
    for (rec, row) in rdr.records().zip(rows(&v)) {
        let x: f64 = rec.unwrap()[col].parse().unwrap();
        let y = row["delta"].as_f64().unwrap();
        assert!((x - y).abs() <= 4.0 * f64::EPSILON * x.abs().max(y.abs()));
    }
}

#[test]
fn udagger_fit_and_support() {
    // on the ramp of U the residual decays like |r|^{-3/2}
    let v = json(&["udagger", "--x-star", "0.75"]);
    let e = v["meta"]["fit_exponent"].as_f64().unwrap();
    assert!((e + 1.5).abs() <= 0.2, "exponent {e}");
    // where U is flat the leading correction vanishes and the decay is faster
    let v = json(&["udagger", "--x-star", "1.5"]);
    assert!(v["meta"]["fit_exponent"].as_f64().unwrap() < -1.7);
    let v = json(&["udagger", "--seed", "3", "--samples", "2"]);
    assert_eq!(rows(&v).len(), 10);
    // x* = β/(2πr) = 4.77 lies outside supp U
    let out = json(&["udagger", "--r", "-40", "--beta", "-1200"]);
    let row = &rows(&out)[0];
    assert_eq!(row["in_support"], false);
    assert_eq!(row["main_re"].as_f64(), Some(0.0));
    assert_eq!(row["main_im"].as_f64(), Some(0.0));
}

#[test]
fn voronoi_refusals() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d3.txt");
    gl3_core::gl3::d3_table(300).write(&p).unwrap();
    let out = gl3(&["voronoi", "--table", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-cuspidal"));
    let out = gl3(&["voronoi", "--table", dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 1 one\n").unwrap();
    assert_eq!(gl3(&["voronoi", "--table", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn pipeline_identity_guard_and_timing() {
    let v = json(&["pipeline", "--n", "150", "--t", "12", "--q", "2"]);
    let row = &rows(&v)[0];
    let direct = (row["direct_re"].as_f64().unwrap().powi(2) + row["direct_im"].as_f64().unwrap().powi(2)).sqrt();
    assert!(row["residual"].as_f64().unwrap() <= 1e-6 * direct);
    assert!(v["meta"].get("runtime_s").is_none());
    let timed = json(&["pipeline", "--n", "150", "--t", "12", "--q", "2", "--timing"]);
    assert!(timed["meta"]["runtime_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(gl3(&["pipeline", "--n", "5000", "--t", "12", "--q", "2"]).status.code(), Some(3));
    assert_eq!(gl3(&["pipeline", "--n", "150", "--t", "12", "--q", "0"]).status.code(), Some(2));
}

#[test]
fn scan_rows_flags_and_reproducible_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = gl3(&["scan", "--t", "40", "--n-grid", "50,400,1500", "--seed", "9", "--output", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    let r = rows(&v);
    assert_eq!(r.len(), 3);
    assert_eq!(r[1]["clamped"], true);
    assert_eq!(r[2]["window_empty"], true);
    assert_eq!(v["meta"]["seed"], 9);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# scan settings\nt = 40\nn_grid = 50,100\nseed = 4\n").unwrap();
    let v = json(&["scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(rows(&v).len(), 2);
    assert_eq!(v["meta"]["seed"], 4);
    let v = json(&["scan", "--config", cfg.to_str().unwrap(), "--n-grid", "60"]);
    assert_eq!(rows(&v).len(), 1);
    assert_eq!(rows(&v)[0]["n"].as_f64(), Some(60.0));
    std::fs::write(&cfg, "t 40\n").unwrap();
    assert_eq!(gl3(&["scan", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gl3(&["kloosterman", "--a", "1"]).status.code(), Some(2));
    assert_eq!(gl3(&["nonsense"]).status.code(), Some(2));
    assert_eq!(gl3(&["kloosterman", "--a", "1", "--b", "1", "--c-min", "0"]).status.code(), Some(2));
}
