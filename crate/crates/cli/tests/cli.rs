use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const REFERENCE: &str = r#"{"structure": "disjoint", "m_l": 2, "n_c": 4, "m_r": 3, "j_zz": 3.0,
  "grid": {"t_min": 0.0, "t_max": 1.0, "steps": 21}}"#;

const SMALL_TOML: &str = r#"structure = "disjoint"
m_l = 1
n_c = 5
m_r = 2
j_zz = 3.0

[grid]
t_min = 0.0
t_max = 1.0
steps = 11
"#;

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anticross"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn experiment(name: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        name,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn spectrum_shape_units_and_line_endings() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "ref.json", REFERENCE);
    let out = dir.path().join("out");
    let o = experiment("spectrum", &cfg, &out, &["--grid", "400", "--k", "6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let (header, rows) = read_csv(&out.join("spectrum.csv"));
    assert_eq!(rows.len(), 400);
    assert_eq!(header.len(), 1 + 1 + 6 * 2);
    assert_eq!(header[0], "t [1]");
    assert!(header.iter().skip(1).all(|h| h.ends_with("[w]")));
    assert!(rows.iter().all(|r| r.len() == header.len()));

    let bytes = std::fs::read(out.join("spectrum.csv")).unwrap();
    assert!(!bytes.contains(&b'\r'));
    assert_eq!(bytes.last(), Some(&b'\n'));
    assert!(out.join("bare.csv").is_file());
}

#[test]
fn sidecar_echoes_instance_and_version() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "ref.json", REFERENCE);
    let out = dir.path().join("out");
    assert!(experiment("blockproj", &cfg, &out, &[]).status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("blockproj.json")).unwrap())
            .unwrap();
    assert_eq!(meta["tool"], "anticross");
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert!(meta["created_unix_seconds"].as_u64().unwrap() > 0);
    assert_eq!(meta["instance"]["m_l"], 2);
    assert_eq!(meta["instance"]["w"], 1.0);
    assert_eq!(meta["experiment"], "blockproj");
    assert_eq!(meta["rows"], 21);
}

#[test]
fn identical_configs_give_identical_bodies() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "ref.json", REFERENCE);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for exp in ["spectrum", "blockproj", "gevp"] {
        assert!(experiment(exp, &cfg, &a, &[]).status.success());
        assert!(experiment(exp, &cfg, &b, &[]).status.success());
    }
    for f in ["spectrum.csv", "bare.csv", "blockproj.csv", "gevp.csv"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn missing_levels_are_written_as_nan() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL_TOML);
    let out = dir.path().join("out");
    assert!(experiment("spectrum", &cfg, &out, &["--k", "8"])
        .status
        .success());
    let (header, rows) = read_csv(&out.join("spectrum.csv"));
    // H_core of (1, 5, 2) has four levels.
    let e7 = column(&header, "E7_core [w]");
    let e3 = column(&header, "E3_core [w]");
    assert!(rows.iter().all(|r| r[e7] == "nan"));
    assert!(rows
        .iter()
        .all(|r| r[e3].parse::<f64>().unwrap().is_finite()));
}

#[test]
fn gapscan_locates_the_core_minimum() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "ref.json", REFERENCE);
    let out = dir.path().join("out");
    let o = experiment("gapscan", &cfg, &out, &["--full-oracle-max-n", "10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let (header, rows) = read_csv(&out.join("gapscan_minima.csv"));
    let x = column(&header, "x [w]");
    let core = rows.iter().find(|r| r[0] == "core").unwrap();
    let x_core: f64 = core[x].parse().unwrap();
    // Independent dense scan of H_core places the minimum at x = 1.314005.
    assert!((x_core - 1.314005388676891).abs() < 0.1, "{x_core}");
    let full = rows.iter().find(|r| r[0] == "full").unwrap();
    assert_eq!(full[4], "skipped");

    let (header, rows) = read_csv(&out.join("gapscan.csv"));
    let g = column(&header, "gap_full [w]");
    assert!(rows.iter().all(|r| r[g] == "nan"));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("gapscan.json")).unwrap()).unwrap();
    assert_eq!(meta["extra"]["policy"]["full"], "skipped");
    let x_c = meta["extra"]["two_level_estimate"]["x_c"].as_f64().unwrap();
    assert!((x_c - 1.5649215928719031).abs() < 1e-9);
}

#[test]
fn gapscan_small_instance_runs_every_member() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL_TOML);
    let out = dir.path().join("out");
    assert!(experiment("gapscan", &cfg, &out, &[]).status.success());
    let (_, rows) = read_csv(&out.join("gapscan_minima.csv"));
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[4] != "skipped"));
}

#[test]
fn verify_passes_on_reference() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "ref.json", REFERENCE);
    let out = dir.path().join("out");
    let o = experiment("verify", &cfg, &out, &["--grid", "11"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let (header, rows) = read_csv(&out.join("verify.csv"));
    let s = column(&header, "status");
    assert!(rows.iter().all(|r| r[s] == "pass"), "{rows:?}");
}

#[test]
fn verify_skips_crossing_suites_outside_the_regime() {
    let dir = TempDir::new().unwrap();
    let body = SMALL_TOML.replace("m_r = 2", "m_r = 1");
    let cfg = write_config(dir.path(), "nocross.toml", &body);
    let out = dir.path().join("out");
    assert_eq!(experiment("verify", &cfg, &out, &[]).status.code(), Some(0));
    let (_, rows) = read_csv(&out.join("verify.csv"));
    let crossing = rows.iter().find(|r| r[0] == "bare_crossing").unwrap();
    assert_eq!(crossing[4], "skip");
}

#[test]
fn gevp_rows_cover_every_lambda() {
    let dir = TempDir::new().unwrap();
    let body = REFERENCE.replace("\"j_zz\": 3.0,", "\"j_zz\": 3.0, \"lambda_steps\": 5,");
    let cfg = write_config(dir.path(), "ref.json", &body);
    let out = dir.path().join("out");
    assert!(experiment("gevp", &cfg, &out, &["--grid", "7"])
        .status
        .success());
    let (header, rows) = read_csv(&out.join("gevp.csv"));
    assert_eq!(rows.len(), 7 * 5);
    assert_eq!(header.len(), 3 + 2 + 3 + 2);
}

#[test]
fn scaling_table_and_fit() {
    let dir = TempDir::new().unwrap();
    let body = REFERENCE.replace(
        "\"j_zz\": 3.0,",
        "\"j_zz\": 3.0, \"family_m_l\": [2, 3, 4],",
    );
    let cfg = write_config(dir.path(), "ref.json", &body);
    let out = dir.path().join("out");
    assert!(experiment("scaling", &cfg, &out, &[]).status.success());
    let (header, rows) = read_csv(&out.join("scaling.csv"));
    assert_eq!(rows.len(), 3);
    let size = column(&header, "size");
    assert_eq!(
        rows.iter().map(|r| r[size].as_str()).collect::<Vec<_>>(),
        ["5", "7", "9"]
    );
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("scaling.json")).unwrap()).unwrap();
    assert!(meta["extra"]["fit"]["slope"].as_f64().unwrap() < 0.0);
}

#[test]
fn bundle_requires_artifacts_then_references_columns() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "ref.json", REFERENCE);
    let out = dir.path().join("out");
    std::fs::create_dir_all(&out).unwrap();
    let o = run(&["bundle", "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing artifact"));

    for exp in ["spectrum", "blockproj", "scaling"] {
        assert!(experiment(exp, &cfg, &out, &[]).status.success());
    }
    let o = run(&["bundle", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let figs = manifest["figures"].as_array().unwrap();
    let by_name = |n: &str| figs.iter().find(|f| f["name"] == n).unwrap();
    let overlay = by_name("energy_overlay");
    assert_eq!(overlay["series"][0]["csv"], "spectrum.csv");
    assert!(overlay["columns"][0]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c == "E0_core [w]"));
    assert_eq!(
        by_name("block_projection")["series"][0]["csv"],
        "blockproj.csv"
    );
    let crossing = by_name("crossing_vs_anticrossing");
    assert_eq!(crossing["series"][0]["csv"], "bare.csv");
    assert_eq!(crossing["series"][1]["csv"], "spectrum.csv");
}

#[test]
fn invalid_inputs_exit_with_an_error() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let bad = write_config(
        dir.path(),
        "bad.json",
        r#"{"structure": "disjoint", "m_l": 0, "n_c": 4, "m_r": 3, "j_zz": 3.0}"#,
    );
    let o = experiment("spectrum", &bad, &out, &[]);
    assert_eq!(o.status.code(), Some(2));

    let cfg = write_config(dir.path(), "ref.json", REFERENCE);
    assert_eq!(
        experiment("spectrum", &cfg, &out, &["--grid", "1"])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("absent.json");
    assert_eq!(
        experiment("spectrum", &missing, &out, &[]).status.code(),
        Some(2)
    );
}
