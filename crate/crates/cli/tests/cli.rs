use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const FIVE_ZONE_GRAPH: &str = r#"zones = [1, 2, 3, 4, 5]

[[edges]]
a = 1
b = 5
interval = { lower = 0.0134, upper = 2.026 }
distribution = { midpoints = [1.0197], probabilities = [1.0] }

[[edges]]
a = 2
b = 4
interval = { lower = 0.0013, upper = 0.136 }
distribution = { midpoints = [0.0687], probabilities = [1.0] }

[[edges]]
a = 3
b = 5
interval = { lower = 0.0148, upper = 2.36 }
distribution = { midpoints = [1.1874], probabilities = [1.0] }

[[edges]]
a = 4
b = 5
interval = { lower = 0.0171, upper = 1.79 }
distribution = { midpoints = [0.9036], probabilities = [1.0] }
"#;

const FIVE_ZONE_ROWS: &str = "label,n,u_tot,yv_ave,yv_max,fault_u_tot,fault_yv_ave,fault_yv_max
\"{1,2,3,4,5}\",1,58.9649,0,0,58.7341,0.1608,2.0582
\"{1,3,5},{2,4}\",2,58.8276,0.0036,0.0382,58.6496,0.1587,1.9275
";

fn zonepart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonepart")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn header_value(text: &str, key: &str) -> String {
    text.lines()
        .filter_map(|l| l.strip_prefix(&format!("# {key} ")))
        .find(|v| !v.starts_with("objective "))
        .unwrap_or_else(|| panic!("no `{key}` header in\n{text}"))
        .to_string()
}

fn write_graph(dir: &Path) -> String {
    let p = dir.join("graph.toml");
    fs::write(&p, FIVE_ZONE_GRAPH).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn partition_all_n_writes_one_file_per_count() {
    let dir = TempDir::new().unwrap();
    let graph = write_graph(dir.path());
    let out = dir.path().join("parts");
    let o = zonepart(&["partition", "--graph", &graph, "--all-n", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for n in 1..=5 {
        assert!(out.join(format!("partition-n{n}.txt")).exists(), "n = {n}");
    }
    let n1 = fs::read_to_string(out.join("partition-n1.txt")).unwrap();
    assert_eq!(header_value(&n1, "objective").parse::<f64>().unwrap(), 0.0);
    let n2 = fs::read_to_string(out.join("partition-n2.txt")).unwrap();
    assert_eq!(header_value(&n2, "normalized"), "{1,3,4,5},{2}");
    assert!((header_value(&n2, "objective").parse::<f64>().unwrap() - 0.0687).abs() < 1e-9);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("partitions.json")).unwrap()).unwrap();
    assert_eq!(summary.as_array().unwrap().len(), 5);
}

#[test]
fn robust_two_clusters_cost_the_interval_upper_end() {
    let dir = TempDir::new().unwrap();
    let graph = write_graph(dir.path());
    let out = dir.path().join("robust");
    let o = zonepart(&["partition", "--graph", &graph, "--mode", "robust", "--n", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(out.join("partition-n2.txt")).unwrap();
    assert!((header_value(&text, "objective").parse::<f64>().unwrap() - 0.136).abs() < 1e-9);
    assert_eq!(header_value(&text, "normalized"), "{1,3,4,5},{2}");
    assert_eq!(header_value(&text, "mode"), "robust");
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let graph = write_graph(dir.path());
    let o = zonepart(&["partition", "--graph", &graph, "--n", "7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = zonepart(&["partition", "--graph", "/nonexistent/graph.toml", "--n", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("/nonexistent/graph.toml"));
    let o = zonepart(&["replay-metrics", "--input", "/nonexistent.csv", "--weights", "1,2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--weights"));
    let o = zonepart(&["quantify", "--nd", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn disconnected_building_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let building = dir.path().join("split.toml");
    fs::write(
        &building,
        r#"name = "split"

[[zones]]
id = 1
capacitance = 1e5
volume = 50.0
heat_max = 1000.0
cool_max = 1000.0

[[zones]]
id = 2
capacitance = 1e5
volume = 50.0
heat_max = 1000.0
cool_max = 1000.0

[[walls]]
a = 1
b = "ambient"
kind = "1r"
r = [0.1]
"#,
    )
    .unwrap();
    let o = zonepart(&["model", "--building", building.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("not connected"), "{}", stderr(&o));
}

#[test]
fn node_limit_exits_with_four() {
    let dir = TempDir::new().unwrap();
    let graph = write_graph(dir.path());
    let o = zonepart(&["partition", "--graph", &graph, "--n", "4", "--node-limit", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn model_reports_the_bundled_building() {
    let dir = TempDir::new().unwrap();
    let o = zonepart(&["model", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("model.json")).unwrap()).unwrap();
    assert_eq!(m["zones"].as_array().unwrap().len(), 5);
    let rho = m["spectral_radius"].as_f64().unwrap();
    assert!(rho > 0.0 && rho < 1.0);
}

#[test]
fn quantify_then_partition_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = zonepart(&["quantify", "--seed", "7", "--nd", "4", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("graph.toml")).unwrap();
    assert_eq!(header_value(&text, "root seed"), "7");
    assert_eq!(header_value(&text, "bins per edge"), "4");
    let again = TempDir::new().unwrap();
    let o2 = zonepart(&["quantify", "--seed", "7", "--nd", "4", "--out", again.path().to_str().unwrap()]);
    assert_eq!(code(&o2), 0);
    assert_eq!(text, fs::read_to_string(again.path().join("graph.toml")).unwrap());

    let graph = dir.path().join("graph.toml");
    let o = zonepart(&["partition", "--graph", graph.to_str().unwrap(), "--n", "3", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let part = fs::read_to_string(dir.path().join("partition-n3.txt")).unwrap();
    assert_eq!(header_value(&part, "root seed"), "7");
}

#[test]
fn replay_metrics_recomputes_published_rows() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("rows.csv");
    fs::write(&input, FIVE_ZONE_ROWS).unwrap();
    let o = zonepart(&["replay-metrics", "--input", input.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(dir.path().join("metrics.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let recs: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 2);
    let get = |r: &csv::StringRecord, name: &str| r[col(name)].parse::<f64>().unwrap();
    assert!((get(&recs[0], "fpm") - 57.026).abs() < 5e-3);
    assert!((get(&recs[0], "wpm") - 71.487).abs() < 5e-3);
    assert!((get(&recs[1], "odm") - 1.488).abs() < 5e-3);
    assert!((get(&recs[1], "wpm") - 71.767).abs() < 5e-3);
    assert_eq!(&recs[1][col("rank")], "1");
}

#[test]
fn evaluate_is_deterministic_and_reportable() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let run = |dir: &Path, extra: &[&str]| {
        let mut args = vec!["evaluate", "--n", "1", "--seed", "11", "--out", dir.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = zonepart(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        o
    };
    let o = run(a.path(), &["--single-thread"]);
    assert!(stdout(&o).contains("{1,2,3,4,5}"));
    assert!(stdout(&o).contains("calibration: centralized no-fault PI is the largest"));
    run(b.path(), &[]);
    for f in ["evaluation.json", "evaluation.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.path().join("evaluation.json")).unwrap()).unwrap();
    assert_eq!(report["seed"].as_u64(), Some(11));
    assert_eq!(report["rows"][0]["metrics"]["odm"].as_f64(), Some(0.0));

    let copy = TempDir::new().unwrap();
    let input = a.path().join("evaluation.json");
    let o = zonepart(&["report", "--input", input.to_str().unwrap(), "--out", copy.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("root seed 11"));
    assert_eq!(fs::read(copy.path().join("evaluation.csv")).unwrap(), fs::read(a.path().join("evaluation.csv")).unwrap());
}

#[test]
fn missing_disturbance_column_is_named() {
    let dir = TempDir::new().unwrap();
    let weather = dir.path().join("weather.csv");
    let mut text = String::from("timestamp,ambient_C\n");
    for k in 0..96 {
        text.push_str(&format!("2023-01-01T{:02}:{:02}:00,5\n", k / 4, (k % 4) * 15));
    }
    fs::write(&weather, text).unwrap();
    let o = zonepart(&["evaluate", "--n", "1", "--day", "0", "--weather", weather.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("weather.csv"), "{err}");
    assert!(err.contains("no column `solar_Wm2_"), "{err}");
}

#[test]
fn plain_formulation_reaches_the_same_optima() {
    let dir = TempDir::new().unwrap();
    let graph = write_graph(dir.path());
    let (ordered, plain) = (dir.path().join("ordered"), dir.path().join("plain"));
    let o = zonepart(&["partition", "--graph", &graph, "--all-n", "--out", ordered.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = zonepart(&["partition", "--graph", &graph, "--all-n", "--no-symmetry-breaking", "--out", plain.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for n in 1..=5 {
        let a = fs::read_to_string(ordered.join(format!("partition-n{n}.txt"))).unwrap();
        let b = fs::read_to_string(plain.join(format!("partition-n{n}.txt"))).unwrap();
        assert_eq!(header_value(&a, "symmetry breaking"), "on");
        assert_eq!(header_value(&b, "symmetry breaking"), "off");
        let obj = |t: &str| header_value(t, "normalized objective").parse::<f64>().unwrap();
        assert!((obj(&a) - obj(&b)).abs() < 1e-9, "n = {n}");
    }
}
