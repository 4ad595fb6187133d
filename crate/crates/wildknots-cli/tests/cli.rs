//! End-to-end checks of the command-line driver: outputs, exit codes and
//! byte-for-byte determinism.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wildknots"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir()
        .join("wildknots-cli-tests")
        .join(format!("{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn symmetric_config(dir: &PathBuf) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(
        &path,
        r#"{
  "ambient_dim": 3,
  "k": 3,
  "thread": "unit_circle",
  "thread_samples": 240,
  "beads": "auto",
  "reach": 1.0,
  "tolerance": 1e-9,
  "depth": 3
}"#,
    )
    .unwrap();
    path
}

#[test]
fn stage_counts_follow_the_growth_law() {
    let dir = workdir("stage");
    let cfg = symmetric_config(&dir);
    let out = bin()
        .args(["stage", "--config"])
        .arg(&cfg)
        .args(["--depth", "2", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.join("stage.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "stage,count,max_radius,min_gap");
    assert!(lines[1].starts_with("0,3,"));
    assert!(lines[2].starts_with("1,6,"));
    assert!(lines[3].starts_with("2,12,"));
}

#[test]
fn presentation_counts_match_the_sum_arithmetic() {
    let dir = workdir("presentation");
    let out = bin()
        .args(["presentation", "--knot", "trefoil", "--copies", "3", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = fs::read_to_string(dir.join("presentation.txt")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // generator line + 5 relators + meridian line
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0].split_whitespace().count(), 6);
}

#[test]
fn zero_winding_lift_keeps_the_sheet() {
    let dir = workdir("lift");
    // a closed loop far from the thread, written as a polyline file
    let mut poly = String::from("# polyline dim=3 closed=true\n");
    for i in 0..=64 {
        let phi = std::f64::consts::TAU * (i % 64) as f64 / 64.0;
        poly.push_str(&format!(
            "{} 0 {}\n",
            2.2 + 0.15 * phi.cos(),
            0.15 * phi.sin()
        ));
    }
    let path = dir.join("loop.txt");
    fs::write(&path, poly).unwrap();
    let out = bin()
        .args(["lift", "--q", "5", "--start-sheet", "2", "--path"])
        .arg(&path)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.join("lift.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x1,x2,x3,sheet");
    assert!(lines[1].ends_with(",2"));
    assert!(lines.last().unwrap().ends_with(",2"));
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = workdir("exit-codes");

    // 2: config parse error
    let bad = dir.join("bad.json");
    fs::write(&bad, "{").unwrap();
    let out = bin()
        .args(["validate", "--config"])
        .arg(&bad)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // 3: validation failure (one bead center off the thread)
    let off = dir.join("off.json");
    fs::write(
        &off,
        r#"{
  "k": 3,
  "thread": "unit_circle",
  "thread_samples": 240,
  "beads": [
    {"center": [1.0, 0.0, 0.001], "radius": 0.5},
    {"center": [-0.49999999999999978, 0.8660254037844387, 0.0], "radius": 0.5},
    {"center": [-0.50000000000000044, -0.86602540378443837, 0.0], "radius": 0.5}
  ]
}"#,
    )
    .unwrap();
    let out = bin()
        .args(["validate", "--config"])
        .arg(&off)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // 4: numeric fault (depth-0 partition sums cannot bracket a root)
    let cfg = symmetric_config(&dir);
    let out = bin()
        .args(["dimension", "--config"])
        .arg(&cfg)
        .args(["--depths", "0,1", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    // 2: depth above the hard cap
    let out = bin()
        .args(["limit-set", "--config"])
        .arg(&cfg)
        .args(["--depth", "13", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic_and_lane_independent() {
    let dir_a = workdir("det-a");
    let dir_b = workdir("det-b");
    let dir_c = workdir("det-c");
    let cfg = symmetric_config(&dir_a);

    for (dir, lanes) in [(&dir_a, "1"), (&dir_b, "1"), (&dir_c, "3")] {
        let out = bin()
            .args(["limit-set", "--config"])
            .arg(&cfg)
            .args(["--depth", "5", "--lanes", lanes, "--out-dir"])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = fs::read(dir_a.join("limit_set.txt")).unwrap();
    let b = fs::read(dir_b.join("limit_set.txt")).unwrap();
    let c = fs::read(dir_c.join("limit_set.txt")).unwrap();
    assert_eq!(a, b, "repeated runs differ");
    assert_eq!(a, c, "lane count changed the output");
    assert!(!a.is_empty());
}

#[test]
fn knot_mesh_roundtrips_through_the_polyline_format() {
    let dir = workdir("mesh");
    let cfg = symmetric_config(&dir);
    let out = bin()
        .args(["knot-mesh", "--config"])
        .arg(&cfg)
        .args(["--depth", "1", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.join("knot_mesh.txt")).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.contains("closed=true"));
    let vertex_lines = text.lines().filter(|l| !l.starts_with('#')).count();
    assert!(vertex_lines > 200);
}

#[test]
fn ends_census_rows_cover_every_bead() {
    let dir = workdir("ends");
    let out = bin()
        .args(["ends", "--q", "3", "--depth", "2", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.join("ends.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "address,components,decided");
    assert_eq!(lines.len(), 1 + 12); // k(k-1)^2 beads
    for row in &lines[1..] {
        assert!(row.ends_with(",1,true"));
    }
}
