//! End-to-end tests of the qcorr binary: flag handling, exit codes,
//! CSV formats and byte-level reproducibility.

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

fn qcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcorr"))
        .args(args)
        .env_remove("QCORR_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_map(out: &Output) -> HashMap<String, String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter_map(|l| {
            let (k, v) = l.split_once(" = ")?;
            Some((k.to_string(), v.to_string()))
        })
        .collect()
}

fn value(map: &HashMap<String, String>, key: &str) -> f64 {
    map[key].parse().unwrap_or_else(|_| panic!("field {key}"))
}

fn read_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>, Vec<String>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut header = Vec::new();
    let mut rows = Vec::new();
    let mut comments = Vec::new();
    for line in text.lines() {
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
        } else if header.is_empty() {
            header = line.split(',').map(str::to_string).collect();
        } else {
            rows.push(line.split(',').map(|x| x.parse().unwrap()).collect());
        }
    }
    (header, rows, comments)
}

#[test]
fn state_maximally_mixed_reports_zeros() {
    let out = qcorr(&[
        "state", "--n", "3", "--f", "0.3333333333333333", "--fhat", "0.3333333333333333",
    ]);
    assert!(out.status.success());
    let map = stdout_map(&out);
    for key in ["lqu", "dg_lower", "min_upper", "scaled_discord_lower", "negativity"] {
        assert!(value(&map, key).abs() < 1e-12, "{key}");
    }
    assert_eq!(map["physical"], "true");
    assert_eq!(map["npt"], "false");
}

#[test]
fn state_werner_extremum_by_abc() {
    let out = qcorr(&["state", "--n", "3", "--b", "-0.16666666666666666", "--c", "0"]);
    assert!(out.status.success());
    let map = stdout_map(&out);
    assert!((value(&map, "lqu") - 0.5).abs() < 1e-10);
}

#[test]
fn state_rejects_nonphysical_with_named_constraint() {
    let out = qcorr(&["state", "--n", "3", "--f", "1.2", "--fhat", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("f <= 1 violated"), "{err}");
}

#[test]
fn state_rejects_mixed_parametrizations() {
    let out = qcorr(&["state", "--n", "3", "--f", "0.3", "--fhat", "0.3", "--b", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qcorr(&["state", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn state_with_oracles_agrees_with_closed_form() {
    let out = qcorr(&[
        "state", "--n", "3", "--b", "-0.10", "--c", "0", "--oracle", "--restarts", "12",
        "--seed", "5",
    ]);
    assert!(out.status.success());
    let map = stdout_map(&out);
    assert!((value(&map, "oracle_lqu") - value(&map, "lqu")).abs() < 1e-4);
    // at the Werner slice both bounds coincide and the oracles hit them
    assert!((value(&map, "oracle_gd") - value(&map, "dg_lower")).abs() < 1e-4);
    assert!((value(&map, "oracle_min") - value(&map, "min_upper")).abs() < 1e-4);
}

#[test]
fn fig2_endpoints() {
    let dir = tempdir();
    let path = dir.join("fig2.csv");
    let out = qcorr(&["figure", "fig2", "--grid", "100", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows, comments) = read_rows(&path);
    assert_eq!(header, vec!["b", "lqu"]);
    assert_eq!(rows.len(), 100);
    assert!(comments.iter().any(|c| c.starts_with("qcorr ")));
    assert!(comments.iter().any(|c| c.starts_with("seed:")));
    assert!(comments.iter().any(|c| c.starts_with("spec:")));
    // first row: b = -1/6, lqu = 1/2
    assert!((rows[0][0] + 1.0 / 6.0).abs() < 1e-12);
    assert!((rows[0][1] - 0.5).abs() < 1e-11);
    // b = 0 lies on the grid and gives lqu = 0
    let zero_row = rows
        .iter()
        .find(|r| r[0].abs() < 1e-13)
        .expect("b = 0 on grid");
    assert!(zero_row[1].abs() < 1e-11);
}

#[test]
fn fig3_reaches_two_thirds() {
    let dir = tempdir();
    let path = dir.join("fig3.csv");
    let out = qcorr(&["figure", "fig3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows, _) = read_rows(&path);
    assert_eq!(header, vec!["c", "lqu"]);
    let last = rows.last().unwrap();
    assert!((last[0] - 1.0 / 3.0).abs() < 1e-12);
    assert!((last[1] - 2.0 / 3.0).abs() < 1e-11);
}

#[test]
fn fig4_discord_dominates_squared_negativity() {
    let dir = tempdir();
    let path = dir.join("fig4.csv");
    let out = qcorr(&["figure", "fig4", "--grid", "60", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows, _) = read_rows(&path);
    assert_eq!(
        header,
        vec!["b", "dg_lower_norm", "dg_upper_norm", "dt_lower", "dt_upper", "negativity_sq"]
    );
    let mut npt_rows = 0;
    for row in &rows {
        let (b, dg_lower_norm, neg_sq) = (row[0], row[1], row[5]);
        assert!(row[1] <= row[2] + 1e-15);
        assert!(row[3] <= row[4] + 1e-15);
        if b < -1.0 / 18.0 {
            npt_rows += 1;
            assert!(neg_sq > 0.0);
            assert!(dg_lower_norm > neg_sq, "b={b}: {dg_lower_norm} vs {neg_sq}");
        }
    }
    assert!(npt_rows > 10);
}

#[test]
fn fig1_branch_signs() {
    let dir = tempdir();
    let path = dir.join("fig1.csv");
    let out = qcorr(&["figure", "fig1", "--grid", "31", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows, _) = read_rows(&path);
    assert_eq!(header, vec!["f", "fhat", "sign_b1c1"]);
    let mut seen = [false; 3];
    for row in &rows {
        match row[2] as i64 {
            -1 => seen[0] = true,
            0 => seen[1] = true,
            1 => seen[2] = true,
            other => panic!("unexpected sign {other}"),
        }
    }
    assert!(seen.iter().all(|&s| s), "all three sign classes occur");
}

#[test]
fn sweep_skips_nonphysical_corner_and_reproduces() {
    let dir = tempdir();
    let path1 = dir.join("sweep1.csv");
    let path2 = dir.join("sweep2.csv");
    for p in [&path1, &path2] {
        let out = qcorr(&[
            "sweep", "--n", "3", "--grid", "2", "--seed", "7", "--out", p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (_, rows, comments) = read_rows(&path1);
    // corners: (-1,0), (-1,3), (1,0), (1,3); only (-1,3) is unphysical
    assert_eq!(rows.len(), 3);
    assert!(comments.iter().any(|c| c == "skipped: 1"), "{comments:?}");
    // dg_lower <= min_upper on every row
    for row in &rows {
        assert!(row[3] <= row[4] + 1e-12);
    }
    let b1 = std::fs::read(&path1).unwrap();
    let b2 = std::fs::read(&path2).unwrap();
    assert_eq!(b1, b2, "same spec and seed must be byte-identical");
}

#[test]
fn figure_rejects_unknown_id() {
    let out = qcorr(&["figure", "fig9", "--out", "/tmp/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_path() {
    let out = qcorr(&["figure", "fig2", "--out", "/nonexistent-dir/f.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes_on_fresh_build() {
    let out = qcorr(&["selftest"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("checks passed"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qcorr-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
