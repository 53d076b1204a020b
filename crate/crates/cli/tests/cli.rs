use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn frobtest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobtest"))
        .args(args)
        .output()
        .unwrap()
}

/// Two dense halves joined by a single edge.
fn write_two_block(path: &Path, n: usize) {
    let half = n / 2;
    let mut rows = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && (i < half) == (j < half) && (i + j) % 3 != 0 {
                rows[i][j] = 1;
            }
        }
    }
    rows[0][n - 1] = 1;
    rows[n - 1][0] = 1;
    let text: Vec<String> = rows
        .iter()
        .map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(","))
        .collect();
    fs::write(path, text.join("\n")).unwrap();
}

#[test]
fn test_command_emits_result_record() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.csv");
    let h = dir.path().join("h.csv");
    write_two_block(&g, 20);
    write_two_block(&h, 14);
    let out = frobtest(&[
        "test",
        "--g",
        g.to_str().unwrap(),
        "--h",
        h.to_str().unwrap(),
        "--k",
        "2",
        "--d",
        "3",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["method"], "frobenius");
    assert!(v["statistic"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["config"]["n"], 14);
    assert!(v["diagnostics"]["sigma_dagger_sq"].is_number());
}

#[test]
fn errors_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "0,1\n0,0").unwrap();
    let out = frobtest(&[
        "test",
        "--g",
        bad.to_str().unwrap(),
        "--h",
        bad.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert!(!out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "malformed-matrix");

    let out = frobtest(&[
        "simulate",
        "--config",
        dir.path().join("missing.toml").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "io");
}

#[test]
fn simulate_and_sweep_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.toml");
    fs::write(
        &cfg,
        "n_g = 30\nn_h = 20\nm = 2\nk = [1, 2]\np = 0.3\nq = 0.1\nd_values = 2\nreplicates = 5\nseed = 1\n",
    )
    .unwrap();
    let out = frobtest(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("method,n_g,n_h,d,k,epsilon"));

    let sweep = dir.path().join("sweep.toml");
    fs::write(
        &sweep,
        "sizes = [20, 30]\nm = 2\nk = 2\np = 0.3\nq = 0.1\nd = 2\nreplicates = 4\n",
    )
    .unwrap();
    let out = frobtest(&["sweep", "--config", sweep.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // 2 sizes x 2 methods x (null, alternative) + header.
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 9);
}

#[test]
fn detect_k_reports_rounds() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    write_two_block(&a, 30);
    let out = frobtest(&[
        "detect-k",
        "--inputs",
        a.to_str().unwrap(),
        a.to_str().unwrap(),
        "--kmax",
        "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let k = v["k"].as_u64().unwrap();
    assert!((1..=3).contains(&k));
    assert_eq!(v["rounds"].as_array().unwrap().len() as u64, k);
}

#[test]
fn pipeline_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let mut series = String::new();
    for i in 0..12 {
        let row: Vec<String> = (0..10)
            .map(|t| {
                let factor = if i < 6 {
                    (t as f64).sin()
                } else {
                    (t as f64 * 0.7).cos()
                };
                format!("{:.4}", factor + 0.3 * ((i * 7 + t * 3) % 5) as f64)
            })
            .collect();
        series.push_str(&row.join(","));
        series.push('\n');
    }
    fs::write(dir.path().join("s1.csv"), &series).unwrap();
    let manifest = dir.path().join("manifest.toml");
    fs::write(
        &manifest,
        r#"
conditions = ["stimulus-1", "stimulus-2", "control"]
[config]
d = 2
order_bootstraps = 10
[[subject]]
name = "s1"
files = { stimulus-1 = "s1.csv", stimulus-2 = "s1.csv", control = "s1.csv" }
"#,
    )
    .unwrap();
    let out = frobtest(&["pipeline", "--manifest", manifest.to_str().unwrap(), "--density", "0.4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "subject,k_hat,pair,T,z,p_value,decision,stars,error");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("s1,"));

    let out = frobtest(&["pipeline", "--manifest", manifest.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn help_documents_defaults() {
    let out = frobtest(&["test", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[default: 10]"));
    assert!(text.contains("[default: 0.05]"));
}
