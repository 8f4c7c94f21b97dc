use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xyz-ring")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8")
}

/// Rows as `f64` cells keyed by header name.
fn table(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| match c {
                    "true" => 1.0,
                    "false" => 0.0,
                    other => other.parse().unwrap(),
                })
                .collect()
        })
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn sweep_worked_row() {
    let (h, rows) = table(&stdout(&["sweep", "--n", "4", "--g-min", "0", "--g-max", "1", "--g-steps", "3", "--check"]));
    assert_eq!(h.join(","), "g,N,u,mx,Gx,Gy,Gz,C");
    let r = &rows[1];
    assert!((r[col(&h, "g")] - 1.0 / 3.0).abs() < 1e-14);
    for (name, want) in [("mx", 10.0 / 17.0), ("Gx", 8.0 / 17.0), ("Gy", -3.0 / 17.0), ("Gz", 12.0 / 17.0), ("u", 0.5)] {
        assert!((r[col(&h, name)] - want).abs() < 1e-14, "{name}");
    }
}

#[test]
fn sweep_identity_and_ghz_point() {
    let (h, rows) = table(&stdout(&["sweep", "--n", "8", "--g-min", "0", "--g-max", "2", "--g-steps", "20"]));
    for r in &rows {
        assert!((r[col(&h, "Gx")] + r[col(&h, "Gy")] + r[col(&h, "Gz")] - 1.0).abs() < 1e-12);
    }
    let (h, rows) = table(&stdout(&["sweep", "--n", "6", "--g-min", "1", "--g-max", "1", "--g-steps", "1"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][col(&h, "C")], 0.0);
}

#[test]
fn csv_format_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let base = ["sweep", "--n-list", "4,6,9", "--g-min", "-2", "--g-max", "3", "--g-steps", "37"];
    for (path, workers) in [(&a, "1"), (&b, "4")] {
        let mut args = base.to_vec();
        args.extend(["--workers", workers, "--output", path.to_str().unwrap()]);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(!text.contains('\r') && text.ends_with('\n'));
    for cell in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let mantissa: String = cell.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect();
        assert!(mantissa.trim_start_matches('0').len() <= 15, "{cell}");
    }
}

#[test]
fn figure1_examples() {
    let (h, rows) = table(&stdout(&["figure1", "--g-min", "0", "--g-max", "2", "--g-steps", "2"]));
    assert_eq!(h.join(","), "g,N6,N7,N8,N9,N10,N20,N30,N40,N50,limit");
    assert!(rows[0].iter().all(|&v| v == 0.0));
    let g1 = &rows[1];
    let limit = 2.0 * (-1.0_f64).exp() / 1.0_f64.cosh();
    assert!(g1[col(&h, "N6")] > g1[col(&h, "N50")]);
    assert!((g1[col(&h, "limit")] - limit).abs() < 1e-14);
}

#[test]
fn figure2_examples() {
    let args = ["figure2", "--g-min", "0", "--g-max", "0.5", "--g-steps", "1", "--n-list", "4,16"];
    let (h, rows) = table(&stdout(&args));
    assert_eq!(h.join(","), "g,mx_N4,mx_N16,mx_limit,mx_inverted_limit");
    assert_eq!((rows[0][1], rows[0][2]), (1.0, 1.0));
    assert!((rows[1][col(&h, "mx_limit")] - 1.0 / 3.0).abs() < 1e-14);
    assert!((rows[1][col(&h, "mx_inverted_limit")] - 3.0).abs() < 1e-14);

    let mut flipped = args.to_vec();
    flipped.extend(["--epsilon", "-1"]);
    let (_, neg) = table(&stdout(&flipped));
    for (a, b) in rows.iter().flatten().zip(neg.iter().flatten()).filter(|(a, _)| **a != 0.0) {
        assert!(*a == -*b || *a == *b, "{a} vs {b}");
    }
    assert_eq!(neg[1][1], -rows[1][1]);
}

#[test]
fn ed_compare_examples() {
    let energy = |extra: &[&str]| {
        let mut args = vec!["ed-compare", "--n", "6", "--g-min", "0.5", "--g-max", "0.5", "--g-steps", "1"];
        args.extend_from_slice(extra);
        let (h, rows) = table(&stdout(&args));
        assert_eq!(rows.len(), 1);
        assert!(rows[0][col(&h, "residual")] < 1e-10);
        assert_eq!(rows[0][col(&h, "pass")], 1.0);
        rows[0][col(&h, "ed_energy")]
    };
    let base = energy(&["--epsilon", "1", "--eta", "1"]);
    assert!((base + 9.75).abs() < 1e-9);
    assert!((energy(&["--epsilon", "1", "--eta", "-1"]) - base).abs() < 1e-9);
    assert!((energy(&["--epsilon", "-1", "--eta", "1"]) - base).abs() < 1e-9);
}

#[test]
fn verify_default_passes_with_coverage() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let records: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let coverage = records.iter().find(|r| r["check"] == "operation-coverage").unwrap();
    assert_eq!(coverage["status"], "pass");
    assert!(String::from_utf8_lossy(&out.stderr).contains("OK"));
}

#[test]
fn verify_skips_singular_point() {
    let out = run(&["verify", "--n", "4", "--g-min", "-1", "--g-max", "-1", "--g-steps", "1", "--eta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let skipped = text.lines().filter(|l| l.contains("\"singular parameter\"")).count();
    assert_eq!(skipped, 2);
    assert!(text.contains("\"check\":\"ed-ground-energy\""));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--eta", "-1", "--n", "5"]).status.code(), Some(2));
    assert_eq!(run(&["ed-compare", "--n", "13"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--g-min", "2", "--g-max", "1"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--epsilon", "0"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--g-steps", "0"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--output", "/nonexistent-dir/x.csv"]).status.code(), Some(2));
    let tight = run(&["verify", "--n", "4", "--g-steps", "2", "--tolerance", "1e-300"]);
    assert_eq!(tight.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&tight.stderr).contains("FAIL"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"n": 6, "g_min": 0.5, "g_max": 0.5, "g_steps": 1}"#).unwrap();
    let path = cfg.to_str().unwrap();
    let (h, rows) = table(&stdout(&["sweep", "--config", path]));
    assert_eq!(rows[0][col(&h, "N")], 6.0);
    let (h, rows) = table(&stdout(&["sweep", "--config", path, "--n", "4"]));
    assert_eq!(rows[0][col(&h, "N")], 4.0);

    std::fs::write(&cfg, r#"{"n": 6, "colour": "blue"}"#).unwrap();
    assert_eq!(run(&["sweep", "--config", path]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"eta": -1, "n": 7}"#).unwrap();
    assert_eq!(run(&["verify", "--config", path]).status.code(), Some(2));
}
