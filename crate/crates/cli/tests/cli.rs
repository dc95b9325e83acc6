use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsallis-sep"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s:?}"))
}

#[test]
fn table1_blank_gamma1_for_two_parties() {
    let o = run(&["table1", "--d", "3", "--N", "2,3", "--q", "2", "--x", "0.3"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r[0].join(","), "d,N,gamma1,mult1,gamma2,mult2,gamma3,mult3");
    assert_eq!(r[1][2], "");
    assert_eq!(r[1][3], "0");
    for row in &r[1..] {
        let d: u64 = row[0].parse().unwrap();
        let n: u32 = row[1].parse().unwrap();
        let total: u64 = [3, 5, 7].iter().map(|&i| row[i].parse::<u64>().unwrap()).sum();
        assert_eq!(total, d.pow(n));
    }
}

#[test]
fn table1_near_q_one_recovers_global_spectrum() {
    let o = run(&["table1", "--d", "3", "--N", "3", "--q", "1.000000001", "--x", "0.1"]);
    let r = rows(&stdout(&o));
    let l1 = 0.9 / 27.0;
    let l2 = (1.0 + 26.0 * 0.1) / 27.0;
    assert!((num(&r[1][2]) - l1).abs() < 1e-8);
    assert!((num(&r[1][4]) - l1).abs() < 1e-8);
    assert!((num(&r[1][6]) - l2).abs() < 1e-8);
}

#[test]
fn table2_columns_agree() {
    let o = run(&["table2"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r[0].join(","), "d,N,x_threshold,formula");
    assert_eq!(r.len(), 17);
    for row in &r[1..] {
        assert!((num(&row[2]) - num(&row[3])).abs() <= 1e-10);
    }
    let find = |d: &str, n: &str| r.iter().find(|x| x[0] == d && x[1] == n).unwrap()[2].clone();
    assert!((num(&find("4", "3")) - 1.0 / 17.0).abs() < 1e-15);
    assert!((num(&find("5", "4")) - 1.0 / 126.0).abs() < 1e-15);
    assert!((num(&find("5", "5")) - 1.0 / 626.0).abs() < 1e-15);
}

#[test]
fn table2_ppt_oracle() {
    let o = run(&["table2", "--d", "2,3", "--N", "2", "--criterion", "ppt"]);
    assert!(o.status.success());
    for row in &rows(&stdout(&o))[1..] {
        assert!((num(&row[2]) - num(&row[3])).abs() <= 1e-8);
    }
}

#[test]
fn table3_values_and_ordering() {
    let o = run(&["table3"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r[0].join(","), "d,N,x_cstre,x_ar");
    let find = |d: &str, n: &str| r.iter().find(|x| x[0] == d && x[1] == n).unwrap().clone();
    let row = find("3", "4");
    assert!((num(&row[2]) - 0.3114).abs() < 1e-3 && (num(&row[3]) - 0.1889).abs() < 1e-3);
    let row = find("4", "5");
    assert!((num(&row[2]) - 0.2116).abs() < 1e-3 && (num(&row[3]) - 0.0623).abs() < 1e-3);
    for row in &r[1..] {
        assert!(num(&row[3]) <= num(&row[2]));
    }
}

#[test]
fn output_is_deterministic_across_jobs() {
    let a = stdout(&run(&["table3", "--jobs", "1"]));
    let b = stdout(&run(&["table3", "--jobs", "4"]));
    let c = stdout(&run(&["table3", "--jobs", "4"]));
    assert_eq!(a, b);
    assert_eq!(b, c);
    let a = stdout(&run(&["scan", "--d", "3", "--N", "4", "--points", "33", "--jobs", "1"]));
    let b = stdout(&run(&["scan", "--d", "3", "--N", "4", "--points", "33", "--jobs", "3"]));
    assert_eq!(a, b);
}

#[test]
fn writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t2.csv");
    let o = run(&["table2", "--d", "3", "--N", "4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("d,N,x_threshold,formula\n3,4,"));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("t2.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "table2");
    assert_eq!(manifest["parameters"]["d"], serde_json::json!([3]));
    assert_eq!(manifest["parameters"]["criterion"], "cstre_b");
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
    let stamp = manifest["timestamp"].as_str().unwrap();
    assert!(chrono::DateTime::parse_from_rfc3339(stamp).is_ok() && stamp.ends_with('Z'));
    assert_eq!(Path::new(manifest["output_files"][0].as_str().unwrap()), out);
    // No temporary files left behind.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "x_tol = 1e-4\njobs = 2\n").unwrap();
    let out = dir.path().join("t3.csv");
    let args = [
        "table3",
        "--d",
        "3",
        "--N",
        "3",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    assert!(run(&args).status.success());
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("t3.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["parameters"]["x_tol"], 1e-4);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--x-tol", "1e-9"]);
    assert!(run(&with_flag).status.success());
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("t3.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["parameters"]["x_tol"], 1e-9);

    std::fs::write(&cfg, "unknown = 1\n").unwrap();
    assert_eq!(run(&args).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["curve", "--d", "3", "--N", "4", "--q-min", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["curve", "--d", "3", "--N", "4", "--q-min", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["table2", "--d", "1"]).status.code(), Some(2));
    assert_eq!(run(&["table1", "--x", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["table3", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["table2", "--criterion", "vn"]).status.code(), Some(2));
    // x = 1 with q > 1 hits the singular marginal block for N >= 3.
    let o = run(&["scan", "--d", "3", "--N", "3", "--points", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().last().unwrap().ends_with(",singular_negative_power"));
}

#[test]
fn never_negative_criterion_is_not_a_failure() {
    // At very small q both criteria stay positive on all of [0, 1).
    let o = run(&["table3", "--d", "3", "--N", "3", "--q", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().nth(1).unwrap(), "3,3,no_sign_change,no_sign_change");
}

#[test]
fn curve_is_monotone_and_ordered() {
    let o = run(&[
        "curve", "--d", "3", "--N", "5", "--q-min", "1", "--q-max", "1000", "--points", "12",
    ]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r[0].join(","), "q,x_star");
    let qs: Vec<f64> = r[1..].iter().map(|x| num(&x[0])).collect();
    let xs: Vec<f64> = r[1..].iter().map(|x| num(&x[1])).collect();
    assert!(qs.windows(2).all(|w| w[0] < w[1]));
    assert!(xs.windows(2).all(|w| w[0] >= w[1]));
    assert!(xs.iter().all(|&x| x > 1.0 / 82.0));
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--dense-limit", "64"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 7);
}
