use std::path::PathBuf;
use std::process::{Command, Output};

fn mafia_odds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mafia-odds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = mafia_odds(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("UTF-8 output")
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).expect("strict JSON")
}

#[test]
fn table_matches_golden_file() {
    assert_eq!(stdout(&["table", "--max-n", "10"]), golden("table_max_n_10.csv"));
}

#[test]
fn single_mafia_matches_golden_file() {
    assert_eq!(
        stdout(&["single-mafia", "--max-n", "20"]),
        golden("single_mafia_max_n_20.csv")
    );
}

#[test]
fn simulate_matches_golden_file() {
    let args = [
        "simulate", "-n", "9", "-m", "1", "--trials", "10000", "--seed", "42",
    ];
    assert_eq!(stdout(&args), golden("simulate_9_1_seed_42.csv"));
}

#[test]
fn simulate_ignores_thread_cap() {
    let args = [
        "simulate", "-n", "7", "-m", "2", "--trials", "5000", "--seed", "3",
    ];
    let capped = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_mafia-odds"))
            .args(args)
            .env("MAFIA_ODDS_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(capped("1"), capped("0"));
    assert_eq!(capped("1"), capped("3"));
    let bad = Command::new(env!("CARGO_BIN_EXE_mafia-odds"))
        .args(args)
        .env("MAFIA_ODDS_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn winchance_record() {
    let out = stdout(&["winchance", "--players", "9", "--mafia", "1"]);
    assert!(out.contains(",128,315,0.406349206349\n"), "{out}");
    let out = stdout(&["winchance", "--players", "5", "--mafia", "0"]);
    assert!(out.lines().nth(1).unwrap().ends_with(",0,1,0"));

    let record = json(&["winchance", "-n", "9", "-m", "1", "--method", "closed"]);
    assert_eq!(record["w_num"], "128");
    assert_eq!(record["w_den"], "315");
    assert_eq!(record["w_float"], 128.0 / 315.0);
    assert_eq!(record["method"], "closed");

    let record = json(&["winchance", "-n", "100", "-m", "1", "--method", "asymptotic"]);
    assert!(record["w_num"].is_null());
    assert!((record["w_float"].as_f64().unwrap() - 0.0798).abs() < 1e-4);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| mafia_odds(args).status.code();
    assert_eq!(code(&["winchance", "--players", "5", "--mafia", "6"]), Some(2));
    assert_eq!(
        code(&["winchance", "-n", "5", "-m", "1", "--method", "guess"]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "winchance",
            "-n",
            "4",
            "-m",
            "2",
            "--method",
            "closed",
            "--boundary",
            "ties"
        ]),
        Some(1)
    );
    assert_eq!(
        code(&["winchance", "-n", "4", "-m", "2", "--boundary", "ties"]),
        Some(0)
    );
    assert_eq!(code(&["table", "--max-n", "0"]), Some(2));
    assert_eq!(code(&["table"]), Some(2));
    assert_eq!(
        code(&["evolve", "-n", "4", "-m", "1", "--mode", "discrete", "--t-max", "2"]),
        Some(1)
    );
    assert_eq!(code(&["optimal", "--max-n", "1"]), Some(2));
    assert_eq!(
        code(&["simulate", "-n", "3", "-m", "1", "--trials", "0"]),
        Some(2)
    );
    assert_eq!(code(&["--format", "xml", "table", "--max-n", "2"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn every_stream_has_its_header() {
    let cases: [(&[&str], &str); 6] = [
        (
            &["winchance", "-n", "3", "-m", "1"],
            "n,m,method,boundary,w_num,w_den,w_float",
        ),
        (&["table", "--max-n", "2"], "n,m,w_num,w_den,w_float"),
        (
            &["single-mafia", "--max-n", "2"],
            "n,w_exact_num,w_exact_den,w_exact_float,approx_parity_aware",
        ),
        (&["evolve", "-n", "6", "-m", "1"], "mode,kind,t,m,value,num,den"),
        (&["optimal", "--max-n", "3"], "n,m_opt_numeric,m_opt_approx"),
        (
            &["simulate", "-n", "3", "-m", "1", "--trials", "10"],
            "n,m,trials,seed,mafia_wins,estimate,std_error",
        ),
    ];
    for (args, header) in cases {
        let out = stdout(args);
        assert_eq!(out.lines().next(), Some(header), "{args:?}");
        assert!(!out.contains('\r'));
        let width = header.split(',').count();
        assert!(out.lines().all(|l| l.split(',').count() == width), "{args:?}");
        // JSON of the same command parses strictly
        json(args);
    }
}

#[test]
fn table_json_is_an_array() {
    let rows = json(&["table", "--max-n", "3"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let two_one = rows.iter().find(|r| r["n"] == 2 && r["m"] == 1).unwrap();
    assert_eq!(
        (two_one["w_num"].as_str(), two_one["w_den"].as_str()),
        (Some("1"), Some("2"))
    );
}

#[test]
fn evolve_discrete_mean_column_is_the_product_formula() {
    let out = stdout(&[
        "evolve", "-n", "32", "-m", "4", "--mode", "discrete", "--t-max", "14",
    ]);
    let mut expected = (4u64, 1u64);
    for line in out.lines().filter(|l| l.starts_with("discrete,mean,")) {
        let f: Vec<&str> = line.split(',').collect();
        let t: u64 = f[2].parse().unwrap();
        let (num, den): (u128, u128) = (f[5].parse().unwrap(), f[6].parse().unwrap());
        if t > 0 {
            let alive = 32 - 2 * (t - 1);
            expected = (expected.0 * (alive - 1), expected.1 * alive);
        }
        // cross-multiply against the unreduced product
        assert_eq!(num * expected.1 as u128, den * expected.0 as u128, "t = {t}");
    }
}

#[test]
fn evolve_continuous_rows_are_normalized() {
    let rows = json(&["evolve", "-n", "32", "-m", "4", "--mode", "continuous"]);
    let mut mass = std::collections::BTreeMap::<String, f64>::new();
    for row in rows.as_array().unwrap().iter().filter(|r| r["kind"] == "p") {
        *mass.entry(row["t"].to_string()).or_default() += row["value"].as_f64().unwrap();
    }
    assert_eq!(mass.len(), 129);
    assert!(mass.values().all(|s| (s - 1.0).abs() < 1e-12));
}

#[test]
fn optimal_rows() {
    let out = stdout(&["optimal", "--max-n", "100"]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[1].starts_with("2,1,"));
    assert!(lines[2].starts_with("3,1,"));
    let last: Vec<&str> = lines.last().unwrap().split(',').collect();
    assert_eq!(last[0], "100");
    assert!((last[2].parse::<f64>().unwrap() - 6.27).abs() < 0.01);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("mafia-odds-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = mafia_odds(&["table", "--max-n", "10", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        golden("table_max_n_10.csv")
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
