use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclocorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or_default()
}

#[test]
fn generate_matches_worked_examples() {
    assert_eq!(
        first_line(&stdout(&["generate", "paley", "19"])),
        "0100111101010000110"
    );
    assert_eq!(
        first_line(&stdout(&["generate", "twinprime", "3"])),
        "111011001010000"
    );
    let hall = stdout(&["generate", "hall", "31", "--index", "0"]);
    assert_eq!(first_line(&hall), "0111101010001001110000011001011");
    assert!(hall.contains("v=31 k=15 lambda=7"));
    assert!(hall.contains("x=-2"));
    assert_eq!(
        first_line(&stdout(&["generate", "hall", "31", "--index", "3"])),
        "0110100110000011100100010101111"
    );
}

#[test]
fn generate_decimation_index() {
    assert_eq!(
        first_line(&stdout(&["generate", "paley", "19", "--index", "1"])),
        "0011000010101111001"
    );
}

#[test]
fn generate_json_and_csv() {
    let v = json(&["generate", "hall", "31", "--format", "json"]);
    assert_eq!(v["x"], -2);
    assert_eq!(v["alpha"], 3);
    assert_eq!(v["support"].as_array().unwrap().len(), 15);
    let csv = stdout(&["generate", "paley", "7", "--format", "csv"]);
    assert_eq!(csv, "i,bit\n0,0\n1,1\n2,1\n3,0\n4,1\n5,0\n6,0\n");
}

#[test]
fn json_output_is_stable() {
    let args = ["verify", "hall", "31..43", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
    let text = stdout(&args);
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn correlate_cross_table() {
    let csv = stdout(&[
        "correlate",
        "111011001010000",
        "100001010011011",
        "--format",
        "csv",
    ]);
    let values: Vec<i64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split_once(',').unwrap().1.parse().unwrap())
        .collect();
    assert_eq!(first_line(&csv), "w,value");
    assert_eq!(
        values,
        [-1, -5, -5, 3, -5, 7, 3, -1, -5, 3, 7, -1, 3, -1, -1]
    );
}

#[test]
fn correlate_auto_reports_perfection() {
    let out = stdout(&["correlate", "0100111101010000110"]);
    assert!(out.contains("perfect: true"));
    assert!(out.contains("histogram {-1:18,19:1}"));
    let v = json(&["correlate", "0011", "--format", "json"]);
    assert_eq!(v["perfect"], false);
    assert_eq!(v["spectrum"]["values"], serde_json::json!([4, 0, -4, 0]));
}

#[test]
fn correlate_reads_files() {
    let dir = std::env::temp_dir().join(format!("cyclocorr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.txt");
    std::fs::write(&path, "0100111101\n010000110\n").unwrap();
    let out = stdout(&["correlate", path.to_str().unwrap()]);
    assert!(out.contains("perfect: true"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn generated_sequences_are_perfect() {
    for (family, q) in [("paley", "43"), ("twinprime", "5"), ("hall", "43")] {
        let s = first_line(&stdout(&["generate", family, q])).to_string();
        assert!(
            stdout(&["correlate", &s]).contains("perfect: true"),
            "{family} {q}"
        );
    }
}

#[test]
fn multipliers_examples() {
    let out = stdout(&["multipliers", "N=19: 1,4,5,6,7,9,11,16,17"]);
    assert!(out.starts_with("N=19 |M|=9 orbit=2\nM 1,4,5,6,7,9,11,16,17\n"));
    let out = stdout(&["multipliers", "N=5: 0,1,2,3,4"]);
    assert!(out.starts_with("N=5 |M|=4 orbit=1\nM 1,2,3,4\n"));

    let hall = stdout(&["generate", "hall", "31"]);
    let support = hall
        .lines()
        .find_map(|l| l.strip_prefix("support "))
        .unwrap();
    let v = json(&["multipliers", support, "--format", "json"]);
    assert_eq!(v["order"], 5);
    assert_eq!(v["orbit_size"], 6);
    assert_eq!(v["multipliers"], serde_json::json!([1, 2, 4, 8, 16]));
}

#[test]
fn verify_ranges() {
    let out = stdout(&["verify", "hall", "31..31"]);
    assert!(out.contains("values={-9,-5,-1,3,7,11} status=pass"));
    assert!(out.contains("pair=[3,0] mismatches=0 distinct=6"));

    let out = stdout(&["verify", "twinprime", "--range", "3..30"]);
    let qs: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("twinprime q="))
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    assert_eq!(qs, ["q=3", "q=5", "q=11", "q=17", "q=29"]);
    assert!(out.ends_with("5 of 5 pass\n"));

    let v = json(&["verify", "paley", "3..100", "--format", "json"]);
    assert_eq!(v["status"], "pass");
    for r in v["results"].as_array().unwrap() {
        let distinct = r["value_set"].as_array().unwrap().len();
        // q = 3 is degenerate: 2 - q = -1 merges with the non-residue value
        let expected = if r["q"] == 3 { 2 } else { 3 };
        assert_eq!(distinct, expected, "q={}", r["q"]);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["generate", "paley", "13"],
        vec!["generate", "hall", "37"],
        vec!["generate", "paley", "19", "--index", "2"],
        vec!["generate", "paley", "19", "--alpha", "2"],
        vec!["generate", "hall", "31", "--alpha", "2"],
        vec!["correlate", "01", "011"],
        vec!["correlate", "/nonexistent/file"],
        vec!["multipliers", "N=5: 7"],
        vec!["verify", "paley", "8..10"],
        vec!["verify", "paley", "10..3"],
        vec!["verify", "paley"],
        vec!["bogus"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}
