//! End-to-end checks of the command-line interface, its exit codes, and
//! the bit-exact file formats it emits.

use std::io::Write;
use std::process::{Command, Output};

use num_bigint::BigInt;
use zec::solver::{rat, rat_int};

fn zec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn bounds_table_rows_satisfy_the_chain() {
    let out = zec(&["bounds", "--d", "2", "--n", "3..5", "--exact-alpha", "--lp"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "d,n,lower_closed,alpha_exact,lp_exact_num,lp_exact_den,upper_num,upper_den,\
capacity_lo_bits,capacity_hi_bits"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 10);
        // re-parse and re-check the chain, exactly
        let lower = rat_int(f[2].parse::<BigInt>().unwrap());
        let alpha = rat_int(f[3].parse::<BigInt>().unwrap());
        let lp = rat(f[4].parse::<BigInt>().unwrap(), f[5].parse::<BigInt>().unwrap());
        let upper = rat(f[6].parse::<BigInt>().unwrap(), f[7].parse::<BigInt>().unwrap());
        assert!(lower <= alpha && alpha <= lp && lp <= upper, "{row}");
        let lo: f64 = f[8].parse().unwrap();
        let hi: f64 = f[9].parse().unwrap();
        assert!(lo <= hi + 1e-12);
    }
}

#[test]
fn bounds_json_round_trips() {
    let out = zec(&["bounds", "--d", "1", "--n", "3", "--exact-alpha", "--format", "json"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &rows.as_array().unwrap()[0];
    assert_eq!(row["lower_closed"].to_string(), "1");
    assert_eq!(row["alpha_exact"], serde_json::json!(1));
    assert_eq!(row["upper"]["num"].to_string(), "7");
    assert_eq!(row["upper"]["den"].to_string(), "3");
    assert!(row["flags"].as_array().unwrap().is_empty());
}

#[test]
fn bounds_power_flag_sharpens_the_floor() {
    let out = zec(&[
        "bounds", "--d", "2", "--n", "3", "--exact-alpha", "--power", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &rows.as_array().unwrap()[0];
    // the square of the base graph packs five pairs, beating alpha^2 = 4
    assert_eq!(row["alpha_power"], serde_json::json!([[2, 5]]));
    let lo = row["capacity_lo_bits"].as_f64().unwrap();
    assert!((lo - (5f64).log2() / 2.0).abs() < 1e-6);
}

#[test]
fn bounds_rejects_the_degenerate_alphabet() {
    let out = zec(&["bounds", "--d", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("n >= 2"));
}

#[test]
fn bounds_reports_partial_results_with_exit_two() {
    let out = zec(&[
        "bounds",
        "--d",
        "2",
        "--n",
        "4",
        "--exact-alpha",
        "--mis-budget",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("partial"));
    // alpha column is empty in the partial row
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row.split(',').nth(3).unwrap(), "");
}

#[test]
fn lee_constructs_and_verifies() {
    let out = zec(&["lee", "--d", "2", "--q", "5", "--verify"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        r#"{"d":2,"q":5,"codewords":[[0,0],[1,2],[2,4],[3,1],[4,3]]}"#
    );
    assert!(stderr(&out).contains("verified perfect: true"));

    let out = zec(&["lee", "--d", "1", "--q", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"d":1,"q":3,"codewords":[[0]]}"#);
}

#[test]
fn lee_distinguishes_nonexistence_from_unsupported() {
    let out = zec(&["lee", "--d", "2", "--q", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no PL(2,1,7): 5 does not divide 7"));

    // 2d+1 = 9 has radical 3 | 6: a code exists, construction does not
    let out = zec(&["lee", "--d", "4", "--q", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exists"));
}

#[test]
fn demo_runs_clean_and_dumps_traces() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("traces.jsonl");
    let out = zec(&[
        "demo", "--d", "2", "--n", "3", "--k", "2", "--trials", "500", "--seed", "7",
        "--error-rate", "0.5", "--dump", dump.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("0 decode failures"));
    assert!(text.contains("rate 1.000000 bits/use"));

    let lines: Vec<String> = std::fs::read_to_string(&dump)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(lines.len(), 500);
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["ok"], serde_json::json!(true));
        assert!(v["seed"].is_u64() && v["message"].is_u64());
        assert_eq!(v["sent"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn demo_with_no_trials_exits_clean() {
    let out = zec(&["demo", "--d", "2", "--n", "3", "--trials", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 decode failures"));
}

#[test]
fn demo_rate_follows_the_window_size() {
    let out = zec(&["demo", "--d", "2", "--n", "5", "--k", "1", "--trials", "100"]);
    assert!(out.status.success());
    // |V| = 5 at n = q = 5
    assert!(stdout(&out).contains(&format!("rate {:.6} bits/use", (5f64).log2())));
}

#[test]
fn export_formats_are_bit_exact() {
    let out = zec(&["export", "--d", "2", "--n", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("p edge 9 26\n"));

    let out = zec(&["export", "--d", "1", "--n", "1"]);
    assert_eq!(stdout(&out), "p edge 1 0\n");

    let out = zec(&["export", "--d", "2", "--n", "3", "--power", "2"]);
    assert!(stdout(&out).starts_with("p edge 81 "));

    let out = zec(&["export", "--d", "1", "--n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["vertices"], serde_json::json!(3));
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);

    let out = zec(&["export", "--d", "2", "--n", "3", "--power", "3", "--vertex-cap", "100"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solver_subcommands_work_on_exported_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dimacs");
    let out = zec(&["export", "--d", "2", "--n", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());

    let out = zec(&["mis", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("alpha 2\n"));

    let out = zec(&["lp", "--input", path.to_str().unwrap(), "--assignment"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("lp_value 5/2\n"), "{text}");
    assert!(text.contains("cliques 9"));
    assert!(text.lines().any(|l| l.starts_with("q ")));
}

#[test]
fn lp_value_on_a_pentagon_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.dimacs");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "p edge 5 5").unwrap();
    for (u, v) in [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)] {
        writeln!(f, "e {u} {v}").unwrap();
    }
    drop(f);
    let out = zec(&["lp", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("lp_value 5/2\n"));
}

#[test]
fn mis_budget_exhaustion_is_a_partial_result() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dimacs");
    zec(&["export", "--d", "2", "--n", "4", "--out", path.to_str().unwrap()]);
    let out = zec(&["mis", "--input", path.to_str().unwrap(), "--budget", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("budget exhausted"));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = zec(&["bounds", "--d", "2", "--n", "3", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let out = zec(&["bounds", "--d", "2", "--n", "5..3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_override_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_zec"))
        .env("ZEC_THREADS", "1")
        .args(["bounds", "--d", "1", "--n", "3..6", "--exact-alpha", "--lp"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let single = stdout(&out);
    let out = zec(&["--threads", "2", "bounds", "--d", "1", "--n", "3..6", "--exact-alpha", "--lp"]);
    assert!(out.status.success());
    // identical tables regardless of parallelism
    assert_eq!(single, stdout(&out));
}
