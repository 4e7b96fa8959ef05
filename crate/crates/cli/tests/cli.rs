use std::path::Path;
use std::process::{Command, Output};

use clap::Parser;
use mesh_array::conformance::ReferenceArtifacts;
use mesh_array::placement::Placement;
use mesh_array::scramble::OrderRow;
use mesh_array_cli::{run, run_with, Cli, SimulateOutput, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("mesh-array").chain(args.iter().copied())).unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let res = run(&cli(args));
    assert_eq!(res.exit_code, EXIT_OK, "{args:?}: {}", res.stderr);
    res.stdout_str().to_owned()
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mesh-array"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn table_pretty() {
    assert_eq!(
        stdout_of(&["table", "--n", "4", "--format", "pretty"])
            .lines()
            .next(),
        Some("11 22 33 44")
    );
    let seven = stdout_of(&["table", "--n", "7"]);
    let row2: Vec<&str> = seven.lines().nth(1).unwrap().split(' ').collect();
    assert_eq!(row2[6], "67");
    assert_eq!(stdout_of(&["table", "--n", "1"]), "11\n");
}

#[test]
fn table_csv_and_json() {
    let csv = stdout_of(&["table", "--n", "3", "--format", "csv"]);
    assert_eq!(csv.lines().nth(2), Some("\"3,2\",\"1,3\",\"2,1\""));
    let json = stdout_of(&["table", "--n", "5", "--format", "json"]);
    let parsed = Placement::from_json(json.trim_end()).unwrap();
    assert_eq!(parsed.to_json().unwrap() + "\n", json);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&value).unwrap() + "\n", json);
}

#[test]
fn simulate_examples() {
    assert_eq!(
        stdout_of(&["simulate", "--kind", "mesh", "--n", "4"]),
        "steps=7 oracle=ok\n"
    );
    assert_eq!(
        stdout_of(&["simulate", "--kind", "standard", "--n", "3"]),
        "steps=7 oracle=ok\n"
    );
    let sym = stdout_of(&["simulate", "--kind", "mesh", "--n", "6", "--symmetric"]);
    assert_eq!(sym.lines().nth(1), Some("readout=9 bound=10"));
}

#[test]
fn simulate_json_round_trips() {
    for args in [
        &["simulate", "--n", "3", "--format", "json"][..],
        &[
            "simulate",
            "--n",
            "4",
            "--kind",
            "standard",
            "--symmetric",
            "--format",
            "json",
        ][..],
    ] {
        let json = stdout_of(args);
        let parsed: SimulateOutput = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap() + "\n", json);
        assert!(parsed.report.oracle_ok && parsed.report.placement_ok);
    }
    let json = stdout_of(&["simulate", "--n", "2", "--format", "json"]);
    assert_eq!(
        json,
        "{\"total_steps\":3,\"finish_times\":[[2,2],[3,3]],\"placement_ok\":true,\"oracle_ok\":true}\n"
    );
}

#[test]
fn simulate_csv() {
    let csv = stdout_of(&["simulate", "--n", "5", "--format", "csv", "--symmetric"]);
    assert_eq!(
        csv,
        "kind,n,total_steps,placement_ok,oracle_ok,readout,bound\nmesh,5,9,true,true,7,8\n"
    );
}

#[test]
fn trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.jsonl");
    let p = path.to_str().unwrap();
    stdout_of(&["simulate", "--n", "3", "--seed", "11", "--trace", p]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 27);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["step", "r", "c", "k", "a", "b", "acc"] {
            assert!(v.get(key).is_some(), "missing {key} in {line}");
        }
    }
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(
        (
            first["step"].as_u64(),
            first["r"].as_u64(),
            first["k"].as_u64()
        ),
        (Some(1), Some(1), Some(1))
    );
}

#[test]
fn seeds_are_deterministic() {
    let a = bin(&["simulate", "--n", "6", "--seed", "123", "--format", "json"]);
    let b = bin(&["simulate", "--n", "6", "--seed", "123", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let t1 = dir.path().join("t1");
    let t2 = dir.path().join("t2");
    bin(&[
        "simulate",
        "--n",
        "4",
        "--seed",
        "9",
        "--trace",
        t1.to_str().unwrap(),
    ]);
    bin(&[
        "simulate",
        "--n",
        "4",
        "--seed",
        "9",
        "--trace",
        t2.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(t1).unwrap(), std::fs::read(t2).unwrap());
}

#[test]
fn order_rows() {
    assert!(stdout_of(&["order", "--n", "5"]).starts_with("5 20 "));
    let rows: Vec<OrderRow> = serde_json::from_str(&stdout_of(&[
        "order", "--from", "3", "--to", "4", "--format", "json",
    ]))
    .unwrap();
    let orders: Vec<u64> = rows.iter().map(|r| r.order).collect();
    assert_eq!(orders, vec![7, 7]);
    let csv = stdout_of(&["order", "--from", "1", "--to", "2", "--format", "csv"]);
    assert_eq!(csv, "n,order,cycle_lengths\n1,1,1\n2,3,1;3\n");
}

#[test]
fn order_usage_errors() {
    assert_eq!(run(&cli(&["order"])).exit_code, EXIT_USAGE);
    assert_eq!(
        run(&cli(&["order", "--from", "3", "--to", "70"])).exit_code,
        EXIT_USAGE
    );
    assert_eq!(
        run(&cli(&["order", "--from", "5", "--to", "3"])).exit_code,
        EXIT_USAGE
    );
    assert!(Cli::try_parse_from([
        "mesh-array",
        "order",
        "--n",
        "3",
        "--from",
        "1",
        "--to",
        "2"
    ])
    .is_err());
}

fn round_trip_file(dir: &Path, payload: &[u8], n: &str, k: &str) {
    let input = dir.join("plain.bin");
    let scrambled = dir.join("scrambled.mms");
    let restored = dir.join("restored.bin");
    std::fs::write(&input, payload).unwrap();
    let out = bin(&[
        "scramble",
        "--n",
        n,
        "--k",
        k,
        "--input",
        input.to_str().unwrap(),
        "--out",
        scrambled.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let framed = std::fs::read(&scrambled).unwrap();
    assert_eq!(&framed[..4], b"MMS1");
    let out = bin(&[
        "descramble",
        "--input",
        scrambled.to_str().unwrap(),
        "--out",
        restored.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&restored).unwrap(), payload);
}

#[test]
fn scramble_descramble_files() {
    let dir = tempfile::tempdir().unwrap();
    let payload: Vec<u8> = (0..5000u32).map(|i| (i * 31 % 251) as u8).collect();
    round_trip_file(dir.path(), &payload, "4", "3");
    round_trip_file(dir.path(), b"x", "2", "1");
}

#[test]
fn io_failures_exit_2() {
    let out = bin(&["scramble", "--n", "3", "--input", "/nonexistent/file"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reading /nonexistent/file"));
    let out = bin(&["descramble", "--input", "/nonexistent/file"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk");
    std::fs::write(&junk, b"not a scrambled file").unwrap();
    assert_eq!(
        bin(&["descramble", "--input", junk.to_str().unwrap()])
            .status
            .code(),
        Some(EXIT_USAGE)
    );
    let empty = dir.path().join("empty");
    std::fs::write(&empty, b"").unwrap();
    assert_eq!(
        bin(&["scramble", "--n", "3", "--input", empty.to_str().unwrap()])
            .status
            .code(),
        Some(EXIT_USAGE)
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["table", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        bin(&["simulate", "--kind", "torus", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_paper_passes_with_two_errata() {
    let out = bin(&["verify-paper"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("errata (2):"));
    assert!(text.contains("7x7 placement table cell (2,7): printed 76, derived 67"));
    assert!(text.contains("3x3 S^2 table cell (1,2): printed 32, derived 31"));
    assert!(text.contains("PASS orders: n=3:7 n=4:7 n=5:20"));
    assert!(text.contains("PASS steps: mesh n=4: 7"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_paper_json() {
    let json = stdout_of(&["verify-paper", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["errata"].as_array().unwrap().len(), 2);
}

#[test]
fn corrupted_reference_flips_exit_code() {
    let mut refs = ReferenceArtifacts::embedded();
    refs.placements.get_mut(&6).unwrap()[3][0] = "43".into();
    let res = run_with(&cli(&["verify-paper"]), &refs);
    assert_eq!(res.exit_code, EXIT_CHECK_FAILED);
    assert!(res.stdout_str().contains("FAIL placement n=6"));

    let mut refs = ReferenceArtifacts::embedded();
    refs.iterates_n3[4][2][1] = "11".into();
    assert_eq!(
        run_with(&cli(&["verify-paper"]), &refs).exit_code,
        EXIT_CHECK_FAILED
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let res = run(&cli(&[
        "table",
        "--n",
        "4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]));
    assert_eq!(res.exit_code, EXIT_OK);
    assert!(res.stdout.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("\"1,1\",\"2,2\""));

    let res = run(&cli(&["table", "--n", "2", "--out", "/nonexistent/dir/x"]));
    assert_eq!(res.exit_code, EXIT_USAGE);
}
