use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const DECLARATION: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../core/tests/data/declaration_of_independence.txt"
);

fn lsys(args: &[&str]) -> Output {
    lsys_env(args, &[])
}

fn lsys_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lsys"));
    cmd.args(args);
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("LSYS_")) {
        cmd.env_remove(k);
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, contents: impl AsRef<[u8]>) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn encode_lzw_worked_example() {
    let dir = TempDir::new().unwrap();
    let text = write(&dir, "abc.txt", "abcabcabc\n");
    assert_eq!(
        stdout(&lsys(&["encode", s(&text), "--alphabet", "abc", "--ascii"])),
        "001010011100110101\n"
    );

    let packed = lsys(&["encode", s(&text), "--alphabet", "abc"]).stdout;
    let newline = packed.iter().position(|&b| b == b'\n').unwrap();
    let header: Value = serde_json::from_slice(&packed[..newline]).unwrap();
    assert_eq!(header["bit_length"], 18);
    assert_eq!(header["encoding"], "lzw");
    assert_eq!(header["code_width"], 3);
    assert_eq!(
        &packed[newline + 1..],
        &[0b0010_1001, 0b1100_1101, 0b0100_0000]
    );
}

#[test]
fn encode_trivial_inputs() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.txt", "");
    let out = lsys(&["encode", s(&empty)]).stdout;
    let header: Value = serde_json::from_slice(&out[..out.len() - 1]).unwrap();
    assert_eq!(header["bit_length"], 0);
    assert_eq!(*out.last().unwrap(), b'\n');

    let a = write(&dir, "a.txt", "a");
    assert_eq!(
        stdout(&lsys(&["encode", s(&a), "-e", "bin", "--ascii"])),
        "00001\n"
    );
    assert_eq!(
        stdout(&lsys(&[
            "encode",
            s(&a),
            "-e",
            "bin",
            "--bin-width",
            "7",
            "--ascii"
        ])),
        "0000001\n"
    );
}

#[test]
fn encode_errors_exit_nonzero() {
    let dir = TempDir::new().unwrap();
    let text = write(&dir, "t.txt", "abd");
    let o = lsys(&["encode", s(&text), "--alphabet", "abc"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert!(o.stdout.is_empty());

    let o = lsys(&["encode", s(&dir.path().join("missing.txt"))]);
    assert!(!o.status.success());

    let abc = write(&dir, "abc.txt", "abcabcabc");
    let o = lsys(&["encode", s(&abc), "--alphabet", "abc", "--code-width", "2"]);
    assert!(!o.status.success());
}

#[test]
fn grammar_table_and_json() {
    let table = stdout(&lsys(&["grammar", "--bits", "0010011100101101"]));
    assert!(table.starts_with("n = 10  node_total = 31  iso_depth = 2\n"));
    assert_eq!(table.lines().count(), 14);

    let json: Value =
        serde_json::from_str(&stdout(&lsys(&["grammar", "--bits", "00", "-f", "json"]))).unwrap();
    assert_eq!(json["n"], 2);

    let o = lsys(&["grammar", "--bits", "010"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("power of two"));
}

fn grammar_json(bits: &str, depth: &str) -> Value {
    serde_json::from_str(&stdout(&lsys(&[
        "grammar",
        "--bits",
        bits,
        "--iso-depth",
        depth,
        "-f",
        "json",
    ])))
    .unwrap()
}

#[test]
fn grammar_depth_two_refines_depth_zero() {
    let coarse = grammar_json("01010101", "0");
    let fine = grammar_json("01010101", "2");
    assert_eq!(coarse["n"], 3);
    assert_eq!(fine["n"], 5);
    assert_eq!(coarse["node_total"], 15);
    assert_eq!(fine["node_total"], 15);
    // Each depth-2 class has a single variant here, one per tree level
    // plus the two leaf classes.
    let classes = fine["grammar"]["classes"].as_array().unwrap();
    assert!(classes
        .iter()
        .all(|c| c["variants"].as_array().unwrap().len() == 1));
}

#[test]
fn complexity_defaults_and_trace() {
    let json: Value = serde_json::from_str(&stdout(&lsys(&[
        "complexity",
        "--bits",
        "0010011100101101",
        "-f",
        "json",
        "--trace",
    ])))
    .unwrap();
    assert_eq!(json["result"]["k0"], 0.0);
    assert_eq!(json["result"]["radius"], 1.0);
    assert_eq!(json["trace"].as_array().unwrap().len(), 1);

    let text = stdout(&lsys(&[
        "complexity",
        "--hex",
        "2 7 2 d",
        "--no-unit-probe",
        "--trace",
    ]));
    assert!(text.contains("converged_at_one = false"));
    let trace: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("step"))
        .skip(1)
        .collect();
    assert_eq!(trace.len(), 40);
}

#[test]
fn baselines_examples() {
    let out = stdout(&lsys(&["baselines", "0111001100"]));
    assert!(out.contains("distinct_substrings = 38\n"));
    assert!(out.contains("maximal_substrings = 42\n"));
    let json: Value =
        serde_json::from_str(&stdout(&lsys(&["baselines", "0101010101", "-f", "json"]))).unwrap();
    assert!((json["te"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((json["lc"]["lc"].as_f64().unwrap() - 19.0 / 42.0).abs() < 1e-12);
}

#[test]
fn analyze_constant_input() {
    let dir = TempDir::new().unwrap();
    let bits = write(&dir, "c.txt", "1".repeat(1024));
    let csv = stdout(&lsys(&["analyze", s(&bits), "-e", "raw-bits"]));
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "window_index,start_bit,k0,te,lc,anomaly");
    assert_eq!(rows.len(), 3);
    for (i, row) in rows[1..].iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[0], i.to_string());
        assert_eq!(cells[1], (512 * i).to_string());
        assert_eq!(cells[2].parse::<f64>().unwrap(), 0.0);
        assert_eq!(cells[3].parse::<f64>().unwrap(), 0.0);
        assert_eq!(cells[5], "false");
    }
}

#[test]
fn analyze_missing_measures_are_empty_fields() {
    let dir = TempDir::new().unwrap();
    let bits = write(&dir, "c.txt", "01".repeat(512));
    let csv = stdout(&lsys(&["analyze", s(&bits), "-e", "raw-bits", "-m", "te"]));
    assert_eq!(csv.lines().nth(1).unwrap(), "0,0,,0.125,,false");
}

#[test]
fn analyze_is_deterministic() {
    let a = lsys(&["analyze", DECLARATION]);
    let b = lsys(&["analyze", DECLARATION]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = lsys(&[
        "analyze",
        DECLARATION,
        "--no-unit-probe",
        "-f",
        "json",
        "-w",
        "256",
    ]);
    let b = lsys(&[
        "analyze",
        DECLARATION,
        "--no-unit-probe",
        "-f",
        "json",
        "-w",
        "256",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_round_trips_through_json() {
    let args = [
        "analyze",
        DECLARATION,
        "--no-unit-probe",
        "--k-mode",
        "inverse",
        "-w",
        "256",
    ];
    let csv = stdout(&lsys(&args));
    let json: Value =
        serde_json::from_str(&stdout(&lsys(&[&args[..], &["-f", "json"]].concat()))).unwrap();
    let records = json["records"].as_array().unwrap();

    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), records.len());
    assert!(rows.len() > 10);
    for (row, rec) in rows.iter().zip(records) {
        assert_eq!(
            row[0].parse::<u64>().unwrap(),
            rec["index"].as_u64().unwrap()
        );
        assert_eq!(
            row[1].parse::<u64>().unwrap(),
            rec["start_bit"].as_u64().unwrap()
        );
        for (col, key) in [(2, "k0"), (3, "te"), (4, "lc")] {
            assert_eq!(
                row[col].parse::<f64>().unwrap().to_bits(),
                rec[key].as_f64().unwrap().to_bits()
            );
        }
        assert_eq!(
            row[5].parse::<bool>().unwrap(),
            rec["anomaly"].as_bool().unwrap()
        );
    }
}

#[test]
fn encoded_file_feeds_raw_bits_analysis() {
    let dir = TempDir::new().unwrap();
    let packed = dir.path().join("decl.bits");
    stdout(&lsys(&["encode", DECLARATION, "-o", s(&packed)]));
    let via_file = stdout(&lsys(&[
        "analyze",
        s(&packed),
        "-e",
        "raw-bits",
        "-w",
        "256",
    ]));
    let direct = stdout(&lsys(&["analyze", DECLARATION, "-e", "lzw", "-w", "256"]));
    assert_eq!(via_file, direct);
}

#[test]
fn short_input_gives_empty_series() {
    let dir = TempDir::new().unwrap();
    let bits = write(&dir, "short.txt", "0110");
    let o = lsys(&["analyze", s(&bits), "-e", "raw-bits"]);
    assert!(o.status.success());
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "window_index,start_bit,k0,te,lc,anomaly\n"
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));

    let o = lsys(&["analyze", s(&bits), "-e", "raw-bits", "-f", "json"]);
    let json: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(json["records"].as_array().unwrap().is_empty());
}

#[test]
fn environment_overrides_defaults_and_flags_win() {
    let dir = TempDir::new().unwrap();
    let bits = write(&dir, "c.txt", "0".repeat(1024));
    let rows = |o: &Output| stdout(o).lines().count() - 1;
    assert_eq!(rows(&lsys(&["analyze", s(&bits), "-e", "raw-bits"])), 2);
    assert_eq!(
        rows(&lsys_env(
            &["analyze", s(&bits)],
            &[("LSYS_ENCODING", "raw-bits"), ("LSYS_WINDOW", "256")]
        )),
        4
    );
    assert_eq!(
        rows(&lsys_env(
            &["analyze", s(&bits), "-w", "128"],
            &[("LSYS_ENCODING", "raw-bits"), ("LSYS_WINDOW", "256")]
        )),
        8
    );
}

#[test]
fn analyze_errors_exit_nonzero() {
    let dir = TempDir::new().unwrap();
    let bits = write(&dir, "c.txt", "0".repeat(1024));
    for extra in [
        &["-w", "300"][..],
        &["--tau", "0"],
        &["--eps", "0"],
        &["-m", "xyz"],
    ] {
        let o = lsys(&[&["analyze", s(&bits), "-e", "raw-bits"][..], extra].concat());
        assert!(!o.status.success(), "{extra:?} should fail");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    let garbage = write(&dir, "g.txt", "01x1");
    assert!(!lsys(&["analyze", s(&garbage), "-e", "raw-bits"])
        .status
        .success());
}
