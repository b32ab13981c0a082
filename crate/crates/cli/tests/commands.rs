use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const EXAMPLE: &str = "[[2,-1],[-1,3]]";

fn opineq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opineq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn scalar_terms(v: &Value) -> Vec<f64> {
    v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t[0].as_f64().unwrap())
        .collect()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn worked_example_through_file() {
    let path = scratch("example.json");
    std::fs::write(&path, r#"{"n": 2, "entries": [[2, -1], [-1, 3]]}"#).unwrap();
    let out = opineq(&[
        "operator",
        "--matrix",
        path.to_str().unwrap(),
        "--map",
        "normalized_trace",
        "--f",
        "power:-1",
        "--t",
        "0.5",
        "--interval",
        "1.35,3.8",
        "--mode",
        "ratio",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let t = scalar_terms(&v);
    assert!((t[0] - 0.5).abs() < 1e-12);
    assert!((t[1] - 0.511_635_443).abs() < 1e-8);
    assert!((t[2] - 0.517_007_797).abs() < 1e-8);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["constants"]["beta"].as_f64(), Some(0.0));
    assert_eq!(v["interval"]["m"].as_f64(), Some(1.35));
}

#[test]
fn constants_for_reciprocal() {
    let out = opineq(&["constants", "--interval", "1,2", "--r", "-1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["K"].as_f64().unwrap() - 1.125).abs() < 1e-15);
    // 3/2 from the chord part, −2·(1/2)^(1/2) from the correction.
    let c = 1.5 - 2f64.sqrt();
    assert!((v["C"].as_f64().unwrap() - c).abs() < 1e-12);
}

#[test]
fn constants_with_function() {
    let out = opineq(&["constants", "--interval", "1,2", "--f", "power:2"]);
    let v = stdout_json(&out);
    assert!((v["alpha"].as_f64().unwrap() - 1.125).abs() < 1e-9);
    assert!((v["beta"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert!(v.get("K").is_none());
}

#[test]
fn hermite_hadamard_for_exp() {
    let out = opineq(&["hh", "--f", "exp", "--t", "0.5", "--interval", "0,1"]);
    assert_eq!(code(&out), 0);
    let e = std::f64::consts::E;
    let c = e.sqrt() - 1.0;
    let want = [
        e.sqrt(),
        e - 1.0,
        ((1.0 + c).powi(3) - 1.0) / (3.0 * c),
        (1.0 + e) / 2.0,
    ];
    for (g, w) in scalar_terms(&stdout_json(&out)).iter().zip(want) {
        assert!((g - w).abs() < 1e-12, "{g} vs {w}");
    }
}

#[test]
fn power_and_kantorovich_commands() {
    let out = opineq(&[
        "power",
        "--matrix",
        EXAMPLE,
        "--r",
        "-1",
        "--t",
        "0.5",
        "--interval",
        "1.35,3.8",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["constants"]["K"].as_f64().unwrap() - 1.292_519_493).abs() < 1e-8);

    let out = opineq(&[
        "power",
        "--matrix",
        "[[1,0],[0,2]]",
        "--r",
        "2",
        "--t",
        "0.5",
        "--mode",
        "c",
    ]);
    assert_eq!(code(&out), 0);
    let t = scalar_terms(&stdout_json(&out));
    assert!((t[2] - 2.5).abs() < 1e-12);

    let out = opineq(&[
        "kantorovich",
        "--matrix",
        EXAMPLE,
        "--interval",
        "1.35,3.8",
        "--quad",
        "simpson:1e-11,30",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["tolerance"].as_f64().unwrap() - 1e-8).abs() < 1e-20);
}

#[test]
fn furuta_commands() {
    let (a, b) = ("[[1,0],[0,2]]", "[[2,0],[0,3]]");
    let out = opineq(&[
        "furuta",
        "--matrix",
        a,
        "--matrix-b",
        b,
        "--r",
        "2",
        "--t",
        "0.5",
        "--interval",
        "1,3",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let upper: Vec<f64> = v["terms"][2]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((upper[0] - 16.0 / 3.0).abs() < 1e-12 && (upper[3] - 12.0).abs() < 1e-12);

    let out = opineq(&[
        "furuta",
        "--matrix",
        a,
        "--matrix-b",
        b,
        "--r",
        "-1",
        "--t",
        "0.5",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["labels"][0], "f(B)");

    let out = opineq(&[
        "furuta",
        "--matrix",
        b,
        "--matrix-b",
        "[[2,0],[0,1]]",
        "--f",
        "power:2",
        "--t",
        "0.5",
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not Loewner ordered"));
}

#[test]
fn exit_codes() {
    // malformed input
    assert_eq!(code(&opineq(&["hh", "--f", "exp", "--interval", "2,1"])), 2);
    assert_eq!(
        code(&opineq(&["hh", "--f", "cosh", "--interval", "0,1"])),
        2
    );
    assert_eq!(code(&opineq(&["hh", "--f", "exp"])), 2);
    assert_eq!(
        code(&opineq(&[
            "operator",
            "--matrix",
            "missing.json",
            "--f",
            "exp"
        ])),
        2
    );
    assert_eq!(
        code(&opineq(&[
            "operator",
            "--matrix",
            "[[1,2],[0,1]]",
            "--f",
            "exp"
        ])),
        2
    );
    assert_eq!(
        code(&opineq(&[
            "operator",
            "--matrix",
            "[[1,2],[2,1]",
            "--f",
            "exp"
        ])),
        2
    );
    assert_eq!(code(&opineq(&["nonsense"])), 2);
    // precondition violations
    assert_eq!(
        code(&opineq(&[
            "hh",
            "--f",
            "power:1",
            "--t",
            "0.5",
            "--interval",
            "1,2"
        ])),
        3
    );
    assert_eq!(
        code(&opineq(&[
            "operator",
            "--matrix",
            "[[2,0],[0,2]]",
            "--f",
            "exp"
        ])),
        3
    );
    assert_eq!(
        code(&opineq(&[
            "power", "--matrix", EXAMPLE, "--r", "2", "--t", "0.25"
        ])),
        3
    );
    assert_eq!(
        code(&opineq(&[
            "operator",
            "--matrix",
            EXAMPLE,
            "--f",
            "power:-1",
            "--interval",
            "2,4"
        ])),
        3
    );
    // failed check
    let out = opineq(&[
        "verify-map",
        "--map",
        r#"{"map":"compression","v":[[2,0],[0,1]]}"#,
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["valid"], Value::Bool(false));
}

#[test]
fn verify_map_accepts_valid_maps() {
    for map in [
        "normalized_trace",
        "pinching:2,1",
        r#"{"map":"compression","v":[[1],[0]]}"#,
    ] {
        let out = opineq(&["verify-map", "--map", map, "--trials", "20", "--seed", "3"]);
        assert_eq!(code(&out), 0, "{map}");
        assert_eq!(stdout_json(&out)["valid"], Value::Bool(true));
    }
}

#[test]
fn sweeps_are_reproducible() {
    let args = [
        "sweep", "--kind", "operator", "--trials", "500", "--seed", "42",
    ];
    let first = opineq(&args);
    assert_eq!(code(&first), 0);
    let v = stdout_json(&first);
    assert_eq!(v["passed"].as_u64(), Some(500));
    assert_eq!(v["evaluated"].as_u64(), Some(500));
    assert_eq!(v["draws"].as_array().unwrap().len(), 500);
    assert_eq!(first.stdout, opineq(&args).stdout);

    let out = opineq(&["sweep", "--kind", "hh", "--trials", "200", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], v["evaluated"]);
    assert_eq!(
        v["evaluated"].as_u64().unwrap() + v["skipped"].as_u64().unwrap(),
        200
    );

    let out = opineq(&[
        "sweep", "--kind", "operator", "--trials", "1", "--dims", "1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["passed"].as_u64(), Some(1));

    assert_eq!(code(&opineq(&["sweep", "--trials", "0"])), 2);
}

type CsvNumbers = (Vec<Vec<f64>>, Vec<f64>, Vec<(String, f64)>);

/// CSV rows `record,index,entry,label,value` mapped back onto the JSON layout.
fn csv_numbers(csv: &str) -> CsvNumbers {
    let (mut terms, mut gaps, mut constants) = (Vec::<Vec<f64>>::new(), Vec::new(), Vec::new());
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let value = || cols[4].parse::<f64>().unwrap();
        match cols[0] {
            "term" => {
                let i: usize = cols[1].parse().unwrap();
                if terms.len() <= i {
                    terms.push(Vec::new());
                }
                terms[i].push(value());
            }
            "gap" => gaps.push(value()),
            "constant" => constants.push((cols[3].to_string(), value())),
            _ => {}
        }
    }
    (terms, gaps, constants)
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let base = [
        "operator",
        "--matrix",
        "[[2,-1,0.3],[-1,3,0.2],[0.3,0.2,1.5]]",
        "--f",
        "power:-1",
        "--t",
        "0.5",
        "--map",
        "pinching:1,2",
    ];
    let json = stdout_json(&opineq(&base));
    let csv_out = opineq(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!(code(&csv_out), 0);
    let (terms, gaps, constants) = csv_numbers(&String::from_utf8(csv_out.stdout).unwrap());

    let json_terms: Vec<Vec<f64>> = serde_json::from_value(json["terms"].clone()).unwrap();
    let json_gaps: Vec<f64> = serde_json::from_value(json["gaps"].clone()).unwrap();
    assert_eq!(terms, json_terms);
    assert_eq!(gaps, json_gaps);
    for (name, v) in constants {
        assert_eq!(json["constants"][&name].as_f64(), Some(v), "{name}");
    }
}

#[test]
fn out_flag_and_spec_replay() {
    let report = scratch("report.json");
    let spec = scratch("run.json");
    let args = [
        "operator",
        "--matrix",
        EXAMPLE,
        "--f",
        "exp",
        "--t",
        "0.5",
        "--map",
        "pinching:1,1",
    ];
    let out = opineq(&[&args[..], &["--out", report.to_str().unwrap()]].concat());
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&report).unwrap();

    let printed = opineq(&[&args[..], &["--print-spec"]].concat());
    std::fs::write(&spec, &printed.stdout).unwrap();
    let replay = opineq(&["--spec", spec.to_str().unwrap()]);
    assert_eq!(code(&replay), 0);
    assert_eq!(replay.stdout, written);
}

#[test]
fn pretty_output() {
    let out = opineq(&[
        "operator", "--matrix", EXAMPLE, "--f", "power:2", "--format", "pretty",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("operator chain (unit)"));
    assert!(text.trim_end().ends_with("PASSED"));
}
