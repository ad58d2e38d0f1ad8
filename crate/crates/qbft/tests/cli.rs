//! End-to-end tests of the installed binary: exit codes, stream discipline,
//! machine-parsable error lines, and byte-level reproducibility, exercised
//! through real process invocations rather than in-process calls.

use std::process::{Command, Output};

use qbft::boolfn::BooleanFunction;
use qbft::qtesters::{Decision, Verdict};

fn qbft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbft"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

#[test]
fn identical_parities_exit_zero_with_verdict_and_counts() {
    let out = qbft(&[
        "identity", "--f", "parity", "--g", "parity", "--eps", "0.0625", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("decision: identical"), "{text}");
    assert!(text.contains("quantum_queries: 6"), "{text}");
    assert!(text.contains("iterations: 1"), "{text}");
    assert!(stderr(&out).is_empty());
}

#[test]
fn walsh_prints_the_and_spectrum_on_one_line() {
    let out = qbft(&["walsh", "--f", "and2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0.5,0.5,0.5,-0.5\n");
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let args = [
        "bench",
        "--problem",
        "identity",
        "--n",
        "8",
        "--eps",
        "1/8,1/16",
        "--trials",
        "30",
        "--seed",
        "2",
    ];
    let first = qbft(&args);
    let second = qbft(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(
        text.starts_with("problem,n,mode,algorithm,branch,epsilon"),
        "{text}"
    );

    // The same holds for a tester run with a generated source.
    let args = [
        "balance", "--f", "rand:n=9", "--eps", "1/8", "--seed", "4", "--format", "json",
    ];
    assert_eq!(qbft(&args).stdout, qbft(&args).stdout);
}

#[test]
fn verdict_json_round_trips_from_the_binary() {
    let out = qbft(&[
        "correlation",
        "--f",
        "parity8",
        "--g",
        "parity8",
        "--eps",
        "1/4",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Verdict = serde_json::from_str(&stdout(&out)).expect("round-trip");
    assert_eq!(v.decision, Decision::CorrOne);
    assert_eq!(v.quantum_queries, 6);
    assert_eq!(
        serde_json::to_string_pretty(&v).unwrap() + "\n",
        stdout(&out)
    );
}

#[test]
fn error_lines_are_single_and_machine_parsable() {
    // Unreadable file → input error, exit 2.
    let out = qbft(&["walsh", "--f", "missing.tbl"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error[input]: "), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.contains("missing.tbl"), "{err}");

    // Malformed table file → input error with a distinct message.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tbl");
    std::fs::write(&path, "3\nzz\n").unwrap();
    let out = qbft(&["walsh", "--f", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).starts_with("error[input]: malformed truth table"),
        "{}",
        stderr(&out)
    );

    // Arity mismatch → its own message, still exit 2.
    let out = qbft(&[
        "identity", "--f", "parity4", "--g", "parity6", "--eps", "1/8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).starts_with("error[input]: arity mismatch"),
        "{}",
        stderr(&out)
    );

    // Promise violation → exit 3.
    let out = qbft(&[
        "correlation",
        "--f",
        "parity4",
        "--g",
        "and4",
        "--eps",
        "1/2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stderr(&out).starts_with("error[promise]: "),
        "{}",
        stderr(&out)
    );

    // Unrepresentable ε → exit 3 with both neighbours suggested.
    let out = qbft(&[
        "bench",
        "--problem",
        "balance",
        "--n",
        "6",
        "--eps",
        "0.3",
        "--trials",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.starts_with("error[representability]: "), "{err}");
    assert!(err.contains("0.28125") && err.contains("0.3125"), "{err}");

    // Malformed ε → usage, exit 2.
    let out = qbft(&["balance", "--f", "parity", "--eps", "eight"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).starts_with("error[usage]: "),
        "{}",
        stderr(&out)
    );
}

#[test]
fn gen_output_feeds_back_into_the_testers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.tbl");
    let out = qbft(&[
        "gen",
        "--f",
        "dist:g=parity10,d=32",
        "--seed",
        "6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let f = BooleanFunction::from_table_text(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(
        f.hamming_distance(&BooleanFunction::parity(10).unwrap())
            .unwrap(),
        32
    );

    // Dist = 32/1024 = 1/32 exactly: the identity tester at ε = 1/32 sees a
    // far pair; oracle mode plans from the true distance.
    let out = qbft(&[
        "identity",
        "--f",
        path.to_str().unwrap(),
        "--g",
        "parity10",
        "--eps",
        "1/32",
        "--mode",
        "oracle",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("mode: oracle"), "{}", stdout(&out));
}

#[test]
fn dump_state_lists_every_amplitude_with_full_precision() {
    let out = qbft(&["balance", "--f", "parity3", "--eps", "1/4", "--dump-state"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let dump: Vec<&str> = text
        .lines()
        .take_while(|l| !l.starts_with("decision:"))
        .collect();
    assert_eq!(dump.len(), 8);
    // Parity concentrates the prepared state on z = 7; amplification keeps
    // it off z = 0. Check the line shape ("index real imag", 17 significant
    // digits in scientific notation) and the exact amplitudes.
    let parse = |line: &str| -> (usize, f64, f64) {
        let mut parts = line.split(' ');
        let z = parts.next().unwrap().parse().unwrap();
        let re = parts.next().unwrap().parse().unwrap();
        let im = parts.next().unwrap().parse().unwrap();
        assert_eq!(parts.next(), None, "{line}");
        (z, re, im)
    };
    assert!(dump.iter().all(|l| l.contains("e")), "{dump:?}");
    let (z, re, im) = parse(dump[0]);
    assert_eq!((z, re, im), (0, 0.0, 0.0));
    let (z, re, im) = parse(dump[7]);
    assert_eq!(z, 7);
    assert!((re.hypot(im) - 1.0).abs() < 1e-12);
    assert!(text.contains("decision: balanced"), "{text}");
}

#[test]
fn help_and_usage_behave_like_a_standard_cli() {
    let out = qbft(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("identity"));

    let out = qbft(&[]);
    assert_eq!(out.status.code(), Some(2));

    let out = qbft(&["identity", "--f", "parity"]);
    assert_eq!(out.status.code(), Some(2), "missing required flags");
}
