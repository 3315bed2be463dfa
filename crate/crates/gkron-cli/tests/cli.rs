//! End-to-end tests for the `gkron` binary: every subcommand, the spec
//! grammar, the exit-status contract (0 success, 1 verification mismatch,
//! 2 usage/parse/I-O, 3 domain constraint violation), and self-consistency
//! of synthesis against verification.

use std::path::Path;
use std::process::Command;

use gkron::circuit::text::from_text;
use gkron::matrix::{Complex64, ComplexMatrix};
use gkron::transforms::haar_matrix;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gkron"))
        .args(args)
        .output()
        .expect("launch the binary");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn path_str(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().expect("utf-8 path").to_string()
}

/// Parses the matrix text format: a `rows cols` header line, then one line
/// per row of whitespace-separated `re,im` entries.
fn parse_matrix(text: &str) -> ComplexMatrix {
    let mut lines = text.lines();
    let header = lines.next().expect("header line");
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().expect("dimension"))
        .collect();
    assert_eq!(dims.len(), 2, "header must hold two dimensions");
    let rows: Vec<Vec<Complex64>> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            line.split_whitespace()
                .map(|entry| {
                    let (re, im) = entry.split_once(',').expect("re,im entry");
                    Complex64::new(
                        re.parse().expect("real part"),
                        im.parse().expect("imaginary part"),
                    )
                })
                .collect()
        })
        .collect();
    assert_eq!(rows.len(), dims[0], "row count must match the header");
    ComplexMatrix::from_fn(dims[0], dims[1], |i, j| rows[i][j])
}

#[test]
fn synth_haar_writes_a_parseable_circuit_that_verifies() {
    let dir = tempfile::tempdir().expect("temp dir");
    let h3 = path_str(&dir, "h3.circ");

    let (code, stdout, _) = run(&["synth", "haar", "--qubits", "3", "--out", &h3]);
    assert_eq!(code, 0);
    assert!(stdout.contains("wrote"), "synth reports what it wrote: {stdout}");

    let text = std::fs::read_to_string(&h3).expect("read the circuit document");
    let circuit = from_text(&text).expect("the document parses");
    let sim = circuit.simulate().expect("the circuit simulates");
    let oracle = haar_matrix(3).expect("reference matrix");
    assert!(sim.max_abs_diff(&oracle).expect("conformable") <= 1e-10);

    let (code, stdout, _) = run(&["verify", &h3, "haar", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("match"), "verify reports the match: {stdout}");
}

#[test]
fn untwisted_metacyclic_synthesis_verifies_exactly() {
    // With twist parameter 0 every residual phase is 1, so the circuit
    // matches its reference matrix exactly, with or without the flag.
    let dir = tempfile::tempdir().expect("temp dir");
    let g21 = path_str(&dir, "g21.circ");

    let (code, _, _) = run(&["synth", "group", "metacyclic", "3", "7", "2", "0", "--out", &g21]);
    assert_eq!(code, 0);

    let (code, _, _) = run(&["verify", &g21, "group", "metacyclic", "3", "7", "2", "0"]);
    assert_eq!(code, 0);

    let (code, stdout, _) = run(&[
        "verify", &g21, "group", "metacyclic", "3", "7", "2", "0", "--up-to-phase",
    ]);
    assert_eq!(code, 0);
    for line in stdout.lines().filter(|l| l.trim_start().starts_with("row")) {
        assert!(
            line.ends_with("1.00000000000000e0,0.00000000000000e0"),
            "every extracted phase is 1: {line}"
        );
    }
}

#[test]
fn twisted_metacyclic_synthesis_needs_the_phase_flag() {
    let dir = tempfile::tempdir().expect("temp dir");
    let circ = path_str(&dir, "q4m.circ");

    let (code, _, _) = run(&["synth", "group", "metacyclic", "2", "8", "7", "4", "--out", &circ]);
    assert_eq!(code, 0);

    // Two rows differ from the reference by a sign, so the plain
    // comparison is a genuine mismatch (status 1)...
    let (code, _, stderr) = run(&["verify", &circ, "group", "metacyclic", "2", "8", "7", "4"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("mismatch"), "mismatch is reported: {stderr}");

    // ...a loose enough tolerance absorbs it...
    let (code, _, _) = run(&[
        "verify", &circ, "group", "metacyclic", "2", "8", "7", "4", "--tol", "2.0",
    ]);
    assert_eq!(code, 0);

    // ...and the phase-aware comparison succeeds, reporting the signs.
    let (code, stdout, _) = run(&[
        "verify", &circ, "group", "metacyclic", "2", "8", "7", "4", "--up-to-phase",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("row 13: -1.00000000000000e0"), "row 13 is negated: {stdout}");
    assert!(stdout.contains("row 15: -1.00000000000000e0"), "row 15 is negated: {stdout}");
}

#[test]
fn constraint_violations_exit_with_status_three() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = path_str(&dir, "never.circ");

    let (code, _, stderr) = run(&["synth", "group", "quaternionic", "3", "--out", &out]);
    assert_eq!(code, 3);
    assert!(stderr.contains("must be even"), "the violated relation is printed: {stderr}");
    assert!(!Path::new(&out).exists(), "nothing is written on failure");

    let (code, _, stderr) = run(&["synth", "dft", "1", "--out", &out]);
    assert_eq!(code, 3);
    assert!(stderr.contains("at least 2"), "the violated relation is printed: {stderr}");
}

#[test]
fn usage_errors_exit_with_status_two() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = path_str(&dir, "never.circ");

    // Unknown transform name.
    let (code, _, stderr) = run(&["synth", "frobnicate", "3", "--out", &out]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown transform"));

    // Wrong parameter count.
    let (code, _, _) = run(&["synth", "walsh", "3", "3", "--out", &out]);
    assert_eq!(code, 2);

    // Non-integer group parameter.
    let (code, _, _) = run(&["synth", "group", "metacyclic", "2", "8", "nope", "4", "--out", &out]);
    assert_eq!(code, 2);

    // Unreadable circuit documents.
    let missing = path_str(&dir, "missing.circ");
    let (code, _, _) = run(&["gatecount", &missing]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["verify", &missing, "walsh", "2"]);
    assert_eq!(code, 2);

    // Unparseable circuit document.
    let garbled = path_str(&dir, "garbled.circ");
    std::fs::write(&garbled, "not a circuit\n").expect("write the bad document");
    let (code, _, stderr) = run(&["verify", &garbled, "walsh", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("circuit document"));

    // No subcommand at all (clap's own usage failure).
    let (code, _, _) = run(&[]);
    assert_eq!(code, 2);
}

#[test]
fn dimension_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().expect("temp dir");
    let h3 = path_str(&dir, "h3.circ");
    let (code, _, _) = run(&["synth", "haar", "3", "--out", &h3]);
    assert_eq!(code, 0);

    let (code, _, stderr) = run(&["verify", &h3, "haar", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("dimension mismatch"), "the mismatch is named: {stderr}");
}

#[test]
fn exported_dft_matrix_has_a_uniform_first_row() {
    let (code, stdout, _) = run(&["matrix", "dft", "8"]);
    assert_eq!(code, 0);
    let matrix = parse_matrix(&stdout);
    assert_eq!((matrix.rows(), matrix.cols()), (8, 8));
    let expected = Complex64::new(1.0 / 8f64.sqrt(), 0.0);
    for j in 0..8 {
        assert!(
            (matrix.get(0, j) - expected).norm() <= 1e-12,
            "first-row entry {j} is 1/sqrt(8)"
        );
    }
}

#[test]
fn exported_group_matrix_is_unitary() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = path_str(&dir, "en1.mat");
    let (code, _, _) = run(&["matrix", "group", "en", "1", "--out", &out]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).expect("read the matrix");
    let matrix = parse_matrix(&text);
    assert_eq!((matrix.rows(), matrix.cols()), (8, 8));
    assert!(matrix.unitarity_deviation().expect("square") <= 1e-10);
}

#[test]
fn gatecount_reports_one_single_unitary_per_walsh_qubit() {
    let dir = tempfile::tempdir().expect("temp dir");
    let w6 = path_str(&dir, "w6.circ");
    let (code, _, _) = run(&["synth", "walsh", "6", "--out", &w6]);
    assert_eq!(code, 0);

    let (code, stdout, _) = run(&["gatecount", &w6]);
    assert_eq!(code, 0);
    let field = |name: &str| -> usize {
        stdout
            .lines()
            .find(|l| l.starts_with(name))
            .unwrap_or_else(|| panic!("report lists {name}: {stdout}"))
            .split_whitespace()
            .last()
            .expect("a value")
            .parse()
            .expect("an integer")
    };
    assert_eq!(field("single unitaries"), 6);
    assert_eq!(field("total gates"), 6);
}

#[test]
fn qubit_shorthand_appends_a_trailing_parameter() {
    let (code_a, long_form, _) = run(&["matrix", "walsh", "2"]);
    let (code_b, shorthand, _) = run(&["matrix", "walsh", "--qubits", "2"]);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(long_form, shorthand);
}

#[test]
fn every_synthesis_verifies_against_its_own_spec() {
    let dir = tempfile::tempdir().expect("temp dir");
    // (spec tokens, whether verification needs the phase flag)
    let cases: &[(&[&str], bool)] = &[
        (&["walsh", "4"], false),
        (&["haar", "3"], false),
        (&["d4", "8"], false),
        (&["dft", "12"], false),
        (&["dft", "2", "3", "2"], false),
        (&["shuffle", "3", "4"], false),
        (&["wavelet", "haar", "3"], false),
        (&["wavelet", "d4", "2"], false),
        (&["group", "cyclic", "12"], false),
        (&["group", "quaternionic", "2"], false),
        (&["group", "en", "2"], false),
        (&["group", "product", "cyclic", "2", "cyclic", "3"], false),
        (&["group", "metacyclic", "3", "7", "2", "0"], false),
        (&["group", "metacyclic", "2", "8", "7", "4"], true),
    ];
    for (i, (spec, up_to_phase)) in cases.iter().enumerate() {
        let out = path_str(&dir, &format!("case{i}.circ"));
        let mut synth = vec!["synth"];
        synth.extend_from_slice(spec);
        synth.extend_from_slice(&["--out", &out]);
        let (code, _, stderr) = run(&synth);
        assert_eq!(code, 0, "synth {spec:?} succeeds: {stderr}");

        let mut verify = vec!["verify", &out];
        verify.extend_from_slice(spec);
        if *up_to_phase {
            verify.push("--up-to-phase");
        }
        let (code, _, stderr) = run(&verify);
        assert_eq!(code, 0, "verify {spec:?} succeeds: {stderr}");
    }
}
