//! Command-line front end: synthesize transform circuits to text documents,
//! verify circuit files against reference matrices, export the reference
//! matrices themselves, and count gates.
//!
//! Exit statuses are stable: 0 success, 1 verification mismatch, 2 for
//! usage, parse, or I/O failures (including dimension mismatches), 3 for
//! domain constraint violations (the violated relation is printed).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gkron::circuit::text::{from_text, to_text, TextError};
use gkron::circuit::{Circuit, CircuitError};
use gkron::group::{fourier_oracle, irreps, GroupError, GroupSpec};
use gkron::groupft::synth_group_ft;
use gkron::matrix::{
    equal_up_to_diag_phase, kron, shuffle_matrix, Complex64, ComplexMatrix, MatrixError,
    PhaseVector, Side,
};
use gkron::transforms::{
    d4_scaling_matrix, dft_matrix, haar_matrix, hadamard_w, prime_factors, synth_d4_scaling,
    synth_dft, synth_haar, synth_shuffle, synth_walsh, synth_wavelet, walsh_matrix,
    ScalingFamily, SynthError,
};
use gkron::DEFAULT_TOL;

#[derive(Parser)]
#[command(
    name = "gkron",
    about = "Synthesize, verify, export, and count transform circuits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a circuit for a transform spec and write it to a file.
    Synth {
        /// Transform spec, e.g. `walsh 3`, `dft 8`, `dft 2 3 4`, `haar 2`,
        /// `d4 8`, `shuffle 2 4`, `wavelet d4 2`, `group cyclic 12`,
        /// `group metacyclic 3 7 2 0`, `group product cyclic 2 cyclic 3`.
        #[arg(required = true)]
        spec: Vec<String>,
        /// Output path for the circuit document.
        #[arg(long)]
        out: PathBuf,
        /// Comparison tolerance for constructions that self-check.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Expand embedded Fourier payloads into elementary gates.
        #[arg(long)]
        inline_dft: bool,
        /// Shorthand appending one trailing parameter to the spec.
        #[arg(long)]
        qubits: Option<usize>,
    },
    /// Check a circuit document against the reference matrix of a spec.
    Verify {
        /// Path of the circuit document.
        circuit: PathBuf,
        /// Reference spec (same grammar as `synth`).
        #[arg(required = true)]
        spec: Vec<String>,
        /// Largest accepted entrywise deviation.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Accept a per-row unit-modulus phase in front of the reference.
        #[arg(long)]
        up_to_phase: bool,
        /// Shorthand appending one trailing parameter to the spec.
        #[arg(long)]
        qubits: Option<usize>,
    },
    /// Export the reference matrix of a spec in the matrix text format.
    Matrix {
        /// Reference spec (same grammar as `synth`).
        #[arg(required = true)]
        spec: Vec<String>,
        /// Output path; the matrix prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Shorthand appending one trailing parameter to the spec.
        #[arg(long)]
        qubits: Option<usize>,
    },
    /// Print the gate-count report of a circuit document.
    Gatecount {
        /// Path of the circuit document.
        circuit: PathBuf,
    },
}

/// A command failure: the process exit status plus the message for stderr.
struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        let code = match e {
            GroupError::Spec(_) => 2,
            _ => 3,
        };
        fail(code, e.to_string())
    }
}

impl From<SynthError> for Failure {
    fn from(e: SynthError) -> Self {
        let code = match &e {
            SynthError::Domain { .. } => 3,
            SynthError::Group(GroupError::Spec(_)) => 2,
            SynthError::Group(_) => 3,
            SynthError::Verification(_) => 1,
            SynthError::Circuit(_) | SynthError::Matrix(_) => 2,
        };
        fail(code, e.to_string())
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Self {
        fail(2, e.to_string())
    }
}

impl From<MatrixError> for Failure {
    fn from(e: MatrixError) -> Self {
        fail(2, e.to_string())
    }
}

impl From<TextError> for Failure {
    fn from(e: TextError) -> Self {
        fail(2, format!("circuit document: {e}"))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        fail(2, e.to_string())
    }
}

#[derive(Debug, Clone, Copy)]
enum WaveletKind {
    Haar,
    D4,
}

/// A parsed transform spec: which reference transform the command is about.
enum Spec {
    Walsh(usize),
    Haar(usize),
    D4(usize),
    Dft(Vec<usize>),
    Shuffle(usize, usize),
    Wavelet(WaveletKind, usize),
    Group(GroupSpec),
}

fn parse_int(token: &str, what: &str) -> CliResult<usize> {
    token
        .parse()
        .map_err(|_| fail(2, format!("invalid spec: {what} must be a non-negative integer, got `{token}`")))
}

fn parse_ints(tokens: &[String], what: &str) -> CliResult<Vec<usize>> {
    tokens.iter().map(|t| parse_int(t, what)).collect()
}

fn expect_arity(head: &str, tokens: &[String], want: usize) -> CliResult<()> {
    if tokens.len() != want {
        return Err(fail(
            2,
            format!("invalid spec: `{head}` takes {want} parameter(s), got {}", tokens.len()),
        ));
    }
    Ok(())
}

fn parse_spec(tokens: &[String]) -> CliResult<Spec> {
    let (head, rest) = tokens
        .split_first()
        .ok_or_else(|| fail(2, "invalid spec: no transform named"))?;
    match head.as_str() {
        "walsh" => {
            expect_arity(head, rest, 1)?;
            Ok(Spec::Walsh(parse_int(&rest[0], "qubit count")?))
        }
        "haar" => {
            expect_arity(head, rest, 1)?;
            Ok(Spec::Haar(parse_int(&rest[0], "qubit count")?))
        }
        "d4" => {
            expect_arity(head, rest, 1)?;
            Ok(Spec::D4(parse_int(&rest[0], "dimension")?))
        }
        "dft" => {
            if rest.is_empty() {
                return Err(fail(2, "invalid spec: `dft` needs a dimension or a factor list"));
            }
            let values = parse_ints(rest, "factor")?;
            let factors = if values.len() == 1 {
                let n = values[0];
                let factors = prime_factors(n);
                if factors.is_empty() {
                    return Err(fail(
                        3,
                        format!("domain constraint violated: transform dimension must be at least 2 (got {n})"),
                    ));
                }
                factors
            } else {
                values
            };
            if let Some(f) = factors.iter().find(|&&f| f < 2) {
                return Err(fail(
                    3,
                    format!("domain constraint violated: every factor must be at least 2 (got {f})"),
                ));
            }
            Ok(Spec::Dft(factors))
        }
        "shuffle" => {
            expect_arity(head, rest, 2)?;
            let m = parse_int(&rest[0], "block count")?;
            let n = parse_int(&rest[1], "block size")?;
            if m == 0 || n == 0 {
                return Err(fail(
                    3,
                    "domain constraint violated: shuffle factors must be at least 1",
                ));
            }
            Ok(Spec::Shuffle(m, n))
        }
        "wavelet" => {
            expect_arity(head, rest, 2)?;
            let kind = match rest[0].as_str() {
                "haar" => WaveletKind::Haar,
                "d4" => WaveletKind::D4,
                other => {
                    return Err(fail(2, format!("invalid spec: unknown wavelet family `{other}`")))
                }
            };
            Ok(Spec::Wavelet(kind, parse_int(&rest[1], "level count")?))
        }
        "group" => {
            let refs: Vec<&str> = rest.iter().map(String::as_str).collect();
            Ok(Spec::Group(GroupSpec::parse(&refs)?))
        }
        other => Err(fail(2, format!("invalid spec: unknown transform `{other}`"))),
    }
}

fn spec_tokens(mut tokens: Vec<String>, qubits: Option<usize>) -> Vec<String> {
    if let Some(n) = qubits {
        tokens.push(n.to_string());
    }
    tokens
}

/// The reference matrix the spec names, evaluated from its defining formula.
fn oracle_matrix(spec: &Spec) -> CliResult<ComplexMatrix> {
    Ok(match spec {
        Spec::Walsh(n) => walsh_matrix(*n),
        Spec::Haar(n) => haar_matrix(*n)?,
        Spec::D4(m) => d4_scaling_matrix(*m)?,
        Spec::Dft(factors) => dft_matrix(factors.iter().product()),
        Spec::Shuffle(m, n) => shuffle_matrix(*m, *n),
        Spec::Wavelet(kind, levels) => wavelet_oracle(*kind, *levels)?,
        Spec::Group(g) => fourier_oracle(&irreps(&g.build()?)?)?.matrix().clone(),
    })
}

/// The wavelet recursion evaluated directly in matrix algebra: starting
/// from the family's base matrix, each level multiplies the scaling matrix,
/// the previous transform embedded on the even indices, and one digit
/// rotation.
fn wavelet_oracle(kind: WaveletKind, levels: usize) -> CliResult<ComplexMatrix> {
    let (mut u, base_level) = match kind {
        WaveletKind::Haar => (hadamard_w(), 1usize),
        WaveletKind::D4 => (d4_scaling_matrix(4)?, 2),
    };
    for lvl in 1..=levels {
        let dim = 1usize << (base_level + lvl);
        let scaling = match kind {
            WaveletKind::Haar => {
                kron(Side::Right, &ComplexMatrix::identity(dim / 2), &hadamard_w())
            }
            WaveletKind::D4 => d4_scaling_matrix(dim)?,
        };
        let embedded = ComplexMatrix::from_fn(dim, dim, |i, j| {
            if i % 2 == 0 && j % 2 == 0 {
                u.get(i / 2, j / 2)
            } else if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        u = shuffle_matrix(2, dim / 2).mul(&embedded)?.mul(&scaling)?;
    }
    Ok(u)
}

/// Synthesizes the circuit a spec describes.
fn synthesize(spec: &Spec, inline_dft: bool, tol: f64) -> CliResult<Circuit> {
    Ok(match spec {
        Spec::Walsh(n) => synth_walsh(*n)?,
        Spec::Haar(n) => synth_haar(*n)?,
        Spec::D4(m) => synth_d4_scaling(*m)?,
        Spec::Dft(factors) => synth_dft(factors)?,
        Spec::Shuffle(m, n) => synth_shuffle(*m, *n)?,
        Spec::Wavelet(WaveletKind::Haar, levels) => synth_wavelet(&ScalingFamily::haar(), *levels)?,
        Spec::Wavelet(WaveletKind::D4, levels) => {
            synth_wavelet(&ScalingFamily::daubechies_d4(), *levels)?
        }
        Spec::Group(g) => synth_group_ft(g, inline_dft, tol)?.circuit().clone(),
    })
}

fn read_circuit(path: &PathBuf) -> CliResult<Circuit> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    Ok(from_text(&text)?)
}

fn cmd_synth(
    tokens: Vec<String>,
    out: PathBuf,
    tol: f64,
    inline_dft: bool,
    qubits: Option<usize>,
) -> CliResult<()> {
    let spec = parse_spec(&spec_tokens(tokens, qubits))?;
    let circuit = synthesize(&spec, inline_dft, tol)?;
    std::fs::write(&out, to_text(&circuit))
        .map_err(|e| fail(2, format!("{}: {e}", out.display())))?;
    println!(
        "wrote {} gate(s) on layout {:?} to {}",
        circuit.len(),
        circuit.layout().dims(),
        out.display()
    );
    Ok(())
}

fn render_phases(phases: &PhaseVector) -> String {
    let mut out = String::from("phases:\n");
    for (i, p) in phases.phases().iter().enumerate() {
        let _ = writeln!(out, "  row {i}: {:.14e},{:.14e}", p.re, p.im);
    }
    out
}

fn cmd_verify(
    circuit_path: PathBuf,
    tokens: Vec<String>,
    tol: f64,
    up_to_phase: bool,
    qubits: Option<usize>,
) -> CliResult<()> {
    let circuit = read_circuit(&circuit_path)?;
    let spec = parse_spec(&spec_tokens(tokens, qubits))?;
    let oracle = oracle_matrix(&spec)?;
    let sim = circuit.simulate()?;
    if sim.rows() != oracle.rows() {
        return Err(fail(
            2,
            format!(
                "dimension mismatch: circuit acts on dimension {}, reference on {}",
                sim.rows(),
                oracle.rows()
            ),
        ));
    }
    if up_to_phase {
        match equal_up_to_diag_phase(&sim, &oracle, tol)? {
            Some(phases) => {
                let scaled = ComplexMatrix::from_fn(oracle.rows(), oracle.cols(), |i, j| {
                    phases.phases()[i] * oracle.get(i, j)
                });
                let deviation = sim.max_abs_diff(&scaled)?;
                println!("match up to diagonal phase; max deviation: {deviation:.14e}");
                print!("{}", render_phases(&phases));
                Ok(())
            }
            None => Err(fail(1, "mismatch: no diagonal of unit phases relates the matrices")),
        }
    } else {
        let deviation = sim.max_abs_diff(&oracle)?;
        if deviation <= tol {
            println!("match; max deviation: {deviation:.14e}");
            Ok(())
        } else {
            Err(fail(1, format!("mismatch: max deviation {deviation:.14e} exceeds {tol:.14e}")))
        }
    }
}

fn cmd_matrix(tokens: Vec<String>, out: Option<PathBuf>, qubits: Option<usize>) -> CliResult<()> {
    let spec = parse_spec(&spec_tokens(tokens, qubits))?;
    let matrix = oracle_matrix(&spec)?;
    let text = matrix.to_text();
    match out {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
            println!("wrote a {}x{} matrix to {}", matrix.rows(), matrix.cols(), path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_gatecount(circuit_path: PathBuf) -> CliResult<()> {
    let circuit = read_circuit(&circuit_path)?;
    println!("{}", circuit.gate_count());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth { spec, out, tol, inline_dft, qubits } => {
            cmd_synth(spec, out, tol, inline_dft, qubits)
        }
        Command::Verify { circuit, spec, tol, up_to_phase, qubits } => {
            cmd_verify(circuit, spec, tol, up_to_phase, qubits)
        }
        Command::Matrix { spec, out, qubits } => cmd_matrix(spec, out, qubits),
        Command::Gatecount { circuit } => cmd_gatecount(circuit),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
