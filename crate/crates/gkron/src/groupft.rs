//! Circuits computing the Fourier transform on the supported group
//! families, checked against the dense oracle matrices of
//! [`group`](crate::group).
//!
//! Each `synth_*_ft` constructor returns a [`GroupFtResult`]: the circuit,
//! the encoding fixing its row/column order, and whether the circuit
//! equals the reference transform exactly or only up to a diagonal of
//! unit-modulus phases. The metacyclic synthesis is verified internally by
//! simulation (its phase structure is extracted, not assumed); the other
//! families are exact by construction and covered by tests.
//! [`apply_phase_correction`] turns an up-to-phase result into an exact
//! one by appending per-basis-state phase gates, and [`verify`] re-checks
//! any result against a freshly built oracle.

use std::fmt;

use crate::circuit::{
    Circuit, CircuitError, Condition, Gate, GateCountReport, PermKind, Predicate, RegSpan,
    RegisterLayout, Turn, ValueTest,
};
use crate::group::{
    fourier_oracle, irreps, standard_encoding, EncodingMap, GroupSpec,
};
use crate::matrix::{equal_up_to_diag_phase, Complex64, ComplexMatrix, PhaseVector};
use crate::transforms::{
    dft_gates, dft_matrix, hadamard_w, prime_factors, synth_dft, SynthError,
};

/// How a synthesized circuit relates to the reference transform matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    /// The circuit's unitary equals the reference matrix.
    Exact,
    /// The circuit's unitary equals diag(φ) · reference for a vector φ of
    /// unit-modulus phases (stored in the result).
    UpToPhase,
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equivalence::Exact => write!(f, "exact"),
            Equivalence::UpToPhase => write!(f, "up to phase"),
        }
    }
}

/// A synthesized group Fourier transform: the circuit, the index encoding
/// that names its rows and columns, and its equivalence class relative to
/// the oracle.
#[derive(Debug, Clone)]
pub struct GroupFtResult {
    spec: GroupSpec,
    circuit: Circuit,
    encoding: EncodingMap,
    equivalence: Equivalence,
    extracted_phases: Option<PhaseVector>,
}

impl GroupFtResult {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn encoding(&self) -> &EncodingMap {
        &self.encoding
    }

    pub fn equivalence(&self) -> Equivalence {
        self.equivalence
    }

    /// The diagonal phases φ with circuit = diag(φ)·reference, present
    /// exactly when the equivalence is [`Equivalence::UpToPhase`].
    pub fn extracted_phases(&self) -> Option<&PhaseVector> {
        self.extracted_phases.as_ref()
    }
}

fn encoding_for(spec: &GroupSpec) -> Result<EncodingMap, SynthError> {
    let group = spec.build()?;
    Ok(standard_encoding(&irreps(&group)?)?)
}

/// Fourier transform of Z_n: a single dense transform gate (the trivial
/// group gets an empty circuit on an empty layout).
pub fn synth_cyclic_ft(n: usize) -> Result<GroupFtResult, SynthError> {
    cyclic_ft_impl(n, false)
}

fn cyclic_ft_impl(n: usize, inline_dft: bool) -> Result<GroupFtResult, SynthError> {
    let spec = GroupSpec::Cyclic(n);
    let encoding = encoding_for(&spec)?;
    let circuit = if n == 1 {
        Circuit::new(RegisterLayout::new(Vec::new())?)
    } else if inline_dft {
        synth_dft(&prime_factors(n))?
    } else {
        Circuit::with_gates(
            RegisterLayout::new(vec![n])?,
            vec![Gate::SingleUnitary { target: RegSpan::single(1)?, matrix: dft_matrix(n) }],
        )?
    };
    Ok(GroupFtResult {
        spec,
        circuit,
        encoding,
        equivalence: Equivalence::Exact,
        extracted_phases: None,
    })
}

/// Fourier transform of the quaternionic group of order 4n on a (2, 2n)
/// layout: transform the rotation register, rotate the reflection bit on
/// the two self-paired frequencies, and fix the signs of the off-diagonal
/// coefficient rows with one predicate phase.
pub fn synth_quaternion_ft(n: usize) -> Result<GroupFtResult, SynthError> {
    quaternion_ft_impl(n, false)
}

fn quaternion_ft_impl(n: usize, inline_dft: bool) -> Result<GroupFtResult, SynthError> {
    let spec = GroupSpec::Quaternionic(n);
    let encoding = encoding_for(&spec)?; // validates n even and ≥ 2
    let two_n = 2 * n;
    let mut dims = vec![2];
    if inline_dft {
        dims.extend(prime_factors(two_n));
    } else {
        dims.push(two_n);
    }
    let layout = RegisterLayout::new(dims.clone())?;
    let a_span = RegSpan::new(2, dims.len())?;
    let reg1 = RegSpan::single(1)?;
    let w = hadamard_w();
    let mut gates = Vec::new();
    if inline_dft {
        gates.extend(dft_gates(&prime_factors(two_n), 2, None)?);
    } else {
        gates.push(Gate::SingleUnitary { target: a_span, matrix: dft_matrix(two_n) });
    }
    gates.push(Gate::ValueControlled {
        control: a_span,
        value: 0,
        target: reg1,
        matrix: w.clone(),
    });
    gates.push(Gate::ValueControlled {
        control: a_span,
        value: n as u64,
        target: reg1,
        matrix: w,
    });
    gates.push(Gate::PredicatePhase {
        predicate: Predicate::new(vec![
            Condition { span: reg1, test: ValueTest::Equals(1) },
            Condition { span: a_span, test: ValueTest::GreaterThan(n as u64) },
            Condition { span: a_span, test: ValueTest::IsOdd },
        ]),
        phase: Complex64::new(-1.0, 0.0),
    });
    Ok(GroupFtResult {
        spec,
        circuit: Circuit::with_gates(layout, gates)?,
        encoding,
        equivalence: Equivalence::Exact,
        extracted_phases: None,
    })
}

/// Fourier transform of the metacyclic group ⟨a, b | a^m, b^q = a^s,
/// b⁻¹ab = a^r⟩ on a (q, d, m/d) layout (dimension-1 registers omitted,
/// d = gcd(r−1, m)): transform the a-register, couple the b-register to
/// the d-digit of the frequency by a phase pair on the one-dimensional
/// subspace, and transform the b-register there. The result matches the
/// oracle up to a diagonal of phases, which this function extracts by
/// simulation; synthesis fails if the match does not hold at `tol`.
pub fn synth_metacyclic_ft(
    q: usize,
    m: usize,
    r: usize,
    s: usize,
) -> Result<GroupFtResult, SynthError> {
    metacyclic_ft_impl(q, m, r, s, false, crate::DEFAULT_TOL)
}

fn metacyclic_ft_impl(
    q: usize,
    m: usize,
    r: usize,
    s: usize,
    inline_dft: bool,
    tol: f64,
) -> Result<GroupFtResult, SynthError> {
    let spec = GroupSpec::Metacyclic { q, m, r, s };
    let group = spec.build()?; // validates the presentation constraints
    let reps = irreps(&group)?;
    let encoding = standard_encoding(&reps)?;
    let oracle = fourier_oracle(&reps)?;
    let r = r % m;
    let s = s % m;
    let d = crate::group::metacyclic_d(m, r);
    let md = m / d;
    let mut dims = vec![q];
    if d >= 2 {
        dims.push(d);
    }
    if md >= 2 {
        dims.push(md);
    }
    let layout = RegisterLayout::new(dims.clone())?;
    let a_span = RegSpan::new(2, dims.len())?;
    let reg1 = RegSpan::single(1)?;
    let mut gates = Vec::new();
    if inline_dft && d >= 2 && md >= 2 {
        gates.extend(dft_gates(&[d, md], 2, None)?);
    } else {
        gates.push(Gate::SingleUnitary { target: a_span, matrix: dft_matrix(m) });
    }
    if d >= 2 {
        gates.push(Gate::PhasePair {
            a: reg1,
            b: RegSpan::single(2)?,
            turn: Turn::new(s as u64, (q * d) as u64)?,
            zero_control: if md >= 2 { Some(RegSpan::single(3)?) } else { None },
        });
    }
    let f_q = dft_matrix(q);
    if md >= 2 {
        let md_reg = if d >= 2 { 3 } else { 2 };
        gates.push(Gate::ValueControlled {
            control: RegSpan::single(md_reg)?,
            value: 0,
            target: reg1,
            matrix: f_q,
        });
    } else {
        gates.push(Gate::SingleUnitary { target: reg1, matrix: f_q });
    }
    let circuit = Circuit::with_gates(layout, gates)?;
    let phases = equal_up_to_diag_phase(&circuit.simulate()?, oracle.matrix(), tol)?
        .ok_or_else(|| {
            SynthError::Verification(format!(
                "metacyclic circuit for '{spec}' does not match the reference transform \
                 up to a diagonal of phases at tolerance {tol:e}"
            ))
        })?;
    Ok(GroupFtResult {
        spec,
        circuit,
        encoding,
        equivalence: Equivalence::UpToPhase,
        extracted_phases: Some(phases),
    })
}

/// Fourier transform of E_n (order 2·4^n) on 2n+1 qubits: a rotation on
/// the sign qubit, then per qubit pair a rotation of the flip bit
/// conditioned on the one-dimensional frequency sector and an
/// unconditional rotation of the sign-pattern bit. Exact, with 2n+1 gates
/// of which n are controlled.
pub fn synth_en_ft(n: usize) -> Result<GroupFtResult, SynthError> {
    let spec = GroupSpec::En(n);
    let encoding = encoding_for(&spec)?; // enforces the order cap
    let layout = RegisterLayout::new(vec![2; 2 * n + 1])?;
    let w = hadamard_w();
    let reg1 = RegSpan::single(1)?;
    let mut gates = vec![Gate::SingleUnitary { target: reg1, matrix: w.clone() }];
    for i in 1..=n {
        gates.push(Gate::ValueControlled {
            control: reg1,
            value: 0,
            target: RegSpan::single(2 * i)?,
            matrix: w.clone(),
        });
        gates.push(Gate::SingleUnitary { target: RegSpan::single(2 * i + 1)?, matrix: w.clone() });
    }
    Ok(GroupFtResult {
        spec,
        circuit: Circuit::with_gates(layout, gates)?,
        encoding,
        equivalence: Equivalence::Exact,
        extracted_phases: None,
    })
}

fn shift_span(span: RegSpan, offset: usize) -> Result<RegSpan, CircuitError> {
    RegSpan::new(span.first() + offset, span.last() + offset)
}

fn shift_perm(perm: &PermKind, offset: usize) -> Result<PermKind, CircuitError> {
    Ok(match perm {
        PermKind::Shuffle { span, m, n } => {
            PermKind::Shuffle { span: shift_span(*span, offset)?, m: *m, n: *n }
        }
        PermKind::BitShift { span } => PermKind::BitShift { span: shift_span(*span, offset)? },
        PermKind::SubtractTwoIfOdd { span } => {
            PermKind::SubtractTwoIfOdd { span: shift_span(*span, offset)? }
        }
        PermKind::SwapRegisters { a, b } => {
            PermKind::SwapRegisters { a: a + offset, b: b + offset }
        }
        PermKind::DigitReversal { span } => {
            PermKind::DigitReversal { span: shift_span(*span, offset)? }
        }
    })
}

/// The same gate acting `offset` registers later in a wider layout.
fn shift_gate(gate: &Gate, offset: usize) -> Result<Gate, CircuitError> {
    Ok(match gate {
        Gate::SingleUnitary { target, matrix } => Gate::SingleUnitary {
            target: shift_span(*target, offset)?,
            matrix: matrix.clone(),
        },
        Gate::Multiplexed { control, target, cases } => Gate::Multiplexed {
            control: shift_span(*control, offset)?,
            target: shift_span(*target, offset)?,
            cases: cases.clone(),
        },
        Gate::ValueControlled { control, value, target, matrix } => Gate::ValueControlled {
            control: shift_span(*control, offset)?,
            value: *value,
            target: shift_span(*target, offset)?,
            matrix: matrix.clone(),
        },
        Gate::PhasePair { a, b, turn, zero_control } => Gate::PhasePair {
            a: shift_span(*a, offset)?,
            b: shift_span(*b, offset)?,
            turn: *turn,
            zero_control: zero_control.map(|z| shift_span(z, offset)).transpose()?,
        },
        Gate::PredicatePhase { predicate, phase } => {
            let conditions = predicate
                .conditions()
                .iter()
                .map(|c| {
                    Ok(Condition { span: shift_span(c.span, offset)?, test: c.test })
                })
                .collect::<Result<Vec<_>, CircuitError>>()?;
            Gate::PredicatePhase { predicate: Predicate::new(conditions), phase: *phase }
        }
        Gate::IndexPermutation { perm, zero_control } => Gate::IndexPermutation {
            perm: shift_perm(perm, offset)?,
            zero_control: zero_control.map(|z| shift_span(z, offset)).transpose()?,
        },
    })
}

/// Fourier transform of a direct product from exact transforms of the
/// factors: the first factor's circuit on the leading registers, the
/// second factor's circuit shifted onto the trailing ones. Up-to-phase
/// inputs are rejected — correct them first.
pub fn synth_product_ft(
    first: &GroupFtResult,
    second: &GroupFtResult,
) -> Result<GroupFtResult, SynthError> {
    if first.equivalence != Equivalence::Exact || second.equivalence != Equivalence::Exact {
        return Err(SynthError::Verification(
            "product synthesis needs exact factors; apply phase correction to \
             up-to-phase factors first"
                .into(),
        ));
    }
    let spec = GroupSpec::Product(
        Box::new(first.spec.clone()),
        Box::new(second.spec.clone()),
    );
    let encoding = encoding_for(&spec)?; // enforces the product order cap
    let mut dims = first.circuit.layout().dims().to_vec();
    dims.extend_from_slice(second.circuit.layout().dims());
    let layout = RegisterLayout::new(dims)?;
    let offset = first.circuit.layout().num_registers();
    let mut gates = first.circuit.gates().to_vec();
    for gate in second.circuit.gates() {
        gates.push(shift_gate(gate, offset)?);
    }
    Ok(GroupFtResult {
        spec,
        circuit: Circuit::with_gates(layout, gates)?,
        encoding,
        equivalence: Equivalence::Exact,
        extracted_phases: None,
    })
}

/// Turns an up-to-phase result into an exact one by appending one
/// predicate-phase gate per basis state whose extracted phase is not 1,
/// each multiplying that state by the conjugate phase. Exact inputs are
/// returned unchanged.
pub fn apply_phase_correction(result: &GroupFtResult) -> Result<GroupFtResult, SynthError> {
    if result.equivalence == Equivalence::Exact {
        return Ok(result.clone());
    }
    let phases = result.extracted_phases.as_ref().ok_or_else(|| {
        SynthError::Verification("up-to-phase result carries no extracted phases".into())
    })?;
    let full = result.circuit.layout().full_span().ok_or_else(|| {
        SynthError::Verification("cannot phase-correct a circuit with no registers".into())
    })?;
    let one = Complex64::new(1.0, 0.0);
    let mut circuit = result.circuit.clone();
    for (index, phi) in phases.phases().iter().enumerate() {
        let correction = phi.conj() / phi.norm();
        if (correction - one).norm() <= 1e-12 {
            continue;
        }
        circuit.append(Gate::PredicatePhase {
            predicate: Predicate::new(vec![Condition {
                span: full,
                test: ValueTest::Equals(index as u64),
            }]),
            phase: correction,
        })?;
    }
    Ok(GroupFtResult {
        spec: result.spec.clone(),
        circuit,
        encoding: result.encoding.clone(),
        equivalence: Equivalence::Exact,
        extracted_phases: None,
    })
}

/// Outcome of re-checking a synthesized transform against a freshly built
/// oracle.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub spec: GroupSpec,
    pub dimension: usize,
    pub equivalence: Equivalence,
    /// Largest entrywise deviation from the oracle — after removing the
    /// extracted diagonal phases for a passing up-to-phase result.
    pub max_deviation: f64,
    /// Diagonal phases extracted during an up-to-phase comparison.
    pub phases: Option<PhaseVector>,
    pub gates: GateCountReport,
    pub passed: bool,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group:          {}", self.spec)?;
        writeln!(f, "dimension:      {}", self.dimension)?;
        writeln!(f, "equivalence:    {}", self.equivalence)?;
        writeln!(f, "max deviation:  {:.3e}", self.max_deviation)?;
        if let Some(phases) = &self.phases {
            let nontrivial = phases
                .phases()
                .iter()
                .filter(|p| (**p - Complex64::new(1.0, 0.0)).norm() > 1e-9)
                .count();
            writeln!(f, "phase rows:     {nontrivial} of {} differ from 1", phases.len())?;
        }
        writeln!(f, "status:         {}", if self.passed { "PASSED" } else { "FAILED" })?;
        write!(f, "{}", self.gates)
    }
}

/// Simulates the result's circuit and compares it with the oracle of its
/// group under the declared equivalence. A dimension mismatch is an error;
/// a value mismatch yields `passed = false`.
pub fn verify(result: &GroupFtResult, tol: f64) -> Result<VerifyReport, SynthError> {
    let group = result.spec.build()?;
    let oracle = fourier_oracle(&irreps(&group)?)?;
    let sim = result.circuit.simulate()?;
    if sim.rows() != oracle.order() {
        return Err(SynthError::Verification(format!(
            "circuit dimension {} does not match the group order {}",
            sim.rows(),
            oracle.order()
        )));
    }
    let (max_deviation, phases, passed) = match result.equivalence {
        Equivalence::Exact => {
            let dev = sim.max_abs_diff(oracle.matrix())?;
            (dev, None, dev <= tol)
        }
        Equivalence::UpToPhase => match equal_up_to_diag_phase(&sim, oracle.matrix(), tol)? {
            Some(extracted) => {
                let n = oracle.order();
                let rescaled = ComplexMatrix::from_fn(n, n, |i, j| {
                    extracted.phases()[i] * oracle.matrix().get(i, j)
                });
                let dev = sim.max_abs_diff(&rescaled)?;
                (dev, Some(extracted), true)
            }
            None => (sim.max_abs_diff(oracle.matrix())?, None, false),
        },
    };
    Ok(VerifyReport {
        spec: result.spec.clone(),
        dimension: oracle.order(),
        equivalence: result.equivalence,
        max_deviation,
        phases,
        gates: result.circuit.gate_count(),
        passed,
    })
}

/// Synthesizes the Fourier transform for any supported group spec.
///
/// With `inline_dft`, dense transform payloads on composite-dimension
/// registers are expanded into mixed-radix transform gate sequences over
/// factored registers (where the family admits it). Product components
/// are phase-corrected automatically, so the result is exact for every
/// family except a bare metacyclic spec, which stays up-to-phase with its
/// extracted diagonal. `tol` bounds the metacyclic internal verification.
pub fn synth_group_ft(
    spec: &GroupSpec,
    inline_dft: bool,
    tol: f64,
) -> Result<GroupFtResult, SynthError> {
    match spec {
        GroupSpec::Cyclic(n) => cyclic_ft_impl(*n, inline_dft),
        GroupSpec::Quaternionic(n) => quaternion_ft_impl(*n, inline_dft),
        GroupSpec::Metacyclic { q, m, r, s } => {
            metacyclic_ft_impl(*q, *m, *r, *s, inline_dft, tol)
        }
        GroupSpec::En(n) => synth_en_ft(*n),
        GroupSpec::Product(s1, s2) => {
            let first = apply_phase_correction(&synth_group_ft(s1, inline_dft, tol)?)?;
            let second = apply_phase_correction(&synth_group_ft(s2, inline_dft, tol)?)?;
            synth_product_ft(&first, &second)
        }
    }
}
