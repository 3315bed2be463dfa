//! Synthesis of structured unitaries into circuits, with matrix oracles.
//!
//! Every `synth_*` function compiles a classical matrix factorization into a
//! [`Circuit`], and for each synthesized family this module also provides an
//! *independently evaluated* reference matrix (`dft_matrix`, `walsh_matrix`,
//! `haar_matrix`, `d4_scaling_matrix`) built straight from the defining
//! formula rather than from the circuit, so tests compare two genuinely
//! different constructions:
//!
//! * [`synth_shuffle`] — the perfect shuffle Π(m,n) as a single structured
//!   permutation (register swap / digit rotation / general shuffle).
//! * [`synth_direct_sum`] — a block-diagonal direct sum as one multiplexed
//!   gate.
//! * [`synth_gkron`] — a generalized Kronecker product of square tuples as
//!   exactly two multiplexed gates, one per factor tuple.
//! * [`synth_walsh`], [`synth_haar`], [`synth_d4_scaling`],
//!   [`synth_wavelet`] — wavelet-style cascades built from a
//!   [`ScalingFamily`] of per-level scaling circuits.
//! * [`synth_dft`] — the mixed-radix fast Fourier transform: one small
//!   Fourier gate per radix register, one twiddle phase gate per level, and
//!   a single trailing digit reversal.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{
    Circuit, CircuitError, Condition, Gate, PermKind, RegSpan, RegisterLayout, Turn, ValueTest,
};
use crate::matrix::{gkron, shuffle_matrix, ComplexMatrix, MatrixError, MatrixTuple, Side};

#[derive(Debug, Error)]
pub enum SynthError {
    /// A parameter violates the constraints of the requested construction.
    /// The message names the violated relation.
    #[error("domain constraint violated: {relation}")]
    Domain { relation: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
    /// A synthesized circuit failed its built-in check against the
    /// reference matrix it is required to match.
    #[error("synthesis verification failed: {0}")]
    Verification(String),
}

fn domain(relation: impl Into<String>) -> SynthError {
    SynthError::Domain { relation: relation.into() }
}

/// The 2×2 rotation W = (1/√2)·[[1,1],[1,−1]] — the elementary building
/// block of the Walsh, Haar, and binary Fourier transforms.
pub fn hadamard_w() -> ComplexMatrix {
    let s = 1.0 / 2.0_f64.sqrt();
    ComplexMatrix::from_real_rows(&[&[s, s], &[s, -s]]).expect("fixed shape")
}

/// The n×n discrete Fourier matrix F_n[i,j] = ω_n^{ij}/√n with
/// ω_n = exp(2πi/n), evaluated entry by entry.
pub fn dft_matrix(n: usize) -> ComplexMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let e = (i as u128 * j as u128 % n as u128) as f64;
        let angle = std::f64::consts::TAU * e / n as f64;
        Complex64::from_polar(scale, angle)
    })
}

/// The 2^n×2^n Walsh–Hadamard matrix from the sign formula
/// W[x,y] = (−1)^(Σ xᵢyᵢ)/√(2^n) (bitwise inner product of the indices).
pub fn walsh_matrix(n: usize) -> ComplexMatrix {
    let size = 1usize << n;
    let scale = 1.0 / (size as f64).sqrt();
    ComplexMatrix::from_fn(size, size, |x, y| {
        let sign = if (x & y).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(sign * scale, 0.0)
    })
}

/// The 2^n×2^n Haar wavelet matrix from the defining recursion
/// H_2 = W and H_{2^(t+1)} = Π(2, 2^t) · ((H_{2^t}, I) ⊗_R W).
pub fn haar_matrix(n: usize) -> Result<ComplexMatrix, SynthError> {
    if n == 0 {
        return Err(domain("qubit count n must be at least 1 (got 0)"));
    }
    let w = hadamard_w();
    let mut h = w.clone();
    for t in 1..n {
        let half = 1usize << t;
        let a = MatrixTuple::new(vec![h, ComplexMatrix::identity(half)])?;
        let c = MatrixTuple::constant(w.clone(), half)?;
        h = shuffle_matrix(2, half).mul(&gkron(Side::Right, &a, &c)?)?;
    }
    Ok(h)
}

/// The four Daubechies-4 filter constants
/// (k0, k1, k2, k3) = ((3+√3), (3−√3), (1−√3), (1+√3)) / (4√2).
pub fn d4_constants() -> [f64; 4] {
    let s3 = 3.0_f64.sqrt();
    let d = 4.0 * 2.0_f64.sqrt();
    [(3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d, (1.0 + s3) / d]
}

/// First rotation of the Daubechies-4 factorization:
/// C0 = 2·[[k3, −k2], [k2, k3]].
pub fn d4_c0() -> ComplexMatrix {
    let [_, _, k2, k3] = d4_constants();
    ComplexMatrix::from_real_rows(&[&[2.0 * k3, -2.0 * k2], &[2.0 * k2, 2.0 * k3]])
        .expect("fixed shape")
}

/// Second rotation of the Daubechies-4 factorization:
/// C1 = ½·[[√3, 1], [1, −√3]].
pub fn d4_c1() -> ComplexMatrix {
    let s3 = 3.0_f64.sqrt();
    ComplexMatrix::from_real_rows(&[&[s3 / 2.0, 0.5], &[0.5, -s3 / 2.0]]).expect("fixed shape")
}

fn check_d4_dim(m: usize) -> Result<(), SynthError> {
    if m % 2 != 0 || m < 4 {
        return Err(domain(format!("dimension m must be even and at least 4 (got {m})")));
    }
    Ok(())
}

/// The m×m Daubechies-4 scaling matrix, evaluated from the banded entry
/// formula: row i holds the filter (k0..k3) when i is even and the
/// alternating mirror filter when i is odd, shifted right by two per row
/// pair, with the last two rows wrapping around to the first two columns.
pub fn d4_scaling_matrix(m: usize) -> Result<ComplexMatrix, SynthError> {
    check_d4_dim(m)?;
    let k = d4_constants();
    let entry = |i: usize, j: usize| -> f64 {
        // The band wraps around the torus: the last row pair re-enters at
        // the first two columns, which shifts the filter index by m.
        let wrap: i64 = if i >= m - 2 && j < 2 { m as i64 } else { 0 };
        let (i, j) = (i as i64, j as i64);
        let idx = if i % 2 == 0 { j - i + wrap } else { 2 + i - j - wrap };
        if (0..4).contains(&idx) {
            let v = k[idx as usize];
            if i % 2 == 0 {
                v
            } else if j % 2 == 0 {
                v
            } else {
                -v
            }
        } else {
            0.0
        }
    };
    Ok(ComplexMatrix::from_fn(m, m, |i, j| Complex64::new(entry(i, j), 0.0)))
}

/// Synthesizes the shuffle permutation Π(m,n) as a circuit.
///
/// Trivial factors give an empty circuit, equal factors a register swap,
/// (2, 2^k) a digit rotation on a qubit layout, and the general case one
/// shuffle permutation on a two-register layout.
pub fn synth_shuffle(m: usize, n: usize) -> Result<Circuit, SynthError> {
    if m == 0 || n == 0 {
        return Err(domain(format!("shuffle factors must be at least 1 (got {m}, {n})")));
    }
    if m == 1 || n == 1 {
        let dims = if m * n == 1 { vec![] } else { vec![m * n] };
        return Ok(Circuit::new(RegisterLayout::new(dims)?));
    }
    if m == n {
        let mut circuit = Circuit::new(RegisterLayout::new(vec![m, m])?);
        circuit.append(Gate::IndexPermutation {
            perm: PermKind::SwapRegisters { a: 1, b: 2 },
            zero_control: None,
        })?;
        return Ok(circuit);
    }
    if m == 2 && n.is_power_of_two() {
        let qubits = 1 + n.trailing_zeros() as usize;
        let mut circuit = Circuit::new(RegisterLayout::new(vec![2; qubits])?);
        circuit.append(Gate::IndexPermutation {
            perm: PermKind::BitShift { span: RegSpan::new(1, qubits)? },
            zero_control: None,
        })?;
        return Ok(circuit);
    }
    let mut circuit = Circuit::new(RegisterLayout::new(vec![m, n])?);
    circuit.append(Gate::IndexPermutation {
        perm: PermKind::Shuffle { span: RegSpan::new(1, 2)?, m, n },
        zero_control: None,
    })?;
    Ok(circuit)
}

/// Synthesizes the block-diagonal direct sum of a tuple of n unitaries of
/// size m×m as one multiplexed gate on layout (n, m).
pub fn synth_direct_sum(cases: &MatrixTuple) -> Result<Circuit, SynthError> {
    let n = cases.len();
    let m = cases.member_rows();
    if cases.member_cols() != m {
        return Err(domain(format!(
            "direct-sum members must be square (got {m}x{})",
            cases.member_cols()
        )));
    }
    if n < 2 || m < 2 {
        return Err(domain(format!(
            "direct sum needs at least 2 members of dimension at least 2 (got {n} of {m}x{m})"
        )));
    }
    let mut circuit = Circuit::new(RegisterLayout::new(vec![n, m])?);
    circuit.append(Gate::Multiplexed {
        control: RegSpan::single(1)?,
        target: RegSpan::single(2)?,
        cases: cases.clone(),
    })?;
    Ok(circuit)
}

/// Synthesizes a generalized Kronecker product of square tuples — `a` an
/// m-tuple of n×n unitaries, `c` an n-tuple of m×m unitaries — as exactly
/// two multiplexed gates, each controlled by the register the other tuple
/// acts on. The right product lives on layout (n, m), the left on (m, n).
pub fn synth_gkron(
    side: Side,
    a: &MatrixTuple,
    c: &MatrixTuple,
) -> Result<Circuit, SynthError> {
    let n = a.member_rows();
    let m = c.member_rows();
    if a.member_cols() != n || c.member_cols() != m {
        return Err(domain("generalized-product tuples must hold square matrices".to_string()));
    }
    if a.len() != m || c.len() != n {
        return Err(domain(format!(
            "tuple pattern mismatch: need an m-tuple of n x n and an n-tuple of m x m, \
             got a {}-tuple of {n}x{n} and a {}-tuple of {m}x{m}",
            a.len(),
            c.len()
        )));
    }
    if n < 2 || m < 2 {
        return Err(domain(format!(
            "member dimensions must be at least 2 (got {n} and {m})"
        )));
    }
    let (layout, first_ctrl, second_ctrl) = match side {
        Side::Right => (RegisterLayout::new(vec![n, m])?, 1, 2),
        Side::Left => (RegisterLayout::new(vec![m, n])?, 2, 1),
    };
    let gates = vec![
        Gate::Multiplexed {
            control: RegSpan::single(first_ctrl)?,
            target: RegSpan::single(3 - first_ctrl)?,
            cases: c.clone(),
        },
        Gate::Multiplexed {
            control: RegSpan::single(second_ctrl)?,
            target: RegSpan::single(3 - second_ctrl)?,
            cases: a.clone(),
        },
    ];
    Ok(Circuit::with_gates(layout, gates)?)
}

/// Synthesizes the Walsh–Hadamard transform on n qubits: one W per qubit.
pub fn synth_walsh(n: usize) -> Result<Circuit, SynthError> {
    if n == 0 {
        return Err(domain("qubit count n must be at least 1 (got 0)"));
    }
    let mut circuit = Circuit::new(RegisterLayout::new(vec![2; n])?);
    for r in 1..=n {
        circuit.append(Gate::SingleUnitary { target: RegSpan::single(r)?, matrix: hadamard_w() })?;
    }
    Ok(circuit)
}

/// Synthesizes the Haar wavelet transform on n qubits as the unrolled
/// recursion: a cascade of W rotations, each conditioned on all
/// higher-index (less significant) qubits being zero, followed by a cascade
/// of progressively wider digit rotations under the same conditions.
pub fn synth_haar(n: usize) -> Result<Circuit, SynthError> {
    if n == 0 {
        return Err(domain("qubit count n must be at least 1 (got 0)"));
    }
    let mut circuit = Circuit::new(RegisterLayout::new(vec![2; n])?);
    let w = hadamard_w();
    circuit.append(Gate::SingleUnitary { target: RegSpan::single(n)?, matrix: w.clone() })?;
    for r in (1..n).rev() {
        circuit.append(Gate::ValueControlled {
            control: RegSpan::new(r + 1, n)?,
            value: 0,
            target: RegSpan::single(r)?,
            matrix: w.clone(),
        })?;
    }
    for t in 2..=n {
        let zero_control = if t < n { Some(RegSpan::new(t + 1, n)?) } else { None };
        circuit.append(Gate::IndexPermutation {
            perm: PermKind::BitShift { span: RegSpan::new(1, t)? },
            zero_control,
        })?;
    }
    Ok(circuit)
}

/// Synthesizes the m×m Daubechies-4 scaling matrix on layout (m/2, 2) as
/// rotation C0 on the low register, the subtract-two-if-odd permutation,
/// and rotation C1 on the low register.
pub fn synth_d4_scaling(m: usize) -> Result<Circuit, SynthError> {
    check_d4_dim(m)?;
    let layout = RegisterLayout::new(vec![m / 2, 2])?;
    let gates = d4_stage_gates(RegSpan::new(1, 2)?);
    Ok(Circuit::with_gates(layout, gates)?)
}

/// The three Daubechies-4 stage gates on an arbitrary span (the low
/// register of the stage is the span's last register).
fn d4_stage_gates(span: RegSpan) -> Vec<Gate> {
    let low = RegSpan::new(span.last(), span.last()).expect("single register span");
    vec![
        Gate::SingleUnitary { target: low, matrix: d4_c0() },
        Gate::IndexPermutation {
            perm: PermKind::SubtractTwoIfOdd { span },
            zero_control: None,
        },
        Gate::SingleUnitary { target: low, matrix: d4_c1() },
    ]
}

/// A family of scaling circuits generating a wavelet transform: a base
/// circuit for the smallest level plus a rule producing the scaling circuit
/// for every higher level. All circuits live on all-qubit layouts.
pub struct ScalingFamily {
    name: String,
    base_level: usize,
    base_circuit: Circuit,
    scaler: Box<dyn Fn(usize) -> Result<Circuit, SynthError>>,
}

impl ScalingFamily {
    /// A custom family. `base_circuit` must live on `base_level` qubits
    /// (base_level ≥ 1); `scaler(lvl)` must produce, for each lvl ≥ 1, the
    /// scaling circuit on `base_level + lvl` qubits.
    pub fn custom(
        name: impl Into<String>,
        base_level: usize,
        base_circuit: Circuit,
        scaler: Box<dyn Fn(usize) -> Result<Circuit, SynthError>>,
    ) -> Result<Self, SynthError> {
        if base_level == 0 {
            return Err(domain("base level must be at least 1 (got 0)"));
        }
        if base_circuit.layout().dims() != vec![2; base_level] {
            return Err(domain(format!(
                "base circuit must live on {base_level} qubits, got layout {:?}",
                base_circuit.layout().dims()
            )));
        }
        Ok(Self { name: name.into(), base_level, base_circuit, scaler })
    }

    /// The Haar family: base W on one qubit; every stage applies W to the
    /// last (least significant) qubit.
    pub fn haar() -> Self {
        let base_layout = RegisterLayout::new(vec![2]).expect("qubit layout");
        let base = Circuit::with_gates(
            base_layout,
            vec![Gate::SingleUnitary {
                target: RegSpan::single(1).expect("register 1"),
                matrix: hadamard_w(),
            }],
        )
        .expect("W is unitary");
        Self {
            name: "haar".into(),
            base_level: 1,
            base_circuit: base,
            scaler: Box::new(|lvl| {
                let qubits = lvl + 1;
                let layout = RegisterLayout::new(vec![2; qubits])?;
                Ok(Circuit::with_gates(
                    layout,
                    vec![Gate::SingleUnitary {
                        target: RegSpan::single(qubits)?,
                        matrix: hadamard_w(),
                    }],
                )?)
            }),
        }
    }

    /// The Daubechies-4 family: base is the 4×4 scaling circuit on two
    /// qubits; every stage applies the C0 / subtract-two / C1 pattern on
    /// the full current span.
    pub fn daubechies_d4() -> Self {
        let stage = |qubits: usize| -> Result<Circuit, SynthError> {
            let layout = RegisterLayout::new(vec![2; qubits])?;
            let gates = d4_stage_gates(RegSpan::new(1, qubits)?);
            Ok(Circuit::with_gates(layout, gates)?)
        };
        Self {
            name: "d4".into(),
            base_level: 2,
            base_circuit: stage(2).expect("4x4 stage is valid"),
            scaler: Box::new(move |lvl| stage(lvl + 2)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base_level(&self) -> usize {
        self.base_level
    }

    pub fn base_circuit(&self) -> &Circuit {
        &self.base_circuit
    }

    /// The scaling circuit for level `lvl` ≥ 1, validated to live on
    /// `base_level + lvl` qubits.
    pub fn scaling_circuit(&self, lvl: usize) -> Result<Circuit, SynthError> {
        if lvl == 0 {
            return Err(domain("scaling circuits exist for levels >= 1; level 0 is the base"));
        }
        let circuit = (self.scaler)(lvl)?;
        let want = self.base_level + lvl;
        if circuit.layout().dims() != vec![2; want] {
            return Err(domain(format!(
                "scaling circuit for level {lvl} must live on {want} qubits, got layout {:?}",
                circuit.layout().dims()
            )));
        }
        Ok(circuit)
    }
}

impl std::fmt::Debug for ScalingFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalingFamily")
            .field("name", &self.name)
            .field("base_level", &self.base_level)
            .finish_non_exhaustive()
    }
}

/// Rewrites a gate so it fires only when the (previously untouched) qubit
/// `top` reads zero. Plain unitaries become value-controlled; existing
/// controls and zero-control spans grow by the new register, which works
/// whenever they already end at `top − 1`.
fn gate_under_zero_top(gate: &Gate, top: usize) -> Result<Gate, SynthError> {
    let top_span = RegSpan::new(top, top)?;
    let grow = |span: RegSpan| -> Result<RegSpan, SynthError> {
        if span.last() != top - 1 {
            return Err(domain(format!(
                "cannot extend control span {span} with register {top}: not adjacent"
            )));
        }
        Ok(span.extended())
    };
    let grow_opt = |z: &Option<RegSpan>| -> Result<Option<RegSpan>, SynthError> {
        match z {
            None => Ok(Some(top_span)),
            Some(z) => Ok(Some(grow(*z)?)),
        }
    };
    Ok(match gate {
        Gate::SingleUnitary { target, matrix } => Gate::ValueControlled {
            control: top_span,
            value: 0,
            target: *target,
            matrix: matrix.clone(),
        },
        Gate::ValueControlled { control, value, target, matrix } => Gate::ValueControlled {
            control: grow(*control)?,
            // The merged value gains a low digit of 0 in the dimension-2
            // register, so it doubles.
            value: value * 2,
            target: *target,
            matrix: matrix.clone(),
        },
        Gate::Multiplexed { .. } => {
            return Err(domain(
                "cannot embed a multiplexed gate under a zero control".to_string(),
            ))
        }
        Gate::PhasePair { a, b, turn, zero_control } => Gate::PhasePair {
            a: *a,
            b: *b,
            turn: *turn,
            zero_control: grow_opt(zero_control)?,
        },
        Gate::PredicatePhase { predicate, phase } => {
            let mut conditions = predicate.conditions().to_vec();
            conditions.push(Condition { span: top_span, test: ValueTest::Equals(0) });
            Gate::PredicatePhase {
                predicate: crate::circuit::Predicate::new(conditions),
                phase: *phase,
            }
        }
        Gate::IndexPermutation { perm, zero_control } => Gate::IndexPermutation {
            perm: perm.clone(),
            zero_control: grow_opt(zero_control)?,
        },
    })
}

/// Unrolls the wavelet recursion
/// U_{2^(t)} = Π(2, 2^(t−1)) · ((U_{2^(t−1)}, I) ⊗_R I₂) · D_{2^t}
/// for `levels` steps above the family's base: each step runs the family's
/// scaling circuit, then the previous transform embedded under "newest
/// qubit is zero", then one digit rotation over the whole span.
pub fn synth_wavelet(family: &ScalingFamily, levels: usize) -> Result<Circuit, SynthError> {
    let total = family.base_level + levels;
    let mut gates: Vec<Gate> = family.base_circuit.gates().to_vec();
    for lvl in 1..=levels {
        let t = family.base_level + lvl;
        let stage = family.scaling_circuit(lvl)?;
        let mut next: Vec<Gate> = stage.gates().to_vec();
        for gate in &gates {
            next.push(gate_under_zero_top(gate, t)?);
        }
        next.push(Gate::IndexPermutation {
            perm: PermKind::BitShift { span: RegSpan::new(1, t)? },
            zero_control: None,
        });
        gates = next;
    }
    Ok(Circuit::with_gates(RegisterLayout::new(vec![2; total])?, gates)?)
}

/// Ascending prime factorization by trial division. Returns an empty list
/// for n ≤ 1.
pub fn prime_factors(n: usize) -> Vec<usize> {
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        while rest % p == 0 {
            factors.push(p);
            rest /= p;
        }
        p += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    factors
}

/// The gates of the mixed-radix Fourier transform over `factors`, placed on
/// consecutive registers starting at `first` of some enclosing layout. When
/// `zero_control` is given, every emitted gate fires only while that span
/// reads zero. Register `first + i` must have dimension `factors[i]`.
pub(crate) fn dft_gates(
    factors: &[usize],
    first: usize,
    zero_control: Option<RegSpan>,
) -> Result<Vec<Gate>, SynthError> {
    if factors.is_empty() {
        return Err(domain("factor list must be non-empty"));
    }
    for &f in factors {
        if f < 2 {
            return Err(domain(format!("every factor must be at least 2 (got {f})")));
        }
    }
    let r = factors.len();
    let last = first + r - 1;
    let mut gates = Vec::with_capacity(2 * r);
    let mut remaining: u64 = factors.iter().map(|&f| f as u64).product();
    for (i, &f) in factors.iter().enumerate() {
        let reg = first + i;
        let fourier = dft_matrix(f);
        gates.push(match zero_control {
            None => Gate::SingleUnitary { target: RegSpan::single(reg)?, matrix: fourier },
            Some(z) => Gate::ValueControlled {
                control: z,
                value: 0,
                target: RegSpan::single(reg)?,
                matrix: fourier,
            },
        });
        if reg < last {
            gates.push(Gate::PhasePair {
                a: RegSpan::single(reg)?,
                b: RegSpan::new(reg + 1, last)?,
                turn: Turn::new(1, remaining)?,
                zero_control,
            });
        }
        remaining /= f as u64;
    }
    gates.push(Gate::IndexPermutation {
        perm: PermKind::DigitReversal { span: RegSpan::new(first, last)? },
        zero_control,
    });
    Ok(gates)
}

/// Synthesizes the discrete Fourier transform of dimension N = ∏ factors on
/// layout (n_1, …, n_r): per level a Fourier gate on register i and a
/// twiddle phase pair against the merged remaining registers, with all the
/// inter-level shuffles accumulated into one trailing digit reversal.
pub fn synth_dft(factors: &[usize]) -> Result<Circuit, SynthError> {
    let gates = dft_gates(factors, 1, None)?;
    Ok(Circuit::with_gates(RegisterLayout::new(factors.to_vec())?, gates)?)
}
