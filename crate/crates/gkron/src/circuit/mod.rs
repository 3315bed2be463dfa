//! A circuit representation over mixed-radix registers.
//!
//! A [`Circuit`] is a [`RegisterLayout`] — an ordered list of registers, each
//! with its own dimension — plus a temporally ordered gate list. Gates refer
//! to registers through contiguous [`RegSpan`]s: adjacent registers merge
//! into one logical register whose value is read big-endian (earlier
//! registers are more significant). Merging costs nothing at simulation
//! time, so a single gate kind covers both single-register and
//! merged-register forms.
//!
//! The gate set is chosen so that every gate has an obvious matrix action
//! and a coarse elementary-gate cost:
//!
//! * [`Gate::SingleUnitary`] — an arbitrary unitary on one span.
//! * [`Gate::Multiplexed`] — a different unitary on the target for every
//!   value of a control span.
//! * [`Gate::ValueControlled`] — one unitary applied only when a control
//!   span holds one specific value.
//! * [`Gate::PhasePair`] — multiplies each basis state by ω^(u·v) where u, v
//!   are the values of two spans and ω is a rational [`Turn`] of the circle.
//! * [`Gate::PredicatePhase`] — multiplies the basis states satisfying a
//!   [`Predicate`] by a fixed unit-modulus phase.
//! * [`Gate::IndexPermutation`] — a structured classical permutation
//!   ([`PermKind`]) of basis states.
//!
//! Phase and permutation gates optionally carry a `zero_control` span: the
//! gate acts only on basis states where that span reads 0. This is what lets
//! recursive constructions embed a sub-circuit under "all newer registers
//! are zero" without enlarging the gate set.
//!
//! [`Circuit::simulate`] produces the full unitary (gates listed first are
//! applied first), and [`Circuit::gate_count`] reports a coarse estimate of
//! the two-level-gate cost of each gate kind.

pub mod text;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::{ComplexMatrix, MatrixTuple};

/// Refuse to build unitaries larger than this in [`Circuit::simulate`].
pub const MAX_SIMULATE_DIM: usize = 4096;

/// Tolerance used when validating that gate payloads are unitary and that
/// explicit phases have modulus 1.
pub const GATE_VALIDATION_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("register {index} has dimension {dim}; registers need dimension at least 2")]
    BadRegisterDim { index: usize, dim: usize },
    #[error("register span {first}..{last} is malformed (registers are numbered from 1, first <= last)")]
    MalformedSpan { first: usize, last: usize },
    #[error("register span {first}..{last} is out of range for a layout of {registers} registers")]
    SpanOutOfRange { first: usize, last: usize, registers: usize },
    #[error("register spans must be disjoint: {0}")]
    OverlappingSpans(String),
    #[error("gate payload is {rows}x{cols} but its span has dimension {expected}")]
    PayloadShape { expected: usize, rows: usize, cols: usize },
    #[error("multiplexed gate needs one case per control value: control dimension {expected}, got {got} cases")]
    CaseCount { expected: usize, got: usize },
    #[error("gate payload is not unitary (deviation {deviation:.3e})")]
    PayloadNotUnitary { deviation: f64 },
    #[error("value {value} is out of range for a span of dimension {dim}")]
    ValueOutOfRange { value: u64, dim: usize },
    #[error("phase has modulus {modulus} (expected 1)")]
    PhaseModulus { modulus: f64 },
    #[error("turn denominator must be positive")]
    ZeroDenominator,
    #[error("shuffle factors {m}x{n} do not match span dimension {span_dim}")]
    ShuffleFactors { m: usize, n: usize, span_dim: usize },
    #[error("cyclic digit shift needs all registers in its span to share one dimension")]
    UnequalSpanDims,
    #[error("subtract-two-if-odd needs an even span dimension of at least 4, got {dim}")]
    SubtractDim { dim: usize },
    #[error("cannot swap register {a} (dimension {da}) with register {b} (dimension {db})")]
    SwapDims { a: usize, b: usize, da: usize, db: usize },
    #[error("register swap needs two distinct registers, got {index} twice")]
    SwapSameRegister { index: usize },
    #[error("circuits have different register layouts")]
    LayoutMismatch,
    #[error("simulation dimension {dim} exceeds the limit of {max}")]
    TooLargeToSimulate { dim: usize, max: usize },
}

/// An ordered list of register dimensions. Register numbering is 1-based;
/// register 1 is the most significant in the big-endian basis-state index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    dims: Vec<usize>,
}

impl RegisterLayout {
    /// Builds a layout. Every register needs dimension at least 2; an empty
    /// layout (total dimension 1) is allowed.
    pub fn new(dims: Vec<usize>) -> Result<Self, CircuitError> {
        for (i, &d) in dims.iter().enumerate() {
            if d < 2 {
                return Err(CircuitError::BadRegisterDim { index: i + 1, dim: d });
            }
        }
        Ok(Self { dims })
    }

    pub fn num_registers(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension of register `r` (1-based).
    pub fn dim(&self, r: usize) -> usize {
        self.dims[r - 1]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// The span covering every register. `None` for the empty layout.
    pub fn full_span(&self) -> Option<RegSpan> {
        if self.dims.is_empty() {
            None
        } else {
            Some(RegSpan { first: 1, last: self.dims.len() })
        }
    }

    pub fn check_span(&self, span: RegSpan) -> Result<(), CircuitError> {
        if span.last > self.dims.len() {
            return Err(CircuitError::SpanOutOfRange {
                first: span.first,
                last: span.last,
                registers: self.dims.len(),
            });
        }
        Ok(())
    }

    /// Product of the dimensions inside `span`.
    pub fn span_dim(&self, span: RegSpan) -> usize {
        self.dims[span.first - 1..span.last].iter().product()
    }

    /// Basis-index stride of `span`: the product of all dimensions after it.
    fn span_stride(&self, span: RegSpan) -> usize {
        self.dims[span.last..].iter().product()
    }

    /// The big-endian merged value of `span` inside a full basis index.
    pub fn span_value(&self, index: usize, span: RegSpan) -> usize {
        (index / self.span_stride(span)) % self.span_dim(span)
    }

    /// Replaces the merged value of `span` inside `index`.
    pub fn with_span_value(&self, index: usize, span: RegSpan, value: usize) -> usize {
        let stride = self.span_stride(span);
        let old = self.span_value(index, span);
        index - old * stride + value * stride
    }

    /// Decodes a basis index into one digit per register.
    pub fn digits(&self, index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        let mut rest = index;
        for (i, &d) in self.dims.iter().enumerate().rev() {
            digits[i] = rest % d;
            rest /= d;
        }
        digits
    }

    /// Encodes one digit per register back into a basis index.
    pub fn index_of_digits(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&v, &d)| acc * d + v)
    }
}

/// A contiguous, 1-based, inclusive range of registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegSpan {
    first: usize,
    last: usize,
}

impl RegSpan {
    pub fn new(first: usize, last: usize) -> Result<Self, CircuitError> {
        if first == 0 || first > last {
            return Err(CircuitError::MalformedSpan { first, last });
        }
        Ok(Self { first, last })
    }

    pub fn single(register: usize) -> Result<Self, CircuitError> {
        Self::new(register, register)
    }

    pub fn first(&self) -> usize {
        self.first
    }

    pub fn last(&self) -> usize {
        self.last
    }

    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false // spans always contain at least one register
    }

    pub fn overlaps(&self, other: &RegSpan) -> bool {
        !(self.last < other.first || other.last < self.first)
    }

    /// Extends the span by one register on its high-index end.
    pub fn extended(&self) -> RegSpan {
        RegSpan { first: self.first, last: self.last + 1 }
    }
}

impl fmt::Display for RegSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A rational fraction of a full turn of the circle, reduced and with
/// `0 <= num < den`. `Turn { num, den }` stands for the root of unity
/// ω = exp(2πi·num/den).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Turn {
    num: u64,
    den: u64,
}

impl Turn {
    pub fn new(num: u64, den: u64) -> Result<Self, CircuitError> {
        if den == 0 {
            return Err(CircuitError::ZeroDenominator);
        }
        let num = num % den;
        let g = gcd(num, den);
        if g == 0 {
            // num == 0: gcd(0, den) = den, handled below; this branch is unreachable.
            return Ok(Self { num: 0, den: 1 });
        }
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// The root of unity ω this turn stands for.
    pub fn phase(&self) -> Complex64 {
        self.root_power(1)
    }

    /// ω^exponent, computed with the exponent reduced modulo the denominator
    /// so precision does not degrade with large exponents.
    pub fn root_power(&self, exponent: u64) -> Complex64 {
        let e = ((self.num as u128 * exponent as u128) % self.den as u128) as f64;
        let angle = std::f64::consts::TAU * e / self.den as f64;
        Complex64::from_polar(1.0, angle)
    }

    /// ω^(u·v) for two span values, the coefficient applied by
    /// [`Gate::PhasePair`].
    pub fn pair_power(&self, u: usize, v: usize) -> Complex64 {
        let uv = (u as u128 * v as u128) % self.den as u128;
        self.root_power(uv as u64)
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A single test on the merged value of one span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueTest {
    Equals(u64),
    GreaterThan(u64),
    IsOdd,
}

/// One span together with a test on its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Condition {
    pub span: RegSpan,
    pub test: ValueTest,
}

/// A conjunction of [`Condition`]s on span values. The empty conjunction is
/// always true; "always false" is expressible as `GreaterThan(dim - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    conditions: Vec<Condition>,
}

impl Predicate {
    pub fn new(conditions: Vec<Condition>) -> Self {
        Self { conditions }
    }

    pub fn always() -> Self {
        Self { conditions: Vec::new() }
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    /// Evaluates the conjunction on one basis index.
    pub fn eval(&self, layout: &RegisterLayout, index: usize) -> bool {
        self.conditions.iter().all(|c| {
            let v = layout.span_value(index, c.span) as u64;
            match c.test {
                ValueTest::Equals(x) => v == x,
                ValueTest::GreaterThan(x) => v > x,
                ValueTest::IsOdd => v % 2 == 1,
            }
        })
    }

    fn validate(&self, layout: &RegisterLayout) -> Result<(), CircuitError> {
        for c in &self.conditions {
            layout.check_span(c.span)?;
            let dim = layout.span_dim(c.span) as u64;
            match c.test {
                ValueTest::Equals(v) | ValueTest::GreaterThan(v) => {
                    if v >= dim {
                        return Err(CircuitError::ValueOutOfRange { value: v, dim: dim as usize });
                    }
                }
                ValueTest::IsOdd => {}
            }
        }
        Ok(())
    }
}

/// A structured permutation of basis states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermKind {
    /// On a span of dimension m·n, maps value e·m + d to d·n + e
    /// (d < m, e < n): the perfect shuffle that swaps an m-part and an
    /// n-part of the span value.
    Shuffle { span: RegSpan, m: usize, n: usize },
    /// On a span whose registers all share one dimension, rotates digits:
    /// the last register's digit becomes the first, everything else shifts
    /// one place later. Equals `Shuffle` with m = the shared dimension.
    BitShift { span: RegSpan },
    /// On a span of even dimension m >= 4, maps odd values j to j - 2
    /// (mod m) and fixes even values.
    SubtractTwoIfOdd { span: RegSpan },
    /// Exchanges the digits of two equal-dimension registers.
    SwapRegisters { a: usize, b: usize },
    /// Reverses the per-register digits of a span (the value is re-read with
    /// the register dimensions likewise reversed).
    DigitReversal { span: RegSpan },
}

impl PermKind {
    fn validate(&self, layout: &RegisterLayout) -> Result<(), CircuitError> {
        match *self {
            PermKind::Shuffle { span, m, n } => {
                layout.check_span(span)?;
                let dim = layout.span_dim(span);
                if m == 0 || n == 0 || m * n != dim {
                    return Err(CircuitError::ShuffleFactors { m, n, span_dim: dim });
                }
            }
            PermKind::BitShift { span } => {
                layout.check_span(span)?;
                let d = layout.dim(span.first);
                if (span.first..=span.last).any(|r| layout.dim(r) != d) {
                    return Err(CircuitError::UnequalSpanDims);
                }
            }
            PermKind::SubtractTwoIfOdd { span } => {
                layout.check_span(span)?;
                let dim = layout.span_dim(span);
                if dim % 2 != 0 || dim < 4 {
                    return Err(CircuitError::SubtractDim { dim });
                }
            }
            PermKind::SwapRegisters { a, b } => {
                if a == b {
                    return Err(CircuitError::SwapSameRegister { index: a });
                }
                for r in [a, b] {
                    layout.check_span(RegSpan::single(r)?)?;
                }
                if layout.dim(a) != layout.dim(b) {
                    return Err(CircuitError::SwapDims {
                        a,
                        b,
                        da: layout.dim(a),
                        db: layout.dim(b),
                    });
                }
            }
            PermKind::DigitReversal { span } => {
                layout.check_span(span)?;
            }
        }
        Ok(())
    }

    /// The registers the permutation touches, for disjointness checks.
    fn touched_span(&self) -> RegSpan {
        match *self {
            PermKind::Shuffle { span, .. }
            | PermKind::BitShift { span }
            | PermKind::SubtractTwoIfOdd { span }
            | PermKind::DigitReversal { span } => span,
            PermKind::SwapRegisters { a, b } => RegSpan { first: a.min(b), last: a.max(b) },
        }
    }

    /// Where the permutation sends one full basis index.
    pub fn map_index(&self, layout: &RegisterLayout, index: usize) -> usize {
        match *self {
            PermKind::Shuffle { span, m, n } => {
                let t = layout.span_value(index, span);
                layout.with_span_value(index, span, (t % m) * n + t / m)
            }
            PermKind::BitShift { span } => {
                let d = layout.dim(span.first);
                let dim = layout.span_dim(span);
                let t = layout.span_value(index, span);
                layout.with_span_value(index, span, (t % d) * (dim / d) + t / d)
            }
            PermKind::SubtractTwoIfOdd { span } => {
                let dim = layout.span_dim(span);
                let t = layout.span_value(index, span);
                let t2 = if t % 2 == 1 { (t + dim - 2) % dim } else { t };
                layout.with_span_value(index, span, t2)
            }
            PermKind::SwapRegisters { a, b } => {
                let mut digits = layout.digits(index);
                digits.swap(a - 1, b - 1);
                layout.index_of_digits(&digits)
            }
            PermKind::DigitReversal { span } => {
                let dims = &layout.dims()[span.first - 1..span.last];
                let t = layout.span_value(index, span);
                // Decode under the span dims, then re-encode the reversed
                // digit string under the reversed dims.
                let mut digits = Vec::with_capacity(dims.len());
                let mut rest = t;
                for &d in dims.iter().rev() {
                    digits.push(rest % d);
                    rest /= d;
                }
                // `digits` is now least-significant-first, i.e. already the
                // reversed digit order; the reversed dims are `dims` reversed,
                // which pairs digits[i] with dims[len-1-i].
                let reversed = digits
                    .iter()
                    .zip(dims.iter().rev())
                    .fold(0, |acc, (&v, &d)| acc * d + v);
                layout.with_span_value(index, span, reversed)
            }
        }
    }
}

/// One gate. See the module docs for the catalogue.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    SingleUnitary {
        target: RegSpan,
        matrix: ComplexMatrix,
    },
    Multiplexed {
        control: RegSpan,
        target: RegSpan,
        cases: MatrixTuple,
    },
    ValueControlled {
        control: RegSpan,
        value: u64,
        target: RegSpan,
        matrix: ComplexMatrix,
    },
    PhasePair {
        a: RegSpan,
        b: RegSpan,
        turn: Turn,
        zero_control: Option<RegSpan>,
    },
    PredicatePhase {
        predicate: Predicate,
        phase: Complex64,
    },
    IndexPermutation {
        perm: PermKind,
        zero_control: Option<RegSpan>,
    },
}

fn check_disjoint(spans: &[(&str, RegSpan)]) -> Result<(), CircuitError> {
    for (i, (name_a, a)) in spans.iter().enumerate() {
        for (name_b, b) in &spans[i + 1..] {
            if a.overlaps(b) {
                return Err(CircuitError::OverlappingSpans(format!(
                    "{name_a} {a} overlaps {name_b} {b}"
                )));
            }
        }
    }
    Ok(())
}

fn check_unitary_payload(m: &ComplexMatrix, span_dim: usize) -> Result<(), CircuitError> {
    if m.rows() != span_dim || m.cols() != span_dim {
        return Err(CircuitError::PayloadShape {
            expected: span_dim,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    // Shape was checked above, so unitarity_deviation cannot fail.
    let deviation = m.unitarity_deviation().expect("square payload");
    if deviation > GATE_VALIDATION_TOL {
        return Err(CircuitError::PayloadNotUnitary { deviation });
    }
    Ok(())
}

impl Gate {
    /// Checks the gate against a layout: spans in range and mutually
    /// disjoint where required, payload shapes matching span dimensions,
    /// payloads unitary, values in range, phases of modulus 1.
    pub fn validate(&self, layout: &RegisterLayout) -> Result<(), CircuitError> {
        match self {
            Gate::SingleUnitary { target, matrix } => {
                layout.check_span(*target)?;
                check_unitary_payload(matrix, layout.span_dim(*target))
            }
            Gate::Multiplexed { control, target, cases } => {
                layout.check_span(*control)?;
                layout.check_span(*target)?;
                check_disjoint(&[("control", *control), ("target", *target)])?;
                let ctrl_dim = layout.span_dim(*control);
                if cases.len() != ctrl_dim {
                    return Err(CircuitError::CaseCount { expected: ctrl_dim, got: cases.len() });
                }
                let tgt_dim = layout.span_dim(*target);
                for case in cases.members() {
                    check_unitary_payload(case, tgt_dim)?;
                }
                Ok(())
            }
            Gate::ValueControlled { control, value, target, matrix } => {
                layout.check_span(*control)?;
                layout.check_span(*target)?;
                check_disjoint(&[("control", *control), ("target", *target)])?;
                let ctrl_dim = layout.span_dim(*control);
                if *value >= ctrl_dim as u64 {
                    return Err(CircuitError::ValueOutOfRange { value: *value, dim: ctrl_dim });
                }
                check_unitary_payload(matrix, layout.span_dim(*target))
            }
            Gate::PhasePair { a, b, zero_control, .. } => {
                layout.check_span(*a)?;
                layout.check_span(*b)?;
                let mut spans = vec![("first factor", *a), ("second factor", *b)];
                if let Some(z) = zero_control {
                    layout.check_span(*z)?;
                    spans.push(("zero control", *z));
                }
                check_disjoint(&spans)
            }
            Gate::PredicatePhase { predicate, phase } => {
                predicate.validate(layout)?;
                let modulus = phase.norm();
                if (modulus - 1.0).abs() > GATE_VALIDATION_TOL {
                    return Err(CircuitError::PhaseModulus { modulus });
                }
                Ok(())
            }
            Gate::IndexPermutation { perm, zero_control } => {
                perm.validate(layout)?;
                if let Some(z) = zero_control {
                    layout.check_span(*z)?;
                    check_disjoint(&[("permuted registers", perm.touched_span()), ("zero control", *z)])?;
                }
                Ok(())
            }
        }
    }

    /// The full matrix of the gate on the given layout. The gate must be
    /// valid for the layout.
    pub fn matrix(&self, layout: &RegisterLayout) -> ComplexMatrix {
        let n = layout.total_dim();
        let mut g = ComplexMatrix::zeros(n, n);
        let one = Complex64::new(1.0, 0.0);
        match self {
            Gate::SingleUnitary { target, matrix } => {
                let dim = layout.span_dim(*target);
                for j in 0..n {
                    let t = layout.span_value(j, *target);
                    for t2 in 0..dim {
                        let i = layout.with_span_value(j, *target, t2);
                        g.set(i, j, matrix.get(t2, t));
                    }
                }
            }
            Gate::Multiplexed { control, target, cases } => {
                let dim = layout.span_dim(*target);
                for j in 0..n {
                    let c = layout.span_value(j, *control);
                    let case = cases.get(c);
                    let t = layout.span_value(j, *target);
                    for t2 in 0..dim {
                        let i = layout.with_span_value(j, *target, t2);
                        g.set(i, j, case.get(t2, t));
                    }
                }
            }
            Gate::ValueControlled { control, value, target, matrix } => {
                let dim = layout.span_dim(*target);
                for j in 0..n {
                    if layout.span_value(j, *control) as u64 == *value {
                        let t = layout.span_value(j, *target);
                        for t2 in 0..dim {
                            let i = layout.with_span_value(j, *target, t2);
                            g.set(i, j, matrix.get(t2, t));
                        }
                    } else {
                        g.set(j, j, one);
                    }
                }
            }
            Gate::PhasePair { a, b, turn, zero_control } => {
                for j in 0..n {
                    let active = zero_control.map_or(true, |z| layout.span_value(j, z) == 0);
                    let coeff = if active {
                        turn.pair_power(layout.span_value(j, *a), layout.span_value(j, *b))
                    } else {
                        one
                    };
                    g.set(j, j, coeff);
                }
            }
            Gate::PredicatePhase { predicate, phase } => {
                for j in 0..n {
                    let coeff = if predicate.eval(layout, j) { *phase } else { one };
                    g.set(j, j, coeff);
                }
            }
            Gate::IndexPermutation { perm, zero_control } => {
                for j in 0..n {
                    let active = zero_control.map_or(true, |z| layout.span_value(j, z) == 0);
                    let i = if active { perm.map_index(layout, j) } else { j };
                    g.set(i, j, one);
                }
            }
        }
        g
    }

    /// Coarse estimate of the gate's cost in elementary two-level gates.
    fn controlled_op_contribution(&self, layout: &RegisterLayout) -> usize {
        fn ceil_log2(n: usize) -> usize {
            if n <= 1 {
                0
            } else {
                (usize::BITS - (n - 1).leading_zeros()) as usize
            }
        }
        match self {
            Gate::SingleUnitary { .. } => 1,
            Gate::ValueControlled { .. } => 1,
            Gate::Multiplexed { control, .. } => layout.span_dim(*control),
            Gate::PhasePair { a, b, .. } => {
                ceil_log2(layout.span_dim(*a)) * ceil_log2(layout.span_dim(*b))
            }
            Gate::PredicatePhase { .. } => 1,
            Gate::IndexPermutation { perm, .. } => {
                ceil_log2(layout.span_dim(perm.touched_span()))
            }
        }
    }
}

/// Per-kind gate totals plus the coarse elementary-gate estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateCountReport {
    pub single_unitaries: usize,
    pub multiplexed: usize,
    pub value_controlled: usize,
    pub phase_pairs: usize,
    pub predicate_phases: usize,
    pub permutations: usize,
    pub total_gates: usize,
    pub controlled_op_estimate: usize,
}

impl fmt::Display for GateCountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "single unitaries    {}", self.single_unitaries)?;
        writeln!(f, "multiplexed         {}", self.multiplexed)?;
        writeln!(f, "value controlled    {}", self.value_controlled)?;
        writeln!(f, "phase pairs         {}", self.phase_pairs)?;
        writeln!(f, "predicate phases    {}", self.predicate_phases)?;
        writeln!(f, "index permutations  {}", self.permutations)?;
        writeln!(f, "total gates         {}", self.total_gates)?;
        write!(f, "controlled-op estimate: {}", self.controlled_op_estimate)
    }
}

/// A register layout plus a temporally ordered, validated gate list: the
/// gate listed first acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Self { layout, gates: Vec::new() }
    }

    pub fn with_gates(layout: RegisterLayout, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut circuit = Self::new(layout);
        for gate in gates {
            circuit.append(gate)?;
        }
        Ok(circuit)
    }

    /// Validates and appends one gate at the (temporal) end.
    pub fn append(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(&self.layout)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Concatenates two circuits on the same layout: `self`'s gates run
    /// first, then `other`'s.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        if self.layout != other.layout {
            return Err(CircuitError::LayoutMismatch);
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(Circuit { layout: self.layout.clone(), gates })
    }

    /// The circuit's unitary: with temporal gates g1, g2, …, gk this is
    /// gk · … · g2 · g1.
    pub fn simulate(&self) -> Result<ComplexMatrix, CircuitError> {
        let n = self.layout.total_dim();
        if n > MAX_SIMULATE_DIM {
            return Err(CircuitError::TooLargeToSimulate { dim: n, max: MAX_SIMULATE_DIM });
        }
        let mut m = ComplexMatrix::identity(n);
        for gate in &self.gates {
            // Shapes agree by construction.
            m = gate.matrix(&self.layout).mul(&m).expect("gate matrix matches state dimension");
        }
        Ok(m)
    }

    pub fn gate_count(&self) -> GateCountReport {
        let mut report = GateCountReport::default();
        for gate in &self.gates {
            match gate {
                Gate::SingleUnitary { .. } => report.single_unitaries += 1,
                Gate::Multiplexed { .. } => report.multiplexed += 1,
                Gate::ValueControlled { .. } => report.value_controlled += 1,
                Gate::PhasePair { .. } => report.phase_pairs += 1,
                Gate::PredicatePhase { .. } => report.predicate_phases += 1,
                Gate::IndexPermutation { .. } => report.permutations += 1,
            }
            report.total_gates += 1;
            report.controlled_op_estimate += gate.controlled_op_contribution(&self.layout);
        }
        report
    }
}
