//! Shared helpers for the integration suites: seeded randomness, random
//! unitaries via Gram–Schmidt, random circuits over every gate kind, and a
//! row-bijection comparison for transforms that agree only up to row order
//! and per-row phase.

// Each integration test target compiles this module separately and uses a
// different subset of it.
#![allow(dead_code)]

use gkron::circuit::{
    Circuit, Condition, Gate, PermKind, Predicate, RegSpan, RegisterLayout, Turn, ValueTest,
};
use gkron::matrix::{Complex64, ComplexMatrix, MatrixTuple};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A Haar-ish random n×n unitary: a matrix of uniform complex entries
/// orthonormalized by modified Gram–Schmidt (retrying in the measure-zero
/// event of near-dependence).
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    loop {
        let mut columns: Vec<Vec<Complex64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        let mut ok = true;
        for j in 0..n {
            for i in 0..j {
                let proj: Complex64 = (0..n)
                    .map(|k| columns[i][k].conj() * columns[j][k])
                    .sum();
                for k in 0..n {
                    let correction = proj * columns[i][k];
                    columns[j][k] -= correction;
                }
            }
            let norm: f64 = columns[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            for k in 0..n {
                columns[j][k] /= norm;
            }
        }
        if !ok {
            continue;
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| columns[j][i]);
        if m.unitarity_deviation().unwrap() < 1e-12 {
            return m;
        }
    }
}

/// A tuple of `count` random unitaries of one size.
pub fn random_unitary_tuple(rng: &mut ChaCha8Rng, count: usize, n: usize) -> MatrixTuple {
    MatrixTuple::new((0..count).map(|_| random_unitary(rng, n)).collect()).unwrap()
}

fn random_span(rng: &mut ChaCha8Rng, registers: usize) -> RegSpan {
    let first = rng.gen_range(1..=registers);
    let last = rng.gen_range(first..=registers);
    RegSpan::new(first, last).unwrap()
}

fn random_turn(rng: &mut ChaCha8Rng) -> Turn {
    let den = rng.gen_range(1..=24u64);
    Turn::new(rng.gen_range(0..=den), den).unwrap()
}

/// A random small mixed-radix layout: 1–4 registers of dimension 2–4.
pub fn random_layout(rng: &mut ChaCha8Rng) -> RegisterLayout {
    let registers = rng.gen_range(1..=4usize);
    let dims: Vec<usize> = (0..registers).map(|_| rng.gen_range(2..=4usize)).collect();
    RegisterLayout::new(dims).unwrap()
}

/// A random circuit over a random small mixed-radix layout, drawing every
/// gate kind (including zero-controlled permutations and multi-condition
/// predicates) so serialization sees the whole grammar.
pub fn random_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let layout = random_layout(rng);
    random_circuit_on(rng, &layout)
}

/// A random circuit on a caller-chosen layout.
pub fn random_circuit_on(rng: &mut ChaCha8Rng, layout: &RegisterLayout) -> Circuit {
    let mut circuit = Circuit::new(layout.clone());
    let gates = rng.gen_range(0..=6usize);
    for _ in 0..gates {
        let gate = loop {
            if let Some(g) = try_random_gate(rng, layout) {
                break g;
            }
        };
        circuit.append(gate).unwrap();
    }
    circuit
}

/// One random gate, or `None` when the drawn kind does not fit the layout
/// (e.g. no two disjoint spans available).
fn try_random_gate(rng: &mut ChaCha8Rng, layout: &RegisterLayout) -> Option<Gate> {
    let registers = layout.num_registers();
    let disjoint_pair = |rng: &mut ChaCha8Rng| -> Option<(RegSpan, RegSpan)> {
        if registers < 2 {
            return None;
        }
        let cut = rng.gen_range(1..registers);
        let a = RegSpan::new(rng.gen_range(1..=cut), cut).unwrap();
        let b = RegSpan::new(cut + 1, rng.gen_range(cut + 1..=registers)).unwrap();
        Some(if rng.gen_bool(0.5) { (a, b) } else { (b, a) })
    };
    Some(match rng.gen_range(0..6u8) {
        0 => {
            let span = random_span(rng, registers);
            let dim = layout.span_dim(span);
            if dim > 8 {
                return None;
            }
            Gate::SingleUnitary { target: span, matrix: random_unitary(rng, dim) }
        }
        1 => {
            let (control, target) = disjoint_pair(rng)?;
            let tdim = layout.span_dim(target);
            if tdim > 8 {
                return None;
            }
            let cases = random_unitary_tuple(rng, layout.span_dim(control), tdim);
            Gate::Multiplexed { control, target, cases }
        }
        2 => {
            let (control, target) = disjoint_pair(rng)?;
            let tdim = layout.span_dim(target);
            if tdim > 8 {
                return None;
            }
            let value = rng.gen_range(0..layout.span_dim(control)) as u64;
            Gate::ValueControlled { control, value, target, matrix: random_unitary(rng, tdim) }
        }
        3 => {
            if registers >= 3 && rng.gen_bool(0.4) {
                let cut1 = rng.gen_range(1..registers - 1);
                let cut2 = rng.gen_range(cut1 + 1..registers);
                Gate::PhasePair {
                    a: RegSpan::new(1, cut1).unwrap(),
                    b: RegSpan::new(cut1 + 1, cut2).unwrap(),
                    turn: random_turn(rng),
                    zero_control: Some(RegSpan::new(cut2 + 1, registers).unwrap()),
                }
            } else {
                let (a, b) = disjoint_pair(rng)?;
                Gate::PhasePair { a, b, turn: random_turn(rng), zero_control: None }
            }
        }
        4 => {
            let conditions = (0..rng.gen_range(0..=2usize))
                .map(|_| {
                    let span = random_span(rng, registers);
                    let dim = layout.span_dim(span) as u64;
                    let test = match rng.gen_range(0..3u8) {
                        0 => ValueTest::Equals(rng.gen_range(0..dim)),
                        1 => ValueTest::GreaterThan(rng.gen_range(0..dim)),
                        _ => ValueTest::IsOdd,
                    };
                    Condition { span, test }
                })
                .collect();
            let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            Gate::PredicatePhase {
                predicate: Predicate::new(conditions),
                phase: Complex64::from_polar(1.0, angle),
            }
        }
        _ => {
            let span = random_span(rng, registers);
            let dims = &layout.dims()[span.first() - 1..span.last()];
            let total = layout.span_dim(span);
            let kind = match rng.gen_range(0..5u8) {
                0 => {
                    // Split the span dimension as m·n with both parts > 1
                    // when possible; otherwise fall back to a digit reversal.
                    match (2..total).find(|m| total % m == 0) {
                        Some(m) => PermKind::Shuffle { span, m, n: total / m },
                        None => PermKind::DigitReversal { span },
                    }
                }
                1 if dims.iter().all(|&d| d == dims[0]) => PermKind::BitShift { span },
                2 if total % 2 == 0 && total >= 4 => PermKind::SubtractTwoIfOdd { span },
                3 => {
                    // Swap two distinct equal-dimension registers if any.
                    let pair = (1..registers).flat_map(|a| {
                        let dims = layout.dims();
                        (a + 1..=registers)
                            .filter(move |&b| dims[a - 1] == dims[b - 1])
                            .map(move |b| (a, b))
                    });
                    match pair.collect::<Vec<_>>().as_slice() {
                        [] => PermKind::DigitReversal { span },
                        choices => {
                            let (a, b) = choices[rng.gen_range(0..choices.len())];
                            PermKind::SwapRegisters { a, b }
                        }
                    }
                }
                _ => PermKind::DigitReversal { span },
            };
            let touched = match kind {
                PermKind::SwapRegisters { b, .. } => b,
                _ => span.last(),
            };
            let zero_control = if touched < registers && rng.gen_bool(0.3) {
                Some(RegSpan::new(touched + 1, registers).unwrap())
            } else {
                None
            };
            Gate::IndexPermutation { perm: kind, zero_control }
        }
    })
}

/// Whether every row of `m` equals exactly one distinct row of `f` times a
/// unit-modulus scalar — transform equality up to row order and per-row
/// phase, for comparing transforms built under different encodings.
pub fn rows_match_up_to_phase(m: &ComplexMatrix, f: &ComplexMatrix, tol: f64) -> bool {
    let n = m.rows();
    if f.rows() != n || f.cols() != m.cols() || m.cols() != n {
        return false;
    }
    let mut used = vec![false; n];
    'rows: for i in 0..n {
        // Phase from the largest entry of the candidate row, then compare.
        for j in 0..n {
            if used[j] {
                continue;
            }
            let pivot = (0..n).max_by(|&x, &y| {
                f.get(j, x).norm().partial_cmp(&f.get(j, y).norm()).unwrap()
            });
            let p = match pivot {
                Some(p) if f.get(j, p).norm() > tol => p,
                _ => continue,
            };
            let scale = m.get(i, p) / f.get(j, p);
            if (scale.norm() - 1.0).abs() > tol {
                continue;
            }
            if (0..n).all(|c| (m.get(i, c) - scale * f.get(j, c)).norm() <= tol) {
                used[j] = true;
                continue 'rows;
            }
        }
        return false;
    }
    true
}
