//! A line-oriented, versioned text format for circuits.
//!
//! The document starts with the format line `gkpcirc 1` and a `layout`
//! line, then holds one line per gate in temporal order, and closes with
//! `end`. Blank lines and lines starting with `#` are ignored. Register
//! spans are written `first..last`, and complex numbers as `re,im` using
//! the shortest decimal representation that round-trips, so parsing a
//! serialized circuit reproduces every floating-point payload bit for bit.

use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use super::{
    Circuit, CircuitError, Condition, Gate, PermKind, Predicate, RegSpan, RegisterLayout, Turn,
    ValueTest,
};
use crate::matrix::{ComplexMatrix, MatrixTuple};

pub const FORMAT_LINE: &str = "gkpcirc 1";

#[derive(Debug, Error)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: CircuitError },
}

fn fmt_complex(z: Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

fn fmt_span(s: RegSpan) -> String {
    format!("{}..{}", s.first(), s.last())
}

fn push_matrix(out: &mut String, m: &ComplexMatrix) {
    for i in 0..m.rows() {
        for z in m.row(i) {
            write!(out, " {}", fmt_complex(*z)).expect("writing to string");
        }
    }
}

fn push_zero_control(out: &mut String, z: &Option<RegSpan>) {
    if let Some(z) = z {
        write!(out, " zeroctrl {}", fmt_span(*z)).expect("writing to string");
    }
}

/// Serializes a circuit to the versioned text format.
pub fn to_text(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_LINE);
    out.push('\n');
    out.push_str("layout");
    for d in circuit.layout().dims() {
        write!(out, " {d}").expect("writing to string");
    }
    out.push('\n');
    for gate in circuit.gates() {
        match gate {
            Gate::SingleUnitary { target, matrix } => {
                write!(out, "single {} {} {}", fmt_span(*target), matrix.rows(), matrix.cols())
                    .expect("writing to string");
                push_matrix(&mut out, matrix);
            }
            Gate::Multiplexed { control, target, cases } => {
                write!(
                    out,
                    "multiplexed {} {} {} {} {}",
                    fmt_span(*control),
                    fmt_span(*target),
                    cases.len(),
                    cases.member_rows(),
                    cases.member_cols()
                )
                .expect("writing to string");
                for case in cases.members() {
                    push_matrix(&mut out, case);
                }
            }
            Gate::ValueControlled { control, value, target, matrix } => {
                write!(
                    out,
                    "valuectrl {} {} {} {} {}",
                    fmt_span(*control),
                    value,
                    fmt_span(*target),
                    matrix.rows(),
                    matrix.cols()
                )
                .expect("writing to string");
                push_matrix(&mut out, matrix);
            }
            Gate::PhasePair { a, b, turn, zero_control } => {
                write!(
                    out,
                    "phasepair {} {} turn {} {}",
                    fmt_span(*a),
                    fmt_span(*b),
                    turn.num(),
                    turn.den()
                )
                .expect("writing to string");
                push_zero_control(&mut out, zero_control);
            }
            Gate::PredicatePhase { predicate, phase } => {
                write!(
                    out,
                    "predphase {} {}",
                    fmt_complex(*phase),
                    predicate.conditions().len()
                )
                .expect("writing to string");
                for c in predicate.conditions() {
                    match c.test {
                        ValueTest::Equals(v) => {
                            write!(out, " {} eq {v}", fmt_span(c.span)).expect("writing to string")
                        }
                        ValueTest::GreaterThan(v) => {
                            write!(out, " {} gt {v}", fmt_span(c.span)).expect("writing to string")
                        }
                        ValueTest::IsOdd => {
                            write!(out, " {} odd", fmt_span(c.span)).expect("writing to string")
                        }
                    }
                }
            }
            Gate::IndexPermutation { perm, zero_control } => {
                match perm {
                    PermKind::Shuffle { span, m, n } => {
                        write!(out, "perm shuffle {} {} {}", fmt_span(*span), m, n)
                            .expect("writing to string");
                    }
                    PermKind::BitShift { span } => {
                        write!(out, "perm bitshift {}", fmt_span(*span)).expect("writing to string");
                    }
                    PermKind::SubtractTwoIfOdd { span } => {
                        write!(out, "perm subtwoodd {}", fmt_span(*span))
                            .expect("writing to string");
                    }
                    PermKind::SwapRegisters { a, b } => {
                        write!(out, "perm swap {a} {b}").expect("writing to string");
                    }
                    PermKind::DigitReversal { span } => {
                        write!(out, "perm digitrev {}", fmt_span(*span)).expect("writing to string");
                    }
                }
                push_zero_control(&mut out, zero_control);
            }
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

/// One line's whitespace-separated tokens plus its 1-based line number.
struct Tokens<'a> {
    line: usize,
    iter: std::str::SplitWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn err(&self, msg: impl Into<String>) -> TextError {
        TextError::Parse { line: self.line, msg: msg.into() }
    }

    fn next(&mut self, what: &str) -> Result<&'a str, TextError> {
        self.iter.next().ok_or_else(|| self.err(format!("expected {what}")))
    }

    fn next_usize(&mut self, what: &str) -> Result<usize, TextError> {
        let tok = self.next(what)?;
        tok.parse().map_err(|_| self.err(format!("expected {what}, got '{tok}'")))
    }

    fn next_u64(&mut self, what: &str) -> Result<u64, TextError> {
        let tok = self.next(what)?;
        tok.parse().map_err(|_| self.err(format!("expected {what}, got '{tok}'")))
    }

    fn next_complex(&mut self, what: &str) -> Result<Complex64, TextError> {
        let tok = self.next(what)?;
        let (re, im) = tok
            .split_once(',')
            .ok_or_else(|| self.err(format!("expected {what} as re,im, got '{tok}'")))?;
        let re: f64 =
            re.parse().map_err(|_| self.err(format!("bad real part '{re}' in {what}")))?;
        let im: f64 =
            im.parse().map_err(|_| self.err(format!("bad imaginary part '{im}' in {what}")))?;
        Ok(Complex64::new(re, im))
    }

    fn next_span(&mut self, what: &str) -> Result<RegSpan, TextError> {
        let tok = self.next(what)?;
        let (a, b) = tok
            .split_once("..")
            .ok_or_else(|| self.err(format!("expected {what} as first..last, got '{tok}'")))?;
        let first: usize =
            a.parse().map_err(|_| self.err(format!("bad span start '{a}' in {what}")))?;
        let last: usize =
            b.parse().map_err(|_| self.err(format!("bad span end '{b}' in {what}")))?;
        RegSpan::new(first, last).map_err(|e| self.err(e.to_string()))
    }

    fn next_matrix(&mut self, rows: usize, cols: usize) -> Result<ComplexMatrix, TextError> {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(self.next_complex("matrix entry")?);
        }
        ComplexMatrix::new(rows, cols, data).map_err(|e| self.err(e.to_string()))
    }

    /// Parses an optional trailing `zeroctrl <span>` and requires the line
    /// to end there.
    fn finish_with_zero_control(&mut self) -> Result<Option<RegSpan>, TextError> {
        match self.iter.next() {
            None => Ok(None),
            Some("zeroctrl") => {
                let span = self.next_span("zero-control span")?;
                self.finish()?;
                Ok(Some(span))
            }
            Some(tok) => Err(self.err(format!("unexpected token '{tok}'"))),
        }
    }

    fn finish(&mut self) -> Result<(), TextError> {
        match self.iter.next() {
            None => Ok(()),
            Some(tok) => Err(self.err(format!("unexpected token '{tok}'"))),
        }
    }
}

/// Parses the versioned text format back into a validated circuit.
pub fn from_text(text: &str) -> Result<Circuit, TextError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines
        .next()
        .ok_or(TextError::Parse { line: 1, msg: "empty document".into() })?;
    if header != FORMAT_LINE {
        return Err(TextError::Parse {
            line,
            msg: format!("expected format line '{FORMAT_LINE}', got '{header}'"),
        });
    }

    let (line, layout_line) = lines
        .next()
        .ok_or(TextError::Parse { line, msg: "missing layout line".into() })?;
    let mut toks = Tokens { line, iter: layout_line.split_whitespace() };
    let keyword = toks.next("'layout'")?;
    if keyword != "layout" {
        return Err(toks.err(format!("expected 'layout', got '{keyword}'")));
    }
    let mut dims = Vec::new();
    for tok in toks.iter.by_ref() {
        let d: usize = tok
            .parse()
            .map_err(|_| TextError::Parse { line, msg: format!("bad register dimension '{tok}'") })?;
        dims.push(d);
    }
    let layout =
        RegisterLayout::new(dims).map_err(|e| TextError::Invalid { line, source: e })?;
    let mut circuit = Circuit::new(layout);

    let mut saw_end = false;
    for (line, content) in lines {
        if saw_end {
            return Err(TextError::Parse { line, msg: "content after 'end'".into() });
        }
        let mut toks = Tokens { line, iter: content.split_whitespace() };
        let keyword = toks.next("gate keyword")?;
        let gate = match keyword {
            "end" => {
                toks.finish()?;
                saw_end = true;
                continue;
            }
            "single" => {
                let target = toks.next_span("target span")?;
                let rows = toks.next_usize("row count")?;
                let cols = toks.next_usize("column count")?;
                let matrix = toks.next_matrix(rows, cols)?;
                toks.finish()?;
                Gate::SingleUnitary { target, matrix }
            }
            "multiplexed" => {
                let control = toks.next_span("control span")?;
                let target = toks.next_span("target span")?;
                let count = toks.next_usize("case count")?;
                let rows = toks.next_usize("row count")?;
                let cols = toks.next_usize("column count")?;
                let mut cases = Vec::with_capacity(count);
                for _ in 0..count {
                    cases.push(toks.next_matrix(rows, cols)?);
                }
                toks.finish()?;
                let cases = MatrixTuple::new(cases).map_err(|e| toks.err(e.to_string()))?;
                Gate::Multiplexed { control, target, cases }
            }
            "valuectrl" => {
                let control = toks.next_span("control span")?;
                let value = toks.next_u64("control value")?;
                let target = toks.next_span("target span")?;
                let rows = toks.next_usize("row count")?;
                let cols = toks.next_usize("column count")?;
                let matrix = toks.next_matrix(rows, cols)?;
                toks.finish()?;
                Gate::ValueControlled { control, value, target, matrix }
            }
            "phasepair" => {
                let a = toks.next_span("first span")?;
                let b = toks.next_span("second span")?;
                let kw = toks.next("'turn'")?;
                if kw != "turn" {
                    return Err(toks.err(format!("expected 'turn', got '{kw}'")));
                }
                let num = toks.next_u64("turn numerator")?;
                let den = toks.next_u64("turn denominator")?;
                let turn = Turn::new(num, den)
                    .map_err(|e| TextError::Invalid { line, source: e })?;
                let zero_control = toks.finish_with_zero_control()?;
                Gate::PhasePair { a, b, turn, zero_control }
            }
            "predphase" => {
                let phase = toks.next_complex("phase")?;
                let count = toks.next_usize("condition count")?;
                let mut conditions = Vec::with_capacity(count);
                for _ in 0..count {
                    let span = toks.next_span("condition span")?;
                    let test = match toks.next("condition kind")? {
                        "eq" => ValueTest::Equals(toks.next_u64("comparison value")?),
                        "gt" => ValueTest::GreaterThan(toks.next_u64("comparison value")?),
                        "odd" => ValueTest::IsOdd,
                        other => {
                            return Err(toks.err(format!("unknown condition kind '{other}'")))
                        }
                    };
                    conditions.push(Condition { span, test });
                }
                toks.finish()?;
                Gate::PredicatePhase { predicate: Predicate::new(conditions), phase }
            }
            "perm" => {
                let kind = match toks.next("permutation kind")? {
                    "shuffle" => {
                        let span = toks.next_span("span")?;
                        let m = toks.next_usize("first factor")?;
                        let n = toks.next_usize("second factor")?;
                        PermKind::Shuffle { span, m, n }
                    }
                    "bitshift" => PermKind::BitShift { span: toks.next_span("span")? },
                    "subtwoodd" => PermKind::SubtractTwoIfOdd { span: toks.next_span("span")? },
                    "swap" => {
                        let a = toks.next_usize("first register")?;
                        let b = toks.next_usize("second register")?;
                        PermKind::SwapRegisters { a, b }
                    }
                    "digitrev" => PermKind::DigitReversal { span: toks.next_span("span")? },
                    other => return Err(toks.err(format!("unknown permutation kind '{other}'"))),
                };
                let zero_control = toks.finish_with_zero_control()?;
                Gate::IndexPermutation { perm: kind, zero_control }
            }
            other => return Err(toks.err(format!("unknown gate keyword '{other}'"))),
        };
        circuit.append(gate).map_err(|e| TextError::Invalid { line, source: e })?;
    }
    if !saw_end {
        return Err(TextError::Parse {
            line: text.lines().count(),
            msg: "missing 'end' line".into(),
        });
    }
    Ok(circuit)
}
