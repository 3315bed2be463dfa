//! Finite groups with explicit multiplication tables, for the five
//! supported families: cyclic, direct products, quaternionic, metacyclic,
//! and the qubit operator groups underlying stabilizer codes.
//!
//! A [`FiniteGroup`] is plain data — an order, a full multiplication table,
//! an inverse table, and printable element names — labeled 0..η−1 with the
//! identity at label 0. Each group carries the [`GroupSpec`] it was built
//! from, which the representation machinery in [`reps`](crate::group) uses
//! to produce the family's explicit irreducible representation set.
//!
//! Constructors validate their defining relations and reject violations by
//! naming the violated relation. [`FiniteGroup::check_axioms`] exhaustively
//! verifies associativity and the identity/inverse laws.

mod reps;

pub use reps::{
    check_adapted, fourier_oracle, irreps, standard_encoding, AdaptedReport, EncodingMap,
    FourierOracle, RepRestriction, Representation, RepresentationSet, RestrictionBlock,
};

use thiserror::Error;

use crate::matrix::MatrixError;

/// Largest supported group order: keeps multiplication tables and dense
/// Fourier oracle matrices comfortably in memory.
pub const MAX_GROUP_ORDER: usize = 1024;

#[derive(Debug, Error)]
pub enum GroupError {
    /// A constructor parameter violates a defining relation of the family.
    #[error("group constraint violated: {relation}")]
    Constraint { relation: String },
    #[error("group axiom violated: {0}")]
    Axiom(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("representation set invalid: {0}")]
    Representation(String),
    #[error("encoding invalid: {0}")]
    Encoding(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("group spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn constraint(relation: impl Into<String>) -> GroupError {
    GroupError::Constraint { relation: relation.into() }
}

/// A parsed description of a supported group, e.g. `cyclic 12`,
/// `quaternionic 4`, `metacyclic 3 7 2 0`, `en 2`, or the recursive
/// `product cyclic 2 cyclic 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Quaternionic(usize),
    Metacyclic { q: usize, m: usize, r: usize, s: usize },
    En(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    /// Parses a whole token list; trailing tokens are an error.
    pub fn parse(tokens: &[&str]) -> Result<Self, GroupError> {
        let (spec, rest) = Self::parse_prefix(tokens)?;
        if !rest.is_empty() {
            return Err(GroupError::Spec(format!(
                "unexpected trailing tokens after group spec: {}",
                rest.join(" ")
            )));
        }
        Ok(spec)
    }

    /// Parses one spec from the front of the token list, returning the rest
    /// (product specs consume two nested specs).
    pub fn parse_prefix<'a>(tokens: &'a [&'a str]) -> Result<(Self, &'a [&'a str]), GroupError> {
        let (tag, rest) = tokens
            .split_first()
            .ok_or_else(|| GroupError::Spec("missing group family tag".into()))?;
        let take = |rest: &'a [&'a str], n: usize| -> Result<(Vec<usize>, &'a [&'a str]), GroupError> {
            if rest.len() < n {
                return Err(GroupError::Spec(format!(
                    "family '{tag}' needs {n} integer parameter(s)"
                )));
            }
            let mut vals = Vec::with_capacity(n);
            for t in &rest[..n] {
                vals.push(t.parse::<usize>().map_err(|_| {
                    GroupError::Spec(format!("expected an integer parameter, got '{t}'"))
                })?);
            }
            Ok((vals, &rest[n..]))
        };
        match *tag {
            "cyclic" => {
                let (v, rest) = take(rest, 1)?;
                Ok((GroupSpec::Cyclic(v[0]), rest))
            }
            "quaternionic" => {
                let (v, rest) = take(rest, 1)?;
                Ok((GroupSpec::Quaternionic(v[0]), rest))
            }
            "metacyclic" => {
                let (v, rest) = take(rest, 4)?;
                Ok((GroupSpec::Metacyclic { q: v[0], m: v[1], r: v[2], s: v[3] }, rest))
            }
            "en" => {
                let (v, rest) = take(rest, 1)?;
                Ok((GroupSpec::En(v[0]), rest))
            }
            "product" => {
                let (left, rest) = Self::parse_prefix(rest)?;
                let (right, rest) = Self::parse_prefix(rest)?;
                Ok((GroupSpec::Product(Box::new(left), Box::new(right)), rest))
            }
            other => Err(GroupError::Spec(format!("unknown group family '{other}'"))),
        }
    }

    /// Builds the group this spec describes.
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupSpec::Cyclic(n) => make_cyclic(*n),
            GroupSpec::Quaternionic(n) => make_quaternionic(*n),
            GroupSpec::Metacyclic { q, m, r, s } => make_metacyclic(*q, *m, *r, *s),
            GroupSpec::En(n) => make_en(*n),
            GroupSpec::Product(a, b) => make_product(&a.build()?, &b.build()?),
        }
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic {n}"),
            GroupSpec::Quaternionic(n) => write!(f, "quaternionic {n}"),
            GroupSpec::Metacyclic { q, m, r, s } => write!(f, "metacyclic {q} {m} {r} {s}"),
            GroupSpec::En(n) => write!(f, "en {n}"),
            GroupSpec::Product(a, b) => write!(f, "product {a} {b}"),
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        Self::parse(&tokens)
    }
}

/// A finite group with elements labeled `0..order`, identity at label 0,
/// and an explicit multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    spec: GroupSpec,
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Builds a group from a complete multiplication table (row-major:
    /// `mul[x·order + y] = x·y`), deriving the inverse table and checking
    /// that label 0 is a two-sided identity with all inverses present.
    fn from_table(
        spec: GroupSpec,
        names: Vec<String>,
        mul: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let order = names.len();
        if order == 0 || order > MAX_GROUP_ORDER {
            return Err(constraint(format!(
                "group order must be between 1 and {MAX_GROUP_ORDER} (got {order})"
            )));
        }
        assert_eq!(mul.len(), order * order, "multiplication table shape");
        for (&p, _) in mul.iter().zip(0..) {
            if p >= order {
                return Err(GroupError::Axiom(format!(
                    "product label {p} outside 0..{order}"
                )));
            }
        }
        for x in 0..order {
            if mul[x] != x || mul[x * order] != x {
                return Err(GroupError::Axiom(
                    "label 0 is not a two-sided identity".into(),
                ));
            }
        }
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if mul[x * order + y] == 0 {
                    if mul[y * order + x] != 0 {
                        return Err(GroupError::Axiom(format!(
                            "element {x} has a right inverse that is not a left inverse"
                        )));
                    }
                    inv[x] = y;
                }
            }
            if inv[x] == usize::MAX {
                return Err(GroupError::Axiom(format!("element {x} has no inverse")));
            }
        }
        Ok(Self { spec, order, mul, inv, names })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn multiply(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    /// Exhaustive verification of associativity and the identity/inverse
    /// laws — cubic in the order, intended for orders up to a few hundred.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        let o = self.order;
        for x in 0..o {
            if self.multiply(x, 0) != x || self.multiply(0, x) != x {
                return Err(GroupError::Axiom(format!("identity law fails at {x}")));
            }
            if self.multiply(x, self.inv[x]) != 0 || self.multiply(self.inv[x], x) != 0 {
                return Err(GroupError::Axiom(format!("inverse law fails at {x}")));
            }
        }
        for x in 0..o {
            for y in 0..o {
                let xy = self.multiply(x, y);
                for z in 0..o {
                    if self.multiply(xy, z) != self.multiply(x, self.multiply(y, z)) {
                        return Err(GroupError::Axiom(format!(
                            "associativity fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that `subset` (distinct labels) is closed under multiplication
    /// and contains the identity and all inverses.
    pub fn is_subgroup(&self, subset: &[usize]) -> Result<(), GroupError> {
        let mut member = vec![false; self.order];
        for &x in subset {
            if x >= self.order {
                return Err(GroupError::Index(format!("label {x} outside the group")));
            }
            if member[x] {
                return Err(GroupError::NotASubgroup(format!("duplicate label {x}")));
            }
            member[x] = true;
        }
        if subset.is_empty() || !member[0] {
            return Err(GroupError::NotASubgroup("subset does not contain the identity".into()));
        }
        for &x in subset {
            if !member[self.inv[x]] {
                return Err(GroupError::NotASubgroup(format!(
                    "inverse of {x} is outside the subset"
                )));
            }
            for &y in subset {
                if !member[self.multiply(x, y)] {
                    return Err(GroupError::NotASubgroup(format!(
                        "product of {x} and {y} is outside the subset"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The cyclic group Z_n, labels = residues, a^i · a^j = a^(i+j mod n).
pub fn make_cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(constraint("cyclic order n must be at least 1 (got 0)"));
    }
    let names = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "a".to_string(),
            _ => format!("a^{i}"),
        })
        .collect();
    let mut mul = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            mul[i * n + j] = (i + j) % n;
        }
    }
    FiniteGroup::from_table(GroupSpec::Cyclic(n), names, mul)
}

/// The direct product G₁ × G₂ with labels η₂·l₁ + l₂ and componentwise
/// multiplication.
pub fn make_product(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let (o1, o2) = (g1.order, g2.order);
    let order = o1.checked_mul(o2).filter(|&o| o <= MAX_GROUP_ORDER).ok_or_else(|| {
        constraint(format!(
            "product order {o1}·{o2} exceeds the supported maximum {MAX_GROUP_ORDER}"
        ))
    })?;
    let mut names = Vec::with_capacity(order);
    for l1 in 0..o1 {
        for l2 in 0..o2 {
            names.push(format!("({}, {})", g1.name(l1), g2.name(l2)));
        }
    }
    let mut mul = vec![0usize; order * order];
    for x in 0..order {
        let (x1, x2) = (x / o2, x % o2);
        for y in 0..order {
            let (y1, y2) = (y / o2, y % o2);
            mul[x * order + y] = g1.multiply(x1, y1) * o2 + g2.multiply(x2, y2);
        }
    }
    FiniteGroup::from_table(
        GroupSpec::Product(Box::new(g1.spec.clone()), Box::new(g2.spec.clone())),
        names,
        mul,
    )
}

/// The quaternionic group Q_n of order 4n (n even), presented by
/// r^(2n) = c⁴ = 1, c² = r^n, c·r = r^(2n−1)·c. Elements c^j r^k are
/// labeled 2n·j + k.
pub fn make_quaternionic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n < 2 || n % 2 != 0 {
        return Err(constraint(format!(
            "quaternionic parameter n must be even and at least 2 (got {n})"
        )));
    }
    let two_n = 2 * n;
    let order = 4 * n;
    let mut names = Vec::with_capacity(order);
    for j in 0..2usize {
        for k in 0..two_n {
            names.push(match (j, k) {
                (0, 0) => "e".to_string(),
                (0, 1) => "r".to_string(),
                (0, _) => format!("r^{k}"),
                (_, 0) => "c".to_string(),
                (_, 1) => "c r".to_string(),
                (_, _) => format!("c r^{k}"),
            });
        }
    }
    let mut mul = vec![0usize; order * order];
    for j1 in 0..2usize {
        for k1 in 0..two_n {
            for j2 in 0..2usize {
                for k2 in 0..two_n {
                    // r^k c = c r^(−k), and c² = r^n.
                    let j = (j1 + j2) % 2;
                    let flipped = if j2 == 1 { (two_n - k1) % two_n } else { k1 };
                    let k = (flipped + k2 + n * ((j1 + j2) / 2)) % two_n;
                    mul[(j1 * two_n + k1) * order + (j2 * two_n + k2)] = j * two_n + k;
                }
            }
        }
    }
    FiniteGroup::from_table(GroupSpec::Quaternionic(n), names, mul)
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// d = gcd(r−1, m), the number of one-dimensional characters of the cyclic
/// part that are fixed by conjugation (gcd(0, m) = m covers r ≡ 1).
pub(crate) fn metacyclic_d(m: usize, r: usize) -> usize {
    gcd((r % m + m - 1) % m, m)
}

/// The metacyclic group of order q·m presented by b⁻¹ab = a^r, b^q = a^s,
/// a^m = 1, with q prime, gcd(m, r) = 1, m | s(r−1), and r^q ≡ 1 (mod m).
/// Elements b^j a^i are labeled m·j + i.
pub fn make_metacyclic(
    q: usize,
    m: usize,
    r: usize,
    s: usize,
) -> Result<FiniteGroup, GroupError> {
    if !is_prime(q) {
        return Err(constraint(format!("q must be prime (got {q})")));
    }
    if m < 2 {
        return Err(constraint(format!("m must be at least 2 (got {m})")));
    }
    let spec = GroupSpec::Metacyclic { q, m, r, s };
    let r = r % m;
    let s = s % m;
    if gcd(m, r) != 1 {
        return Err(constraint(format!("gcd(m, r) = 1 is required (gcd({m}, {r}) ≠ 1)")));
    }
    // m | s(r−1), computed mod m.
    if (s * ((r + m - 1) % m)) % m != 0 {
        return Err(constraint(format!(
            "m must divide s(r−1) (m = {m}, s(r−1) mod m ≠ 0 with r = {r}, s = {s})"
        )));
    }
    let mut rq = 1usize;
    for _ in 0..q {
        rq = rq * r % m;
    }
    if rq != 1 {
        return Err(constraint(format!(
            "r^q ≡ 1 (mod m) is required ({r}^{q} mod {m} = {rq})"
        )));
    }
    let order = q.checked_mul(m).filter(|&o| o <= MAX_GROUP_ORDER).ok_or_else(|| {
        constraint(format!(
            "group order q·m = {q}·{m} exceeds the supported maximum {MAX_GROUP_ORDER}"
        ))
    })?;
    let mut names = Vec::with_capacity(order);
    for j in 0..q {
        for i in 0..m {
            let b_part = match j {
                0 => String::new(),
                1 => "b".to_string(),
                _ => format!("b^{j}"),
            };
            let a_part = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            names.push(match (b_part.is_empty(), a_part.is_empty()) {
                (true, true) => "e".to_string(),
                (true, false) => a_part,
                (false, true) => b_part,
                (false, false) => format!("{b_part} {a_part}"),
            });
        }
    }
    // Powers r^j mod m for j = 0..q.
    let mut rpow = vec![1usize; q + 1];
    for j in 1..=q {
        rpow[j] = rpow[j - 1] * r % m;
    }
    let mut mul = vec![0usize; order * order];
    for j1 in 0..q {
        for i1 in 0..m {
            for j2 in 0..q {
                for i2 in 0..m {
                    // a^i b^j = b^j a^(i·r^j) and b^q = a^s.
                    let j = (j1 + j2) % q;
                    let wraps = (j1 + j2) / q;
                    let i = (s * wraps + i1 * rpow[j2] + i2) % m;
                    mul[(j1 * m + i1) * order + (j2 * m + i2)] = j * m + i;
                }
            }
        }
    }
    FiniteGroup::from_table(spec, names, mul)
}

/// Encodes an element (λ, a, c) of E_n as the bit string λ a₁c₁…aₙcₙ read
/// as an integer (λ most significant; a, c are n-bit values with bit 1
/// most significant).
pub(crate) fn en_label(n: usize, lambda: usize, a: usize, c: usize) -> usize {
    let mut label = lambda;
    for i in (0..n).rev() {
        label = label << 2 | ((a >> i & 1) << 1 | (c >> i & 1));
    }
    label
}

/// Inverse of [`en_label`]: label → (λ, a, c).
pub(crate) fn en_decode(n: usize, label: usize) -> (usize, usize, usize) {
    let lambda = label >> (2 * n) & 1;
    let mut a = 0usize;
    let mut c = 0usize;
    for i in 0..n {
        let pair = label >> (2 * (n - 1 - i)) & 0b11;
        a = a << 1 | pair >> 1;
        c = c << 1 | (pair & 1);
    }
    (lambda, a, c)
}

/// The group E_n of order 2·4^n generated by the single-qubit bit-flip and
/// sign-flip operators on n qubits: elements (−1)^λ·X(a)·Z(c) with
/// (λ, a, c) ∈ Z₂ × Z₂ⁿ × Z₂ⁿ, multiplied by the anticommutation rule
/// Z(c)·X(a') = (−1)^(c·a')·X(a')·Z(c).
pub fn make_en(n: usize) -> Result<FiniteGroup, GroupError> {
    let order = 2usize
        .checked_shl(2 * n as u32)
        .filter(|&o| o <= MAX_GROUP_ORDER)
        .ok_or_else(|| {
            constraint(format!(
                "group order 2·4^{n} exceeds the supported maximum {MAX_GROUP_ORDER}"
            ))
        })?;
    let mut names = Vec::with_capacity(order);
    for label in 0..order {
        let (lambda, a, c) = en_decode(n, label);
        let sign = if lambda == 1 { "-" } else { "" };
        let mut body = String::new();
        if a != 0 || n > 0 {
            if a != 0 {
                body.push_str(&format!("X({a:0width$b})", width = n));
            }
            if c != 0 {
                body.push_str(&format!("Z({c:0width$b})", width = n));
            }
        }
        if body.is_empty() {
            body.push('I');
        }
        names.push(format!("{sign}{body}"));
    }
    let mut mul = vec![0usize; order * order];
    for x in 0..order {
        let (l1, a1, c1) = en_decode(n, x);
        for y in 0..order {
            let (l2, a2, c2) = en_decode(n, y);
            let sign = (c1 & a2).count_ones() as usize % 2;
            mul[x * order + y] =
                en_label(n, (l1 + l2 + sign) % 2, a1 ^ a2, c1 ^ c2);
        }
    }
    FiniteGroup::from_table(GroupSpec::En(n), names, mul)
}
