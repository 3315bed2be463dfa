//! Irreducible representations, index encodings, and dense Fourier
//! oracles for the supported group families, plus verification that a
//! representation set is adapted to a subgroup chain.
//!
//! Each family comes with an explicit complete list of irreducible
//! unitary representations ([`irreps`]) in a pinned order, a
//! [`standard_encoding`] assigning every element a time index and every
//! matrix-coefficient function a frequency index, and a dense
//! [`FourierOracle`] matrix whose row `e_freq(ρ, k, l)` and column
//! `e_time(g)` hold the conjugated, Schur-normalized coefficient
//! `√(d/η)·ρ(g)[k,l]`. Circuit synthesis is checked against these
//! oracles.

use std::f64::consts::PI;

use crate::matrix::{kron, Complex64, ComplexMatrix, Side};

use super::{en_decode, metacyclic_d, FiniteGroup, GroupError, GroupSpec};

/// e^(2πi·num/den), with `num` taken mod `den`.
fn unit_root(num: i64, den: u64) -> Complex64 {
    let r = num.rem_euclid(den as i64) as f64 / den as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

/// A unitary representation: one matrix per group element label.
#[derive(Debug, Clone)]
pub struct Representation {
    name: String,
    degree: usize,
    matrices: Vec<ComplexMatrix>,
}

impl Representation {
    fn new(name: String, degree: usize, matrices: Vec<ComplexMatrix>) -> Self {
        debug_assert!(matrices.iter().all(|m| m.rows() == degree && m.cols() == degree));
        Self { name, degree, matrices }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self, label: usize) -> &ComplexMatrix {
        &self.matrices[label]
    }

    /// The character χ(g) = tr ρ(g).
    pub fn character(&self, label: usize) -> Complex64 {
        let m = &self.matrices[label];
        (0..self.degree).map(|k| m.get(k, k)).sum()
    }
}

/// A complete set of irreducible representations of one group, in the
/// family's pinned order.
#[derive(Debug, Clone)]
pub struct RepresentationSet {
    group: FiniteGroup,
    members: Vec<Representation>,
}

impl RepresentationSet {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn members(&self) -> &[Representation] {
        &self.members
    }

    pub fn member(&self, p: usize) -> Result<&Representation, GroupError> {
        self.members
            .get(p)
            .ok_or_else(|| GroupError::Index(format!("representation index {p} out of range")))
    }

    /// The Schur-normalized matrix coefficient √(d/η)·ρ(g)[k−1, l−1]
    /// (k, l are 1-based).
    pub fn coefficient(
        &self,
        p: usize,
        k: usize,
        l: usize,
        g: usize,
    ) -> Result<Complex64, GroupError> {
        let member = self.member(p)?;
        let d = member.degree();
        if k == 0 || k > d || l == 0 || l > d {
            return Err(GroupError::Index(format!(
                "coefficient index ({k}, {l}) outside 1..={d}"
            )));
        }
        if g >= self.group.order() {
            return Err(GroupError::Index(format!("element label {g} out of range")));
        }
        let scale = (d as f64 / self.group.order() as f64).sqrt();
        Ok(member.matrix(g).get(k - 1, l - 1) * scale)
    }

    /// Verifies that the set is a complete list of irreducible unitary
    /// representations: the identity maps to the identity matrix, every
    /// matrix is unitary, ρ(x)·ρ(y) = ρ(x·y) for all pairs, the squared
    /// degrees sum to the group order, and the characters are orthonormal
    /// under (1/η)·Σ_g χ_p(g)·conj(χ_q(g)).
    pub fn validate(&self, tol: f64) -> Result<(), GroupError> {
        let eta = self.group.order();
        for member in &self.members {
            if member.matrices.len() != eta {
                return Err(GroupError::Representation(format!(
                    "representation {} has {} matrices for a group of order {eta}",
                    member.name(),
                    member.matrices.len()
                )));
            }
            let d = member.degree();
            if !member.matrix(0).approx_eq(&ComplexMatrix::identity(d), tol) {
                return Err(GroupError::Representation(format!(
                    "representation {} does not map the identity to the identity matrix",
                    member.name()
                )));
            }
            for g in 0..eta {
                if member.matrix(g).unitarity_deviation()? > tol {
                    return Err(GroupError::Representation(format!(
                        "representation {} is not unitary at element {}",
                        member.name(),
                        self.group.name(g)
                    )));
                }
            }
            for x in 0..eta {
                for y in 0..eta {
                    let product = member.matrix(x).mul(member.matrix(y))?;
                    if !product.approx_eq(member.matrix(self.group.multiply(x, y)), tol) {
                        return Err(GroupError::Representation(format!(
                            "representation {} is not a homomorphism at ({}, {})",
                            member.name(),
                            self.group.name(x),
                            self.group.name(y)
                        )));
                    }
                }
            }
        }
        let sum_sq: usize = self.members.iter().map(|m| m.degree() * m.degree()).sum();
        if sum_sq != eta {
            return Err(GroupError::Representation(format!(
                "squared degrees sum to {sum_sq}, expected the group order {eta}"
            )));
        }
        for (p, mp) in self.members.iter().enumerate() {
            for (q, mq) in self.members.iter().enumerate() {
                let mut inner = Complex64::new(0.0, 0.0);
                for g in 0..eta {
                    inner += mp.character(g) * mq.character(g).conj();
                }
                inner /= eta as f64;
                let expected = if p == q { 1.0 } else { 0.0 };
                if (inner - expected).norm() > tol {
                    return Err(GroupError::Representation(format!(
                        "characters of {} and {} are not orthonormal (inner product {inner})",
                        mp.name(),
                        mq.name()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds the pinned complete irreducible representation list for the
/// group's family.
pub fn irreps(group: &FiniteGroup) -> Result<RepresentationSet, GroupError> {
    let members = match group.spec().clone() {
        GroupSpec::Cyclic(n) => cyclic_irreps(n),
        GroupSpec::Quaternionic(n) => quaternionic_irreps(n),
        GroupSpec::Metacyclic { q, m, r, s } => metacyclic_irreps(q, m, r % m, s % m),
        GroupSpec::En(n) => en_irreps(n),
        GroupSpec::Product(s1, s2) => {
            let g1 = s1.build()?;
            let g2 = s2.build()?;
            let r1 = irreps(&g1)?;
            let r2 = irreps(&g2)?;
            product_irreps(&r1, &r2)
        }
    };
    Ok(RepresentationSet { group: group.clone(), members })
}

/// ζ^i(a^j) = e^(−2πi·ij/n), for i = 0..n.
fn cyclic_irreps(n: usize) -> Vec<Representation> {
    (0..n)
        .map(|i| {
            let matrices = (0..n)
                .map(|j| {
                    ComplexMatrix::new(1, 1, vec![unit_root(-((i * j) as i64), n as u64)])
                        .expect("1x1")
                })
                .collect();
            Representation::new(format!("zeta^{i}"), 1, matrices)
        })
        .collect()
}

/// Q_n: four one-dimensional representations ρ¹..ρ⁴ determined by the
/// signs of r and c, then the two-dimensional σ^i for i = 1..n.
fn quaternionic_irreps(n: usize) -> Vec<Representation> {
    let two_n = 2 * n;
    let order = 4 * n;
    let mut members = Vec::with_capacity(3 + n);
    for (idx, (r_sign, c_sign)) in
        [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)].into_iter().enumerate()
    {
        let matrices = (0..order)
            .map(|label| {
                let (j, k) = (label / two_n, label % two_n);
                let v = c_sign.pow(j as u32) * r_sign.pow((k % 2) as u32 + 2);
                ComplexMatrix::new(1, 1, vec![Complex64::new(v as f64, 0.0)]).expect("1x1")
            })
            .collect();
        members.push(Representation::new(format!("rho^{}", idx + 1), 1, matrices));
    }
    for i in 1..n {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let matrices = (0..order)
            .map(|label| {
                let (j, k) = (label / two_n, label % two_n);
                let w = unit_root((i * k) as i64, two_n as u64);
                let data = if j == 0 {
                    vec![
                        w.conj(),
                        Complex64::new(0.0, 0.0),
                        Complex64::new(0.0, 0.0),
                        w,
                    ]
                } else {
                    vec![
                        Complex64::new(0.0, 0.0),
                        w * sign,
                        w.conj(),
                        Complex64::new(0.0, 0.0),
                    ]
                };
                ComplexMatrix::new(2, 2, data).expect("2x2")
            })
            .collect();
        members.push(Representation::new(format!("sigma^{i}"), 2, matrices));
    }
    members
}

/// The character indices whose one-dimensional representations exist:
/// i < d = gcd(r−1, m); and the ascending smallest representatives of the
/// size-q orbits of multiplication by r on Z_m.
pub(crate) fn metacyclic_orbit_reps(q: usize, m: usize, r: usize) -> Vec<usize> {
    let mut reps = Vec::new();
    for i in 0..m {
        if i * r % m == i {
            continue; // fixed point: belongs to the one-dimensional list
        }
        let mut smallest = true;
        let mut v = i;
        for _ in 0..q {
            v = v * r % m;
            if v < i {
                smallest = false;
                break;
            }
        }
        if smallest {
            reps.push(i);
        }
    }
    reps
}

/// Metacyclic ⟨a, b | a^m, b^q = a^s, b⁻¹ab = a^r⟩: qd one-dimensional
/// representations ρ[i,j] (i outer), then one induced q-dimensional
/// representation per orbit representative, ascending.
fn metacyclic_irreps(q: usize, m: usize, r: usize, s: usize) -> Vec<Representation> {
    let d = metacyclic_d(m, r);
    let order = q * m;
    let mut rpow = vec![1usize; q + 1];
    for v in 1..=q {
        rpow[v] = rpow[v - 1] * r % m;
    }
    let mut members = Vec::new();
    for i in 0..d {
        for j in 0..q {
            // ρ(a) = e^(−2πi·i/d), ρ(b) = e^(−2πi·j/q)·e^(−2πi·is/(qd));
            // at b^J a^I the exponent over denominator qd is jJd + isJ + iIq.
            let matrices = (0..order)
                .map(|label| {
                    let (big_j, big_i) = (label / m, label % m);
                    let num = (j * big_j * d + i * s * big_j + i * big_i * q) as i64;
                    ComplexMatrix::new(1, 1, vec![unit_root(-num, (q * d) as u64)])
                        .expect("1x1")
                })
                .collect();
            members.push(Representation::new(format!("rho[{i},{j}]"), 1, matrices));
        }
    }
    for i in metacyclic_orbit_reps(q, m, r) {
        let matrices = (0..order)
            .map(|label| {
                let (big_j, big_i) = (label / m, label % m);
                let mut mat = ComplexMatrix::zeros(q, q);
                for v in 0..q {
                    let wraps = (v + big_j) / q;
                    let num = (i * s * wraps + i * big_i * rpow[v]) as i64;
                    mat.set((v + big_j) % q, v, unit_root(-num, m as u64));
                }
                mat
            })
            .collect();
        members.push(Representation::new(format!("zetabar[{i}]"), q, matrices));
    }
    members
}

/// E_n: 4^n one-dimensional representations ρ[x,z](g) = (−1)^(x·a + z·c)
/// in lexicographic (x, z) order, then the defining 2^n-dimensional σ with
/// σ(λ, a, c)[k, l] = (−1)^(λ + c·l)·δ_{k, l⊕a}.
fn en_irreps(n: usize) -> Vec<Representation> {
    let order = 2 * 4usize.pow(n as u32);
    let dim = 1usize << n;
    let mut members = Vec::with_capacity(4usize.pow(n as u32) + 1);
    let parity = |bits: usize| (bits.count_ones() % 2) as i32;
    for x in 0..dim {
        for z in 0..dim {
            let matrices = (0..order)
                .map(|label| {
                    let (_, a, c) = en_decode(n, label);
                    let v = if (parity(x & a) + parity(z & c)) % 2 == 0 { 1.0 } else { -1.0 };
                    ComplexMatrix::new(1, 1, vec![Complex64::new(v, 0.0)]).expect("1x1")
                })
                .collect();
            members.push(Representation::new(format!("rho[{x},{z}]"), 1, matrices));
        }
    }
    let matrices = (0..order)
        .map(|label| {
            let (lambda, a, c) = en_decode(n, label);
            let mut mat = ComplexMatrix::zeros(dim, dim);
            for l in 0..dim {
                let v = if (lambda as i32 + parity(c & l)) % 2 == 0 { 1.0 } else { -1.0 };
                mat.set(l ^ a, l, Complex64::new(v, 0.0));
            }
            mat
        })
        .collect();
    members.push(Representation::new("sigma".to_string(), dim, matrices));
    members
}

/// G₁ × G₂: all pairwise Kronecker products ρ₁ ⊗ ρ₂, with the first
/// factor's index outermost, evaluated per element pair.
fn product_irreps(r1: &RepresentationSet, r2: &RepresentationSet) -> Vec<Representation> {
    let (o1, o2) = (r1.group.order(), r2.group.order());
    let mut members = Vec::with_capacity(r1.members.len() * r2.members.len());
    for m1 in &r1.members {
        for m2 in &r2.members {
            let matrices = (0..o1 * o2)
                .map(|label| {
                    kron(Side::Right, m1.matrix(label / o2), m2.matrix(label % o2))
                })
                .collect();
            members.push(Representation::new(
                format!("{} * {}", m1.name(), m2.name()),
                m1.degree() * m2.degree(),
                matrices,
            ));
        }
    }
    members
}

/// Bijective index maps between the group and the Fourier side: `e_time`
/// sends an element label to its computational basis index, and `e_freq`
/// sends a coefficient index (ρ, k, l) to its row. Both are total
/// bijections on 0..η.
#[derive(Debug, Clone)]
pub struct EncodingMap {
    time: Vec<usize>,
    freq: Vec<usize>,
    offsets: Vec<usize>,
    degrees: Vec<usize>,
}

impl EncodingMap {
    /// Builds and validates an encoding. `freq` is flat, member-major, with
    /// the (k, l) coefficient of member p at `offsets[p] + (k−1)·d + (l−1)`.
    pub fn new(
        time: Vec<usize>,
        freq: Vec<usize>,
        degrees: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let eta = time.len();
        let total: usize = degrees.iter().map(|d| d * d).sum();
        if total != eta || freq.len() != eta {
            return Err(GroupError::Encoding(format!(
                "frequency table covers {} coefficient indices for a group of order {eta}",
                freq.len()
            )));
        }
        for (what, table) in [("time", &time), ("frequency", &freq)] {
            let mut seen = vec![false; eta];
            for &v in table.iter() {
                if v >= eta || seen[v] {
                    return Err(GroupError::Encoding(format!(
                        "{what} encoding is not a bijection on 0..{eta} (at value {v})"
                    )));
                }
                seen[v] = true;
            }
        }
        let mut offsets = Vec::with_capacity(degrees.len());
        let mut acc = 0;
        for &d in &degrees {
            offsets.push(acc);
            acc += d * d;
        }
        Ok(Self { time, freq, offsets, degrees })
    }

    pub fn order(&self) -> usize {
        self.time.len()
    }

    pub fn num_members(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, p: usize) -> Result<usize, GroupError> {
        self.degrees
            .get(p)
            .copied()
            .ok_or_else(|| GroupError::Index(format!("representation index {p} out of range")))
    }

    pub fn e_time(&self, label: usize) -> Result<usize, GroupError> {
        self.time
            .get(label)
            .copied()
            .ok_or_else(|| GroupError::Index(format!("element label {label} out of range")))
    }

    /// Frequency index of the (k, l) coefficient of member p (k, l 1-based).
    pub fn e_freq(&self, p: usize, k: usize, l: usize) -> Result<usize, GroupError> {
        let d = self.degree(p)?;
        if k == 0 || k > d || l == 0 || l > d {
            return Err(GroupError::Index(format!(
                "coefficient index ({k}, {l}) outside 1..={d}"
            )));
        }
        Ok(self.freq[self.offsets[p] + (k - 1) * d + (l - 1)])
    }
}

/// The pinned encoding for the family of the representation set's group.
/// Element labels are their own time indices in every family; the
/// frequency side follows the per-family tables.
pub fn standard_encoding(reps: &RepresentationSet) -> Result<EncodingMap, GroupError> {
    let eta = reps.group().order();
    let degrees: Vec<usize> = reps.members().iter().map(|m| m.degree()).collect();
    let time: Vec<usize> = (0..eta).collect();
    let freq = match reps.group().spec().clone() {
        GroupSpec::Cyclic(n) => (0..n).collect(),
        GroupSpec::Quaternionic(n) => {
            let mut freq = vec![0, 2 * n, n, 3 * n];
            for i in 1..n {
                // σ^i coefficients (k, l) row-major: (1,1) (1,2) (2,1) (2,2).
                freq.extend([i, 4 * n - i, 2 * n + i, 2 * n - i]);
            }
            freq
        }
        GroupSpec::Metacyclic { q, m, r, s: _ } => {
            let r = r % m;
            let d = metacyclic_d(m, r);
            let mut rpow = vec![1usize; q + 1];
            for v in 1..=q {
                rpow[v] = rpow[v - 1] * r % m;
            }
            let mut freq = Vec::with_capacity(eta);
            for i in 0..d {
                for j in 0..q {
                    freq.push(j * m + i * (m / d));
                }
            }
            // Induced coefficient (k, l) sits at row m·((k−l) mod q) plus the
            // orbit member i·r^l of the column index (l 0-based here): that
            // placement is what makes the synthesized circuit match the
            // oracle row-for-row up to a diagonal of phases.
            for i in metacyclic_orbit_reps(q, m, r) {
                for k in 0..q {
                    for l in 0..q {
                        freq.push(m * ((k + q - l) % q) + i * rpow[l] % m);
                    }
                }
            }
            freq
        }
        GroupSpec::En(n) => {
            let dim = 1usize << n;
            let mut freq = Vec::with_capacity(eta);
            for x in 0..dim {
                for z in 0..dim {
                    freq.push(super::en_label(n, 0, x, z));
                }
            }
            for k in 0..dim {
                for l in 0..dim {
                    freq.push(super::en_label(n, 1, k ^ l, l));
                }
            }
            freq
        }
        GroupSpec::Product(s1, s2) => {
            let r1 = irreps(&s1.build()?)?;
            let r2 = irreps(&s2.build()?)?;
            let e1 = standard_encoding(&r1)?;
            let e2 = standard_encoding(&r2)?;
            let eta2 = r2.group().order();
            let mut freq = Vec::with_capacity(eta);
            for p1 in 0..e1.num_members() {
                let d1 = e1.degree(p1)?;
                for p2 in 0..e2.num_members() {
                    let d2 = e2.degree(p2)?;
                    for k1 in 1..=d1 {
                        for k2 in 1..=d2 {
                            for l1 in 1..=d1 {
                                for l2 in 1..=d2 {
                                    freq.push(
                                        eta2 * e1.e_freq(p1, k1, l1)? + e2.e_freq(p2, k2, l2)?,
                                    );
                                }
                            }
                        }
                    }
                }
            }
            freq
        }
    };
    EncodingMap::new(time, freq, degrees)
}

/// A dense group Fourier transform matrix together with the encoding that
/// fixes its row and column order.
#[derive(Debug, Clone)]
pub struct FourierOracle {
    spec: GroupSpec,
    order: usize,
    matrix: ComplexMatrix,
    encoding: EncodingMap,
}

impl FourierOracle {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn encoding(&self) -> &EncodingMap {
        &self.encoding
    }
}

/// Assembles the dense Fourier transform of the group under the standard
/// encoding: entry [e_freq(ρ, k, l), e_time(g)] = conj(√(d/η)·ρ(g)[k, l]).
pub fn fourier_oracle(reps: &RepresentationSet) -> Result<FourierOracle, GroupError> {
    let encoding = standard_encoding(reps)?;
    let eta = reps.group().order();
    let mut matrix = ComplexMatrix::zeros(eta, eta);
    for (p, member) in reps.members().iter().enumerate() {
        let d = member.degree();
        for k in 1..=d {
            for l in 1..=d {
                let row = encoding.e_freq(p, k, l)?;
                for g in 0..eta {
                    let col = encoding.e_time(g)?;
                    matrix.set(row, col, reps.coefficient(p, k, l, g)?.conj());
                }
            }
        }
    }
    Ok(FourierOracle {
        spec: reps.group().spec().clone(),
        order: eta,
        matrix,
        encoding,
    })
}

/// One irreducible block of a restricted representation: the rows of the
/// parent representation it occupies and the subgroup representation it
/// equals (as an index into the subgroup's set).
#[derive(Debug, Clone)]
pub struct RestrictionBlock {
    pub rows: Vec<usize>,
    pub subrep: usize,
    pub subrep_name: String,
}

/// The full block decomposition of one representation restricted to the
/// subgroup.
#[derive(Debug, Clone)]
pub struct RepRestriction {
    pub rep: usize,
    pub rep_name: String,
    pub blocks: Vec<RestrictionBlock>,
}

/// Result of a successful adaptation check: every representation of the
/// parent set restricts to a clean block-diagonal stack of members of the
/// subgroup's set.
#[derive(Debug, Clone)]
pub struct AdaptedReport {
    pub restrictions: Vec<RepRestriction>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.0[rx.max(ry)] = rx.min(ry);
        }
    }
}

/// Checks whether `reps` is adapted to the subgroup image of `subset`:
/// `subset[t]` must embed the group of `sub_reps` homomorphically into the
/// group of `reps`, and every member of `reps`, restricted to the image,
/// must split into blocks each equal (up to an internal row permutation
/// for blocks of dimension ≤ 4) to a member of `sub_reps`. Off-diagonal
/// entries below `tol` count as zero.
pub fn check_adapted(
    reps: &RepresentationSet,
    subset: &[usize],
    sub_reps: &RepresentationSet,
    tol: f64,
) -> Result<AdaptedReport, GroupError> {
    let g = reps.group();
    let h = sub_reps.group();
    if subset.len() != h.order() {
        return Err(GroupError::NotASubgroup(format!(
            "subset has {} labels but the subgroup has order {}",
            subset.len(),
            h.order()
        )));
    }
    g.is_subgroup(subset)?;
    if subset[0] != 0 {
        return Err(GroupError::NotASubgroup(
            "the subgroup identity must map to the identity".into(),
        ));
    }
    for t1 in 0..h.order() {
        for t2 in 0..h.order() {
            if subset[h.multiply(t1, t2)] != g.multiply(subset[t1], subset[t2]) {
                return Err(GroupError::NotASubgroup(format!(
                    "subset is not a homomorphic image: fails at ({t1}, {t2})"
                )));
            }
        }
    }
    let mut restrictions = Vec::with_capacity(reps.members().len());
    for (p, member) in reps.members().iter().enumerate() {
        let d = member.degree();
        let mut uf = UnionFind::new(d);
        for &label in subset {
            let mat = member.matrix(label);
            for k in 0..d {
                for l in 0..d {
                    if k != l && mat.get(k, l).norm() > tol {
                        uf.union(k, l);
                    }
                }
            }
        }
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); d];
        for k in 0..d {
            let root = uf.find(k);
            by_root[root].push(k);
        }
        let mut blocks_rows: Vec<Vec<usize>> =
            by_root.into_iter().filter(|b| !b.is_empty()).collect();
        blocks_rows.sort_by_key(|b| b[0]);
        let mut blocks = Vec::with_capacity(blocks_rows.len());
        for rows in blocks_rows {
            let subrep = match_block(member, subset, &rows, sub_reps, tol)?;
            let subrep_name = sub_reps.member(subrep)?.name().to_string();
            blocks.push(RestrictionBlock { rows, subrep, subrep_name });
        }
        restrictions.push(RepRestriction {
            rep: p,
            rep_name: member.name().to_string(),
            blocks,
        });
    }
    Ok(AdaptedReport { restrictions })
}

/// Finds the member of `sub_reps` equal to the restriction block of
/// `member` on `rows`, trying the ascending row order first and then, for
/// blocks of dimension ≤ 4, every internal row permutation.
fn match_block(
    member: &Representation,
    subset: &[usize],
    rows: &[usize],
    sub_reps: &RepresentationSet,
    tol: f64,
) -> Result<usize, GroupError> {
    let size = rows.len();
    let block_matches = |perm: &[usize], candidate: &Representation| -> bool {
        subset.iter().enumerate().all(|(t, &label)| {
            let mat = member.matrix(label);
            let cand = candidate.matrix(t);
            (0..size).all(|u| {
                (0..size)
                    .all(|v| (mat.get(rows[perm[u]], rows[perm[v]]) - cand.get(u, v)).norm() <= tol)
            })
        })
    };
    let trace_matches = |candidate: &Representation| -> bool {
        subset.iter().enumerate().all(|(t, &label)| {
            let mat = member.matrix(label);
            let trace: Complex64 = rows.iter().map(|&k| mat.get(k, k)).sum();
            (trace - candidate.character(t)).norm() <= tol * size as f64
        })
    };
    let identity: Vec<usize> = (0..size).collect();
    for (idx, candidate) in sub_reps.members().iter().enumerate() {
        if candidate.degree() == size && block_matches(&identity, candidate) {
            return Ok(idx);
        }
    }
    if size > 1 && size <= 4 {
        for (idx, candidate) in sub_reps.members().iter().enumerate() {
            if candidate.degree() != size || !trace_matches(candidate) {
                continue;
            }
            let mut perm = identity.clone();
            if permutation_search(&mut perm, 0, &|p| block_matches(p, candidate)) {
                return Ok(idx);
            }
        }
    }
    Err(GroupError::Representation(format!(
        "restriction block of {} on rows {:?} matches no subgroup representation",
        member.name(),
        rows
    )))
}

/// Tries every permutation of `perm[from..]` (Heap-style recursion),
/// returning true the first time `accept` does.
fn permutation_search(
    perm: &mut Vec<usize>,
    from: usize,
    accept: &impl Fn(&[usize]) -> bool,
) -> bool {
    if from + 1 >= perm.len() {
        return accept(perm);
    }
    for i in from..perm.len() {
        perm.swap(from, i);
        if permutation_search(perm, from + 1, accept) {
            return true;
        }
        perm.swap(from, i);
    }
    false
}
