//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything here works on [`BigInt`] entries: Hermite normal forms,
//! lattices with canonical bases, intersections of lattices, the gcd of
//! maximal minors, small congruence systems, and exact membership tests
//! for finitely generated affine semigroups.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntlatError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("row {row} has length {got}, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("vector has a negative entry at position {index}")]
    NegativeEntry { index: usize },
    #[error("generator {index} is the zero vector")]
    ZeroGenerator { index: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("modulus must be positive")]
    NonPositiveModulus,
}

/// An integer vector. Serializes as a JSON array of numbers, falling back to
/// decimal strings for entries outside the `i64` range.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntVec(pub Vec<BigInt>);

impl IntVec {
    pub fn zeros(len: usize) -> Self {
        IntVec(vec![BigInt::zero(); len])
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        IntVec(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn from_u64s(values: &[u64]) -> Self {
        IntVec(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        IntVec(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn neg(&self) -> Self {
        IntVec(self.0.iter().map(|x| -x).collect())
    }

    /// Gcd of the absolute values of the entries (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }

    fn add_scaled(&mut self, other: &IntVec, factor: &BigInt) {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            *x += y * factor;
        }
    }
}

impl From<Vec<BigInt>> for IntVec {
    fn from(v: Vec<BigInt>) -> Self {
        IntVec(v)
    }
}

impl std::ops::Index<usize> for IntVec {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Debug for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl Serialize for IntVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let items: Vec<JsonInt> = self
            .0
            .iter()
            .map(|x| match i64::try_from(x) {
                Ok(v) => JsonInt::Small(v),
                Err(_) => JsonInt::Big(x.to_string()),
            })
            .collect();
        items.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<JsonInt>::deserialize(deserializer)?;
        items
            .into_iter()
            .map(|item| match item {
                JsonInt::Small(v) => Ok(BigInt::from(v)),
                JsonInt::Big(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| serde::de::Error::custom(format!("bad integer {s:?}: {e}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(IntVec)
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, IntlatError> {
        if rows == 0 || cols == 0 {
            return Err(IntlatError::EmptyMatrix { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(IntlatError::EntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[IntVec]) -> Result<Self, IntlatError> {
        let cols = rows.first().map_or(0, IntVec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(IntlatError::RaggedRows {
                    row: i,
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend(row.0.iter().cloned());
        }
        IntMatrix::new(rows.len(), cols, entries)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, IntlatError> {
        let rows: Vec<IntVec> = rows.iter().map(|r| IntVec::from_i64s(r)).collect();
        IntMatrix::from_rows(&rows)
    }

    pub fn from_columns(columns: &[IntVec]) -> Result<Self, IntlatError> {
        Ok(IntMatrix::from_rows(columns)?.transpose())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> IntVec {
        IntVec(self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> IntVec {
        IntVec((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(self.rows * columns.len());
        for i in 0..self.rows {
            for &j in columns {
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix {
            rows: self.rows,
            cols: columns.len(),
            entries,
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

/// Row-style Hermite normal form of a list of rows, in place. Returns the rank.
///
/// Nonzero rows come first, each leading entry is positive and strictly to the
/// right of the one above, and entries above a leading entry lie in
/// `[0, leading)`. Every step is a unimodular row operation.
fn hnf_rows(rows: &mut [IntVec], cols: usize) -> usize {
    let m = rows.len();
    let mut r = 0;
    for col in 0..cols {
        if r == m {
            break;
        }
        for i in (r + 1)..m {
            if rows[i][col].is_zero() {
                continue;
            }
            let a = rows[r][col].clone();
            let b = rows[i][col].clone();
            let eg = a.extended_gcd(&b);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let a_g = &a / &g;
            let b_g = &b / &g;
            let top: Vec<BigInt> = rows[r]
                .iter()
                .zip(rows[i].iter())
                .map(|(x, y)| &s * x + &t * y)
                .collect();
            let bottom: Vec<BigInt> = rows[r]
                .iter()
                .zip(rows[i].iter())
                .map(|(x, y)| &a_g * y - &b_g * x)
                .collect();
            rows[r] = IntVec(top);
            rows[i] = IntVec(bottom);
        }
        if rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            rows[r] = rows[r].neg();
        }
        let pivot = rows[r][col].clone();
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let q = row[col].div_floor(&pivot);
            if !q.is_zero() {
                row.add_scaled(&pivot_row, &-q);
            }
        }
        r += 1;
    }
    r
}

/// Row-style Hermite normal form. The result has the shape of `m`, with zero
/// rows at the bottom; the second component is the rank.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, usize) {
    let mut rows = m.row_vectors();
    let rank = hnf_rows(&mut rows, m.cols);
    let h = IntMatrix::from_rows(&rows).expect("shape preserved");
    (h, rank)
}

/// HNF of `[m | I]`. Returns `(h, u, rank)` with `u * m = h` and `u` unimodular.
fn hnf_with_transform(m: &IntMatrix) -> (Vec<IntVec>, Vec<IntVec>, usize) {
    let (rows, cols) = (m.rows, m.cols);
    let mut aug: Vec<IntVec> = (0..rows)
        .map(|i| {
            let mut v = m.row(i).0;
            v.extend((0..rows).map(|j| {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            IntVec(v)
        })
        .collect();
    hnf_rows(&mut aug, cols + rows);
    let rank = aug
        .iter()
        .take_while(|r| r.0[..cols].iter().any(|x| !x.is_zero()))
        .count();
    let h = aug.iter().map(|r| IntVec(r.0[..cols].to_vec())).collect();
    let u = aug.iter().map(|r| IntVec(r.0[cols..].to_vec())).collect();
    (h, u, rank)
}

/// Sublattice of `Z^ambient_dim`, stored by its row-HNF basis. Two lattices are
/// equal exactly when their stored bases are equal.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Lattice {
    ambient_dim: usize,
    basis: Vec<IntVec>,
}

impl Lattice {
    pub fn zero(ambient_dim: usize) -> Self {
        Lattice {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &IntVec) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut rest = v.clone();
        for b in &self.basis {
            let col = b
                .iter()
                .position(|x| !x.is_zero())
                .expect("basis rows are nonzero");
            let (q, r) = rest[col].div_rem(&b[col]);
            if !r.is_zero() {
                return false;
            }
            rest.add_scaled(b, &-q);
        }
        rest.is_zero()
    }
}

/// The lattice generated by `vectors` inside `Z^ambient_dim`.
pub fn lattice_of(vectors: &[IntVec], ambient_dim: usize) -> Result<Lattice, IntlatError> {
    if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
        return Err(IntlatError::DimensionMismatch {
            left: ambient_dim,
            right: v.len(),
        });
    }
    let mut rows = vectors.to_vec();
    let rank = hnf_rows(&mut rows, ambient_dim);
    rows.truncate(rank);
    Ok(Lattice {
        ambient_dim,
        basis: rows,
    })
}

/// `l1 ∩ l2`, via the integer kernel of the stacked system `x·B1 = y·B2`.
pub fn lattice_intersect(l1: &Lattice, l2: &Lattice) -> Result<Lattice, IntlatError> {
    if l1.ambient_dim != l2.ambient_dim {
        return Err(IntlatError::DimensionMismatch {
            left: l1.ambient_dim,
            right: l2.ambient_dim,
        });
    }
    let dim = l1.ambient_dim;
    if l1.rank() == 0 || l2.rank() == 0 {
        return Ok(Lattice::zero(dim));
    }
    let mut stacked = l1.basis.clone();
    stacked.extend(l2.basis.iter().map(IntVec::neg));
    let m = IntMatrix::from_rows(&stacked)?;
    let (_, u, rank) = hnf_with_transform(&m);
    let r1 = l1.rank();
    let generators: Vec<IntVec> = u[rank..]
        .iter()
        .map(|z| {
            let mut acc = IntVec::zeros(dim);
            for (coef, b) in z.0[..r1].iter().zip(&l1.basis) {
                acc.add_scaled(b, coef);
            }
            acc
        })
        .collect();
    lattice_of(&generators, dim)
}

/// The generator of a rank-1 lattice, first nonzero entry positive.
pub fn cyclic_generator(l: &Lattice) -> Option<IntVec> {
    match l.basis.as_slice() {
        [w] => Some(w.clone()),
        _ => None,
    }
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).0).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Gcd of all `rows × rows` minors of `m` (0 when they all vanish).
///
/// Requires `rows <= cols`. Every column subset is visited in lexicographic
/// order and its determinant taken by Bareiss elimination.
pub fn gcd_max_minors(m: &IntMatrix) -> BigInt {
    let (k, n) = (m.rows, m.cols);
    assert!(k <= n, "gcd_max_minors needs rows <= cols");
    let mut g = BigInt::zero();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let det = bareiss_determinant(&m.select_columns(&combo));
        g = g.gcd(&det);
        if g.is_one() {
            return g;
        }
        // next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if combo[i] != i + n - k {
                break;
            }
            if i == 0 {
                return g;
            }
        }
        combo[i] += 1;
        for j in (i + 1)..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// One congruence `coeff_x·x + coeff_y·y ≡ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub coeff_x: BigInt,
    pub coeff_y: BigInt,
    pub rhs: BigInt,
}

impl Congruence {
    pub fn new(
        coeff_x: impl Into<BigInt>,
        coeff_y: impl Into<BigInt>,
        rhs: impl Into<BigInt>,
    ) -> Self {
        Congruence {
            coeff_x: coeff_x.into(),
            coeff_y: coeff_y.into(),
            rhs: rhs.into(),
        }
    }

    fn holds(&self, x: &BigInt, y: &BigInt, modulus: &BigInt) -> bool {
        (&self.coeff_x * x + &self.coeff_y * y - &self.rhs)
            .mod_floor(modulus)
            .is_zero()
    }
}

/// Lexicographically smallest `(x, y)` in `[0, modulus)²` satisfying every
/// congruence, by exhaustive scan.
pub fn solve_linear_congruences(
    system: &[Congruence],
    modulus: &BigInt,
) -> Result<Option<(BigInt, BigInt)>, IntlatError> {
    if !modulus.is_positive() {
        return Err(IntlatError::NonPositiveModulus);
    }
    let mut x = BigInt::zero();
    while &x < modulus {
        let mut y = BigInt::zero();
        while &y < modulus {
            if system.iter().all(|c| c.holds(&x, &y, modulus)) {
                return Ok(Some((x, y)));
            }
            y += 1;
        }
        x += 1;
    }
    Ok(None)
}

/// Ordered list of generators of an affine semigroup `N T ⊂ N^ambient_dim`.
/// Duplicates are allowed; the order is significant.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SemigroupSet {
    ambient_dim: usize,
    vectors: Vec<IntVec>,
}

impl SemigroupSet {
    pub fn new(ambient_dim: usize, vectors: Vec<IntVec>) -> Result<Self, IntlatError> {
        for (i, v) in vectors.iter().enumerate() {
            if v.is_zero() {
                return Err(IntlatError::ZeroGenerator { index: i });
            }
            if v.len() != ambient_dim {
                return Err(IntlatError::DimensionMismatch {
                    left: ambient_dim,
                    right: v.len(),
                });
            }
            if let Some(index) = v.iter().position(Signed::is_negative) {
                return Err(IntlatError::NegativeEntry { index });
            }
        }
        Ok(SemigroupSet {
            ambient_dim,
            vectors,
        })
    }

    pub fn from_u64_rows(rows: &[&[u64]]) -> Result<Self, IntlatError> {
        let dim = rows.first().map_or(0, |r| r.len());
        SemigroupSet::new(dim, rows.iter().map(|r| IntVec::from_u64s(r)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vectors(&self) -> &[IntVec] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The sub-list picked out by `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> SemigroupSet {
        SemigroupSet {
            ambient_dim: self.ambient_dim,
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }

    pub fn lattice(&self) -> Lattice {
        lattice_of(&self.vectors, self.ambient_dim).expect("dimensions checked at construction")
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.lattice().rank()
    }

    pub fn is_linearly_independent(&self) -> bool {
        self.rank() == self.len()
    }

    /// `Σ coeffs[i]·vectors[i]`.
    pub fn combine(&self, coeffs: &IntVec) -> IntVec {
        let mut acc = IntVec::zeros(self.ambient_dim);
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            acc.add_scaled(v, c);
        }
        acc
    }
}

/// Nonnegative coefficients `c` with `Σ c_t·t = w`, or `None` if `w ∉ N T`.
///
/// The answer is exact. Among all decompositions the lexicographically
/// smallest coefficient vector (in the stored order of `t`) is returned. The
/// integer solution set is computed first as a particular solution plus a
/// kernel lattice; kernels of rank at most one are settled in closed form, and
/// larger kernels fall back to a bounded depth-first search where each
/// coefficient is capped by `min_j floor(w_j / t_j)` over the support of `t`.
pub fn semigroup_member(w: &IntVec, t: &SemigroupSet) -> Result<Option<IntVec>, IntlatError> {
    if w.len() != t.ambient_dim {
        return Err(IntlatError::DimensionMismatch {
            left: t.ambient_dim,
            right: w.len(),
        });
    }
    if let Some(index) = w.iter().position(Signed::is_negative) {
        return Err(IntlatError::NegativeEntry { index });
    }
    if t.is_empty() {
        return Ok(w.is_zero().then(IntVec::default));
    }
    let g = IntMatrix::from_rows(&t.vectors)?;
    let (h, u, rank) = hnf_with_transform(&g);
    let particular = match solve_row_echelon(&h[..rank], w) {
        Some(y) => {
            let mut x = IntVec::zeros(t.len());
            for (coef, row) in y.iter().zip(&u[..rank]) {
                x.add_scaled(row, coef);
            }
            x
        }
        None => return Ok(None),
    };
    let kernel = &u[rank..];
    match kernel {
        [] => Ok(particular.is_nonnegative().then_some(particular)),
        [k] => Ok(nonnegative_on_line(&particular, k)),
        _ => Ok(dfs_member(w, t)),
    }
}

/// Solves `y·H = w` for `H` in row echelon form with nonzero rows.
fn solve_row_echelon(h: &[IntVec], w: &IntVec) -> Option<Vec<BigInt>> {
    let mut rest = w.clone();
    let mut y = Vec::with_capacity(h.len());
    for row in h {
        let col = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = rest[col].div_rem(&row[col]);
        if !r.is_zero() {
            return None;
        }
        rest.add_scaled(row, &-&q);
        y.push(q);
    }
    rest.is_zero().then_some(y)
}

/// Lexicographically smallest nonnegative point of `x + Z·k`, if any.
fn nonnegative_on_line(x: &IntVec, k: &IntVec) -> Option<IntVec> {
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for (xi, ki) in x.iter().zip(k.iter()) {
        if ki.is_zero() {
            if xi.is_negative() {
                return None;
            }
        } else if ki.is_positive() {
            // z >= ceil(-x_i / k_i)
            let bound = (-xi).div_ceil(ki);
            lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
        } else {
            // z <= floor(x_i / -k_i)
            let bound = xi.div_floor(&-ki);
            hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
        }
    }
    let lead_positive = k.iter().find(|v| !v.is_zero())?.is_positive();
    let z = match (lo, hi) {
        (Some(l), Some(h)) if l > h => return None,
        (Some(l), _) if lead_positive => l,
        (_, Some(h)) if !lead_positive => h,
        // unbounded in the preferred direction: only possible if t has a
        // nonnegative kernel vector, which nonzero nonnegative generators rule out
        _ => return None,
    };
    let mut point = x.clone();
    point.add_scaled(k, &z);
    Some(point)
}

fn dfs_member(w: &IntVec, t: &SemigroupSet) -> Option<IntVec> {
    let m = t.len();
    // coordinates still reachable by generators i.. (suffix supports)
    let mut reachable = vec![vec![false; t.ambient_dim]; m + 1];
    for i in (0..m).rev() {
        let next = reachable[i + 1].clone();
        for (j, r) in reachable[i].iter_mut().enumerate() {
            *r = next[j] || !t.vectors[i][j].is_zero();
        }
    }
    let mut coeffs = vec![BigInt::zero(); m];
    fn go(
        i: usize,
        rest: &mut IntVec,
        t: &SemigroupSet,
        reachable: &[Vec<bool>],
        coeffs: &mut [BigInt],
    ) -> bool {
        if (0..rest.len()).any(|j| !reachable[i][j] && !rest[j].is_zero()) {
            return false;
        }
        if i == t.len() {
            return rest.is_zero();
        }
        let v = &t.vectors[i];
        let bound = v
            .iter()
            .zip(rest.iter())
            .filter(|(vj, _)| !vj.is_zero())
            .map(|(vj, rj)| rj.div_floor(vj))
            .min()
            .unwrap_or_else(BigInt::zero);
        let mut c = BigInt::zero();
        while c <= bound {
            if go(i + 1, rest, t, reachable, coeffs) {
                coeffs[i] = c;
                return true;
            }
            rest.add_scaled(v, &BigInt::from(-1));
            c += 1;
        }
        // undo
        rest.add_scaled(v, &c);
        false
    }
    let mut rest = w.clone();
    go(0, &mut rest, t, &reachable, &mut coeffs).then_some(IntVec(coeffs))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(p, r)` with `n = p^r`, `r >= 1`; `None` for 1 and for non prime powers.
pub fn as_prime_power(n: u64) -> Option<(u64, u32)> {
    match prime_divisors(n).as_slice() {
        [p] => {
            let (mut m, mut r) = (n, 0);
            while m % p == 0 {
                m /= p;
                r += 1;
            }
            Some((*p, r))
        }
        _ => None,
    }
}

/// Largest `e` with `p^e | x`; `None` for `x = 0`.
pub fn valuation(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(e);
        }
        x = q;
        e += 1;
    }
}
