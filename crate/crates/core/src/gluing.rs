//! p-gluing of generator sets and certificate trees for complete p-gluedness.
//!
//! A split `T = T1 ⊔ T2` is a p-gluing when `Z T1 ∩ Z T2 = Z w` for some
//! nonzero `w` and `p^k w ∈ N T1 ∩ N T2` for some integer `k`. A set is
//! completely p-glued when it splits that way recursively down to linearly
//! independent (free) pieces. Certificates carry everything needed to
//! re-check them without trusting the search.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{
    self, as_prime_power, cyclic_generator, lattice_intersect, lattice_of, semigroup_member,
    valuation, IntVec, IntlatError, SemigroupSet,
};
use crate::model::{binomial_from_relation, in_ideal, Binomial, Shape, Variety};

pub const DEFAULT_K_MAX: i64 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GluingError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("both sides of a split must be nonempty")]
    EmptySide,
    #[error(transparent)]
    Intlat(#[from] IntlatError),
    #[error("invalid certificate: {0}")]
    Invalid(String),
    #[error("d = {0} is not a prime power; the prime-power construction does not apply")]
    NotPrimePower(u64),
    #[error(
        "exponent {name}{index} = {value} is not divisible by {divisor} (choose a larger exponent)"
    )]
    NonIntegralExponent {
        name: &'static str,
        index: usize,
        value: u64,
        divisor: u64,
    },
    #[error("construction requires a {0:?} variety")]
    WrongShape(Shape),
    #[error("variety does not match the mixed prime-pair pattern: {0}")]
    PatternMismatch(String),
    #[error("constructed binomial {0} is not in the ideal")]
    NotInIdeal(String),
}

/// Witness that `T1 ⊔ T2` is a p-gluing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingCertificate {
    pub prime: u64,
    pub t1: SemigroupSet,
    pub t2: SemigroupSet,
    /// Positions of `t1`/`t2` inside the set that was split at the root of
    /// the search (for a standalone check: `t1` then `t2` concatenated).
    pub indices1: Vec<usize>,
    pub indices2: Vec<usize>,
    pub w: IntVec,
    pub k: i64,
    pub coeffs1: IntVec,
    pub coeffs2: IntVec,
}

impl GluingCertificate {
    /// `p^k w`, or `None` when `k < 0` and the division is inexact.
    pub fn scaled_w(&self) -> Option<IntVec> {
        scale_by_prime_power(&self.w, self.prime, self.k)
    }

    /// Re-checks the certificate from scratch.
    pub fn validate(&self) -> Result<(), GluingError> {
        let bad = |m: &str| Err(GluingError::Invalid(m.to_string()));
        if !intlat::is_prime(self.prime) {
            return Err(GluingError::NotPrime(self.prime));
        }
        if self.t1.is_empty() || self.t2.is_empty() {
            return Err(GluingError::EmptySide);
        }
        if self.w.is_zero() {
            return bad("w is zero");
        }
        let dim = self.t1.ambient_dim();
        let meet = lattice_intersect(&self.t1.lattice(), &self.t2.lattice())?;
        if meet != lattice_of(std::slice::from_ref(&self.w), dim)? {
            return bad("Z T1 ∩ Z T2 is not Z w");
        }
        let target = match self.scaled_w() {
            Some(v) => v,
            None => return bad("p^k w is not integral"),
        };
        if !self.coeffs1.is_nonnegative() || !self.coeffs2.is_nonnegative() {
            return bad("negative membership coefficient");
        }
        if self.coeffs1.len() != self.t1.len() || self.coeffs2.len() != self.t2.len() {
            return bad("coefficient count does not match the split");
        }
        if self.t1.combine(&self.coeffs1) != target {
            return bad("coeffs1 do not sum to p^k w");
        }
        if self.t2.combine(&self.coeffs2) != target {
            return bad("coeffs2 do not sum to p^k w");
        }
        Ok(())
    }

    /// The binomial of the relation `Σ coeffs1·T1 = Σ coeffs2·T2`, over a set
    /// of `len` variables matching the root generator set.
    pub fn binomial(&self, len: usize) -> Option<Binomial> {
        binomial_from_relation(
            len,
            &self.indices1,
            &self.coeffs1,
            &self.indices2,
            &self.coeffs2,
        )
    }
}

fn scale_by_prime_power(w: &IntVec, p: u64, k: i64) -> Option<IntVec> {
    let base = BigInt::from(p);
    if k >= 0 {
        return Some(w.scaled(&base.pow(k as u32)));
    }
    let divisor: BigInt = base.pow((-k) as u32);
    w.iter()
        .map(|x| {
            let (q, r) = x.div_rem(&divisor);
            r.is_zero().then_some(q)
        })
        .collect::<Option<Vec<_>>>()
        .map(IntVec)
}

/// Outcome of testing one split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingCheck {
    Glued(GluingCertificate),
    /// `Z T1 ∩ Z T2` is not cyclic (or is zero).
    NotCyclic {
        rank: usize,
    },
    /// The intersection is `Z w` but no `k <= k_max` worked.
    BoundExhausted {
        w: IntVec,
        k_max: i64,
    },
}

impl GluingCheck {
    pub fn certificate(self) -> Option<GluingCertificate> {
        match self {
            GluingCheck::Glued(c) => Some(c),
            _ => None,
        }
    }
}

/// Decides whether `t1 ⊔ t2` is a p-gluing with some `k <= k_max`.
///
/// `k` starts at `-v_p(w)`, the least value keeping `p^k w` integral. At each
/// `k` both `w` and `-w` are tried.
pub fn check_p_gluing(
    t1: &SemigroupSet,
    t2: &SemigroupSet,
    p: u64,
    k_max: i64,
) -> Result<GluingCheck, GluingError> {
    let indices1: Vec<usize> = (0..t1.len()).collect();
    let indices2: Vec<usize> = (t1.len()..t1.len() + t2.len()).collect();
    check_split(t1, t2, indices1, indices2, p, k_max)
}

fn check_split(
    t1: &SemigroupSet,
    t2: &SemigroupSet,
    indices1: Vec<usize>,
    indices2: Vec<usize>,
    p: u64,
    k_max: i64,
) -> Result<GluingCheck, GluingError> {
    if !intlat::is_prime(p) {
        return Err(GluingError::NotPrime(p));
    }
    if t1.is_empty() || t2.is_empty() {
        return Err(GluingError::EmptySide);
    }
    let meet = lattice_intersect(&t1.lattice(), &t2.lattice())?;
    let w = match cyclic_generator(&meet) {
        Some(w) => w,
        None => return Ok(GluingCheck::NotCyclic { rank: meet.rank() }),
    };
    let k_min = -(valuation(&w.content(), p).expect("w is nonzero") as i64);
    for k in k_min..=k_max {
        for candidate in [w.clone(), w.neg()] {
            let target = scale_by_prime_power(&candidate, p, k).expect("k >= -v_p(w)");
            if !target.is_nonnegative() {
                continue;
            }
            let Some(coeffs1) = semigroup_member(&target, t1)? else {
                continue;
            };
            let Some(coeffs2) = semigroup_member(&target, t2)? else {
                continue;
            };
            return Ok(GluingCheck::Glued(GluingCertificate {
                prime: p,
                t1: t1.clone(),
                t2: t2.clone(),
                indices1,
                indices2,
                w: candidate,
                k,
                coeffs1,
                coeffs2,
            }));
        }
    }
    Ok(GluingCheck::BoundExhausted { w, k_max })
}

/// A node of a complete p-gluing certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GluingNode {
    Glued {
        #[serde(flatten)]
        certificate: GluingCertificate,
        left: Box<GluingNode>,
        right: Box<GluingNode>,
    },
    Free {
        free: SemigroupSet,
        indices: Vec<usize>,
    },
}

impl GluingNode {
    /// `(root position, vector)` pairs covered by this node.
    fn members(&self) -> Vec<(usize, IntVec)> {
        match self {
            GluingNode::Free { free, indices } => indices
                .iter()
                .copied()
                .zip(free.vectors().iter().cloned())
                .collect(),
            GluingNode::Glued { certificate: c, .. } => c
                .indices1
                .iter()
                .copied()
                .zip(c.t1.vectors().iter().cloned())
                .chain(
                    c.indices2
                        .iter()
                        .copied()
                        .zip(c.t2.vectors().iter().cloned()),
                )
                .collect(),
        }
    }

    fn validate(&self) -> Result<(), GluingError> {
        match self {
            GluingNode::Free { free, indices } => {
                if free.len() != indices.len() {
                    return Err(GluingError::Invalid(
                        "free leaf index count mismatch".into(),
                    ));
                }
                if !free.is_linearly_independent() {
                    return Err(GluingError::Invalid(
                        "free leaf vectors are linearly dependent".into(),
                    ));
                }
                Ok(())
            }
            GluingNode::Glued {
                certificate,
                left,
                right,
            } => {
                certificate.validate()?;
                for (child, set, idx) in [
                    (left, &certificate.t1, &certificate.indices1),
                    (right, &certificate.t2, &certificate.indices2),
                ] {
                    child.validate()?;
                    let mut a = child.members();
                    let mut b: Vec<(usize, IntVec)> = idx
                        .iter()
                        .copied()
                        .zip(set.vectors().iter().cloned())
                        .collect();
                    a.sort();
                    b.sort();
                    if a != b {
                        return Err(GluingError::Invalid(
                            "child split does not partition its parent side".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a GluingCertificate>) {
        if let GluingNode::Glued {
            certificate,
            left,
            right,
        } = self
        {
            out.push(certificate);
            left.collect(out);
            right.collect(out);
        }
    }
}

/// Certificate that a generator set is completely p-glued.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingTree {
    pub prime: u64,
    pub root: GluingNode,
}

impl GluingTree {
    /// Bottom-up re-validation, independent of the search.
    pub fn validate(&self) -> Result<(), GluingError> {
        let mut certs = Vec::new();
        self.root.collect(&mut certs);
        if let Some(c) = certs.iter().find(|c| c.prime != self.prime) {
            return Err(GluingError::Invalid(format!(
                "node certified for p = {} inside a tree for p = {}",
                c.prime, self.prime
            )));
        }
        self.root.validate()
    }

    /// Gluing certificates in pre-order (root first).
    pub fn certificates(&self) -> Vec<&GluingCertificate> {
        let mut out = Vec::new();
        self.root.collect(&mut out);
        out
    }

    /// The size of the root generator set.
    pub fn root_len(&self) -> usize {
        self.root.members().len()
    }

    /// One binomial per gluing node, from its relation `p^k w`.
    pub fn binomials(&self) -> Vec<Binomial> {
        let len = self.root_len();
        self.certificates()
            .into_iter()
            .filter_map(|c| c.binomial(len))
            .collect()
    }
}

/// Searches for a complete p-gluing of `t`.
///
/// Linearly independent sets are free leaves. Otherwise unordered splits are
/// tried by increasing size of the smaller side, and for equal sizes in
/// increasing lexicographic order of that side's membership string (position
/// `i` marked `1` when the `i`-th vector is in the smaller side). The smaller
/// side becomes `t2`. The first split whose both sides succeed wins.
pub fn completely_p_glued(
    t: &SemigroupSet,
    p: u64,
    k_max: i64,
) -> Result<Option<GluingTree>, GluingError> {
    if !intlat::is_prime(p) {
        return Err(GluingError::NotPrime(p));
    }
    if t.is_empty() {
        return Err(GluingError::EmptySide);
    }
    let mut search = Search {
        t,
        p,
        k_max,
        memo: HashMap::new(),
    };
    let all: Vec<usize> = (0..t.len()).collect();
    Ok(search.run(&all)?.map(|root| GluingTree { prime: p, root }))
}

struct Search<'a> {
    t: &'a SemigroupSet,
    p: u64,
    k_max: i64,
    memo: HashMap<Vec<usize>, Option<GluingNode>>,
}

impl Search<'_> {
    fn run(&mut self, indices: &[usize]) -> Result<Option<GluingNode>, GluingError> {
        if let Some(hit) = self.memo.get(indices) {
            return Ok(hit.clone());
        }
        let set = self.t.subset(indices);
        let found = if set.is_linearly_independent() {
            Some(GluingNode::Free {
                free: set,
                indices: indices.to_vec(),
            })
        } else {
            self.try_splits(indices)?
        };
        self.memo.insert(indices.to_vec(), found.clone());
        Ok(found)
    }

    fn try_splits(&mut self, indices: &[usize]) -> Result<Option<GluingNode>, GluingError> {
        let m = indices.len();
        for size in 1..=m / 2 {
            for mask in split_masks(m, size) {
                let small: Vec<usize> = (0..m).filter(|&i| mask[i]).map(|i| indices[i]).collect();
                let large: Vec<usize> = (0..m).filter(|&i| !mask[i]).map(|i| indices[i]).collect();
                let check = check_split(
                    &self.t.subset(&large),
                    &self.t.subset(&small),
                    large.clone(),
                    small.clone(),
                    self.p,
                    self.k_max,
                )?;
                let Some(certificate) = check.certificate() else {
                    continue;
                };
                let Some(left) = self.run(&large)? else {
                    continue;
                };
                let Some(right) = self.run(&small)? else {
                    continue;
                };
                return Ok(Some(GluingNode::Glued {
                    certificate,
                    left: Box::new(left),
                    right: Box::new(right),
                }));
            }
        }
        Ok(None)
    }
}

/// Membership masks of `size`-subsets of `0..m` in increasing lexicographic
/// order. When `2·size == m` each unordered split appears once.
fn split_masks(m: usize, size: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    let mut mask = vec![false; m];
    fn rec(pos: usize, left: usize, mask: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if left == 0 {
            out.push(mask.clone());
            return;
        }
        if mask.len() - pos < left {
            return;
        }
        // `false` before `true` keeps the output sorted
        rec(pos + 1, left, mask, out);
        mask[pos] = true;
        rec(pos + 1, left - 1, mask, out);
        mask[pos] = false;
    }
    rec(0, size, &mut mask, &mut out);
    if 2 * size == m {
        out.retain(|mask| !mask[0]);
    }
    out
}

fn monomial_binomial(y_index: usize, y_exp: u64, x_exps: &[u64]) -> Result<Binomial, GluingError> {
    let n = x_exps.len();
    let mut plus = vec![0; n + 2];
    plus[n + y_index] = y_exp;
    let mut minus = x_exps.to_vec();
    minus.extend([0, 0]);
    Binomial::new(plus, minus).map_err(|e| GluingError::Invalid(e.to_string()))
}

fn checked(v: &Variety, fs: [Binomial; 2]) -> Result<(Binomial, Binomial), GluingError> {
    for f in &fs {
        if !in_ideal(f, v) {
            return Err(GluingError::NotInIdeal(f.to_string()));
        }
    }
    let [f1, f2] = fs;
    Ok((f1, f2))
}

/// Defining pair for a uniform variety with `d = p^r`:
/// `F1 = y1^{p^h} − ∏ x_i^{a_i p^{h−r}}`, `F2 = y2^{p^k} − ∏ x_i^{b_i p^{k−r}}`.
///
/// `h` and `k` default to `r`. Smaller values are accepted when the resulting
/// exponents stay integral. For `d = 1` the pair is `y1 − x^a`, `y2 − x^b`.
pub fn stci_pair_prime_power(
    v: &Variety,
    h: Option<u32>,
    k: Option<u32>,
) -> Result<(Binomial, Binomial), GluingError> {
    let d = v
        .uniform_degree()
        .ok_or(GluingError::WrongShape(Shape::Uniform))?;
    let (p, r) = match d {
        1 => (1, 0),
        _ => as_prime_power(d).ok_or(GluingError::NotPrimePower(d))?,
    };
    let scale = |name: &'static str, exps: &[u64], e: u32| -> Result<Vec<u64>, GluingError> {
        exps.iter()
            .enumerate()
            .map(|(i, &x)| {
                if e >= r {
                    Ok(x * p.pow(e - r))
                } else {
                    let divisor = p.pow(r - e);
                    if x % divisor != 0 {
                        return Err(GluingError::NonIntegralExponent {
                            name,
                            index: i + 1,
                            value: x,
                            divisor,
                        });
                    }
                    Ok(x / divisor)
                }
            })
            .collect()
    };
    let h = if d == 1 { 0 } else { h.unwrap_or(r) };
    let k = if d == 1 { 0 } else { k.unwrap_or(r) };
    let f1 = monomial_binomial(0, p.pow(h), &scale("a", v.a(), h)?)?;
    let f2 = monomial_binomial(1, p.pow(k), &scale("b", v.b(), k)?)?;
    checked(v, [f1, f2])
}

/// Defining pair for the mixed pattern `d2 = q`, `d3 = pq`, `a3 = cq` with
/// distinct primes `p, q`: `F1 = y1^{d1 p} − x1^{a1 p} x3^{d1 c}` and
/// `F2 = y2^{pq} − x2^{b2 p} x3^{b3}`.
pub fn stci_pair_example35(
    v: &Variety,
    p: u64,
    q: u64,
    c: u64,
) -> Result<(Binomial, Binomial), GluingError> {
    if v.shape() != Shape::Mixed3 {
        return Err(GluingError::WrongShape(Shape::Mixed3));
    }
    let mismatch = |m: String| Err(GluingError::PatternMismatch(m));
    for x in [p, q] {
        if !intlat::is_prime(x) {
            return Err(GluingError::NotPrime(x));
        }
    }
    if p == q {
        return mismatch(format!("p and q must be distinct (both {p})"));
    }
    let (d, a, b) = (v.degrees(), v.a(), v.b());
    if d[1] != q {
        return mismatch(format!("d2 = {} but q = {q}", d[1]));
    }
    if d[2] != p * q {
        return mismatch(format!("d3 = {} but pq = {}", d[2], p * q));
    }
    if c == 0 || a[2] != c * q {
        return mismatch(format!("a3 = {} but cq = {}", a[2], c * q));
    }
    if d[0] % p == 0 || c.is_multiple_of(p) {
        return mismatch(format!("p = {p} must divide neither d1 nor c"));
    }
    if b[1] % q == 0 {
        return mismatch(format!("q = {q} must not divide b2"));
    }
    if b[2] % p == 0 || b[2] % q == 0 {
        return mismatch(format!("b3 = {} must be prime to p and q", b[2]));
    }
    let f1 = monomial_binomial(0, d[0] * p, &[a[0] * p, 0, d[0] * c])?;
    let f2 = monomial_binomial(1, p * q, &[0, b[1] * p, b[2]])?;
    checked(v, [f1, f2])
}

/// `(p^k w)` equals `Σ coeffs·t` for the certificate sides; exposed for tests
/// that build certificates by hand.
pub fn relation_holds(t: &SemigroupSet, coeffs: &IntVec, target: &IntVec) -> bool {
    t.combine(coeffs) == *target
}

/// `p^k` as a big integer (`k >= 0`).
pub fn prime_power(p: u64, k: u32) -> BigInt {
    if k == 0 {
        BigInt::one()
    } else {
        BigInt::from(p).pow(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[&[u64]]) -> SemigroupSet {
        SemigroupSet::from_u64_rows(rows).unwrap()
    }

    fn v(x: &[i64]) -> IntVec {
        IntVec::from_i64s(x)
    }

    fn example_1_4() -> Variety {
        Variety::uniform(4, vec![8, 0, 1], vec![0, 12, 3]).unwrap()
    }

    fn example_3_5() -> Variety {
        Variety::mixed3([5, 3, 6], [2, 0, 3], [0, 1, 1]).unwrap()
    }

    #[test]
    fn inner_split_of_first_example() {
        let t11 = set(&[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4]]);
        let t12 = set(&[&[8, 0, 1]]);
        for p in [2, 3, 5, 7] {
            let cert = check_p_gluing(&t11, &t12, p, 16)
                .unwrap()
                .certificate()
                .unwrap();
            assert_eq!(cert.w, v(&[32, 0, 4]));
            assert_eq!(cert.k, 0);
            assert_eq!(cert.coeffs1, v(&[8, 0, 1]));
            assert_eq!(cert.coeffs2, v(&[4]));
            cert.validate().unwrap();
        }
    }

    #[test]
    fn outer_split_of_first_example() {
        let t1 = set(&[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[8, 0, 1]]);
        let t2 = set(&[&[0, 12, 3]]);
        let cert = check_p_gluing(&t1, &t2, 2, 16)
            .unwrap()
            .certificate()
            .unwrap();
        assert_eq!(cert.w, v(&[0, 12, 3]));
        assert_eq!(cert.k, 2);
        assert_eq!(cert.coeffs1, v(&[0, 12, 3, 0]));
        assert_eq!(cert.coeffs2, v(&[4]));
        cert.validate().unwrap();
        // for p = 3 the powers 3^k never land in N T1
        assert_eq!(
            check_p_gluing(&t1, &t2, 3, 16).unwrap(),
            GluingCheck::BoundExhausted {
                w: v(&[0, 12, 3]),
                k_max: 16
            }
        );
    }

    #[test]
    fn non_cyclic_intersection() {
        let check = check_p_gluing(&set(&[&[1, 0]]), &set(&[&[0, 1]]), 2, 16).unwrap();
        assert_eq!(check, GluingCheck::NotCyclic { rank: 0 });
        assert_eq!(
            check_p_gluing(&set(&[&[1, 0]]), &set(&[&[0, 1]]), 4, 16),
            Err(GluingError::NotPrime(4))
        );
    }

    #[test]
    fn tree_for_first_example() {
        let t = example_1_4().generator_set();
        let tree = completely_p_glued(&t, 2, 16).unwrap().unwrap();
        tree.validate().unwrap();
        let certs = tree.certificates();
        assert_eq!(certs.len(), 2);
        assert_eq!((certs[0].w.clone(), certs[0].k), (v(&[0, 12, 3]), 2));
        assert_eq!(certs[0].indices2, vec![4]);
        assert_eq!((certs[1].w.clone(), certs[1].k), (v(&[32, 0, 4]), 0));
        assert_eq!(certs[1].indices2, vec![3]);
        let fs = tree.binomials();
        assert!(fs.contains(&Binomial::parse("y1^4 - x1^8*x3", 3).unwrap()));
        assert!(fs.contains(&Binomial::parse("y2^4 - x2^12*x3^3", 3).unwrap()));
        assert!(completely_p_glued(&t, 3, 16).unwrap().is_none());
    }

    #[test]
    fn tree_for_mixed_example() {
        let var = example_3_5();
        let tree = completely_p_glued(&var.generator_set(), 2, 16)
            .unwrap()
            .unwrap();
        tree.validate().unwrap();
        let certs = tree.certificates();
        assert_eq!((certs[0].w.clone(), certs[0].k), (v(&[0, 3, 3]), 1));
        assert_eq!((certs[1].w.clone(), certs[1].k), (v(&[20, 0, 30]), 0));
        let (f1, f2) = stci_pair_example35(&var, 2, 3, 1).unwrap();
        let fs = tree.binomials();
        assert!(fs.contains(&f1) && fs.contains(&f2));
    }

    #[test]
    fn free_leaf() {
        let tree = completely_p_glued(&set(&[&[1, 0], &[0, 1]]), 2, 16)
            .unwrap()
            .unwrap();
        assert!(matches!(tree.root, GluingNode::Free { .. }));
        assert!(tree.binomials().is_empty());
        tree.validate().unwrap();
    }

    #[test]
    fn tampered_certificates_fail_validation() {
        let t = example_1_4().generator_set();
        let tree = completely_p_glued(&t, 2, 16).unwrap().unwrap();
        let mut bad = tree.clone();
        if let GluingNode::Glued { certificate, .. } = &mut bad.root {
            certificate.k = 1;
        }
        assert!(bad.validate().is_err());
        let mut bad = tree.clone();
        if let GluingNode::Glued { certificate, .. } = &mut bad.root {
            certificate.w = v(&[0, 24, 6]);
            certificate.k = 1;
        }
        assert!(bad.validate().is_err());
        let mut bad = tree;
        bad.prime = 3;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn split_mask_order() {
        let masks = split_masks(3, 1);
        assert_eq!(
            masks,
            vec![
                vec![false, false, true],
                vec![false, true, false],
                vec![true, false, false]
            ]
        );
        // 4 choose 2 = 6 ordered, 3 unordered
        assert_eq!(split_masks(4, 2).len(), 3);
    }

    #[test]
    fn prime_power_pairs() {
        let (f1, f2) = stci_pair_prime_power(&example_1_4(), None, None).unwrap();
        assert_eq!(f1, Binomial::parse("y1^4 - x1^8*x3", 3).unwrap());
        assert_eq!(f2, Binomial::parse("y2^4 - x2^12*x3^3", 3).unwrap());
        let d1 = Variety::uniform(1, vec![2, 0], vec![1, 3]).unwrap();
        let (f1, f2) = stci_pair_prime_power(&d1, None, None).unwrap();
        assert_eq!(f1, Binomial::parse("y1 - x1^2", 2).unwrap());
        assert_eq!(f2, Binomial::parse("y2 - x1*x2^3", 2).unwrap());
        // h = 3 multiplies the a-exponents by 2
        let (f1, _) = stci_pair_prime_power(&example_1_4(), Some(3), None).unwrap();
        assert_eq!(f1, Binomial::parse("y1^8 - x1^16*x3^2", 3).unwrap());
        assert!(matches!(
            stci_pair_prime_power(&example_1_4(), Some(1), None),
            Err(GluingError::NonIntegralExponent {
                name: "a",
                index: 3,
                ..
            })
        ));
        let d6 = Variety::uniform(6, vec![6, 0, 1], vec![0, 6, 5]).unwrap();
        assert_eq!(
            stci_pair_prime_power(&d6, None, None),
            Err(GluingError::NotPrimePower(6))
        );
    }

    #[test]
    fn mixed_pair() {
        let (f1, f2) = stci_pair_example35(&example_3_5(), 2, 3, 1).unwrap();
        assert_eq!(f1, Binomial::parse("y1^10 - x1^4*x3^5", 3).unwrap());
        assert_eq!(f2, Binomial::parse("y2^6 - x2^2*x3", 3).unwrap());
        // the two relations behind the pair
        let t = example_3_5().generator_set();
        assert!(relation_holds(&t, &v(&[4, 0, 5, 0, 0]), &v(&[20, 0, 30])));
        assert!(relation_holds(&t, &v(&[0, 0, 0, 10, 0]), &v(&[20, 0, 30])));
        assert!(relation_holds(&t, &v(&[0, 2, 1, 0, 0]), &v(&[0, 6, 6])));
        assert!(relation_holds(&t, &v(&[0, 0, 0, 0, 6]), &v(&[0, 6, 6])));
        assert!(matches!(
            stci_pair_example35(&example_3_5(), 3, 2, 1),
            Err(GluingError::PatternMismatch(_))
        ));
        assert_eq!(
            stci_pair_example35(&example_1_4(), 2, 3, 1),
            Err(GluingError::WrongShape(Shape::Mixed3))
        );
    }

    #[test]
    fn tree_json_round_trip() {
        let tree = completely_p_glued(&example_1_4().generator_set(), 2, 16)
            .unwrap()
            .unwrap();
        let s = serde_json::to_string(&tree).unwrap();
        for key in [
            "\"w\"",
            "\"k\"",
            "\"coeffs1\"",
            "\"coeffs2\"",
            "\"left\"",
            "\"right\"",
        ] {
            assert!(s.contains(key), "{key} missing from {s}");
        }
        let back: GluingTree = serde_json::from_str(&s).unwrap();
        assert_eq!(back, tree);
        assert_eq!(prime_power(2, 0), BigInt::one());
    }
}
