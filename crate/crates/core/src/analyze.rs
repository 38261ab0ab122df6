//! Arithmetic conditions on the exponent data and the per-characteristic
//! arithmetical-rank verdict.
//!
//! Every verdict comes from a named rule. Rules either give an exact value on
//! a set of characteristics or leave the default interval `[2, 3]`; absence of
//! a gluing certificate never lowers or raises anything.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gluing::{completely_p_glued, stci_pair_prime_power, GluingError, GluingTree};
use crate::intlat::{as_prime_power, prime_divisors, solve_linear_congruences, Congruence};
use crate::model::{in_ideal, Binomial, Shape, Variety};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyzeError {
    #[error("condition check requires a {0:?} variety")]
    WrongShape(Shape),
    #[error("internal inconsistency at {class}: {first} gives ara = {first_value} but {second} gives ara = {second_value}")]
    InternalInconsistency {
        class: CharClass,
        first: String,
        first_value: u8,
        second: String,
        second_value: u8,
    },
    #[error("gluing evidence for p = {prime} does not validate: {reason}")]
    BadEvidence { prime: u64, reason: String },
    #[error(transparent)]
    Gluing(#[from] GluingError),
}

/// Which direction of proportionality witnessed condition (C).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proportion {
    /// `a_i ≡ μ·b_i (mod d)` for all `i`.
    AFromB,
    /// `b_i ≡ μ·a_i (mod d)` for all `i`.
    BFromA,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplier {
    pub mu: u64,
    pub direction: Proportion,
}

/// Conditions (A)–(D) of a uniform variety. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbcdReport {
    /// `(i, j)` with `a_i = 0 ≠ b_i` and `a_j ≠ 0 = b_j`.
    pub a: Option<(usize, usize)>,
    /// Indices violating `d | a_i ⇔ d | b_i` or the coprimality clause.
    pub b_failures: Vec<usize>,
    pub c: Option<Multiplier>,
    /// Some `i` with `gcd(d, a_i) = 1`.
    pub d: Option<usize>,
}

impl AbcdReport {
    pub fn b_holds(&self) -> bool {
        self.b_failures.is_empty()
    }

    pub fn all_hold(&self) -> bool {
        self.a.is_some() && self.b_holds() && self.c.is_some() && self.d.is_some()
    }
}

/// Conditions (I) and (II) of the mixed shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedReport {
    /// Least solution `(x, y)` mod `d2` of the congruence system, if any.
    pub i: Option<(u64, u64)>,
    pub ii: bool,
    pub d3_prime: u64,
}

impl MixedReport {
    pub fn all_hold(&self) -> bool {
        self.i.is_some() && self.ii
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Conditions (A)–(D), evaluated on the uniform form of the variety.
    pub abcd: Option<AbcdReport>,
    /// Conditions (I) and (II), for mixed varieties only.
    pub mixed: Option<MixedReport>,
}

pub fn check_conditions_abcd(v: &Variety) -> Result<AbcdReport, AnalyzeError> {
    let d = v
        .uniform_degree()
        .ok_or(AnalyzeError::WrongShape(Shape::Uniform))?;
    let (a, b) = (v.a(), v.b());
    let n = v.n();
    let cond_a = (0..n)
        .find(|&i| a[i] == 0 && b[i] != 0)
        .zip((0..n).find(|&j| a[j] != 0 && b[j] == 0))
        .map(|(i, j)| (i + 1, j + 1));
    let coprime_or_divisible = |x: u64| x.is_multiple_of(d) || x.gcd(&d) == 1;
    let b_failures = (0..n)
        .filter(|&i| {
            (a[i] % d == 0) != (b[i] % d == 0)
                || !coprime_or_divisible(a[i])
                || !coprime_or_divisible(b[i])
        })
        .map(|i| i + 1)
        .collect();
    let proportional = |x: &[u64], y: &[u64]| {
        (0..d).find(|&mu| {
            x.iter().zip(y).all(|(&xi, &yi)| {
                (xi as u128 + (d - mu) as u128 * yi as u128).is_multiple_of(d as u128)
            })
        })
    };
    let c = proportional(a, b)
        .map(|mu| Multiplier {
            mu,
            direction: Proportion::AFromB,
        })
        .or_else(|| {
            proportional(b, a).map(|mu| Multiplier {
                mu,
                direction: Proportion::BFromA,
            })
        });
    let cond_d = a.iter().position(|&x| x.gcd(&d) == 1).map(|i| i + 1);
    Ok(AbcdReport {
        a: cond_a,
        b_failures,
        c,
        d: cond_d,
    })
}

pub fn check_conditions_i_ii(v: &Variety) -> Result<MixedReport, AnalyzeError> {
    if v.shape() != Shape::Mixed3 {
        return Err(AnalyzeError::WrongShape(Shape::Mixed3));
    }
    let (d, a, b) = (v.degrees(), v.a(), v.b());
    let system = [
        Congruence::new(a[0], a[2], 0),
        Congruence::new(d[0], 0, 0),
        Congruence::new(0, d[2], 0),
        Congruence::new(0, b[2], -(b[1] as i64)),
    ];
    let i = solve_linear_congruences(&system, &BigInt::from(d[1]))
        .expect("d2 is positive")
        .map(|(x, y)| (x.to_u64().expect("below d2"), y.to_u64().expect("below d2")));
    let d3_prime = v.d3_prime().expect("mixed shape");
    Ok(MixedReport {
        i,
        ii: d3_prime.gcd(&d[0]) == 1,
        d3_prime,
    })
}

/// A class of fields by characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CharClass {
    Zero,
    Prime(u64),
    /// Every prime not listed separately in the report.
    OtherPrimes,
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharClass::Zero => write!(f, "char 0"),
            CharClass::Prime(p) => write!(f, "char {p}"),
            CharClass::OtherPrimes => write!(f, "other primes"),
        }
    }
}

impl Serialize for CharClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CharClass::Zero => s.serialize_str("0"),
            CharClass::Prime(p) => s.serialize_str(&p.to_string()),
            CharClass::OtherPrimes => s.serialize_str("other"),
        }
    }
}

impl<'de> Deserialize<'de> for CharClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "0" => Ok(CharClass::Zero),
            "other" => Ok(CharClass::OtherPrimes),
            _ => s
                .parse::<u64>()
                .ok()
                .filter(|&p| crate::intlat::is_prime(p))
                .map(CharClass::Prime)
                .ok_or_else(|| serde::de::Error::custom(format!("bad characteristic {s:?}"))),
        }
    }
}

/// The rules the classifier knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `2 ≤ ara ≤ 3`: codimension bound and the three-binomial construction.
    Baseline,
    /// `d = 1`: complete intersection on two binomials.
    CompleteIntersection,
    /// `supp a ⊆ supp b` (or the reverse): completely p-glued for every p.
    SupportInclusion,
    /// `d = p^r`: completely p-glued.
    PrimePowerDegree,
    /// A validated complete p-gluing certificate.
    GluingCertificate,
    /// (A)–(D) and `p | d`: not a set-theoretic complete intersection off `p`.
    AbcdAwayFromP,
    /// (A)–(D) and `d = p^r`: set-theoretic complete intersection exactly at `p`.
    AbcdPrimePower,
    /// (A)–(D) and two distinct prime divisors of `d`.
    AbcdTwoPrimes,
    /// (I), (II), `p | d3'`, `p ∤ b3`: not a set-theoretic complete intersection off `p`.
    MixedAwayFromP,
    /// The previous rule for two distinct primes.
    MixedTwoPrimes,
}

impl Rule {
    /// Literature reference printed next to each applied rule.
    pub fn citation(self) -> &'static str {
        match self {
            Rule::Baseline => "Theorem 2.5",
            Rule::CompleteIntersection => "Proposition 1.3 (r = 0)",
            Rule::SupportInclusion => "Proposition 1.2",
            Rule::PrimePowerDegree => "Proposition 1.3",
            Rule::GluingCertificate => "Theorem 1.1",
            Rule::AbcdAwayFromP => "Corollary 2.6(i)",
            Rule::AbcdPrimePower => "Corollary 2.6(ii)",
            Rule::AbcdTwoPrimes => "Corollary 2.7",
            Rule::MixedAwayFromP => "Theorem 3.4",
            Rule::MixedTwoPrimes => "Theorem 3.4",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedRule {
    pub rule: Rule,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AraEntry {
    pub characteristic: CharClass,
    pub lower: u8,
    pub upper: u8,
    pub exact: bool,
    pub rules: Vec<AppliedRule>,
    /// Two binomials cutting out the variety, when `ara = 2` is backed by an
    /// explicit construction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<Binomial>,
}

impl AraEntry {
    pub fn value(&self) -> Option<u8> {
        self.exact.then_some(self.lower)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AraReport {
    pub entries: Vec<AraEntry>,
    pub summary: String,
}

impl AraReport {
    /// The entry governing fields of characteristic `c` (0 or a prime).
    pub fn entry_for(&self, c: u64) -> &AraEntry {
        let class = if c == 0 {
            CharClass::Zero
        } else {
            CharClass::Prime(c)
        };
        self.entries
            .iter()
            .find(|e| e.characteristic == class)
            .or_else(|| {
                self.entries
                    .iter()
                    .find(|e| e.characteristic == CharClass::OtherPrimes)
            })
            .expect("reports always carry a bucket for unnamed primes")
    }
}

/// Result of a complete p-gluing search at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingEvidence {
    pub prime: u64,
    pub k_max: i64,
    pub tree: Option<GluingTree>,
}

impl GluingEvidence {
    pub fn search(v: &Variety, prime: u64, k_max: i64) -> Result<Self, AnalyzeError> {
        Ok(GluingEvidence {
            prime,
            k_max,
            tree: completely_p_glued(&v.generator_set(), prime, k_max)?,
        })
    }

    pub fn describe(&self) -> String {
        match &self.tree {
            Some(_) => format!("completely {}-glued (certificate validated)", self.prime),
            None => format!(
                "no certificate found at p = {} (k <= {})",
                self.prime, self.k_max
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Scope {
    All,
    AllPositive,
    Only(u64),
    AllExcept(u64),
}

impl Scope {
    fn covers(self, c: CharClass) -> bool {
        match (self, c) {
            (Scope::All, _) => true,
            (Scope::AllPositive, c) => c != CharClass::Zero,
            (Scope::Only(p), c) => c == CharClass::Prime(p),
            (Scope::AllExcept(p), c) => c != CharClass::Prime(p),
        }
    }
}

struct Claim {
    scope: Scope,
    value: u8,
    rule: Rule,
    prime: Option<u64>,
    witness: Vec<Binomial>,
}

impl Claim {
    fn new(scope: Scope, value: u8, rule: Rule, prime: Option<u64>) -> Self {
        Claim {
            scope,
            value,
            rule,
            prime,
            witness: Vec::new(),
        }
    }

    fn with_witness(mut self, witness: Vec<Binomial>) -> Self {
        self.witness = witness;
        self
    }
}

fn support_inclusion(v: &Variety) -> bool {
    let (a, b) = (v.a(), v.b());
    let sub = |x: &[u64], y: &[u64]| x.iter().zip(y).all(|(&xi, &yi)| xi == 0 || yi != 0);
    sub(a, b) || sub(b, a)
}

/// Combines the conditions, the gluing evidence and the known rules into a
/// per-characteristic report. Evidence must be for this variety and is
/// re-validated.
pub fn classify(v: &Variety, evidence: &[GluingEvidence]) -> Result<AraReport, AnalyzeError> {
    let u = v.uniform_lift();
    let d = u.uniform_degree().expect("lift is uniform");
    let mut claims: Vec<Claim> = Vec::new();

    if d == 1 {
        let (f1, f2) = stci_pair_prime_power(&u, None, None)?;
        claims.push(
            Claim::new(Scope::All, 2, Rule::CompleteIntersection, None).with_witness(vec![f1, f2]),
        );
    }
    if support_inclusion(&u) {
        claims.push(Claim::new(
            Scope::AllPositive,
            2,
            Rule::SupportInclusion,
            None,
        ));
    }
    if let Some((p, _)) = as_prime_power(d) {
        let (f1, f2) = stci_pair_prime_power(&u, None, None)?;
        claims.push(
            Claim::new(Scope::Only(p), 2, Rule::PrimePowerDegree, Some(p))
                .with_witness(vec![f1, f2]),
        );
    }
    for ev in evidence {
        let Some(tree) = &ev.tree else { continue };
        let bad = |reason: String| AnalyzeError::BadEvidence {
            prime: ev.prime,
            reason,
        };
        tree.validate().map_err(|e| bad(e.to_string()))?;
        if tree.prime != ev.prime || tree.root_len() != v.n() + 2 {
            return Err(bad("tree does not match the evidence record".into()));
        }
        let witness = tree.binomials();
        if let Some(f) = witness.iter().find(|f| f.n() != v.n() || !in_ideal(f, v)) {
            return Err(bad(format!("{f} is not in the ideal")));
        }
        claims.push(
            Claim::new(
                Scope::Only(ev.prime),
                2,
                Rule::GluingCertificate,
                Some(ev.prime),
            )
            .with_witness(witness),
        );
    }

    let abcd = check_conditions_abcd(&u)?;
    if abcd.all_hold() {
        let primes = prime_divisors(d);
        for &p in &primes {
            claims.push(Claim::new(
                Scope::AllExcept(p),
                3,
                Rule::AbcdAwayFromP,
                Some(p),
            ));
        }
        if let Some((p, r)) = as_prime_power(d) {
            if r >= 1 {
                let (f1, f2) = stci_pair_prime_power(&u, None, None)?;
                claims.push(
                    Claim::new(Scope::Only(p), 2, Rule::AbcdPrimePower, Some(p))
                        .with_witness(vec![f1, f2]),
                );
            }
        }
        if primes.len() >= 2 {
            claims.push(Claim::new(Scope::All, 3, Rule::AbcdTwoPrimes, None));
        }
    }
    if v.shape() == Shape::Mixed3 {
        let mixed = check_conditions_i_ii(v)?;
        if mixed.all_hold() {
            let b3 = v.b()[2];
            let primes: Vec<u64> = prime_divisors(mixed.d3_prime)
                .into_iter()
                .filter(|p| !b3.is_multiple_of(*p))
                .collect();
            for &p in &primes {
                claims.push(Claim::new(
                    Scope::AllExcept(p),
                    3,
                    Rule::MixedAwayFromP,
                    Some(p),
                ));
            }
            if primes.len() >= 2 {
                claims.push(Claim::new(Scope::All, 3, Rule::MixedTwoPrimes, None));
            }
        }
    }

    let named: BTreeSet<u64> = claims
        .iter()
        .filter_map(|c| match c.scope {
            Scope::Only(p) | Scope::AllExcept(p) => Some(p),
            _ => None,
        })
        .chain(evidence.iter().map(|e| e.prime))
        .collect();
    let classes = std::iter::once(CharClass::Zero)
        .chain(named.iter().map(|&p| CharClass::Prime(p)))
        .chain(std::iter::once(CharClass::OtherPrimes));

    let mut entries = Vec::new();
    for class in classes {
        let mut entry = AraEntry {
            characteristic: class,
            lower: 2,
            upper: 3,
            exact: false,
            rules: vec![applied(Rule::Baseline, None)],
            witness: Vec::new(),
        };
        let mut decided: Option<(u8, Rule)> = None;
        for claim in claims.iter().filter(|c| c.scope.covers(class)) {
            if let Some((value, rule)) = decided {
                if value != claim.value {
                    return Err(AnalyzeError::InternalInconsistency {
                        class,
                        first: rule.citation().to_string(),
                        first_value: value,
                        second: claim.rule.citation().to_string(),
                        second_value: claim.value,
                    });
                }
            }
            decided.get_or_insert((claim.value, claim.rule));
            entry.rules.push(applied(claim.rule, claim.prime));
            if entry.witness.is_empty() {
                entry.witness = claim.witness.clone();
            }
        }
        if let Some((value, _)) = decided {
            entry.lower = value;
            entry.upper = value;
            entry.exact = true;
        }
        entries.push(entry);
    }
    let summary = summarize(&entries);
    Ok(AraReport { entries, summary })
}

fn applied(rule: Rule, prime: Option<u64>) -> AppliedRule {
    AppliedRule {
        rule,
        citation: rule.citation().to_string(),
        prime,
    }
}

fn summarize(entries: &[AraEntry]) -> String {
    let values: Vec<Option<u8>> = entries.iter().map(AraEntry::value).collect();
    if values.iter().all(|&v| v == Some(3)) {
        return "ara V=3 over every field".into();
    }
    if values.iter().all(|&v| v == Some(2)) {
        return "ara V=2 over every field".into();
    }
    let twos: Vec<CharClass> = entries
        .iter()
        .filter(|e| e.value() == Some(2))
        .map(|e| e.characteristic)
        .collect();
    if let [CharClass::Prime(p)] = twos[..] {
        if values.iter().filter(|&&v| v == Some(3)).count() == entries.len() - 1 {
            return format!("ara=2 iff char K={p}");
        }
    }
    if entries
        .iter()
        .all(|e| e.characteristic == CharClass::Zero || e.value() == Some(2))
    {
        return "ara V=2 in every positive characteristic; char 0 undecided (2 <= ara V <= 3)"
            .into();
    }
    entries
        .iter()
        .map(|e| match e.value() {
            Some(v) => format!("{}: ara V={v}", e.characteristic),
            None => format!("{}: 2 <= ara V <= 3", e.characteristic),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Everything `analyze` reports for one variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub variety: Variety,
    pub conditions: ConditionReport,
    pub gluing: Vec<GluingEvidence>,
    pub report: AraReport,
}

/// Primes at which the gluing search runs: the prime divisors of the common
/// degree of the uniform form (for mixed varieties, of `lcm(d1, d2, d3)`).
pub fn candidate_primes(v: &Variety) -> Vec<u64> {
    prime_divisors(v.uniform_lift().uniform_degree().expect("lift is uniform"))
}

/// Normalizes, checks the conditions for the shape, searches for gluing
/// certificates at the candidate primes and classifies.
pub fn analyze(v: &Variety, k_max: i64) -> Result<Analysis, AnalyzeError> {
    let v = v.normalize();
    let conditions = ConditionReport {
        abcd: Some(check_conditions_abcd(&v.uniform_lift())?),
        mixed: match v.shape() {
            Shape::Mixed3 => Some(check_conditions_i_ii(&v)?),
            Shape::Uniform => None,
        },
    };
    let gluing = candidate_primes(&v)
        .into_iter()
        .map(|p| GluingEvidence::search(&v, p, k_max))
        .collect::<Result<Vec<_>, _>>()?;
    let report = classify(&v, &gluing)?;
    Ok(Analysis {
        variety: v,
        conditions,
        gluing,
        report,
    })
}
