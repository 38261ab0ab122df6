//! Varieties, their generator sets, and binomials in the defining ideal.
//!
//! A [`Variety`] is the exponent data of a parametrization
//! `x_i = u_i^{d_i}`, `y_1 = ∏ u_i^{a_i}`, `y_2 = ∏ u_i^{b_i}`. Two shapes are
//! supported: [`Shape::Uniform`] (all `d_i` equal) and [`Shape::Mixed3`]
//! (three coordinates, `a_2 = b_1 = 0`, independent degrees).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{IntVec, SemigroupSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("a variety needs at least one coordinate")]
    NoCoordinates,
    #[error("a has {a} entries but b has {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("degree d{index} must be positive")]
    ZeroDegree { index: usize },
    #[error("a{index} and b{index} are both zero (coordinate {index} must appear in y1 or y2)")]
    BothZero { index: usize },
    #[error("{name} is the zero vector (the generator set must not contain 0)")]
    ZeroExponentVector { name: &'static str },
    #[error("mixed3 shape violated: {0}")]
    Mixed3Pattern(String),
    #[error("mixed3 normalization violated: {what} = {value}, expected 1")]
    Mixed3Gcd { what: &'static str, value: u64 },
    #[error("binomial has exponent vectors of length {got}, expected {expected}")]
    BinomialLength { expected: usize, got: usize },
    #[error("binomial has identical monomials")]
    EqualMonomials,
    #[error("malformed binomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Uniform,
    Mixed3,
}

/// Exponent data of a codimension-2 simplicial toric variety in `K^{n+2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "VarietyJson", try_from = "VarietyJson")]
pub struct Variety {
    shape: Shape,
    degrees: Vec<u64>,
    a: Vec<u64>,
    b: Vec<u64>,
}

/// Wire form of a [`Variety`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VarietyJson {
    Uniform {
        d: u64,
        a: Vec<u64>,
        b: Vec<u64>,
    },
    Mixed3 {
        d: [u64; 3],
        a: [u64; 3],
        b: [u64; 3],
    },
}

impl From<Variety> for VarietyJson {
    fn from(v: Variety) -> Self {
        match v.shape {
            Shape::Uniform => VarietyJson::Uniform {
                d: v.degrees[0],
                a: v.a,
                b: v.b,
            },
            Shape::Mixed3 => VarietyJson::Mixed3 {
                d: [v.degrees[0], v.degrees[1], v.degrees[2]],
                a: [v.a[0], v.a[1], v.a[2]],
                b: [v.b[0], v.b[1], v.b[2]],
            },
        }
    }
}

impl TryFrom<VarietyJson> for Variety {
    type Error = ModelError;
    fn try_from(j: VarietyJson) -> Result<Self, ModelError> {
        match j {
            VarietyJson::Uniform { d, a, b } => Variety::uniform(d, a, b),
            VarietyJson::Mixed3 { d, a, b } => Variety::mixed3(d, a, b),
        }
    }
}

fn gcd_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, |g, x| g.gcd(&x))
}

impl Variety {
    pub fn uniform(d: u64, a: Vec<u64>, b: Vec<u64>) -> Result<Self, ModelError> {
        let n = a.len();
        let v = Variety {
            shape: Shape::Uniform,
            degrees: vec![d; n],
            a,
            b,
        };
        v.check_common()?;
        Ok(v)
    }

    /// The three-coordinate shape with independent degrees. Requires
    /// `a_2 = b_1 = 0` and `gcd(d1,a1) = gcd(d2,b2) = gcd(d3,a3,b3) = 1`.
    pub fn mixed3(d: [u64; 3], a: [u64; 3], b: [u64; 3]) -> Result<Self, ModelError> {
        if a[1] != 0 {
            return Err(ModelError::Mixed3Pattern(format!(
                "a2 must be 0, got {}",
                a[1]
            )));
        }
        if b[0] != 0 {
            return Err(ModelError::Mixed3Pattern(format!(
                "b1 must be 0, got {}",
                b[0]
            )));
        }
        let v = Variety {
            shape: Shape::Mixed3,
            degrees: d.to_vec(),
            a: a.to_vec(),
            b: b.to_vec(),
        };
        v.check_common()?;
        for (what, value) in [
            ("gcd(d1, a1)", d[0].gcd(&a[0])),
            ("gcd(d2, b2)", d[1].gcd(&b[1])),
            ("gcd(d3, a3, b3)", gcd_all([d[2], a[2], b[2]])),
        ] {
            if value != 1 {
                return Err(ModelError::Mixed3Gcd { what, value });
            }
        }
        Ok(v)
    }

    fn check_common(&self) -> Result<(), ModelError> {
        if self.a.is_empty() {
            return Err(ModelError::NoCoordinates);
        }
        if self.a.len() != self.b.len() {
            return Err(ModelError::LengthMismatch {
                a: self.a.len(),
                b: self.b.len(),
            });
        }
        if let Some(i) = self.degrees.iter().position(|&d| d == 0) {
            return Err(ModelError::ZeroDegree { index: i + 1 });
        }
        if let Some(i) = (0..self.n()).find(|&i| self.a[i] == 0 && self.b[i] == 0) {
            return Err(ModelError::BothZero { index: i + 1 });
        }
        if self.a.iter().all(|&x| x == 0) {
            return Err(ModelError::ZeroExponentVector { name: "a" });
        }
        if self.b.iter().all(|&x| x == 0) {
            return Err(ModelError::ZeroExponentVector { name: "b" });
        }
        Ok(())
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Number of parameters (and of x-variables).
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    /// The common degree of a uniform variety.
    pub fn uniform_degree(&self) -> Option<u64> {
        match self.shape {
            Shape::Uniform => Some(self.degrees[0]),
            Shape::Mixed3 => None,
        }
    }

    /// Uniform view of a mixed variety whose three degrees coincide.
    pub fn as_uniform(&self) -> Option<Variety> {
        match self.shape {
            Shape::Uniform => Some(self.clone()),
            Shape::Mixed3 if self.degrees.iter().all(|&d| d == self.degrees[0]) => Some(Variety {
                shape: Shape::Uniform,
                ..self.clone()
            }),
            Shape::Mixed3 => None,
        }
    }

    /// The same point set written with a common degree: coordinate `i` is
    /// rescaled by `L / d_i` with `L = lcm(d_i)`, then normalized. The
    /// semigroup of the result is a linear image of the original one, so
    /// both have the same ideal. Uniform varieties are just normalized.
    pub fn uniform_lift(&self) -> Variety {
        let l = self.degrees.iter().fold(1u64, |l, d| l.lcm(d));
        let scale = |v: &[u64]| -> Vec<u64> {
            v.iter()
                .zip(&self.degrees)
                .map(|(x, d)| x * (l / d))
                .collect()
        };
        Variety {
            shape: Shape::Uniform,
            degrees: vec![l; self.n()],
            a: scale(&self.a),
            b: scale(&self.b),
        }
        .normalize()
    }

    /// `d₃' = d₃ / gcd(d₃, a₃)` for the mixed shape.
    pub fn d3_prime(&self) -> Option<u64> {
        match self.shape {
            Shape::Mixed3 => Some(self.degrees[2] / self.degrees[2].gcd(&self.a[2])),
            Shape::Uniform => None,
        }
    }

    /// Divides `d` and all `a_i`, `b_i` by their common gcd. Mixed varieties
    /// are returned unchanged; their constructor already enforces the
    /// normalization that applies to them.
    pub fn normalize(&self) -> Variety {
        if self.shape != Shape::Uniform {
            return self.clone();
        }
        let g = gcd_all(
            std::iter::once(self.degrees[0])
                .chain(self.a.iter().copied())
                .chain(self.b.iter().copied()),
        );
        if g <= 1 {
            return self.clone();
        }
        Variety {
            shape: Shape::Uniform,
            degrees: self.degrees.iter().map(|d| d / g).collect(),
            a: self.a.iter().map(|x| x / g).collect(),
            b: self.b.iter().map(|x| x / g).collect(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.normalize() == *self
    }

    /// `T = {d_1 e_1, …, d_n e_n, a, b}` in that order. Position `i` in `T`
    /// corresponds to variable `i` in `x_1, …, x_n, y_1, y_2`.
    pub fn generator_set(&self) -> SemigroupSet {
        let n = self.n();
        let mut vectors: Vec<IntVec> = (0..n)
            .map(|i| {
                let mut v = vec![0u64; n];
                v[i] = self.degrees[i];
                IntVec::from_u64s(&v)
            })
            .collect();
        vectors.push(IntVec::from_u64s(&self.a));
        vectors.push(IntVec::from_u64s(&self.b));
        SemigroupSet::new(n, vectors).expect("variety invariants give nonzero nonnegative vectors")
    }

    /// Names of the `n + 2` ambient variables.
    pub fn variable_names(&self) -> Vec<String> {
        variable_names(self.n())
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self.shape {
            Shape::Uniform => write!(
                f,
                "uniform d={} a=({}) b=({})",
                self.degrees[0],
                join(&self.a),
                join(&self.b)
            ),
            Shape::Mixed3 => write!(
                f,
                "mixed3 d=({}) a=({}) b=({})",
                join(&self.degrees),
                join(&self.a),
                join(&self.b)
            ),
        }
    }
}

pub fn variable_names(n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("x{i}"))
        .chain(["y1".to_string(), "y2".to_string()])
        .collect()
}

/// A binomial `x^plus − x^minus` over `x_1, …, x_n, y_1, y_2`.
///
/// Stored with a canonical sign: the side with the larger total `y`-degree is
/// `plus`; ties are broken by comparing the `(y_1, y_2)` exponents and then
/// the whole exponent vectors. Two binomials are equal up to sign exactly when
/// they compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(try_from = "BinomialJson")]
pub struct Binomial {
    plus: Vec<u64>,
    minus: Vec<u64>,
}

#[derive(Deserialize)]
struct BinomialJson {
    plus: Vec<u64>,
    minus: Vec<u64>,
}

impl TryFrom<BinomialJson> for Binomial {
    type Error = ModelError;
    fn try_from(j: BinomialJson) -> Result<Self, ModelError> {
        Binomial::new(j.plus, j.minus)
    }
}

fn y_key(e: &[u64]) -> (u64, u64, u64) {
    let k = e.len();
    (e[k - 2] + e[k - 1], e[k - 2], e[k - 1])
}

impl Binomial {
    pub fn new(plus: Vec<u64>, minus: Vec<u64>) -> Result<Self, ModelError> {
        if plus.len() != minus.len() || plus.len() < 3 {
            return Err(ModelError::BinomialLength {
                expected: plus.len().max(3),
                got: minus.len(),
            });
        }
        if plus == minus {
            return Err(ModelError::EqualMonomials);
        }
        let swap = (y_key(&minus), &minus) > (y_key(&plus), &plus);
        Ok(if swap {
            Binomial {
                plus: minus,
                minus: plus,
            }
        } else {
            Binomial { plus, minus }
        })
    }

    /// Number of x-variables.
    pub fn n(&self) -> usize {
        self.plus.len() - 2
    }

    pub fn plus(&self) -> &[u64] {
        &self.plus
    }

    pub fn minus(&self) -> &[u64] {
        &self.minus
    }

    pub fn degree(&self) -> u64 {
        self.plus.iter().sum::<u64>().max(self.minus.iter().sum())
    }

    /// Parses forms like `y1^4 - x1^8*x3` or `x_1^6y_2 - x_2^3y_1^3` over
    /// `n` x-variables. Factors may be separated by `*`, spaces, or nothing.
    pub fn parse(input: &str, n: usize) -> Result<Self, ModelError> {
        let err = |reason: &str| ModelError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = input.split('-').collect();
        if parts.len() != 2 {
            return Err(err("expected exactly one '-' separating two monomials"));
        }
        let plus = parse_monomial(parts[0], n).map_err(|r| err(&r))?;
        let minus = parse_monomial(parts[1], n).map_err(|r| err(&r))?;
        Binomial::new(plus, minus)
    }

    fn fmt_monomial(e: &[u64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = variable_names(e.len() - 2);
        let mut first = true;
        for (name, &k) in names.iter().zip(e) {
            if k == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if k == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{k}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

fn parse_monomial(s: &str, n: usize) -> Result<Vec<u64>, String> {
    let mut exps = vec![0u64; n + 2];
    let chars: Vec<char> = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*')
        .collect();
    if chars.is_empty() {
        return Err("empty monomial".into());
    }
    if chars == ['1'] {
        return Ok(exps);
    }
    let read_number = |i: &mut usize| -> Option<u64> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>().parse().ok()
    };
    let mut i = 0;
    while i < chars.len() {
        let letter = chars[i];
        i += 1;
        if i < chars.len() && chars[i] == '_' {
            i += 1;
        }
        let index = read_number(&mut i).ok_or("missing variable index")? as usize;
        let slot = match letter {
            'x' if (1..=n).contains(&index) => index - 1,
            'y' if index == 1 || index == 2 => n + index - 1,
            'x' | 'y' => return Err(format!("variable {letter}{index} out of range")),
            other => return Err(format!("unexpected character {other:?}")),
        };
        let mut k = 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            k = read_number(&mut i).ok_or("missing exponent")?;
        }
        exps[slot] += k;
    }
    Ok(exps)
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Binomial::fmt_monomial(&self.plus, f)?;
        write!(f, " - ")?;
        Binomial::fmt_monomial(&self.minus, f)
    }
}

impl Serialize for Binomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Binomial", 3)?;
        st.serialize_field("plus", &self.plus)?;
        st.serialize_field("minus", &self.minus)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// `Σ e_i · T_i` for an exponent vector over the variables of `v`.
pub fn semigroup_image(exponents: &[u64], t: &SemigroupSet) -> IntVec {
    t.combine(&IntVec::from_u64s(exponents))
}

/// Whether `f` is in the defining ideal of `v`: both monomials map to the same
/// element of the semigroup.
///
/// Panics if the binomial is over a different number of variables.
pub fn in_ideal(f: &Binomial, v: &Variety) -> bool {
    assert_eq!(
        f.n(),
        v.n(),
        "binomial and variety disagree on the number of variables"
    );
    let t = v.generator_set();
    semigroup_image(&f.plus, &t) == semigroup_image(&f.minus, &t)
}

/// Every binomial of the ideal whose two monomials have total degree at most
/// `degree_bound` and disjoint supports, deduplicated up to sign, sorted by
/// degree then exponents of `plus`, then of `minus`.
pub fn enumerate_ideal_binomials(v: &Variety, degree_bound: u64) -> Vec<Binomial> {
    let t = v.generator_set();
    let vars = v.n() + 2;
    let mut by_image: HashMap<IntVec, Vec<Vec<u64>>> = HashMap::new();
    let mut current = vec![0u64; vars];
    fn walk(
        pos: usize,
        left: u64,
        current: &mut Vec<u64>,
        t: &SemigroupSet,
        by_image: &mut HashMap<IntVec, Vec<Vec<u64>>>,
    ) {
        if pos == current.len() {
            if current.iter().any(|&e| e > 0) {
                by_image
                    .entry(semigroup_image(current, t))
                    .or_default()
                    .push(current.clone());
            }
            return;
        }
        for e in 0..=left {
            current[pos] = e;
            walk(pos + 1, left - e, current, t, by_image);
        }
        current[pos] = 0;
    }
    walk(0, degree_bound, &mut current, &t, &mut by_image);

    let mut found = BTreeSet::new();
    for monomials in by_image.values() {
        for (i, m1) in monomials.iter().enumerate() {
            for m2 in &monomials[i + 1..] {
                let disjoint = m1.iter().zip(m2).all(|(&x, &y)| x == 0 || y == 0);
                if disjoint {
                    found
                        .insert(Binomial::new(m1.clone(), m2.clone()).expect("distinct monomials"));
                }
            }
        }
    }
    let mut out: Vec<Binomial> = found.into_iter().collect();
    let total = |e: &[u64]| e.iter().sum::<u64>();
    out.sort_by(|f, g| {
        (total(&f.plus), &f.plus, total(&f.minus), &f.minus).cmp(&(
            total(&g.plus),
            &g.plus,
            total(&g.minus),
            &g.minus,
        ))
    });
    out
}

/// Binomial from a relation `Σ c1·T[idx1] = Σ c2·T[idx2]` between disjoint
/// sub-lists of a generator set of size `len`.
pub fn binomial_from_relation(
    len: usize,
    idx1: &[usize],
    coeffs1: &IntVec,
    idx2: &[usize],
    coeffs2: &IntVec,
) -> Option<Binomial> {
    let to_u64 = |x: &BigInt| u64::try_from(x).ok();
    let mut plus = vec![0u64; len];
    let mut minus = vec![0u64; len];
    for (&i, c) in idx1.iter().zip(coeffs1.iter()) {
        plus[i] += to_u64(c)?;
    }
    for (&i, c) in idx2.iter().zip(coeffs2.iter()) {
        minus[i] += to_u64(c)?;
    }
    Binomial::new(plus, minus).ok()
}
