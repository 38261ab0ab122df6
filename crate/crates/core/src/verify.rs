//! Brute-force checks over small finite fields.
//!
//! Field elements of `GF(p^m)` are encoded as integers `Σ c_i p^i` where
//! `Σ c_i α^i` is the element and `α` is a root of the field's modulus.
//! Points are tuples of encoded coordinates in the order
//! `x_1, …, x_n, y_1, y_2`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{is_prime, prime_divisors};
use crate::model::{in_ideal, Binomial, Variety};

/// Largest field order accepted.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;
/// Largest number of parameter tuples or ambient points scanned.
pub const MAX_SCAN: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("characteristic {0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the cap {max}")]
    FieldTooLarge { p: u64, m: u32, max: u64 },
    #[error("scan of {what} needs {size} steps, above the cap {max}")]
    ScanTooLarge {
        what: &'static str,
        size: String,
        max: u64,
    },
    #[error("binomial {poly} has {got} x-variables but the ambient space has {expected}")]
    AmbientMismatch {
        poly: String,
        expected: usize,
        got: usize,
    },
}

/// `GF(p^m)` with its canonical modulus: the lexicographically least monic
/// irreducible polynomial of degree `m`, coefficients listed from degree 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn new(p: u64, m: u32) -> Result<Self, VerifyError> {
        if !is_prime(p) {
            return Err(VerifyError::NotPrime(p));
        }
        if m == 0 {
            return Err(VerifyError::ZeroDegree);
        }
        if order(p, m).is_none_or(|q| q > MAX_FIELD_ORDER) {
            return Err(VerifyError::FieldTooLarge {
                p,
                m,
                max: MAX_FIELD_ORDER,
            });
        }
        Ok(FieldSpec {
            p,
            m,
            modulus: least_irreducible(p, m as usize),
        })
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn name(&self) -> String {
        format!("GF({})", self.order())
    }
}

fn order(p: u64, m: u32) -> Option<u64> {
    p.checked_pow(m)
}

// Polynomials over Z/p, coefficients from degree 0, no trailing zeros except
// for the zero polynomial which is empty.

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2)
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(f.to_vec());
    let g = trim(g.to_vec());
    let lead_inv = inv_mod(*g.last().expect("nonzero divisor"), p);
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let factor = r.last().unwrap() * lead_inv % p;
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - factor * gi % p) % p;
        }
        r = trim(r);
    }
    r
}

/// Monic polynomials of degree `deg` in increasing lexicographic order of
/// `(c_0, …, c_{deg−1})`.
fn monic_polys(p: u64, deg: usize) -> impl Iterator<Item = Vec<u64>> {
    let count = p.pow(deg as u32);
    (0..count).map(move |mut idx| {
        let mut c = vec![0; deg + 1];
        for i in (0..deg).rev() {
            c[i] = idx % p;
            idx /= p;
        }
        c[deg] = 1;
        c
    })
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    (1..=m / 2).all(|deg| monic_polys(p, deg).all(|g| !poly_rem(f, &g, p).is_empty()))
}

fn least_irreducible(p: u64, m: usize) -> Vec<u64> {
    monic_polys(p, m)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Arithmetic in `GF(p^m)` through log/exp tables.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.order() as u32;
        let mut field = Field {
            spec,
            q,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let cofactors: Vec<u64> = prime_divisors(q as u64 - 1)
            .into_iter()
            .map(|r| (q as u64 - 1) / r)
            .collect();
        let g = (2..q)
            .chain([1])
            .find(|&g| cofactors.iter().all(|&c| field.slow_pow(g, c) != 1))
            .expect("multiplicative groups of finite fields are cyclic");
        let mut exp = Vec::with_capacity(2 * q as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = field.slow_mul(x, g);
        }
        let head: Vec<u32> = exp.clone();
        exp.extend(head);
        field.exp = exp;
        field.log = log;
        field
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    fn digits(&self, mut x: u32) -> Vec<u64> {
        let p = self.spec.p as u32;
        (0..self.spec.m)
            .map(|_| {
                let d = x % p;
                x /= p;
                d as u64
            })
            .collect()
    }

    fn encode(&self, digits: &[u64]) -> u32 {
        digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.spec.p + d) as u32
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; da.len() + db.len()];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let mut r = poly_rem(&prod, &self.spec.modulus, p);
        r.resize(self.spec.m as usize, 0);
        self.encode(&r)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.spec.p == 2 {
            return a ^ b;
        }
        let p = self.spec.p;
        let sum: Vec<u64> = self
            .digits(a)
            .iter()
            .zip(self.digits(b))
            .map(|(x, y)| (x + y) % p)
            .collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.spec.p;
        let d: Vec<u64> = self.digits(a).iter().map(|x| (p - x) % p).collect();
        self.encode(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.q as u64 - 1;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.exp[((self.q - 1 - self.log[a as usize]) % (self.q - 1)) as usize])
    }

    /// Value at `x` of a polynomial with coefficients in the prime field.
    fn eval_prime_poly(&self, coeffs: &[u64], x: u32) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c as u32))
    }
}

/// Deduplicated points in canonical (lexicographic) order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub ambient_dim: usize,
    pub points: Vec<Vec<u32>>,
}

impl PointSet {
    fn from_set(ambient_dim: usize, set: BTreeSet<Vec<u32>>) -> Self {
        PointSet {
            ambient_dim,
            points: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &[u32]) -> bool {
        self.points
            .binary_search_by(|x| x.as_slice().cmp(point))
            .is_ok()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.iter().all(|x| other.contains(x))
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet {
            ambient_dim: self.ambient_dim,
            points: self
                .points
                .iter()
                .filter(|x| !other.contains(x))
                .cloned()
                .collect(),
        }
    }
}

fn check_scan(what: &'static str, base: u64, exp: usize) -> Result<(), VerifyError> {
    match base.checked_pow(exp as u32) {
        Some(size) if size <= MAX_SCAN => Ok(()),
        other => Err(VerifyError::ScanTooLarge {
            what,
            size: other.map_or_else(|| format!("{base}^{exp}"), |s| s.to_string()),
            max: MAX_SCAN,
        }),
    }
}

/// Points of the variety with all coordinates in `base`, obtained from
/// parameters in the extensions of degree `1..=ext_max` of `base`.
pub fn image_points(v: &Variety, base: &FieldSpec, ext_max: u32) -> Result<PointSet, VerifyError> {
    if ext_max == 0 {
        return Err(VerifyError::ZeroDegree);
    }
    let n = v.n();
    let base_field = Field::new(base.clone());
    let mut out = BTreeSet::new();
    for ext in 1..=ext_max {
        let spec = FieldSpec::new(base.p, base.m * ext)?;
        check_scan("parameter tuples", spec.order(), n)?;
        let big = Field::new(spec);
        // embed base via a root of its modulus, then invert on the subfield
        let theta = (0..big.order())
            .find(|&t| big.eval_prime_poly(&base.modulus, t) == 0)
            .expect("the base field embeds in its extensions");
        let mut back = vec![u32::MAX; big.order() as usize];
        for x in 0..base_field.order() {
            let digits = base_field.digits(x);
            back[big.eval_prime_poly(&digits, theta) as usize] = x;
        }
        let powers = |exps: &[u64]| -> Vec<Vec<u32>> {
            exps.iter()
                .map(|&e| (0..big.order()).map(|u| big.pow(u, e)).collect())
                .collect()
        };
        let (pd, pa, pb) = (powers(v.degrees()), powers(v.a()), powers(v.b()));
        let mut u = vec![0u32; n];
        let mut point = vec![0u32; n + 2];
        'tuples: loop {
            let mut ok = true;
            for i in 0..n {
                point[i] = back[pd[i][u[i] as usize] as usize];
                ok &= point[i] != u32::MAX;
            }
            if ok {
                let y1 = (0..n).fold(1, |acc, i| big.mul(acc, pa[i][u[i] as usize]));
                let y2 = (0..n).fold(1, |acc, i| big.mul(acc, pb[i][u[i] as usize]));
                point[n] = back[y1 as usize];
                point[n + 1] = back[y2 as usize];
                if point[n] != u32::MAX && point[n + 1] != u32::MAX {
                    out.insert(point.clone());
                }
            }
            for slot in u.iter_mut() {
                *slot += 1;
                if *slot < big.order() {
                    continue 'tuples;
                }
                *slot = 0;
            }
            break;
        }
    }
    Ok(PointSet::from_set(n + 2, out))
}

fn monomial(field: &Field, exps: &[u64], point: &[u32]) -> u32 {
    exps.iter()
        .zip(point)
        .fold(1, |acc, (&e, &x)| field.mul(acc, field.pow(x, e)))
}

/// All points of `base^ambient` where every binomial vanishes.
pub fn zero_set(
    polys: &[Binomial],
    base: &FieldSpec,
    ambient: usize,
) -> Result<PointSet, VerifyError> {
    for f in polys {
        if f.n() + 2 != ambient {
            return Err(VerifyError::AmbientMismatch {
                poly: f.to_string(),
                expected: ambient.saturating_sub(2),
                got: f.n(),
            });
        }
    }
    check_scan("ambient points", base.order(), ambient)?;
    let field = Field::new(base.clone());
    let q = field.order();
    let mut out = BTreeSet::new();
    let mut point = vec![0u32; ambient];
    'points: loop {
        if polys
            .iter()
            .all(|f| monomial(&field, f.plus(), &point) == monomial(&field, f.minus(), &point))
        {
            out.insert(point.clone());
        }
        for slot in point.iter_mut().rev() {
            *slot += 1;
            if *slot < q {
                continue 'points;
            }
            *slot = 0;
        }
        break;
    }
    Ok(PointSet::from_set(ambient, out))
}

/// Every binomial lies in the ideal of the variety, so the zero set of the
/// system contains the variety over every field.
pub fn containment_check(v: &Variety, polys: &[Binomial]) -> bool {
    polys.iter().all(|f| f.n() == v.n() && in_ideal(f, v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub field: String,
    pub modulus: Vec<u64>,
    pub ext_max: u32,
    pub containment: bool,
    pub image_count: usize,
    pub zero_count: usize,
    /// Zeros of the system not reached from parameters in extensions up to
    /// `ext_max`.
    pub excess: Vec<Vec<u32>>,
    /// Excess points remain although parameters from proper extensions were
    /// included. Evidence only: small fields cannot decide equality over the
    /// algebraic closure.
    pub possible_strict_containment: bool,
}

pub fn equality_experiment(
    v: &Variety,
    polys: &[Binomial],
    base: &FieldSpec,
    ext_max: u32,
) -> Result<ExperimentReport, VerifyError> {
    let zeros = zero_set(polys, base, v.n() + 2)?;
    let image = image_points(v, base, ext_max)?;
    let excess = zeros.difference(&image);
    Ok(ExperimentReport {
        field: base.name(),
        modulus: base.modulus.clone(),
        ext_max,
        containment: containment_check(v, polys),
        image_count: image.len(),
        zero_count: zeros.len(),
        possible_strict_containment: !excess.is_empty() && ext_max >= 2,
        excess: excess.points,
    })
}
