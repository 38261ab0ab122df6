//! The three-binomial almost set-theoretic complete intersection of a
//! uniform variety.
//!
//! `F1 = y1^{d'} − x^{a'}`, `F2 = y2^{d''} − x^{b'}` and `F3 = M − N·y2^e`,
//! where `e = g1/g2` is the ratio of the gcds of maximal minors of
//! `A1 = [d·I | a]` and `A2 = [d·I | a | b]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{gcd_max_minors, IntMatrix};
use crate::model::{in_ideal, Binomial, Shape, Variety};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("construction requires a {0:?} variety")]
    WrongShape(Shape),
    #[error("variety is not normalized (gcd of d, a and b exceeds 1); normalize it first")]
    NotNormalized,
    #[error("g2 = {g2} does not divide g1 = {g1}")]
    NonIntegralRatio { g1: BigInt, g2: BigInt },
    #[error("g1 = {0} does not fit in 64 bits")]
    Overflow(BigInt),
    #[error("construction bound exhausted: no shift |delta| <= {0} works (raise the bound)")]
    BoundExhausted(u64),
    #[error("constructed binomial {0} is not in the ideal")]
    NotInIdeal(String),
}

/// `A1` (`n × (n+1)`, columns `d·e_i` then `a`) and `A2` (`A1` plus column `b`).
pub fn build_a_matrices(v: &Variety) -> Result<(IntMatrix, IntMatrix), ConstructError> {
    let d = v
        .uniform_degree()
        .ok_or(ConstructError::WrongShape(Shape::Uniform))?;
    let n = v.n();
    let row = |i: usize, with_b: bool| {
        let mut r: Vec<BigInt> = (0..n)
            .map(|j| {
                if i == j {
                    BigInt::from(d)
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        r.push(v.a()[i].into());
        if with_b {
            r.push(v.b()[i].into());
        }
        r
    };
    let a1 = IntMatrix::new(n, n + 1, (0..n).flat_map(|i| row(i, false)).collect())
        .expect("shape is consistent");
    let a2 = IntMatrix::new(n, n + 2, (0..n).flat_map(|i| row(i, true)).collect())
        .expect("shape is consistent");
    Ok((a1, a2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleResult {
    pub f1: Binomial,
    pub f2: Binomial,
    pub f3: Binomial,
    pub dprime: u64,
    pub dsecond: u64,
    pub g1: u64,
    pub g2: u64,
    pub e: u64,
    pub delta: i64,
}

impl TripleResult {
    pub fn binomials(&self) -> [&Binomial; 3] {
        [&self.f1, &self.f2, &self.f3]
    }
}

/// The default shift bound `d·(n+2)`.
pub fn default_delta_bound(v: &Variety) -> u64 {
    v.degrees().iter().copied().max().unwrap_or(1) * (v.n() as u64 + 2)
}

/// Builds the triple. `F3` comes from the first shift `δ` in the order
/// `0, 1, −1, 2, −2, …` with `δ·a ≡ e·b (mod d)`; its monomials are the
/// positive and negative parts of `(δ·a − e·b)/d`, with `y1^|δ|` on the side
/// given by the sign of `δ`.
pub fn almost_sci_triple(v: &Variety, delta_bound: u64) -> Result<TripleResult, ConstructError> {
    let d = v
        .uniform_degree()
        .ok_or(ConstructError::WrongShape(Shape::Uniform))?;
    if !v.is_normalized() {
        return Err(ConstructError::NotNormalized);
    }
    let n = v.n();
    let (a, b) = (v.a(), v.b());
    let ga = a.iter().fold(d, |g, &x| g.gcd(&x));
    let gb = b.iter().fold(d, |g, &x| g.gcd(&x));

    let pure = |y: usize, y_exp: u64, x_exps: Vec<u64>| {
        let mut plus = vec![0; n + 2];
        plus[n + y] = y_exp;
        let mut minus = x_exps;
        minus.extend([0, 0]);
        Binomial::new(plus, minus).expect("y side is nonzero")
    };
    let f1 = pure(0, d / ga, a.iter().map(|x| x / ga).collect());
    let f2 = pure(1, d / gb, b.iter().map(|x| x / gb).collect());

    let (a1, a2) = build_a_matrices(v)?;
    let (g1, g2) = (gcd_max_minors(&a1), gcd_max_minors(&a2));
    let (e, rem) = g1.div_rem(&g2);
    if g2.is_zero() || !rem.is_zero() {
        return Err(ConstructError::NonIntegralRatio { g1, g2 });
    }
    let to_u64 = |x: &BigInt| {
        x.to_u64()
            .ok_or_else(|| ConstructError::Overflow(x.clone()))
    };
    let (g1, g2, e) = (to_u64(&g1)?, to_u64(&g2)?, to_u64(&e)?);

    let (di, ei) = (d as i128, e as i128);
    let delta = shifts(delta_bound)
        .find(|&delta| (0..n).all(|i| (delta as i128 * a[i] as i128 - ei * b[i] as i128) % di == 0))
        .ok_or(ConstructError::BoundExhausted(delta_bound))?;
    let mut m = vec![0u64; n + 2];
    let mut nn = vec![0u64; n + 2];
    for i in 0..n {
        let vi = (delta as i128 * a[i] as i128 - ei * b[i] as i128) / di;
        if vi < 0 {
            m[i] = (-vi) as u64;
        } else {
            nn[i] = vi as u64;
        }
    }
    if delta >= 0 {
        m[n] = delta as u64;
    } else {
        nn[n] = delta.unsigned_abs();
    }
    nn[n + 1] = e;
    let f3 = Binomial::new(m, nn).expect("N carries y2^e with e >= 1");

    for f in [&f1, &f2, &f3] {
        if !in_ideal(f, v) {
            return Err(ConstructError::NotInIdeal(f.to_string()));
        }
    }
    Ok(TripleResult {
        f1,
        f2,
        f3,
        dprime: d / ga,
        dsecond: d / gb,
        g1,
        g2,
        e,
        delta,
    })
}

fn shifts(bound: u64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound as i64).flat_map(|k| [k, -k]))
}
