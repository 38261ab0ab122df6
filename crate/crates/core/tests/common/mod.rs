//! Test-only oracles. Each one recomputes a library quantity by the most
//! direct method available, with no shared code paths.

#![allow(dead_code)]

use rand::Rng;
use toric_ara::model::Variety;

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for (j, &x) in m[0].iter().enumerate() {
        if x == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * x * cofactor_det(&minor);
    }
    total
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// All maximal minors (rows ≤ cols), by cofactor expansion.
pub fn all_max_minors(rows: &[Vec<i128>]) -> Vec<i128> {
    let r = rows.len();
    let c = rows[0].len();
    combinations(c, r)
        .into_iter()
        .map(|cols| {
            let sub: Vec<Vec<i128>> = rows
                .iter()
                .map(|row| cols.iter().map(|&j| row[j]).collect())
                .collect();
            cofactor_det(&sub)
        })
        .collect()
}

pub fn brute_gcd_max_minors(rows: &[Vec<i128>]) -> i128 {
    all_max_minors(rows).into_iter().fold(0, gcd)
}

/// `A1` and `A2` of a uniform variety, written out entry by entry.
pub fn a_matrices(d: u64, a: &[u64], b: &[u64]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = a.len();
    let a1: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row = vec![0i128; n + 1];
            row[i] = d as i128;
            row[n] = a[i] as i128;
            row
        })
        .collect();
    let a2 = a1
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.push(b[i] as i128);
            r
        })
        .collect();
    (a1, a2)
}

/// All nonnegative coefficient vectors `c` with `Σ c_i t_i = w`, by
/// exhaustive search. Generators must be nonzero and nonnegative.
pub fn brute_memberships(w: &[i64], t: &[Vec<i64>]) -> Vec<Vec<i64>> {
    fn rec(i: usize, rest: Vec<i64>, t: &[Vec<i64>], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == t.len() {
            if rest.iter().all(|&x| x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let mut c = 0;
        let mut rest = rest;
        loop {
            cur.push(c);
            rec(i + 1, rest.clone(), t, cur, out);
            cur.pop();
            for (r, x) in rest.iter_mut().zip(&t[i]) {
                *r -= x;
            }
            if rest.iter().any(|&x| x < 0) {
                break;
            }
            c += 1;
        }
    }
    if w.iter().any(|&x| x < 0) {
        return vec![];
    }
    let mut out = Vec::new();
    rec(0, w.to_vec(), t, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Integer combinations of `gens` with coefficients in `[-r, r]`.
pub fn small_span(gens: &[Vec<i64>], r: i64) -> Vec<Vec<i64>> {
    let dim = gens.first().map_or(0, |g| g.len());
    let mut out = vec![vec![0i64; dim]];
    for g in gens {
        let mut next = Vec::new();
        for v in &out {
            for c in -r..=r {
                next.push(v.iter().zip(g).map(|(x, y)| x + c * y).collect());
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

/// Random uniform variety with `n ≤ max_n`, `d ≤ max_d`, entries `≤ max_e`,
/// respecting the constructor's invariants.
pub fn random_uniform<R: Rng>(rng: &mut R, max_n: usize, max_d: u64, max_e: u64) -> Variety {
    loop {
        let n = rng.gen_range(1..=max_n);
        let d = rng.gen_range(1..=max_d);
        let a: Vec<u64> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    0
                } else {
                    rng.gen_range(0..=max_e)
                }
            })
            .collect();
        let b: Vec<u64> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    0
                } else {
                    rng.gen_range(0..=max_e)
                }
            })
            .collect();
        if let Ok(v) = Variety::uniform(d, a, b) {
            return v;
        }
    }
}

/// Independent re-check of a gluing relation: plain integer sums.
pub fn resum(t: &[Vec<i64>], coeffs: &[i64]) -> Vec<i128> {
    let dim = t[0].len();
    (0..dim)
        .map(|j| {
            t.iter()
                .zip(coeffs)
                .map(|(v, &c)| v[j] as i128 * c as i128)
                .sum()
        })
        .collect()
}
