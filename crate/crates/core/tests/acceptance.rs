//! Acceptance gate. Runs without the libtest harness so that one line per
//! criterion is always printed; exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::SeedableRng;
use toric_ara::analyze::{Analysis, GluingEvidence};
use toric_ara::cli::{self, build_pair, build_triple, ConstructOutput};
use toric_ara::construct::{almost_sci_triple, build_a_matrices, default_delta_bound};
use toric_ara::gluing::{
    completely_p_glued, stci_pair_example35, stci_pair_prime_power, DEFAULT_K_MAX,
};
use toric_ara::intlat::{as_prime_power, gcd_max_minors, IntVec};
use toric_ara::model::{enumerate_ideal_binomials, in_ideal, Binomial, Variety};
use toric_ara::verify::{containment_check, equality_experiment, FieldSpec};

const EXAMPLE: &str = r#"{"kind":"uniform","d":4,"a":[8,0,1],"b":[0,12,3]}"#;
const SIX: &str = r#"{"kind":"uniform","d":6,"a":[6,0,1],"b":[0,6,1]}"#;
const MIXED: &str = r#"{"kind":"mixed3","d":[5,3,6],"a":[2,0,3],"b":[0,1,1]}"#;
const MIXED_TWO_PRIMES: &str = r#"{"kind":"mixed3","d":[5,1,6],"a":[2,0,1],"b":[0,1,1]}"#;

const GENERATORS: [&str; 6] = [
    "y1^4 - x1^8*x3",
    "y2^4 - x2^12*x3^3",
    "y1*y2 - x1^2*x2^3*x3",
    "x1^4*y2^2 - x2^6*x3*y1^2",
    "x1^6*y2 - x2^3*y1^3",
    "x1^2*y2^3 - x2^9*x3^2*y1",
];

const RANDOM_VARIETIES: usize = 200;
const SEED: u64 = 0x7041_2a0c;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example() -> Variety {
    cli::load_variety(EXAMPLE).unwrap()
}

fn ints(v: &IntVec) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).unwrap()).collect()
}

fn analyze_json(input: &str) -> Result<Analysis, String> {
    let out = cli::run(["toric-ara", "analyze", "--json", input]).map_err(|e| e.message)?;
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn cites(a: &Analysis, c: u64, citation: &str) -> bool {
    a.report
        .entry_for(c)
        .rules
        .iter()
        .any(|r| r.citation.starts_with(citation))
}

fn criterion_1() -> Check {
    let v = example();
    let mut perturbed = 0;
    for s in GENERATORS {
        let f = Binomial::parse(s, 3).map_err(|e| e.to_string())?;
        ensure(in_ideal(&f, &v), || format!("{s} not in the ideal"))?;
        for side in 0..2 {
            for i in 0..5 {
                for step in [-1i64, 1] {
                    let (mut plus, mut minus) = (f.plus().to_vec(), f.minus().to_vec());
                    let target = if side == 0 { &mut plus } else { &mut minus };
                    let Some(x) = target[i].checked_add_signed(step) else {
                        continue;
                    };
                    target[i] = x;
                    let Ok(g) = Binomial::new(plus, minus) else {
                        continue;
                    };
                    ensure(!in_ideal(&g, &v), || {
                        format!("perturbation {g} of {s} is in the ideal")
                    })?;
                    perturbed += 1;
                }
            }
        }
    }
    Ok(format!(
        "6 generators in the ideal, {perturbed} single-exponent perturbations rejected"
    ))
}

fn criterion_2() -> Check {
    let out = cli::run(["toric-ara", "glue", "--prime", "2", "--json", EXAMPLE])
        .map_err(|e| e.message)?;
    let ev: GluingEvidence = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let tree = ev.tree.ok_or("no certificate at p = 2")?;
    tree.validate().map_err(|e| e.to_string())?;
    let certs = tree.certificates();
    ensure(certs.len() == 2, || {
        format!("{} certificates, expected 2", certs.len())
    })?;
    let (top, sub) = (certs[0], certs[1]);
    ensure(ints(&top.w) == [0, 12, 3] && top.k == 2, || {
        format!("top w = {:?}, k = {}", ints(&top.w), top.k)
    })?;
    ensure(ints(&sub.w) == [32, 0, 4] && sub.k == 0, || {
        format!("sub w = {:?}, k = {}", ints(&sub.w), sub.k)
    })?;

    // 4(0,12,3) = 12(0,4,0) + 3(0,0,4) and 4(8,0,1) = 8(4,0,0) + (0,0,4)
    let t1 = [vec![4, 0, 0], vec![0, 4, 0], vec![0, 0, 4], vec![8, 0, 1]];
    ensure(
        ints(&top.coeffs1) == [0, 12, 3, 0] && ints(&top.coeffs2) == [4],
        || {
            format!(
                "top coefficients {:?} | {:?}",
                ints(&top.coeffs1),
                ints(&top.coeffs2)
            )
        },
    )?;
    ensure(resum(&t1, &ints(&top.coeffs1)) == vec![0, 48, 12], || {
        "top relation does not resum".into()
    })?;
    ensure(
        ints(&sub.coeffs1) == [8, 0, 1] && ints(&sub.coeffs2) == [4],
        || {
            format!(
                "sub coefficients {:?} | {:?}",
                ints(&sub.coeffs1),
                ints(&sub.coeffs2)
            )
        },
    )?;
    ensure(resum(&t1[..3], &[8, 0, 1]) == vec![32, 0, 4], || {
        "sub relation does not resum".into()
    })?;
    Ok("top w = (0,12,3), k = 2; sub w = (32,0,4), k = 0; both relations re-validated".into())
}

fn criterion_3() -> Check {
    let v = example();
    let t = almost_sci_triple(&v, default_delta_bound(&v)).map_err(|e| e.to_string())?;
    ensure(t.dprime == 4 && t.dsecond == 4, || {
        format!("d' = {}, d'' = {}", t.dprime, t.dsecond)
    })?;
    let f1 = Binomial::parse("y1^4 - x1^8*x3", 3).unwrap();
    let f2 = Binomial::parse("y2^4 - x2^12*x3^3", 3).unwrap();
    ensure(t.f1 == f1 && t.f2 == f2, || {
        format!("pair {} , {}", t.f1, t.f2)
    })?;

    let (o1, o2) = a_matrices(4, &[8, 0, 1], &[0, 12, 3]);
    let (b1, b2) = (brute_gcd_max_minors(&o1), brute_gcd_max_minors(&o2));
    let (m1, m2) = build_a_matrices(&v).map_err(|e| e.to_string())?;
    ensure(
        gcd_max_minors(&m1) == BigInt::from(b1) && gcd_max_minors(&m2) == BigInt::from(b2),
        || "library gcd of minors disagrees with the cofactor oracle".into(),
    )?;
    ensure(t.g1 == 16 && t.g2 == 16 && b1 == 16 && b2 == 16, || {
        format!("g1 = {}, g2 = {}, oracle {b1}, {b2}", t.g1, t.g2)
    })?;
    ensure(t.e == 1, || format!("e = {}", t.e))?;
    let f3 = Binomial::parse("y1*y2 - x1^2*x2^3*x3", 3).unwrap();
    ensure(t.f3 == f3, || format!("F3 = {}", t.f3))?;
    Ok(format!(
        "d' = d'' = 4, g1 = g2 = 16 (oracle agrees), e = 1, F3 = {}",
        t.f3
    ))
}

fn criterion_4() -> Check {
    let a = analyze_json(EXAMPLE)?;
    ensure(a.report.entry_for(2).value() == Some(2), || {
        "first example: char 2 not exact 2".into()
    })?;
    ensure(
        cites(&a, 2, "Proposition 1.3") && cites(&a, 2, "Corollary 2.6"),
        || "first example: char 2 does not cite Proposition 1.3 and Corollary 2.6".into(),
    )?;
    for c in [0, 3, 5, 7, 11] {
        ensure(a.report.entry_for(c).value() == Some(3), || {
            format!("first example: char {c} not exact 3")
        })?;
        ensure(cites(&a, c, "Corollary 2.6"), || {
            format!("first example: char {c} does not cite Corollary 2.6")
        })?;
    }
    ensure(a.report.summary == "ara=2 iff char K=2", || {
        a.report.summary.clone()
    })?;

    let b = analyze_json(SIX)?;
    for e in &b.report.entries {
        ensure(e.value() == Some(3), || {
            format!("d = 6: {:?} not exact 3", e.characteristic)
        })?;
        ensure(
            e.rules.iter().any(|r| r.citation == "Corollary 2.7"),
            || "d = 6: no Corollary 2.7".into(),
        )?;
    }
    ensure(
        b.conditions.abcd.as_ref().is_some_and(|r| r.all_hold()),
        || "d = 6 fixture does not satisfy (A)-(D)".into(),
    )?;

    let m = analyze_json(MIXED)?;
    for c in [0, 3, 5, 7, 11] {
        ensure(m.report.entry_for(c).value() == Some(3), || {
            format!("mixed: char {c} not exact 3")
        })?;
        ensure(cites(&m, c, "Theorem 3.4"), || {
            format!("mixed: char {c} does not cite Theorem 3.4")
        })?;
    }
    let at2 = m.report.entry_for(2);
    ensure(
        at2.value() == Some(2) && cites(&m, 2, "Theorem 1.1"),
        || "mixed: char 2 not exact 2 from a certificate".into(),
    )?;
    let v = cli::load_variety(MIXED).map_err(|e| e.message)?;
    let (f1, f2) = stci_pair_example35(&v, 2, 3, 1).map_err(|e| e.to_string())?;
    ensure(
        at2.witness.contains(&f1) && at2.witness.contains(&f2),
        || {
            format!(
                "mixed: witnesses {:?} are not the pair {f1}, {f2}",
                at2.witness
            )
        },
    )?;
    let tree = m
        .gluing
        .iter()
        .find(|g| g.prime == 2)
        .and_then(|g| g.tree.clone())
        .ok_or("mixed: no tree at 2")?;
    let certs = tree.certificates();
    ensure(ints(&certs[0].w) == [0, 3, 3] && certs[0].k == 1, || {
        "mixed: top relation is not pq(0,b2,b3)".into()
    })?;
    ensure(ints(&certs[1].w) == [20, 0, 30] && certs[1].k == 0, || {
        "mixed: sub relation is not d1 p(a1,0,cq)".into()
    })?;
    Ok("first example exact 2 only at char 2; d = 6 exact 3 everywhere; mixed exact 3 off char 2 and exact 2 at char 2 from the certificate, with the expected citations".into())
}

fn systems(v: &Variety) -> Result<Vec<(String, Vec<Binomial>)>, String> {
    let mut out = Vec::new();
    if let Ok(p) = build_pair(v, None, None) {
        out.push(("pair".to_string(), p.binomials()));
    }
    if v.uniform_degree().is_none() {
        if let Ok((f1, f2)) = stci_pair_example35(v, 2, 3, 1) {
            out.push(("mixed pair".to_string(), vec![f1, f2]));
        }
    }
    let t = build_triple(v, None).map_err(|e| e.message)?;
    if let ConstructOutput::Triple(_) = &t {
        out.push(("triple".to_string(), t.binomials()));
    }
    Ok(out)
}

fn criterion_5() -> Check {
    let v = example();
    let pair = stci_pair_prime_power(&v, None, None).map_err(|e| e.to_string())?;
    let polys = [pair.0, pair.1];
    let mut counts = Vec::new();
    for m in [1, 2] {
        let base = FieldSpec::new(2, m).map_err(|e| e.to_string())?;
        let r = equality_experiment(&v, &polys, &base, 3).map_err(|e| e.to_string())?;
        ensure(r.containment, || format!("{}: containment fails", r.field))?;
        ensure(r.excess.is_empty(), || {
            format!("{}: {} excess zeros", r.field, r.excess.len())
        })?;
        ensure(r.image_count == r.zero_count, || {
            format!(
                "{}: image {} vs zeros {}",
                r.field, r.image_count, r.zero_count
            )
        })?;
        counts.push(format!("{} {} points", r.field, r.zero_count));
    }
    let mut checked = 0;
    for input in [EXAMPLE, SIX, MIXED, MIXED_TWO_PRIMES] {
        let v = cli::load_variety(input).map_err(|e| e.message)?;
        for (name, polys) in systems(&v)? {
            ensure(containment_check(&v, &polys), || {
                format!("containment fails for the {name} of {v}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "zero set = image over {}; containment on {checked} constructed systems",
        counts.join(", ")
    ))
}

fn criterion_6() -> Check {
    let mut rng = StdRng::seed_from_u64(SEED);
    let (mut trees, mut certs, mut prime_power, mut triples) = (0, 0, 0, 0);
    for _ in 0..RANDOM_VARIETIES {
        let v = random_uniform(&mut rng, 4, 9, 12);
        let d = v.uniform_degree().unwrap();

        // (a)
        let norm = v.normalize();
        ensure(norm.normalize() == norm, || {
            format!("normalize not idempotent on {v}")
        })?;
        let forward = enumerate_ideal_binomials(&v, 4);
        let backward = enumerate_ideal_binomials(&norm, 4);
        ensure(
            forward.iter().all(|f| in_ideal(f, &norm)) && backward.iter().all(|f| in_ideal(f, &v)),
            || format!("normalize changes the relations of {v}"),
        )?;

        // (b), (c)
        let r = as_prime_power(d);
        let mut primes: Vec<u64> = vec![2, 3, 5];
        if let Some((p, _)) = r {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        let set = v.generator_set();
        let t: Vec<Vec<i64>> = set.vectors().iter().map(ints).collect();
        for &p in &primes {
            let Some(tree) =
                completely_p_glued(&set, p, DEFAULT_K_MAX).map_err(|e| e.to_string())?
            else {
                let must = d == 1 || r.is_some_and(|(q, _)| q == p);
                ensure(!must, || format!("no tree for {v} at p = {p}"))?;
                continue;
            };
            tree.validate().map_err(|e| format!("{v}: {e}"))?;
            for c in tree.certificates() {
                c.validate().map_err(|e| format!("{v}: {e}"))?;
                let target: Vec<i128> = ints(&c.scaled_w().ok_or("scaled w overflows")?)
                    .iter()
                    .map(|&x| x as i128)
                    .collect();
                let side = |idx: &[usize]| idx.iter().map(|&i| t[i].clone()).collect::<Vec<_>>();
                ensure(
                    resum(&side(&c.indices1), &ints(&c.coeffs1)) == target
                        && resum(&side(&c.indices2), &ints(&c.coeffs2)) == target,
                    || format!("{v}: certificate does not resum"),
                )?;
                certs += 1;
            }
            for f in tree.binomials() {
                ensure(in_ideal(&f, &v), || {
                    format!("{v}: tree binomial {f} not in the ideal")
                })?;
            }
            trees += 1;
        }
        if d == 1 || r.is_some() {
            let (f1, f2) =
                stci_pair_prime_power(&v, None, None).map_err(|e| format!("{v}: {e}"))?;
            ensure(in_ideal(&f1, &v) && in_ideal(&f2, &v), || {
                format!("{v}: prime-power pair not in the ideal")
            })?;
            prime_power += 1;
        }

        // (d)
        if let Ok(tr) = almost_sci_triple(&norm, default_delta_bound(&norm)) {
            ensure(tr.g1 % tr.g2 == 0, || {
                format!("{v}: g2 = {} does not divide g1 = {}", tr.g2, tr.g1)
            })?;
            ensure(
                tr.binomials()
                    .iter()
                    .all(|f| in_ideal(f, &norm) && in_ideal(f, &v)),
                || format!("{v}: triple not in the ideal"),
            )?;
            triples += 1;
        }

        // (e)
        let (o1, o2) = a_matrices(d, v.a(), v.b());
        let (m1, m2) = build_a_matrices(&v).map_err(|e| e.to_string())?;
        ensure(
            gcd_max_minors(&m1) == BigInt::from(brute_gcd_max_minors(&o1))
                && gcd_max_minors(&m2) == BigInt::from(brute_gcd_max_minors(&o2)),
            || format!("{v}: gcd of maximal minors disagrees with the oracle"),
        )?;
    }
    Ok(format!(
        "{RANDOM_VARIETIES} varieties: {trees} trees / {certs} certificates re-validated, {prime_power} prime-power pairs, {triples} triples"
    ))
}

fn main() {
    let criteria: [Criterion; 6] = [
        (
            "1 generators of the first example",
            criterion_1,
            Some(Duration::from_secs(1)),
        ),
        (
            "2 gluing certificate",
            criterion_2,
            Some(Duration::from_secs(1)),
        ),
        (
            "3 three-binomial construction",
            criterion_3,
            Some(Duration::from_secs(1)),
        ),
        ("4 classification", criterion_4, None),
        (
            "5 finite-field oracle",
            criterion_5,
            Some(Duration::from_secs(30)),
        ),
        ("6 randomized property suites", criterion_6, None),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let mut result = f();
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&result, limit) {
            if took > limit {
                result = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{took:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} of 6 criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 6 criteria pass");
}
