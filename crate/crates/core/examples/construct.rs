//! Defining binomials: the pair for a prime-power degree and the
//! three-binomial system that works in every characteristic.

use toric_ara::construct::{almost_sci_triple, default_delta_bound};
use toric_ara::gluing::stci_pair_prime_power;
use toric_ara::model::{in_ideal, Variety};

fn main() {
    let v = Variety::uniform(4, vec![8, 0, 1], vec![0, 12, 3]).unwrap();
    let (f1, f2) = stci_pair_prime_power(&v, None, None).unwrap();
    println!("{v}\n  pair: {f1}, {f2}");

    let t = almost_sci_triple(&v, default_delta_bound(&v)).unwrap();
    println!("  triple: {}, {}, {}", t.f1, t.f2, t.f3);
    println!(
        "  g1 = {}, g2 = {}, e = {}, delta = {}",
        t.g1, t.g2, t.e, t.delta
    );
    assert!(t.binomials().iter().all(|f| in_ideal(f, &v)));

    let six = Variety::uniform(6, vec![6, 0, 1], vec![0, 6, 1]).unwrap();
    if let Err(e) = stci_pair_prime_power(&six, None, None) {
        println!("{six}\n  no pair: {e}");
    }
    let t = almost_sci_triple(&six, default_delta_bound(&six)).unwrap();
    println!("  triple: {}, {}, {}", t.f1, t.f2, t.f3);
}
