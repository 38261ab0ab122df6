//! Compare the zero set of the defining pair with the image of the
//! parametrization over GF(2) and GF(4), then over GF(3) where the pair
//! is not expected to cut out the variety.

use toric_ara::gluing::stci_pair_prime_power;
use toric_ara::model::Variety;
use toric_ara::verify::{equality_experiment, FieldSpec};

fn main() {
    let v = Variety::uniform(4, vec![8, 0, 1], vec![0, 12, 3]).unwrap();
    let (f1, f2) = stci_pair_prime_power(&v, None, None).unwrap();
    let polys = [f1, f2];
    for (p, m) in [(2, 1), (2, 2), (3, 1)] {
        let base = FieldSpec::new(p, m).unwrap();
        let r = equality_experiment(&v, &polys, &base, 3).unwrap();
        println!(
            "{}: {} zeros, {} image points, {} excess{}",
            r.field,
            r.zero_count,
            r.image_count,
            r.excess.len(),
            if r.possible_strict_containment {
                " (possible strict containment)"
            } else {
                ""
            }
        );
    }
}
