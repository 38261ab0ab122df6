//! Integer lattice toolkit on the generators of a small toric variety:
//! Hermite normal form, intersection, gcd of maximal minors and semigroup
//! membership.

use toric_ara::intlat::{
    gcd_max_minors, hnf, lattice_intersect, lattice_of, semigroup_member, IntMatrix, IntVec,
    SemigroupSet,
};

fn main() {
    let t = SemigroupSet::from_u64_rows(&[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[8, 0, 1]]).unwrap();
    let m = IntMatrix::from_i64_rows(&[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[8, 0, 1]]).unwrap();
    let (h, rank) = hnf(&m);
    println!("HNF (rank {rank}):\n{h}");

    let cube = lattice_of(&t.vectors()[..3], 3).unwrap();
    let a = lattice_of(&t.vectors()[3..], 3).unwrap();
    let meet = lattice_intersect(&cube, &a).unwrap();
    println!("Z(4e_i) meet Z(8,0,1) = Z{}", meet.basis()[0]);

    let a1 = IntMatrix::from_i64_rows(&[&[4, 0, 0, 8], &[0, 4, 0, 0], &[0, 0, 4, 1]]).unwrap();
    println!("gcd of maximal minors of A1 = {}", gcd_max_minors(&a1));

    for w in [[32, 0, 4], [16, 4, 9], [3, 0, 0]] {
        let w = IntVec::from_i64s(&w);
        match semigroup_member(&w, &t).unwrap() {
            Some(c) => println!("{w} = {c} . T"),
            None => println!("{w} is not in N T"),
        }
    }
}
