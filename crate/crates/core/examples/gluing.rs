//! Search for a complete 2-gluing of a toric variety and print the
//! certificate tree with its defining pair.

use toric_ara::cli::render_tree;
use toric_ara::gluing::{completely_p_glued, DEFAULT_K_MAX};
use toric_ara::model::Variety;

fn main() {
    let v = Variety::uniform(4, vec![8, 0, 1], vec![0, 12, 3]).unwrap();
    for p in [2, 3] {
        match completely_p_glued(&v.generator_set(), p, DEFAULT_K_MAX).unwrap() {
            Some(tree) => {
                tree.validate().unwrap();
                println!("{v} is completely {p}-glued:");
                print!("{}", render_tree(&tree, &v.variable_names()));
                for f in tree.binomials() {
                    println!("  {f}");
                }
            }
            None => println!("{v}: no {p}-gluing with k <= {DEFAULT_K_MAX}"),
        }
    }
}
