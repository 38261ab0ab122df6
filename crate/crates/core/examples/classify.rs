//! Arithmetical rank per characteristic for a few varieties.

use toric_ara::analyze::analyze;
use toric_ara::gluing::DEFAULT_K_MAX;
use toric_ara::model::Variety;

fn main() {
    let varieties = [
        Variety::uniform(4, vec![8, 0, 1], vec![0, 12, 3]).unwrap(),
        Variety::uniform(6, vec![6, 0, 1], vec![0, 6, 1]).unwrap(),
        Variety::mixed3([5, 3, 6], [2, 0, 3], [0, 1, 1]).unwrap(),
        Variety::mixed3([5, 1, 6], [2, 0, 1], [0, 1, 1]).unwrap(),
        Variety::uniform(6, vec![1, 0], vec![1, 1]).unwrap(),
    ];
    for v in &varieties {
        let a = analyze(v, DEFAULT_K_MAX).unwrap();
        println!("{v}");
        for e in &a.report.entries {
            let rules: Vec<String> = e
                .rules
                .iter()
                .map(|r| match r.prime {
                    Some(p) => format!("{} (p = {p})", r.citation),
                    None => r.citation.clone(),
                })
                .collect();
            println!(
                "  {}: {}..={}  [{}]",
                e.characteristic,
                e.lower,
                e.upper,
                rules.join("; ")
            );
        }
        println!("  {}", a.report.summary);
    }
}
