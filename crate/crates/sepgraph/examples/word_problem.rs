//! Deciding equality in graph monoids, with replayable certificates.
//!
//! Run with `cargo run --example word_problem`.

use sepgraph::fixtures::fixture;
use sepgraph::monoid::{monoid_eq, presentation_of, Budget, EqResult};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (graph, a, b) in [
        ("e23", "2 w", "3 w"),
        ("e23", "w", "2 w"),
        ("nonseparative", "2 x", "x + y"),
        ("nonseparative", "x", "y"),
    ] {
        let p = presentation_of(&fixture(graph).expect("bundled"));
        let (x, y) = (p.parse(a)?, p.parse(b)?);
        match monoid_eq(&p, &x, &y, Budget::default()) {
            EqResult::Equal(w) => {
                println!("{graph}: {a} = {b}");
                for s in w.left.iter().chain(&w.right) {
                    println!("    {}", p.format_step(s));
                }
            }
            EqResult::NotEqual(c) => println!(
                "{graph}: {a} != {b} (certificate checks: {})",
                c.verify(&p, &x, &y)
            ),
            EqResult::Unknown(stats) => println!("{graph}: {a} vs {b} undecided: {stats:?}"),
        }
    }
    Ok(())
}
