//! Refinement matrices for equal sums, and a graph where none exists.
//!
//! Run with `cargo run --example refinement`.

use sepgraph::fixtures::fixture;
use sepgraph::monoid::{check_star, presentation_of, refine, Budget, RefineResult};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (graph, a1, a2, b1, b2) in [
        ("e23", "w", "w", "w", "w"),
        ("e23", "v", "w", "2 w", "2 w"),
        ("non-refinement", "x1", "x2", "y1", "y2"),
    ] {
        let p = presentation_of(&fixture(graph).expect("bundled"));
        let e = |s: &str| p.parse(s);
        println!(
            "{graph}: (*) {}",
            if check_star(&p).passes() { "holds" } else { "fails" }
        );
        match refine(&p, &e(a1)?, &e(a2)?, &e(b1)?, &e(b2)?, Budget::default()) {
            Ok(RefineResult::Refined { matrix, .. }) => {
                println!("  {a1} + {a2} = {b1} + {b2} refines as");
                for row in matrix.render(&p) {
                    println!("    {row}");
                }
            }
            Ok(RefineResult::Unknown(why)) => println!("  no refinement found: {why}"),
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
