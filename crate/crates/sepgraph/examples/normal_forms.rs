//! Normal forms in a Cohn-Leavitt algebra, and a confluence spot check.
//!
//! Run with `cargo run --example normal_forms`.

use sepgraph::algebra::{confluence_check, format_element, parse_element, AlgebraElement, ReductionSystem};
use sepgraph::fixtures::fixture;
use sepgraph::scalar::Rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = fixture("e23").expect("bundled");
    let rs = ReductionSystem::new(&g);
    for text in [
        "a1* a1",
        "a1* a2",
        "a1 a1*",
        "b1 b1* + b2 b2*",
        "2 * a1* a1 - (1/2) * w",
    ] {
        let x: AlgebraElement<Rational> = parse_element(&g, text)?;
        println!("{text:>24}  =>  {}", format_element(&g, &rs.normalize(&x)));
    }
    let report = confluence_check(&g, 3, 200, 6);
    println!(
        "random rewriting agreed with leftmost rewriting on {}/{} samples",
        report.agreed, report.samples
    );
    Ok(())
}
