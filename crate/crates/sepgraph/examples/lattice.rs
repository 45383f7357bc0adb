//! The lattice of admissible pairs of the nonseparative graph with S
//! emptied, and its Hasse diagram.
//!
//! Run with `cargo run --example lattice > lattice.dot`.

use sepgraph::fixtures::{fixture, with_empty_s};
use sepgraph::lattice::{enumerate_admissible_pairs, hasse_dot, is_simple, pair_inf};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = with_empty_s(&fixture("nonseparative").expect("bundled"));
    let pairs = enumerate_admissible_pairs(&g, 1024)?;
    for p in &pairs {
        eprintln!("{}", p.display(&g));
    }
    if let [.., a, b] = pairs.as_slice() {
        eprintln!(
            "inf of the top two: {}",
            pair_inf(&g, &[a.clone(), b.clone()]).display(&g)
        );
    }
    eprintln!("simple: {:?}", is_simple(&g));
    print!("{}", hasse_dot(&g, &pairs));
    Ok(())
}
