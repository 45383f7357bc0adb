//! Reduced basis words, with and without the S relations.
//!
//! Run with `cargo run --example basis`.

use sepgraph::algebra::{enumerate_basis, format_word, ReductionSystem};
use sepgraph::fixtures::{fixture, with_empty_s};

fn main() {
    let loop_graph = fixture("single-loop").expect("bundled");
    for g in [loop_graph.clone(), with_empty_s(&loop_graph)] {
        let rs = ReductionSystem::new(&g);
        let words: Vec<String> = enumerate_basis(&rs, 4)
            .iter()
            .map(|w| format_word(&g, w))
            .collect();
        let s = if g.s_is_everything() { "S = C" } else { "S empty" };
        println!("{s}: {} words up to length 4", words.len());
        println!("  {}", words.join(" "));
    }
    let e23 = fixture("e23").expect("bundled");
    let rs = ReductionSystem::new(&e23);
    for n in 0..=4 {
        println!("e23, length <= {n}: {} words", enumerate_basis(&rs, n).len());
    }
}
