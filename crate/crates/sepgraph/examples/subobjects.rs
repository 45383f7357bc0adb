//! Finite complete subobjects and the maps they induce.
//!
//! Run with `cargo run --example subobjects`.

use std::sync::Arc;

use sepgraph::fixtures::fixture;
use sepgraph::graph::{check_morphism, finite_complete_subobject, print_graph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(fixture("nonseparative").expect("bundled"));
    let items = [g.item("x")?, g.item("e1")?];
    let (sub, inclusion) = finite_complete_subobject(&g, &items)?;
    print!("{}", print_graph(&sub));
    println!("inclusion is a morphism: {}", check_morphism(&inclusion).passed());
    Ok(())
}
