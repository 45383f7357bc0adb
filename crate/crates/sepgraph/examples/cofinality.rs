//! C-cofinality with witness multipaths, next to simplicity.
//!
//! Run with `cargo run --example cofinality`.

use sepgraph::fixtures::fixture;
use sepgraph::lattice::{is_c_cofinal, is_simple, Cofinality};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["fork", "e23", "complete3", "csimple"] {
        let g = fixture(name).expect("bundled");
        print!(
            "{name}: simple={:?}, ",
            is_simple(&g) == sepgraph::lattice::Simplicity::Simple
        );
        match is_c_cofinal(&g, 3)? {
            Cofinality::Cofinal => println!("cofinal"),
            Cofinality::NotCofinal { w, h, multipath } => {
                let h: Vec<&str> = h.iter().map(|&v| g.vertex_name(v)).collect();
                println!(
                    "not cofinal: {} only reaches {h:?}, and this multipath avoids it:",
                    g.vertex_name(w)
                );
                for line in multipath.render(&g) {
                    println!("    {line}");
                }
            }
            Cofinality::Unknown(depth) => println!("witness too large at depth {depth}"),
        }
    }
    Ok(())
}
