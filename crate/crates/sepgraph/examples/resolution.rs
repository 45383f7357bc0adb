//! Staged resolutions: sizes per stage and (*) for the resolved pairs.
//!
//! Run with `cargo run --example resolution`.

use sepgraph::fixtures::{fixture, plan_fixture};
use sepgraph::monoid::StarVerdict;
use sepgraph::resolution::{resolution_stage, FreeCover, ResolutionPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plan = ResolutionPlan::parse(plan_fixture("e23-factorial").expect("bundled"), |base| {
        Ok(fixture(base.trim_start_matches("fixture:")).expect("bundled base"))
    })?;
    let res = resolution_stage(&plan, 2)?;
    for stage in &res.stages {
        let g = &stage.graph;
        let verdicts = stage.triple_star_verdicts();
        let ok = verdicts
            .iter()
            .filter(|(_, v)| matches!(v, StarVerdict::Common(_)))
            .count();
        println!(
            "stage {}: {} vertices, {} edges, {} blocks; (*) holds for {ok}/{} resolved pairs",
            stage.index,
            g.vertex_count(),
            g.edge_count(),
            g.block_count(),
            verdicts.len()
        );
    }
    print!(
        "first names of stage 1:\n{}",
        res.stage(1)
            .name_table()
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!();

    let cover = FreeCover::new(vec![vec![1, 2, 1], vec![2, 1, 2]])?;
    let report = cover.injectivity_test(3);
    println!(
        "free cover injective on {} normal forms: {}",
        report.checked,
        report.injective()
    );
    Ok(())
}
