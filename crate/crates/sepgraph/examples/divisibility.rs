//! Rewriting vertices of a late stage into multiples of 2.
//!
//! Run with `cargo run --release --example divisibility`.

use sepgraph::fixtures::{fixture, plan_fixture};
use sepgraph::monoid::presentation_of;
use sepgraph::resolution::{resolution_stage, Divisibility, DivisibilityProbe, ProbeLimits, ResolutionPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plan = ResolutionPlan::parse(plan_fixture("e23-factorial").expect("bundled"), |base| {
        Ok(fixture(base.trim_start_matches("fixture:")).expect("bundled base"))
    })?;
    let res = resolution_stage(&plan, 3)?;
    for stage in [1, 2, 3] {
        let p = presentation_of(&res.stage(stage).graph);
        let mut probe = DivisibilityProbe::new(&res, stage, 2, ProbeLimits::default());
        for v in ["v", "w"] {
            match probe.run(v)? {
                Divisibility::Divisible { steps, element } => {
                    println!(
                        "stage {stage}: {v} -> {} in {} steps",
                        p.format(&element),
                        steps.len()
                    )
                }
                Divisibility::Unknown => println!("stage {stage}: {v} not shown divisible"),
            }
        }
    }
    Ok(())
}
