use std::collections::HashMap;

use crate::graph::{BlockId, SeparatedGraph, VertexId};
use crate::monoid::{presentation_of, Direction, MonoidElement, MonoidPresentation, Step};

use super::{Resolution, ResolutionError};

/// Limits for the divisibility search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeLimits {
    /// Longest chain of vertices rewritten one inside another.
    pub max_depth: usize,
    /// Longest trace returned.
    pub max_steps: usize,
}

impl Default for ProbeLimits {
    fn default() -> Self {
        ProbeLimits {
            max_depth: 16,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisibility {
    /// Replaying `steps` from the vertex gives `element`, all of whose
    /// multiplicities are divisible by `m`.
    Divisible {
        steps: Vec<Step>,
        element: MonoidElement,
    },
    Unknown,
}

impl Divisibility {
    pub fn is_divisible(&self) -> bool {
        matches!(self, Divisibility::Divisible { .. })
    }
}

struct Probe<'a> {
    g: &'a SeparatedGraph,
    /// Blocks at each vertex, newest first.
    order: Vec<Vec<BlockId>>,
    m: u32,
    limits: ProbeLimits,
    memo: HashMap<VertexId, Option<Vec<Step>>>,
}

impl Probe<'_> {
    /// A forward trace from `v` to an element divisible by `m`. A vertex
    /// with such a trace is replaced by `n` copies of it, so only vertices
    /// whose multiplicity is not already divisible need one.
    fn trace(&mut self, v: VertexId, depth: usize) -> Option<Vec<Step>> {
        if let Some(known) = self.memo.get(&v) {
            return known.clone();
        }
        if depth > self.limits.max_depth {
            return None;
        }
        // cycle guard: a vertex on the current path counts as failed
        self.memo.insert(v, None);
        let mut found = None;
        'blocks: for &b in &self.order[v.index()].clone() {
            let mut steps = vec![Step {
                direction: Direction::Forward,
                vertex: v,
                block: b,
            }];
            let mut counts: HashMap<VertexId, u32> = HashMap::new();
            for r in self.g.block_ranges(b) {
                *counts.entry(r).or_insert(0) += 1;
            }
            let mut children: Vec<(VertexId, u32)> = counts.into_iter().collect();
            children.sort();
            for (child, n) in children {
                if n % self.m == 0 {
                    continue;
                }
                let Some(sub) = self.trace(child, depth + 1) else {
                    continue 'blocks;
                };
                if steps.len() + sub.len() * n as usize > self.limits.max_steps {
                    continue 'blocks;
                }
                for _ in 0..n {
                    steps.extend_from_slice(&sub);
                }
            }
            found = Some(steps);
            break;
        }
        // failures below the depth limit may succeed from a shallower start
        if found.is_some() || depth == 0 {
            self.memo.insert(v, found.clone());
        } else {
            self.memo.remove(&v);
        }
        found
    }
}

/// Divisibility searches in one stage, sharing setup and results across
/// start vertices.
pub struct DivisibilityProbe<'r> {
    p: MonoidPresentation,
    probe: Probe<'r>,
}

impl<'r> DivisibilityProbe<'r> {
    pub fn new(res: &'r Resolution, n: usize, m: u32, limits: ProbeLimits) -> Self {
        let g = &*res.stage(n).graph;
        let order = g
            .vertex_ids()
            .map(|u| {
                let mut blocks = g.blocks_at(u).to_vec();
                blocks.sort_by_key(|&b| std::cmp::Reverse(res.block_birth(g.block_name(b)).unwrap_or(0)));
                blocks
            })
            .collect();
        DivisibilityProbe {
            p: presentation_of(g),
            probe: Probe {
                g,
                order,
                m,
                limits,
                memo: HashMap::new(),
            },
        }
    }

    /// Looks for forward rewrites of `vertex` ending at an element whose
    /// multiplicities are all divisible by `m`, trying the most recently
    /// born blocks first. The result is replayed before it is returned.
    pub fn run(&mut self, vertex: &str) -> Result<Divisibility, ResolutionError> {
        let v = self
            .probe
            .g
            .vertex_id(vertex)
            .ok_or_else(|| ResolutionError::UnknownName(vertex.to_string()))?;
        let start = MonoidElement::gen(self.p.vertex_gen(v));
        if self.probe.m <= 1 {
            return Ok(Divisibility::Divisible {
                steps: Vec::new(),
                element: start,
            });
        }
        let Some(steps) = self.probe.trace(v, 0) else {
            return Ok(Divisibility::Unknown);
        };
        let element = self.p.replay(&start, &steps).expect("probe traces replay");
        assert!(
            element.all_divisible_by(self.probe.m),
            "probe traces end divisible"
        );
        Ok(Divisibility::Divisible { steps, element })
    }
}

/// One-off [`DivisibilityProbe::run`] in stage `n`.
pub fn divisibility_probe(
    res: &Resolution,
    n: usize,
    vertex: &str,
    m: u32,
    limits: ProbeLimits,
) -> Result<Divisibility, ResolutionError> {
    DivisibilityProbe::new(res, n, m, limits).run(vertex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture, plan_fixture};
    use crate::resolution::{resolution_stage, ResolutionPlan};

    fn factorial_plan() -> ResolutionPlan {
        ResolutionPlan::parse(plan_fixture("e23-factorial").unwrap(), |_| {
            Ok(fixture("e23").unwrap())
        })
        .unwrap()
    }

    #[test]
    fn one_divides_everything() {
        let res = resolution_stage(&factorial_plan(), 0).unwrap();
        let d = divisibility_probe(&res, 0, "v", 1, ProbeLimits::default()).unwrap();
        assert!(d.is_divisible());
    }

    #[test]
    fn sinks_are_not_divisible() {
        let res = resolution_stage(&factorial_plan(), 1).unwrap();
        let d = divisibility_probe(&res, 1, "w", 2, ProbeLimits::default()).unwrap();
        assert_eq!(d, Divisibility::Unknown);
    }

    #[test]
    fn stage_two_vertices_split_at_stage_three() {
        let plan = factorial_plan();
        let res = resolution_stage(&plan, 3).unwrap();
        let born = res.born_at(2);
        let d = divisibility_probe(&res, 3, &born[0], 2, ProbeLimits::default()).unwrap();
        let Divisibility::Divisible { steps, .. } = d else {
            panic!("expected divisible")
        };
        assert_eq!(steps.len(), 1);
        for base in ["v", "w"] {
            assert!(divisibility_probe(&res, 3, base, 2, ProbeLimits::default())
                .unwrap()
                .is_divisible());
        }
    }
}
