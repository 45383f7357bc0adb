//! Bundled example graphs and resolution plans.

use crate::graph::{parse_graph, GraphBuilder, SeparatedGraph};

/// A bundled graph description.
#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
}

impl Fixture {
    /// The first comment line of the file.
    pub fn description(&self) -> &'static str {
        self.text.lines().find_map(|l| l.strip_prefix("# ")).unwrap_or("")
    }

    pub fn graph(&self) -> SeparatedGraph {
        parse_graph(self.text).expect("bundled fixtures are valid")
    }
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture {
            name: $name,
            text: include_str!(concat!("../fixtures/", $name, ".graph")),
        }
    };
}

macro_rules! plan {
    ($name:literal) => {
        Fixture {
            name: $name,
            text: include_str!(concat!("../fixtures/", $name, ".plan")),
        }
    };
}

/// All bundled graphs, sorted by name.
pub fn fixtures() -> Vec<Fixture> {
    vec![
        fixture!("chain"),
        fixture!("cohn-pair"),
        fixture!("complete3"),
        fixture!("csimple"),
        fixture!("csimple-plain"),
        fixture!("e12"),
        fixture!("e23"),
        fixture!("fork"),
        fixture!("non-refinement"),
        fixture!("nonseparative"),
        fixture!("one-vertex-1-1"),
        fixture!("one-vertex-2-1"),
        fixture!("rose2"),
        fixture!("single-loop"),
    ]
}

/// All bundled resolution plans, sorted by name.
pub fn plan_fixtures() -> Vec<Fixture> {
    vec![
        plan!("e23-one-per-pair"),
        plan!("e23-factorial"),
        plan!("nonseparative-ones"),
    ]
}

pub fn fixture(name: &str) -> Option<SeparatedGraph> {
    fixtures().into_iter().find(|f| f.name == name).map(|f| f.graph())
}

pub fn plan_fixture(name: &str) -> Option<&'static str> {
    plan_fixtures()
        .into_iter()
        .find(|f| f.name == name)
        .map(|f| f.text)
}

/// `E(m,n)`: vertices `v`, `w`; edges `a1..an` in block `A` and `b1..bm` in block `B`, all from `v` to `w`.
pub fn e_mn(m: usize, n: usize) -> SeparatedGraph {
    let mut b = GraphBuilder::new(&format!("e{m}{n}"));
    b.vertex("v").vertex("w");
    let a: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let bs: Vec<String> = (1..=m).map(|j| format!("b{j}")).collect();
    for e in a.iter().chain(&bs) {
        b.edge(e, "v", "w");
    }
    let a_refs: Vec<&str> = a.iter().map(String::as_str).collect();
    let b_refs: Vec<&str> = bs.iter().map(String::as_str).collect();
    b.block("v", "A", &a_refs).block("v", "B", &b_refs);
    b.build().expect("E(m,n) is well formed")
}

/// The same graph with `S` emptied.
pub fn with_empty_s(g: &SeparatedGraph) -> SeparatedGraph {
    let mut b = g.to_builder();
    b.s_none();
    b.build().expect("changing S keeps the graph valid")
}

/// The graph with one block per vertex holding all its edges, and `S = C`.
pub fn non_separated(g: &SeparatedGraph) -> SeparatedGraph {
    let mut b = GraphBuilder::new(g.name());
    for v in g.vertex_ids() {
        b.vertex(g.vertex_name(v));
    }
    for e in g.edge_ids() {
        b.edge(
            g.edge_name(e),
            g.vertex_name(g.source(e)),
            g.vertex_name(g.range(e)),
        );
    }
    b.trivial_partitions();
    b.build().expect("trivial partitions are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::print_graph;

    #[test]
    fn fixtures_parse_and_round_trip() {
        let all = fixtures();
        let names: Vec<&str> = all.iter().map(|f| f.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        for f in all {
            let g = f.graph();
            assert_eq!(g.name(), f.name);
            assert!(!f.description().is_empty());
            assert_eq!(parse_graph(&print_graph(&g)).unwrap(), g);
        }
    }

    #[test]
    fn e_mn_matches_the_bundled_e23() {
        assert_eq!(e_mn(2, 3), fixture("e23").unwrap());
    }
}
