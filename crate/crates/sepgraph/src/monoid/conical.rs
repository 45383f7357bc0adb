use std::collections::HashMap;

use super::{parse_monoid_element, GenId, MonoidElement, MonoidError, MonoidPresentation};
use crate::graph::{is_name_char, GraphBuilder, SeparatedGraph};

/// A finite presentation `⟨x_1..x_k | Σ a_ij x_j = Σ b_ij x_j⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicalPresentation {
    pub generators: Vec<String>,
    /// `(a_i, b_i)` coefficient rows, indexed like `generators`.
    pub relations: Vec<(Vec<u32>, Vec<u32>)>,
}

impl ConicalPresentation {
    /// Parses `x y | 2 x = 3 x ; x + x = y`.
    pub fn parse(text: &str) -> Result<Self, MonoidError> {
        let (gens, rels) = text.split_once('|').ok_or_else(|| MonoidError::Parse {
            column: 1,
            message: "expected `generators | relations`".into(),
        })?;
        let generators: Vec<String> = gens.split_whitespace().map(str::to_string).collect();
        if let Some(bad) = generators.iter().find(|g| !g.chars().all(is_name_char)) {
            return Err(MonoidError::Parse {
                column: 1,
                message: format!("bad generator name `{bad}`"),
            });
        }
        let index: HashMap<&str, GenId> = generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.as_str(), GenId(i as u32)))
            .collect();
        let row = |x: &MonoidElement| -> Vec<u32> {
            (0..generators.len())
                .map(|i| x.multiplicity(GenId(i as u32)))
                .collect()
        };
        let mut relations = Vec::new();
        for rel in rels.split(';').map(str::trim).filter(|r| !r.is_empty()) {
            let (lhs, rhs) = rel.split_once('=').ok_or_else(|| MonoidError::Parse {
                column: 1,
                message: format!("expected `=` in `{rel}`"),
            })?;
            let lookup = |n: &str| index.get(n).copied();
            let a = parse_monoid_element(lhs, lookup)?;
            let b = parse_monoid_element(rhs, lookup)?;
            relations.push((row(&a), row(&b)));
        }
        Ok(ConicalPresentation {
            generators,
            relations,
        })
    }

    /// Checks that the graph monoid of `graph` is this presentation with one
    /// extra generator `u.i` per relation: the two relations at `u.i` read
    /// `u.i = Σ a_ij x_j` and `u.i = Σ b_ij x_j`.
    pub fn matches(&self, p: &MonoidPresentation) -> bool {
        let g = p.graph();
        if g.vertex_count() != self.generators.len() + self.relations.len() || !g.s_is_everything() {
            return false;
        }
        let expected = |coeffs: &[u32]| -> Option<MonoidElement> {
            let mut pairs = Vec::new();
            for (j, &c) in coeffs.iter().enumerate() {
                if c > 0 {
                    pairs.push((p.generator(&self.generators[j])?, c));
                }
            }
            Some(MonoidElement::from_pairs(pairs))
        };
        self.relations.iter().enumerate().all(|(i, (a, b))| {
            let Some(u) = g.vertex_id(&format!("u.{}", i + 1)) else {
                return false;
            };
            let mut rhs: Vec<MonoidElement> =
                g.blocks_at(u).iter().map(|&x| p.block_sum(x).clone()).collect();
            let mut want = match (expected(a), expected(b)) {
                (Some(x), Some(y)) => vec![x, y],
                _ => return false,
            };
            rhs.sort();
            want.sort();
            rhs == want
        })
    }
}

/// The two-layer graph realizing a conical presentation: a source `u.i` per
/// relation with blocks `X.i.1` (the `a_ij` edges) and `X.i.2` (the `b_ij`
/// edges) into sinks named after the generators. `S = C`.
pub fn presentation_to_graph(name: &str, pres: &ConicalPresentation) -> Result<SeparatedGraph, MonoidError> {
    let mut b = GraphBuilder::new(name);
    for x in &pres.generators {
        b.vertex(x);
    }
    for (i, (a_row, b_row)) in pres.relations.iter().enumerate() {
        let i = i + 1;
        if a_row.iter().all(|&c| c == 0) || b_row.iter().all(|&c| c == 0) {
            return Err(MonoidError::ZeroSide(i));
        }
        let u = format!("u.{i}");
        b.vertex(&u);
        for (side, row, letter) in [(1, a_row, "a"), (2, b_row, "b")] {
            let mut edges = Vec::new();
            for (j, &c) in row.iter().enumerate() {
                for t in 1..=c {
                    let e = format!("{letter}.{i}.{}.{t}", j + 1);
                    b.edge(&e, &u, &pres.generators[j]);
                    edges.push(e);
                }
            }
            let refs: Vec<&str> = edges.iter().map(String::as_str).collect();
            b.block(&u, &format!("X.{i}.{side}"), &refs);
        }
    }
    b.s_all();
    Ok(b.build()?)
}
