use std::collections::BTreeMap;

use super::{AlgebraElement, AlgebraError, Letter, PathWord};
use crate::graph::{BlockId, EdgeId, SeparatedGraph, VertexId};
use crate::scalar::Scalar;

/// Which explicit rewrite applies at a position of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteRule {
    /// `e* f` with `e`, `f` in one block.
    GhostEdge,
    /// `e_X e_X*` for `X` in `S`.
    ChosenPair,
}

/// The rewrite system of a separated graph together with its edge choice.
#[derive(Clone, Debug)]
pub struct ReductionSystem<'g> {
    graph: &'g SeparatedGraph,
    chosen: Vec<Option<EdgeId>>,
}

impl<'g> ReductionSystem<'g> {
    /// Uses the lexicographically least edge of each S-block.
    pub fn new(graph: &'g SeparatedGraph) -> Self {
        let chosen = graph
            .block_ids()
            .map(|b| {
                let blk = graph.block(b);
                blk.in_s.then(|| blk.edges[0])
            })
            .collect();
        ReductionSystem { graph, chosen }
    }

    /// Overrides the chosen edge of some S-blocks.
    pub fn with_choice(
        graph: &'g SeparatedGraph,
        choice: &BTreeMap<BlockId, EdgeId>,
    ) -> Result<Self, AlgebraError> {
        let mut rs = Self::new(graph);
        for (&b, &e) in choice {
            if b.index() >= graph.block_count() || !graph.in_s(b) || graph.block_of(e) != b {
                return Err(AlgebraError::BadChoice(graph.edge_name(e).to_string()));
            }
            rs.chosen[b.index()] = Some(e);
        }
        Ok(rs)
    }

    pub fn graph(&self) -> &'g SeparatedGraph {
        self.graph
    }

    pub fn chosen_edge(&self, b: BlockId) -> Option<EdgeId> {
        self.chosen[b.index()]
    }

    fn is_chosen(&self, e: EdgeId) -> bool {
        self.chosen[self.graph.block_of(e).index()] == Some(e)
    }

    pub fn letter_weight(&self, l: Letter) -> u64 {
        match l {
            Letter::Edge(e) if self.is_chosen(e) => 2,
            _ => 1,
        }
    }

    /// Sum of letter weights; a vertex weighs 1.
    pub fn weight(&self, w: &PathWord) -> u64 {
        if w.is_vertex() {
            1
        } else {
            w.letters().iter().map(|&l| self.letter_weight(l)).sum()
        }
    }

    pub fn rule_at(&self, a: Letter, b: Letter) -> Option<RewriteRule> {
        match (a, b) {
            (Letter::Ghost(e), Letter::Edge(f)) if self.graph.block_of(e) == self.graph.block_of(f) => {
                Some(RewriteRule::GhostEdge)
            }
            (Letter::Edge(e), Letter::Ghost(f)) if e == f && self.is_chosen(e) => {
                Some(RewriteRule::ChosenPair)
            }
            _ => None,
        }
    }

    /// Positions `i` where letters `i, i+1` form a redex.
    pub fn redexes(&self, w: &PathWord) -> Vec<usize> {
        w.letters()
            .windows(2)
            .enumerate()
            .filter(|(_, p)| self.rule_at(p[0], p[1]).is_some())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_normal_word(&self, w: &PathWord) -> bool {
        w.letters().windows(2).all(|p| self.rule_at(p[0], p[1]).is_none())
    }

    /// The linear combination replacing `w` after rewriting at `pos`, with integer coefficients.
    pub fn rewrite_at(&self, w: &PathWord, pos: usize) -> Vec<(PathWord, i64)> {
        let g = self.graph;
        let (a, b) = (w.letters()[pos], w.letters()[pos + 1]);
        match self.rule_at(a, b) {
            Some(RewriteRule::GhostEdge) => {
                if a.edge() == b.edge() {
                    vec![(w.splice(pos, 2, &[], g.range(a.edge())), 1)]
                } else {
                    Vec::new()
                }
            }
            Some(RewriteRule::ChosenPair) => {
                let e = a.edge();
                let v = g.source(e);
                let mut out = vec![(w.splice(pos, 2, &[], v), 1)];
                for &f in &g.block(g.block_of(e)).edges {
                    if f != e {
                        out.push((w.splice(pos, 2, &[Letter::Edge(f), Letter::Ghost(f)], v), -1));
                    }
                }
                out
            }
            None => panic!("no redex at position {pos}"),
        }
    }

    /// Rewrites to normal form, choosing among the redexes of each word with `choose`.
    pub fn normalize_with<K: Scalar>(
        &self,
        x: &AlgebraElement<K>,
        mut choose: impl FnMut(&PathWord, &[usize]) -> usize,
    ) -> AlgebraElement<K> {
        let mut out = AlgebraElement::zero();
        let mut stack: Vec<(PathWord, K)> = x.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((w, c)) = stack.pop() {
            let rs = self.redexes(&w);
            if rs.is_empty() {
                out.add_term(w, c);
                continue;
            }
            let pos = choose(&w, &rs);
            for (w2, k) in self.rewrite_at(&w, pos) {
                stack.push((w2, c.clone() * K::from_int(k)));
            }
        }
        out
    }

    /// Normal form by leftmost rewriting.
    pub fn normalize<K: Scalar>(&self, x: &AlgebraElement<K>) -> AlgebraElement<K> {
        self.normalize_with(x, |_, rs| rs[0])
    }

    pub fn multiply<K: Scalar>(&self, a: &AlgebraElement<K>, b: &AlgebraElement<K>) -> AlgebraElement<K> {
        self.normalize(&a.concat(b))
    }

    /// The idempotent `v - Σ_{e∈Z} e e*` for a nonempty `Z` inside one block at `v`, normalized.
    pub fn q_idempotent<K: Scalar>(
        &self,
        v: VertexId,
        z: &[EdgeId],
    ) -> Result<AlgebraElement<K>, AlgebraError> {
        let g = self.graph;
        let first = *z.first().ok_or(AlgebraError::NotInOneBlock)?;
        let block = g.block_of(first);
        if g.block(block).vertex != v || z.iter().any(|&e| g.block_of(e) != block) {
            return Err(AlgebraError::NotInOneBlock);
        }
        let mut x = AlgebraElement::vertex(v);
        let mut z: Vec<EdgeId> = z.to_vec();
        z.sort();
        z.dedup();
        for e in z {
            let p = PathWord::from_letters(g, vec![Letter::Edge(e), Letter::Ghost(e)])
                .expect("e e* is composable");
            x.add_term(p, -K::one());
        }
        Ok(self.normalize(&x))
    }
}
