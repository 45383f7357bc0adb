//! The graph monoid `M(E, C, S)` of a finite separated graph.
//!
//! Elements of the free abelian monoid on the generators are sparse multisets.
//! Equality in the graph monoid is the congruence generated by the one-step
//! rewrites `v -> sum(X)`; see [`monoid_eq`] for the decision procedure.

mod conical;
mod quotient;
mod refine;
mod search;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{is_name_char, BlockId, GraphError, SeparatedGraph, VertexId};

pub use conical::{presentation_to_graph, ConicalPresentation};
pub use quotient::{pi_homomorphism, quotient_graph, PiReport, RelationCheck};
pub use refine::{refine, split_trace, RefineResult, RefinementMatrix};
pub use search::{
    check_star, check_star_pair, forward_common, monoid_eq, one_step_images, Budget, EqResult,
    NotEqualCertificate, SearchStats, Side, StarPair, StarReport, StarVerdict, Witness, WordProblem,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("vertex `{0}` is a sink and cannot be rewritten")]
    SinkChoice(String),
    #[error("block `{block}` does not belong to vertex `{vertex}`")]
    BlockNotAtVertex { vertex: String, block: String },
    #[error("more rewrites of `{0}` requested than occurrences present")]
    NotEnoughOccurrences(String),
    #[error("the two sums are not equal: {0}")]
    NotEqual(String),
    #[error("the sums could not be shown equal within the budget")]
    EqualityUnknown,
    #[error("pair is not admissible: {0}")]
    NotAdmissible(String),
    #[error("relation with an all-zero side: {0}")]
    ZeroSide(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Index of a monoid generator: vertices first (in vertex order), then one
/// `q'` generator per block outside `S` (in block order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Vertex(VertexId),
    /// `q'_X` for a block `X` outside `S`.
    Q(BlockId),
}

/// An element of the free abelian monoid on the generators.
///
/// Stored as `(generator, multiplicity)` pairs sorted by generator with no
/// zero multiplicities, so derived equality and hashing are structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonoidElement(Vec<(GenId, u32)>);

impl MonoidElement {
    pub fn zero() -> Self {
        MonoidElement(Vec::new())
    }

    pub fn gen(g: GenId) -> Self {
        MonoidElement(vec![(g, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (GenId, u32)>) -> Self {
        let mut v: Vec<(GenId, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by_key(|p| p.0);
        let mut out: Vec<(GenId, u32)> = Vec::with_capacity(v.len());
        for (g, k) in v {
            match out.last_mut() {
                Some(last) if last.0 == g => last.1 += k,
                _ => out.push((g, k)),
            }
        }
        MonoidElement(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of generator occurrences.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|p| u64::from(p.1)).sum()
    }

    pub fn multiplicity(&self, g: GenId) -> u32 {
        self.0
            .binary_search_by_key(&g, |p| p.0)
            .map_or(0, |i| self.0[i].1)
    }

    pub fn terms(&self) -> &[(GenId, u32)] {
        &self.0
    }

    pub fn support(&self) -> impl Iterator<Item = GenId> + '_ {
        self.0.iter().map(|p| p.0)
    }

    pub fn plus(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        MonoidElement(out)
    }

    pub fn scaled(&self, k: u32) -> Self {
        if k == 0 {
            return Self::zero();
        }
        MonoidElement(self.0.iter().map(|&(g, m)| (g, m * k)).collect())
    }

    /// Whether `other` is a sub-multiset of `self`.
    pub fn contains(&self, other: &Self) -> bool {
        other.0.iter().all(|&(g, k)| self.multiplicity(g) >= k)
    }

    /// `self - other` when `other` is a sub-multiset.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if !self.contains(other) {
            return None;
        }
        let out = self
            .0
            .iter()
            .map(|&(g, k)| (g, k - other.multiplicity(g)))
            .filter(|p| p.1 > 0)
            .collect();
        Some(MonoidElement(out))
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        MonoidElement(
            self.0
                .iter()
                .filter_map(|&(g, k)| {
                    let m = k.min(other.multiplicity(g));
                    (m > 0).then_some((g, m))
                })
                .collect(),
        )
    }

    pub fn all_divisible_by(&self, m: u32) -> bool {
        m > 0 && self.0.iter().all(|p| p.1 % m == 0)
    }
}

impl FromIterator<GenId> for MonoidElement {
    fn from_iter<I: IntoIterator<Item = GenId>>(iter: I) -> Self {
        MonoidElement::from_pairs(iter.into_iter().map(|g| (g, 1)))
    }
}

/// Direction of a rewrite step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// `v -> sum(X)`.
    Forward,
    /// `sum(X) -> v`.
    Backward,
}

/// One application of the relation `v = sum(X)` in either direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub direction: Direction,
    pub vertex: VertexId,
    pub block: BlockId,
}

/// The finite presentation of `M(E, C, S)`: generators `E^0` plus `q'_X` for
/// `X` outside `S`, and one relation `v = sum(X)` per block `X` at `v`.
#[derive(Clone, Debug)]
pub struct MonoidPresentation {
    graph: Arc<SeparatedGraph>,
    names: Vec<String>,
    kinds: Vec<GenKind>,
    q_of_block: Vec<Option<GenId>>,
    sums: Vec<MonoidElement>,
    name_index: HashMap<String, GenId>,
    /// Blocks keyed by the first generator of their range sum, for backward matching.
    by_first_gen: HashMap<GenId, Vec<BlockId>>,
}

/// Builds the presentation of the graph monoid (clones the graph).
pub fn presentation_of(g: &SeparatedGraph) -> MonoidPresentation {
    MonoidPresentation::new(Arc::new(g.clone()))
}

impl MonoidPresentation {
    pub fn new(graph: Arc<SeparatedGraph>) -> Self {
        let g = &*graph;
        let mut names: Vec<String> = g.vertex_ids().map(|v| g.vertex_name(v).to_string()).collect();
        let mut kinds: Vec<GenKind> = g.vertex_ids().map(GenKind::Vertex).collect();
        let mut q_of_block = vec![None; g.block_count()];
        for b in g.block_ids() {
            if !g.in_s(b) {
                q_of_block[b.index()] = Some(GenId(names.len() as u32));
                names.push(format!("q.{}", g.block_name(b)));
                kinds.push(GenKind::Q(b));
            }
        }
        let sums: Vec<MonoidElement> = g
            .block_ids()
            .map(|b| {
                let ranges = g.block_ranges(b).map(|v| GenId(v.0));
                let mut r: MonoidElement = ranges.collect();
                if let Some(q) = q_of_block[b.index()] {
                    r = r.plus(&MonoidElement::gen(q));
                }
                r
            })
            .collect();
        let mut name_index = HashMap::new();
        for (i, n) in names.iter().enumerate().rev() {
            // vertex names win over clashing `q.` names
            name_index.insert(n.clone(), GenId(i as u32));
        }
        let mut by_first_gen: HashMap<GenId, Vec<BlockId>> = HashMap::new();
        for b in g.block_ids() {
            let first = sums[b.index()].0[0].0;
            by_first_gen.entry(first).or_default().push(b);
        }
        MonoidPresentation {
            graph,
            names,
            kinds,
            q_of_block,
            sums,
            name_index,
            by_first_gen,
        }
    }

    pub fn graph(&self) -> &SeparatedGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<SeparatedGraph> {
        &self.graph
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = GenId> {
        (0..self.names.len() as u32).map(GenId)
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.names[g.index()]
    }

    pub fn kind(&self, g: GenId) -> GenKind {
        self.kinds[g.index()]
    }

    pub fn generator(&self, name: &str) -> Option<GenId> {
        self.name_index.get(name).copied()
    }

    pub fn vertex_gen(&self, v: VertexId) -> GenId {
        GenId(v.0)
    }

    pub fn as_vertex(&self, g: GenId) -> Option<VertexId> {
        match self.kinds[g.index()] {
            GenKind::Vertex(v) => Some(v),
            GenKind::Q(_) => None,
        }
    }

    pub fn q_gen(&self, b: BlockId) -> Option<GenId> {
        self.q_of_block[b.index()]
    }

    /// `sum(X)`: the ranges of `X` with multiplicity, plus `q'_X` when `X` is outside `S`.
    pub fn block_sum(&self, b: BlockId) -> &MonoidElement {
        &self.sums[b.index()]
    }

    /// The relations `v = sum(X)`, one per block, in block order.
    pub fn relations(&self) -> impl Iterator<Item = (VertexId, BlockId)> + '_ {
        self.graph.block_ids().map(|b| (self.graph.block(b).vertex, b))
    }

    pub fn parse(&self, text: &str) -> Result<MonoidElement, MonoidError> {
        parse_monoid_element(text, |name| self.generator(name))
    }

    pub fn format(&self, x: &MonoidElement) -> String {
        format_with(x, |g| self.name(g))
    }

    pub fn format_step(&self, s: &Step) -> String {
        let arrow = match s.direction {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        };
        format!(
            "{arrow} {} [{}]",
            self.graph.vertex_name(s.vertex),
            self.graph.block_name(s.block)
        )
    }

    /// Applies one step, or returns `None` when it does not apply.
    pub fn apply(&self, x: &MonoidElement, s: &Step) -> Option<MonoidElement> {
        if self.graph.block(s.block).vertex != s.vertex {
            return None;
        }
        let v = MonoidElement::gen(self.vertex_gen(s.vertex));
        let r = self.block_sum(s.block);
        match s.direction {
            Direction::Forward => Some(x.checked_sub(&v)?.plus(r)),
            Direction::Backward => Some(x.checked_sub(r)?.plus(&v)),
        }
    }

    /// Replays a sequence of steps.
    pub fn replay(&self, x: &MonoidElement, steps: &[Step]) -> Option<MonoidElement> {
        steps.iter().try_fold(x.clone(), |acc, s| self.apply(&acc, s))
    }

    /// All single forward rewrites `x ->_1 y`, deduplicated by result.
    pub fn forward_steps(&self, x: &MonoidElement) -> Vec<(Step, MonoidElement)> {
        let mut out: Vec<(Step, MonoidElement)> = Vec::new();
        for g in x.support() {
            let Some(v) = self.as_vertex(g) else { continue };
            for &b in self.graph.blocks_at(v) {
                let step = Step {
                    direction: Direction::Forward,
                    vertex: v,
                    block: b,
                };
                let y = self.apply(x, &step).expect("vertex occurs");
                if !out.iter().any(|(_, z)| *z == y) {
                    out.push((step, y));
                }
            }
        }
        out
    }

    /// All single reverse rewrites `sum(X) -> v` applicable to `x`.
    pub fn backward_steps(&self, x: &MonoidElement) -> Vec<(Step, MonoidElement)> {
        let mut out = Vec::new();
        for g in x.support() {
            let Some(blocks) = self.by_first_gen.get(&g) else {
                continue;
            };
            for &b in blocks {
                let step = Step {
                    direction: Direction::Backward,
                    vertex: self.graph.block(b).vertex,
                    block: b,
                };
                if let Some(y) = self.apply(x, &step) {
                    out.push((step, y));
                }
            }
        }
        out
    }

    /// The parallel rewrite: each `(v, X)` choice rewrites one further
    /// occurrence of `v` to `sum(X)`; unchosen occurrences stay.
    pub fn parallel_step(
        &self,
        x: &MonoidElement,
        choices: &[(VertexId, BlockId)],
    ) -> Result<MonoidElement, MonoidError> {
        let g = &*self.graph;
        let mut used: HashMap<VertexId, u32> = HashMap::new();
        let mut out = x.clone();
        for &(v, b) in choices {
            if g.is_sink(v) {
                return Err(MonoidError::SinkChoice(g.vertex_name(v).to_string()));
            }
            if g.block(b).vertex != v {
                return Err(MonoidError::BlockNotAtVertex {
                    vertex: g.vertex_name(v).to_string(),
                    block: g.block_name(b).to_string(),
                });
            }
            let n = used.entry(v).or_insert(0);
            *n += 1;
            if *n > x.multiplicity(self.vertex_gen(v)) {
                return Err(MonoidError::NotEnoughOccurrences(g.vertex_name(v).to_string()));
            }
            let step = Step {
                direction: Direction::Forward,
                vertex: v,
                block: b,
            };
            out = self.apply(&out, &step).expect("occurrence counted");
        }
        Ok(out)
    }
}

/// Parses `v + 2 w + q.X` (or `0`) resolving names with `lookup`.
pub fn parse_monoid_element(
    text: &str,
    lookup: impl Fn(&str) -> Option<GenId>,
) -> Result<MonoidElement, MonoidError> {
    let trimmed = text.trim();
    if trimmed == "0" {
        return Ok(MonoidElement::zero());
    }
    let mut pairs = Vec::new();
    let mut offset = 0;
    for term in text.split('+') {
        let column = offset + 1 + (term.len() - term.trim_start().len());
        offset += term.len() + 1;
        let toks: Vec<&str> = term.split_whitespace().collect();
        let (count, name) = match toks.as_slice() {
            [name] => (1, *name),
            [k, name] => {
                let k: u32 = k.parse().map_err(|_| MonoidError::Parse {
                    column,
                    message: format!("expected a multiplicity, found `{k}`"),
                })?;
                (k, *name)
            }
            [] => {
                return Err(MonoidError::Parse {
                    column,
                    message: "empty term".into(),
                })
            }
            _ => {
                return Err(MonoidError::Parse {
                    column,
                    message: format!("expected `[count] name`, found `{}`", term.trim()),
                })
            }
        };
        if !name.chars().all(|c| is_name_char(c) || c == '-') {
            return Err(MonoidError::Parse {
                column,
                message: format!("bad generator name `{name}`"),
            });
        }
        let g = lookup(name).ok_or_else(|| MonoidError::UnknownGenerator(name.to_string()))?;
        pairs.push((g, count));
    }
    Ok(MonoidElement::from_pairs(pairs))
}

fn format_with<'a>(x: &MonoidElement, name: impl Fn(GenId) -> &'a str) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.terms()
        .iter()
        .map(|&(g, k)| {
            if k == 1 {
                name(g).to_string()
            } else {
                format!("{k} {}", name(g))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{e_mn, fixture};

    #[test]
    fn e23_presentation_has_the_two_relations() {
        let p = presentation_of(&e_mn(2, 3));
        assert_eq!(p.generator_count(), 2);
        let rels: Vec<String> = p
            .relations()
            .map(|(v, b)| format!("{} = {}", p.graph().vertex_name(v), p.format(p.block_sum(b))))
            .collect();
        assert_eq!(rels, vec!["v = 3 w", "v = 2 w"]);
    }

    #[test]
    fn nonseparative_relations() {
        let p = presentation_of(&fixture("nonseparative").unwrap());
        let mut rels: Vec<String> = p.relations().map(|(_, b)| p.format(p.block_sum(b))).collect();
        rels.sort();
        assert_eq!(rels, vec!["2 x", "2 y", "x + y"]);
    }

    #[test]
    fn q_generators_for_blocks_outside_s() {
        let p = presentation_of(&fixture("cohn-pair").unwrap());
        assert_eq!(p.generator_count(), 4);
        let x = p.parse("v + 2 w + q.X").unwrap();
        assert_eq!(p.format(&x), "v + 2 w + q.X");
        assert!(p.parse("v + 2 nope").is_err());
        assert!(p.parse("v + + w").is_err());
        assert_eq!(p.parse("0").unwrap(), MonoidElement::zero());
    }

    #[test]
    fn forward_and_backward_steps() {
        let p = presentation_of(&e_mn(2, 3));
        let v = p.parse("v").unwrap();
        let succ: Vec<String> = p.forward_steps(&v).iter().map(|s| p.format(&s.1)).collect();
        assert_eq!(succ, vec!["3 w", "2 w"]);
        let w = p.parse("w").unwrap();
        assert!(p.forward_steps(&w).is_empty());
        let five = p.parse("5 w").unwrap();
        let back: Vec<String> = p.backward_steps(&five).iter().map(|s| p.format(&s.1)).collect();
        assert_eq!(back, vec!["v + 2 w", "v + 3 w"]);
        let three_v = p.parse("3 v").unwrap();
        assert_eq!(p.forward_steps(&three_v).len(), 2);
    }

    #[test]
    fn parallel_step_matches_sequential() {
        let p = presentation_of(&fixture("nonseparative").unwrap());
        let g = p.graph();
        let v = g.vertex_id("v").unwrap();
        let blocks = g.blocks_at(v).to_vec();
        let x = p.parse("2 v + x").unwrap();
        assert_eq!(p.parallel_step(&x, &[]).unwrap(), x);
        let y = p.parallel_step(&x, &[(v, blocks[0]), (v, blocks[1])]).unwrap();
        assert_eq!(y.size(), 5);
        let too_many = [(v, blocks[0]), (v, blocks[1]), (v, blocks[2])];
        assert!(matches!(
            p.parallel_step(&x, &too_many),
            Err(MonoidError::NotEnoughOccurrences(_))
        ));
        let xv = g.vertex_id("x").unwrap();
        assert!(matches!(
            p.parallel_step(&x, &[(xv, blocks[0])]),
            Err(MonoidError::SinkChoice(_))
        ));
    }

    #[test]
    fn element_arithmetic() {
        let a = MonoidElement::from_pairs([(GenId(1), 2), (GenId(0), 1), (GenId(1), 1)]);
        assert_eq!(a.terms(), &[(GenId(0), 1), (GenId(1), 3)]);
        let b = MonoidElement::gen(GenId(1));
        assert_eq!(a.checked_sub(&b).unwrap().size(), 3);
        assert!(b.checked_sub(&a).is_none());
        assert_eq!(a.meet(&b), b);
        assert_eq!(a.plus(&b).multiplicity(GenId(1)), 4);
        assert!(a.scaled(2).all_divisible_by(2));
    }
}
