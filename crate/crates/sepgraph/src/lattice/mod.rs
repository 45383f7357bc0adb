//! Hereditary `(C,S)`-saturated sets, admissible pairs, simplicity and
//! `C`-cofinality.

mod cofinal;
mod xe;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraElement, ReductionSystem};
use crate::graph::{hereditary_closure, BlockId, SeparatedGraph, VertexId};
use crate::monoid::{GenKind, MonoidElement, MonoidPresentation};
use crate::scalar::Scalar;

pub use cofinal::{is_c_cofinal, Cofinality, MultipathPrefix};
pub use xe::{xe_saturated_sets, xe_to_pair, XeSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("enumeration exceeds the size guard of {0}")]
    TooLarge(usize),
    #[error("pair is not admissible: {0}")]
    NotAdmissible(String),
    #[error("cofinality is only defined here for S = C")]
    SNotEverything,
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("syntax: {0}")]
    Syntax(String),
}

/// An admissible pair `(H, G)`: `H` hereditary and `(C,S)`-saturated, `G` a
/// set of blocks outside `S` whose sources are outside `H` and whose ranges
/// are not all in `H`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissiblePair {
    pub h: BTreeSet<VertexId>,
    pub g: BTreeSet<BlockId>,
}

impl AdmissiblePair {
    pub fn new(h: BTreeSet<VertexId>, g: BTreeSet<BlockId>) -> Self {
        AdmissiblePair { h, g }
    }

    pub fn bottom() -> Self {
        Self::default()
    }

    pub fn top(graph: &SeparatedGraph) -> Self {
        AdmissiblePair {
            h: graph.vertex_ids().collect(),
            g: BTreeSet::new(),
        }
    }

    /// Renders as `H = {v,w}; G = {X}`.
    pub fn display<'a>(&'a self, graph: &'a SeparatedGraph) -> PairDisplay<'a> {
        PairDisplay { pair: self, graph }
    }

    /// Parses `H = {v,w}; G = {X}` (either part may be omitted).
    pub fn parse(graph: &SeparatedGraph, text: &str) -> Result<Self, LatticeError> {
        let mut pair = AdmissiblePair::default();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, body) = part
                .split_once('=')
                .ok_or_else(|| LatticeError::Syntax(format!("expected `H = {{..}}` in `{part}`")))?;
            let body = body.trim();
            let inner = body
                .strip_prefix('{')
                .and_then(|b| b.strip_suffix('}'))
                .ok_or_else(|| LatticeError::Syntax(format!("expected braces in `{body}`")))?;
            let names = inner.split(',').map(str::trim).filter(|n| !n.is_empty());
            match key.trim() {
                "H" => {
                    for n in names {
                        let v = graph
                            .vertex_id(n)
                            .ok_or_else(|| LatticeError::UnknownName(n.to_string()))?;
                        pair.h.insert(v);
                    }
                }
                "G" => {
                    for n in names {
                        let b = graph
                            .block_id(n)
                            .ok_or_else(|| LatticeError::UnknownName(n.to_string()))?;
                        pair.g.insert(b);
                    }
                }
                other => return Err(LatticeError::Syntax(format!("unknown part `{other}`"))),
            }
        }
        Ok(pair)
    }
}

pub struct PairDisplay<'a> {
    pair: &'a AdmissiblePair,
    graph: &'a SeparatedGraph,
}

impl fmt::Display for PairDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<&str> = self.pair.h.iter().map(|&v| self.graph.vertex_name(v)).collect();
        let g: Vec<&str> = self.pair.g.iter().map(|&b| self.graph.block_name(b)).collect();
        write!(f, "H = {{{}}}; G = {{{}}}", h.join(","), g.join(","))
    }
}

pub fn is_hereditary(g: &SeparatedGraph, h: &BTreeSet<VertexId>) -> bool {
    h.iter().all(|&v| {
        g.blocks_at(v)
            .iter()
            .all(|&b| g.block_ranges(b).all(|r| h.contains(&r)))
    })
}

/// `v` is in `H` whenever some S-block at `v` has all its ranges in `H`.
pub fn is_cs_saturated(g: &SeparatedGraph, h: &BTreeSet<VertexId>) -> bool {
    g.block_ids()
        .all(|b| !g.in_s(b) || h.contains(&g.block(b).vertex) || !g.block_ranges(b).all(|r| h.contains(&r)))
}

/// `G(H)`: blocks outside `S` with at least one range outside `H`.
pub fn g_of_h(g: &SeparatedGraph, h: &BTreeSet<VertexId>) -> BTreeSet<BlockId> {
    g.block_ids()
        .filter(|&b| !g.in_s(b) && g.block_ranges(b).any(|r| !h.contains(&r)))
        .collect()
}

/// `C[H]`: the blocks based at vertices of `H`.
pub fn blocks_over(g: &SeparatedGraph, h: &BTreeSet<VertexId>) -> BTreeSet<BlockId> {
    h.iter().flat_map(|&v| g.blocks_at(v).iter().copied()).collect()
}

/// Adds `v` while some S-block at `v` has all ranges in the set. No
/// hereditary re-closure happens here.
pub fn cs_saturate(g: &SeparatedGraph, start: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let mut h = start.clone();
    loop {
        let added: Vec<VertexId> = g
            .block_ids()
            .filter(|&b| g.in_s(b))
            .filter(|&b| !h.contains(&g.block(b).vertex) && g.block_ranges(b).all(|r| h.contains(&r)))
            .map(|b| g.block(b).vertex)
            .collect();
        if added.is_empty() {
            return h;
        }
        h.extend(added);
    }
}

/// The smallest hereditary `(C,S)`-saturated superset of `start`.
pub fn saturation_closure(
    g: &SeparatedGraph,
    start: impl IntoIterator<Item = VertexId>,
) -> BTreeSet<VertexId> {
    closure_with_q(g, start, &BTreeSet::new())
}

/// Closure under heredity, saturation, and the rule that `v` joins when a
/// block `X` at `v` outside `S` has `q'_X` in the ideal and `r(X)` inside.
fn closure_with_q(
    g: &SeparatedGraph,
    start: impl IntoIterator<Item = VertexId>,
    q_blocks: &BTreeSet<BlockId>,
) -> BTreeSet<VertexId> {
    let mut h = hereditary_closure(g, start);
    loop {
        let added: Vec<VertexId> = g
            .block_ids()
            .filter(|&b| g.in_s(b) || q_blocks.contains(&b))
            .filter(|&b| !h.contains(&g.block(b).vertex) && g.block_ranges(b).all(|r| h.contains(&r)))
            .map(|b| g.block(b).vertex)
            .collect();
        if added.is_empty() {
            return h;
        }
        h = hereditary_closure(g, h.into_iter().chain(added));
    }
}

/// The admissible pair of the order ideal generated by vertices and
/// `q'`-blocks.
pub fn generated_pair_of(
    g: &SeparatedGraph,
    vertices: impl IntoIterator<Item = VertexId>,
    q_blocks: &BTreeSet<BlockId>,
) -> AdmissiblePair {
    let h = closure_with_q(g, vertices, q_blocks);
    let gs = q_blocks
        .iter()
        .copied()
        .filter(|&b| !h.contains(&g.block(b).vertex))
        .collect();
    AdmissiblePair { h, g: gs }
}

/// The admissible pair of the order ideal generated by an element.
pub fn generated_pair(p: &MonoidPresentation, x: &MonoidElement) -> AdmissiblePair {
    let mut vs = Vec::new();
    let mut qs = BTreeSet::new();
    for gen in x.support() {
        match p.kind(gen) {
            GenKind::Vertex(v) => vs.push(v),
            GenKind::Q(b) => {
                qs.insert(b);
            }
        }
    }
    generated_pair_of(p.graph(), vs, &qs)
}

pub fn is_admissible(g: &SeparatedGraph, pair: &AdmissiblePair) -> Result<(), LatticeError> {
    if !is_hereditary(g, &pair.h) {
        return Err(LatticeError::NotAdmissible("H is not hereditary".into()));
    }
    if !is_cs_saturated(g, &pair.h) {
        return Err(LatticeError::NotAdmissible("H is not (C,S)-saturated".into()));
    }
    let allowed = g_of_h(g, &pair.h);
    if let Some(b) = pair.g.iter().find(|b| !allowed.contains(b)) {
        return Err(LatticeError::NotAdmissible(format!(
            "block `{}` is not in G(H)",
            g.block_name(*b)
        )));
    }
    Ok(())
}

/// Default guard for lattice enumeration.
pub const DEFAULT_LATTICE_CAP: usize = 1 << 16;

/// All hereditary `(C,S)`-saturated vertex sets, sorted by size then content.
///
/// Up to 16 vertices this filters every subset; beyond, it closes unions of
/// singleton closures until no new set appears.
pub fn hereditary_saturated_sets(
    g: &SeparatedGraph,
    cap: usize,
) -> Result<Vec<BTreeSet<VertexId>>, LatticeError> {
    let mut sets = if g.vertex_count() <= 16 {
        filter_all_subsets(g, cap)?
    } else {
        closure_generated(g, cap)?
    };
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(sets)
}

fn filter_all_subsets(g: &SeparatedGraph, cap: usize) -> Result<Vec<BTreeSet<VertexId>>, LatticeError> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let h: BTreeSet<VertexId> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(VertexId::from)
            .collect();
        if is_hereditary(g, &h) && is_cs_saturated(g, &h) {
            out.push(h);
            if out.len() > cap {
                return Err(LatticeError::TooLarge(cap));
            }
        }
    }
    Ok(out)
}

/// Every hereditary saturated set is the closure of the union of the
/// singleton closures of its members, so joins of singleton closures
/// generate the whole family.
pub fn closure_generated(g: &SeparatedGraph, cap: usize) -> Result<Vec<BTreeSet<VertexId>>, LatticeError> {
    let singles: Vec<BTreeSet<VertexId>> = g.vertex_ids().map(|v| saturation_closure(g, [v])).collect();
    let mut found: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
    found.insert(BTreeSet::new());
    let mut layer: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new()];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for h in &layer {
            for s in &singles {
                if s.is_subset(h) {
                    continue;
                }
                let joined = saturation_closure(g, h.iter().chain(s).copied());
                if found.insert(joined.clone()) {
                    if found.len() > cap {
                        return Err(LatticeError::TooLarge(cap));
                    }
                    next.push(joined);
                }
            }
        }
        layer = next;
    }
    Ok(found.into_iter().collect())
}

/// Every admissible pair, sorted by `(|H|, H, |G|, G)`.
pub fn enumerate_admissible_pairs(
    g: &SeparatedGraph,
    cap: usize,
) -> Result<Vec<AdmissiblePair>, LatticeError> {
    let mut out = Vec::new();
    for h in hereditary_saturated_sets(g, cap)? {
        let avail: Vec<BlockId> = g_of_h(g, &h).into_iter().collect();
        if avail.len() >= 32 || out.len() + (1usize << avail.len()) > cap {
            return Err(LatticeError::TooLarge(cap));
        }
        for mask in 0u32..(1u32 << avail.len()) {
            let gs = (0..avail.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| avail[i])
                .collect();
            out.push(AdmissiblePair { h: h.clone(), g: gs });
        }
    }
    out.sort_by(|a, b| (a.h.len(), &a.h, a.g.len(), &a.g).cmp(&(b.h.len(), &b.h, b.g.len(), &b.g)));
    Ok(out)
}

/// `(H1,G1) <= (H2,G2)` iff `H1 ⊆ H2` and `G1 ⊆ G2 ∪ C[H2]`.
pub fn pair_leq(g: &SeparatedGraph, a: &AdmissiblePair, b: &AdmissiblePair) -> bool {
    a.h.is_subset(&b.h)
        && a.g
            .iter()
            .all(|x| b.g.contains(x) || b.h.contains(&g.block(*x).vertex))
}

/// Infimum of a nonempty family: `H = ∩ H_i`, `G = G(H) ∩ ∩ (G_i ∪ C[H_i])`.
/// The empty family yields the top pair.
pub fn pair_inf(g: &SeparatedGraph, pairs: &[AdmissiblePair]) -> AdmissiblePair {
    let Some(first) = pairs.first() else {
        return AdmissiblePair::top(g);
    };
    let h: BTreeSet<VertexId> = pairs.iter().skip(1).fold(first.h.clone(), |acc, p| {
        acc.intersection(&p.h).copied().collect()
    });
    let gs = g_of_h(g, &h)
        .into_iter()
        .filter(|&x| {
            pairs
                .iter()
                .all(|p| p.g.contains(&x) || p.h.contains(&g.block(x).vertex))
        })
        .collect();
    AdmissiblePair { h, g: gs }
}

/// Supremum: the pair of the order ideal generated by all the generators of
/// the family.
pub fn pair_sup(g: &SeparatedGraph, pairs: &[AdmissiblePair]) -> AdmissiblePair {
    let vs: Vec<VertexId> = pairs.iter().flat_map(|p| p.h.iter().copied()).collect();
    let qs: BTreeSet<BlockId> = pairs.iter().flat_map(|p| p.g.iter().copied()).collect();
    generated_pair_of(g, vs, &qs)
}

/// Generators `H ⊔ {q'_X : X ∈ G}` of the order ideal of a pair.
pub fn order_ideal_generators(p: &MonoidPresentation, pair: &AdmissiblePair) -> Vec<MonoidElement> {
    let mut out: Vec<MonoidElement> = pair
        .h
        .iter()
        .map(|&v| MonoidElement::gen(p.vertex_gen(v)))
        .collect();
    out.extend(pair.g.iter().filter_map(|&b| p.q_gen(b)).map(MonoidElement::gen));
    out
}

/// Generators of the trace ideal of a pair: the vertices of `H` and the
/// normalized idempotents `q_X` for `X` in `G`.
pub fn trace_ideal_generators<K: Scalar>(
    rs: &ReductionSystem<'_>,
    pair: &AdmissiblePair,
) -> Vec<AlgebraElement<K>> {
    let g = rs.graph();
    let mut out: Vec<AlgebraElement<K>> = pair.h.iter().map(|&v| AlgebraElement::vertex(v)).collect();
    for &b in &pair.g {
        let blk = g.block(b);
        let q = rs
            .q_idempotent::<K>(blk.vertex, &blk.edges)
            .expect("block edges lie in one block");
        out.push(q);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonSimpleWitness {
    /// A block outside `S`.
    BlockOutsideS(BlockId),
    /// A proper nonempty hereditary `(C,S)`-saturated set.
    ProperSubset(BTreeSet<VertexId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    NotSimple(NonSimpleWitness),
}

/// Simple iff `S = C` and the closure of every single vertex is everything.
pub fn is_simple(g: &SeparatedGraph) -> Simplicity {
    if let Some(b) = g.block_ids().find(|&b| !g.in_s(b)) {
        return Simplicity::NotSimple(NonSimpleWitness::BlockOutsideS(b));
    }
    for v in g.vertex_ids() {
        let h = saturation_closure(g, [v]);
        if h.len() != g.vertex_count() {
            return Simplicity::NotSimple(NonSimpleWitness::ProperSubset(h));
        }
    }
    Simplicity::Simple
}

/// Hasse diagram of a list of pairs in DOT, nodes labelled by their pair.
pub fn hasse_dot(g: &SeparatedGraph, pairs: &[AdmissiblePair]) -> String {
    let mut out = format!("digraph \"lattice {}\" {{\n  rankdir=BT;\n", g.name());
    for (i, p) in pairs.iter().enumerate() {
        out.push_str(&format!("  p{i} [label=\"{}\"];\n", p.display(g)));
    }
    for (i, a) in pairs.iter().enumerate() {
        for (j, b) in pairs.iter().enumerate() {
            if i == j || !pair_leq(g, a, b) || a == b {
                continue;
            }
            let covered = pairs
                .iter()
                .enumerate()
                .any(|(k, c)| k != i && k != j && c != a && c != b && pair_leq(g, a, c) && pair_leq(g, c, b));
            if !covered {
                out.push_str(&format!("  p{i} -> p{j};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{e_mn, fixture};

    fn names(g: &SeparatedGraph, h: &BTreeSet<VertexId>) -> Vec<String> {
        h.iter().map(|&v| g.vertex_name(v).to_string()).collect()
    }

    #[test]
    fn csimple_closure_pulls_in_v() {
        let g = fixture("csimple").unwrap();
        let w = g.vertex_id("w").unwrap();
        assert_eq!(names(&g, &saturation_closure(&g, [w])), vec!["v", "w"]);
        let plain = fixture("csimple-plain").unwrap();
        let w = plain.vertex_id("w").unwrap();
        assert_eq!(names(&plain, &saturation_closure(&plain, [w])), vec!["w"]);
        assert!(saturation_closure(&g, []).is_empty());
    }

    #[test]
    fn csimple_lattice_has_two_pairs() {
        let g = fixture("csimple").unwrap();
        let pairs = enumerate_admissible_pairs(&g, DEFAULT_LATTICE_CAP).unwrap();
        assert_eq!(pairs, vec![AdmissiblePair::bottom(), AdmissiblePair::top(&g)]);
        assert_eq!(is_simple(&g), Simplicity::Simple);
        let plain = fixture("csimple-plain").unwrap();
        let w = plain.vertex_id("w").unwrap();
        assert_eq!(
            is_simple(&plain),
            Simplicity::NotSimple(NonSimpleWitness::ProperSubset([w].into()))
        );
    }

    #[test]
    fn sinks_give_power_set() {
        let mut b = crate::graph::GraphBuilder::new("sinks");
        b.vertex("a").vertex("b").vertex("c");
        let g = b.build().unwrap();
        assert_eq!(enumerate_admissible_pairs(&g, 100).unwrap().len(), 8);
    }

    #[test]
    fn closure_generation_matches_filter() {
        for f in crate::fixtures::fixtures() {
            let g = f.graph();
            let mut a = filter_all_subsets(&g, 1000).unwrap();
            let mut b = closure_generated(&g, 1000).unwrap();
            a.sort();
            b.sort();
            assert_eq!(a, b, "{}", f.name);
        }
    }

    #[test]
    fn inf_and_sup_on_cohn_pair() {
        let g = fixture("cohn-pair").unwrap();
        let pairs = enumerate_admissible_pairs(&g, 100).unwrap();
        for a in &pairs {
            for b in &pairs {
                let inf = pair_inf(&g, &[a.clone(), b.clone()]);
                assert!(pair_leq(&g, &inf, a) && pair_leq(&g, &inf, b));
                let sup = pair_sup(&g, &[a.clone(), b.clone()]);
                assert!(pair_leq(&g, a, &sup) && pair_leq(&g, b, &sup));
                assert!(pairs.contains(&inf) && pairs.contains(&sup));
            }
        }
    }

    #[test]
    fn pair_text_round_trip() {
        let g = fixture("cohn-pair").unwrap();
        let p = AdmissiblePair::parse(&g, "H = {w}; G = {X}").unwrap();
        assert_eq!(p.display(&g).to_string(), "H = {w}; G = {X}");
        assert!(is_admissible(&g, &p).is_err());
        let q = AdmissiblePair::parse(&g, "H = {}; G = {X,Y}").unwrap();
        assert!(is_admissible(&g, &q).is_ok());
    }

    #[test]
    fn e23_is_simple() {
        assert_eq!(is_simple(&e_mn(2, 3)), Simplicity::Simple);
    }

    #[test]
    fn generators_of_pairs() {
        let g = fixture("cohn-pair").unwrap();
        let p = crate::monoid::presentation_of(&g);
        let pair = AdmissiblePair::parse(&g, "G = {X}").unwrap();
        let gens = order_ideal_generators(&p, &pair);
        assert_eq!(p.format(&gens[0]), "q.X");
        let rs = ReductionSystem::new(&g);
        let alg = trace_ideal_generators::<crate::scalar::Rational>(&rs, &pair);
        assert!(!alg[0].is_zero());
    }
}
