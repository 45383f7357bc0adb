use std::collections::BTreeSet;

use crate::graph::{cs_extension, SeparatedGraph, VertexId, XeNode};

use super::{AdmissiblePair, LatticeError};

/// A subset of the vertices of the `(C,S)`-extension.
pub type XeSet = BTreeSet<XeNode>;

fn is_hereditary_xe(g: &SeparatedGraph, h: &XeSet) -> bool {
    h.iter().all(|&n| match n {
        XeNode::Block(_) => true,
        XeNode::Vertex(v) => g.blocks_at(v).iter().all(|&b| {
            if g.in_s(b) {
                g.block_ranges(b).all(|r| h.contains(&XeNode::Vertex(r)))
            } else {
                h.contains(&XeNode::Block(b)) && g.block_ranges(b).all(|r| h.contains(&XeNode::Vertex(r)))
            }
        }),
    })
}

/// `v` joins when an S-block at `v` has its ranges inside, or when a block
/// outside `S` is itself inside together with its ranges.
fn is_saturated_xe(g: &SeparatedGraph, h: &XeSet) -> bool {
    g.block_ids().all(|b| {
        let v = g.block(b).vertex;
        let ranges_in = g.block_ranges(b).all(|r| h.contains(&XeNode::Vertex(r)));
        let node_ok = g.in_s(b) || h.contains(&XeNode::Block(b));
        h.contains(&XeNode::Vertex(v)) || !(ranges_in && node_ok)
    })
}

fn closure_xe(g: &SeparatedGraph, start: impl IntoIterator<Item = XeNode>) -> XeSet {
    let xe = cs_extension(g);
    let mut h: XeSet = start.into_iter().collect();
    loop {
        let mut stack: Vec<XeNode> = h.iter().copied().collect();
        while let Some(n) = stack.pop() {
            let i = xe.index_of(n).expect("node of the extension");
            for j in xe.successors(i) {
                if h.insert(xe.nodes[j]) {
                    stack.push(xe.nodes[j]);
                }
            }
        }
        let added: Vec<XeNode> = g
            .block_ids()
            .filter(|&b| {
                let v = g.block(b).vertex;
                !h.contains(&XeNode::Vertex(v))
                    && (g.in_s(b) || h.contains(&XeNode::Block(b)))
                    && g.block_ranges(b).all(|r| h.contains(&XeNode::Vertex(r)))
            })
            .map(|b| XeNode::Vertex(g.block(b).vertex))
            .collect();
        if added.is_empty() {
            return h;
        }
        h.extend(added);
    }
}

/// All hereditary `(C,S)`-saturated subsets of the extension's vertices,
/// sorted by size then content.
pub fn xe_saturated_sets(g: &SeparatedGraph, cap: usize) -> Result<Vec<XeSet>, LatticeError> {
    let nodes = cs_extension(g).nodes;
    let mut sets: Vec<XeSet> = if nodes.len() <= 16 {
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << nodes.len()) {
            let h: XeSet = (0..nodes.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| nodes[i])
                .collect();
            if is_hereditary_xe(g, &h) && is_saturated_xe(g, &h) {
                out.push(h);
                if out.len() > cap {
                    return Err(LatticeError::TooLarge(cap));
                }
            }
        }
        out
    } else {
        closure_generated_xe(g, &nodes, cap)?
    };
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(sets)
}

fn closure_generated_xe(
    g: &SeparatedGraph,
    nodes: &[XeNode],
    cap: usize,
) -> Result<Vec<XeSet>, LatticeError> {
    let singles: Vec<XeSet> = nodes.iter().map(|&n| closure_xe(g, [n])).collect();
    let mut found: BTreeSet<XeSet> = [XeSet::new()].into();
    let mut layer = vec![XeSet::new()];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for h in &layer {
            for s in singles.iter().filter(|s| !s.is_subset(h)) {
                let joined = closure_xe(g, h.iter().chain(s).copied());
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

/// `H ↦ (H ∩ E⁰, {X ∈ H : s(X) ∉ H})`.
pub fn xe_to_pair(g: &SeparatedGraph, h: &XeSet) -> AdmissiblePair {
    let vertices: BTreeSet<VertexId> = h
        .iter()
        .filter_map(|n| match n {
            XeNode::Vertex(v) => Some(*v),
            XeNode::Block(_) => None,
        })
        .collect();
    let blocks = h
        .iter()
        .filter_map(|n| match n {
            XeNode::Block(b) if !vertices.contains(&g.block(*b).vertex) => Some(*b),
            _ => None,
        })
        .collect();
    AdmissiblePair::new(vertices, blocks)
}
