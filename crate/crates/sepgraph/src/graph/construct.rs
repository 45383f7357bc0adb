use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{BlockId, EdgeId, GraphBuilder, GraphError, GraphItem, GraphMorphism, SeparatedGraph, VertexId};

/// The finite complete subobject generated by `items`, with its inclusion.
///
/// Edges of `items` pull in their endpoints; an S-block meeting `items` is
/// taken whole, other blocks are cut down to the chosen edges.
pub fn finite_complete_subobject(
    g: &Arc<SeparatedGraph>,
    items: &[GraphItem],
) -> Result<(SeparatedGraph, GraphMorphism), GraphError> {
    if items.is_empty() {
        return Err(GraphError::EmptyItems);
    }
    let mut a_vertices = BTreeSet::new();
    let mut a_edges = BTreeSet::new();
    for &it in items {
        match it {
            GraphItem::Vertex(v) if v.index() < g.vertex_count() => {
                a_vertices.insert(v);
            }
            GraphItem::Edge(e) if e.index() < g.edge_count() => {
                a_edges.insert(e);
            }
            GraphItem::Vertex(v) => return Err(GraphError::UnknownVertex(format!("#{}", v.0))),
            GraphItem::Edge(e) => return Err(GraphError::UnknownEdge(format!("#{}", e.0))),
        }
    }
    let mut f_edges: BTreeSet<EdgeId> = a_edges.clone();
    for b in g.block_ids() {
        let blk = g.block(b);
        if blk.in_s && blk.edges.iter().any(|e| a_edges.contains(e)) {
            f_edges.extend(blk.edges.iter().copied());
        }
    }
    let mut f_vertices: BTreeSet<VertexId> = a_vertices;
    for &e in &f_edges {
        f_vertices.insert(g.source(e));
        f_vertices.insert(g.range(e));
    }

    let mut b = GraphBuilder::new(&format!("{}.sub", g.name()));
    for &v in &f_vertices {
        b.vertex(g.vertex_name(v));
    }
    for &e in &f_edges {
        b.edge(
            g.edge_name(e),
            g.vertex_name(g.source(e)),
            g.vertex_name(g.range(e)),
        );
    }
    let mut s = Vec::new();
    for blk_id in g.block_ids() {
        let blk = g.block(blk_id);
        let kept: Vec<&str> = blk
            .edges
            .iter()
            .filter(|e| f_edges.contains(e))
            .map(|&e| g.edge_name(e))
            .collect();
        if kept.is_empty() {
            continue;
        }
        b.block(g.vertex_name(blk.vertex), &blk.name, &kept);
        if blk.in_s {
            s.push(blk.name.clone());
        }
    }
    b.s_named(s);
    let sub = b.build()?;
    let inclusion = GraphMorphism::by_names(Arc::new(sub.clone()), g.clone())?;
    Ok((sub, inclusion))
}

/// A vertex of the (C,S)-extension: an original vertex or a block outside `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XeNode {
    Vertex(VertexId),
    Block(BlockId),
}

/// The plain directed graph obtained by adding a vertex per block outside `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsExtension {
    /// Original vertices first, then the blocks outside `S`.
    pub nodes: Vec<XeNode>,
    /// Pairs of indices into `nodes`.
    pub edges: Vec<(usize, usize)>,
}

impl CsExtension {
    pub fn index_of(&self, node: XeNode) -> Option<usize> {
        self.nodes.iter().position(|&n| n == node)
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == i).map(|e| e.1)
    }
}

pub fn cs_extension(g: &SeparatedGraph) -> CsExtension {
    let mut nodes: Vec<XeNode> = g.vertex_ids().map(XeNode::Vertex).collect();
    let mut edges: Vec<(usize, usize)> = g
        .edge_ids()
        .map(|e| (g.source(e).index(), g.range(e).index()))
        .collect();
    for b in g.block_ids().filter(|&b| !g.in_s(b)) {
        edges.push((g.block(b).vertex.index(), nodes.len()));
        nodes.push(XeNode::Block(b));
    }
    CsExtension { nodes, edges }
}

fn fresh(base: String, taken: &mut BTreeSet<String>) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

/// Adjoins a sink `w@X` and an edge `f@X` into it for every block `X` outside `S`,
/// then declares every block to be in `S`.
///
/// Returns the new graph and the map from each such block to its new sink.
pub fn remove_s(g: &SeparatedGraph) -> (SeparatedGraph, BTreeMap<BlockId, VertexId>) {
    let mut vertex_names: BTreeSet<String> = g.vertex_ids().map(|v| g.vertex_name(v).to_string()).collect();
    let mut edge_names: BTreeSet<String> = g.edge_ids().map(|e| g.edge_name(e).to_string()).collect();
    let mut b2 = GraphBuilder::new(g.name());
    let mut added = Vec::new();
    for v in g.vertex_ids() {
        b2.vertex(g.vertex_name(v));
    }
    for e in g.edge_ids() {
        b2.edge(
            g.edge_name(e),
            g.vertex_name(g.source(e)),
            g.vertex_name(g.range(e)),
        );
    }
    for blk_id in g.block_ids() {
        let blk = g.block(blk_id);
        let mut es: Vec<String> = blk.edges.iter().map(|&e| g.edge_name(e).to_string()).collect();
        if !blk.in_s {
            let w = fresh(format!("w@{}", blk.name), &mut vertex_names);
            let f = fresh(format!("f@{}", blk.name), &mut edge_names);
            b2.vertex(&w);
            b2.edge(&f, g.vertex_name(blk.vertex), &w);
            es.push(f);
            added.push((blk_id, w));
        }
        let refs: Vec<&str> = es.iter().map(String::as_str).collect();
        b2.block(g.vertex_name(blk.vertex), &blk.name, &refs);
    }
    b2.s_all();
    let out = b2.build().expect("adjoining fresh sinks keeps the graph valid");
    let dict = added
        .into_iter()
        .map(|(blk, w)| (blk, out.vertex_id(&w).expect("sink was added")))
        .collect();
    (out, dict)
}

#[cfg(test)]
mod tests {
    use super::super::{check_morphism, parse_graph};
    use super::*;

    const E23: &str = "graph E23\nvertex v w\nedge a1 : v -> w\nedge a2 : v -> w\nedge a3 : v -> w\nedge b1 : v -> w\nedge b2 : v -> w\npartition v { A = a1 a2 a3 ; B = b1 b2 }\n";

    #[test]
    fn subobject_of_one_edge_takes_its_s_block() {
        let g = Arc::new(parse_graph(E23).unwrap());
        let a1 = g.edge_id("a1").unwrap();
        let (sub, inc) = finite_complete_subobject(&g, &[GraphItem::Edge(a1)]).unwrap();
        assert_eq!(sub.edge_count(), 3);
        assert_eq!(sub.block_count(), 1);
        assert_eq!(sub.block_name(BlockId(0)), "A");
        assert!(sub.s_is_everything());
        assert!(check_morphism(&inc).passed());
    }

    #[test]
    fn subobject_of_everything_is_the_graph() {
        let g = Arc::new(parse_graph(E23).unwrap());
        let items: Vec<GraphItem> = g
            .vertex_ids()
            .map(GraphItem::Vertex)
            .chain(g.edge_ids().map(GraphItem::Edge))
            .collect();
        let (sub, _) = finite_complete_subobject(&g, &items).unwrap();
        assert_eq!(sub.renamed(g.name()), *g);
    }

    #[test]
    fn subobject_of_a_sink() {
        let g = Arc::new(parse_graph(E23).unwrap());
        let w = g.vertex_id("w").unwrap();
        let (sub, _) = finite_complete_subobject(&g, &[GraphItem::Vertex(w)]).unwrap();
        assert_eq!((sub.vertex_count(), sub.edge_count()), (1, 0));
    }

    #[test]
    fn extension_adds_block_vertices() {
        let text = "vertex v x y\nedge e1 : v -> x\nedge e2 : v -> x\nedge e3 : v -> x\nedge f1 : v -> y\nedge f2 : v -> y\nedge f3 : v -> y\npartition v { X = e1 e2 ; Y = f1 f2 ; Z = e3 f3 }\n";
        let sc = parse_graph(text).unwrap();
        assert_eq!(cs_extension(&sc).nodes.len(), 3);
        let none = parse_graph(&format!("{text}s -\n")).unwrap();
        let xe = cs_extension(&none);
        assert_eq!((xe.nodes.len(), xe.edges.len()), (6, 9));
    }

    #[test]
    fn remove_s_adds_sinks_and_is_idempotent() {
        let g = parse_graph("vertex v\nedge e : v -> v\nedge f : v -> v\npartition v { X = e f }\ns -\n")
            .unwrap();
        let (h, dict) = remove_s(&g);
        assert_eq!((h.vertex_count(), h.edge_count()), (2, 3));
        assert_eq!(h.block(BlockId(0)).edges.len(), 3);
        assert!(h.s_is_everything());
        assert_eq!(dict.len(), 1);
        let (h2, dict2) = remove_s(&h);
        assert_eq!(h2, h);
        assert!(dict2.is_empty());
    }
}
