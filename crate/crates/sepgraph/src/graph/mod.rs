//! Finitely separated graphs, their morphisms, and structural constructions.

mod construct;
mod morphism;
mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use construct::{cs_extension, finite_complete_subobject, remove_s, CsExtension, XeNode};
pub use morphism::{check_morphism, GraphMorphism, MorphismReport, MorphismViolation};
pub use parse::{is_name_char, parse_graph};
pub use print::{dot_export, print_graph};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(i as u32)
            }
        }
    };
}

id_type!(VertexId);
id_type!(EdgeId);
id_type!(BlockId);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge name `{0}`")]
    DuplicateEdge(String),
    #[error("duplicate block name `{0}`")]
    DuplicateBlock(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown block `{0}` in S")]
    UnknownBlock(String),
    #[error("block `{0}` is empty")]
    EmptyBlock(String),
    #[error("block `{block}` at `{vertex}` contains edge `{edge}` whose source is elsewhere")]
    WrongSource {
        block: String,
        vertex: String,
        edge: String,
    },
    #[error("partition of `{vertex}` is declared twice")]
    DuplicatePartition { vertex: String },
    #[error("edge `{0}` lies in two blocks")]
    EdgeInTwoBlocks(String),
    #[error("edge `{0}` lies in no block, so the blocks do not partition its source's edges")]
    EdgeWithoutBlock(String),
    #[error("item `{0}` names both a vertex and an edge")]
    AmbiguousItem(String),
    #[error("unknown item `{0}`")]
    UnknownItem(String),
    #[error("empty item set")]
    EmptyItems,
    #[error("vertex set must not be empty for this operation")]
    NoVertices,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: VertexId,
    pub range: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub vertex: VertexId,
    /// Sorted by edge name.
    pub edges: Vec<EdgeId>,
    pub in_s: bool,
}

/// A finite separated graph `(E, C, S)`.
///
/// Vertices, edges and blocks are stored sorted by name, so identifier order
/// is the canonical lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatedGraph {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    blocks: Vec<Block>,
    partition: Vec<Vec<BlockId>>,
    block_of: Vec<BlockId>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    block_index: HashMap<String, BlockId>,
}

/// Either a vertex or an edge of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphItem {
    Vertex(VertexId),
    Edge(EdgeId),
}

impl SeparatedGraph {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId::from)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId::from)
    }

    pub fn block_ids(&self) -> impl Iterator<Item = BlockId> + '_ {
        (0..self.blocks.len()).map(BlockId::from)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].name
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].source
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].range
    }

    pub fn block(&self, b: BlockId) -> &Block {
        &self.blocks[b.index()]
    }

    pub fn block_name(&self, b: BlockId) -> &str {
        &self.blocks[b.index()].name
    }

    pub fn block_of(&self, e: EdgeId) -> BlockId {
        self.block_of[e.index()]
    }

    /// The partition `C_v`, sorted by block name.
    pub fn blocks_at(&self, v: VertexId) -> &[BlockId] {
        &self.partition[v.index()]
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.partition[v.index()].is_empty()
    }

    pub fn in_s(&self, b: BlockId) -> bool {
        self.blocks[b.index()].in_s
    }

    /// True when every block lies in `S`.
    pub fn s_is_everything(&self) -> bool {
        self.blocks.iter().all(|b| b.in_s)
    }

    /// Edges leaving `v`, sorted by name.
    pub fn out_edges(&self, v: VertexId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self.partition[v.index()]
            .iter()
            .flat_map(|b| self.blocks[b.index()].edges.iter().copied())
            .collect();
        out.sort();
        out
    }

    /// Ranges of the edges in a block, with multiplicity.
    pub fn block_ranges(&self, b: BlockId) -> impl Iterator<Item = VertexId> + '_ {
        self.blocks[b.index()].edges.iter().map(|&e| self.range(e))
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn block_id(&self, name: &str) -> Option<BlockId> {
        self.block_index.get(name).copied()
    }

    pub fn require_vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_id(name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    /// Resolves a name to a vertex or an edge; a name used for both is rejected.
    pub fn item(&self, name: &str) -> Result<GraphItem, GraphError> {
        match (self.vertex_id(name), self.edge_id(name)) {
            (Some(_), Some(_)) => Err(GraphError::AmbiguousItem(name.to_string())),
            (Some(v), None) => Ok(GraphItem::Vertex(v)),
            (None, Some(e)) => Ok(GraphItem::Edge(e)),
            (None, None) => Err(GraphError::UnknownItem(name.to_string())),
        }
    }

    /// Reconstructs a builder holding this graph, for derived constructions.
    pub fn to_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::new(&self.name);
        for v in &self.vertices {
            b.vertex(v);
        }
        for e in &self.edges {
            b.edge(&e.name, self.vertex_name(e.source), self.vertex_name(e.range));
        }
        let mut s = Vec::new();
        for blk in &self.blocks {
            let edges: Vec<&str> = blk.edges.iter().map(|&e| self.edge_name(e)).collect();
            b.block(self.vertex_name(blk.vertex), &blk.name, &edges);
            if blk.in_s {
                s.push(blk.name.clone());
            }
        }
        b.s_named(s);
        b
    }

    /// A copy with another display name.
    pub fn renamed(&self, name: &str) -> SeparatedGraph {
        let mut g = self.clone();
        g.name = name.to_string();
        g
    }
}

impl fmt::Display for SeparatedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_graph(self))
    }
}

#[derive(Clone, Debug)]
enum SChoice {
    All,
    Named(Vec<String>),
}

/// Incremental construction of a [`SeparatedGraph`]; all validation happens in [`GraphBuilder::build`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    name: String,
    vertices: Vec<String>,
    edges: Vec<(String, String, String)>,
    blocks: Vec<(String, String, Vec<String>)>,
    s: SChoice,
}

impl GraphBuilder {
    /// A builder with `S = C` unless told otherwise.
    pub fn new(name: &str) -> Self {
        GraphBuilder {
            name: name.to_string(),
            vertices: Vec::new(),
            edges: Vec::new(),
            blocks: Vec::new(),
            s: SChoice::All,
        }
    }

    pub fn set_name(&mut self, name: &str) -> &mut Self {
        self.name = name.to_string();
        self
    }

    pub fn vertex(&mut self, name: &str) -> &mut Self {
        self.vertices.push(name.to_string());
        self
    }

    pub fn edge(&mut self, name: &str, source: &str, range: &str) -> &mut Self {
        self.edges
            .push((name.to_string(), source.to_string(), range.to_string()));
        self
    }

    pub fn block(&mut self, vertex: &str, name: &str, edges: &[&str]) -> &mut Self {
        self.blocks.push((
            vertex.to_string(),
            name.to_string(),
            edges.iter().map(|e| e.to_string()).collect(),
        ));
        self
    }

    pub fn s_all(&mut self) -> &mut Self {
        self.s = SChoice::All;
        self
    }

    pub fn s_none(&mut self) -> &mut Self {
        self.s = SChoice::Named(Vec::new());
        self
    }

    pub fn s_named<I: IntoIterator<Item = S>, S: Into<String>>(&mut self, names: I) -> &mut Self {
        self.s = SChoice::Named(names.into_iter().map(Into::into).collect());
        self
    }

    /// Puts every not-yet-partitioned edge of each vertex into a single block named `C.v`.
    pub fn trivial_partitions(&mut self) -> &mut Self {
        let covered: BTreeSet<&String> = self.blocks.iter().flat_map(|b| b.2.iter()).collect();
        let mut pending: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (e, s, _) in &self.edges {
            if !covered.contains(e) {
                pending.entry(s.clone()).or_default().push(e.clone());
            }
        }
        for (v, es) in pending {
            self.blocks.push((v.clone(), format!("C.{v}"), es));
        }
        self
    }

    pub fn build(&self) -> Result<SeparatedGraph, GraphError> {
        let mut vertices = self.vertices.clone();
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
        let vertex_index: HashMap<String, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId::from(i)))
            .collect();
        let lookup_v = |n: &str| {
            vertex_index
                .get(n)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(n.to_string()))
        };

        let mut raw_edges = self.edges.clone();
        raw_edges.sort();
        if let Some(w) = raw_edges.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(GraphError::DuplicateEdge(w[0].0.clone()));
        }
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (name, s, r) in &raw_edges {
            edges.push(Edge {
                name: name.clone(),
                source: lookup_v(s)?,
                range: lookup_v(r)?,
            });
        }
        let edge_index: HashMap<String, EdgeId> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.clone(), EdgeId::from(i)))
            .collect();

        let mut raw_blocks = self.blocks.clone();
        raw_blocks.sort_by(|a, b| a.1.cmp(&b.1));
        if let Some(w) = raw_blocks.windows(2).find(|w| w[0].1 == w[1].1) {
            return Err(GraphError::DuplicateBlock(w[0].1.clone()));
        }
        let s_names: Option<BTreeSet<&String>> = match &self.s {
            SChoice::All => None,
            SChoice::Named(ns) => Some(ns.iter().collect()),
        };
        if let Some(ns) = &s_names {
            for n in ns {
                if !raw_blocks.iter().any(|b| &&b.1 == n) {
                    return Err(GraphError::UnknownBlock((*n).clone()));
                }
            }
        }

        let unassigned = BlockId(u32::MAX);
        let mut block_of = vec![unassigned; edges.len()];
        let mut partition = vec![Vec::new(); vertices.len()];
        let mut blocks = Vec::with_capacity(raw_blocks.len());
        for (bi, (v, name, es)) in raw_blocks.iter().enumerate() {
            let vid = lookup_v(v)?;
            if es.is_empty() {
                return Err(GraphError::EmptyBlock(name.clone()));
            }
            let mut ids = Vec::with_capacity(es.len());
            for e in es {
                let eid = *edge_index
                    .get(e)
                    .ok_or_else(|| GraphError::UnknownEdge(e.clone()))?;
                if edges[eid.index()].source != vid {
                    return Err(GraphError::WrongSource {
                        block: name.clone(),
                        vertex: v.clone(),
                        edge: e.clone(),
                    });
                }
                if block_of[eid.index()] != unassigned {
                    return Err(GraphError::EdgeInTwoBlocks(e.clone()));
                }
                block_of[eid.index()] = BlockId::from(bi);
                ids.push(eid);
            }
            ids.sort();
            partition[vid.index()].push(BlockId::from(bi));
            blocks.push(Block {
                name: name.clone(),
                vertex: vid,
                edges: ids,
                in_s: s_names.as_ref().is_none_or(|ns| ns.contains(name)),
            });
        }
        if let Some(i) = block_of.iter().position(|&b| b == unassigned) {
            return Err(GraphError::EdgeWithoutBlock(edges[i].name.clone()));
        }
        let block_index = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.name.clone(), BlockId::from(i)))
            .collect();
        Ok(SeparatedGraph {
            name: self.name.clone(),
            vertices,
            edges,
            blocks,
            partition,
            block_of,
            vertex_index,
            edge_index,
            block_index,
        })
    }
}

/// Vertices reachable from `start` along edges, including `start` itself.
pub fn hereditary_closure(
    g: &SeparatedGraph,
    start: impl IntoIterator<Item = VertexId>,
) -> BTreeSet<VertexId> {
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut stack: Vec<VertexId> = start.into_iter().collect();
    while let Some(v) = stack.pop() {
        if seen.insert(v) {
            for &b in g.blocks_at(v) {
                stack.extend(g.block_ranges(b));
            }
        }
    }
    seen
}
