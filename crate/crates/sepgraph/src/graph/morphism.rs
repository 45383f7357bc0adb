use std::collections::BTreeSet;
use std::sync::Arc;

use super::{BlockId, EdgeId, GraphError, SeparatedGraph, VertexId};

/// A candidate morphism of separated graphs; [`check_morphism`] decides whether it is one.
#[derive(Clone, Debug)]
pub struct GraphMorphism {
    pub source: Arc<SeparatedGraph>,
    pub target: Arc<SeparatedGraph>,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    /// Map lengths do not match the source graph, or images are out of range.
    Shape,
    SourceNotPreserved {
        edge: String,
    },
    RangeNotPreserved {
        edge: String,
    },
    VerticesCollapsed {
        first: String,
        second: String,
    },
    BlockSplit {
        block: String,
    },
    BlockNotInjective {
        block: String,
    },
    SBlockLeavesS {
        block: String,
    },
    SBlockNotOnto {
        block: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismReport {
    /// `block_map[X]` is the unique target block receiving `X`.
    Pass {
        block_map: Vec<BlockId>,
    },
    Fail(MorphismViolation),
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        matches!(self, MorphismReport::Pass { .. })
    }
}

impl GraphMorphism {
    pub fn identity(g: Arc<SeparatedGraph>) -> Self {
        GraphMorphism {
            vertex_map: g.vertex_ids().collect(),
            edge_map: g.edge_ids().collect(),
            source: g.clone(),
            target: g,
        }
    }

    /// The map sending every vertex and edge to the same-named one in `target`.
    pub fn by_names(source: Arc<SeparatedGraph>, target: Arc<SeparatedGraph>) -> Result<Self, GraphError> {
        let vertex_map = source
            .vertex_ids()
            .map(|v| target.require_vertex(source.vertex_name(v)))
            .collect::<Result<_, _>>()?;
        let edge_map = source
            .edge_ids()
            .map(|e| {
                let n = source.edge_name(e);
                target
                    .edge_id(n)
                    .ok_or_else(|| GraphError::UnknownEdge(n.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok(GraphMorphism {
            source,
            target,
            vertex_map,
            edge_map,
        })
    }

    pub fn map_vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.index()]
    }

    pub fn map_edge(&self, e: EdgeId) -> EdgeId {
        self.edge_map[e.index()]
    }

    /// `self` followed by `next`; the caller guarantees `next.source` is `self.target`.
    pub fn then(&self, next: &GraphMorphism) -> GraphMorphism {
        GraphMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            vertex_map: self.vertex_map.iter().map(|&v| next.map_vertex(v)).collect(),
            edge_map: self.edge_map.iter().map(|&e| next.map_edge(e)).collect(),
        }
    }
}

/// Checks the morphism conditions in order and reports the first failure.
pub fn check_morphism(m: &GraphMorphism) -> MorphismReport {
    use MorphismViolation::*;
    let (src, tgt) = (&*m.source, &*m.target);
    if m.vertex_map.len() != src.vertex_count()
        || m.edge_map.len() != src.edge_count()
        || m.vertex_map.iter().any(|v| v.index() >= tgt.vertex_count())
        || m.edge_map.iter().any(|e| e.index() >= tgt.edge_count())
    {
        return MorphismReport::Fail(Shape);
    }
    for e in src.edge_ids() {
        let fe = m.map_edge(e);
        if tgt.source(fe) != m.map_vertex(src.source(e)) {
            return MorphismReport::Fail(SourceNotPreserved {
                edge: src.edge_name(e).to_string(),
            });
        }
        if tgt.range(fe) != m.map_vertex(src.range(e)) {
            return MorphismReport::Fail(RangeNotPreserved {
                edge: src.edge_name(e).to_string(),
            });
        }
    }
    let mut seen = vec![None; tgt.vertex_count()];
    for v in src.vertex_ids() {
        let fv = m.map_vertex(v).index();
        if let Some(prev) = seen[fv] {
            return MorphismReport::Fail(VerticesCollapsed {
                first: src.vertex_name(prev).to_string(),
                second: src.vertex_name(v).to_string(),
            });
        }
        seen[fv] = Some(v);
    }
    let mut block_map = Vec::with_capacity(src.block_count());
    for b in src.block_ids() {
        let blk = src.block(b);
        let images: Vec<EdgeId> = blk.edges.iter().map(|&e| m.map_edge(e)).collect();
        let target_block = tgt.block_of(images[0]);
        if images.iter().any(|&f| tgt.block_of(f) != target_block) {
            return MorphismReport::Fail(BlockSplit {
                block: blk.name.clone(),
            });
        }
        let distinct: BTreeSet<EdgeId> = images.iter().copied().collect();
        if distinct.len() != images.len() {
            return MorphismReport::Fail(BlockNotInjective {
                block: blk.name.clone(),
            });
        }
        if blk.in_s {
            if !tgt.in_s(target_block) {
                return MorphismReport::Fail(SBlockLeavesS {
                    block: blk.name.clone(),
                });
            }
            if tgt.block(target_block).edges.len() != images.len() {
                return MorphismReport::Fail(SBlockNotOnto {
                    block: blk.name.clone(),
                });
            }
        }
        block_map.push(target_block);
    }
    MorphismReport::Pass { block_map }
}
