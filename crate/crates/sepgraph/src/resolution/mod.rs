//! Staged resolutions: each stage adjoins, for every chosen pair of blocks
//! at a vertex, a grid of new sinks through which both blocks rewrite to
//! a common element.

mod cover;
mod divisible;
mod lift;
mod plan;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{BlockId, GraphError, GraphMorphism, SeparatedGraph, VertexId};
use crate::monoid::{check_star_pair, presentation_of, MonoidError, StarVerdict};

pub use cover::{Coefficients, FreeCover, InjectivityReport, UnitaritySample};
pub use divisible::{divisibility_probe, Divisibility, DivisibilityProbe, ProbeLimits};
pub use lift::{delta_refinement_lift, transfer_check, unitary_image, LiftReport, TransferCase};
pub use plan::{DeltaPolicy, NamedTriple, ResolutionPlan, TriplePolicy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("resolutions need S = C on the base graph")]
    SNotEverything,
    #[error("triple at `{0}` uses the same block twice")]
    SameBlock(String),
    #[error("block `{block}` is not at vertex `{vertex}`")]
    BlockNotAtVertex { vertex: String, block: String },
    #[error("multiplicity matrix for the triple at `{0}` has a zero entry")]
    NonPositiveDelta(String),
    #[error("multiplicity matrix for the triple at `{0}` has the wrong shape")]
    DeltaShape(String),
    #[error("generated name `{0}` clashes with an existing name")]
    NameClash(String),
    #[error("factorial multiplicity overflows at stage {0}")]
    Overflow(usize),
    #[error("plan line {line}: {message}")]
    Plan { line: usize, message: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    NotHomomorphism(String),
    #[error("{0}")]
    NotRefinement(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// A matrix of positive multiplicities, rows indexed by the edges of the
/// first block and columns by the edges of the second, in edge order.
pub type DeltaMatrix = Vec<Vec<u32>>;

/// A triple `(v, X, Y)` of a vertex and two distinct blocks at it, with
/// its multiplicity matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub vertex: VertexId,
    pub x: BlockId,
    pub y: BlockId,
    pub delta: DeltaMatrix,
}

/// What a generated name stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NameKind {
    Vertex,
    EdgeG,
    EdgeH,
    BlockX,
    BlockY,
}

/// One row of the name table: the generated name and the data it encodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NameEntry {
    pub name: String,
    pub kind: NameKind,
    /// Stage of the triple set that produced it.
    pub stage: usize,
    /// 1-based position of the triple in canonical order.
    pub triple: usize,
    pub e: Option<String>,
    pub f: Option<String>,
    pub copy: Option<u32>,
}

impl NameEntry {
    /// A `key=value` record.
    pub fn record(&self) -> String {
        let kind = match self.kind {
            NameKind::Vertex => "vertex",
            NameKind::EdgeG => "edge-g",
            NameKind::EdgeH => "edge-h",
            NameKind::BlockX => "block-x",
            NameKind::BlockY => "block-y",
        };
        let mut s = format!(
            "name={} kind={kind} stage={} triple={}",
            self.name, self.stage, self.triple
        );
        if let Some(e) = &self.e {
            s.push_str(&format!(" e={e}"));
        }
        if let Some(f) = &self.f {
            s.push_str(&format!(" f={f}"));
        }
        if let Some(t) = self.copy {
            s.push_str(&format!(" copy={t}"));
        }
        s
    }
}

/// Builds a `δ`-`T`-resolution of `g`. New names carry `stage` and the
/// 1-based position of each triple in `triples`.
pub fn delta_t_resolution(
    g: &SeparatedGraph,
    stage: usize,
    triples: &[Triple],
) -> Result<(SeparatedGraph, Vec<NameEntry>), ResolutionError> {
    if !g.s_is_everything() {
        return Err(ResolutionError::SNotEverything);
    }
    let mut taken: BTreeSet<String> = g.vertex_ids().map(|v| g.vertex_name(v).to_string()).collect();
    taken.extend(g.edge_ids().map(|e| g.edge_name(e).to_string()));
    taken.extend(g.block_ids().map(|b| g.block_name(b).to_string()));
    let mut claim = |name: String| -> Result<String, ResolutionError> {
        if taken.insert(name.clone()) {
            Ok(name)
        } else {
            Err(ResolutionError::NameClash(name))
        }
    };

    let mut b = g.to_builder();
    let mut names = Vec::new();
    for (k0, t) in triples.iter().enumerate() {
        let k = k0 + 1;
        validate_triple(g, t)?;
        let xs = &g.block(t.x).edges;
        let ys = &g.block(t.y).edges;
        let mut x_blocks: Vec<Vec<String>> = vec![Vec::new(); xs.len()];
        let mut y_blocks: Vec<Vec<String>> = vec![Vec::new(); ys.len()];
        let entry = |name: &str, kind, i: usize, j: usize, copy| NameEntry {
            name: name.to_string(),
            kind,
            stage,
            triple: k,
            e: (i > 0).then(|| g.edge_name(xs[i - 1]).to_string()),
            f: (j > 0).then(|| g.edge_name(ys[j - 1]).to_string()),
            copy,
        };
        for (i, &e) in xs.iter().enumerate() {
            for (j, &f) in ys.iter().enumerate() {
                let v = claim(format!("v@{stage}.{k}.{}.{}", i + 1, j + 1))?;
                b.vertex(&v);
                names.push(entry(&v, NameKind::Vertex, i + 1, j + 1, None));
                for t_copy in 1..=t.delta[i][j] {
                    let suffix = format!("{stage}.{k}.{}.{}.{t_copy}", i + 1, j + 1);
                    let gname = claim(format!("g@{suffix}"))?;
                    let hname = claim(format!("h@{suffix}"))?;
                    b.edge(&gname, g.vertex_name(g.range(e)), &v);
                    b.edge(&hname, g.vertex_name(g.range(f)), &v);
                    names.push(entry(&gname, NameKind::EdgeG, i + 1, j + 1, Some(t_copy)));
                    names.push(entry(&hname, NameKind::EdgeH, i + 1, j + 1, Some(t_copy)));
                    x_blocks[i].push(gname);
                    y_blocks[j].push(hname);
                }
            }
        }
        for (i, edges) in x_blocks.iter().enumerate() {
            let name = claim(format!("X@{stage}.{k}.{}", i + 1))?;
            let refs: Vec<&str> = edges.iter().map(String::as_str).collect();
            b.block(g.vertex_name(g.range(xs[i])), &name, &refs);
            names.push(entry(&name, NameKind::BlockX, i + 1, 0, None));
        }
        for (j, edges) in y_blocks.iter().enumerate() {
            let name = claim(format!("Y@{stage}.{k}.{}", j + 1))?;
            let refs: Vec<&str> = edges.iter().map(String::as_str).collect();
            b.block(g.vertex_name(g.range(ys[j])), &name, &refs);
            names.push(entry(&name, NameKind::BlockY, 0, j + 1, None));
        }
    }
    b.s_all();
    Ok((b.build()?, names))
}

fn validate_triple(g: &SeparatedGraph, t: &Triple) -> Result<(), ResolutionError> {
    let vname = g.vertex_name(t.vertex).to_string();
    if t.x == t.y {
        return Err(ResolutionError::SameBlock(vname));
    }
    for b in [t.x, t.y] {
        if g.block(b).vertex != t.vertex {
            return Err(ResolutionError::BlockNotAtVertex {
                vertex: vname,
                block: g.block_name(b).to_string(),
            });
        }
    }
    let (rows, cols) = (g.block(t.x).edges.len(), g.block(t.y).edges.len());
    if t.delta.len() != rows || t.delta.iter().any(|r| r.len() != cols) {
        return Err(ResolutionError::DeltaShape(vname));
    }
    if t.delta.iter().flatten().any(|&d| d == 0) {
        return Err(ResolutionError::NonPositiveDelta(vname));
    }
    Ok(())
}

/// A triple recorded by names in the graph it was applied to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleRecord {
    pub vertex: String,
    pub x: String,
    pub y: String,
    pub delta: DeltaMatrix,
}

/// One materialized stage `E_n` of a staged resolution.
#[derive(Clone, Debug)]
pub struct StageGraph {
    pub index: usize,
    pub graph: Arc<SeparatedGraph>,
    /// The triples `T_{n-1}` that produced this stage (empty at stage 0).
    pub triples: Vec<TripleRecord>,
    pub names: Vec<NameEntry>,
    /// Inclusion of the previous stage (the identity at stage 0).
    pub inclusion: GraphMorphism,
}

impl StageGraph {
    /// Checks (*) in this stage for every triple that produced it.
    pub fn triple_star_verdicts(&self) -> Vec<(TripleRecord, StarVerdict)> {
        let p = presentation_of(&self.graph);
        self.triples
            .iter()
            .map(|t| {
                let x = self.graph.block_id(&t.x).expect("old block survives");
                let y = self.graph.block_id(&t.y).expect("old block survives");
                (t.clone(), check_star_pair(&p, x, y))
            })
            .collect()
    }

    /// The name-table sidecar, one record per line.
    pub fn name_table(&self) -> String {
        self.names.iter().map(|n| n.record() + "\n").collect()
    }
}

/// Stages `E_0 .. E_n` of a resolution plan, with the stage at which each
/// vertex and block first appeared.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub stages: Vec<StageGraph>,
    vertex_birth: HashMap<String, usize>,
    block_birth: HashMap<String, usize>,
}

impl Resolution {
    pub fn stage(&self, n: usize) -> &StageGraph {
        &self.stages[n]
    }

    pub fn last(&self) -> &StageGraph {
        self.stages.last().expect("stage 0 always exists")
    }

    pub fn vertex_birth(&self, name: &str) -> Option<usize> {
        self.vertex_birth.get(name).copied()
    }

    pub fn block_birth(&self, name: &str) -> Option<usize> {
        self.block_birth.get(name).copied()
    }

    /// Vertices first appearing at stage `n`, in canonical order.
    pub fn born_at(&self, n: usize) -> Vec<String> {
        let g = &self.last().graph;
        g.vertex_ids()
            .map(|v| g.vertex_name(v))
            .filter(|name| self.vertex_birth(name) == Some(n))
            .map(str::to_string)
            .collect()
    }
}

/// Builds stages `0..=n` of the plan.
pub fn resolution_stage(plan: &ResolutionPlan, n: usize) -> Result<Resolution, ResolutionError> {
    let base = Arc::new(plan.base.clone());
    if !base.s_is_everything() {
        return Err(ResolutionError::SNotEverything);
    }
    let mut vertex_birth: HashMap<String, usize> = base
        .vertex_ids()
        .map(|v| (base.vertex_name(v).to_string(), 0))
        .collect();
    let mut block_birth: HashMap<String, usize> = base
        .block_ids()
        .map(|b| (base.block_name(b).to_string(), 0))
        .collect();
    let mut stages = vec![StageGraph {
        index: 0,
        graph: base.clone(),
        triples: Vec::new(),
        names: Vec::new(),
        inclusion: GraphMorphism::identity(base),
    }];
    for s in 0..n {
        let prev = stages[s].graph.clone();
        let triples = plan.triples_at(&prev, s, |b| block_birth[prev.block_name(b)] == s)?;
        let (next, names) = delta_t_resolution(&prev, s, &triples)?;
        let next = Arc::new(next);
        for entry in &names {
            match entry.kind {
                NameKind::Vertex => {
                    vertex_birth.insert(entry.name.clone(), s + 1);
                }
                NameKind::BlockX | NameKind::BlockY => {
                    block_birth.insert(entry.name.clone(), s + 1);
                }
                NameKind::EdgeG | NameKind::EdgeH => {}
            }
        }
        let records = triples
            .iter()
            .map(|t| TripleRecord {
                vertex: prev.vertex_name(t.vertex).to_string(),
                x: prev.block_name(t.x).to_string(),
                y: prev.block_name(t.y).to_string(),
                delta: t.delta.clone(),
            })
            .collect();
        let inclusion = GraphMorphism::by_names(prev, next.clone())?;
        stages.push(StageGraph {
            index: s + 1,
            graph: next,
            triples: records,
            names,
            inclusion,
        });
    }
    Ok(Resolution {
        stages,
        vertex_birth,
        block_birth,
    })
}
