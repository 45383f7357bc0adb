use std::collections::BTreeSet;
use std::sync::Arc;

use super::search::{Budget, EqResult, WordProblem};
use super::{GenId, GenKind, MonoidElement, MonoidError, MonoidPresentation};
use crate::graph::{BlockId, GraphBuilder, SeparatedGraph, VertexId};
use crate::lattice::{g_of_h, is_admissible, AdmissiblePair};

/// The quotient `E/H`: vertices outside `H`, edges with both ends outside,
/// and the nonempty blocks `X/H` under the name of `X`. A quotient block is
/// in `S` when `X` is in `S` or in `G`.
pub fn quotient_graph(g: &SeparatedGraph, pair: &AdmissiblePair) -> SeparatedGraph {
    let h = &pair.h;
    let mut b = GraphBuilder::new(&format!("{}/H", g.name()));
    for v in g.vertex_ids().filter(|v| !h.contains(v)) {
        b.vertex(g.vertex_name(v));
    }
    for e in g.edge_ids() {
        if !h.contains(&g.source(e)) && !h.contains(&g.range(e)) {
            b.edge(
                g.edge_name(e),
                g.vertex_name(g.source(e)),
                g.vertex_name(g.range(e)),
            );
        }
    }
    let mut s = Vec::new();
    for x in g.block_ids() {
        let blk = g.block(x);
        if h.contains(&blk.vertex) {
            continue;
        }
        let kept: Vec<&str> = blk
            .edges
            .iter()
            .filter(|&&e| !h.contains(&g.range(e)))
            .map(|&e| g.edge_name(e))
            .collect();
        if kept.is_empty() {
            continue;
        }
        b.block(g.vertex_name(blk.vertex), &blk.name, &kept);
        if blk.in_s || pair.g.contains(&x) {
            s.push(blk.name.clone());
        }
    }
    b.s_named(s);
    b.build().expect("the quotient of a valid graph is valid")
}

/// One defining relation `v = sum(X)` pushed into the quotient.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub vertex: VertexId,
    pub block: BlockId,
    pub lhs: MonoidElement,
    pub rhs: MonoidElement,
    pub result: EqResult,
}

/// The homomorphism onto the quotient monoid and its verification.
#[derive(Clone, Debug)]
pub struct PiReport {
    pub quotient: MonoidPresentation,
    /// Image of each generator of the source presentation, by index.
    pub images: Vec<MonoidElement>,
    pub checks: Vec<RelationCheck>,
}

impl PiReport {
    pub fn relations_hold(&self) -> bool {
        self.checks.iter().all(|c| c.result.is_equal())
    }

    /// Generators sent to zero.
    pub fn killed(&self) -> Vec<GenId> {
        (0..self.images.len() as u32)
            .map(GenId)
            .filter(|g| self.images[g.index()].is_zero())
            .collect()
    }

    /// The generators lying in the order ideal of the pair: `H`, `q'_X` for
    /// `X` in `G`, and `q'_X` for blocks based in `H`.
    pub fn expected_killed(p: &MonoidPresentation, pair: &AdmissiblePair) -> Vec<GenId> {
        p.generators()
            .filter(|&gen| match p.kind(gen) {
                GenKind::Vertex(v) => pair.h.contains(&v),
                GenKind::Q(x) => pair.g.contains(&x) || pair.h.contains(&p.graph().block(x).vertex),
            })
            .collect()
    }

    /// Reads the pair back off the kernel: `H` is the set of vertices sent
    /// to zero, `G` the blocks of `G(H)` whose `q'` is sent to zero.
    pub fn recovered_pair(&self, p: &MonoidPresentation) -> AdmissiblePair {
        let g = p.graph();
        let h: BTreeSet<VertexId> = g
            .vertex_ids()
            .filter(|&v| self.images[p.vertex_gen(v).index()].is_zero())
            .collect();
        let gs = g_of_h(g, &h)
            .into_iter()
            .filter(|&x| p.q_gen(x).is_some_and(|q| self.images[q.index()].is_zero()))
            .collect();
        AdmissiblePair::new(h, gs)
    }
}

/// Builds the quotient presentation, the generator images and checks every
/// defining relation in the quotient.
pub fn pi_homomorphism(
    p: &MonoidPresentation,
    pair: &AdmissiblePair,
    budget: Budget,
) -> Result<PiReport, MonoidError> {
    let g = p.graph();
    is_admissible(g, pair).map_err(|e| MonoidError::NotAdmissible(e.to_string()))?;
    let quotient = MonoidPresentation::new(Arc::new(quotient_graph(g, pair)));
    let qg = quotient.graph();
    let vertex_image = |v: VertexId| -> MonoidElement {
        if pair.h.contains(&v) {
            MonoidElement::zero()
        } else {
            let qv = qg.vertex_id(g.vertex_name(v)).expect("kept vertex");
            MonoidElement::gen(quotient.vertex_gen(qv))
        }
    };
    let images: Vec<MonoidElement> = p
        .generators()
        .map(|gen| match p.kind(gen) {
            GenKind::Vertex(v) => vertex_image(v),
            GenKind::Q(x) => {
                let src = g.block(x).vertex;
                if pair.h.contains(&src) || pair.g.contains(&x) {
                    MonoidElement::zero()
                } else if g.block_ranges(x).all(|r| pair.h.contains(&r)) {
                    vertex_image(src)
                } else {
                    let qx = qg.block_id(g.block_name(x)).expect("nonempty quotient block");
                    MonoidElement::gen(quotient.q_gen(qx).expect("quotient block outside S"))
                }
            }
        })
        .collect();
    let image_of = |x: &MonoidElement| -> MonoidElement {
        x.terms().iter().fold(MonoidElement::zero(), |acc, &(gen, k)| {
            acc.plus(&images[gen.index()].scaled(k))
        })
    };
    let wp = WordProblem::new(&quotient, budget);
    let checks = p
        .relations()
        .map(|(v, x)| {
            let lhs = images[p.vertex_gen(v).index()].clone();
            let rhs = image_of(p.block_sum(x));
            let result = wp.eq(&lhs, &rhs);
            RelationCheck {
                vertex: v,
                block: x,
                lhs,
                rhs,
                result,
            }
        })
        .collect();
    Ok(PiReport {
        quotient,
        images,
        checks,
    })
}
