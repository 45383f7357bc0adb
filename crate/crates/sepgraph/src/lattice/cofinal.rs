use std::collections::BTreeSet;

use crate::graph::{hereditary_closure, EdgeId, SeparatedGraph, VertexId};

use super::{cs_saturate, LatticeError};

/// Upper bound on the number of paths kept in a multipath prefix.
pub const MULTIPATH_PATH_CAP: usize = 100_000;

/// A `C`-multipath of length `depth` starting at `start`: every path has
/// length exactly `depth` or ends in a sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipathPrefix {
    pub start: VertexId,
    pub depth: usize,
    /// Sorted, each a sequence of edges from `start`.
    pub paths: Vec<Vec<EdgeId>>,
}

impl MultipathPrefix {
    fn end(&self, g: &SeparatedGraph, path: &[EdgeId]) -> VertexId {
        path.last().map_or(self.start, |&e| g.range(e))
    }

    pub fn vertices(&self, g: &SeparatedGraph) -> BTreeSet<VertexId> {
        let mut out: BTreeSet<VertexId> = [self.start].into();
        out.extend(self.paths.iter().flatten().map(|&e| g.range(e)));
        out
    }

    /// Distinct truncations of length `n`, sorted.
    pub fn layer(&self, n: usize) -> Vec<Vec<EdgeId>> {
        let set: BTreeSet<Vec<EdgeId>> = self
            .paths
            .iter()
            .filter(|p| p.len() >= n)
            .map(|p| p[..n].to_vec())
            .collect();
        set.into_iter().collect()
    }

    /// Checks that every path is composable and runs to `depth` unless it
    /// hits a sink, and that every block at every reached vertex is followed.
    pub fn check(&self, g: &SeparatedGraph) -> Result<(), String> {
        if self.paths.is_empty() {
            return Err("empty collection".into());
        }
        for p in &self.paths {
            let mut at = self.start;
            for &e in p {
                if g.source(e) != at {
                    return Err(format!("path through `{}` is not composable", g.edge_name(e)));
                }
                at = g.range(e);
            }
            if p.len() != self.depth && !g.is_sink(at) {
                return Err(format!("path ending at `{}` stops early", g.vertex_name(at)));
            }
        }
        for n in 0..self.depth {
            for prefix in self.layer(n) {
                let at = self.end(g, &prefix);
                for &b in g.blocks_at(at) {
                    let extended = self
                        .paths
                        .iter()
                        .any(|p| p.len() > n && p[..n] == prefix[..] && g.block_of(p[n]) == b);
                    if !extended {
                        return Err(format!(
                            "block `{}` at depth {n} is not followed",
                            g.block_name(b)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// One line per depth, each path written as its start vertex followed
    /// by its edges.
    pub fn render(&self, g: &SeparatedGraph) -> Vec<String> {
        (0..=self.depth)
            .filter(|&n| !self.layer(n).is_empty())
            .map(|n| {
                let paths: Vec<String> = self
                    .layer(n)
                    .iter()
                    .map(|p| {
                        std::iter::once(g.vertex_name(self.start))
                            .chain(p.iter().map(|&e| g.edge_name(e)))
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                format!("depth {n}: {}", paths.join(", "))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cofinality {
    Cofinal,
    /// `h` is the hereditary set generated by `w`; no path leaves it, and the
    /// multipath avoids its saturation.
    NotCofinal {
        w: VertexId,
        h: BTreeSet<VertexId>,
        multipath: MultipathPrefix,
    },
    /// The witness multipath outgrew [`MULTIPATH_PATH_CAP`] at this depth.
    Unknown(usize),
}

/// Decides `C`-cofinality of a finite graph with `S = C`.
///
/// For each `w`, the hereditary set generated by `w` is saturated by the
/// `C`-saturation iteration alone. A vertex left outside starts a multipath
/// that avoids the saturated set, and `w` cannot reach it. When every
/// saturation is everything, every multipath meets it, so the graph is
/// cofinal. Neither direction needs condition (*).
pub fn is_c_cofinal(g: &SeparatedGraph, depth: usize) -> Result<Cofinality, LatticeError> {
    if !g.s_is_everything() {
        return Err(LatticeError::SNotEverything);
    }
    for w in g.vertex_ids() {
        let h = hereditary_closure(g, [w]);
        let sat = cs_saturate(g, &h);
        if let Some(start) = g.vertex_ids().find(|v| !sat.contains(v)) {
            return Ok(match avoiding_multipath(g, start, &sat, depth) {
                Some(multipath) => Cofinality::NotCofinal { w, h, multipath },
                None => Cofinality::Unknown(depth),
            });
        }
    }
    Ok(Cofinality::Cofinal)
}

/// Extends every non-sink path end by the least edge of each block whose
/// range avoids `avoid`. Such an edge exists because `avoid` is saturated
/// and the end lies outside it.
fn avoiding_multipath(
    g: &SeparatedGraph,
    start: VertexId,
    avoid: &BTreeSet<VertexId>,
    depth: usize,
) -> Option<MultipathPrefix> {
    let mut paths: Vec<Vec<EdgeId>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in paths {
            let at = p.last().map_or(start, |&e| g.range(e));
            if g.is_sink(at) {
                next.push(p);
                continue;
            }
            for &b in g.blocks_at(at) {
                let f = g
                    .block(b)
                    .edges
                    .iter()
                    .copied()
                    .find(|&f| !avoid.contains(&g.range(f)))
                    .expect("saturated complement always has an exit");
                let mut q = p.clone();
                q.push(f);
                next.push(q);
            }
            if next.len() > MULTIPATH_PATH_CAP {
                return None;
            }
        }
        paths = next;
    }
    paths.sort();
    Some(MultipathPrefix { start, depth, paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{e_mn, fixture};

    #[test]
    fn fork_is_not_cofinal_at_x() {
        let g = fixture("fork").unwrap();
        let Cofinality::NotCofinal { w, h, multipath } = is_c_cofinal(&g, 3).unwrap() else {
            panic!("fork must not be cofinal");
        };
        let x = g.vertex_id("x").unwrap();
        assert_eq!(w, x);
        assert_eq!(h, [x].into());
        assert_eq!(g.vertex_name(multipath.start), "y");
        multipath.check(&g).unwrap();
        assert!(multipath.vertices(&g).is_disjoint(&h));
    }

    #[test]
    fn cofinal_examples() {
        assert_eq!(is_c_cofinal(&e_mn(2, 3), 4).unwrap(), Cofinality::Cofinal);
        let g = fixture("complete3").unwrap();
        assert_eq!(is_c_cofinal(&g, 4).unwrap(), Cofinality::Cofinal);
    }

    #[test]
    fn csimple_plain_has_infinite_avoiding_multipath() {
        let g = fixture("csimple-plain").unwrap();
        let Cofinality::NotCofinal { multipath, .. } = is_c_cofinal(&g, 4).unwrap() else {
            panic!("expected a witness");
        };
        multipath.check(&g).unwrap();
        assert!(multipath.paths.iter().all(|p| p.len() == 4));
        assert_eq!(multipath.render(&g).len(), 5);
    }

    #[test]
    fn requires_s_everything() {
        let g = fixture("cohn-pair").unwrap();
        assert_eq!(is_c_cofinal(&g, 1), Err(LatticeError::SNotEverything));
    }

    #[test]
    fn check_rejects_missing_block() {
        let g = fixture("fork").unwrap();
        let v = g.vertex_id("v").unwrap();
        let e = g.edge_id("e").unwrap();
        let bad = MultipathPrefix {
            start: v,
            depth: 1,
            paths: vec![vec![e]],
        };
        assert!(bad.check(&g).is_err());
    }
}
