use std::collections::BTreeMap;

use crate::graph::{BlockId, SeparatedGraph};
use crate::monoid::{check_star_pair, presentation_of, StarVerdict};

use super::{DeltaMatrix, ResolutionError, Triple};

/// Which pairs of blocks get resolved at each stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TriplePolicy {
    /// Both orientations of every eligible pair.
    Symmetric,
    /// One orientation per eligible pair, first block in canonical order.
    OnePerPair,
    /// Triples listed by name for each stage.
    Explicit(BTreeMap<usize, Vec<NamedTriple>>),
}

/// The multiplicity matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaPolicy {
    Ones,
    /// All entries `n!` for the triples applied at stage `n`.
    Factorial,
    /// Each explicit triple carries its own matrix.
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedTriple {
    pub vertex: String,
    pub x: String,
    pub y: String,
    pub delta: Option<DeltaMatrix>,
}

/// A plan for a staged resolution of a base graph with `S = C`.
#[derive(Clone, Debug)]
pub struct ResolutionPlan {
    pub base: SeparatedGraph,
    /// How the base graph was referenced in the plan text.
    pub base_ref: String,
    pub triples: TriplePolicy,
    pub delta: DeltaPolicy,
    pub stages: usize,
    /// Leaves out pairs for which (*) already holds.
    pub skip_star: bool,
}

fn factorial(n: usize) -> Option<u32> {
    (1..=n as u32).try_fold(1u32, |acc, k| acc.checked_mul(k))
}

impl ResolutionPlan {
    /// Parses a plan:
    ///
    /// ```text
    /// resolve BASE stages=N triples=symmetric|one-per-pair|explicit delta=ones|factorial|explicit [skip-star]
    /// triple STAGE VERTEX X Y [delta 1 2 ; 3 4]
    /// ```
    ///
    /// `load` resolves `BASE` to a graph.
    pub fn parse(
        text: &str,
        load: impl FnOnce(&str) -> Result<SeparatedGraph, ResolutionError>,
    ) -> Result<Self, ResolutionError> {
        let err = |line: usize, message: String| ResolutionError::Plan { line, message };
        let mut header: Option<(usize, Vec<&str>)> = None;
        let mut explicit: BTreeMap<usize, Vec<NamedTriple>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            match toks[0] {
                "resolve" if header.is_none() => header = Some((line, toks[1..].to_vec())),
                "resolve" => return Err(err(line, "second `resolve` line".into())),
                "triple" => {
                    let (stage, t) = parse_triple(&toks[1..]).map_err(|m| err(line, m))?;
                    explicit.entry(stage).or_default().push(t);
                }
                other => return Err(err(line, format!("unknown keyword `{other}`"))),
            }
        }
        let (line, args) = header.ok_or_else(|| err(1, "missing `resolve` line".into()))?;
        let (&base_ref, opts) = args
            .split_first()
            .ok_or_else(|| err(line, "missing base graph".into()))?;
        let mut stages = None;
        let mut triples = TriplePolicy::Symmetric;
        let mut delta = DeltaPolicy::Ones;
        let mut skip_star = false;
        for opt in opts {
            match opt.split_once('=') {
                Some(("stages", n)) => {
                    stages = Some(
                        n.parse()
                            .map_err(|_| err(line, format!("bad stage count `{n}`")))?,
                    )
                }
                Some(("triples", "symmetric" | "all")) => triples = TriplePolicy::Symmetric,
                Some(("triples", "one-per-pair")) => triples = TriplePolicy::OnePerPair,
                Some(("triples", "explicit")) => triples = TriplePolicy::Explicit(BTreeMap::new()),
                Some(("delta", "ones")) => delta = DeltaPolicy::Ones,
                Some(("delta", "factorial")) => delta = DeltaPolicy::Factorial,
                Some(("delta", "explicit")) => delta = DeltaPolicy::Explicit,
                None if *opt == "skip-star" => skip_star = true,
                _ => return Err(err(line, format!("unknown option `{opt}`"))),
            }
        }
        if let TriplePolicy::Explicit(map) = &mut triples {
            *map = explicit;
        } else if !explicit.is_empty() {
            return Err(err(line, "`triple` lines need triples=explicit".into()));
        }
        if delta == DeltaPolicy::Explicit && !matches!(triples, TriplePolicy::Explicit(_)) {
            return Err(err(line, "delta=explicit needs triples=explicit".into()));
        }
        let base = load(base_ref)?;
        if !base.s_is_everything() {
            return Err(ResolutionError::SNotEverything);
        }
        Ok(ResolutionPlan {
            base,
            base_ref: base_ref.to_string(),
            triples,
            delta,
            stages: stages.ok_or_else(|| err(line, "missing stages=N".into()))?,
            skip_star,
        })
    }

    /// The triples `T_n` applied to `g = E_n`. `is_new` tells which blocks
    /// appeared at stage `n`; a pair is eligible when one of its blocks did.
    pub fn triples_at(
        &self,
        g: &SeparatedGraph,
        n: usize,
        is_new: impl Fn(BlockId) -> bool,
    ) -> Result<Vec<Triple>, ResolutionError> {
        let mut pairs: Vec<(BlockId, BlockId, Option<DeltaMatrix>)> = Vec::new();
        match &self.triples {
            TriplePolicy::Explicit(map) => {
                for t in map.get(&n).into_iter().flatten() {
                    let v = g
                        .vertex_id(&t.vertex)
                        .ok_or_else(|| ResolutionError::UnknownName(t.vertex.clone()))?;
                    let find = |name: &str| {
                        g.block_id(name)
                            .ok_or_else(|| ResolutionError::UnknownName(name.to_string()))
                    };
                    let (x, y) = (find(&t.x)?, find(&t.y)?);
                    if g.block(x).vertex != v || g.block(y).vertex != v {
                        return Err(ResolutionError::BlockNotAtVertex {
                            vertex: t.vertex.clone(),
                            block: if g.block(x).vertex != v {
                                t.x.clone()
                            } else {
                                t.y.clone()
                            },
                        });
                    }
                    pairs.push((x, y, t.delta.clone()));
                }
            }
            policy => {
                for v in g.vertex_ids() {
                    let blocks = g.blocks_at(v);
                    for (i, &x) in blocks.iter().enumerate() {
                        for &y in &blocks[i + 1..] {
                            if !(is_new(x) || is_new(y)) {
                                continue;
                            }
                            pairs.push((x, y, None));
                            if *policy == TriplePolicy::Symmetric {
                                pairs.push((y, x, None));
                            }
                        }
                    }
                }
                pairs.sort_by_key(|&(x, y, _)| (g.block(x).vertex, x, y));
            }
        }
        if self.skip_star {
            let p = presentation_of(g);
            pairs.retain(|&(x, y, _)| !matches!(check_star_pair(&p, x, y), StarVerdict::Common(_)));
        }
        let entry = match self.delta {
            DeltaPolicy::Ones => Some(1),
            DeltaPolicy::Factorial => Some(factorial(n).ok_or(ResolutionError::Overflow(n))?),
            DeltaPolicy::Explicit => None,
        };
        pairs
            .into_iter()
            .map(|(x, y, given)| {
                let vertex = g.block(x).vertex;
                let delta = match (entry, given) {
                    (Some(d), _) => vec![vec![d; g.block(y).edges.len()]; g.block(x).edges.len()],
                    (None, Some(m)) => m,
                    (None, None) => {
                        return Err(ResolutionError::DeltaShape(g.vertex_name(vertex).to_string()))
                    }
                };
                Ok(Triple { vertex, x, y, delta })
            })
            .collect()
    }

    /// The plan header in canonical form.
    pub fn describe(&self) -> String {
        let triples = match self.triples {
            TriplePolicy::Symmetric => "symmetric",
            TriplePolicy::OnePerPair => "one-per-pair",
            TriplePolicy::Explicit(_) => "explicit",
        };
        let delta = match self.delta {
            DeltaPolicy::Ones => "ones",
            DeltaPolicy::Factorial => "factorial",
            DeltaPolicy::Explicit => "explicit",
        };
        let skip = if self.skip_star { " skip-star" } else { "" };
        format!(
            "resolve {} stages={} triples={triples} delta={delta}{skip}",
            self.base_ref, self.stages
        )
    }
}

fn parse_triple(toks: &[&str]) -> Result<(usize, NamedTriple), String> {
    let [stage, vertex, x, y, rest @ ..] = toks else {
        return Err("expected `triple STAGE VERTEX X Y`".into());
    };
    let stage = stage.parse().map_err(|_| format!("bad stage `{stage}`"))?;
    let delta = match rest {
        [] => None,
        ["delta", rows @ ..] => {
            let text = rows.join(" ");
            let matrix: Result<DeltaMatrix, String> = text
                .split(';')
                .map(|row| {
                    row.split_whitespace()
                        .map(|n| n.parse::<u32>().map_err(|_| format!("bad entry `{n}`")))
                        .collect()
                })
                .collect();
            Some(matrix?)
        }
        _ => return Err("expected `delta` after the blocks".into()),
    };
    Ok((
        stage,
        NamedTriple {
            vertex: vertex.to_string(),
            x: x.to_string(),
            y: y.to_string(),
            delta,
        },
    ))
}
