use std::collections::HashMap;

use crate::monoid::{Budget, EqResult, MonoidElement, MonoidPresentation, WordProblem};

use super::{Resolution, ResolutionError};

/// The image of a base element under the inclusion of a later stage: each
/// generator goes to the generator of the same name.
pub fn unitary_image(
    base: &MonoidPresentation,
    stage: &MonoidPresentation,
    x: &MonoidElement,
) -> Result<MonoidElement, ResolutionError> {
    let pairs = x
        .terms()
        .iter()
        .map(|&(g, n)| {
            let name = base.name(g);
            stage
                .generator(name)
                .map(|h| (h, n))
                .ok_or_else(|| ResolutionError::UnknownName(name.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonoidElement::from_pairs(pairs))
}

/// One pair compared in the base and again in a later stage.
#[derive(Clone, Debug)]
pub struct TransferCase {
    pub left: MonoidElement,
    pub right: MonoidElement,
    pub base: EqResult,
    pub stage: EqResult,
}

impl TransferCase {
    /// Equal pairs stay equal and unequal pairs do not become equal.
    pub fn consistent(&self) -> bool {
        match (&self.base, &self.stage) {
            (EqResult::Equal(_), s) => s.is_equal(),
            (EqResult::NotEqual(_), s) => !s.is_equal(),
            (EqResult::Unknown(_), _) => true,
        }
    }
}

/// Decides each base pair in the base and its image in the stage.
pub fn transfer_check(
    base: &MonoidPresentation,
    stage: &MonoidPresentation,
    pairs: &[(MonoidElement, MonoidElement)],
    budget: Budget,
) -> Result<Vec<TransferCase>, ResolutionError> {
    let wb = WordProblem::new(base, budget);
    let ws = WordProblem::new(stage, budget);
    pairs
        .iter()
        .map(|(a, b)| {
            let (sa, sb) = (unitary_image(base, stage, a)?, unitary_image(base, stage, b)?);
            Ok(TransferCase {
                left: a.clone(),
                right: b.clone(),
                base: wb.eq(a, b),
                stage: ws.eq(&sa, &sb),
            })
        })
        .collect()
}

/// The extension of a homomorphism from stage `n - 1` to stage `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    /// Image of every stage-`n` vertex, in vertex order.
    pub images: Vec<(String, MonoidElement)>,
    /// Relations of the previous stage checked in the target.
    pub old_relations: usize,
    /// Relations of the new blocks checked in the target.
    pub new_relations: usize,
}

/// Extends `base_map` (on the vertices of stage `n - 1`) to stage `n` by sending
/// each new vertex to its entry in `new_images`, after checking in `target` that
/// `base_map` respects the old relations and that `new_images` satisfies the equations of
/// every new block.
pub fn delta_refinement_lift(
    res: &Resolution,
    n: usize,
    target: &MonoidPresentation,
    base_map: &HashMap<String, MonoidElement>,
    new_images: &HashMap<String, MonoidElement>,
    budget: Budget,
) -> Result<LiftReport, ResolutionError> {
    assert!(n >= 1 && n < res.stages.len(), "stage {n} has no predecessor");
    let prev = &res.stage(n - 1).graph;
    let next = &res.stage(n).graph;
    let images: Vec<(String, MonoidElement)> = next
        .vertex_ids()
        .map(|v| {
            let name = next.vertex_name(v);
            let table = if prev.vertex_id(name).is_some() {
                base_map
            } else {
                new_images
            };
            table
                .get(name)
                .map(|x| (name.to_string(), x.clone()))
                .ok_or_else(|| ResolutionError::UnknownName(name.to_string()))
        })
        .collect::<Result<_, _>>()?;

    let wp = WordProblem::new(target, budget);
    let image_of = |b| -> MonoidElement {
        next.block_ranges(b)
            .fold(MonoidElement::zero(), |acc, r| acc.plus(&images[r.index()].1))
    };
    let (mut old_relations, mut new_relations) = (0, 0);
    // old blocks first, so a bad `base_map` is reported before a bad `new_images`
    let mut blocks: Vec<_> = next.block_ids().collect();
    blocks.sort_by_key(|&b| prev.block_id(next.block_name(b)).is_none());
    for b in blocks {
        let v = next.block(b).vertex;
        let (lhs, rhs) = (&images[v.index()].1, image_of(b));
        let old = prev.block_id(next.block_name(b)).is_some();
        let verdict = wp.eq(lhs, &rhs);
        if !verdict.is_equal() {
            let how = if verdict.is_unknown() {
                "could not be shown"
            } else {
                "fails"
            };
            let msg = format!(
                "relation {} = sum({}) {how} in the target: {} vs {}",
                next.vertex_name(v),
                next.block_name(b),
                target.format(lhs),
                target.format(&rhs)
            );
            return Err(if old {
                ResolutionError::NotHomomorphism(msg)
            } else {
                ResolutionError::NotRefinement(msg)
            });
        }
        if old {
            old_relations += 1;
        } else {
            new_relations += 1;
        }
    }
    Ok(LiftReport {
        images,
        old_relations,
        new_relations,
    })
}
