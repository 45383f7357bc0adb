//! Word problem, Assumption (*) and one-step images.

use std::cell::OnceCell;
use std::collections::{HashMap, HashSet};

use super::{Direction, MonoidElement, MonoidPresentation, Step};
use crate::graph::{BlockId, VertexId};
use crate::lattice::{generated_pair, AdmissiblePair};

/// Search limits. An element larger than `max_size` is never visited, each
/// side of a search keeps at most `max_states` states and at most
/// `max_depth` layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_size: u64,
    pub max_states: usize,
    pub max_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_size: 64,
            max_states: 50_000,
            max_depth: 12,
        }
    }
}

impl Budget {
    /// Defaults overridden by `SEPGRAPH_MAX_SIZE`, `SEPGRAPH_MAX_STATES` and
    /// `SEPGRAPH_MAX_DEPTH` when set to positive integers.
    pub fn from_env() -> Self {
        fn var<T: std::str::FromStr>(name: &str) -> Option<T> {
            std::env::var(name).ok()?.trim().parse().ok()
        }
        let d = Budget::default();
        Budget {
            max_size: var("SEPGRAPH_MAX_SIZE").filter(|&n| n > 0).unwrap_or(d.max_size),
            max_states: var("SEPGRAPH_MAX_STATES")
                .filter(|&n| n > 0)
                .unwrap_or(d.max_states),
            max_depth: var("SEPGRAPH_MAX_DEPTH")
                .filter(|&n| n > 0)
                .unwrap_or(d.max_depth),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Two rewrite traces meeting in a common element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub common: MonoidElement,
    /// Steps turning the left element into `common`.
    pub left: Vec<Step>,
    /// Steps turning the right element into `common`.
    pub right: Vec<Step>,
}

impl Witness {
    /// Replays both traces step by step.
    pub fn replays(&self, p: &MonoidPresentation, a: &MonoidElement, b: &MonoidElement) -> bool {
        p.replay(a, &self.left).as_ref() == Some(&self.common)
            && p.replay(b, &self.right).as_ref() == Some(&self.common)
    }

    pub fn is_forward(&self) -> bool {
        self.left
            .iter()
            .chain(&self.right)
            .all(|s| s.direction == Direction::Forward)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotEqualCertificate {
    /// The whole congruence class of one side, which misses the other side.
    ClassExhausted { side: Side, class: Vec<MonoidElement> },
    /// The order ideals generated by the two sides differ.
    IdealMismatch {
        left: AdmissiblePair,
        right: AdmissiblePair,
    },
}

impl NotEqualCertificate {
    /// Re-checks the certificate independently of the search.
    pub fn verify(&self, p: &MonoidPresentation, a: &MonoidElement, b: &MonoidElement) -> bool {
        match self {
            NotEqualCertificate::ClassExhausted { side, class } => {
                let (own, other) = match side {
                    Side::Left => (a, b),
                    Side::Right => (b, a),
                };
                let set: HashSet<&MonoidElement> = class.iter().collect();
                set.contains(own)
                    && !set.contains(other)
                    && class.iter().all(|x| {
                        p.forward_steps(x)
                            .iter()
                            .chain(p.backward_steps(x).iter())
                            .all(|(_, y)| set.contains(y))
                    })
            }
            NotEqualCertificate::IdealMismatch { left, right } => {
                left != right && *left == generated_pair(p, a) && *right == generated_pair(p, b)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub states: usize,
    pub pruned: bool,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqResult {
    Equal(Witness),
    NotEqual(NotEqualCertificate),
    Unknown(SearchStats),
}

impl EqResult {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqResult::Equal(_))
    }

    pub fn is_not_equal(&self) -> bool {
        matches!(self, EqResult::NotEqual(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, EqResult::Unknown(_))
    }
}

/// A word-problem solver for one presentation; caches the (*) check.
pub struct WordProblem<'p> {
    p: &'p MonoidPresentation,
    budget: Budget,
    star: OnceCell<bool>,
}

impl<'p> WordProblem<'p> {
    pub fn new(p: &'p MonoidPresentation, budget: Budget) -> Self {
        WordProblem {
            p,
            budget,
            star: OnceCell::new(),
        }
    }

    /// Records a known (*) verdict instead of computing it.
    pub fn with_star(p: &'p MonoidPresentation, budget: Budget, star: bool) -> Self {
        let cell = OnceCell::new();
        let _ = cell.set(star);
        WordProblem {
            p,
            budget,
            star: cell,
        }
    }

    pub fn star_holds(&self) -> bool {
        *self.star.get_or_init(|| check_star(self.p).passes())
    }

    pub fn eq(&self, a: &MonoidElement, b: &MonoidElement) -> EqResult {
        if a == b {
            return EqResult::Equal(Witness {
                common: a.clone(),
                left: Vec::new(),
                right: Vec::new(),
            });
        }
        let left = generated_pair(self.p, a);
        let right = generated_pair(self.p, b);
        if left != right {
            return EqResult::NotEqual(NotEqualCertificate::IdealMismatch { left, right });
        }
        if self.star_holds() {
            if let Some(w) = forward_common(self.p, a, b, self.budget) {
                return EqResult::Equal(w);
            }
        }
        bidirectional(self.p, a, b, self.budget)
    }
}

/// Decides `a ~ b` in the graph monoid within the budget.
pub fn monoid_eq(p: &MonoidPresentation, a: &MonoidElement, b: &MonoidElement, budget: Budget) -> EqResult {
    WordProblem::new(p, budget).eq(a, b)
}

/// One side of a layered search: an arena of visited states with parent links.
struct Frontier {
    nodes: Vec<(MonoidElement, usize, Option<Step>)>,
    index: HashMap<MonoidElement, usize>,
    layer: Vec<usize>,
    depth: usize,
    pruned: bool,
}

impl Frontier {
    fn new(root: &MonoidElement) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Frontier {
            nodes: vec![(root.clone(), 0, None)],
            index,
            layer: vec![0],
            depth: 0,
            pruned: false,
        }
    }

    fn path_to(&self, mut i: usize) -> Vec<Step> {
        let mut steps = Vec::new();
        while let Some(s) = self.nodes[i].2 {
            steps.push(s);
            i = self.nodes[i].1;
        }
        steps.reverse();
        steps
    }

    fn can_expand(&self, budget: &Budget) -> bool {
        !self.layer.is_empty() && self.depth < budget.max_depth
    }
}

enum Expansion {
    Met { own: usize, other: usize },
    Continue,
    OutOfStates,
}

fn expand(
    side: &mut Frontier,
    other: &Frontier,
    budget: &Budget,
    states_used: &mut usize,
    next: impl Fn(&MonoidElement) -> Vec<(Step, MonoidElement)>,
) -> Expansion {
    let layer = std::mem::take(&mut side.layer);
    let mut new_layer = Vec::new();
    for i in layer {
        let here = side.nodes[i].0.clone();
        for (step, y) in next(&here) {
            if y.size() > budget.max_size {
                side.pruned = true;
                continue;
            }
            if side.index.contains_key(&y) {
                continue;
            }
            let id = side.nodes.len();
            side.nodes.push((y.clone(), i, Some(step)));
            side.index.insert(y.clone(), id);
            if let Some(&j) = other.index.get(&y) {
                return Expansion::Met { own: id, other: j };
            }
            new_layer.push(id);
            *states_used += 1;
            if *states_used > budget.max_states {
                return Expansion::OutOfStates;
            }
        }
    }
    side.layer = new_layer;
    side.depth += 1;
    Expansion::Continue
}

fn witness_from(left: &Frontier, right: &Frontier, li: usize, ri: usize) -> Witness {
    Witness {
        common: left.nodes[li].0.clone(),
        left: left.path_to(li),
        right: right.path_to(ri),
    }
}

/// Forward-only search for `g` with `a -> g` and `b -> g`.
pub fn forward_common(
    p: &MonoidPresentation,
    a: &MonoidElement,
    b: &MonoidElement,
    budget: Budget,
) -> Option<Witness> {
    if a == b {
        return Some(Witness {
            common: a.clone(),
            left: Vec::new(),
            right: Vec::new(),
        });
    }
    let mut sides = [Frontier::new(a), Frontier::new(b)];
    let mut used = 0usize;
    loop {
        let pick = pick_side(&sides, &budget)?;
        let (first, second) = sides.split_at_mut(1);
        let (own, other) = if pick == 0 {
            (&mut first[0], &second[0])
        } else {
            (&mut second[0], &first[0])
        };
        match expand(own, other, &budget, &mut used, |x| p.forward_steps(x)) {
            Expansion::Met { own, other } => {
                return Some(if pick == 0 {
                    witness_from(&sides[0], &sides[1], own, other)
                } else {
                    witness_from(&sides[0], &sides[1], other, own)
                })
            }
            Expansion::OutOfStates => return None,
            Expansion::Continue => {}
        }
    }
}

/// The side with the smaller expandable layer.
fn pick_side(sides: &[Frontier; 2], budget: &Budget) -> Option<usize> {
    match (sides[0].can_expand(budget), sides[1].can_expand(budget)) {
        (false, false) => None,
        (true, false) => Some(0),
        (false, true) => Some(1),
        (true, true) => Some(usize::from(sides[1].layer.len() < sides[0].layer.len())),
    }
}

fn bidirectional(p: &MonoidPresentation, a: &MonoidElement, b: &MonoidElement, budget: Budget) -> EqResult {
    let neighbours = |x: &MonoidElement| {
        let mut v = p.forward_steps(x);
        v.extend(p.backward_steps(x));
        v
    };
    let mut sides = [Frontier::new(a), Frontier::new(b)];
    let mut used = 0usize;
    loop {
        for (k, s) in sides.iter().enumerate() {
            if s.layer.is_empty() && !s.pruned {
                let mut class: Vec<MonoidElement> = s.nodes.iter().map(|n| n.0.clone()).collect();
                class.sort();
                let side = if k == 0 { Side::Left } else { Side::Right };
                return EqResult::NotEqual(NotEqualCertificate::ClassExhausted { side, class });
            }
        }
        let stats = |sides: &[Frontier; 2]| SearchStats {
            states: sides[0].nodes.len() + sides[1].nodes.len(),
            pruned: sides[0].pruned || sides[1].pruned,
            depth: sides[0].depth.max(sides[1].depth),
        };
        let Some(pick) = pick_side(&sides, &budget) else {
            return EqResult::Unknown(stats(&sides));
        };
        let (first, second) = sides.split_at_mut(1);
        let (own, other) = if pick == 0 {
            (&mut first[0], &second[0])
        } else {
            (&mut second[0], &first[0])
        };
        match expand(own, other, &budget, &mut used, neighbours) {
            Expansion::Met { own, other } => {
                let w = if pick == 0 {
                    witness_from(&sides[0], &sides[1], own, other)
                } else {
                    witness_from(&sides[0], &sides[1], other, own)
                };
                return EqResult::Equal(w);
            }
            Expansion::OutOfStates => return EqResult::Unknown(stats(&sides)),
            Expansion::Continue => {}
        }
    }
}

/// All `y` with `x ~>_1 y` (each occurrence of a non-sink vertex either kept
/// or replaced by the range sum of one of its blocks). `None` if more than `cap`.
pub fn one_step_images(
    p: &MonoidPresentation,
    x: &MonoidElement,
    cap: usize,
) -> Option<HashSet<MonoidElement>> {
    let mut acc: HashSet<MonoidElement> = HashSet::from([MonoidElement::zero()]);
    for &(g, k) in x.terms() {
        let options: Vec<MonoidElement> = match p.as_vertex(g) {
            Some(v) if !p.graph().is_sink(v) => {
                let mut opts = vec![MonoidElement::gen(g)];
                opts.extend(p.graph().blocks_at(v).iter().map(|&b| p.block_sum(b).clone()));
                opts
            }
            _ => vec![MonoidElement::gen(g)],
        };
        let local = multiset_sums(&options, k);
        if acc.len().saturating_mul(local.len()) > cap {
            return None;
        }
        acc = acc
            .iter()
            .flat_map(|a| local.iter().map(move |l| a.plus(l)))
            .collect();
    }
    Some(acc)
}

/// Sums of `k` choices from `options` with repetition.
fn multiset_sums(options: &[MonoidElement], k: u32) -> Vec<MonoidElement> {
    fn go(
        options: &[MonoidElement],
        start: usize,
        left: u32,
        cur: MonoidElement,
        out: &mut Vec<MonoidElement>,
    ) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for i in start..options.len() {
            go(options, i, left - 1, cur.plus(&options[i]), out);
        }
    }
    let mut out = Vec::new();
    go(options, 0, k, MonoidElement::zero(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarVerdict {
    /// The least common one-step image.
    Common(MonoidElement),
    NoCommon,
    TooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarPair {
    pub vertex: VertexId,
    pub x: BlockId,
    pub y: BlockId,
    pub verdict: StarVerdict,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StarReport {
    pub pairs: Vec<StarPair>,
}

impl StarReport {
    /// True when every pair has a common image (vacuously for no pairs).
    pub fn passes(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| matches!(p.verdict, StarVerdict::Common(_)))
    }

    pub fn failures(&self) -> impl Iterator<Item = &StarPair> {
        self.pairs
            .iter()
            .filter(|p| !matches!(p.verdict, StarVerdict::Common(_)))
    }
}

const STAR_IMAGE_CAP: usize = 200_000;

/// Checks (*) for one pair of blocks at a vertex.
pub fn check_star_pair(p: &MonoidPresentation, x: BlockId, y: BlockId) -> StarVerdict {
    let (Some(ix), Some(iy)) = (
        one_step_images(p, p.block_sum(x), STAR_IMAGE_CAP),
        one_step_images(p, p.block_sum(y), STAR_IMAGE_CAP),
    ) else {
        return StarVerdict::TooLarge;
    };
    let (small, large) = if ix.len() <= iy.len() { (ix, iy) } else { (iy, ix) };
    small
        .into_iter()
        .filter(|g| large.contains(g))
        .min()
        .map_or(StarVerdict::NoCommon, StarVerdict::Common)
}

/// Checks (*) for every unordered pair of distinct blocks at every vertex.
pub fn check_star(p: &MonoidPresentation) -> StarReport {
    let g = p.graph();
    let mut pairs = Vec::new();
    for v in g.vertex_ids() {
        let blocks = g.blocks_at(v);
        for (i, &x) in blocks.iter().enumerate() {
            for &y in &blocks[i + 1..] {
                pairs.push(StarPair {
                    vertex: v,
                    x,
                    y,
                    verdict: check_star_pair(p, x, y),
                });
            }
        }
    }
    StarReport { pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{e_mn, fixture};
    use crate::monoid::presentation_of;

    #[test]
    fn e23_verdicts() {
        let p = presentation_of(&e_mn(2, 3));
        let (w2, w3, w) = (
            p.parse("2 w").unwrap(),
            p.parse("3 w").unwrap(),
            p.parse("w").unwrap(),
        );
        let r = monoid_eq(&p, &w2, &w3, Budget::default());
        let EqResult::Equal(wit) = &r else { panic!("{r:?}") };
        assert!(wit.replays(&p, &w2, &w3));
        let r = monoid_eq(&p, &w, &w2, Budget::default());
        let EqResult::NotEqual(cert) = &r else {
            panic!("{r:?}")
        };
        assert!(cert.verify(&p, &w, &w2));
    }

    #[test]
    fn nonseparative_verdicts() {
        let p = presentation_of(&fixture("nonseparative").unwrap());
        let e = |s: &str| p.parse(s).unwrap();
        for (a, b) in [("2 x", "x + y"), ("x + y", "2 y"), ("2 x", "2 y")] {
            assert!(monoid_eq(&p, &e(a), &e(b), Budget::default()).is_equal());
        }
        let r = monoid_eq(&p, &e("x"), &e("y"), Budget::default());
        let EqResult::NotEqual(NotEqualCertificate::ClassExhausted { class, .. }) = &r else {
            panic!("{r:?}")
        };
        assert_eq!(class.len(), 1);
    }

    #[test]
    fn ideal_invariant_separates() {
        let p = presentation_of(&fixture("csimple-plain").unwrap());
        let r = monoid_eq(
            &p,
            &p.parse("w").unwrap(),
            &p.parse("v").unwrap(),
            Budget::default(),
        );
        assert!(matches!(
            r,
            EqResult::NotEqual(NotEqualCertificate::IdealMismatch { .. })
        ));
    }

    #[test]
    fn star_on_examples() {
        let p = presentation_of(&fixture("nonseparative").unwrap());
        assert!(!check_star(&p).passes());
        let p = presentation_of(&fixture("non-refinement").unwrap());
        assert!(!check_star(&p).passes());
        let p = presentation_of(&fixture("rose2").unwrap());
        assert!(check_star(&p).passes());
        assert!(check_star(&p).pairs.is_empty());
    }

    #[test]
    fn images_include_identity() {
        let p = presentation_of(&e_mn(2, 3));
        let x = p.parse("2 v").unwrap();
        let imgs = one_step_images(&p, &x, 100).unwrap();
        // keep/3w/2w chosen twice with repetition
        assert_eq!(imgs.len(), 6);
        assert!(imgs.contains(&x));
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let p = presentation_of(&fixture("rose2").unwrap());
        let tiny = Budget {
            max_size: 2,
            max_states: 10,
            max_depth: 2,
        };
        let r = monoid_eq(&p, &p.parse("v").unwrap(), &p.parse("4 v").unwrap(), tiny);
        assert!(r.is_unknown());
    }
}
