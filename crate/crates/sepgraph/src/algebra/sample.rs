use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlgebraElement, Letter, PathWord, ReductionSystem};
use crate::graph::SeparatedGraph;
use crate::scalar::{Rational, Scalar};

/// Coefficients drawn by [`random_element`].
pub const SAMPLE_COEFFICIENTS: [(i64, i64); 5] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2)];

/// A random walk of `0..=max_len` letters in the double graph. Walks stop
/// early at a vertex with no incident edges.
pub fn random_word(g: &SeparatedGraph, rng: &mut impl Rng, max_len: usize) -> Option<PathWord> {
    let vertices: Vec<_> = g.vertex_ids().collect();
    let mut at = *vertices.choose(rng)?;
    let len = rng.gen_range(0..=max_len);
    let mut letters = Vec::with_capacity(len);
    for _ in 0..len {
        let options: Vec<Letter> = g
            .edge_ids()
            .filter_map(|e| {
                if g.source(e) == at {
                    Some(Letter::Edge(e))
                } else if g.range(e) == at {
                    Some(Letter::Ghost(e))
                } else {
                    None
                }
            })
            .chain(
                g.edge_ids()
                    .filter(|&e| g.source(e) == at && g.range(e) == at)
                    .map(Letter::Ghost),
            )
            .collect();
        let Some(&l) = options.choose(rng) else { break };
        at = l.range(g);
        letters.push(l);
    }
    if letters.is_empty() {
        Some(PathWord::vertex(at))
    } else {
        PathWord::from_letters(g, letters)
    }
}

/// A sum of up to `terms` random words with coefficients from
/// [`SAMPLE_COEFFICIENTS`].
pub fn random_element(
    g: &SeparatedGraph,
    rng: &mut impl Rng,
    terms: usize,
    max_len: usize,
) -> AlgebraElement<Rational> {
    let mut x = AlgebraElement::zero();
    for _ in 0..rng.gen_range(1..=terms.max(1)) {
        let Some(w) = random_word(g, rng, max_len) else {
            break;
        };
        let &(n, d) = SAMPLE_COEFFICIENTS.choose(rng).expect("nonempty");
        x.add_term(w, Rational::from_ratio(n, d).expect("nonzero denominator"));
    }
    x
}

/// Result of normalizing with every rewrite checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracedNormalForm<K: Scalar = Rational> {
    pub normal_form: AlgebraElement<K>,
    pub steps: usize,
    /// Every rewrite strictly lowered the weight of each word it produced.
    pub monotone: bool,
}

/// Like [`ReductionSystem::normalize_with`], recording the weight check.
pub fn normalize_traced<K: Scalar>(
    rs: &ReductionSystem<'_>,
    x: &AlgebraElement<K>,
    mut choose: impl FnMut(&PathWord, &[usize]) -> usize,
) -> TracedNormalForm<K> {
    let mut out = AlgebraElement::zero();
    let mut steps = 0;
    let mut monotone = true;
    let mut stack: Vec<(PathWord, K)> = x.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((w, c)) = stack.pop() {
        let rs_at = rs.redexes(&w);
        if rs_at.is_empty() {
            out.add_term(w, c);
            continue;
        }
        steps += 1;
        let before = rs.weight(&w);
        for (w2, k) in rs.rewrite_at(&w, choose(&w, &rs_at)) {
            monotone &= rs.weight(&w2) < before;
            stack.push((w2, c.clone() * K::from_int(k)));
        }
    }
    TracedNormalForm {
        normal_form: out,
        steps,
        monotone,
    }
}

/// Outcome of comparing leftmost and random rewriting on sampled elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub samples: usize,
    pub agreed: usize,
    pub idempotent: usize,
    pub monotone: usize,
    /// The first sample whose two normal forms differ.
    pub first_mismatch: Option<AlgebraElement<Rational>>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.agreed == self.samples && self.idempotent == self.samples && self.monotone == self.samples
    }
}

/// Normalizes `samples` random elements (up to 3 terms, words of length at
/// most `max_len`) by the leftmost strategy and by a seeded random one.
pub fn confluence_check(g: &SeparatedGraph, seed: u64, samples: usize, max_len: usize) -> ConfluenceReport {
    let rs = ReductionSystem::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut report = ConfluenceReport {
        samples,
        agreed: 0,
        idempotent: 0,
        monotone: 0,
        first_mismatch: None,
    };
    for _ in 0..samples {
        let x = random_element(g, &mut rng, 3, max_len);
        let left = normalize_traced(&rs, &x, |_, r| r[0]);
        let random = normalize_traced(&rs, &x, |_, r| *r.choose(&mut pick).expect("nonempty"));
        if left.normal_form == random.normal_form {
            report.agreed += 1;
        } else if report.first_mismatch.is_none() {
            report.first_mismatch = Some(x.clone());
        }
        if rs.normalize(&left.normal_form) == left.normal_form {
            report.idempotent += 1;
        }
        if left.monotone && random.monotone {
            report.monotone += 1;
        }
    }
    report
}
