//! Cohn-Leavitt algebras of finite separated graphs.
//!
//! Elements are linear combinations of paths in the double graph. Composability
//! is enforced by construction, so the only explicit rewrite rules are
//! `e* f -> δ(e,f) r(e)` inside a block and `e_X e_X* -> s(e_X) - Σ e e*` for
//! blocks in `S`, where `e_X` is the chosen edge of `X`.

mod basis;
mod expr;
mod hom;
mod matrix_example;
mod reduce;
mod sample;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{EdgeId, SeparatedGraph, VertexId};
use crate::scalar::{Rational, Scalar};

pub use basis::{enumerate_basis, is_reduced_word};
pub use expr::{format_element, format_word, parse_element};
pub use hom::{
    apply_hom, cl_presentation, induced_hom, verify_hom, AlgebraHom, ClAlgebra, Generator, HomReport,
    MatrixAlgebra, NcPoly, Presentation, Ring,
};
pub use matrix_example::LeavittMatrixExample;
pub use reduce::{ReductionSystem, RewriteRule};
pub use sample::{
    confluence_check, normalize_traced, random_element, random_word, ConfluenceReport, TracedNormalForm,
    SAMPLE_COEFFICIENTS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("expression error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("`{0}` names both a vertex and an edge")]
    Ambiguous(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("coefficient is not invertible in the field")]
    BadCoefficient,
    #[error("edge set is not inside a single block at the given vertex")]
    NotInOneBlock,
    #[error("chosen edge `{0}` does not lie in an S-block")]
    BadChoice(String),
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("graphs do not match: {0}")]
    Mismatch(String),
}

/// A letter of the double graph: an edge or its ghost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Edge(EdgeId),
    Ghost(EdgeId),
}

impl Letter {
    pub fn edge(self) -> EdgeId {
        match self {
            Letter::Edge(e) | Letter::Ghost(e) => e,
        }
    }

    pub fn is_ghost(self) -> bool {
        matches!(self, Letter::Ghost(_))
    }

    pub fn star(self) -> Letter {
        match self {
            Letter::Edge(e) => Letter::Ghost(e),
            Letter::Ghost(e) => Letter::Edge(e),
        }
    }

    pub fn source(self, g: &SeparatedGraph) -> VertexId {
        match self {
            Letter::Edge(e) => g.source(e),
            Letter::Ghost(e) => g.range(e),
        }
    }

    pub fn range(self, g: &SeparatedGraph) -> VertexId {
        match self {
            Letter::Edge(e) => g.range(e),
            Letter::Ghost(e) => g.source(e),
        }
    }

    fn key(self) -> (EdgeId, bool) {
        (self.edge(), self.is_ghost())
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A path in the double graph; the empty path at `source` is the vertex itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathWord {
    source: VertexId,
    range: VertexId,
    letters: Vec<Letter>,
}

impl PathWord {
    pub fn vertex(v: VertexId) -> Self {
        PathWord {
            source: v,
            range: v,
            letters: Vec::new(),
        }
    }

    pub fn letter(g: &SeparatedGraph, l: Letter) -> Self {
        PathWord {
            source: l.source(g),
            range: l.range(g),
            letters: vec![l],
        }
    }

    /// `None` unless the letters form a nonempty composable sequence.
    pub fn from_letters(g: &SeparatedGraph, letters: Vec<Letter>) -> Option<Self> {
        let first = *letters.first()?;
        let composable = letters.windows(2).all(|w| w[0].range(g) == w[1].source(g));
        composable.then(|| PathWord {
            source: first.source(g),
            range: letters.last().unwrap().range(g),
            letters,
        })
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    // the empty path is a vertex; see `is_vertex`
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.letters.is_empty()
    }

    /// Edge letters minus ghost letters.
    pub fn degree(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| if l.is_ghost() { -1 } else { 1 })
            .sum()
    }

    /// Product in the path semigroup of the double graph; `None` means zero.
    pub fn product(&self, other: &PathWord) -> Option<PathWord> {
        if self.range != other.source {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Some(PathWord {
            source: self.source,
            range: other.range,
            letters,
        })
    }

    pub fn star(&self) -> PathWord {
        PathWord {
            source: self.range,
            range: self.source,
            letters: self.letters.iter().rev().map(|l| l.star()).collect(),
        }
    }

    /// `prefix · middle · suffix`, where the caller guarantees composability.
    fn splice(&self, at: usize, width: usize, middle: &[Letter], middle_vertex: VertexId) -> PathWord {
        let mut letters = Vec::with_capacity(self.letters.len() + middle.len());
        letters.extend_from_slice(&self.letters[..at]);
        letters.extend_from_slice(middle);
        letters.extend_from_slice(&self.letters[at + width..]);
        if letters.is_empty() {
            return PathWord::vertex(middle_vertex);
        }
        PathWord {
            source: if at == 0 && middle.is_empty() {
                middle_vertex
            } else {
                self.source
            },
            range: if at + width == self.letters.len() && middle.is_empty() {
                middle_vertex
            } else {
                self.range
            },
            letters,
        }
    }
}

impl Ord for PathWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for PathWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite linear combination of paths with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<K: Scalar = Rational> {
    terms: BTreeMap<PathWord, K>,
}

impl<K: Scalar> Default for AlgebraElement<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Scalar> AlgebraElement<K> {
    pub fn zero() -> Self {
        AlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn word(w: PathWord) -> Self {
        Self::term(w, K::one())
    }

    pub fn term(w: PathWord, c: K) -> Self {
        let mut x = Self::zero();
        x.add_term(w, c);
        x
    }

    pub fn vertex(v: VertexId) -> Self {
        Self::word(PathWord::vertex(v))
    }

    pub fn letter(g: &SeparatedGraph, l: Letter) -> Self {
        Self::word(PathWord::letter(g, l))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    // an element without terms is zero; see `is_zero`
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order (length, then lexicographic).
    pub fn terms(&self) -> impl Iterator<Item = (&PathWord, &K)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &PathWord) -> K {
        self.terms.get(w).cloned().unwrap_or_else(K::zero)
    }

    pub fn add_term(&mut self, w: PathWord, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&-K::one()))
    }

    pub fn scaled(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(w, k)| (w.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    /// Termwise product of paths without any rewriting.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if let Some(pq) = p.product(q) {
                    out.add_term(pq, a.clone() * b.clone());
                }
            }
        }
        out
    }

    pub fn star(&self) -> Self {
        AlgebraElement {
            terms: self.terms.iter().map(|(w, c)| (w.star(), c.clone())).collect(),
        }
    }

    /// Homogeneous components by degree; they sum to `self`.
    pub fn degree_split(&self) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.degree()).or_default().add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<PathWord, K> {
        self.terms
    }
}

impl<K: Scalar> FromIterator<(PathWord, K)> for AlgebraElement<K> {
    fn from_iter<I: IntoIterator<Item = (PathWord, K)>>(iter: I) -> Self {
        let mut x = Self::zero();
        for (w, c) in iter {
            x.add_term(w, c);
        }
        x
    }
}
