use std::collections::BTreeMap;
use std::fmt;

use super::{AlgebraElement, AlgebraError, Letter, PathWord, ReductionSystem};
use crate::graph::{check_morphism, EdgeId, GraphMorphism, MorphismReport, SeparatedGraph, VertexId};
use crate::scalar::Scalar;

/// An associative algebra with decidable equality of its element representation.
pub trait Ring<K: Scalar> {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    /// The unit, when the algebra has one.
    fn one(&self) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &K) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

/// A Cohn-Leavitt algebra whose elements are kept in normal form.
#[derive(Clone, Debug)]
pub struct ClAlgebra<'g> {
    pub rs: ReductionSystem<'g>,
}

impl<'g> ClAlgebra<'g> {
    pub fn new(g: &'g SeparatedGraph) -> Self {
        ClAlgebra {
            rs: ReductionSystem::new(g),
        }
    }
}

impl<K: Scalar> Ring<K> for ClAlgebra<'_> {
    type Elem = AlgebraElement<K>;

    fn zero(&self) -> Self::Elem {
        AlgebraElement::zero()
    }

    fn one(&self) -> Option<Self::Elem> {
        let g = self.rs.graph();
        (g.vertex_count() > 0).then(|| g.vertex_ids().map(|v| (PathWord::vertex(v), K::one())).collect())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.plus(b)
    }

    fn scale(&self, a: &Self::Elem, c: &K) -> Self::Elem {
        a.scaled(c)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.rs.multiply(a, b)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
}

/// Square matrices over another ring, stored row-major.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra<R> {
    pub base: R,
    pub size: usize,
}

impl<R> MatrixAlgebra<R> {
    pub fn new(base: R, size: usize) -> Self {
        MatrixAlgebra { base, size }
    }
}

impl<R> MatrixAlgebra<R> {
    /// The matrix with `x` at `(i, j)` and zero elsewhere (zero-based).
    pub fn unit<K: Scalar>(&self, i: usize, j: usize, x: R::Elem) -> Vec<R::Elem>
    where
        R: Ring<K>,
    {
        let mut m = vec![self.base.zero(); self.size * self.size];
        m[i * self.size + j] = x;
        m
    }

    pub fn diagonal<K: Scalar>(&self, x: &R::Elem) -> Vec<R::Elem>
    where
        R: Ring<K>,
    {
        let mut m = vec![self.base.zero(); self.size * self.size];
        for i in 0..self.size {
            m[i * self.size + i] = x.clone();
        }
        m
    }
}

impl<K: Scalar, R: Ring<K>> Ring<K> for MatrixAlgebra<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.size * self.size]
    }

    fn one(&self) -> Option<Self::Elem> {
        self.base.one().map(|u| self.diagonal::<K>(&u))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn scale(&self, a: &Self::Elem, c: &K) -> Self::Elem {
        a.iter().map(|x| self.base.scale(x, c)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.size;
        let mut out = self.zero();
        for i in 0..n {
            for k in 0..n {
                let x = &a[i * n + k];
                if self.base.is_zero(x) {
                    continue;
                }
                for j in 0..n {
                    let y = &b[k * n + j];
                    if !self.base.is_zero(y) {
                        let p = self.base.mul(x, y);
                        out[i * n + j] = self.base.add(&out[i * n + j], &p);
                    }
                }
            }
        }
        out
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
}

/// A noncommutative polynomial over numbered generators; the empty monomial is the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPoly<K: Scalar> {
    terms: BTreeMap<Vec<usize>, K>,
}

impl<K: Scalar> NcPoly<K> {
    pub fn zero() -> Self {
        NcPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(gens: &[usize], c: K) -> Self {
        let mut p = Self::zero();
        p.add_term(gens.to_vec(), c);
        p
    }

    pub fn gen(i: usize) -> Self {
        Self::monomial(&[i], K::one())
    }

    pub fn add_term(&mut self, m: Vec<usize>, c: K) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(K::zero);
        *entry = entry.clone() + c;
        self.terms.retain(|_, k| !k.is_zero());
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&-K::one()))
    }

    pub fn scaled(&self, c: &K) -> Self {
        let mut out = Self::zero();
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k.clone() * c.clone());
        }
        out
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(m, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &K)> {
        self.terms.iter()
    }

    /// Substitutes `images` for the generators and evaluates in `ring`.
    pub fn evaluate<R: Ring<K>>(&self, ring: &R, images: &[R::Elem]) -> Result<R::Elem, AlgebraError> {
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut prod = match m.first() {
                None => ring
                    .one()
                    .ok_or_else(|| AlgebraError::Mismatch("target has no unit".into()))?,
                Some(&i) => images
                    .get(i)
                    .cloned()
                    .ok_or_else(|| AlgebraError::MissingImage(format!("#{i}")))?,
            };
            for &i in m.iter().skip(1) {
                let img = images
                    .get(i)
                    .ok_or_else(|| AlgebraError::MissingImage(format!("#{i}")))?;
                prod = ring.mul(&prod, img);
                if ring.is_zero(&prod) {
                    break;
                }
            }
            acc = ring.add(&acc, &ring.scale(&prod, c));
        }
        Ok(acc)
    }
}

/// An algebra given by named generators and relations `p = 0`.
#[derive(Clone, Debug)]
pub struct Presentation<K: Scalar> {
    pub generators: Vec<String>,
    pub relations: Vec<(String, NcPoly<K>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomReport {
    Pass,
    Fail { relation: String },
}

impl HomReport {
    pub fn passed(&self) -> bool {
        *self == HomReport::Pass
    }
}

/// Checks that `images` respects every relation of `p`; stops at the first failure.
pub fn verify_hom<K: Scalar, R: Ring<K>>(
    p: &Presentation<K>,
    ring: &R,
    images: &[R::Elem],
) -> Result<HomReport, AlgebraError> {
    if images.len() < p.generators.len() {
        return Err(AlgebraError::MissingImage(p.generators[images.len()].clone()));
    }
    for (label, rel) in &p.relations {
        if !ring.is_zero(&rel.evaluate(ring, images)?) {
            return Ok(HomReport::Fail {
                relation: label.clone(),
            });
        }
    }
    Ok(HomReport::Pass)
}

/// A generator of a Cohn-Leavitt algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Vertex(VertexId),
    Edge(EdgeId),
    Ghost(EdgeId),
}

impl Generator {
    /// Position in the order vertices, edges, ghosts.
    pub fn index(self, g: &SeparatedGraph) -> usize {
        match self {
            Generator::Vertex(v) => v.index(),
            Generator::Edge(e) => g.vertex_count() + e.index(),
            Generator::Ghost(e) => g.vertex_count() + g.edge_count() + e.index(),
        }
    }

    pub fn all(g: &SeparatedGraph) -> Vec<Generator> {
        g.vertex_ids()
            .map(Generator::Vertex)
            .chain(g.edge_ids().map(Generator::Edge))
            .chain(g.edge_ids().map(Generator::Ghost))
            .collect()
    }

    pub fn word(self, g: &SeparatedGraph) -> PathWord {
        match self {
            Generator::Vertex(v) => PathWord::vertex(v),
            Generator::Edge(e) => PathWord::letter(g, Letter::Edge(e)),
            Generator::Ghost(e) => PathWord::letter(g, Letter::Ghost(e)),
        }
    }

    pub fn name(self, g: &SeparatedGraph) -> String {
        match self {
            Generator::Vertex(v) => g.vertex_name(v).to_string(),
            Generator::Edge(e) => g.edge_name(e).to_string(),
            Generator::Ghost(e) => format!("{}*", g.edge_name(e)),
        }
    }
}

/// The defining presentation of `CL_K(E,C,S)`, generators ordered as in [`Generator::all`].
pub fn cl_presentation<K: Scalar>(g: &SeparatedGraph) -> Presentation<K> {
    let gens = Generator::all(g);
    let idx = |x: Generator| x.index(g);
    let one = K::one;
    let mut rels = Vec::new();
    for v in g.vertex_ids() {
        for w in g.vertex_ids() {
            let mut p = NcPoly::monomial(&[idx(Generator::Vertex(v)), idx(Generator::Vertex(w))], one());
            if v == w {
                p.add_term(vec![idx(Generator::Vertex(v))], -one());
            }
            rels.push((format!("V {} {}", g.vertex_name(v), g.vertex_name(w)), p));
        }
    }
    for e in g.edge_ids() {
        let (s, r) = (
            idx(Generator::Vertex(g.source(e))),
            idx(Generator::Vertex(g.range(e))),
        );
        let (ee, es) = (idx(Generator::Edge(e)), idx(Generator::Ghost(e)));
        let n = g.edge_name(e);
        let pair = |a: &[usize], b: usize| {
            let mut p = NcPoly::monomial(a, one());
            p.add_term(vec![b], -one());
            p
        };
        rels.push((format!("E1 s({n}) {n}"), pair(&[s, ee], ee)));
        rels.push((format!("E1 {n} r({n})"), pair(&[ee, r], ee)));
        rels.push((format!("E2 r({n}) {n}*"), pair(&[r, es], es)));
        rels.push((format!("E2 {n}* s({n})"), pair(&[es, s], es)));
    }
    for b in g.block_ids() {
        let blk = g.block(b);
        for &e in &blk.edges {
            for &f in &blk.edges {
                let mut p = NcPoly::monomial(&[idx(Generator::Ghost(e)), idx(Generator::Edge(f))], one());
                if e == f {
                    p.add_term(vec![idx(Generator::Vertex(g.range(e)))], -one());
                }
                rels.push((format!("SCK1 {}* {}", g.edge_name(e), g.edge_name(f)), p));
            }
        }
        if blk.in_s {
            let mut p = NcPoly::gen(idx(Generator::Vertex(blk.vertex)));
            for &e in &blk.edges {
                p.add_term(vec![idx(Generator::Edge(e)), idx(Generator::Ghost(e))], -one());
            }
            rels.push((format!("SCK2 {}", blk.name), p));
        }
    }
    Presentation {
        generators: gens.into_iter().map(|x| x.name(g)).collect(),
        relations: rels,
    }
}

/// Images of the generators of a source graph, ordered as in [`Generator::all`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraHom<K: Scalar> {
    pub images: Vec<AlgebraElement<K>>,
}

/// The algebra map `v -> m(v)`, `e -> m(e)`, `e* -> m(e)*` induced by a morphism `m`.
pub fn induced_hom<K: Scalar>(m: &GraphMorphism) -> Result<AlgebraHom<K>, AlgebraError> {
    if let MorphismReport::Fail(v) = check_morphism(m) {
        return Err(AlgebraError::Mismatch(format!("not a morphism: {v:?}")));
    }
    let t = &*m.target;
    let images = Generator::all(&m.source)
        .into_iter()
        .map(|x| {
            let y = match x {
                Generator::Vertex(v) => Generator::Vertex(m.map_vertex(v)),
                Generator::Edge(e) => Generator::Edge(m.map_edge(e)),
                Generator::Ghost(e) => Generator::Ghost(m.map_edge(e)),
            };
            AlgebraElement::word(y.word(t))
        })
        .collect();
    Ok(AlgebraHom { images })
}

/// Applies generator images word by word, evaluating products in `ring`.
pub fn apply_hom<K: Scalar, R: Ring<K>>(
    ring: &R,
    source: &SeparatedGraph,
    images: &[R::Elem],
    x: &AlgebraElement<K>,
) -> Result<R::Elem, AlgebraError> {
    let count = Generator::all(source).len();
    if images.len() != count {
        return Err(AlgebraError::Mismatch(format!(
            "expected {count} images, got {}",
            images.len()
        )));
    }
    let mut acc = ring.zero();
    for (w, c) in x.terms() {
        let mut prod = if w.is_vertex() {
            images[Generator::Vertex(w.source()).index(source)].clone()
        } else {
            let mut it = w.letters().iter().map(|&l| {
                let gen = match l {
                    Letter::Edge(e) => Generator::Edge(e),
                    Letter::Ghost(e) => Generator::Ghost(e),
                };
                &images[gen.index(source)]
            });
            let first = it.next().expect("nonempty word").clone();
            it.fold(first, |p, y| ring.mul(&p, y))
        };
        prod = ring.scale(&prod, c);
        acc = ring.add(&acc, &prod);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{enumerate_basis, parse_element};
    use crate::graph::{finite_complete_subobject, parse_graph, GraphItem};
    use crate::scalar::Rational;

    const E23: &str = "vertex v w\nedge a1 : v -> w\nedge a2 : v -> w\nedge a3 : v -> w\nedge b1 : v -> w\nedge b2 : v -> w\npartition v { A = a1 a2 a3 ; B = b1 b2 }\n";

    #[test]
    fn identity_hom_passes_and_fixes_elements() {
        let g = Arc::new(parse_graph(E23).unwrap());
        let h: AlgebraHom<Rational> = induced_hom(&GraphMorphism::identity(g.clone())).unwrap();
        let alg = ClAlgebra::new(&g);
        assert!(verify_hom(&cl_presentation(&g), &alg, &h.images)
            .unwrap()
            .passed());
        let x: AlgebraElement<Rational> = parse_element(&g, "a1 b2* + 2 * w").unwrap();
        assert_eq!(apply_hom(&alg, &g, &h.images, &x).unwrap(), x);
    }

    #[test]
    fn wrong_images_fail() {
        let g = parse_graph(E23).unwrap();
        let alg = ClAlgebra::new(&g);
        let images: Vec<AlgebraElement<Rational>> = Generator::all(&g)
            .into_iter()
            .map(|_| AlgebraElement::vertex(g.vertex_id("v").unwrap()))
            .collect();
        let report = verify_hom(&cl_presentation(&g), &alg, &images).unwrap();
        assert_eq!(
            report,
            HomReport::Fail {
                relation: "V v w".into()
            }
        );
        assert!(matches!(
            verify_hom(&cl_presentation::<Rational>(&g), &alg, &images[..3]),
            Err(AlgebraError::MissingImage(_))
        ));
    }

    #[test]
    fn complete_subobject_inclusion_keeps_basis_words_distinct() {
        let g = Arc::new(parse_graph(E23).unwrap());
        let a1 = g.edge_id("a1").unwrap();
        let (sub, inc) = finite_complete_subobject(&g, &[GraphItem::Edge(a1)]).unwrap();
        let h: AlgebraHom<Rational> = induced_hom(&inc).unwrap();
        let big = ClAlgebra::new(&g);
        let small = ReductionSystem::new(&sub);
        let mut seen = std::collections::BTreeSet::new();
        for w in enumerate_basis(&small, 3) {
            let img = apply_hom(&big, &sub, &h.images, &AlgebraElement::<Rational>::word(w)).unwrap();
            assert_eq!(img.len(), 1);
            let (word, c) = img.terms().next().unwrap();
            assert_eq!(*c, Rational::from_int(1));
            assert!(big.rs.is_normal_word(word));
            assert!(seen.insert(word.clone()));
        }
    }

    #[test]
    fn matrices_multiply() {
        let g = parse_graph("vertex v\n").unwrap();
        let alg = ClAlgebra::new(&g);
        let mat = MatrixAlgebra::new(alg, 2);
        let v: AlgebraElement<Rational> = AlgebraElement::vertex(g.vertex_id("v").unwrap());
        let e01 = mat.unit(0, 1, v.clone());
        let e10 = mat.unit(1, 0, v.clone());
        assert_eq!(Ring::<Rational>::mul(&mat, &e01, &e10), mat.unit(0, 0, v));
        assert!(Ring::<Rational>::is_zero(
            &mat,
            &Ring::<Rational>::mul(&mat, &e01, &e01)
        ));
    }
}
