use super::hom::Generator;
use super::{
    parse_element, AlgebraElement, AlgebraError, ClAlgebra, MatrixAlgebra, NcPoly, Presentation, Ring,
};
use crate::fixtures::e_mn;
use crate::graph::SeparatedGraph;
use crate::scalar::Scalar;

/// The algebra of `E(m,n)` compared with `(m+1)×(m+1)` matrices over the Leavitt algebra of type `(m,n)`.
///
/// The matrix side is presented by matrix units `u.i.j`, the entries `X.i.j`
/// of an `m×n` matrix and their adjoints `X*.i.j`. A concrete model of it is
/// given by matrices over the corner `w A w`, with `X.i.j` acting diagonally
/// as `b_i* a_j`.
#[derive(Clone, Debug)]
pub struct LeavittMatrixExample {
    pub m: usize,
    pub n: usize,
    pub graph: SeparatedGraph,
}

impl LeavittMatrixExample {
    pub fn new(m: usize, n: usize) -> Self {
        LeavittMatrixExample {
            m,
            n,
            graph: e_mn(m, n),
        }
    }

    fn d(&self) -> usize {
        self.m + 1
    }

    /// Index of the matrix unit `u.i.j`, one-based.
    pub fn unit(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.d() + (j - 1)
    }

    pub fn x(&self, i: usize, j: usize) -> usize {
        self.d() * self.d() + (i - 1) * self.n + (j - 1)
    }

    pub fn x_star(&self, i: usize, j: usize) -> usize {
        self.d() * self.d() + self.m * self.n + (i - 1) * self.n + (j - 1)
    }

    pub fn generator_count(&self) -> usize {
        self.d() * self.d() + 2 * self.m * self.n
    }

    fn entries(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 1..=self.m {
            for j in 1..=self.n {
                out.push(self.x(i, j));
                out.push(self.x_star(i, j));
            }
        }
        out
    }

    /// Generators and relations of the matrix algebra, with `1 = Σ u.l.l`.
    pub fn matrix_presentation<K: Scalar>(&self) -> Presentation<K> {
        let d = self.d();
        let mut generators = vec![String::new(); self.generator_count()];
        for i in 1..=d {
            for j in 1..=d {
                generators[self.unit(i, j)] = format!("u.{i}.{j}");
            }
        }
        for i in 1..=self.m {
            for j in 1..=self.n {
                generators[self.x(i, j)] = format!("X.{i}.{j}");
                generators[self.x_star(i, j)] = format!("X*.{i}.{j}");
            }
        }
        let mut unit_poly = NcPoly::zero();
        for l in 1..=d {
            unit_poly.add_term(vec![self.unit(l, l)], K::one());
        }
        let g = |i: usize| NcPoly::<K>::gen(i);
        let mut relations = Vec::new();
        for i in 1..=d {
            for j in 1..=d {
                for k in 1..=d {
                    for l in 1..=d {
                        let mut p = g(self.unit(i, j)).times(&g(self.unit(k, l)));
                        if j == k {
                            p = p.minus(&g(self.unit(i, l)));
                        }
                        relations.push((format!("units {i}{j}.{k}{l}"), p));
                    }
                }
            }
        }
        for i in 1..=self.m {
            for k in 1..=self.m {
                let mut p = NcPoly::zero();
                for j in 1..=self.n {
                    p = p.plus(&g(self.x(i, j)).times(&g(self.x_star(k, j))));
                }
                if i == k {
                    p = p.minus(&unit_poly);
                }
                relations.push((format!("X X* row {i} col {k}"), p));
            }
        }
        for j in 1..=self.n {
            for l in 1..=self.n {
                let mut p = NcPoly::zero();
                for i in 1..=self.m {
                    p = p.plus(&g(self.x_star(i, j)).times(&g(self.x(i, l))));
                }
                if j == l {
                    p = p.minus(&unit_poly);
                }
                relations.push((format!("X* X row {j} col {l}"), p));
            }
        }
        for x in self.entries() {
            for k in 1..=d {
                for l in 1..=d {
                    let u = g(self.unit(k, l));
                    let p = g(x).times(&u).minus(&u.times(&g(x)));
                    relations.push((format!("commute {} u.{k}.{l}", generators[x]), p));
                }
            }
            relations.push((
                format!("unit right {}", generators[x]),
                g(x).times(&unit_poly).minus(&g(x)),
            ));
            relations.push((
                format!("unit left {}", generators[x]),
                unit_poly.times(&g(x)).minus(&g(x)),
            ));
        }
        Presentation {
            generators,
            relations,
        }
    }

    /// The map from the graph algebra to the matrix algebra, as polynomials in its generators.
    pub fn to_matrix_formulas<K: Scalar>(&self) -> Vec<NcPoly<K>> {
        let gr = &self.graph;
        let d = self.d();
        Generator::all(gr)
            .into_iter()
            .map(|x| {
                let name = x.name(gr);
                let mut p = NcPoly::zero();
                match (x, name.as_str()) {
                    (Generator::Vertex(_), "v") => {
                        for l in 1..=self.m {
                            p.add_term(vec![self.unit(l, l)], K::one());
                        }
                    }
                    (Generator::Vertex(_), _) => p.add_term(vec![self.unit(d, d)], K::one()),
                    (Generator::Edge(_), n) if n.starts_with('a') => {
                        let i: usize = n[1..].parse().expect("edge index");
                        for l in 1..=self.m {
                            p.add_term(vec![self.x(l, i), self.unit(l, d)], K::one());
                        }
                    }
                    (Generator::Ghost(_), n) if n.starts_with('a') => {
                        let i: usize = n[1..n.len() - 1].parse().expect("edge index");
                        for l in 1..=self.m {
                            p.add_term(vec![self.x_star(l, i), self.unit(d, l)], K::one());
                        }
                    }
                    (Generator::Edge(_), n) => {
                        let j: usize = n[1..].parse().expect("edge index");
                        p.add_term(vec![self.unit(j, d)], K::one());
                    }
                    (Generator::Ghost(_), n) => {
                        let j: usize = n[1..n.len() - 1].parse().expect("edge index");
                        p.add_term(vec![self.unit(d, j)], K::one());
                    }
                }
                p
            })
            .collect()
    }

    /// The map from the matrix algebra back to the graph algebra, one image per matrix generator.
    pub fn to_graph_images<K: Scalar>(&self) -> Result<Vec<AlgebraElement<K>>, AlgebraError> {
        let d = self.d();
        let mut texts = vec![String::new(); self.generator_count()];
        for i in 1..=d {
            for j in 1..=d {
                texts[self.unit(i, j)] = match (i == d, j == d) {
                    (false, false) => format!("b{i} b{j}*"),
                    (false, true) => format!("b{i}"),
                    (true, false) => format!("b{j}*"),
                    (true, true) => "w".to_string(),
                };
            }
        }
        for i in 1..=self.m {
            for j in 1..=self.n {
                let mut x = format!("b{i}* a{j}");
                let mut xs = format!("a{j}* b{i}");
                for l in 1..=self.m {
                    x.push_str(&format!(" + b{l} b{i}* a{j} b{l}*"));
                    xs.push_str(&format!(" + b{l} a{j}* b{i} b{l}*"));
                }
                texts[self.x(i, j)] = x;
                texts[self.x_star(i, j)] = xs;
            }
        }
        let alg = ClAlgebra::new(&self.graph);
        texts
            .iter()
            .map(|t| parse_element(&self.graph, t).map(|x| alg.rs.normalize(&x)))
            .collect()
    }

    /// The model of each matrix generator as a matrix over the graph algebra.
    pub fn model_images<K: Scalar>(
        &self,
        mat: &MatrixAlgebra<ClAlgebra<'_>>,
    ) -> Result<Vec<Vec<AlgebraElement<K>>>, AlgebraError> {
        let d = self.d();
        let w: AlgebraElement<K> = parse_element(&self.graph, "w")?;
        let mut out = vec![Ring::<K>::zero(mat); self.generator_count()];
        for i in 1..=d {
            for j in 1..=d {
                out[self.unit(i, j)] = mat.unit(i - 1, j - 1, w.clone());
            }
        }
        for i in 1..=self.m {
            for j in 1..=self.n {
                let x = mat
                    .base
                    .rs
                    .normalize(&parse_element(&self.graph, &format!("b{i}* a{j}"))?);
                let xs = mat
                    .base
                    .rs
                    .normalize(&parse_element(&self.graph, &format!("a{j}* b{i}"))?);
                out[self.x(i, j)] = mat.diagonal(&x);
                out[self.x_star(i, j)] = mat.diagonal(&xs);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{apply_hom, cl_presentation, verify_hom};
    use crate::scalar::Rational;

    #[test]
    fn maps_to_and_from_matrices_are_inverse_for_1_2() {
        let ex = LeavittMatrixExample::new(1, 2);
        let alg = ClAlgebra::new(&ex.graph);
        let mat = MatrixAlgebra::new(ClAlgebra::new(&ex.graph), ex.m + 1);
        let model: Vec<Vec<AlgebraElement<Rational>>> = ex.model_images(&mat).unwrap();
        let pres_m = ex.matrix_presentation::<Rational>();
        assert!(verify_hom(&pres_m, &mat, &model).unwrap().passed());
        let to_graph: Vec<AlgebraElement<Rational>> = ex.to_graph_images().unwrap();
        assert!(verify_hom(&pres_m, &alg, &to_graph).unwrap().passed());
        let formulas = ex.to_matrix_formulas::<Rational>();
        let to_matrix: Vec<_> = formulas
            .iter()
            .map(|p| p.evaluate(&mat, &model).unwrap())
            .collect();
        assert!(verify_hom(&cl_presentation(&ex.graph), &mat, &to_matrix)
            .unwrap()
            .passed());
        for (k, gen) in Generator::all(&ex.graph).into_iter().enumerate() {
            let back = formulas[k].evaluate(&alg, &to_graph).unwrap();
            assert_eq!(back, AlgebraElement::word(gen.word(&ex.graph)));
        }
        for (k, x) in to_graph.iter().enumerate() {
            assert_eq!(apply_hom(&mat, &ex.graph, &to_matrix, x).unwrap(), model[k]);
        }
    }
}
