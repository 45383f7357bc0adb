//! The isomorphism between a Cohn-Leavitt algebra of `E(m,n)` and a matrix
//! algebra, checked relation by relation.
//!
//! Run with `cargo run --example matrix_model`.

use sepgraph::algebra::{
    cl_presentation, format_element, verify_hom, AlgebraElement, ClAlgebra, Generator, LeavittMatrixExample,
    MatrixAlgebra,
};
use sepgraph::scalar::Rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ex = LeavittMatrixExample::new(1, 2);
    let g = &ex.graph;
    let alg = ClAlgebra::new(g);
    let mat = MatrixAlgebra::new(ClAlgebra::new(g), ex.m + 1);

    let model = ex.model_images::<Rational>(&mat)?;
    let matrix_side = ex.matrix_presentation::<Rational>();
    let to_graph: Vec<AlgebraElement<Rational>> = ex.to_graph_images()?;
    println!(
        "matrix model respects its relations: {}",
        verify_hom(&matrix_side, &mat, &model)?.passed()
    );
    println!(
        "graph-side images respect them too:  {}",
        verify_hom(&matrix_side, &alg, &to_graph)?.passed()
    );

    let formulas = ex.to_matrix_formulas::<Rational>();
    let to_matrix: Vec<_> = formulas
        .iter()
        .map(|p| p.evaluate(&mat, &model))
        .collect::<Result<_, _>>()?;
    println!(
        "graph relations hold in the matrices: {}",
        verify_hom(&cl_presentation(g), &mat, &to_matrix)?.passed()
    );

    for (k, gen) in Generator::all(g).into_iter().enumerate() {
        let back = formulas[k].evaluate(&alg, &to_graph)?;
        println!("  {:>4} -> matrices -> {}", gen.name(g), format_element(g, &back));
    }
    Ok(())
}
