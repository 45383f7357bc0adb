use super::search::{forward_common, Budget, EqResult, Witness, WordProblem};
use super::{Direction, MonoidElement, MonoidError, MonoidPresentation, Step};

/// A 2x2 refinement: row `i` sums to `a_i`, column `j` sums to `b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementMatrix(pub [[MonoidElement; 2]; 2]);

impl RefinementMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &MonoidElement {
        &self.0[i][j]
    }

    pub fn row_sum(&self, i: usize) -> MonoidElement {
        self.0[i][0].plus(&self.0[i][1])
    }

    pub fn column_sum(&self, j: usize) -> MonoidElement {
        self.0[0][j].plus(&self.0[1][j])
    }

    /// Checks the four row and column equalities with the word problem.
    pub fn verify(
        &self,
        p: &MonoidPresentation,
        a: [&MonoidElement; 2],
        b: [&MonoidElement; 2],
        budget: Budget,
    ) -> bool {
        let wp = WordProblem::new(p, budget);
        (0..2).all(|i| wp.eq(a[i], &self.row_sum(i)).is_equal())
            && (0..2).all(|j| wp.eq(b[j], &self.column_sum(j)).is_equal())
    }

    pub fn render(&self, p: &MonoidPresentation) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                out.push(format!("g{}{} = {}", i + 1, j + 1, p.format(&self.0[i][j])));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefineResult {
    Refined {
        matrix: RefinementMatrix,
        witness: Witness,
    },
    /// The sums are equal but no verified refinement was produced.
    Unknown(String),
}

/// Replays a forward trace starting from `first + second`, charging each
/// rewritten vertex to `first` when it occurs there and to `second`
/// otherwise. Returns the two parts of the final element.
pub fn split_trace(
    p: &MonoidPresentation,
    first: &MonoidElement,
    second: &MonoidElement,
    steps: &[Step],
) -> Option<(MonoidElement, MonoidElement)> {
    let mut parts = [first.clone(), second.clone()];
    for s in steps {
        if s.direction != Direction::Forward {
            return None;
        }
        let idx = if parts[0].multiplicity(p.vertex_gen(s.vertex)) > 0 {
            0
        } else {
            1
        };
        parts[idx] = p.apply(&parts[idx], s)?;
    }
    let [a, b] = parts;
    Some((a, b))
}

/// Finds a refinement of `a1 + a2 = b1 + b2`.
///
/// A forward witness `a1 + a2 -> g <- b1 + b2` splits `g` both ways; the
/// two splittings are refined in the free monoid, and each row and column
/// is then checked in the graph monoid.
pub fn refine(
    p: &MonoidPresentation,
    a1: &MonoidElement,
    a2: &MonoidElement,
    b1: &MonoidElement,
    b2: &MonoidElement,
    budget: Budget,
) -> Result<RefineResult, MonoidError> {
    let a = a1.plus(a2);
    let b = b1.plus(b2);
    let wp = WordProblem::new(p, budget);
    let Some(witness) = forward_common(p, &a, &b, budget) else {
        return match wp.eq(&a, &b) {
            EqResult::NotEqual(_) => Err(MonoidError::NotEqual(format!(
                "{} and {}",
                p.format(&a),
                p.format(&b)
            ))),
            EqResult::Unknown(_) => Err(MonoidError::EqualityUnknown),
            EqResult::Equal(_) => Ok(RefineResult::Unknown(
                "the sums are equal but no forward common descendant was found".into(),
            )),
        };
    };
    let (a1p, a2p) = split_trace(p, a1, a2, &witness.left).expect("forward trace replays");
    let (b1p, b2p) = split_trace(p, b1, b2, &witness.right).expect("forward trace replays");
    let g11 = a1p.meet(&b1p);
    let g12 = a1p.checked_sub(&g11).expect("meet is below");
    let g21 = b1p.checked_sub(&g11).expect("meet is below");
    let g22 = a2p.checked_sub(&g21).expect("b1' - g11 lies below a2'");
    debug_assert_eq!(g12.plus(&g22), b2p);
    let matrix = RefinementMatrix([[g11, g12], [g21, g22]]);
    if !matrix.verify(p, [a1, a2], [b1, b2], budget) {
        return Ok(RefineResult::Unknown(
            "a row or column equality could not be certified".into(),
        ));
    }
    Ok(RefineResult::Refined { matrix, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::monoid::presentation_of;

    fn refine_text(graph: &str, a1: &str, a2: &str, b1: &str, b2: &str) -> Result<RefineResult, MonoidError> {
        let p = presentation_of(&fixture(graph).unwrap());
        let e = |s: &str| p.parse(s).unwrap();
        refine(&p, &e(a1), &e(a2), &e(b1), &e(b2), Budget::default())
    }

    #[test]
    fn diagonal_when_summands_agree() {
        let p = presentation_of(&fixture("chain").unwrap());
        let e = |s: &str| p.parse(s).unwrap();
        let RefineResult::Refined { matrix, .. } =
            refine(&p, &e("a"), &e("b"), &e("a"), &e("b"), Budget::default()).unwrap()
        else {
            panic!("expected a refinement");
        };
        assert_eq!(p.format(matrix.entry(0, 0)), "a");
        assert!(matrix.entry(0, 1).is_zero() && matrix.entry(1, 0).is_zero());
        assert_eq!(p.format(matrix.entry(1, 1)), "b");
    }

    #[test]
    fn chain_refines_through_rewrites() {
        let p = presentation_of(&fixture("chain").unwrap());
        let e = |s: &str| p.parse(s).unwrap();
        let (a1, a2, b1, b2) = (e("a"), e("c"), e("b"), e("b + c"));
        let RefineResult::Refined { matrix, witness } =
            refine(&p, &a1, &a2, &b1, &b2, Budget::default()).unwrap()
        else {
            panic!("expected a refinement");
        };
        assert!(witness.is_forward());
        assert!(matrix.verify(&p, [&a1, &a2], [&b1, &b2], Budget::default()));
    }

    #[test]
    fn unequal_sums_are_rejected() {
        assert!(matches!(
            refine_text("e23", "w", "0", "w", "w"),
            Err(MonoidError::NotEqual(_))
        ));
    }

    #[test]
    fn split_trace_charges_first_summand() {
        let p = presentation_of(&fixture("e23").unwrap());
        let v = p.parse("v").unwrap();
        let w = p.parse("w").unwrap();
        let a = p.graph().block_id("A").unwrap();
        let step = Step {
            direction: Direction::Forward,
            vertex: p.graph().vertex_id("v").unwrap(),
            block: a,
        };
        let (x, y) = split_trace(&p, &v, &v.plus(&w), &[step]).unwrap();
        assert_eq!(p.format(&x), "3 w");
        assert_eq!(p.format(&y), "v + w");
    }
}
