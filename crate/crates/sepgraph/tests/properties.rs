//! Property tests over the bundled graphs with proptest-driven seeds.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sepgraph::algebra::{random_element, AlgebraElement, ReductionSystem};
use sepgraph::fixtures::{fixtures, non_separated};
use sepgraph::graph::{parse_graph, print_graph, SeparatedGraph};
use sepgraph::lattice::{enumerate_admissible_pairs, is_admissible, pair_inf, pair_leq, pair_sup};
use sepgraph::monoid::{presentation_of, refine, Budget, MonoidElement, RefineResult};
use sepgraph::resolution::FreeCover;
use sepgraph::scalar::Rational;

fn graph(i: usize) -> SeparatedGraph {
    let all = fixtures();
    all[i % all.len()].graph()
}

fn element(g: &SeparatedGraph, seed: u64) -> AlgebraElement<Rational> {
    random_element(g, &mut ChaCha8Rng::seed_from_u64(seed), 3, 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent(i in 0usize..64, seed in any::<u64>()) {
        let g = graph(i);
        let rs = ReductionSystem::new(&g);
        let n = rs.normalize(&element(&g, seed));
        prop_assert_eq!(rs.normalize(&n), n.clone());
        prop_assert!(n.terms().all(|(w, _)| rs.is_normal_word(w)));
    }

    #[test]
    fn normalize_is_linear(i in 0usize..64, s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = graph(i);
        let rs = ReductionSystem::new(&g);
        let (x, y) = (element(&g, s1), element(&g, s2));
        prop_assert_eq!(rs.normalize(&x.plus(&y)), rs.normalize(&x).plus(&rs.normalize(&y)));
    }

    #[test]
    fn multiplication_is_associative(i in 0usize..64, s in any::<u64>()) {
        let g = graph(i);
        let rs = ReductionSystem::new(&g);
        let (x, y, z) = (element(&g, s), element(&g, s ^ 1), element(&g, s ^ 2));
        let left = rs.multiply(&rs.multiply(&x, &y), &z);
        let right = rs.multiply(&x, &rs.multiply(&y, &z));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn star_reverses_products(i in 0usize..64, s in any::<u64>()) {
        let g = graph(i);
        let rs = ReductionSystem::new(&g);
        let (x, y) = (element(&g, s), element(&g, s ^ 7));
        prop_assert_eq!(rs.normalize(&rs.multiply(&x, &y).star()), rs.multiply(&y.star(), &x.star()));
    }

    #[test]
    fn printed_graphs_parse_back(i in 0usize..64) {
        let g = graph(i);
        let again = parse_graph(&print_graph(&g)).unwrap();
        prop_assert_eq!(print_graph(&again), print_graph(&g));
    }

    #[test]
    fn free_cover_is_additive(
        delta in prop::collection::vec(prop::collection::vec(1u32..4, 3), 2),
        l1 in prop::collection::vec(0u64..5, 2),
        m1 in prop::collection::vec(0u64..5, 3),
        l2 in prop::collection::vec(0u64..5, 2),
        m2 in prop::collection::vec(0u64..5, 3),
    ) {
        let cover = FreeCover::new(delta).unwrap();
        let sum = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        let whole = cover.image(&sum(&l1, &l2), &sum(&m1, &m2));
        prop_assert_eq!(whole, sum(&cover.image(&l1, &m1), &cover.image(&l2, &m2)));
    }

    #[test]
    fn refinements_of_split_sums_verify(i in 0usize..64, cuts in prop::collection::vec(any::<bool>(), 8)) {
        let g = non_separated(&graph(i));
        let p = presentation_of(&g);
        let vs: Vec<_> = g.vertex_ids().map(|v| p.vertex_gen(v)).collect();
        // the same multiset split two ways is trivially an equal sum
        let pick = |offset: usize, keep: bool| {
            MonoidElement::from_pairs(vs.iter().enumerate().filter(|(k, _)| cuts[(k + offset) % 8] == keep).map(|(_, &v)| (v, 1)))
        };
        let (a1, a2, b1, b2) = (pick(0, true), pick(0, false), pick(3, true), pick(3, false));
        match refine(&p, &a1, &a2, &b1, &b2, Budget::default()) {
            Ok(RefineResult::Refined { matrix, .. }) => {
                prop_assert!(matrix.verify(&p, [&a1, &a2], [&b1, &b2], Budget::default()));
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

#[test]
fn lattices_are_closed_under_meets_and_joins() {
    for f in fixtures() {
        let g = f.graph();
        let Ok(pairs) = enumerate_admissible_pairs(&g, 4096) else {
            continue;
        };
        for a in &pairs {
            for b in &pairs {
                let (inf, sup) = (
                    pair_inf(&g, &[a.clone(), b.clone()]),
                    pair_sup(&g, &[a.clone(), b.clone()]),
                );
                assert!(
                    is_admissible(&g, &inf).is_ok() && pairs.contains(&inf),
                    "{}",
                    f.name
                );
                assert!(
                    is_admissible(&g, &sup).is_ok() && pairs.contains(&sup),
                    "{}",
                    f.name
                );
                assert!(pair_leq(&g, &inf, a) && pair_leq(&g, &inf, b));
                assert!(pair_leq(&g, a, &sup) && pair_leq(&g, b, &sup));
            }
        }
    }
}
