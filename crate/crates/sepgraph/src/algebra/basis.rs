use super::{Letter, PathWord, ReductionSystem};

/// All normal-form words of length at most `max_len`, in canonical order.
pub fn enumerate_basis(rs: &ReductionSystem<'_>, max_len: usize) -> Vec<PathWord> {
    let g = rs.graph();
    let mut out: Vec<PathWord> = g.vertex_ids().map(PathWord::vertex).collect();
    let letters: Vec<Letter> = g
        .edge_ids()
        .flat_map(|e| [Letter::Edge(e), Letter::Ghost(e)])
        .collect();
    let mut layer: Vec<PathWord> = if max_len == 0 {
        Vec::new()
    } else {
        letters.iter().map(|&l| PathWord::letter(g, l)).collect()
    };
    for _ in 1..=max_len {
        let mut next = Vec::new();
        for w in &layer {
            let last = *w.letters().last().expect("layer words are nonempty");
            for &l in &letters {
                if l.source(g) == w.range() && rs.rule_at(last, l).is_none() {
                    next.push(w.product(&PathWord::letter(g, l)).expect("composable"));
                }
            }
        }
        out.append(&mut layer);
        layer = next;
    }
    out.sort();
    out
}

/// True when `w` contains no redex of `rs`.
pub fn is_reduced_word(rs: &ReductionSystem<'_>, w: &PathWord) -> bool {
    rs.is_normal_word(w)
}
