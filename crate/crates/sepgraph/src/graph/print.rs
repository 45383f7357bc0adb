use std::fmt::Write;

use super::SeparatedGraph;

/// Canonical text form, accepted back by [`super::parse_graph`].
pub fn print_graph(g: &SeparatedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "graph {}", g.name()).unwrap();
    if g.vertex_count() > 0 {
        let names: Vec<&str> = g.vertex_ids().map(|v| g.vertex_name(v)).collect();
        writeln!(out, "vertex {}", names.join(" ")).unwrap();
    }
    for e in g.edge_ids() {
        let edge = g.edge(e);
        writeln!(
            out,
            "edge {} : {} -> {}",
            edge.name,
            g.vertex_name(edge.source),
            g.vertex_name(edge.range)
        )
        .unwrap();
    }
    for v in g.vertex_ids() {
        if g.is_sink(v) {
            continue;
        }
        let parts: Vec<String> = g
            .blocks_at(v)
            .iter()
            .map(|&b| {
                let blk = g.block(b);
                let es: Vec<&str> = blk.edges.iter().map(|&e| g.edge_name(e)).collect();
                format!("{} = {}", blk.name, es.join(" "))
            })
            .collect();
        writeln!(out, "partition {} {{ {} }}", g.vertex_name(v), parts.join(" ; ")).unwrap();
    }
    if g.s_is_everything() {
        out.push_str("s *\n");
    } else {
        let s: Vec<&str> = g
            .block_ids()
            .filter(|&b| g.in_s(b))
            .map(|b| g.block_name(b))
            .collect();
        if s.is_empty() {
            out.push_str("s -\n");
        } else {
            writeln!(out, "s {}", s.join(" ")).unwrap();
        }
    }
    out
}

const PALETTE: [&str; 10] = [
    "red",
    "blue",
    "darkgreen",
    "orange",
    "purple",
    "brown",
    "deeppink",
    "teal",
    "olive",
    "navy",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT rendering; each block gets its own colour, non-S blocks are dashed.
pub fn dot_export(g: &SeparatedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(g.name())).unwrap();
    for v in g.vertex_ids() {
        writeln!(out, "  {};", quote(g.vertex_name(v))).unwrap();
    }
    for b in g.block_ids() {
        let blk = g.block(b);
        let colour = PALETTE[b.index() % PALETTE.len()];
        let style = if blk.in_s { "solid" } else { "dashed" };
        for &e in &blk.edges {
            writeln!(
                out,
                "  {} -> {} [label={}, color={}, style={}];",
                quote(g.vertex_name(g.source(e))),
                quote(g.vertex_name(g.range(e))),
                quote(&format!("{} [{}]", g.edge_name(e), blk.name)),
                colour,
                style
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
