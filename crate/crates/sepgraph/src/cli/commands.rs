use std::fmt::Write;
use std::path::Path;
use std::sync::Arc;

use super::{budget_with, load_graph, load_plan_text, read, Cli, CliError, Command, Emit, Format, Verdict};
use crate::algebra::{
    cl_presentation, confluence_check, enumerate_basis, format_element, format_word, parse_element,
    verify_hom, AlgebraElement, ClAlgebra, Generator, HomReport, ReductionSystem,
};
use crate::fixtures::{fixtures, plan_fixtures};
use crate::graph::{dot_export, finite_complete_subobject, print_graph, SeparatedGraph};
use crate::lattice::{
    enumerate_admissible_pairs, hasse_dot, is_c_cofinal, is_simple, Cofinality, NonSimpleWitness, Simplicity,
    DEFAULT_LATTICE_CAP,
};
use crate::monoid::{
    check_star, presentation_of, refine, EqResult, MonoidPresentation, NotEqualCertificate, RefineResult,
    Side, StarVerdict, Witness, WordProblem,
};
use crate::resolution::{divisibility_probe, resolution_stage, Divisibility, ProbeLimits, ResolutionPlan};
use crate::scalar::Rational;

type Reply = Result<(String, Verdict), CliError>;

/// `key=value` groups, one pair per line, blank line between groups.
#[derive(Default)]
struct Records(String);

impl Records {
    fn group<'a>(&mut self, pairs: impl IntoIterator<Item = (&'a str, String)>) {
        if !self.0.is_empty() {
            self.0.push('\n');
        }
        for (k, v) in pairs {
            writeln!(self.0, "{k}={v}").unwrap();
        }
    }
}

fn definite(s: String) -> Reply {
    Ok((s, Verdict::Definite))
}

fn no_dot(cmd: &str) -> CliError {
    CliError::Usage(format!(
        "`{cmd}` has no dot rendering; use --format text or records"
    ))
}

pub(super) fn dispatch(cli: &Cli) -> Reply {
    let fmt = cli.format;
    let graph = || -> Result<SeparatedGraph, CliError> {
        let source = cli.graph.as_deref().ok_or_else(|| {
            CliError::Usage("this subcommand needs --graph PATH or --graph fixture:NAME".into())
        })?;
        load_graph(source, None)
    };
    match &cli.command {
        Command::Check => check(&graph()?, fmt),
        Command::Normalize { expr } => normalize(&graph()?, fmt, expr),
        Command::Mul { a, b } => mul(&graph()?, fmt, a, b),
        Command::Basis { max_len } => basis(&graph()?, fmt, *max_len),
        Command::MonoEq { a, b, budget } => mono_eq(&graph()?, fmt, a, b, *budget),
        Command::StarCheck => star_check(&graph()?, fmt),
        Command::Refine {
            a1,
            a2,
            b1,
            b2,
            budget,
        } => refine_cmd(&graph()?, fmt, [a1, a2, b1, b2], *budget),
        Command::Lattice => lattice(&graph()?, fmt),
        Command::Simple => simple(&graph()?, fmt),
        Command::Cofinal { depth } => cofinal(&graph()?, fmt, *depth),
        Command::Subobject { items } => subobject(&graph()?, fmt, items),
        Command::Resolve {
            plan,
            stages,
            emit,
            check_star,
        } => resolve(plan, fmt, *stages, *emit, *check_star),
        Command::VerifyHom { file } => verify_hom_file(file, fmt),
        Command::Confluence {
            seed,
            samples,
            max_len,
        } => confluence(&graph()?, fmt, *seed, *samples, *max_len),
        Command::Divisible {
            plan,
            stage,
            vertex,
            m,
        } => divisible(plan, fmt, *stage, vertex, *m),
        Command::Fixtures => list_fixtures(fmt),
    }
}

fn check(g: &SeparatedGraph, fmt: Format) -> Reply {
    let s_count = g.block_ids().filter(|&b| g.in_s(b)).count();
    match fmt {
        Format::Dot => definite(dot_export(g)),
        Format::Text => {
            let mut out = print_graph(g);
            writeln!(
                out,
                "# {} vertices, {} edges, {} blocks, {} in S",
                g.vertex_count(),
                g.edge_count(),
                g.block_count(),
                s_count
            )
            .unwrap();
            definite(out)
        }
        Format::Records => {
            let mut r = Records::default();
            r.group([
                ("graph", g.name().to_string()),
                ("vertices", g.vertex_count().to_string()),
                ("edges", g.edge_count().to_string()),
                ("blocks", g.block_count().to_string()),
                ("s_blocks", s_count.to_string()),
            ]);
            definite(r.0)
        }
    }
}

fn element(g: &SeparatedGraph, text: &str) -> Result<AlgebraElement<Rational>, CliError> {
    Ok(parse_element(g, text)?)
}

fn normalize(g: &SeparatedGraph, fmt: Format, expr: &str) -> Reply {
    let x = ReductionSystem::new(g).normalize(&element(g, expr)?);
    algebra_answer(g, fmt, "normalize", "normal_form", &x)
}

fn mul(g: &SeparatedGraph, fmt: Format, a: &str, b: &str) -> Reply {
    let x = ReductionSystem::new(g).multiply(&element(g, a)?, &element(g, b)?);
    algebra_answer(g, fmt, "mul", "product", &x)
}

fn algebra_answer(
    g: &SeparatedGraph,
    fmt: Format,
    cmd: &str,
    key: &str,
    x: &AlgebraElement<Rational>,
) -> Reply {
    match fmt {
        Format::Dot => Err(no_dot(cmd)),
        Format::Text => definite(format!("{}\n", format_element(g, x))),
        Format::Records => {
            let mut r = Records::default();
            r.group([(key, format_element(g, x)), ("terms", x.len().to_string())]);
            definite(r.0)
        }
    }
}

fn basis(g: &SeparatedGraph, fmt: Format, max_len: usize) -> Reply {
    let words = enumerate_basis(&ReductionSystem::new(g), max_len);
    match fmt {
        Format::Dot => Err(no_dot("basis")),
        Format::Text => {
            let mut out = String::new();
            for w in &words {
                writeln!(out, "{}", format_word(g, w)).unwrap();
            }
            writeln!(out, "# {} words of length at most {max_len}", words.len()).unwrap();
            definite(out)
        }
        Format::Records => {
            let mut r = Records::default();
            for w in &words {
                r.group([
                    ("word", format_word(g, w)),
                    ("length", w.len().to_string()),
                    ("degree", w.degree().to_string()),
                ]);
            }
            r.group([("count", words.len().to_string())]);
            definite(r.0)
        }
    }
}

fn monoid_element(p: &MonoidPresentation, text: &str) -> Result<crate::monoid::MonoidElement, CliError> {
    Ok(p.parse(text)?)
}

fn trace_lines(p: &MonoidPresentation, w: &Witness) -> Vec<(&'static str, String)> {
    let mut lines = vec![("common", p.format(&w.common))];
    lines.extend(w.left.iter().map(|s| ("left_step", p.format_step(s))));
    lines.extend(w.right.iter().map(|s| ("right_step", p.format_step(s))));
    lines
}

fn mono_eq(g: &SeparatedGraph, fmt: Format, a: &str, b: &str, states: Option<u64>) -> Reply {
    if fmt == Format::Dot {
        return Err(no_dot("mono-eq"));
    }
    let p = presentation_of(g);
    let (x, y) = (monoid_element(&p, a)?, monoid_element(&p, b)?);
    let result = WordProblem::new(&p, budget_with(states)).eq(&x, &y);
    let mut fields: Vec<(&str, String)> = Vec::new();
    let verdict = match &result {
        EqResult::Equal(w) => {
            fields.push(("verdict", "EQUAL".into()));
            fields.extend(trace_lines(&p, w));
            Verdict::Definite
        }
        EqResult::NotEqual(cert) => {
            fields.push(("verdict", "NOT EQUAL".into()));
            match cert {
                NotEqualCertificate::IdealMismatch { left, right } => {
                    fields.push(("left_ideal", left.display(g).to_string()));
                    fields.push(("right_ideal", right.display(g).to_string()));
                }
                NotEqualCertificate::ClassExhausted { side, class } => {
                    let side = match side {
                        Side::Left => "left",
                        Side::Right => "right",
                    };
                    fields.push(("exhausted_class", side.into()));
                    fields.push(("class_size", class.len().to_string()));
                }
            }
            Verdict::Definite
        }
        EqResult::Unknown(stats) => {
            fields.push(("verdict", "UNKNOWN".into()));
            fields.push(("states", stats.states.to_string()));
            fields.push(("depth", stats.depth.to_string()));
            fields.push(("pruned", stats.pruned.to_string()));
            Verdict::Unknown
        }
    };
    Ok((render_fields(fmt, &fields), verdict))
}

/// Text form: the verdict alone on the first line, then `key: value`.
fn render_fields(fmt: Format, fields: &[(&str, String)]) -> String {
    match fmt {
        Format::Records => {
            let mut r = Records::default();
            r.group(fields.iter().map(|(k, v)| (*k, v.clone())));
            r.0
        }
        _ => {
            let mut out = String::new();
            for (i, (k, v)) in fields.iter().enumerate() {
                if i == 0 && *k == "verdict" {
                    writeln!(out, "{v}").unwrap();
                } else {
                    writeln!(out, "{}: {v}", k.replace('_', " ")).unwrap();
                }
            }
            out
        }
    }
}

fn star_check(g: &SeparatedGraph, fmt: Format) -> Reply {
    if fmt == Format::Dot {
        return Err(no_dot("star-check"));
    }
    let p = presentation_of(g);
    let report = check_star(&p);
    let mut r = Records::default();
    let mut text = String::new();
    let mut too_large = false;
    for pair in &report.pairs {
        let (v, x, y) = (
            g.vertex_name(pair.vertex),
            g.block_name(pair.x),
            g.block_name(pair.y),
        );
        let (result, shown) = match &pair.verdict {
            StarVerdict::Common(c) => ("common", format!("common {}", p.format(c))),
            StarVerdict::NoCommon => ("none", "no common one-step image".to_string()),
            StarVerdict::TooLarge => {
                too_large = true;
                ("too-large", "too many one-step images".to_string())
            }
        };
        writeln!(text, "{v} {x} {y}: {shown}").unwrap();
        let mut fields = vec![
            ("vertex", v.to_string()),
            ("x", x.to_string()),
            ("y", y.to_string()),
            ("result", result.to_string()),
        ];
        if let StarVerdict::Common(c) = &pair.verdict {
            fields.push(("common", p.format(c)));
        }
        r.group(fields);
    }
    let failed = report.pairs.iter().any(|p| p.verdict == StarVerdict::NoCommon);
    let (word, verdict) = match (failed, too_large) {
        (true, _) => ("FAIL", Verdict::Definite),
        (false, true) => ("UNKNOWN", Verdict::Unknown),
        (false, false) => ("PASS", Verdict::Definite),
    };
    writeln!(text, "{word} ({} pairs)", report.pairs.len()).unwrap();
    r.group([
        ("verdict", word.to_string()),
        ("pairs", report.pairs.len().to_string()),
    ]);
    Ok((if fmt == Format::Records { r.0 } else { text }, verdict))
}

fn refine_cmd(g: &SeparatedGraph, fmt: Format, texts: [&String; 4], states: Option<u64>) -> Reply {
    if fmt == Format::Dot {
        return Err(no_dot("refine"));
    }
    let p = presentation_of(g);
    let [a1, a2, b1, b2] = texts.map(|t| monoid_element(&p, t));
    let (a1, a2, b1, b2) = (a1?, a2?, b1?, b2?);
    let mut fields: Vec<(&str, String)> = Vec::new();
    let verdict = match refine(&p, &a1, &a2, &b1, &b2, budget_with(states)) {
        Ok(RefineResult::Refined { matrix, witness }) => {
            fields.push(("verdict", "REFINED".into()));
            for i in 0..2 {
                for j in 0..2 {
                    let key = ["g11", "g12", "g21", "g22"][2 * i + j];
                    fields.push((key, p.format(matrix.entry(i, j))));
                }
            }
            fields.push(("common", p.format(&witness.common)));
            Verdict::Definite
        }
        Ok(RefineResult::Unknown(why)) => {
            fields.push(("verdict", "UNKNOWN".into()));
            fields.push(("reason", why));
            Verdict::Unknown
        }
        Err(crate::monoid::MonoidError::EqualityUnknown) => {
            fields.push(("verdict", "UNKNOWN".into()));
            fields.push(("reason", "equality of the sums could not be decided".into()));
            Verdict::Unknown
        }
        Err(e) => return Err(e.into()),
    };
    Ok((render_fields(fmt, &fields), verdict))
}

fn lattice(g: &SeparatedGraph, fmt: Format) -> Reply {
    let pairs = enumerate_admissible_pairs(g, DEFAULT_LATTICE_CAP)?;
    match fmt {
        Format::Dot => definite(hasse_dot(g, &pairs)),
        Format::Text => {
            let mut out = String::new();
            for pair in &pairs {
                writeln!(out, "{}", pair.display(g)).unwrap();
            }
            writeln!(out, "# {} admissible pairs", pairs.len()).unwrap();
            definite(out)
        }
        Format::Records => {
            let mut r = Records::default();
            let names = |it: Vec<&str>| it.join(",");
            for pair in &pairs {
                r.group([
                    ("h", names(pair.h.iter().map(|&v| g.vertex_name(v)).collect())),
                    ("g", names(pair.g.iter().map(|&b| g.block_name(b)).collect())),
                ]);
            }
            r.group([("count", pairs.len().to_string())]);
            definite(r.0)
        }
    }
}

fn vertex_set(g: &SeparatedGraph, set: impl IntoIterator<Item = crate::graph::VertexId>) -> String {
    let names: Vec<&str> = set.into_iter().map(|v| g.vertex_name(v)).collect();
    format!("{{{}}}", names.join(","))
}

fn simple(g: &SeparatedGraph, fmt: Format) -> Reply {
    if fmt == Format::Dot {
        return Err(no_dot("simple"));
    }
    let fields: Vec<(&str, String)> = match is_simple(g) {
        Simplicity::Simple => vec![("verdict", "SIMPLE".into())],
        Simplicity::NotSimple(NonSimpleWitness::BlockOutsideS(b)) => vec![
            ("verdict", "NOT SIMPLE".into()),
            ("block_outside_s", g.block_name(b).to_string()),
        ],
        Simplicity::NotSimple(NonSimpleWitness::ProperSubset(h)) => vec![
            ("verdict", "NOT SIMPLE".into()),
            ("proper_saturated_set", vertex_set(g, h)),
        ],
    };
    definite(render_fields(fmt, &fields))
}

fn cofinal(g: &SeparatedGraph, fmt: Format, depth: usize) -> Reply {
    if fmt == Format::Dot {
        return Err(no_dot("cofinal"));
    }
    let mut fields: Vec<(&str, String)> = Vec::new();
    let verdict = match is_c_cofinal(g, depth)? {
        Cofinality::Cofinal => {
            fields.push(("verdict", "COFINAL".into()));
            Verdict::Definite
        }
        Cofinality::NotCofinal { w, h, multipath } => {
            fields.push(("verdict", "NOT COFINAL".into()));
            fields.push(("vertex", g.vertex_name(w).to_string()));
            fields.push(("h", vertex_set(g, h)));
            fields.push(("start", g.vertex_name(multipath.start).to_string()));
            fields.extend(multipath.render(g).into_iter().map(|l| ("multipath", l)));
            Verdict::Definite
        }
        Cofinality::Unknown(d) => {
            fields.push(("verdict", "UNKNOWN".into()));
            fields.push(("depth_reached", d.to_string()));
            Verdict::Unknown
        }
    };
    Ok((render_fields(fmt, &fields), verdict))
}

fn subobject(g: &SeparatedGraph, fmt: Format, items: &str) -> Reply {
    let parsed = items
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|name| g.item(name))
        .collect::<Result<Vec<_>, _>>()?;
    let (sub, _) = finite_complete_subobject(&Arc::new(g.clone()), &parsed)?;
    check(&sub, fmt)
}

fn load_plan(source: &str) -> Result<ResolutionPlan, CliError> {
    let (text, dir) = load_plan_text(source)?;
    let mut load_err = None;
    let plan = ResolutionPlan::parse(&text, |base| {
        load_graph(base, dir.as_deref()).map_err(|e| {
            let name = base.to_string();
            load_err = Some(e);
            crate::resolution::ResolutionError::UnknownName(name)
        })
    });
    match (plan, load_err) {
        (_, Some(e)) => Err(e),
        (plan, None) => Ok(plan?),
    }
}

fn resolve(source: &str, fmt: Format, stages: Option<usize>, emit: Emit, star: bool) -> Reply {
    let plan = load_plan(source)?;
    let n = stages.unwrap_or(plan.stages);
    let res = resolution_stage(&plan, n)?;
    let last = res.last();
    match (fmt, emit) {
        (Format::Dot, _) => return definite(dot_export(&last.graph)),
        (_, Emit::Graph) => return definite(print_graph(&last.graph)),
        (_, Emit::Names) => {
            return definite(res.stages.iter().map(|s| s.name_table()).collect());
        }
        (_, Emit::Summary) => {}
    }
    let mut text = format!("{}\n", plan.describe());
    let mut r = Records::default();
    r.group([("plan", plan.describe())]);
    for (i, s) in res.stages.iter().enumerate() {
        let g = &s.graph;
        let mut fields = vec![
            ("stage", i.to_string()),
            ("vertices", g.vertex_count().to_string()),
            ("edges", g.edge_count().to_string()),
            ("blocks", g.block_count().to_string()),
        ];
        let mut line = format!(
            "stage {i}: {} vertices, {} edges, {} blocks",
            g.vertex_count(),
            g.edge_count(),
            g.block_count()
        );
        if i > 0 {
            fields.push(("triples", s.triples.len().to_string()));
            fields.push(("born", res.born_at(i).len().to_string()));
            write!(
                line,
                "; {} triples, {} new vertices",
                s.triples.len(),
                res.born_at(i).len()
            )
            .unwrap();
            if star {
                let verdicts = s.triple_star_verdicts();
                let ok = verdicts
                    .iter()
                    .filter(|(_, v)| matches!(v, StarVerdict::Common(_)))
                    .count();
                fields.push(("star_ok", ok.to_string()));
                write!(line, "; (*) holds for {ok} of {}", verdicts.len()).unwrap();
            }
        }
        writeln!(text, "{line}").unwrap();
        r.group(fields);
    }
    definite(if fmt == Format::Records { r.0 } else { text })
}

/// A generator map file:
///
/// ```text
/// source fixture:e12
/// target other.graph
/// v -> v
/// a1 -> a1 + a2
/// ```
///
/// Ghost images default to the adjoint of the edge image.
fn verify_hom_file(file: &Path, fmt: Format) -> Reply {
    if fmt == Format::Dot {
        return Err(no_dot("verify-hom"));
    }
    let text = read(file)?;
    let dir = file.parent();
    let (mut source, mut target) = (None, None);
    let mut maps: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("source ") {
            source = Some(load_graph(rest.trim(), dir)?);
        } else if let Some(rest) = line.strip_prefix("target ") {
            target = Some(load_graph(rest.trim(), dir)?);
        } else if let Some((name, expr)) = line.split_once("->") {
            maps.push((i + 1, name.trim().to_string(), expr.trim().to_string()));
        } else {
            return Err(CliError::Input(format!(
                "line {}: expected `source`, `target` or `NAME -> EXPR`",
                i + 1
            )));
        }
    }
    let source = source.ok_or_else(|| CliError::Input("missing `source` line".into()))?;
    let target = target.ok_or_else(|| CliError::Input("missing `target` line".into()))?;
    let ring = ClAlgebra::new(&target);
    let gens = Generator::all(&source);
    let mut images: Vec<Option<AlgebraElement<Rational>>> = vec![None; gens.len()];
    for (line, name, expr) in &maps {
        let idx = gens
            .iter()
            .position(|g| g.name(&source) == *name)
            .ok_or_else(|| {
                CliError::Input(format!("line {line}: `{name}` is not a generator of the source"))
            })?;
        images[idx] = Some(ring.rs.normalize(&parse_element(&target, expr)?));
    }
    let mut complete = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let image = match (&images[i], g) {
            (Some(x), _) => x.clone(),
            (None, Generator::Ghost(e)) => match &images[Generator::Edge(*e).index(&source)] {
                Some(x) => ring.rs.normalize(&x.star()),
                None => return Err(CliError::Input(format!("no image for `{}`", g.name(&source)))),
            },
            (None, _) => return Err(CliError::Input(format!("no image for `{}`", g.name(&source)))),
        };
        complete.push(image);
    }
    let pres = cl_presentation::<Rational>(&source);
    let report = verify_hom(&pres, &ring, &complete)?;
    let mut fields: Vec<(&str, String)> = Vec::new();
    match report {
        HomReport::Pass => {
            fields.push(("verdict", "PASS".into()));
            fields.push(("relations", pres.relations.len().to_string()));
        }
        HomReport::Fail { relation } => {
            fields.push(("verdict", "FAIL".into()));
            fields.push(("relation", relation));
        }
    }
    definite(render_fields(fmt, &fields))
}

fn confluence(g: &SeparatedGraph, fmt: Format, seed: u64, samples: usize, max_len: usize) -> Reply {
    if fmt == Format::Dot {
        return Err(no_dot("confluence"));
    }
    let r = confluence_check(g, seed, samples, max_len);
    let mut fields: Vec<(&str, String)> = vec![
        ("verdict", if r.passed() { "AGREE" } else { "DISAGREE" }.into()),
        ("samples", r.samples.to_string()),
        ("agreed", r.agreed.to_string()),
        ("idempotent", r.idempotent.to_string()),
        ("monotone", r.monotone.to_string()),
    ];
    if let Some(x) = &r.first_mismatch {
        fields.push(("first_mismatch", format_element(g, x)));
    }
    definite(render_fields(fmt, &fields))
}

fn divisible(source: &str, fmt: Format, stage: usize, vertex: &str, m: u32) -> Reply {
    if fmt == Format::Dot {
        return Err(no_dot("divisible"));
    }
    let plan = load_plan(source)?;
    let res = resolution_stage(&plan, stage)?;
    let p = presentation_of(&res.stage(stage).graph);
    let mut fields: Vec<(&str, String)> = Vec::new();
    let verdict = match divisibility_probe(&res, stage, vertex, m, ProbeLimits::default())? {
        Divisibility::Divisible { steps, element } => {
            fields.push(("verdict", "DIVISIBLE".into()));
            fields.push(("steps", steps.len().to_string()));
            fields.push(("element", p.format(&element)));
            Verdict::Definite
        }
        Divisibility::Unknown => {
            fields.push(("verdict", "UNKNOWN".into()));
            Verdict::Unknown
        }
    };
    Ok((render_fields(fmt, &fields), verdict))
}

fn list_fixtures(fmt: Format) -> Reply {
    if fmt == Format::Dot {
        return Err(no_dot("fixtures"));
    }
    let mut text = String::new();
    let mut r = Records::default();
    for (kind, list) in [("graph", fixtures()), ("plan", plan_fixtures())] {
        for f in list {
            writeln!(text, "{kind:5} fixture:{:24} {}", f.name, f.description()).unwrap();
            r.group([
                ("kind", kind.to_string()),
                ("name", f.name.to_string()),
                ("description", f.description().to_string()),
            ]);
        }
    }
    definite(if fmt == Format::Records { r.0 } else { text })
}
