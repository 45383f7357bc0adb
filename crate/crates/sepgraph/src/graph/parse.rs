use std::collections::BTreeSet;

use super::{GraphBuilder, GraphError, SeparatedGraph};

/// Characters allowed inside vertex, edge and block names.
pub fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '@' | '\'')
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Sym(char),
    Arrow,
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn lex_line(line: &str, lineno: usize) -> Result<Vec<Lexed>, GraphError> {
    let body = line.split('#').next().unwrap_or("");
    let chars: Vec<char> = body.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Lexed { tok: Tok::Arrow, col });
            i += 2;
        } else if matches!(c, '{' | '}' | ';' | '=' | ':' | '*' | '-') {
            out.push(Lexed {
                tok: Tok::Sym(c),
                col,
            });
            i += 1;
        } else if is_name_char(c) {
            let start = i;
            while i < chars.len() && is_name_char(chars[i]) {
                i += 1;
            }
            out.push(Lexed {
                tok: Tok::Name(chars[start..i].iter().collect()),
                col,
            });
        } else {
            return Err(syntax(lineno, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> GraphError {
    GraphError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

struct Cursor<'a> {
    toks: &'a [Lexed],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn name(&mut self, what: &str) -> Result<String, GraphError> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(syntax(self.line, self.col(), format!("expected {what}"))),
        }
    }

    fn expect(&mut self, want: Tok, shown: &str) -> Result<(), GraphError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.line, self.col(), format!("expected `{shown}`")))
        }
    }

    fn done(&self) -> Result<(), GraphError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(syntax(self.line, self.col(), "unexpected trailing input"))
        }
    }
}

enum SLine {
    All,
    None,
    Named(Vec<String>),
}

/// Parses the line-oriented graph description format.
///
/// A missing `s` line means `S = C`.
pub fn parse_graph(text: &str) -> Result<SeparatedGraph, GraphError> {
    let mut b = GraphBuilder::new("g");
    let mut named = false;
    let mut partitioned: BTreeSet<String> = BTreeSet::new();
    let mut s_line: Option<SLine> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if let Some(rest) = body.strip_prefix("graph ") {
            // graph names are free-form tokens
            let name = rest.trim();
            if named {
                return Err(syntax(line, 1, "graph name given twice"));
            }
            if name.split_whitespace().count() != 1 {
                return Err(syntax(line, 7, "expected a single graph name"));
            }
            b.set_name(name);
            named = true;
            continue;
        }
        let toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line,
            end_col: raw.chars().count() + 1,
        };
        let keyword = cur.name("a keyword")?;
        match keyword.as_str() {
            "graph" => return Err(syntax(line, cur.col(), "expected a graph name")),
            "vertex" => {
                if cur.peek().is_none() {
                    return Err(syntax(line, cur.col(), "expected a vertex name"));
                }
                while cur.peek().is_some() {
                    let v = cur.name("a vertex name")?;
                    b.vertex(&v);
                }
            }
            "edge" => {
                let e = cur.name("an edge name")?;
                cur.expect(Tok::Sym(':'), ":")?;
                let s = cur.name("a source vertex")?;
                cur.expect(Tok::Arrow, "->")?;
                let r = cur.name("a range vertex")?;
                b.edge(&e, &s, &r);
            }
            "partition" => {
                let v = cur.name("a vertex name")?;
                if !partitioned.insert(v.clone()) {
                    return Err(GraphError::DuplicatePartition { vertex: v });
                }
                cur.expect(Tok::Sym('{'), "{")?;
                loop {
                    let blk = cur.name("a block name")?;
                    cur.expect(Tok::Sym('='), "=")?;
                    let mut es = Vec::new();
                    while let Some(Tok::Name(_)) = cur.peek() {
                        es.push(cur.name("an edge name")?);
                    }
                    if es.is_empty() {
                        return Err(GraphError::EmptyBlock(blk));
                    }
                    let refs: Vec<&str> = es.iter().map(String::as_str).collect();
                    b.block(&v, &blk, &refs);
                    match cur.peek() {
                        Some(Tok::Sym(';')) => cur.pos += 1,
                        Some(Tok::Sym('}')) => {
                            cur.pos += 1;
                            break;
                        }
                        _ => return Err(syntax(line, cur.col(), "expected `;` or `}`")),
                    }
                }
            }
            "s" => {
                if s_line.is_some() {
                    return Err(syntax(line, 1, "`s` given twice"));
                }
                let choice = match cur.peek() {
                    Some(Tok::Sym('*')) => {
                        cur.pos += 1;
                        SLine::All
                    }
                    Some(Tok::Sym('-')) => {
                        cur.pos += 1;
                        SLine::None
                    }
                    _ => {
                        let mut ns = Vec::new();
                        while cur.peek().is_some() {
                            ns.push(cur.name("a block name, `*` or `-`")?);
                        }
                        if ns.is_empty() {
                            return Err(syntax(line, cur.col(), "expected block names, `*` or `-`"));
                        }
                        SLine::Named(ns)
                    }
                };
                s_line = Some(choice);
            }
            other => {
                return Err(syntax(line, 1, format!("unknown keyword `{other}`")));
            }
        }
        cur.done()?;
    }
    match s_line {
        None | Some(SLine::All) => b.s_all(),
        Some(SLine::None) => b.s_none(),
        Some(SLine::Named(ns)) => b.s_named(ns),
    };
    b.build()
}
