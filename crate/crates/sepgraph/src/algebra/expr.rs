use std::fmt::Write;

use super::{AlgebraElement, AlgebraError, Letter, PathWord};
use crate::graph::{is_name_char, SeparatedGraph};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i64),
    Sym(char),
}

fn err(column: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse {
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, AlgebraError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if matches!(c, '*' | '+' | '-' | '(' | ')' | '/') {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else if is_name_char(c) {
            let start = i;
            while i < chars.len() && is_name_char(chars[i]) {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if s.chars().all(|c| c.is_ascii_digit()) {
                let n = s.parse().map_err(|_| err(col, "integer too large"))?;
                out.push((Tok::Int(n), col));
            } else {
                out.push((Tok::Name(s), col));
            }
        } else {
            return Err(err(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    g: &'a SeparatedGraph,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn int(&mut self) -> Result<i64, AlgebraError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(err(self.col(), "expected an integer")),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), AlgebraError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(self.col(), format!("expected `{c}`")))
        }
    }

    fn coefficient<K: Scalar>(&mut self) -> Result<Option<K>, AlgebraError> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let n = self.int()?;
                Ok(Some(K::from_int(n)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let neg = if self.peek() == Some(&Tok::Sym('-')) {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let n = self.int()?;
                let d = if self.peek() == Some(&Tok::Sym('/')) {
                    self.pos += 1;
                    self.int()?
                } else {
                    1
                };
                self.sym(')')?;
                let n = if neg { -n } else { n };
                K::from_ratio(n, d).map(Some).ok_or(AlgebraError::BadCoefficient)
            }
            _ => Ok(None),
        }
    }

    /// A product of atoms; `None` when the product vanishes.
    fn word(&mut self) -> Result<Option<PathWord>, AlgebraError> {
        let mut acc: Option<Option<PathWord>> = None;
        while let Some(Tok::Name(n)) = self.peek() {
            let n = n.clone();
            self.pos += 1;
            let ghost = if self.peek() == Some(&Tok::Sym('*')) {
                self.pos += 1;
                true
            } else {
                false
            };
            let atom = match (self.g.vertex_id(&n), self.g.edge_id(&n)) {
                (Some(_), Some(_)) => return Err(AlgebraError::Ambiguous(n)),
                (Some(v), None) if !ghost => PathWord::vertex(v),
                (None, Some(e)) => {
                    let l = if ghost { Letter::Ghost(e) } else { Letter::Edge(e) };
                    PathWord::letter(self.g, l)
                }
                _ => {
                    return Err(AlgebraError::UnknownGenerator(if ghost {
                        format!("{n}*")
                    } else {
                        n
                    }))
                }
            };
            acc = Some(match acc {
                None => Some(atom),
                Some(None) => None,
                Some(Some(w)) => w.product(&atom),
            });
        }
        acc.ok_or_else(|| err(self.col(), "expected a generator"))
    }
}

/// Parses `(c/d) * a1 a2 ... + ...`; atoms are vertices, edges and `e*` ghosts.
///
/// The result is not normalized; non-composable products contribute zero.
pub fn parse_element<K: Scalar>(g: &SeparatedGraph, text: &str) -> Result<AlgebraElement<K>, AlgebraError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.chars().count() + 1,
        g,
    };
    let mut out = AlgebraElement::zero();
    let mut first = true;
    loop {
        let sign = match p.peek() {
            Some(Tok::Sym('+')) => {
                p.pos += 1;
                K::one()
            }
            Some(Tok::Sym('-')) => {
                p.pos += 1;
                -K::one()
            }
            None if !first => break,
            _ if first => K::one(),
            _ => return Err(err(p.col(), "expected `+` or `-`")),
        };
        first = false;
        let start = p.col();
        let coef: Option<K> = p.coefficient()?;
        let word = match (&coef, p.peek()) {
            (Some(c), Some(Tok::Sym('*'))) => {
                p.pos += 1;
                let _ = c;
                p.word()?
            }
            (Some(c), _) => {
                if c.is_zero() {
                    None
                } else {
                    return Err(err(start, "a nonzero coefficient needs `* word`"));
                }
            }
            (None, _) => p.word()?,
        };
        if let Some(w) = word {
            out.add_term(w, sign * coef.unwrap_or_else(K::one));
        }
    }
    Ok(out)
}

pub fn format_word(g: &SeparatedGraph, w: &PathWord) -> String {
    if w.is_vertex() {
        return g.vertex_name(w.source()).to_string();
    }
    let parts: Vec<String> = w
        .letters()
        .iter()
        .map(|l| match l {
            Letter::Edge(e) => g.edge_name(*e).to_string(),
            Letter::Ghost(e) => format!("{}*", g.edge_name(*e)),
        })
        .collect();
    parts.join(" ")
}

/// Canonical text, terms sorted by word length and then lexicographically.
pub fn format_element<K: Scalar>(g: &SeparatedGraph, x: &AlgebraElement<K>) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (w, c)) in x.terms().enumerate() {
        let (neg, mag) = c.sign_and_magnitude();
        match (i, neg) {
            (0, true) => out.push_str("- "),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if mag != "1" {
            if mag.contains('/') {
                write!(out, "({mag}) * ").unwrap();
            } else {
                write!(out, "{mag} * ").unwrap();
            }
        }
        out.push_str(&format_word(g, w));
    }
    out
}
