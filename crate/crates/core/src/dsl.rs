//! Text DSL for groups, cones and order stacks.
//!
//! ```text
//! dim 2
//! group g { gen 1 0; gen 0 1; gen 1/2 1/2; }
//! cone q { gen 1 0; gen 0 1; }
//! stack s { level 1 sqrt2; }
//! ```
//!
//! Formal-real entries are maximal runs of adjacent characters, so
//! `level 1 -1` has two entries while `level 1-1` has one.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::One;

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::freal::FormalReal;
use crate::freal::Functional;
use crate::group::GroupPresentation;
use crate::linalg::{Q, QVec, Z};
use crate::stack::OrderStack;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum TokKind {
    Ident,
    Number, // digits, possibly with '/', '+', '-', '*', 'sqrt' glued: raw freal run
    LBrace,
    RBrace,
    Semi,
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    text: String,
    line: usize,
    col: usize,
}

const KEYWORDS: [&str; 6] = ["dim", "group", "cone", "stack", "gen", "level"];

fn is_value_char(c: char) -> bool {
    c.is_ascii_digit() || matches!(c, '/' | '+' | '-' | '*')
}

/// Lexer: keywords and names are split on identifier boundaries; value
/// runs (rationals and formal reals) are kept as single adjacent tokens.
fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let advance = |n: usize, chars: &[char], line: &mut usize, col: &mut usize| {
            for k in 0..n {
                if chars[k] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
            }
        };
        if c.is_whitespace() {
            advance(1, &chars[i..i + 1], &mut line, &mut col);
            i += 1;
            continue;
        }
        if c == '#' {
            // Comment to end of line.
            let start = i;
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            advance(i - start, &chars[start..i], &mut line, &mut col);
            continue;
        }
        match c {
            '{' | '}' | ';' => {
                toks.push(Tok {
                    kind: match c {
                        '{' => TokKind::LBrace,
                        '}' => TokKind::RBrace,
                        _ => TokKind::Semi,
                    },
                    text: c.to_string(),
                    line: tline,
                    col: tcol,
                });
                advance(1, &chars[i..i + 1], &mut line, &mut col);
                i += 1;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                // Identifier; a `sqrt` prefix keeps any glued value run.
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let mut text: String = chars[start..i].iter().collect();
                let sqrt_like = text.starts_with("sqrt")
                    && text[4..].chars().all(|ch| ch.is_ascii_digit())
                    && text.len() > 4;
                if sqrt_like || text == "sqrt" {
                    // Continue the value run (e.g. sqrt2+1, sqrt2*...).
                    while i < chars.len()
                        && (is_value_char(chars[i]) || chars[i..].starts_with(&['s', 'q', 'r', 't']))
                    {
                        if chars[i..].starts_with(&['s', 'q', 'r', 't']) {
                            text.push_str("sqrt");
                            i += 4;
                        } else {
                            text.push(chars[i]);
                            i += 1;
                        }
                    }
                    advance(i - start, &chars[start..i], &mut line, &mut col);
                    toks.push(Tok {
                        kind: TokKind::Number,
                        text,
                        line: tline,
                        col: tcol,
                    });
                } else {
                    advance(i - start, &chars[start..i], &mut line, &mut col);
                    toks.push(Tok {
                        kind: TokKind::Ident,
                        text,
                        line: tline,
                        col: tcol,
                    });
                }
            }
            _ if is_value_char(c) => {
                let start = i;
                while i < chars.len() {
                    if is_value_char(chars[i]) {
                        i += 1;
                    } else if chars[i..].starts_with(&['s', 'q', 'r', 't']) {
                        i += 4;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    } else {
                        break;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                advance(i - start, &chars[start..i], &mut line, &mut col);
                toks.push(Tok {
                    kind: TokKind::Number,
                    text,
                    line: tline,
                    col: tcol,
                });
            }
            _ => {
                return Err(Error::Parse {
                    line: tline,
                    col: tcol,
                    msg: format!("unexpected character `{}`", c),
                });
            }
        }
    }
    Ok(toks)
}

#[derive(Clone, Debug)]
pub enum Item {
    Group(String),
    Cone(String),
    Stack(String),
}

/// A parsed spec file: dimension plus named groups, cones and stacks.
#[derive(Clone, Debug, Default)]
pub struct SpecFile {
    pub dim: usize,
    pub groups: BTreeMap<String, GroupPresentation>,
    pub cones: BTreeMap<String, ConeSpec>,
    pub stacks: BTreeMap<String, OrderStack>,
    /// Declaration order, for faithful printing.
    pub items: Vec<Item>,
}

impl SpecFile {
    pub fn group(&self, name: &str) -> Result<&GroupPresentation> {
        self.groups
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn cone(&self, name: &str) -> Result<&ConeSpec> {
        self.cones
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn stack(&self, name: &str) -> Result<&OrderStack> {
        self.stacks
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Print the file in the DSL grammar; parsing the output yields an
    /// identical object (bit-exact rationals).
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim {}", self.dim);
        for item in &self.items {
            match item {
                Item::Group(name) => {
                    let g = &self.groups[name];
                    let _ = writeln!(out, "group {} {{", name);
                    for gen in g.generators() {
                        let _ = writeln!(out, "  gen {};", format_qvec(gen));
                    }
                    let _ = writeln!(out, "}}");
                }
                Item::Cone(name) => {
                    let c = &self.cones[name];
                    let _ = writeln!(out, "cone {} {{", name);
                    for gen in c.generators() {
                        let _ = writeln!(out, "  gen {};", format_qvec(gen));
                    }
                    let _ = writeln!(out, "}}");
                }
                Item::Stack(name) => {
                    let s = &self.stacks[name];
                    let _ = writeln!(out, "stack {} {{", name);
                    for level in s.levels() {
                        let _ = writeln!(out, "  level {};", level);
                    }
                    let _ = writeln!(out, "}}");
                }
            }
        }
        out
    }
}

pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn format_qvec(v: &QVec) -> String {
    v.iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parse a whitespace-separated rational point like `1/2 -3`.
pub fn parse_point(s: &str, dim: usize) -> Result<QVec> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: parts.len(),
        });
    }
    let coords = parts
        .iter()
        .map(|p| parse_rational(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(QVec::new(coords))
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let err = || Error::Parse {
        line: 1,
        col: 1,
        msg: format!("malformed rational `{}`", s),
    };
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let numer: Z = num_s.parse().map_err(|_| err())?;
    let denom: Z = den_s.parse().map_err(|_| err())?;
    if denom == Z::from(0) {
        return Err(err());
    }
    Ok(Q::new(numer, denom))
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err_here(&self, msg: &str) -> Error {
        let (line, col) = self
            .peek()
            .map(|t| (t.line, t.col))
            .unwrap_or((0, 0));
        Error::Parse {
            line,
            col,
            msg: msg.to_string(),
        }
    }

    fn next(&mut self, expect: &str) -> Result<Tok> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse {
                line: self.toks.last().map(|t| t.line).unwrap_or(1),
                col: self.toks.last().map(|t| t.col + t.text.len()).unwrap_or(1),
                msg: format!("unexpected end of input, expected {}", expect),
            })?;
        self.pos += 1;
        Ok(t)
    }

    fn expect_kind(&mut self, kind: TokKind, what: &str) -> Result<Tok> {
        let t = self.next(what)?;
        if t.kind != kind {
            return Err(Error::Parse {
                line: t.line,
                col: t.col,
                msg: format!("expected {}, found `{}`", what, t.text),
            });
        }
        Ok(t)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Tok> {
        let t = self.next(kw)?;
        if t.kind != TokKind::Ident || t.text != kw {
            return Err(Error::Parse {
                line: t.line,
                col: t.col,
                msg: format!("expected `{}`, found `{}`", kw, t.text),
            });
        }
        Ok(t)
    }

    fn name(&mut self) -> Result<Tok> {
        let t = self.expect_kind(TokKind::Ident, "a name")?;
        if KEYWORDS.contains(&t.text.as_str()) {
            return Err(Error::Parse {
                line: t.line,
                col: t.col,
                msg: format!("`{}` is a keyword, not a name", t.text),
            });
        }
        Ok(t)
    }

    /// `kw v1 .. vn ;` repeated until `}`.
    fn entry_block<T>(
        &mut self,
        kw: &str,
        dim: usize,
        parse_entry: impl Fn(&Tok) -> Result<T>,
    ) -> Result<Vec<Vec<T>>> {
        self.expect_kind(TokKind::LBrace, "`{`")?;
        let mut rows = Vec::new();
        loop {
            let t = self.next("`}` or an entry")?;
            match (&t.kind, t.text.as_str()) {
                (TokKind::RBrace, _) => break,
                (TokKind::Ident, text) if text == kw => {
                    let mut row = Vec::new();
                    loop {
                        let t = self.next("a value or `;`")?;
                        match t.kind {
                            TokKind::Semi => break,
                            TokKind::Number => row.push(parse_entry(&t)?),
                            _ => {
                                return Err(Error::Parse {
                                    line: t.line,
                                    col: t.col,
                                    msg: format!("expected a value or `;`, found `{}`", t.text),
                                })
                            }
                        }
                    }
                    if row.len() != dim {
                        return Err(Error::Parse {
                            line: t.line,
                            col: t.col,
                            msg: format!("expected {} coordinates, found {}", dim, row.len()),
                        });
                    }
                    rows.push(row);
                }
                _ => {
                    return Err(Error::Parse {
                        line: t.line,
                        col: t.col,
                        msg: format!("expected `{}` or `}}`, found `{}`", kw, t.text),
                    })
                }
            }
        }
        if rows.is_empty() {
            Err(self.err_here(&format!("block needs at least one `{}` entry", kw)))
        } else {
            Ok(rows)
        }
    }
}

fn located<T>(r: Result<T>, t: &Tok, what: &str, name: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            line: t.line,
            col: t.col,
            msg: format!("{} {}: {}", what, name, other),
        },
    })
}

/// Parse a full spec file; no partial objects survive a failure.
pub fn parse_spec(src: &str) -> Result<SpecFile> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    p.expect_keyword("dim")?;
    let dim_tok = p.expect_kind(TokKind::Number, "a dimension")?;
    let dim: usize = dim_tok.text.parse().map_err(|_| Error::Parse {
        line: dim_tok.line,
        col: dim_tok.col,
        msg: format!("malformed dimension `{}`", dim_tok.text),
    })?;
    if dim == 0 {
        return Err(Error::Parse {
            line: dim_tok.line,
            col: dim_tok.col,
            msg: "dimension must be positive".into(),
        });
    }

    let mut spec = SpecFile {
        dim,
        ..SpecFile::default()
    };
    let mut names: BTreeMap<String, ()> = BTreeMap::new();

    while let Some(t) = p.peek().cloned() {
        if t.kind != TokKind::Ident {
            return Err(Error::Parse {
                line: t.line,
                col: t.col,
                msg: format!("expected `group`, `cone` or `stack`, found `{}`", t.text),
            });
        }
        p.pos += 1;
        let name_tok = p.name()?;
        let name = name_tok.text.clone();
        if names.insert(name.clone(), ()).is_some() {
            return Err(Error::Parse {
                line: name_tok.line,
                col: name_tok.col,
                msg: format!("duplicate name `{}`", name),
            });
        }
        match t.text.as_str() {
            "group" => {
                let rows = p.entry_block("gen", dim, |tok| {
                    parse_rational(&tok.text).map_err(|_| Error::Parse {
                        line: tok.line,
                        col: tok.col,
                        msg: format!("malformed rational `{}`", tok.text),
                    })
                })?;
                let gens = rows.into_iter().map(QVec::new).collect();
                let g = located(
                    GroupPresentation::new(dim, gens),
                    &name_tok,
                    "group",
                    &name,
                )?;
                spec.groups.insert(name.clone(), g);
                spec.items.push(Item::Group(name));
            }
            "cone" => {
                let rows = p.entry_block("gen", dim, |tok| {
                    parse_rational(&tok.text).map_err(|_| Error::Parse {
                        line: tok.line,
                        col: tok.col,
                        msg: format!("malformed rational `{}`", tok.text),
                    })
                })?;
                let gens = rows.into_iter().map(QVec::new).collect();
                let c = located(ConeSpec::new(dim, gens), &name_tok, "cone", &name)?;
                spec.cones.insert(name.clone(), c);
                spec.items.push(Item::Cone(name));
            }
            "stack" => {
                let rows = p.entry_block("level", dim, |tok| {
                    tok.text.parse::<FormalReal>().map_err(|e| Error::Parse {
                        line: tok.line,
                        col: tok.col,
                        msg: format!("malformed formal real `{}`: {}", tok.text, e),
                    })
                })?;
                let levels = rows.into_iter().map(Functional::new).collect();
                let s = located(OrderStack::new(dim, levels), &name_tok, "stack", &name)?;
                spec.stacks.insert(name.clone(), s);
                spec.items.push(Item::Stack(name));
            }
            other => {
                return Err(Error::Parse {
                    line: t.line,
                    col: t.col,
                    msg: format!("expected `group`, `cone` or `stack`, found `{}`", other),
                });
            }
        }
    }
    Ok(spec)
}
