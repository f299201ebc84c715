//! Vietoris-polynomial functor expressions.
//!
//! Concrete syntax:
//!
//! ```text
//! expr  := sum ('.' expr)?          composition, right associative
//! sum   := prod ('+' prod)*         coproduct, left associative
//! prod  := atom ('*' atom)*         product, left associative
//! atom  := 'Id' | 'V' | 'Vl' | 'V+' | 'Vc' | 'C' '(' name ')' | '(' expr ')'
//! ```
//!
//! `F . G` denotes `X ↦ F(G(X))`. A hyperspace leaf stands for the functor
//! itself, so `V . (C(two) * Id)` is `X ↦ V(two × X)`.
//!
//! `V+` is one token only when the `+` is not followed by an operand: `V+ * Id`
//! is a product with the nonempty leaf, while `V+Id` and `V + Id` are sums.

mod apply;
mod laws;
mod value;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::vietoris::Variant;

pub use apply::{apply_functor, apply_functor_map, FMap, FSpace, Functor, SpaceEnv};
pub use laws::{check_functor_laws, ClassicVietoris, EndoFunctor, LawData, LawReport, LawWitness};
pub use value::FValue;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctorExpr {
    Id,
    Const(String),
    Sum(Box<FunctorExpr>, Box<FunctorExpr>),
    Prod(Box<FunctorExpr>, Box<FunctorExpr>),
    Hyper(Variant),
    /// `Comp(f, g)` is `f . g`, i.e. `X ↦ f(g(X))`.
    Comp(Box<FunctorExpr>, Box<FunctorExpr>),
}

impl FunctorExpr {
    pub fn sum(a: FunctorExpr, b: FunctorExpr) -> FunctorExpr {
        FunctorExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: FunctorExpr, b: FunctorExpr) -> FunctorExpr {
        FunctorExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn comp(a: FunctorExpr, b: FunctorExpr) -> FunctorExpr {
        FunctorExpr::Comp(Box::new(a), Box::new(b))
    }

    pub fn constant(name: &str) -> FunctorExpr {
        FunctorExpr::Const(name.to_string())
    }

    pub fn depth(&self) -> usize {
        match self {
            FunctorExpr::Id | FunctorExpr::Const(_) | FunctorExpr::Hyper(_) => 1,
            FunctorExpr::Sum(a, b) | FunctorExpr::Prod(a, b) | FunctorExpr::Comp(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Names of all constants, in first-occurrence order.
    pub fn constants(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            FunctorExpr::Const(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
            FunctorExpr::Sum(a, b) | FunctorExpr::Prod(a, b) | FunctorExpr::Comp(a, b) => {
                a.collect_constants(out);
                b.collect_constants(out);
            }
            _ => {}
        }
    }

    /// Replaces every compact `V` leaf by `variant`.
    pub fn replace_compact(&self, variant: Variant) -> FunctorExpr {
        match self {
            FunctorExpr::Hyper(Variant::Compact) => FunctorExpr::Hyper(variant),
            FunctorExpr::Sum(a, b) => FunctorExpr::sum(a.replace_compact(variant), b.replace_compact(variant)),
            FunctorExpr::Prod(a, b) => FunctorExpr::prod(a.replace_compact(variant), b.replace_compact(variant)),
            FunctorExpr::Comp(a, b) => FunctorExpr::comp(a.replace_compact(variant), b.replace_compact(variant)),
            e => e.clone(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            FunctorExpr::Comp(..) => 0,
            FunctorExpr::Sum(..) => 1,
            FunctorExpr::Prod(..) => 2,
            _ => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            FunctorExpr::Id => f.write_str("Id"),
            FunctorExpr::Const(n) => write!(f, "C({n})"),
            FunctorExpr::Hyper(v) => f.write_str(v.symbol()),
            FunctorExpr::Sum(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" + ")?;
                b.write_at(f, 2)
            }
            FunctorExpr::Prod(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" * ")?;
                b.write_at(f, 3)
            }
            FunctorExpr::Comp(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" . ")?;
                b.write_at(f, 0)
            }
        }
    }
}

/// Canonical printing with minimal parentheses; `parse_functor` inverts it.
impl fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("parse error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id,
    Leaf(Variant),
    C,
    Name(String),
    LParen,
    RParen,
    Star,
    Plus,
    Dot,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Id => "`Id`".into(),
            Tok::Leaf(v) => format!("`{}`", v.symbol()),
            Tok::C => "`C`".into(),
            Tok::Name(n) => format!("name `{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Dot => "`.`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn is_word(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'-'
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    // C's argument is a raw name, so words right after `C(` are never keywords
    let mut name_slot = false;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'+' => {
                i += 1;
                Tok::Plus
            }
            b'.' => {
                i += 1;
                Tok::Dot
            }
            c if is_word(c) => {
                while i < b.len() && is_word(b[i]) {
                    i += 1;
                }
                let word = &src[start..i];
                if name_slot {
                    Tok::Name(word.to_string())
                } else {
                    match word {
                        "Id" => Tok::Id,
                        "Vl" => Tok::Leaf(Variant::Lower),
                        "Vc" => Tok::Leaf(Variant::CompactConnected),
                        "C" => Tok::C,
                        "V" => {
                            if i < b.len() && b[i] == b'+' && !operand_follows(b, i + 1) {
                                i += 1;
                                Tok::Leaf(Variant::CompactNonempty)
                            } else {
                                Tok::Leaf(Variant::Compact)
                            }
                        }
                        _ => Tok::Name(word.to_string()),
                    }
                }
            }
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return Err(ParseError {
                    offset: start,
                    expected: vec!["a functor expression".into()],
                    found: format!("character `{ch}`"),
                });
            }
        };
        name_slot = tok == Tok::LParen && matches!(out.last(), Some((_, Tok::C)));
        out.push((start, tok));
    }
    out.push((b.len(), Tok::End));
    Ok(out)
}

fn operand_follows(b: &[u8], mut i: usize) -> bool {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i < b.len() && (is_word(b[i]) || b[i] == b'(')
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expr(&mut self) -> Result<FunctorExpr, ParseError> {
        let lhs = self.sum()?;
        if *self.peek() == Tok::Dot {
            self.bump();
            let rhs = self.expr()?;
            return Ok(FunctorExpr::comp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<FunctorExpr, ParseError> {
        let mut lhs = self.prod()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            lhs = FunctorExpr::sum(lhs, self.prod()?);
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> Result<FunctorExpr, ParseError> {
        let mut lhs = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = FunctorExpr::prod(lhs, self.atom()?);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<FunctorExpr, ParseError> {
        const ATOM: &[&str] = &["`Id`", "`V`", "`Vl`", "`V+`", "`Vc`", "`C(name)`", "`(`"];
        match self.peek().clone() {
            Tok::Id => {
                self.bump();
                Ok(FunctorExpr::Id)
            }
            Tok::Leaf(v) => {
                self.bump();
                Ok(FunctorExpr::Hyper(v))
            }
            Tok::C => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return self.fail(&["`(`"]);
                }
                self.bump();
                let Tok::Name(name) = self.peek().clone() else {
                    return self.fail(&["a constant name"]);
                };
                self.bump();
                if *self.peek() != Tok::RParen {
                    return self.fail(&["`)`"]);
                }
                self.bump();
                Ok(FunctorExpr::Const(name))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail(&["`*`", "`+`", "`.`", "`)`"]);
                }
                self.bump();
                Ok(e)
            }
            _ => self.fail(ATOM),
        }
    }
}

pub fn parse_functor(text: &str) -> Result<FunctorExpr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["`*`", "`+`", "`.`", "end of input"]);
    }
    Ok(e)
}
