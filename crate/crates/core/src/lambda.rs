//! Lambda terms with parameters and the `cc` constant.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::lattice::Elem;
use crate::structure::ImplicativeStructure;

/// A parameter is either resolved to an element or still a name to look up.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Param {
    Elem(Elem),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Param(Param),
    App(Box<Term>, Box<Term>),
    Abs(String, Box<Term>),
    CC,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term parse error at column {col}: {msg}")]
pub struct TermParseError {
    pub col: usize,
    pub msg: String,
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn elem(e: Elem) -> Term {
        Term::Param(Param::Elem(e))
    }

    pub fn app(f: Term, x: Term) -> Term {
        Term::App(Box::new(f), Box::new(x))
    }

    pub fn abs(x: &str, body: Term) -> Term {
        Term::Abs(x.to_string(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            Term::Param(_) | Term::CC => {}
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Abs(x, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Maximal nesting of binders.
    pub fn binder_depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Param(_) | Term::CC => 0,
            Term::App(f, a) => f.binder_depth().max(a.binder_depth()),
            Term::Abs(_, b) => 1 + b.binder_depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Param(_) | Term::CC => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Abs(_, b) => 1 + b.size(),
        }
    }

    pub fn contains_cc(&self) -> bool {
        match self {
            Term::CC => true,
            Term::Var(_) | Term::Param(_) => false,
            Term::App(f, a) => f.contains_cc() || a.contains_cc(),
            Term::Abs(_, b) => b.contains_cc(),
        }
    }

    /// Replaces named parameters by elements of `s`.
    pub fn resolve(&self, s: &ImplicativeStructure) -> Result<Term, String> {
        Ok(match self {
            Term::Param(Param::Name(n)) => {
                Term::elem(s.lattice().lookup(n).ok_or_else(|| format!("unknown element `{n}`"))?)
            }
            Term::Param(Param::Elem(e)) if *e >= s.len() => return Err(format!("element index {e} out of range")),
            Term::Var(_) | Term::Param(_) | Term::CC => self.clone(),
            Term::App(f, a) => Term::app(f.resolve(s)?, a.resolve(s)?),
            Term::Abs(x, b) => Term::abs(x, b.resolve(s)?),
        })
    }

    /// Capture-avoiding substitution of `v` for the free occurrences of `x`.
    pub fn subst(&self, x: &str, v: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => v.clone(),
            Term::Var(_) | Term::Param(_) | Term::CC => self.clone(),
            Term::App(f, a) => Term::app(f.subst(x, v), a.subst(x, v)),
            Term::Abs(y, b) => {
                if y == x {
                    return self.clone();
                }
                let fv = v.free_vars();
                if fv.contains(y) {
                    let mut avoid = fv;
                    avoid.extend(b.free_vars());
                    avoid.insert(x.to_string());
                    let fresh = fresh_name(y, &avoid);
                    let renamed = b.subst(y, &Term::Var(fresh.clone()));
                    Term::abs(&fresh, renamed.subst(x, v))
                } else {
                    Term::abs(y, b.subst(x, v))
                }
            }
        }
    }

    /// All terms reachable by contracting one beta redex.
    pub fn beta_reducts(&self) -> Vec<Term> {
        let mut out = Vec::new();
        match self {
            Term::App(f, a) => {
                if let Term::Abs(x, b) = f.as_ref() {
                    out.push(b.subst(x, a));
                }
                out.extend(f.beta_reducts().into_iter().map(|f2| Term::app(f2, (**a).clone())));
                out.extend(a.beta_reducts().into_iter().map(|a2| Term::app((**f).clone(), a2)));
            }
            Term::Abs(x, b) => out.extend(b.beta_reducts().into_iter().map(|b2| Term::abs(x, b2))),
            _ => {}
        }
        out
    }

    /// All terms reachable by contracting one eta redex `^x.t x` with `x` not free in `t`.
    pub fn eta_reducts(&self) -> Vec<Term> {
        let mut out = Vec::new();
        match self {
            Term::Abs(x, b) => {
                if let Term::App(f, a) = b.as_ref() {
                    if **a == Term::Var(x.clone()) && !f.free_vars().contains(x) {
                        out.push((**f).clone());
                    }
                }
                out.extend(b.eta_reducts().into_iter().map(|b2| Term::abs(x, b2)));
            }
            Term::App(f, a) => {
                out.extend(f.eta_reducts().into_iter().map(|f2| Term::app(f2, (**a).clone())));
                out.extend(a.eta_reducts().into_iter().map(|a2| Term::app((**f).clone(), a2)));
            }
            _ => {}
        }
        out
    }

    /// Renders with element names from `s`.
    pub fn display_in<'a>(&'a self, s: &'a ImplicativeStructure) -> TermDisplay<'a> {
        TermDisplay { term: self, names: Some(s) }
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded supply")
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    names: Option<&'a ImplicativeStructure>,
}

impl TermDisplay<'_> {
    fn write(&self, t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match t {
            Term::Var(x) => f.write_str(x),
            Term::CC => f.write_str("cc"),
            Term::Param(Param::Name(n)) => write!(f, "#{n}"),
            Term::Param(Param::Elem(e)) => match self.names {
                Some(s) if *e < s.len() => write!(f, "#{}", s.name(*e)),
                _ => write!(f, "#{e}"),
            },
            Term::App(g, a) => {
                if matches!(**g, Term::Abs(..)) {
                    f.write_str("(")?;
                    self.write(g, f)?;
                    f.write_str(")")?;
                } else {
                    self.write(g, f)?;
                }
                f.write_str(" ")?;
                if matches!(**a, Term::App(..) | Term::Abs(..)) {
                    f.write_str("(")?;
                    self.write(a, f)?;
                    f.write_str(")")
                } else {
                    self.write(a, f)
                }
            }
            Term::Abs(x, b) => {
                write!(f, "^{x}.")?;
                self.write(b, f)
            }
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.term, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TermDisplay { term: self, names: None }.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Hash,
    LParen,
    RParen,
    Lambda,
    Dot,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, TermParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '#' => {
                out.push((col, Tok::Hash));
                i += 1;
            }
            '(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            '^' | 'λ' | '\\' => {
                out.push((col, Tok::Lambda));
                i += 1;
            }
            '.' => {
                out.push((col, Tok::Dot));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            }
            _ => return Err(TermParseError { col, msg: format!("unexpected character `{c}`") }),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TermParseError> {
        Err(TermParseError { col: self.col(), msg: msg.into() })
    }

    fn ident(&mut self) -> Result<String, TermParseError> {
        match self.peek() {
            Some(Tok::Ident(x)) if x != "cc" => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            Some(Tok::Ident(_)) => self.err("`cc` is reserved"),
            _ => self.err("expected identifier"),
        }
    }

    fn term(&mut self) -> Result<Term, TermParseError> {
        let mut t = match self.atom()? {
            Some(a) => a,
            None => return self.err("expected term"),
        };
        while let Some(a) = self.atom()? {
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Option<Term>, TermParseError> {
        let t = match self.peek() {
            Some(Tok::Ident(x)) if x == "cc" => {
                self.pos += 1;
                Term::CC
            }
            Some(Tok::Ident(_)) => Term::Var(self.ident()?),
            Some(Tok::Hash) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Ident(x)) => {
                        let x = x.clone();
                        self.pos += 1;
                        Term::Param(Param::Name(x))
                    }
                    _ => return self.err("expected element name after `#`"),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                t
            }
            Some(Tok::Lambda) => {
                self.pos += 1;
                let x = self.ident()?;
                if self.peek() != Some(&Tok::Dot) {
                    return self.err("expected `.`");
                }
                self.pos += 1;
                Term::abs(&x, self.term()?)
            }
            _ => return Ok(None),
        };
        Ok(Some(t))
    }
}

/// Parses `term := atom+`, `atom := x | #name | cc | (term) | ^x.term`.
/// Application associates to the left and abstraction bodies extend to the right.
pub fn parse_term(src: &str) -> Result<Term, TermParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.chars().count() + 1 };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected token");
    }
    Ok(t)
}
