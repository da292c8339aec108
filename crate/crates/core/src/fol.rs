//! First-order formulas over a finite domain, interpreted in a structure.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::encode;
use crate::eval::{eval_term, EvalError};
use crate::lambda::parse_term;
use crate::lattice::{Elem, ElemSet};
use crate::separator::{cores, SeparatorError};
use crate::structure::ImplicativeStructure;

pub const DOMAIN_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoTerm {
    /// A bound variable, a domain element, or a constant symbol, resolved in that order.
    Name(String),
    App(String, Vec<FoTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Bot,
    Top,
    Pred(String, Vec<FoTerm>),
    Eq(FoTerm, FoTerm),
    Not(Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FolError {
    #[error("formula parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{name}` expects {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("domain has {0} elements, limit is {DOMAIN_LIMIT}")]
    DomainTooLarge(usize),
    #[error("empty domain")]
    EmptyDomain,
    #[error("table for `{0}` is incomplete or out of range")]
    BadTable(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Separator(#[from] SeparatorError),
}

/// A total table indexed by argument tuples in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub arity: usize,
    pub values: Vec<usize>,
}

impl Table {
    pub fn from_fn(arity: usize, domain: usize, f: impl Fn(&[usize]) -> usize) -> Table {
        let values = (0..domain.pow(arity as u32)).map(|i| f(&decode(i, arity, domain))).collect();
        Table { arity, values }
    }

    pub fn get(&self, args: &[usize], domain: usize) -> usize {
        self.values[args.iter().fold(0, |acc, &a| acc * domain + a)]
    }
}

/// Tuple of `arity` digits in base `domain`, most significant first.
pub fn decode(mut i: usize, arity: usize, domain: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = i % domain;
        i /= domain;
    }
    out
}

/// Domain names, predicate tables valued in the structure, and function tables on the domain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub domain: Vec<String>,
    pub preds: BTreeMap<String, Table>,
    pub funcs: BTreeMap<String, Table>,
}

impl Interpretation {
    pub fn check(&self, s: &ImplicativeStructure) -> Result<(), FolError> {
        let m = self.domain.len();
        if m == 0 {
            return Err(FolError::EmptyDomain);
        }
        if m > DOMAIN_LIMIT {
            return Err(FolError::DomainTooLarge(m));
        }
        for (name, t) in &self.preds {
            if t.values.len() != m.pow(t.arity as u32) || t.values.iter().any(|&v| v >= s.len()) {
                return Err(FolError::BadTable(name.clone()));
            }
        }
        for (name, t) in &self.funcs {
            if t.values.len() != m.pow(t.arity as u32) || t.values.iter().any(|&v| v >= m) {
                return Err(FolError::BadTable(name.clone()));
            }
        }
        Ok(())
    }
}

pub fn interpret_formula(s: &ImplicativeStructure, i: &Interpretation, f: &Formula) -> Result<Elem, FolError> {
    interpret_formula_env(s, i, f, &mut Vec::new())
}

/// Interprets with `env` assigning domain elements to free variables.
pub fn interpret_formula_env(
    s: &ImplicativeStructure,
    i: &Interpretation,
    f: &Formula,
    env: &mut Vec<(String, usize)>,
) -> Result<Elem, FolError> {
    i.check(s)?;
    Interp { s, i }.formula(f, env)
}

struct Interp<'a> {
    s: &'a ImplicativeStructure,
    i: &'a Interpretation,
}

impl Interp<'_> {
    fn term(&self, t: &FoTerm, env: &[(String, usize)]) -> Result<usize, FolError> {
        match t {
            FoTerm::Name(x) => {
                if let Some((_, v)) = env.iter().rev().find(|(y, _)| y == x) {
                    return Ok(*v);
                }
                if let Some(p) = self.i.domain.iter().position(|d| d == x) {
                    return Ok(p);
                }
                self.func(x, &[], env)
            }
            FoTerm::App(g, args) => self.func(g, args, env),
        }
    }

    fn func(&self, g: &str, args: &[FoTerm], env: &[(String, usize)]) -> Result<usize, FolError> {
        let t = self.i.funcs.get(g).ok_or_else(|| FolError::UnknownSymbol(g.to_string()))?;
        if t.arity != args.len() {
            return Err(FolError::Arity { name: g.to_string(), expected: t.arity, got: args.len() });
        }
        let vals = args.iter().map(|a| self.term(a, env)).collect::<Result<Vec<_>, _>>()?;
        Ok(t.get(&vals, self.i.domain.len()))
    }

    fn formula(&self, f: &Formula, env: &mut Vec<(String, usize)>) -> Result<Elem, FolError> {
        let s = self.s;
        Ok(match f {
            Formula::Bot => s.bottom(),
            Formula::Top => s.top(),
            Formula::Pred(p, args) => {
                let t = self.i.preds.get(p).ok_or_else(|| FolError::UnknownSymbol(p.clone()))?;
                if t.arity != args.len() {
                    return Err(FolError::Arity { name: p.clone(), expected: t.arity, got: args.len() });
                }
                let vals = args.iter().map(|a| self.term(a, env)).collect::<Result<Vec<_>, _>>()?;
                t.get(&vals, self.i.domain.len())
            }
            Formula::Eq(a, b) => encode::identity(s, self.term(a, env)? == self.term(b, env)?),
            Formula::Not(a) => encode::not(s, self.formula(a, env)?),
            Formula::Imp(a, b) => s.imp(self.formula(a, env)?, self.formula(b, env)?),
            Formula::And(a, b) => encode::times(s, self.formula(a, env)?, self.formula(b, env)?),
            Formula::Or(a, b) => encode::plus(s, self.formula(a, env)?, self.formula(b, env)?),
            Formula::Iff(a, b) => encode::iff(s, self.formula(a, env)?, self.formula(b, env)?),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let mut family = Vec::with_capacity(self.i.domain.len());
                for d in 0..self.i.domain.len() {
                    env.push((x.clone(), d));
                    let v = self.formula(body, env);
                    env.pop();
                    family.push(v?);
                }
                if matches!(f, Formula::Forall(..)) {
                    encode::forall(s, &family)
                } else {
                    encode::exists(s, &family)
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Tilde,
    Arrow,
    And,
    Or,
    Iff,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, FolError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, len) = if chars[i].is_whitespace() {
            i += 1;
            continue;
        } else if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with("/\\") {
            (Tok::And, 2)
        } else if rest.starts_with("\\/") {
            (Tok::Or, 2)
        } else {
            match chars[i] {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '=' => (Tok::Eq, 1),
                '~' => (Tok::Tilde, 1),
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = i;
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    (Tok::Ident(chars[start..j].iter().collect()), j - start)
                }
                c => return Err(FolError::Parse { col, msg: format!("unexpected character `{c}`") }),
            }
        };
        out.push((col, tok));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

const RESERVED: [&str; 4] = ["bot", "top", "forall", "exists"];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FolError> {
        let col = self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end);
        Err(FolError::Parse { col, msg: msg.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, FolError> {
        let mut a = self.imp()?;
        while self.eat(&Tok::Iff) {
            a = Formula::Iff(Box::new(a), Box::new(self.imp()?));
        }
        Ok(a)
    }

    fn imp(&mut self) -> Result<Formula, FolError> {
        let a = self.or()?;
        if self.eat(&Tok::Arrow) {
            return Ok(Formula::Imp(Box::new(a), Box::new(self.imp()?)));
        }
        Ok(a)
    }

    fn or(&mut self) -> Result<Formula, FolError> {
        let mut a = self.and()?;
        while self.eat(&Tok::Or) {
            a = Formula::Or(Box::new(a), Box::new(self.and()?));
        }
        Ok(a)
    }

    fn and(&mut self) -> Result<Formula, FolError> {
        let mut a = self.prefix()?;
        while self.eat(&Tok::And) {
            a = Formula::And(Box::new(a), Box::new(self.prefix()?));
        }
        Ok(a)
    }

    fn prefix(&mut self) -> Result<Formula, FolError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::Not(Box::new(self.prefix()?)));
        }
        if let Some(Tok::Ident(q)) = self.peek() {
            if q == "forall" || q == "exists" {
                let forall = q == "forall";
                self.pos += 1;
                let x = self.var()?;
                let body = Box::new(self.prefix()?);
                return Ok(if forall { Formula::Forall(x, body) } else { Formula::Exists(x, body) });
            }
        }
        self.atom()
    }

    fn var(&mut self) -> Result<String, FolError> {
        match self.peek() {
            Some(Tok::Ident(x)) if !RESERVED.contains(&x.as_str()) => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            _ => self.err("expected variable"),
        }
    }

    fn atom(&mut self) -> Result<Formula, FolError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(f)
            }
            Some(Tok::Ident(x)) if x == "bot" => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Ident(x)) if x == "top" => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Ident(_)) => {
                let t = self.term()?;
                if self.eat(&Tok::Eq) {
                    return Ok(Formula::Eq(t, self.term()?));
                }
                Ok(match t {
                    FoTerm::Name(p) => Formula::Pred(p, Vec::new()),
                    FoTerm::App(p, args) => Formula::Pred(p, args),
                })
            }
            _ => self.err("expected formula"),
        }
    }

    fn term(&mut self) -> Result<FoTerm, FolError> {
        let name = self.var()?;
        if !self.eat(&Tok::LParen) {
            return Ok(FoTerm::Name(name));
        }
        let mut args = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                args.push(self.term()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return self.err("expected `,` or `)`");
                }
            }
        }
        Ok(FoTerm::App(name, args))
    }
}

/// Binding strength, loosest first: `<->`, `->` (right associative), `\/`, `/\`,
/// then the prefix forms `~`, `forall x`, `exists x`, whose scope is a single prefix formula.
pub fn parse_formula(src: &str) -> Result<Formula, FolError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, end: src.chars().count() + 1 };
    let f = p.iff()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected token");
    }
    Ok(f)
}

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoTerm::Name(x) => f.write_str(x),
            FoTerm::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Formula {
    fn is_atomic(&self) -> bool {
        matches!(self, Formula::Bot | Formula::Top | Formula::Pred(..) | Formula::Eq(..))
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atomic() || matches!(self, Formula::Not(_) | Formula::Forall(..) | Formula::Exists(..)) {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula| {
            a.fmt_child(f)?;
            write!(f, " {op} ")?;
            b.fmt_child(f)
        };
        match self {
            Formula::Bot => f.write_str("bot"),
            Formula::Top => f.write_str("top"),
            Formula::Pred(p, args) => {
                if args.is_empty() {
                    f.write_str(p)
                } else {
                    write!(f, "{}", FoTerm::App(p.clone(), args.clone()))
                }
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(a) => {
                f.write_str("~")?;
                a.fmt_child(f)
            }
            Formula::Imp(a, b) => bin(f, a, "->", b),
            Formula::And(a, b) => bin(f, a, "/\\", b),
            Formula::Or(a, b) => bin(f, a, "\\/", b),
            Formula::Iff(a, b) => bin(f, a, "<->", b),
            Formula::Forall(x, b) => {
                write!(f, "forall {x} ")?;
                b.fmt_child(f)
            }
            Formula::Exists(x, b) => {
                write!(f, "exists {x} ")?;
                b.fmt_child(f)
            }
        }
    }
}

/// A tautology with a lambda term realizing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusEntry {
    pub formula: &'static str,
    pub witness: &'static str,
    pub classical: bool,
}

const fn entry(formula: &'static str, witness: &'static str, classical: bool) -> CorpusEntry {
    CorpusEntry { formula, witness, classical }
}

/// Tautologies over nullary predicates `a b c` and unary predicates `p q`.
pub const TAUTOLOGIES: [CorpusEntry; 26] = [
    entry("a -> a", "^x.x", false),
    entry("a -> b -> a", "^x.^y.x", false),
    entry("(a -> b -> c) -> (a -> b) -> a -> c", "^x.^y.^z.x z (y z)", false),
    entry("(a -> b) -> (b -> c) -> a -> c", "^f.^g.^x.g (f x)", false),
    entry("a /\\ b -> a", "^p.p (^x.^y.x)", false),
    entry("a /\\ b -> b", "^p.p (^x.^y.y)", false),
    entry("a -> b -> a /\\ b", "^x.^y.^z.z x y", false),
    entry("a /\\ b -> b /\\ a", "^p.^z.p (^x.^y.z y x)", false),
    entry("a -> a \\/ b", "^x.^z.^w.z x", false),
    entry("b -> a \\/ b", "^y.^z.^w.w y", false),
    entry("a \\/ b -> b \\/ a", "^d.d (^x.^z.^w.w x) (^y.^z.^w.z y)", false),
    entry("(a -> c) -> (b -> c) -> a \\/ b -> c", "^f.^g.^d.d (^x.f x) (^y.g y)", false),
    entry("bot -> a", "^x.x", false),
    entry("a -> ~~a", "^x.^k.k x", false),
    entry("~~~a -> ~a", "^f.^x.f (^k.k x)", false),
    entry("forall x (p(x) -> p(x))", "^x.x", false),
    entry("forall y ((forall x p(x)) -> p(y))", "^x.x", false),
    entry("forall y (p(y) -> exists x p(x))", "^t.^z.z t", false),
    entry("(exists x (p(x) /\\ q(x))) -> exists x p(x)", "^e.e (^w.^z.z (w (^x.^y.x)))", false),
    entry("(forall x (p(x) /\\ q(x))) -> forall x p(x)", "^w.w (^x.^y.x)", false),
    entry("(exists x p(x)) -> ~(forall x ~p(x))", "^e.^f.e (^x.f x)", false),
    entry("forall x (x = x)", "^x.x", false),
    entry("forall x forall y (x = y -> p(x) -> p(y))", "^e.^u.e u", false),
    entry("((a -> b) -> a) -> a", "cc", true),
    entry("a \\/ ~a", "^z.^w.cc (^k.w (^x.k (z x)))", true),
    entry("~~a -> a", "^f.cc (^k.f k)", true),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditLine {
    pub formula: &'static str,
    pub value: Elem,
    pub witness_value: Option<Elem>,
    /// The witness evaluates below the formula.
    pub realized: bool,
    /// The formula lies in the relevant core separator.
    pub in_core: bool,
}

impl AuditLine {
    pub fn passed(&self) -> bool {
        self.realized && self.in_core
    }
}

/// Checks every corpus entry: witness below the formula, formula in the core.
/// Classical entries are checked against the classical core.
pub fn soundness_audit(s: &ImplicativeStructure, i: &Interpretation) -> Result<Vec<AuditLine>, FolError> {
    let (core_j, core_k): (ElemSet, ElemSet) = cores(s)?;
    TAUTOLOGIES
        .iter()
        .map(|e| {
            let f = parse_formula(e.formula).expect("corpus formula parses");
            let value = interpret_formula(s, i, &f)?;
            let w = parse_term(e.witness).expect("corpus witness parses");
            let witness_value = match eval_term(s, &w, &[]) {
                Ok(v) => Some(v),
                Err(EvalError::Undefined(..)) => None,
                Err(err) => return Err(err.into()),
            };
            let core = if e.classical { core_k } else { core_j };
            Ok(AuditLine {
                formula: e.formula,
                value,
                witness_value,
                realized: witness_value.is_some_and(|v| s.leq(v, value)),
                in_core: core.contains(value),
            })
        })
        .collect()
}

/// Interpretation on `domain` points with `a b c` and `p q` drawn from `values`.
pub fn corpus_interpretation(domain: usize, values: &[Elem]) -> Interpretation {
    let mut it = values.iter().copied().cycle();
    let mut preds = BTreeMap::new();
    for name in ["a", "b", "c"] {
        let v = it.next().unwrap_or(0);
        preds.insert(name.to_string(), Table { arity: 0, values: vec![v] });
    }
    for name in ["p", "q"] {
        let vals: Vec<Elem> = (0..domain).map(|_| it.next().unwrap_or(0)).collect();
        preds.insert(name.to_string(), Table { arity: 1, values: vals });
    }
    Interpretation {
        domain: (0..domain).map(|d| format!("d{d}")).collect(),
        preds,
        funcs: BTreeMap::new(),
    }
}
