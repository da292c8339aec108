//! The Heyting algebra of an implicative algebra modulo mutual entailment.

use std::fmt::Write;

use thiserror::Error;

use crate::encode::{plus, times};
use crate::lattice::{Elem, ElemSet};
use crate::separator::ImplicativeAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("{op} is not compatible with entailment at ({a}, {b})")]
    NotWellDefined { op: &'static str, a: String, b: String },
    #[error("Heyting law fails: {0}")]
    HeytingLaw(String),
    #[error("the two descriptions of {0} disagree")]
    Mismatch(&'static str),
}

/// Classes are numbered by their least member, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientHA {
    class_of: Vec<usize>,
    members: Vec<ElemSet>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    imp: Vec<Vec<usize>>,
    top: usize,
    bottom: usize,
}

pub fn build_quotient(alg: &ImplicativeAlgebra) -> Result<QuotientHA, QuotientError> {
    let s = alg.structure();
    let sep = alg.sep();
    let n = s.len();
    let ent = |a: Elem, b: Elem| sep.contains(s.imp(a, b));
    let mut reps: Vec<Elem> = Vec::new();
    let mut class_of = vec![0; n];
    for a in 0..n {
        match reps.iter().position(|&r| ent(a, r) && ent(r, a)) {
            Some(c) => class_of[a] = c,
            None => {
                class_of[a] = reps.len();
                reps.push(a);
            }
        }
    }
    let k = reps.len();
    let mut members = vec![ElemSet::EMPTY; k];
    for a in 0..n {
        members[class_of[a]].insert(a);
    }
    let leq: Vec<Vec<bool>> = (0..k).map(|x| (0..k).map(|y| ent(reps[x], reps[y])).collect()).collect();
    for a in 0..n {
        for b in 0..n {
            if ent(a, b) != leq[class_of[a]][class_of[b]] {
                return Err(QuotientError::NotWellDefined {
                    op: "entailment",
                    a: s.name(a).into(),
                    b: s.name(b).into(),
                });
            }
        }
    }
    let mut tables = Vec::new();
    for (op, f) in [
        ("meet", &(|a, b| times(s, a, b)) as &dyn Fn(Elem, Elem) -> Elem),
        ("join", &|a, b| plus(s, a, b)),
        ("implication", &|a, b| s.imp(a, b)),
    ] {
        let tab: Vec<Vec<usize>> =
            (0..k).map(|x| (0..k).map(|y| class_of[f(reps[x], reps[y])]).collect()).collect();
        for a in 0..n {
            for b in 0..n {
                if class_of[f(a, b)] != tab[class_of[a]][class_of[b]] {
                    return Err(QuotientError::NotWellDefined { op, a: s.name(a).into(), b: s.name(b).into() });
                }
            }
        }
        tables.push(tab);
    }
    let imp = tables.pop().expect("three tables");
    let join = tables.pop().expect("three tables");
    let meet = tables.pop().expect("three tables");
    let top = class_of[s.top()];
    let bottom = class_of[s.bottom()];
    if members[top] != sep {
        return Err(QuotientError::Mismatch("top"));
    }
    let negated: ElemSet = (0..n).filter(|&c| sep.contains(s.neg(c))).collect();
    if members[bottom] != negated {
        return Err(QuotientError::Mismatch("bottom"));
    }
    let q = QuotientHA { class_of, members, leq, meet, join, imp, top, bottom };
    if let Some(v) = q.heyting_violations().into_iter().next() {
        return Err(QuotientError::HeytingLaw(v));
    }
    Ok(q)
}

impl QuotientHA {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn class_of(&self, e: Elem) -> usize {
        self.class_of[e]
    }

    pub fn members(&self, c: usize) -> ElemSet {
        self.members[c]
    }

    pub fn representative(&self, c: usize) -> Elem {
        self.members[c].first().expect("classes are nonempty")
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn imp(&self, x: usize, y: usize) -> usize {
        self.imp[x][y]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn neg(&self, x: usize) -> usize {
        self.imp[x][self.bottom]
    }

    pub fn is_boolean(&self) -> bool {
        (0..self.len()).all(|x| self.neg(self.neg(x)) == x)
    }

    /// Descriptions of every failed Heyting algebra law on the class tables.
    pub fn heyting_violations(&self) -> Vec<String> {
        let k = self.len();
        let le = |x: usize, y: usize| self.leq[x][y];
        let mut out = Vec::new();
        for x in 0..k {
            if !le(x, x) {
                out.push(format!("reflexivity at {x}"));
            }
            if !le(x, self.top) || !le(self.bottom, x) {
                out.push(format!("bounds at {x}"));
            }
            for y in 0..k {
                if x != y && le(x, y) && le(y, x) {
                    out.push(format!("antisymmetry at {x} {y}"));
                }
                let m = self.meet[x][y];
                let j = self.join[x][y];
                let i = self.imp[x][y];
                if !le(m, x) || !le(m, y) || !le(x, j) || !le(y, j) {
                    out.push(format!("bounds of {x} {y}"));
                }
                for z in 0..k {
                    if le(x, y) && le(y, z) && !le(x, z) {
                        out.push(format!("transitivity at {x} {y} {z}"));
                    }
                    if le(z, x) && le(z, y) && !le(z, m) {
                        out.push(format!("meet of {x} {y} is not greatest below {z}"));
                    }
                    if le(x, z) && le(y, z) && !le(j, z) {
                        out.push(format!("join of {x} {y} is not least above {z}"));
                    }
                    if le(z, i) != le(self.meet[z][x], y) {
                        out.push(format!("residuation at {z} {x} {y}"));
                    }
                }
            }
        }
        out
    }

    /// Hasse diagram as a dot-like digraph; node labels are the class members.
    pub fn graph(&self, alg: &ImplicativeAlgebra) -> String {
        let s = alg.structure();
        let mut out = String::from("digraph quotient {\n");
        for c in 0..self.len() {
            let names = s.lattice().set_names(self.members[c]).join(" ");
            writeln!(out, "  c{c} [label=\"{names}\"];").expect("string write");
        }
        let k = self.len();
        for x in 0..k {
            for y in 0..k {
                let strict = |a: usize, b: usize| a != b && self.leq[a][b];
                if strict(x, y) && !(0..k).any(|z| strict(x, z) && strict(z, y)) {
                    writeln!(out, "  c{x} -> c{y};").expect("string write");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
