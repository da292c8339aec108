//! Interpreting lambda terms as elements of a structure.

use thiserror::Error;

use crate::combinator::{combinator, Combinator};
use crate::lambda::{Param, Term};
use crate::lattice::Elem;
use crate::structure::ImplicativeStructure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("application {0} {1} is undefined")]
    Undefined(String, String),
    #[error("unknown element `{0}`")]
    UnknownParameter(String),
    #[error("binder depth {depth} exceeds the limit {limit}")]
    DepthExceeded { depth: usize, limit: usize },
    #[error("variable `{0}` is bound twice in the context")]
    DuplicateVariable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub max_binder_depth: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { max_binder_depth: 6 }
    }
}

/// `a b`, the least `c` with `a <= b -> c`.
pub fn apply(s: &ImplicativeStructure, a: Elem, b: Elem) -> Option<Elem> {
    s.app(a, b)
}

/// Meet of `a -> f(a)` over the points where `f` is defined.
pub fn abstraction(s: &ImplicativeStructure, f: &[Option<Elem>]) -> Elem {
    s.lattice()
        .meet_iter(f.iter().enumerate().filter_map(|(a, v)| v.map(|v| s.imp(a, v))))
}

pub fn eval_term(s: &ImplicativeStructure, t: &Term, env: &[(String, Elem)]) -> Result<Elem, EvalError> {
    eval_term_with(s, t, env, &EvalOptions::default())
}

pub fn eval_term_with(
    s: &ImplicativeStructure,
    t: &Term,
    env: &[(String, Elem)],
    opts: &EvalOptions,
) -> Result<Elem, EvalError> {
    let depth = t.binder_depth();
    if depth > opts.max_binder_depth {
        return Err(EvalError::DepthExceeded { depth, limit: opts.max_binder_depth });
    }
    let mut ev = Evaluator { s, cc: None, env: env.iter().map(|(x, e)| (x.as_str(), *e)).collect() };
    ev.eval(t)
}

struct Evaluator<'a> {
    s: &'a ImplicativeStructure,
    cc: Option<Elem>,
    env: Vec<(&'a str, Elem)>,
}

impl<'a> Evaluator<'a> {
    fn eval(&mut self, t: &'a Term) -> Result<Elem, EvalError> {
        match t {
            Term::Var(x) => self
                .env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, e)| *e)
                .ok_or_else(|| EvalError::UnboundVariable(x.clone())),
            Term::Param(Param::Elem(e)) => {
                if *e < self.s.len() {
                    Ok(*e)
                } else {
                    Err(EvalError::UnknownParameter(e.to_string()))
                }
            }
            Term::Param(Param::Name(n)) => {
                self.s.lattice().lookup(n).ok_or_else(|| EvalError::UnknownParameter(n.clone()))
            }
            Term::CC => Ok(*self.cc.get_or_insert_with(|| combinator(self.s, Combinator::CC))),
            Term::App(f, a) => {
                let fv = self.eval(f)?;
                let av = self.eval(a)?;
                self.s
                    .app(fv, av)
                    .ok_or_else(|| EvalError::Undefined(self.s.name(fv).to_string(), self.s.name(av).to_string()))
            }
            Term::Abs(x, body) => {
                let l = self.s.lattice();
                let mut acc = l.top();
                for a in self.s.elements() {
                    self.env.push((x.as_str(), a));
                    let r = self.eval(body);
                    self.env.pop();
                    match r {
                        Ok(v) => acc = l.meet2(acc, self.s.imp(a, v)),
                        Err(EvalError::Undefined(..)) => {}
                        Err(e) => return Err(e),
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// Variables with their types, each bound once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypingContext {
    bindings: Vec<(String, Elem)>,
}

impl TypingContext {
    pub fn new(bindings: Vec<(String, Elem)>) -> Result<Self, EvalError> {
        for (i, (x, _)) in bindings.iter().enumerate() {
            if bindings[..i].iter().any(|(y, _)| y == x) {
                return Err(EvalError::DuplicateVariable(x.clone()));
            }
        }
        Ok(TypingContext { bindings })
    }

    pub fn bindings(&self) -> &[(String, Elem)] {
        &self.bindings
    }
}

/// Free variables covered by the context, value defined, and value below `a`.
pub fn check_typing(s: &ImplicativeStructure, ctx: &TypingContext, t: &Term, a: Elem) -> Result<bool, EvalError> {
    if t.free_vars().iter().any(|x| !ctx.bindings.iter().any(|(y, _)| y == x)) {
        return Ok(false);
    }
    match eval_term(s, t, &ctx.bindings) {
        Ok(v) => Ok(s.leq(v, a)),
        Err(EvalError::Undefined(..)) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_term;
    use crate::structure::tests::{chain, d4};
    use crate::structure::{make_dummy, make_heyting, DummyMode};

    fn ev(s: &ImplicativeStructure, src: &str) -> Elem {
        eval_term(s, &parse_term(src).unwrap(), &[]).unwrap()
    }

    #[test]
    fn combinator_terms_match_meets() {
        for s in [
            make_heyting(&d4()).unwrap(),
            make_dummy(&chain(3), DummyMode::Right),
            make_dummy(&d4(), DummyMode::Top),
        ] {
            for c in Combinator::ALL {
                if let Some(src) = c.term_text() {
                    assert_eq!(ev(&s, src), combinator(&s, c), "{c}");
                }
            }
        }
    }

    #[test]
    fn dummy_top_regressions() {
        let s = make_dummy(&chain(3), DummyMode::Top);
        assert_eq!(ev(&s, "(^x.x) (^x.x)"), s.bottom());
        assert_eq!(ev(&s, "^x.x"), s.top());
    }

    #[test]
    fn errors() {
        let s = make_heyting(&chain(2)).unwrap();
        let e = eval_term(&s, &parse_term("x").unwrap(), &[]).unwrap_err();
        assert_eq!(e, EvalError::UnboundVariable("x".into()));
        let e = eval_term(&s, &parse_term("#nope").unwrap(), &[]).unwrap_err();
        assert_eq!(e, EvalError::UnknownParameter("nope".into()));
        let deep = parse_term("^a.^b.^c.^d.^e.^f.^g.a").unwrap();
        assert!(matches!(eval_term(&s, &deep, &[]), Err(EvalError::DepthExceeded { depth: 7, limit: 6 })));
        assert!(TypingContext::new(vec![("x".into(), 0), ("x".into(), 1)]).is_err());
    }

    #[test]
    fn typing_judgements() {
        let s = make_heyting(&chain(3)).unwrap();
        let ctx = TypingContext::new(vec![("x".into(), 1)]).unwrap();
        assert!(check_typing(&s, &ctx, &Term::var("x"), 1).unwrap());
        assert!(!check_typing(&s, &ctx, &Term::var("x"), 0).unwrap());
        assert!(!check_typing(&s, &ctx, &Term::var("y"), 2).unwrap());
    }

    #[test]
    fn abstraction_of_identity() {
        let s = make_heyting(&d4()).unwrap();
        let f: Vec<Option<Elem>> = (0..4).map(Some).collect();
        assert_eq!(abstraction(&s, &f), combinator(&s, Combinator::I));
        assert_eq!(abstraction(&s, &[None; 4]), s.top());
    }
}
