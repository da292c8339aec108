//! Separators, the algebras they determine, and their classification.

use std::fmt;

use thiserror::Error;

use crate::combinator::{combinator, Combinator};
use crate::lattice::{Elem, ElemSet};
use crate::structure::{ImplicativeStructure, StructureError, EXHAUSTIVE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparatorError {
    #[error("application {a} {b} is undefined")]
    UndefinedApplication { a: String, b: String },
    #[error("not a separator: {0}")]
    NotASeparator(String),
    #[error(transparent)]
    Guard(#[from] StructureError),
}

/// A named subset of the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub members: ElemSet,
    pub name: Option<String>,
}

impl Separator {
    pub fn new(members: ElemSet) -> Separator {
        Separator { members, name: None }
    }

    pub fn named(name: impl Into<String>, members: ElemSet) -> Separator {
        Separator { members, name: Some(name.into()) }
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(e)
    }
}

/// A structure together with a separator on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicativeAlgebra {
    structure: ImplicativeStructure,
    separator: Separator,
}

impl ImplicativeAlgebra {
    pub fn new(structure: ImplicativeStructure, separator: Separator) -> Result<Self, SeparatorError> {
        if let Some(reason) = separator_failure(&structure, separator.members) {
            return Err(SeparatorError::NotASeparator(reason));
        }
        Ok(ImplicativeAlgebra { structure, separator })
    }

    pub fn structure(&self) -> &ImplicativeStructure {
        &self.structure
    }

    pub fn separator(&self) -> &Separator {
        &self.separator
    }

    pub fn sep(&self) -> ElemSet {
        self.separator.members
    }

    /// `a |- b` iff `a -> b` is in the separator.
    pub fn entails(&self, a: Elem, b: Elem) -> bool {
        self.separator.members.contains(self.structure.imp(a, b))
    }
}

/// First failed separator condition, if any.
pub fn separator_failure(s: &ImplicativeStructure, set: ElemSet) -> Option<String> {
    let l = s.lattice();
    if !set.is_subset(l.all()) {
        return Some("set mentions elements outside the carrier".into());
    }
    for a in set.iter() {
        for b in l.up_set(a).iter() {
            if !set.contains(b) {
                return Some(format!("not upward closed: {} in, {} out", s.name(a), s.name(b)));
            }
        }
    }
    let k = combinator(s, Combinator::K);
    if !set.contains(k) {
        return Some(format!("K = {} is missing", s.name(k)));
    }
    let sc = combinator(s, Combinator::S);
    if !set.contains(sc) {
        return Some(format!("S = {} is missing", s.name(sc)));
    }
    if let Some((a, b)) = modus_ponens_failure(s, set) {
        return Some(format!(
            "not closed under modus ponens: {} and {} -> {} in, {} out",
            s.name(a),
            s.name(a),
            s.name(b),
            s.name(b)
        ));
    }
    None
}

pub fn is_separator(s: &ImplicativeStructure, set: ElemSet) -> bool {
    separator_failure(s, set).is_none()
}

fn modus_ponens_failure(s: &ImplicativeStructure, set: ElemSet) -> Option<(Elem, Elem)> {
    for a in set.iter() {
        for b in s.elements() {
            if set.contains(s.imp(a, b)) && !set.contains(b) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Closure under application; `None` when some application between members is undefined.
fn application_closed(s: &ImplicativeStructure, set: ElemSet) -> Option<bool> {
    let mut closed = true;
    for a in set.iter() {
        for b in set.iter() {
            closed &= set.contains(s.app(a, b)?);
        }
    }
    Some(closed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorReport {
    pub upward_closed: bool,
    pub contains_k: bool,
    pub contains_s: bool,
    pub modus_ponens: bool,
    /// Closure under application; `None` if an application between members is undefined.
    pub application_closed: Option<bool>,
    pub is_separator: bool,
    pub consistent: bool,
    pub classical: bool,
    pub filter: bool,
    pub principal: bool,
    pub fork_member: bool,
    /// Number of classes of mutual entailment, when the set is a separator.
    pub classes: Option<usize>,
    pub ultra: bool,
    /// Maximality among consistent separators, checked by enumeration on small carriers.
    pub ultra_by_enumeration: Option<bool>,
}

/// Carriers up to this size get the enumeration cross-check for ultra separators.
pub const ULTRA_ENUMERATION_LIMIT: usize = 5;

pub fn classify_separator(s: &ImplicativeStructure, set: ElemSet) -> SeparatorReport {
    let l = s.lattice();
    let upward_closed = l.is_upward_closed(set);
    let contains_k = set.contains(combinator(s, Combinator::K));
    let contains_s = set.contains(combinator(s, Combinator::S));
    let modus_ponens = modus_ponens_failure(s, set).is_none();
    let is_separator = upward_closed && contains_k && contains_s && modus_ponens;
    let consistent = !set.contains(s.bottom());
    let classical = set.contains(combinator(s, Combinator::CC));
    let filter = !set.is_empty()
        && upward_closed
        && set.iter().all(|a| set.iter().all(|b| set.contains(l.meet2(a, b))));
    let principal = !set.is_empty() && upward_closed && set.contains(l.meet(set));
    let classes = is_separator.then(|| class_count(s, set));
    let ultra = is_separator && consistent && classes == Some(2);
    let ultra_by_enumeration =
        (s.len() <= ULTRA_ENUMERATION_LIMIT).then(|| is_separator && consistent && is_maximal_consistent(s, set));
    SeparatorReport {
        upward_closed,
        contains_k,
        contains_s,
        modus_ponens,
        application_closed: application_closed(s, set),
        is_separator,
        consistent,
        classical,
        filter,
        principal,
        fork_member: set.contains(combinator(s, Combinator::Fork)),
        classes,
        ultra,
        ultra_by_enumeration,
    }
}

fn class_count(s: &ImplicativeStructure, set: ElemSet) -> usize {
    let ent = |a: Elem, b: Elem| set.contains(s.imp(a, b));
    let mut reps: Vec<Elem> = Vec::new();
    for a in s.elements() {
        if !reps.iter().any(|&r| ent(a, r) && ent(r, a)) {
            reps.push(a);
        }
    }
    reps.len()
}

/// No consistent separator strictly contains `set`.
fn is_maximal_consistent(s: &ImplicativeStructure, set: ElemSet) -> bool {
    let full = s.lattice().all().0;
    let bot = s.bottom();
    // supersets of `set` avoiding bottom
    let free = full & !set.0 & !(1u64 << bot);
    let mut sub = free;
    loop {
        if sub != 0 && is_separator(s, ElemSet(set.0 | sub)) {
            return false;
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    true
}

/// Every separator of a carrier of at most sixteen elements, in increasing bitset order.
pub fn enumerate_separators(s: &ImplicativeStructure) -> Result<Vec<ElemSet>, SeparatorError> {
    let n = s.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(StructureError::GuardExceeded { what: "separator enumeration", needed: n, limit: EXHAUSTIVE_LIMIT }.into());
    }
    let l = s.lattice();
    let k = combinator(s, Combinator::K);
    let sc = combinator(s, Combinator::S);
    let need = ElemSet::singleton(k).with(sc);
    Ok((0..1u64 << n)
        .map(ElemSet)
        .filter(|&set| need.is_subset(set) && l.is_upward_closed(set) && modus_ponens_failure(s, set).is_none())
        .collect())
}

/// Upward closure of the application closure of `X` together with `K` and `S`.
pub fn generate_separator(s: &ImplicativeStructure, gens: ElemSet) -> Result<ElemSet, SeparatorError> {
    let mut cur = gens.with(combinator(s, Combinator::K)).with(combinator(s, Combinator::S));
    loop {
        let mut next = cur;
        for a in cur.iter() {
            for b in cur.iter() {
                match s.app(a, b) {
                    Some(c) => next.insert(c),
                    None => {
                        return Err(SeparatorError::UndefinedApplication {
                            a: s.name(a).to_string(),
                            b: s.name(b).to_string(),
                        })
                    }
                }
            }
        }
        if next == cur {
            break;
        }
        cur = next;
    }
    Ok(s.lattice().upward_closure(cur))
}

/// The intuitionistic core `Sep({})` and the classical core `Sep({cc})`.
pub fn cores(s: &ImplicativeStructure) -> Result<(ElemSet, ElemSet), SeparatorError> {
    let j = generate_separator(s, ElemSet::EMPTY)?;
    let k = generate_separator(s, ElemSet::singleton(combinator(s, Combinator::CC)))?;
    Ok((j, k))
}

/// `(a -> b) in S` iff `b` is in the separator generated by `S` and `a`.
pub fn deduction_holds(s: &ImplicativeStructure, sep: ElemSet, a: Elem, b: Elem) -> Result<bool, SeparatorError> {
    let lhs = sep.contains(s.imp(a, b));
    let rhs = generate_separator(s, sep.with(a))?.contains(b);
    Ok(lhs == rhs)
}

impl fmt::Display for SeparatorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "separator: {}", yn(self.is_separator))?;
        writeln!(f, "upward-closed: {}", yn(self.upward_closed))?;
        writeln!(f, "contains-K: {}", yn(self.contains_k))?;
        writeln!(f, "contains-S: {}", yn(self.contains_s))?;
        writeln!(f, "modus-ponens: {}", yn(self.modus_ponens))?;
        match self.application_closed {
            Some(b) => writeln!(f, "application-closed: {}", yn(b))?,
            None => writeln!(f, "application-closed: undefined")?,
        }
        writeln!(f, "consistent: {}", yn(self.consistent))?;
        writeln!(f, "classical: {}", yn(self.classical))?;
        writeln!(f, "filter: {}", yn(self.filter))?;
        writeln!(f, "principal: {}", yn(self.principal))?;
        writeln!(f, "fork-member: {}", yn(self.fork_member))?;
        match self.classes {
            Some(c) => writeln!(f, "classes: {c}")?,
            None => writeln!(f, "classes: n/a")?,
        }
        write!(f, "ultra: {}", yn(self.ultra))
    }
}
