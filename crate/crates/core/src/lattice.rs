//! Finite complete lattices given by an explicit order relation.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a carrier element.
pub type Elem = usize;

/// Hard ceiling imposed by the bitset representation.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of a carrier of at most 64 elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn full(n: usize) -> ElemSet {
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: Elem) -> ElemSet {
        ElemSet(1u64 << e)
    }

    pub fn contains(self, e: Elem) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: Elem) {
        self.0 |= 1u64 << e;
    }

    pub fn remove(&mut self, e: Elem) {
        self.0 &= !(1u64 << e);
    }

    pub fn with(mut self, e: Elem) -> ElemSet {
        self.insert(e);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: ElemSet) -> ElemSet {
        ElemSet(self.0 | o.0)
    }

    pub fn intersection(self, o: ElemSet) -> ElemSet {
        ElemSet(self.0 & o.0)
    }

    pub fn difference(self, o: ElemSet) -> ElemSet {
        ElemSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: ElemSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn first(self) -> Option<Elem> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> ElemSetIter {
        ElemSetIter(self.0)
    }
}

impl FromIterator<Elem> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct ElemSetIter(u64);

impl Iterator for ElemSetIter {
    type Item = Elem;
    fn next(&mut self) -> Option<Elem> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty carrier")]
    EmptyCarrier,
    #[error("carrier has {n} elements, limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order is not antisymmetric: {a} <= {b} and {b} <= {a}")]
    NotAntisymmetric { a: String, b: String },
    #[error("order is not reflexive at {0}")]
    NotReflexive(String),
    #[error("order is not transitive: {a} <= {b} <= {c} but not {a} <= {c}")]
    NotTransitive { a: String, b: String, c: String },
    #[error("not a lattice: {a} and {b} have no {bound}")]
    NotALattice { a: String, b: String, bound: Bound },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Meet,
    Join,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Meet => f.write_str("greatest lower bound"),
            Bound::Join => f.write_str("least upper bound"),
        }
    }
}

/// A finite lattice; finiteness makes it complete.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    /// `up[a]` = { b : a <= b }
    up: Vec<ElemSet>,
    /// `down[a]` = { b : b <= a }
    down: Vec<ElemSet>,
    meet_tab: Vec<Vec<Elem>>,
    join_tab: Vec<Vec<Elem>>,
    top: Elem,
    bottom: Elem,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("names", &self.names)
            .field("up", &self.up)
            .finish()
    }
}

/// Builds a lattice from element names and generating pairs `(a, b)` meaning `a <= b`.
/// The order is the reflexive-transitive closure of the pairs.
pub fn build_lattice<S: AsRef<str>>(
    elements: &[S],
    pairs: &[(S, S)],
) -> Result<FiniteLattice, LatticeError> {
    build_lattice_with_limit(elements, pairs, MAX_ELEMENTS)
}

pub fn build_lattice_with_limit<S: AsRef<str>>(
    elements: &[S],
    pairs: &[(S, S)],
    limit: usize,
) -> Result<FiniteLattice, LatticeError> {
    let n = elements.len();
    if n == 0 {
        return Err(LatticeError::EmptyCarrier);
    }
    let limit = limit.min(MAX_ELEMENTS);
    if n > limit {
        return Err(LatticeError::TooLarge { n, limit });
    }
    let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    let index = name_index(&names)?;
    let mut up: Vec<ElemSet> = (0..n).map(ElemSet::singleton).collect();
    for (a, b) in pairs {
        let ia = *index
            .get(a.as_ref())
            .ok_or_else(|| LatticeError::UnknownElement(a.as_ref().to_string()))?;
        let ib = *index
            .get(b.as_ref())
            .ok_or_else(|| LatticeError::UnknownElement(b.as_ref().to_string()))?;
        up[ia].insert(ib);
    }
    // Warshall closure on rows.
    for k in 0..n {
        for i in 0..n {
            if up[i].contains(k) {
                up[i] = up[i].union(up[k]);
            }
        }
    }
    FiniteLattice::from_up_sets(names, up)
}

fn name_index(names: &[String]) -> Result<HashMap<String, Elem>, LatticeError> {
    let mut index = HashMap::new();
    for (i, s) in names.iter().enumerate() {
        if index.insert(s.clone(), i).is_some() {
            return Err(LatticeError::DuplicateName(s.clone()));
        }
    }
    Ok(index)
}

impl FiniteLattice {
    /// Builds a lattice from an order given as a predicate.
    pub fn from_order(
        names: Vec<String>,
        leq: impl Fn(Elem, Elem) -> bool,
    ) -> Result<FiniteLattice, LatticeError> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge { n, limit: MAX_ELEMENTS });
        }
        let up = (0..n)
            .map(|a| (0..n).filter(|&b| leq(a, b)).collect())
            .collect();
        FiniteLattice::from_up_sets(names, up)
    }

    /// Builds a lattice from up-sets; the relation must already be a partial order.
    pub fn from_up_sets(names: Vec<String>, up: Vec<ElemSet>) -> Result<FiniteLattice, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::EmptyCarrier);
        }
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge { n, limit: MAX_ELEMENTS });
        }
        let index = name_index(&names)?;
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(LatticeError::NotReflexive(names[a].clone()));
            }
            for b in up[a].iter() {
                if b != a && up[b].contains(a) {
                    return Err(LatticeError::NotAntisymmetric {
                        a: names[a].clone(),
                        b: names[b].clone(),
                    });
                }
                for c in up[b].iter() {
                    if !up[a].contains(c) {
                        return Err(LatticeError::NotTransitive {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }
        let mut down = vec![ElemSet::EMPTY; n];
        for a in 0..n {
            for b in up[a].iter() {
                down[b].insert(a);
            }
        }
        let mut meet_tab = vec![vec![0; n]; n];
        let mut join_tab = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let lower = down[a].intersection(down[b]);
                let m = lower.iter().find(|&m| lower.is_subset(down[m])).ok_or_else(|| {
                    LatticeError::NotALattice {
                        a: names[a].clone(),
                        b: names[b].clone(),
                        bound: Bound::Meet,
                    }
                })?;
                let upper = up[a].intersection(up[b]);
                let j = upper.iter().find(|&j| upper.is_subset(up[j])).ok_or_else(|| {
                    LatticeError::NotALattice {
                        a: names[a].clone(),
                        b: names[b].clone(),
                        bound: Bound::Join,
                    }
                })?;
                meet_tab[a][b] = m;
                meet_tab[b][a] = m;
                join_tab[a][b] = j;
                join_tab[b][a] = j;
            }
        }
        let all = ElemSet::full(n);
        let top = (0..n).find(|&t| down[t] == all).ok_or_else(|| LatticeError::NotALattice {
            a: names[0].clone(),
            b: names[0].clone(),
            bound: Bound::Join,
        })?;
        let bottom = (0..n).find(|&b| up[b] == all).ok_or_else(|| LatticeError::NotALattice {
            a: names[0].clone(),
            b: names[0].clone(),
            bound: Bound::Meet,
        })?;
        Ok(FiniteLattice { names, index, up, down, meet_tab, join_tab, top, bottom })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn lookup(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.up[a].contains(b)
    }

    pub fn up_set(&self, a: Elem) -> ElemSet {
        self.up[a]
    }

    pub fn down_set(&self, a: Elem) -> ElemSet {
        self.down[a]
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn meet2(&self, a: Elem, b: Elem) -> Elem {
        self.meet_tab[a][b]
    }

    pub fn join2(&self, a: Elem, b: Elem) -> Elem {
        self.join_tab[a][b]
    }

    /// Meet of an arbitrary subset; the empty meet is the top.
    pub fn meet(&self, s: ElemSet) -> Elem {
        s.iter().fold(self.top, |m, e| self.meet_tab[m][e])
    }

    /// Join of an arbitrary subset; the empty join is the bottom.
    pub fn join(&self, s: ElemSet) -> Elem {
        s.iter().fold(self.bottom, |m, e| self.join_tab[m][e])
    }

    pub fn meet_iter(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(self.top, |m, e| self.meet_tab[m][e])
    }

    pub fn join_iter(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(self.bottom, |m, e| self.join_tab[m][e])
    }

    pub fn is_upward_closed(&self, s: ElemSet) -> bool {
        s.iter().all(|a| self.up[a].is_subset(s))
    }

    pub fn upward_closure(&self, s: ElemSet) -> ElemSet {
        s.iter().fold(ElemSet::EMPTY, |acc, a| acc.union(self.up[a]))
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.up[a].iter() {
                if b == a {
                    continue;
                }
                let between = self.up[a].intersection(self.down[b]);
                if between.len() == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    self.meet2(a, self.join2(b, c)) == self.join2(self.meet2(a, b), self.meet2(a, c))
                })
            })
        })
    }

    /// Order automorphisms, found by backtracking; intended for small carriers.
    pub fn automorphisms(&self) -> Vec<Vec<Elem>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.auto_rec(0, &mut perm, &mut used, &mut out);
        out
    }

    fn auto_rec(&self, i: usize, perm: &mut Vec<Elem>, used: &mut Vec<bool>, out: &mut Vec<Vec<Elem>>) {
        let n = self.len();
        if i == n {
            out.push(perm.clone());
            return;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            let ok = (0..i).all(|j| {
                self.leq(j, i) == self.leq(perm[j], c) && self.leq(i, j) == self.leq(c, perm[j])
            });
            if ok {
                perm[i] = c;
                used[c] = true;
                self.auto_rec(i + 1, perm, used, out);
                used[c] = false;
            }
        }
        perm[i] = usize::MAX;
    }

    pub fn set_names(&self, s: ElemSet) -> Vec<&str> {
        s.iter().map(|e| self.name(e)).collect()
    }
}

/// Makes names pairwise distinct by suffixing repeated ones.
pub fn dedup_names(names: Vec<String>) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    names
        .into_iter()
        .map(|n| {
            if seen.insert(n.clone()) {
                return n;
            }
            let mut k = 1;
            loop {
                let cand = format!("{n}_{k}");
                if seen.insert(cand.clone()) {
                    return cand;
                }
                k += 1;
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d4() -> FiniteLattice {
        build_lattice(
            &["bot", "x", "y", "top"],
            &[("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")],
        )
        .unwrap()
    }

    // Brute-force glb straight from the order, independent of the tables.
    fn glb(l: &FiniteLattice, s: &[Elem]) -> Elem {
        let lower: Vec<Elem> = l.elements().filter(|&c| s.iter().all(|&x| l.leq(c, x))).collect();
        let g: Vec<Elem> = lower
            .iter()
            .copied()
            .filter(|&c| lower.iter().all(|&d| l.leq(d, c)))
            .collect();
        assert_eq!(g.len(), 1);
        g[0]
    }

    #[test]
    fn d4_meets_and_joins() {
        let l = d4();
        let (bot, x, y, top) = (0, 1, 2, 3);
        assert_eq!(l.meet2(x, y), bot);
        assert_eq!(l.join2(x, y), top);
        assert_eq!(l.meet(ElemSet::EMPTY), top);
        assert_eq!(l.join(ElemSet::EMPTY), bot);
        for s in 0..16u64 {
            let set = ElemSet(s);
            let v: Vec<Elem> = set.iter().collect();
            assert_eq!(l.meet(set), glb(&l, &v));
        }
        assert!(l.is_distributive());
        assert_eq!(l.covers().len(), 4);
        assert_eq!(l.automorphisms().len(), 2);
    }

    #[test]
    fn errors_carry_witnesses() {
        assert_eq!(build_lattice::<&str>(&[], &[]), Err(LatticeError::EmptyCarrier));
        let e = build_lattice(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(e, LatticeError::NotAntisymmetric { .. }));
        let e = build_lattice(&["a", "b"], &[]).unwrap_err();
        assert!(matches!(e, LatticeError::NotALattice { bound: Bound::Meet, .. }));
        // Two maximal elements above a common bottom.
        let e = build_lattice(&["z", "a", "b"], &[("z", "a"), ("z", "b")]).unwrap_err();
        assert!(matches!(e, LatticeError::NotALattice { bound: Bound::Join, .. }));
        let e = build_lattice_with_limit(&["a", "b"], &[("a", "b")], 1).unwrap_err();
        assert_eq!(e, LatticeError::TooLarge { n: 2, limit: 1 });
    }

    #[test]
    fn m3_is_not_distributive() {
        let l = build_lattice(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap();
        assert!(!l.is_distributive());
        assert_eq!(l.automorphisms().len(), 6);
    }

    #[test]
    fn closure_is_transitive() {
        let l = build_lattice(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(l.leq(0, 2));
        assert_eq!(l.bottom(), 0);
        assert_eq!(l.top(), 2);
    }
}
