//! Implicative structures on finite lattices.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lattice::{Elem, ElemSet, FiniteLattice};

/// Whether the meet-commutation axiom is required for the empty family too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Full,
    Quasi,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Full => f.write_str("full"),
            Kind::Quasi => f.write_str("quasi"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("implication table has {rows} rows for {n} elements")]
    BadShape { rows: usize, n: usize },
    #[error("implication table entry ({a}, {b}) = {value} is out of range")]
    OutOfRange { a: Elem, b: Elem, value: Elem },
    #[error("lattice is not Heyting: {a} -> {b} has no largest candidate")]
    NotHeyting { a: String, b: String },
    #[error("{what} needs {needed} elements, limit is {limit}")]
    GuardExceeded { what: &'static str, needed: usize, limit: usize },
}

/// A finite lattice equipped with an implication table.
#[derive(Clone, PartialEq, Eq)]
pub struct ImplicativeStructure {
    lattice: FiniteLattice,
    imp: Vec<Vec<Elem>>,
    kind: Kind,
    app: Vec<Vec<Option<Elem>>>,
}

impl fmt::Debug for ImplicativeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicativeStructure")
            .field("names", &self.lattice.names())
            .field("kind", &self.kind)
            .field("imp", &self.imp)
            .finish()
    }
}

impl ImplicativeStructure {
    /// Wraps a table without checking the axioms; see [`validate_structure`].
    pub fn new(lattice: FiniteLattice, imp: Vec<Vec<Elem>>, kind: Kind) -> Result<Self, StructureError> {
        let n = lattice.len();
        if imp.len() != n {
            return Err(StructureError::BadShape { rows: imp.len(), n });
        }
        for (a, row) in imp.iter().enumerate() {
            if row.len() != n {
                return Err(StructureError::BadShape { rows: row.len(), n });
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(StructureError::OutOfRange { a, b, value: v });
                }
            }
        }
        let app = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let u: ElemSet = (0..n).filter(|&c| lattice.leq(a, imp[b][c])).collect();
                        if u.is_empty() {
                            None
                        } else {
                            Some(lattice.meet(u))
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(ImplicativeStructure { lattice, imp, kind, app })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        self.lattice.elements()
    }

    pub fn top(&self) -> Elem {
        self.lattice.top()
    }

    pub fn bottom(&self) -> Elem {
        self.lattice.bottom()
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.lattice.leq(a, b)
    }

    pub fn name(&self, e: Elem) -> &str {
        self.lattice.name(e)
    }

    pub fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.imp[a][b]
    }

    pub fn imp_table(&self) -> &[Vec<Elem>] {
        &self.imp
    }

    /// `a -> bottom`
    pub fn neg(&self, a: Elem) -> Elem {
        self.imp[a][self.bottom()]
    }

    /// Application `a b`: the least `c` with `a <= b -> c`, if any such `c` exists.
    pub fn app(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.app[a][b]
    }

    pub fn is_total(&self) -> bool {
        self.app.iter().all(|r| r.iter().all(Option::is_some))
    }
}

/// One failed instance of an axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `a' <= a` but `a -> b` is not below `a' -> b`.
    Antitone { lower: Elem, upper: Elem, b: Elem },
    /// `b <= b'` but `a -> b` is not below `a -> b'`.
    Monotone { a: Elem, lower: Elem, upper: Elem },
    /// `a -> meet(B)` differs from `meet(a -> b : b in B)`.
    MeetCommutation { a: Elem, family: ElemSet, lhs: Elem, rhs: Elem },
}

impl Violation {
    pub fn describe(&self, s: &ImplicativeStructure) -> String {
        let n = |e: Elem| s.name(e).to_string();
        match *self {
            Violation::Antitone { lower, upper, b } => format!(
                "variance: {} <= {} but {} -> {} = {} is not below {} -> {} = {}",
                n(lower), n(upper), n(upper), n(b), n(s.imp(upper, b)), n(lower), n(b), n(s.imp(lower, b))
            ),
            Violation::Monotone { a, lower, upper } => format!(
                "variance: {} <= {} but {} -> {} = {} is not below {} -> {} = {}",
                n(lower), n(upper), n(a), n(lower), n(s.imp(a, lower)), n(a), n(upper), n(s.imp(a, upper))
            ),
            Violation::MeetCommutation { a, family, lhs, rhs } => format!(
                "meet: {} -> meet{{{}}} = {} but meet of implications = {}",
                n(a),
                s.lattice().set_names(family).join(","),
                n(lhs),
                n(rhs)
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest carrier for which every subset is checked.
pub const EXHAUSTIVE_LIMIT: usize = 16;
/// Random families drawn in sampled mode, on top of all families of size at most two.
pub const RANDOM_FAMILIES: usize = 1000;

/// Checks both axioms over every family; refuses carriers above [`EXHAUSTIVE_LIMIT`].
pub fn validate_structure(s: &ImplicativeStructure) -> Result<ValidationReport, StructureError> {
    if s.len() > EXHAUSTIVE_LIMIT {
        return Err(StructureError::GuardExceeded {
            what: "exhaustive validation",
            needed: s.len(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut violations = variance_violations(s);
    let n = s.len();
    let l = s.lattice();
    for a in 0..n {
        // meet_b[m] = meet of family m, rhs[m] = meet of a -> b over family m
        let size = 1usize << n;
        let mut meet_b = vec![l.top(); size];
        let mut rhs = vec![l.top(); size];
        for m in 1..size {
            let low = m.trailing_zeros() as usize;
            let rest = m & (m - 1);
            meet_b[m] = l.meet2(meet_b[rest], low);
            rhs[m] = l.meet2(rhs[rest], s.imp(a, low));
        }
        let start = if s.kind() == Kind::Full { 0 } else { 1 };
        for m in start..size {
            let lhs = s.imp(a, meet_b[m]);
            if lhs != rhs[m] {
                violations.push(Violation::MeetCommutation {
                    a,
                    family: ElemSet(m as u64),
                    lhs,
                    rhs: rhs[m],
                });
            }
        }
    }
    Ok(ValidationReport { mode: ValidationMode::Exhaustive, violations })
}

/// Checks variance fully, and meet commutation on all families of size at most two
/// plus [`RANDOM_FAMILIES`] seeded random families.
pub fn validate_structure_sampled(s: &ImplicativeStructure, seed: u64) -> ValidationReport {
    let mut violations = variance_violations(s);
    let n = s.len();
    let mut families: Vec<ElemSet> = Vec::new();
    if s.kind() == Kind::Full {
        families.push(ElemSet::EMPTY);
    }
    for i in 0..n {
        families.push(ElemSet::singleton(i));
        for j in i + 1..n {
            families.push(ElemSet::singleton(i).with(j));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = ElemSet::full(n).0;
    let mut drawn = 0;
    while drawn < RANDOM_FAMILIES {
        let m = rng.gen::<u64>() & full;
        if m == 0 {
            continue;
        }
        families.push(ElemSet(m));
        drawn += 1;
    }
    check_families(s, &families, &mut violations);
    ValidationReport {
        mode: ValidationMode::Sampled { seed, samples: RANDOM_FAMILIES },
        violations,
    }
}

fn check_families(s: &ImplicativeStructure, families: &[ElemSet], out: &mut Vec<Violation>) {
    let l = s.lattice();
    for &fam in families {
        let m = l.meet(fam);
        for a in s.elements() {
            let lhs = s.imp(a, m);
            let rhs = l.meet_iter(fam.iter().map(|b| s.imp(a, b)));
            if lhs != rhs {
                out.push(Violation::MeetCommutation { a, family: fam, lhs, rhs });
            }
        }
    }
}

fn variance_violations(s: &ImplicativeStructure) -> Vec<Violation> {
    let mut out = Vec::new();
    let l = s.lattice();
    for x in s.elements() {
        for y in l.up_set(x).iter() {
            if x == y {
                continue;
            }
            for c in s.elements() {
                if !l.leq(s.imp(y, c), s.imp(x, c)) {
                    out.push(Violation::Antitone { lower: x, upper: y, b: c });
                }
                if !l.leq(s.imp(c, x), s.imp(c, y)) {
                    out.push(Violation::Monotone { a: c, lower: x, upper: y });
                }
            }
        }
    }
    out
}

/// Relative pseudo-complement: `a -> b` is the largest `c` with `c /\ a <= b`.
pub fn make_heyting(l: &FiniteLattice) -> Result<ImplicativeStructure, StructureError> {
    let n = l.len();
    let mut imp = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let cands: ElemSet = (0..n).filter(|&c| l.leq(l.meet2(c, a), b)).collect();
            let max = cands.iter().find(|&m| cands.is_subset(l.down_set(m)));
            match max {
                Some(m) => imp[a][b] = m,
                None => {
                    return Err(StructureError::NotHeyting {
                        a: l.name(a).to_string(),
                        b: l.name(b).to_string(),
                    })
                }
            }
        }
    }
    ImplicativeStructure::new(l.clone(), imp, Kind::Full)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DummyMode {
    /// `a -> b := b`
    Right,
    /// `a -> b := top`
    Top,
}

pub fn make_dummy(l: &FiniteLattice, mode: DummyMode) -> ImplicativeStructure {
    let n = l.len();
    let imp = (0..n)
        .map(|_| {
            (0..n)
                .map(|b| match mode {
                    DummyMode::Right => b,
                    DummyMode::Top => l.top(),
                })
                .collect()
        })
        .collect();
    ImplicativeStructure::new(l.clone(), imp, Kind::Full).expect("square table")
}

/// A family `A'` and target `b` where `meet(a -> b : a in A')` differs from `join(A') -> b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JoinWitness {
    pub family: ElemSet,
    pub target: Elem,
    pub meet_of_imps: Elem,
    pub imp_of_join: Elem,
}

/// `Ok(None)` when join compatible, otherwise the first failing instance.
pub fn is_join_compatible(s: &ImplicativeStructure) -> Result<Option<JoinWitness>, StructureError> {
    let n = s.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(StructureError::GuardExceeded {
            what: "join compatibility check",
            needed: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let l = s.lattice();
    let size = 1usize << n;
    let mut joins = vec![l.bottom(); size];
    for m in 1..size {
        joins[m] = l.join2(joins[m & (m - 1)], m.trailing_zeros() as usize);
    }
    for b in 0..n {
        let mut lhs = vec![l.top(); size];
        for m in 0..size {
            if m > 0 {
                lhs[m] = l.meet2(lhs[m & (m - 1)], s.imp(m.trailing_zeros() as usize, b));
            }
            let rhs = s.imp(joins[m], b);
            if lhs[m] != rhs {
                return Ok(Some(JoinWitness {
                    family: ElemSet(m as u64),
                    target: b,
                    meet_of_imps: lhs[m],
                    imp_of_join: rhs,
                }));
            }
        }
    }
    Ok(None)
}
