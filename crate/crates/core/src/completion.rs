//! Completing a quasi structure by adjoining a new top.

use crate::combinator::{combinator, Combinator};
use crate::lattice::{dedup_names, Elem, ElemSet, FiniteLattice};
use crate::structure::{ImplicativeStructure, Kind, EXHAUSTIVE_LIMIT};

/// The completed structure; old elements keep their indices and the new top comes last.
#[derive(Debug, Clone)]
pub struct Completion {
    pub structure: ImplicativeStructure,
    pub embedding: Vec<Elem>,
    pub new_top: Elem,
}

pub fn complete_quasi(a: &ImplicativeStructure) -> Completion {
    let n = a.len();
    let la = a.lattice();
    let mut names: Vec<String> = la.names().to_vec();
    names.push("top_B".into());
    let names = dedup_names(names);
    let t = n;
    let lattice = FiniteLattice::from_order(names, |x, y| y == t || (x < n && y < n && la.leq(x, y)))
        .expect("adjoining a top keeps a lattice");
    let imp = (0..=n)
        .map(|x| {
            (0..=n)
                .map(|y| {
                    if y == t {
                        t
                    } else if x == t {
                        a.imp(la.top(), y)
                    } else {
                        a.imp(x, y)
                    }
                })
                .collect()
        })
        .collect();
    Completion {
        structure: ImplicativeStructure::new(lattice, imp, Kind::Full).expect("square table"),
        embedding: (0..n).collect(),
        new_top: t,
    }
}

impl Completion {
    /// Image of a separator of the original structure, with the new top added.
    pub fn extend_separator(&self, sep: ElemSet) -> ElemSet {
        sep.iter().map(|e| self.embedding[e]).collect::<ElemSet>().with(self.new_top)
    }

    /// Failures of the embedding laws: order reflection, nonempty meets,
    /// implication, and the images of `K` and `S`.
    pub fn embedding_violations(&self, a: &ImplicativeStructure) -> Vec<String> {
        let b = &self.structure;
        let phi = &self.embedding;
        let mut out = Vec::new();
        for x in a.elements() {
            for y in a.elements() {
                if a.leq(x, y) != b.leq(phi[x], phi[y]) {
                    out.push(format!("order: {} {}", a.name(x), a.name(y)));
                }
                if phi[a.imp(x, y)] != b.imp(phi[x], phi[y]) {
                    out.push(format!("implication: {} {}", a.name(x), a.name(y)));
                }
            }
        }
        let families: Vec<ElemSet> = if a.len() <= EXHAUSTIVE_LIMIT {
            (1..1u64 << a.len()).map(ElemSet).collect()
        } else {
            let n = a.len();
            (0..n).flat_map(|i| (i..n).map(move |j| ElemSet::singleton(i).with(j))).collect()
        };
        for fam in families {
            let lhs = phi[a.lattice().meet(fam)];
            let rhs = b.lattice().meet_iter(fam.iter().map(|e| phi[e]));
            if lhs != rhs {
                out.push(format!("meet: {:?}", a.lattice().set_names(fam)));
            }
        }
        for c in [Combinator::K, Combinator::S] {
            if phi[combinator(a, c)] != combinator(b, c) {
                out.push(format!("combinator {c}"));
            }
        }
        out
    }

    /// Meet of `(b -> c) -> c` over every `c`; lands in the old carrier.
    pub fn normalize(&self, b: Elem) -> Elem {
        let s = &self.structure;
        s.lattice().meet_iter(s.elements().map(|c| s.imp(s.imp(b, c), c)))
    }
}
