//! Abstract Krivine structures and the algebras they induce.

use thiserror::Error;

use crate::combinator::{combinator, Combinator};
use crate::lattice::{dedup_names, Elem, ElemSet, FiniteLattice};
use crate::separator::{ImplicativeAlgebra, Separator, SeparatorError};
use crate::structure::{ImplicativeStructure, Kind};

/// Terms `Lambda`, stacks `Pi`, application, push, continuation constants,
/// the three instructions, proof-like terms and the pole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aks {
    pub terms: Vec<String>,
    pub stacks: Vec<String>,
    /// `app[t][u]` is the term `t u`.
    pub app: Vec<Vec<usize>>,
    /// `push[t][pi]` is the stack `t . pi`.
    pub push: Vec<Vec<usize>>,
    /// `kont[pi]` is the continuation term `k_pi`.
    pub kont: Vec<usize>,
    pub k: usize,
    pub s: usize,
    pub cc: usize,
    pub proof_like: ElemSet,
    /// `pole[t]` is the set of stacks `pi` with `t` orthogonal to `pi`.
    pub pole: Vec<ElemSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AksError {
    #[error("invalid structure: {axiom} fails at {witness}")]
    InvalidAks { axiom: &'static str, witness: String },
    #[error("{what} has {size} entries, limit is {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    #[error("separator is not classical: cc = {0} is missing")]
    NotClassical(String),
    #[error("application {0} {1} is undefined")]
    Partial(String, String),
    #[error(transparent)]
    Separator(#[from] SeparatorError),
}

/// Stack sets index the induced carrier, so at most six stacks fit.
pub const STACK_LIMIT: usize = 6;

impl Aks {
    pub fn orth(&self, t: usize, pi: usize) -> bool {
        self.pole[t].contains(pi)
    }

    /// Terms orthogonal to every stack of `a`.
    pub fn orthogonal(&self, a: ElemSet) -> ElemSet {
        (0..self.terms.len()).filter(|&t| a.is_subset(self.pole[t])).collect()
    }

    pub fn validate(&self) -> Result<(), AksError> {
        let nt = self.terms.len();
        let ns = self.stacks.len();
        if nt > 64 || ns > 64 {
            return Err(AksError::TooLarge { what: "term or stack set", size: nt.max(ns), limit: 64 });
        }
        let bad = |axiom, witness: String| Err(AksError::InvalidAks { axiom, witness });
        let tn = |t: usize| &self.terms[t];
        let sn = |p: usize| &self.stacks[p];
        for t in 0..nt {
            for u in 0..nt {
                for pi in 0..ns {
                    if self.orth(t, self.push[u][pi]) && !self.orth(self.app[t][u], pi) {
                        return bad("push", format!("t={} u={} pi={}", tn(t), tn(u), sn(pi)));
                    }
                    if self.orth(t, pi) && !self.orth(self.k, self.push[t][self.push[u][pi]]) {
                        return bad("K", format!("t={} u={} pi={}", tn(t), tn(u), sn(pi)));
                    }
                    for v in 0..nt {
                        let lhs = self.push[v][self.push[self.app[u][v]][pi]];
                        let rhs = self.push[t][self.push[u][self.push[v][pi]]];
                        if self.orth(t, lhs) && !self.orth(self.s, rhs) {
                            return bad("S", format!("t={} u={} v={} pi={}", tn(t), tn(u), tn(v), sn(pi)));
                        }
                    }
                }
            }
            for pi in 0..ns {
                if self.orth(t, self.push[self.kont[pi]][pi]) && !self.orth(self.cc, self.push[t][pi]) {
                    return bad("cc", format!("t={} pi={}", tn(t), sn(pi)));
                }
                if self.orth(t, pi) {
                    for pi2 in 0..ns {
                        if !self.orth(self.kont[pi], self.push[t][pi2]) {
                            return bad("k_pi", format!("t={} pi={} pi'={}", tn(t), sn(pi), sn(pi2)));
                        }
                    }
                }
            }
        }
        for (c, name) in [(self.k, "K"), (self.s, "S"), (self.cc, "cc")] {
            if !self.proof_like.contains(c) {
                return bad("proof-like instructions", format!("{name} = {}", tn(c)));
            }
        }
        for t in self.proof_like.iter() {
            for u in self.proof_like.iter() {
                if !self.proof_like.contains(self.app[t][u]) {
                    return bad("proof-like closure", format!("t={} u={}", tn(t), tn(u)));
                }
            }
        }
        Ok(())
    }
}

/// Stack sets under reverse inclusion, `a -> b = { t . pi : t in a-orthogonal, pi in b }`,
/// separated by the sets whose orthogonal meets the proof-like terms.
pub fn make_from_aks(aks: &Aks) -> Result<ImplicativeAlgebra, AksError> {
    aks.validate()?;
    let ns = aks.stacks.len();
    if ns > STACK_LIMIT {
        return Err(AksError::TooLarge { what: "stack set", size: ns, limit: STACK_LIMIT });
    }
    let count = 1usize << ns;
    let names = dedup_names(
        (0..count)
            .map(|m| {
                let members: Vec<&str> = ElemSet(m as u64).iter().map(|p| aks.stacks[p].as_str()).collect();
                format!("st_{}", members.join("_"))
            })
            .collect(),
    );
    let lattice = FiniteLattice::from_order(names, |a, b| b & !a == 0).expect("reverse powerset lattice");
    let mut imp = vec![vec![0usize; count]; count];
    let orth: Vec<ElemSet> = (0..count).map(|a| aks.orthogonal(ElemSet(a as u64))).collect();
    for a in 0..count {
        for b in 0..count {
            let mut r = ElemSet::EMPTY;
            for t in orth[a].iter() {
                for pi in ElemSet(b as u64).iter() {
                    r.insert(aks.push[t][pi]);
                }
            }
            imp[a][b] = r.0 as usize;
        }
    }
    let structure = ImplicativeStructure::new(lattice, imp, Kind::Full).expect("square table");
    let sep: ElemSet = (0..count).filter(|&a| !orth[a].intersection(aks.proof_like).is_empty()).collect();
    Ok(ImplicativeAlgebra::new(structure, Separator::named("proof_like", sep))?)
}

/// Terms and stacks are both the carrier, the pole is the order,
/// and the proof-like terms are the separator.
pub fn aks_from_classical(alg: &ImplicativeAlgebra) -> Result<Aks, AksError> {
    let s = alg.structure();
    let cc = combinator(s, Combinator::CC);
    if !alg.sep().contains(cc) {
        return Err(AksError::NotClassical(s.name(cc).to_string()));
    }
    let n = s.len();
    let mut app = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            app[a][b] = s
                .app(a, b)
                .ok_or_else(|| AksError::Partial(s.name(a).to_string(), s.name(b).to_string()))?;
        }
    }
    let names: Vec<String> = s.lattice().names().to_vec();
    Ok(Aks {
        terms: names.clone(),
        stacks: names,
        app,
        push: (0..n).map(|a| (0..n).map(|p| s.imp(a, p)).collect()).collect(),
        kont: (0..n).map(|p| s.neg(p)).collect(),
        k: combinator(s, Combinator::K),
        s: combinator(s, Combinator::S),
        cc,
        proof_like: alg.sep(),
        pole: (0..n).map(|t| s.lattice().up_set(t)).collect(),
    })
}

/// Meet of a stack set, read back in the original carrier.
pub fn meet_of_stacks(a: &ImplicativeStructure, b: &ImplicativeStructure) -> Vec<Elem> {
    (0..b.len()).map(|m| a.lattice().meet(ElemSet(m as u64))).collect()
}
