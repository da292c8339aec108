//! Realizability-style structures built from a finite partial application table.

use thiserror::Error;

use crate::lattice::{dedup_names, ElemSet, FiniteLattice};
use crate::structure::{ImplicativeStructure, Kind};

/// Carrier `P` with a partial binary operation `x . y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialApplicativeStructure {
    names: Vec<String>,
    table: Vec<Vec<Option<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KleeneError {
    #[error("application table has wrong shape for {0} points")]
    BadShape(usize),
    #[error("carrier of {size} points exceeds the limit {limit} for {mode} mode")]
    CarrierTooLarge { size: usize, limit: usize, mode: &'static str },
    #[error("combinatory law fails for {law} at {witness}")]
    NotCombinatory { law: &'static str, witness: String },
}

impl PartialApplicativeStructure {
    pub fn new(names: Vec<String>, table: Vec<Vec<Option<usize>>>) -> Result<Self, KleeneError> {
        let n = names.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().flatten().any(|&v| v >= n)) {
            return Err(KleeneError::BadShape(n));
        }
        Ok(PartialApplicativeStructure { names, table })
    }

    /// Points named `0, 1, ...`.
    pub fn numbered(table: Vec<Vec<Option<usize>>>) -> Result<Self, KleeneError> {
        let names = (0..table.len()).map(|i| i.to_string()).collect();
        Self::new(names, table)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn app(&self, x: usize, y: usize) -> Option<usize> {
        self.table[x][y]
    }

    pub fn is_total(&self) -> bool {
        self.table.iter().all(|r| r.iter().all(Option::is_some))
    }

    /// Checks that `k` and `s` behave as the usual combinators:
    /// `k x y = x`, `s x y` defined, and `s x y z ~ x z (y z)`.
    pub fn check_combinatory(&self, k: usize, s: usize) -> Result<(), KleeneError> {
        let n = self.len();
        let ap = |a: Option<usize>, b: Option<usize>| match (a, b) {
            (Some(a), Some(b)) => self.app(a, b),
            _ => None,
        };
        for x in 0..n {
            for y in 0..n {
                if ap(ap(Some(k), Some(x)), Some(y)) != Some(x) {
                    return Err(KleeneError::NotCombinatory { law: "k", witness: format!("x={x} y={y}") });
                }
                let sxy = ap(ap(Some(s), Some(x)), Some(y));
                if sxy.is_none() {
                    return Err(KleeneError::NotCombinatory { law: "s defined", witness: format!("x={x} y={y}") });
                }
                for z in 0..n {
                    let lhs = ap(sxy, Some(z));
                    let rhs = ap(ap(Some(x), Some(z)), ap(Some(y), Some(z)));
                    if lhs != rhs {
                        return Err(KleeneError::NotCombinatory {
                            law: "s",
                            witness: format!("x={x} y={y} z={z}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KleeneMode {
    /// All subsets of `P` ordered by inclusion.
    Subsets,
    /// Partial equivalence relations on `P` ordered by inclusion.
    Per,
}

pub const SUBSETS_LIMIT: usize = 5;
pub const PER_LIMIT: usize = 3;

/// Full exactly when the application table is total.
pub fn make_kleene(p: &PartialApplicativeStructure, mode: KleeneMode) -> Result<ImplicativeStructure, KleeneError> {
    let kind = if p.is_total() { Kind::Full } else { Kind::Quasi };
    match mode {
        KleeneMode::Subsets => subsets(p, kind),
        KleeneMode::Per => pers(p, kind),
    }
}

fn subsets(p: &PartialApplicativeStructure, kind: Kind) -> Result<ImplicativeStructure, KleeneError> {
    let k = p.len();
    if k > SUBSETS_LIMIT {
        return Err(KleeneError::CarrierTooLarge { size: k, limit: SUBSETS_LIMIT, mode: "subsets" });
    }
    let count = 1usize << k;
    let names = dedup_names(
        (0..count)
            .map(|m| {
                let members: Vec<&str> = ElemSet(m as u64).iter().map(|i| p.names[i].as_str()).collect();
                format!("set_{}", members.join("_"))
            })
            .collect(),
    );
    let lattice = FiniteLattice::from_order(names, |a, b| a & !b == 0).expect("powerset lattice");
    let imp = (0..count)
        .map(|a| {
            (0..count)
                .map(|b| {
                    (0..k)
                        .filter(|&z| {
                            ElemSet(a as u64).iter().all(|x| match p.app(z, x) {
                                Some(v) => b >> v & 1 == 1,
                                None => false,
                            })
                        })
                        .fold(0usize, |m, z| m | 1 << z)
                })
                .collect()
        })
        .collect();
    Ok(ImplicativeStructure::new(lattice, imp, kind).expect("square table"))
}

fn pers(p: &PartialApplicativeStructure, kind: Kind) -> Result<ImplicativeStructure, KleeneError> {
    let k = p.len();
    if k > PER_LIMIT {
        return Err(KleeneError::CarrierTooLarge { size: k, limit: PER_LIMIT, mode: "per" });
    }
    let bit = |x: usize, y: usize| 1u64 << (x * k + y);
    let is_per = |r: u64| {
        (0..k).all(|x| {
            (0..k).all(|y| {
                r & bit(x, y) == 0
                    || (r & bit(y, x) != 0 && (0..k).all(|z| r & bit(y, z) == 0 || r & bit(x, z) != 0))
            })
        })
    };
    let rels: Vec<u64> = (0..1u64 << (k * k)).filter(|&r| is_per(r)).collect();
    let names = dedup_names(
        rels.iter()
            .map(|&r| {
                let mut pairs = Vec::new();
                for x in 0..k {
                    for y in 0..k {
                        if r & bit(x, y) != 0 {
                            pairs.push(format!("{}{}", p.names[x], p.names[y]));
                        }
                    }
                }
                format!("per_{}", pairs.join("_"))
            })
            .collect(),
    );
    let lattice = FiniteLattice::from_order(names, |a, b| rels[a] & !rels[b] == 0).expect("PER lattice");
    let pos = |r: u64| rels.iter().position(|&q| q == r).expect("implication of PERs is a PER");
    let n = rels.len();
    let mut imp = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut r = 0u64;
            for z1 in 0..k {
                for z2 in 0..k {
                    let ok = (0..k).all(|x1| {
                        (0..k).all(|x2| {
                            if rels[a] & bit(x1, x2) == 0 {
                                return true;
                            }
                            match (p.app(z1, x1), p.app(z2, x2)) {
                                (Some(u), Some(v)) => rels[b] & bit(u, v) != 0,
                                _ => false,
                            }
                        })
                    });
                    if ok {
                        r |= bit(z1, z2);
                    }
                }
            }
            imp[a][b] = pos(r);
        }
    }
    Ok(ImplicativeStructure::new(lattice, imp, kind).expect("square table"))
}

/// Every application table on `size` points, with entries drawn from `None` and the points.
pub fn all_tables(size: usize) -> Vec<PartialApplicativeStructure> {
    let cells = size * size;
    let base = size + 1;
    let total = base.pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut table = vec![vec![None; size]; size];
            for c in 0..cells {
                let d = code % base;
                code /= base;
                table[c / size][c % size] = if d == 0 { None } else { Some(d - 1) };
            }
            PartialApplicativeStructure::numbered(table).expect("well formed")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::validate_structure;

    #[test]
    fn table_counts() {
        assert_eq!(all_tables(1).len(), 2);
        assert_eq!(all_tables(2).len(), 81);
    }

    #[test]
    fn every_small_table_yields_a_valid_structure() {
        for size in 1..=2 {
            for p in all_tables(size) {
                for mode in [KleeneMode::Subsets, KleeneMode::Per] {
                    let s = make_kleene(&p, mode).unwrap();
                    let r = validate_structure(&s).unwrap();
                    assert!(r.is_valid(), "{p:?} {mode:?} {:?}", r.violations);
                    assert_eq!(s.kind() == Kind::Full, p.is_total());
                }
            }
        }
    }

    #[test]
    fn per_counts() {
        // partial equivalence relations on 1, 2 and 3 points
        let counts: Vec<usize> = (1..=3)
            .map(|k| {
                let t = vec![vec![Some(0); k]; k];
                make_kleene(&PartialApplicativeStructure::numbered(t).unwrap(), KleeneMode::Per)
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(counts, vec![2, 5, 15]);
    }

    #[test]
    fn limits() {
        let t = vec![vec![Some(0); 4]; 4];
        let p = PartialApplicativeStructure::numbered(t).unwrap();
        assert!(matches!(make_kleene(&p, KleeneMode::Per), Err(KleeneError::CarrierTooLarge { .. })));
        assert!(make_kleene(&p, KleeneMode::Subsets).is_ok());
    }

    #[test]
    fn projection_table_is_not_combinatory() {
        let p = PartialApplicativeStructure::numbered(vec![vec![Some(0), Some(1)], vec![Some(0), Some(1)]]).unwrap();
        assert!(p.check_combinatory(0, 1).is_err());
    }
}
