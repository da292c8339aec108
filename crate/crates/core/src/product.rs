//! Componentwise products of structures.

use crate::lattice::{dedup_names, Elem, ElemSet, FiniteLattice, MAX_ELEMENTS};
use crate::structure::{ImplicativeStructure, Kind, StructureError};

/// A product structure with the information needed to split elements into components.
#[derive(Debug, Clone)]
pub struct Product {
    pub structure: ImplicativeStructure,
    radices: Vec<usize>,
}

impl Product {
    /// Components of a product element, first factor first.
    pub fn components(&self, mut e: Elem) -> Vec<Elem> {
        let mut out = vec![0; self.radices.len()];
        for (i, &r) in self.radices.iter().enumerate().rev() {
            out[i] = e % r;
            e /= r;
        }
        out
    }

    pub fn index(&self, comps: &[Elem]) -> Elem {
        comps.iter().zip(&self.radices).fold(0, |acc, (&c, &r)| acc * r + c)
    }

    pub fn factors(&self) -> usize {
        self.radices.len()
    }

    /// Elements all of whose components lie in the given sets.
    pub fn product_set(&self, sets: &[ElemSet]) -> ElemSet {
        (0..self.structure.len())
            .filter(|&e| self.components(e).iter().zip(sets).all(|(&c, s)| s.contains(c)))
            .collect()
    }
}

pub fn make_product(factors: &[&ImplicativeStructure]) -> Result<Product, StructureError> {
    let radices: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let total = radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r).filter(|&v| v <= MAX_ELEMENTS));
    let total = total.ok_or(StructureError::GuardExceeded {
        what: "product",
        needed: radices.iter().fold(1usize, |a, &r| a.saturating_mul(r)),
        limit: MAX_ELEMENTS,
    })?;
    let shell = Product {
        structure: ImplicativeStructure::new(
            FiniteLattice::from_order(vec!["unit".into()], |_, _| true).expect("one point"),
            vec![vec![0]],
            Kind::Full,
        )?,
        radices: radices.clone(),
    };
    if factors.is_empty() {
        return Ok(shell);
    }
    let comps: Vec<Vec<Elem>> = (0..total).map(|e| shell.components(e)).collect();
    let names = dedup_names(
        comps
            .iter()
            .map(|c| {
                c.iter()
                    .zip(factors)
                    .map(|(&x, f)| f.name(x).to_string())
                    .collect::<Vec<_>>()
                    .join("_")
            })
            .collect(),
    );
    let lattice = FiniteLattice::from_order(names, |a, b| {
        comps[a].iter().zip(&comps[b]).zip(factors).all(|((&x, &y), f)| f.leq(x, y))
    })
    .expect("product of lattices");
    let imp = (0..total)
        .map(|a| {
            (0..total)
                .map(|b| {
                    let c: Vec<Elem> = factors
                        .iter()
                        .enumerate()
                        .map(|(i, f)| f.imp(comps[a][i], comps[b][i]))
                        .collect();
                    shell.index(&c)
                })
                .collect()
        })
        .collect();
    let kind = if factors.iter().any(|f| f.kind() == Kind::Quasi) { Kind::Quasi } else { Kind::Full };
    Ok(Product { structure: ImplicativeStructure::new(lattice, imp, kind)?, radices })
}

/// The `k`-fold power of a structure.
pub fn power(s: &ImplicativeStructure, k: usize) -> Result<Product, StructureError> {
    make_product(&vec![s; k])
}
