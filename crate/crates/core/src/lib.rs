//! Finite implicative structures and algebras: lattices, implication tables,
//! lambda evaluation, separators, induced Heyting algebras, first-order
//! interpretation and the associated triposes.

pub mod aks;
pub mod combinator;
pub mod completion;
pub mod corpus;
pub mod encode;
pub mod eval;
pub mod fol;
pub mod kleene;
pub mod lambda;
pub mod lattice;
pub mod product;
pub mod quotient;
pub mod separator;
pub mod structure;
pub mod tripos;

pub use combinator::{combinator, Combinator};
pub use eval::{abstraction, apply, check_typing, eval_term, EvalError, TypingContext};
pub use lambda::{parse_term, Term};
pub use lattice::{build_lattice, Elem, ElemSet, FiniteLattice, LatticeError};
pub use separator::{ImplicativeAlgebra, Separator};
pub use structure::{ImplicativeStructure, Kind};
