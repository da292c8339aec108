//! Second-order encodings of the logical connectives.

use crate::combinator::{combinator, Combinator};
use crate::lattice::Elem;
use crate::structure::ImplicativeStructure;

/// `a x b = meet_c ((a -> b -> c) -> c)`
pub fn times(s: &ImplicativeStructure, a: Elem, b: Elem) -> Elem {
    s.lattice()
        .meet_iter(s.elements().map(|c| s.imp(s.imp(a, s.imp(b, c)), c)))
}

/// `a + b = meet_c ((a -> c) -> (b -> c) -> c)`
pub fn plus(s: &ImplicativeStructure, a: Elem, b: Elem) -> Elem {
    s.lattice()
        .meet_iter(s.elements().map(|c| s.imp(s.imp(a, c), s.imp(s.imp(b, c), c))))
}

/// `exists_i a_i = meet_c (meet_i (a_i -> c) -> c)`
pub fn exists(s: &ImplicativeStructure, family: &[Elem]) -> Elem {
    let l = s.lattice();
    l.meet_iter(s.elements().map(|c| {
        let hyp = l.meet_iter(family.iter().map(|&a| s.imp(a, c)));
        s.imp(hyp, c)
    }))
}

/// Universal quantification is the plain meet.
pub fn forall(s: &ImplicativeStructure, family: &[Elem]) -> Elem {
    s.lattice().meet_iter(family.iter().copied())
}

pub fn not(s: &ImplicativeStructure, a: Elem) -> Elem {
    s.neg(a)
}

pub fn iff(s: &ImplicativeStructure, a: Elem, b: Elem) -> Elem {
    times(s, s.imp(a, b), s.imp(b, a))
}

/// Leibniz identity on individuals: `I` when equal, `top -> bottom` otherwise.
pub fn identity(s: &ImplicativeStructure, equal: bool) -> Elem {
    if equal {
        combinator(s, Combinator::I)
    } else {
        s.imp(s.top(), s.bottom())
    }
}
