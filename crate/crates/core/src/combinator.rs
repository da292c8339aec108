//! Named combinators computed directly as meets over the carrier.

use std::fmt;
use std::str::FromStr;

use crate::lattice::Elem;
use crate::structure::ImplicativeStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combinator {
    I,
    K,
    S,
    B,
    C,
    W,
    CC,
    Fork,
    Por,
}

impl Combinator {
    pub const ALL: [Combinator; 9] = [
        Combinator::I,
        Combinator::K,
        Combinator::S,
        Combinator::B,
        Combinator::C,
        Combinator::W,
        Combinator::CC,
        Combinator::Fork,
        Combinator::Por,
    ];

    /// Closed term whose evaluation should agree with the meet formula.
    pub fn term_text(self) -> Option<&'static str> {
        match self {
            Combinator::I => Some("^x.x"),
            Combinator::K => Some("^x.^y.x"),
            Combinator::S => Some("^x.^y.^z.x z (y z)"),
            Combinator::B => Some("^x.^y.^z.x (y z)"),
            Combinator::C => Some("^x.^y.^z.x z y"),
            Combinator::W => Some("^x.^y.x y y"),
            Combinator::CC => Some("cc"),
            Combinator::Fork | Combinator::Por => None,
        }
    }
}

impl fmt::Display for Combinator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Combinator::I => "I",
            Combinator::K => "K",
            Combinator::S => "S",
            Combinator::B => "B",
            Combinator::C => "C",
            Combinator::W => "W",
            Combinator::CC => "CC",
            Combinator::Fork => "FORK",
            Combinator::Por => "POR",
        };
        f.write_str(s)
    }
}

impl FromStr for Combinator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Combinator::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown combinator `{s}`"))
    }
}

pub fn combinator(s: &ImplicativeStructure, c: Combinator) -> Elem {
    let l = s.lattice();
    let n = s.len();
    let i = |a, b| s.imp(a, b);
    let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));
    let triples = || (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))));
    match c {
        Combinator::I => l.meet_iter((0..n).map(|a| i(a, a))),
        Combinator::K => l.meet_iter(pairs().map(|(a, b)| i(a, i(b, a)))),
        Combinator::S => l.meet_iter(triples().map(|(a, b, c)| i(i(a, i(b, c)), i(i(a, b), i(a, c))))),
        Combinator::B => l.meet_iter(triples().map(|(a, b, c)| i(i(a, b), i(i(c, a), i(c, b))))),
        Combinator::C => l.meet_iter(triples().map(|(a, b, c)| i(i(a, i(b, c)), i(b, i(a, c))))),
        Combinator::W => l.meet_iter(pairs().map(|(a, b)| i(i(a, i(a, b)), i(a, b)))),
        Combinator::CC => l.meet_iter(pairs().map(|(a, b)| i(i(i(a, b), a), a))),
        Combinator::Fork => l.meet_iter(pairs().map(|(a, b)| i(a, i(b, l.meet2(a, b))))),
        Combinator::Por => {
            let (bot, top) = (s.bottom(), s.top());
            l.meet2(i(bot, i(top, bot)), i(top, i(bot, bot)))
        }
    }
}
