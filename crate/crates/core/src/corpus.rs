//! Small named lattices, lattice enumeration, and the search for implication
//! tables whose intuitionistic core is not a filter.

use std::collections::BTreeSet;

use crate::combinator::{combinator, Combinator};
use crate::lattice::{build_lattice, ElemSet, FiniteLattice};
use crate::separator::generate_separator;
use crate::structure::{ImplicativeStructure, Kind};

/// The lattices with at most five elements, up to isomorphism, under their usual names.
pub fn named_lattices() -> Vec<(&'static str, FiniteLattice)> {
    let l = |els: &[&str], pairs: &[(&str, &str)]| build_lattice(els, pairs).expect("named lattice");
    vec![
        ("1", l(&["pt"], &[])),
        ("B2", l(&["bot", "top"], &[("bot", "top")])),
        ("C3", l(&["bot", "a", "top"], &[("bot", "a"), ("a", "top")])),
        ("C4", l(&["bot", "a", "b", "top"], &[("bot", "a"), ("a", "b"), ("b", "top")])),
        ("D4", l(&["bot", "a", "b", "top"], &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])),
        (
            "C5",
            l(&["bot", "a", "b", "c", "top"], &[("bot", "a"), ("a", "b"), ("b", "c"), ("c", "top")]),
        ),
        (
            "D4+1",
            l(
                &["bot", "a", "b", "c", "top"],
                &[("bot", "a"), ("bot", "b"), ("a", "c"), ("b", "c"), ("c", "top")],
            ),
        ),
        (
            "1+D4",
            l(
                &["bot", "a", "b", "c", "top"],
                &[("bot", "a"), ("a", "b"), ("a", "c"), ("b", "top"), ("c", "top")],
            ),
        ),
        (
            "M3",
            l(
                &["bot", "a", "b", "c", "top"],
                &[("bot", "a"), ("bot", "b"), ("bot", "c"), ("a", "top"), ("b", "top"), ("c", "top")],
            ),
        ),
        (
            "N5",
            l(
                &["bot", "a", "b", "c", "top"],
                &[("bot", "a"), ("a", "b"), ("b", "top"), ("bot", "c"), ("c", "top")],
            ),
        ),
    ]
}

/// Order matrix under the best relabelling; equal exactly for isomorphic lattices.
pub fn canonical_form(l: &FiniteLattice) -> Vec<bool> {
    let n = l.len();
    let mut best: Option<Vec<bool>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let m: Vec<bool> = (0..n * n).map(|k| l.leq(p[k / n], p[k % n])).collect();
        if best.as_ref().is_none_or(|b| m > *b) {
            best = Some(m);
        }
    });
    best.unwrap_or_default()
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// All lattices on `n` elements up to isomorphism, by brute force over bounded orders.
pub fn enumerate_lattices(n: usize) -> Vec<FiniteLattice> {
    assert!((1..=6).contains(&n));
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    if n == 1 {
        return vec![FiniteLattice::from_order(names, |_, _| true).expect("one point")];
    }
    // element 0 is the bottom, n - 1 the top; choose the strict order among the middle
    let mid: Vec<usize> = (1..n - 1).collect();
    let pairs: Vec<(usize, usize)> =
        mid.iter().flat_map(|&a| mid.iter().map(move |&b| (a, b))).filter(|(a, b)| a != b).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let rel = |a: usize, b: usize| {
            a == b
                || a == 0
                || b == n - 1
                || pairs.iter().position(|&p| p == (a, b)).is_some_and(|k| mask >> k & 1 == 1)
        };
        let up: Vec<ElemSet> = (0..n).map(|a| (0..n).filter(|&b| rel(a, b)).collect()).collect();
        if let Ok(l) = FiniteLattice::from_up_sets(names.clone(), up) {
            if seen.insert(canonical_form(&l)) {
                out.push(l);
            }
        }
    }
    out
}

/// Outcome of the search for a structure whose intuitionistic core omits `FORK`.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found { lattice: &'static str, structure: Box<ImplicativeStructure>, tables_checked: usize },
    Exhausted { tables_checked: usize },
}

/// Maps preserving the top and binary meets, i.e. all finite meets.
fn meet_preserving_maps(l: &FiniteLattice) -> Vec<Vec<usize>> {
    let n = l.len();
    let mut out = Vec::new();
    let mut f = vec![0; n];
    let total = n.pow(n as u32);
    for mut code in 0..total {
        for slot in f.iter_mut() {
            *slot = code % n;
            code /= n;
        }
        if f[l.top()] != l.top() {
            continue;
        }
        let ok = (0..n).all(|a| (0..n).all(|b| f[l.meet2(a, b)] == l.meet2(f[a], f[b])));
        if ok {
            out.push(f.clone());
        }
    }
    out
}

/// Enumerates full implication tables on the named lattices of at most `max_size`
/// elements, in order, skipping tables that are not least in their automorphism orbit,
/// and stops at the first whose intuitionistic core does not contain `FORK`.
pub fn search_non_filter(max_size: usize) -> SearchOutcome {
    let lattices: Vec<(&'static str, FiniteLattice)> =
        named_lattices().into_iter().filter(|(_, l)| l.len() <= max_size).collect();
    search_non_filter_in(&lattices)
}

/// The same search over an arbitrary list of lattices.
pub fn search_non_filter_in(lattices: &[(&'static str, FiniteLattice)]) -> SearchOutcome {
    let mut checked = 0;
    for (name, l) in lattices.iter().cloned() {
        let n = l.len();
        let maps = meet_preserving_maps(&l);
        let autos: Vec<Vec<usize>> = l
            .automorphisms()
            .into_iter()
            .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
            .collect();
        let order: Vec<usize> = (0..n).collect();
        let mut rows: Vec<Option<usize>> = vec![None; n];
        let mut found = None;
        backtrack(&l, &maps, &order, 0, &mut rows, &mut |rows| {
            let imp: Vec<Vec<usize>> = rows.iter().map(|r| maps[r.expect("complete")].clone()).collect();
            if autos.iter().any(|p| permuted_less(&imp, p)) {
                return false;
            }
            checked += 1;
            let s = ImplicativeStructure::new(l.clone(), imp, Kind::Full).expect("square table");
            let core = generate_separator(&s, ElemSet::EMPTY).expect("full structures apply totally");
            if !core.contains(combinator(&s, Combinator::Fork)) {
                found = Some(s);
                return true;
            }
            false
        });
        if let Some(structure) = found {
            return SearchOutcome::Found { lattice: name, structure: Box::new(structure), tables_checked: checked };
        }
    }
    SearchOutcome::Exhausted { tables_checked: checked }
}

/// Assigns the row of each element so that rows decrease as the element grows.
fn backtrack(
    l: &FiniteLattice,
    maps: &[Vec<usize>],
    order: &[usize],
    k: usize,
    rows: &mut Vec<Option<usize>>,
    visit: &mut dyn FnMut(&[Option<usize>]) -> bool,
) -> bool {
    if k == order.len() {
        return visit(rows);
    }
    let a = order[k];
    for (mi, m) in maps.iter().enumerate() {
        let ok = order[..k].iter().all(|&b| {
            let other = &maps[rows[b].expect("placed")];
            let pointwise = |x: &[usize], y: &[usize]| x.iter().zip(y).all(|(&u, &v)| l.leq(u, v));
            (!l.leq(a, b) || pointwise(other, m)) && (!l.leq(b, a) || pointwise(m, other))
        });
        if !ok {
            continue;
        }
        rows[a] = Some(mi);
        if backtrack(l, maps, order, k + 1, rows, visit) {
            return true;
        }
        rows[a] = None;
    }
    false
}

/// Whether relabelling the table by `p` gives a lexicographically smaller table.
fn permuted_less(imp: &[Vec<usize>], p: &[usize]) -> bool {
    let n = imp.len();
    let mut inv = vec![0; n];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    for a in 0..n {
        for b in 0..n {
            let moved = p[imp[inv[a]][inv[b]]];
            if moved != imp[a][b] {
                return moved < imp[a][b];
            }
        }
    }
    false
}
