//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//! Every check compares library output with a brute-force oracle defined below.

mod common;

use std::time::{Duration, Instant};

use implicative::aks::{aks_from_classical, make_from_aks, meet_of_stacks};
use implicative::completion::complete_quasi;
use implicative::corpus::{named_lattices, search_non_filter, SearchOutcome};
use implicative::kleene::{all_tables, make_kleene, KleeneMode};
use implicative::lambda::Param;
use implicative::product::make_product;
use implicative::quotient::build_quotient;
use implicative::separator::{classify_separator, deduction_holds, is_separator};
use implicative::structure::{is_join_compatible, make_dummy, make_heyting, validate_structure, DummyMode};
use implicative::tripos::{
    adjunction_audit, beck_chevalley_audit, embedding_iso_audit, exists_along, forall_along, forcing_collapse_audit,
    functoriality_audit, generic_predicate_audit, reduction_iso_audit, rho_audit, subst, CollapseVerdict, FinMap,
};
use implicative::{
    combinator, eval_term, parse_term, Combinator, Elem, ElemSet, ImplicativeAlgebra, ImplicativeStructure, Kind,
    Separator, Term,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 7;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Origin {
    Heyting,
    Dummy(DummyMode),
    Kleene,
    Search,
}

struct Entry {
    name: String,
    s: ImplicativeStructure,
    origin: Origin,
}

struct Corpus {
    entries: Vec<Entry>,
    search_tables: usize,
    search_witnesses: usize,
}

fn build_corpus() -> Corpus {
    let mut entries = Vec::new();
    for (name, l) in named_lattices() {
        if let Ok(s) = make_heyting(&l) {
            entries.push(Entry { name: name.to_string(), s, origin: Origin::Heyting });
        }
    }
    for (name, l) in named_lattices().into_iter().filter(|(n, _)| ["B2", "C3", "D4"].contains(n)) {
        for (tag, mode) in [("right", DummyMode::Right), ("top", DummyMode::Top)] {
            entries.push(Entry {
                name: format!("dummy-{tag}-{name}"),
                s: make_dummy(&l, mode),
                origin: Origin::Dummy(mode),
            });
        }
    }
    for size in 1..=2 {
        for (k, p) in all_tables(size).into_iter().enumerate() {
            for (tag, mode) in [("subsets", KleeneMode::Subsets), ("per", KleeneMode::Per)] {
                let s = make_kleene(&p, mode).expect("small table");
                entries.push(Entry { name: format!("kleene-{size}-{k}-{tag}"), s, origin: Origin::Kleene });
            }
        }
    }
    let (search_tables, search_witnesses) = match search_non_filter(5) {
        SearchOutcome::Found { lattice, structure, tables_checked } => {
            entries.push(Entry { name: format!("search-{lattice}"), s: *structure, origin: Origin::Search });
            (tables_checked, 1)
        }
        SearchOutcome::Exhausted { tables_checked } => (tables_checked, 0),
    };
    Corpus { entries, search_tables, search_witnesses }
}

// ---------------------------------------------------------------- oracles

fn glb(s: &ImplicativeStructure, xs: impl IntoIterator<Item = Elem>) -> Elem {
    let xs: Vec<Elem> = xs.into_iter().collect();
    let lower: Vec<Elem> = s.elements().filter(|&m| xs.iter().all(|&x| s.leq(m, x))).collect();
    *lower.iter().find(|&&m| lower.iter().all(|&c| s.leq(c, m))).expect("finite lattice")
}

fn lub(s: &ImplicativeStructure, xs: impl IntoIterator<Item = Elem>) -> Elem {
    let xs: Vec<Elem> = xs.into_iter().collect();
    let upper: Vec<Elem> = s.elements().filter(|&m| xs.iter().all(|&x| s.leq(x, m))).collect();
    *upper.iter().find(|&&m| upper.iter().all(|&c| s.leq(m, c))).expect("finite lattice")
}

/// The least `c` with `a <= b -> c`.
fn app(s: &ImplicativeStructure, a: Elem, b: Elem) -> Option<Elem> {
    let u: Vec<Elem> = s.elements().filter(|&c| s.leq(a, s.imp(b, c))).collect();
    u.iter().copied().find(|&m| u.iter().all(|&c| s.leq(m, c)))
}

fn formula(s: &ImplicativeStructure, c: Combinator) -> Elem {
    let n = s.len();
    let i = |a, b| s.imp(a, b);
    let mut vals = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c3 in 0..n {
                vals.push(match c {
                    Combinator::I => i(a, a),
                    Combinator::K => i(a, i(b, a)),
                    Combinator::S => i(i(a, i(b, c3)), i(i(a, b), i(a, c3))),
                    Combinator::B => i(i(a, b), i(i(c3, a), i(c3, b))),
                    Combinator::C => i(i(a, i(b, c3)), i(b, i(a, c3))),
                    Combinator::W => i(i(a, i(a, b)), i(a, b)),
                    Combinator::CC => i(i(i(a, b), a), a),
                    Combinator::Fork => i(a, i(b, glb(s, [a, b]))),
                    Combinator::Por => unreachable!("not used"),
                });
            }
        }
    }
    glb(s, vals)
}

/// Direct denotation of a closed term in a full structure.
fn denote(s: &ImplicativeStructure, t: &Term, env: &mut Vec<(String, Elem)>) -> Elem {
    match t {
        Term::Var(x) => env.iter().rev().find(|(y, _)| y == x).expect("closed").1,
        Term::Param(Param::Elem(e)) => *e,
        Term::Param(Param::Name(n)) => s.lattice().lookup(n).expect("known name"),
        Term::CC => formula(s, Combinator::CC),
        Term::App(f, a) => {
            let (f, a) = (denote(s, f, env), denote(s, a, env));
            app(s, f, a).expect("full structure")
        }
        Term::Abs(x, b) => {
            let mut vals = Vec::new();
            for a in s.elements() {
                env.push((x.clone(), a));
                vals.push(s.imp(a, denote(s, b, env)));
                env.pop();
            }
            glb(s, vals)
        }
    }
}

fn oracle_valid(s: &ImplicativeStructure) -> bool {
    let n = s.len();
    for a in 0..n {
        for a2 in 0..n {
            for b in 0..n {
                if s.leq(a2, a) && !s.leq(s.imp(a, b), s.imp(a2, b)) {
                    return false;
                }
                if s.leq(a2, a) && !s.leq(s.imp(b, a2), s.imp(b, a)) {
                    return false;
                }
            }
        }
        let start = if s.kind() == Kind::Full { 0 } else { 1 };
        for m in start..1u64 << n {
            let fam: Vec<Elem> = ElemSet(m).iter().collect();
            if s.imp(a, glb(s, fam.clone())) != glb(s, fam.iter().map(|&b| s.imp(a, b))) {
                return false;
            }
        }
    }
    true
}

fn oracle_separator(s: &ImplicativeStructure, x: ElemSet) -> bool {
    let upward = x.iter().all(|a| s.elements().all(|b| !s.leq(a, b) || x.contains(b)));
    let mp = s.elements().all(|a| s.elements().all(|b| !(x.contains(s.imp(a, b)) && x.contains(a)) || x.contains(b)));
    upward && x.contains(formula(s, Combinator::K)) && x.contains(formula(s, Combinator::S)) && mp
}

fn oracle_filter(s: &ImplicativeStructure, x: ElemSet) -> bool {
    x.iter().all(|a| x.iter().all(|b| x.contains(glb(s, [a, b]))))
}

fn subsets(n: usize) -> impl Iterator<Item = ElemSet> {
    (0..1u64 << n).map(ElemSet)
}

fn oracle_separators(s: &ImplicativeStructure) -> Vec<ElemSet> {
    subsets(s.len()).filter(|&x| oracle_separator(s, x)).collect()
}

fn oracle_join_compatible(s: &ImplicativeStructure) -> bool {
    subsets(s.len()).all(|m| {
        s.elements().all(|b| glb(s, m.iter().map(|a| s.imp(a, b))) == s.imp(lub(s, m.iter()), b))
    })
}

/// `p |- q` in the uniform power separator.
fn oracle_entails(alg: &ImplicativeAlgebra, p: &[Elem], q: &[Elem]) -> bool {
    let s = alg.structure();
    alg.sep().contains(glb(s, p.iter().zip(q).map(|(&a, &b)| s.imp(a, b))))
}

fn all_families(n: usize, size: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..size {
        out = out.into_iter().flat_map(|f| (0..n).map(move |e| [f.clone(), vec![e]].concat())).collect();
    }
    out
}

fn algebras(entries: &[Entry], max_n: usize) -> Vec<(String, ImplicativeAlgebra)> {
    let mut out = Vec::new();
    for e in entries.iter().filter(|e| e.s.len() <= max_n) {
        for sep in oracle_separators(&e.s) {
            let name = format!("{} {:?}", e.name, e.s.lattice().set_names(sep));
            out.push((name, ImplicativeAlgebra::new(e.s.clone(), Separator::new(sep)).expect("separator")));
        }
    }
    out
}

// ---------------------------------------------------------------- random terms

fn random_body(rng: &mut ChaCha8Rng, depth: usize, bound: &mut Vec<String>, cc: bool) -> Term {
    let leaf = |rng: &mut ChaCha8Rng, bound: &[String]| {
        if cc && rng.gen_bool(0.25) {
            Term::CC
        } else {
            Term::var(&bound[rng.gen_range(0..bound.len())])
        }
    };
    if depth == 1 {
        return leaf(rng, bound);
    }
    match rng.gen_range(0..10) {
        0..=2 => {
            let x = format!("x{}", bound.len());
            bound.push(x.clone());
            let b = random_body(rng, depth - 1, bound, cc);
            bound.pop();
            Term::abs(&x, b)
        }
        3..=7 => Term::app(random_body(rng, depth - 1, bound, cc), random_body(rng, depth - 1, bound, cc)),
        _ => leaf(rng, bound),
    }
}

/// A closed term of depth at most five; with `cc`, one that mentions it.
fn random_term(rng: &mut ChaCha8Rng, cc: bool) -> Term {
    loop {
        let mut bound = vec!["x0".to_string()];
        let t = Term::abs("x0", random_body(rng, 4, &mut bound, cc));
        if !cc || t.contains_cc() {
            return t;
        }
    }
}

// ---------------------------------------------------------------- criteria

type Verdict = Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn axiom_suite(c: &Corpus) -> Verdict {
    let start = Instant::now();
    let mut quads = 0usize;
    for e in &c.entries {
        let s = &e.s;
        let r = validate_structure(s).map_err(|e| e.to_string())?;
        if !r.is_valid() {
            return fail(format!("{} fails validation: {}", e.name, r.violations[0].describe(s)));
        }
        if !oracle_valid(s) {
            return fail(format!("{}: oracle disagrees with the validator", e.name));
        }
        if s.len() > 5 {
            continue;
        }
        for a in s.elements() {
            for b in s.elements() {
                let ab = app(s, a, b);
                if s.app(a, b) != ab {
                    return fail(format!("{}: minimum law at {a} {b}", e.name));
                }
                if !app(s, s.imp(a, b), a).is_some_and(|v| s.leq(v, b)) {
                    return fail(format!("{}: beta law at {a} {b}", e.name));
                }
                if let Some(ab) = ab {
                    if !s.leq(a, s.imp(b, ab)) {
                        return fail(format!("{}: eta law at {a} {b}", e.name));
                    }
                    if s.elements().any(|c| s.leq(ab, c) != s.leq(a, s.imp(b, c))) {
                        return fail(format!("{}: adjunction law at {a} {b}", e.name));
                    }
                }
                for a2 in s.elements().filter(|&x| s.leq(a, x)) {
                    for b2 in s.elements().filter(|&x| s.leq(b, x)) {
                        quads += 1;
                        match (s.app(a, b), s.app(a2, b2)) {
                            (Some(x), Some(y)) if !s.leq(x, y) => {
                                return fail(format!("{}: monotonicity at {a} {a2} {b} {b2}", e.name))
                            }
                            (None, Some(_)) => return fail(format!("{}: definedness at {a} {b}", e.name)),
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    if t >= Duration::from_secs(10) {
        return fail(format!("took {t:.2?}"));
    }
    Ok(format!(
        "{} structures, {quads} monotonicity instances, {} search tables ({} witnesses), {t:.2?}",
        c.entries.len(),
        c.search_tables,
        c.search_witnesses
    ))
}

const TERM_COMBINATORS: [Combinator; 6] =
    [Combinator::I, Combinator::K, Combinator::S, Combinator::B, Combinator::C, Combinator::W];

fn combinator_identities(c: &Corpus) -> Verdict {
    let mut checked = 0;
    for e in c.entries.iter().filter(|e| e.s.kind() == Kind::Full) {
        let s = &e.s;
        for comb in TERM_COMBINATORS {
            let t = parse_term(comb.term_text().expect("has a term")).expect("parses");
            let v = eval_term(s, &t, &[]).map_err(|err| format!("{}: {comb}: {err}", e.name))?;
            let f = formula(s, comb);
            let d = denote(s, &t, &mut Vec::new());
            if v != f || d != f || combinator(s, comb) != f {
                return fail(format!(
                    "{}: {comb} eval={} formula={} denotation={}",
                    e.name,
                    s.name(v),
                    s.name(f),
                    s.name(d)
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} identities on full structures"))
}

fn heyting_collapse(c: &Corpus) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pure: Vec<Term> = (0..200).map(|_| random_term(&mut rng, false)).collect();
    let classical: Vec<Term> = (0..200).map(|_| random_term(&mut rng, true)).collect();
    let heyting: Vec<&Entry> = c.entries.iter().filter(|e| e.origin == Origin::Heyting).collect();
    for e in &heyting {
        let s = &e.s;
        for t in &pure {
            let v = eval_term(s, t, &[]).map_err(|err| err.to_string())?;
            if v != s.top() || denote(s, t, &mut Vec::new()) != v {
                return fail(format!("{}: {t} evaluates to {}", e.name, s.name(v)));
            }
        }
        if ["B2", "D4"].contains(&e.name.as_str()) {
            for t in &classical {
                let v = eval_term(s, t, &[]).map_err(|err| err.to_string())?;
                if v != s.top() || denote(s, t, &mut Vec::new()) != v {
                    return fail(format!("{}: {t} evaluates to {}", e.name, s.name(v)));
                }
            }
        }
        if e.name == "C3" {
            let v = eval_term(s, &Term::CC, &[]).map_err(|err| err.to_string())?;
            if v == s.top() {
                return fail("cc is top on C3");
            }
        }
    }
    Ok(format!("{} Heyting structures x 200 pure terms, 200 cc terms on B2 and D4, cc < top on C3", heyting.len()))
}

fn dummy_examples(c: &Corpus) -> Verdict {
    let ii = parse_term("(^x.x)(^x.x)").expect("parses");
    let i = parse_term("^x.x").expect("parses");
    let mut n = 0;
    for e in &c.entries {
        let s = &e.s;
        let ev = |t: &Term| eval_term(s, t, &[]).map_err(|err| err.to_string());
        match e.origin {
            Origin::Dummy(DummyMode::Top) => {
                if ev(&ii)? != s.bottom() || ev(&i)? != s.top() {
                    return fail(format!("{}: I I or I has the wrong value", e.name));
                }
                n += 1;
            }
            Origin::Dummy(DummyMode::Right) => {
                if ev(&Term::CC)? != s.bottom() {
                    return fail(format!("{}: cc is not bottom", e.name));
                }
                n += 1;
            }
            _ => {}
        }
    }
    Ok(format!("{n} dummy structures"))
}

fn separator_theory(c: &Corpus) -> Verdict {
    let mut subsets_checked = 0;
    let mut seps_checked = 0;
    for e in c.entries.iter().filter(|e| e.s.len() <= 4) {
        let s = &e.s;
        let seps = oracle_separators(s);
        for x in subsets(s.len()) {
            subsets_checked += 1;
            if is_separator(s, x) != seps.contains(&x) {
                return fail(format!("{}: separator test differs at {:?}", e.name, s.lattice().set_names(x)));
            }
        }
        let fork = formula(s, Combinator::Fork);
        for &x in &seps {
            seps_checked += 1;
            let r = classify_separator(s, x);
            let filter = oracle_filter(s, x);
            if filter != x.contains(fork) || r.filter != filter || r.fork_member != x.contains(fork) {
                return fail(format!("{}: filter vs FORK at {:?}", e.name, s.lattice().set_names(x)));
            }
            let consistent = !x.contains(s.bottom());
            let maximal = consistent && !seps.iter().any(|&y| y != x && x.is_subset(y) && !y.contains(s.bottom()));
            let alg = ImplicativeAlgebra::new(s.clone(), Separator::new(x)).expect("separator");
            let q = build_quotient(&alg).map_err(|err| err.to_string())?;
            let two = consistent && q.len() == 2;
            if maximal != two || r.ultra != two || r.ultra_by_enumeration != Some(maximal) {
                return fail(format!("{}: ultra vs two classes at {:?}", e.name, s.lattice().set_names(x)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let full: Vec<(&Entry, Vec<ElemSet>)> = c
        .entries
        .iter()
        .filter(|e| e.s.kind() == Kind::Full)
        .map(|e| (e, oracle_separators(&e.s)))
        .collect();
    for _ in 0..500 {
        let (e, seps) = &full[rng.gen_range(0..full.len())];
        let s = &e.s;
        let sep = seps[rng.gen_range(0..seps.len())];
        let (a, b) = (rng.gen_range(0..s.len()), rng.gen_range(0..s.len()));
        let generated = seps
            .iter()
            .filter(|y| sep.with(a).is_subset(**y))
            .fold(ElemSet::full(s.len()), |acc, y| acc.intersection(*y));
        if sep.contains(s.imp(a, b)) != generated.contains(b) {
            return fail(format!("{}: deduction fails at {a} {b}", e.name));
        }
        if !deduction_holds(s, sep, a, b).map_err(|err| err.to_string())? {
            return fail(format!("{}: library deduction check fails at {a} {b}", e.name));
        }
    }
    Ok(format!("{subsets_checked} subsets, {seps_checked} separators, 500 deduction instances"))
}

fn quotient_laws(c: &Corpus) -> Verdict {
    let mut pairs = 0;
    for (name, alg) in algebras(&c.entries, usize::MAX) {
        pairs += 1;
        let s = alg.structure();
        let sep = alg.sep();
        let q = build_quotient(&alg).map_err(|e| format!("{name}: {e}"))?;
        let k = q.len();
        for a in s.elements() {
            for b in s.elements() {
                if q.leq(q.class_of(a), q.class_of(b)) != sep.contains(s.imp(a, b)) {
                    return fail(format!("{name}: order differs from entailment at {a} {b}"));
                }
            }
        }
        let le = |x, y| q.leq(x, y);
        for x in 0..k {
            if !le(x, q.top()) || !le(q.bottom(), x) {
                return fail(format!("{name}: bounds"));
            }
            for y in 0..k {
                if le(x, y) && le(y, x) && x != y {
                    return fail(format!("{name}: not antisymmetric"));
                }
                let (m, j, i) = (q.meet(x, y), q.join(x, y), q.imp(x, y));
                for z in 0..k {
                    if le(z, m) != (le(z, x) && le(z, y)) || le(j, z) != (le(x, z) && le(y, z)) {
                        return fail(format!("{name}: meet or join at c{x} c{y}"));
                    }
                    if le(z, i) != le(q.meet(z, x), y) {
                        return fail(format!("{name}: implication at c{x} c{y}"));
                    }
                    if le(x, y) && le(y, z) && !le(x, z) {
                        return fail(format!("{name}: not transitive"));
                    }
                }
            }
        }
        if !q.heyting_violations().is_empty() {
            return fail(format!("{name}: {}", q.heyting_violations()[0]));
        }
        if sep.contains(formula(s, Combinator::CC)) {
            let boolean = (0..k).all(|x| q.join(x, q.imp(x, q.bottom())) == q.top());
            if !boolean || !q.is_boolean() {
                return fail(format!("{name}: classical but not Boolean"));
            }
        }
    }
    let b2 = make_heyting(&named_lattices()[1].1).expect("B2");
    let c3 = make_heyting(&named_lattices()[2].1).expect("C3");
    let p = make_product(&[&b2, &c3]).map_err(|e| e.to_string())?;
    let mut products = 0;
    for s1 in oracle_separators(&b2) {
        for s2 in oracle_separators(&c3) {
            let ps = p.product_set(&[s1, s2]);
            if !oracle_separator(&p.structure, ps) {
                return fail("product of separators is not a separator");
            }
            let q = build_quotient(&ImplicativeAlgebra::new(p.structure.clone(), Separator::new(ps)).unwrap())
                .map_err(|e| e.to_string())?;
            let q1 = build_quotient(&ImplicativeAlgebra::new(b2.clone(), Separator::new(s1)).unwrap()).unwrap();
            let q2 = build_quotient(&ImplicativeAlgebra::new(c3.clone(), Separator::new(s2)).unwrap()).unwrap();
            let pair = |e: Elem| {
                let comps = p.components(e);
                (q1.class_of(comps[0]), q2.class_of(comps[1]))
            };
            if q.len() != q1.len() * q2.len() {
                return fail("product quotient has the wrong size");
            }
            for x in p.structure.elements() {
                for y in p.structure.elements() {
                    let (px, py) = (pair(x), pair(y));
                    let same = q.class_of(x) == q.class_of(y);
                    let order = q.leq(q.class_of(x), q.class_of(y));
                    if same != (px == py) || order != (q1.leq(px.0, py.0) && q2.leq(px.1, py.1)) {
                        return fail("product quotient is not the product of quotients");
                    }
                }
            }
            products += 1;
        }
    }
    Ok(format!("{pairs} algebras, {products} product separators on B2 x C3"))
}

fn tripos_laws(c: &Corpus) -> Verdict {
    let start = Instant::now();
    let algs = algebras(&c.entries, 4);
    for (name, alg) in &algs {
        let mut checks = vec![functoriality_audit(alg, 2, SEED)];
        checks.extend(adjunction_audit(alg, 2, SEED));
        checks.extend(beck_chevalley_audit(alg, 2, SEED));
        checks.push(generic_predicate_audit(alg, 3, SEED));
        for ch in checks {
            if !ch.passed || ch.detail != "exhaustive" {
                return fail(format!("{name}: {ch}"));
            }
        }
        let n = alg.structure().len();
        for i in 0..=2 {
            for j in 0..=2 {
                for f in FinMap::all(i, j) {
                    for p in all_families(n, i) {
                        for q in all_families(n, j) {
                            let fq = subst(&f, &q);
                            let ex = oracle_entails(alg, &exists_along(alg, &f, &p), &q) == oracle_entails(alg, &p, &fq);
                            let fa = oracle_entails(alg, &fq, &p) == oracle_entails(alg, &q, &forall_along(alg, &f, &p));
                            if !ex || !fa {
                                return fail(format!("{name}: adjunction oracle fails along {:?}", f.map));
                            }
                        }
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return fail(format!("took {t:.2?}"));
    }
    Ok(format!("{} algebras with at most 4 elements, {t:.2?}", algs.len()))
}

fn fundamental_diagram(c: &Corpus) -> Verdict {
    let algs = algebras(&c.entries, usize::MAX);
    let mut principal = 0;
    for (name, alg) in &algs {
        for i in 0..=3 {
            let r = rho_audit(alg, i, SEED);
            if !r.agree() || !r.exhaustive {
                return fail(format!("{name}: rho conditions disagree at |I| = {i}"));
            }
        }
        let sep = alg.sep();
        let is_principal = sep.contains(glb(alg.structure(), sep.iter()));
        let cr = forcing_collapse_audit(alg, 3, SEED);
        if !cr.consistent() || cr.principal != is_principal {
            return fail(format!("{name}: collapse report inconsistent"));
        }
        if is_principal {
            principal += 1;
            if cr.verdict != CollapseVerdict::Forcing {
                return fail(format!("{name}: principal but not forcing"));
            }
        }
    }
    Ok(format!("{} algebras, {principal} principal", algs.len()))
}

fn completion(c: &Corpus) -> Verdict {
    let mut n = 0;
    for e in c.entries.iter().filter(|e| e.s.kind() == Kind::Quasi) {
        let comp = complete_quasi(&e.s);
        let b = &comp.structure;
        if b.kind() != Kind::Full || !validate_structure(b).map_err(|x| x.to_string())?.is_valid() || !oracle_valid(b) {
            return fail(format!("{}: completion is not a valid full structure", e.name));
        }
        for sep in oracle_separators(&e.s) {
            let ext = comp.extend_separator(sep);
            if !oracle_separator(b, ext) {
                return fail(format!("{}: extended separator is not a separator", e.name));
            }
            let a = ImplicativeAlgebra::new(e.s.clone(), Separator::new(sep)).expect("separator");
            let ba = ImplicativeAlgebra::new(b.clone(), Separator::new(ext)).expect("separator");
            for ch in embedding_iso_audit(&a, &comp, &ba, 3, SEED) {
                if !ch.passed {
                    return fail(format!("{}: {ch}", e.name));
                }
            }
            n += 1;
        }
    }
    Ok(format!("{n} quasi algebras completed and audited"))
}

fn aks_round_trip(c: &Corpus) -> Verdict {
    let start = Instant::now();
    for e in c.entries.iter().filter(|e| e.origin == Origin::Heyting && ["B2", "D4"].contains(&e.name.as_str())) {
        let s = &e.s;
        let a = ImplicativeAlgebra::new(s.clone(), Separator::new(ElemSet::singleton(s.top()))).expect("top");
        let aks = aks_from_classical(&a).map_err(|x| x.to_string())?;
        aks.validate().map_err(|x| format!("{}: {x}", e.name))?;
        let b = make_from_aks(&aks).map_err(|x| x.to_string())?;
        let psi = meet_of_stacks(s, b.structure());
        for (m, &v) in psi.iter().enumerate() {
            if v != glb(s, ElemSet(m as u64).iter()) {
                return fail(format!("{}: psi is not the meet", e.name));
            }
        }
        let checks = reduction_iso_audit(&b, &a, &psi, 2, SEED).map_err(|x| format!("{}: {x}", e.name))?;
        if let Some(ch) = checks.iter().find(|c| !c.passed) {
            return fail(format!("{}: {ch}", e.name));
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return fail(format!("took {t:.2?}"));
    }
    Ok(format!("B2 and D4, {t:.2?}"))
}

fn join_compatibility(c: &Corpus) -> Verdict {
    let mut compatible = 0;
    let mut classical = 0;
    for e in &c.entries {
        let s = &e.s;
        let lib = is_join_compatible(s).map_err(|x| x.to_string())?;
        let oracle = oracle_join_compatible(s);
        if lib.is_none() != oracle {
            return fail(format!("{}: compatibility differs from the oracle", e.name));
        }
        match e.origin {
            Origin::Heyting if !oracle => return fail(format!("{} is not join compatible", e.name)),
            Origin::Dummy(DummyMode::Right) => {
                let Some(w) = lib else { return fail(format!("{} is join compatible", e.name)) };
                let m = glb(s, w.family.iter().map(|a| s.imp(a, w.target)));
                let j = s.imp(lub(s, w.family.iter()), w.target);
                if m != w.meet_of_imps || j != w.imp_of_join || m == j {
                    return fail(format!("{}: witness does not witness", e.name));
                }
            }
            _ => {}
        }
        if oracle {
            compatible += 1;
            let cc = formula(s, Combinator::CC);
            for sep in oracle_separators(s).into_iter().filter(|x| x.contains(cc)) {
                classical += 1;
                if !oracle_filter(s, sep) {
                    return fail(format!("{}: classical separator {:?} is not a filter", e.name, sep));
                }
            }
        }
    }
    Ok(format!("{compatible} compatible structures, {classical} classical separators all filters"))
}

fn cli_goldens() -> Verdict {
    let failures = common::golden_failures();
    if let Some(f) = failures.first() {
        return fail(format!("{} failures, first: {f}", failures.len()));
    }
    Ok(format!("{} golden cases", common::cases().len()))
}

fn main() {
    let t = Instant::now();
    let corpus = build_corpus();
    println!("corpus: {} structures built in {:.2?}", corpus.entries.len(), t.elapsed());
    let criteria: [(&str, &dyn Fn() -> Verdict); 12] = [
        ("axiom suite", &|| axiom_suite(&corpus)),
        ("combinator identities", &|| combinator_identities(&corpus)),
        ("Heyting collapse", &|| heyting_collapse(&corpus)),
        ("dummy structure examples", &|| dummy_examples(&corpus)),
        ("separator theory", &|| separator_theory(&corpus)),
        ("quotient laws", &|| quotient_laws(&corpus)),
        ("tripos laws", &|| tripos_laws(&corpus)),
        ("fundamental diagram", &|| fundamental_diagram(&corpus)),
        ("completion", &|| completion(&corpus)),
        ("AKS round trip", &|| aks_round_trip(&corpus)),
        ("join compatibility", &|| join_compatibility(&corpus)),
        ("CLI goldens and exit codes", &cli_goldens),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2}. {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
