//! Subcommands. Each writes line-oriented text to `out` and returns an exit code.

use std::fmt::Write as _;

use implicative::aks::{aks_from_classical, make_from_aks, meet_of_stacks, Aks};
use implicative::combinator::{combinator, Combinator};
use implicative::completion::complete_quasi;
use implicative::fol::{interpret_formula, parse_formula, soundness_audit, Interpretation};
use implicative::quotient::build_quotient;
use implicative::separator::{classify_separator, enumerate_separators, generate_separator};
use implicative::structure::{
    is_join_compatible, validate_structure, validate_structure_sampled, ValidationMode, ValidationReport,
    EXHAUSTIVE_LIMIT,
};
use implicative::tripos::{
    adjunction_audit, beck_chevalley_audit, embedding_iso_audit, forcing_collapse_audit, functoriality_audit,
    generic_predicate_audit, reduction_iso_audit, rho_audit, Check,
};
use implicative::{
    check_typing, eval_term, parse_term, Elem, ElemSet, EvalError, ImplicativeAlgebra, ImplicativeStructure, Kind,
    Separator, TypingContext,
};
use thiserror::Error;

use crate::format::{emit, from_structure, Loaded};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unreadable file, parse error, unknown name. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The input is well formed but a check failed. Exit code 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

pub type Outcome = Result<i32, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn names(s: &ImplicativeStructure, set: ElemSet) -> String {
    s.lattice().set_names(set).join(" ")
}

fn element(s: &ImplicativeStructure, name: &str) -> Result<Elem, CliError> {
    s.lattice().lookup(name).ok_or_else(|| usage(format!("unknown element `{name}`")))
}

fn report(s: &ImplicativeStructure, seed: u64) -> ValidationReport {
    if s.len() <= EXHAUSTIVE_LIMIT {
        validate_structure(s).expect("within the exhaustive limit")
    } else {
        validate_structure_sampled(s, seed)
    }
}

/// Fails with the first axiom violation, if any.
pub fn require_valid(l: &Loaded) -> Result<(), CliError> {
    let r = report(&l.structure, 0);
    match r.violations.first() {
        None => Ok(()),
        Some(v) => Err(CliError::Failed(format!(
            "{}: invalid structure: {}",
            l.name,
            v.describe(&l.structure)
        ))),
    }
}

/// The named separator as an algebra over the loaded structure.
pub fn algebra(l: &Loaded, sep: &str) -> Result<ImplicativeAlgebra, CliError> {
    require_valid(l)?;
    let s = l.separator(sep).ok_or_else(|| usage(format!("no separator named `{sep}`")))?;
    ImplicativeAlgebra::new(l.structure.clone(), s.clone()).map_err(|e| CliError::Failed(format!("{sep}: {e}")))
}

const SHOWN_VIOLATIONS: usize = 20;

pub fn validate(l: &Loaded, seed: u64, out: &mut String) -> Outcome {
    let s = &l.structure;
    writeln!(out, "structure {}", l.name).unwrap();
    writeln!(out, "kind {}", s.kind()).unwrap();
    writeln!(out, "elements {}", s.len()).unwrap();
    let r = report(s, seed);
    match r.mode {
        ValidationMode::Exhaustive => writeln!(out, "validation exhaustive").unwrap(),
        ValidationMode::Sampled { seed, samples } => {
            writeln!(out, "validation sampled seed={seed} samples={samples}").unwrap()
        }
    }
    for v in r.violations.iter().take(SHOWN_VIOLATIONS) {
        writeln!(out, "VIOLATION {}", v.describe(s)).unwrap();
    }
    if r.violations.len() > SHOWN_VIOLATIONS {
        writeln!(out, "VIOLATION ... {} more", r.violations.len() - SHOWN_VIOLATIONS).unwrap();
    }
    if !r.is_valid() {
        writeln!(out, "axioms FAIL").unwrap();
        return Ok(1);
    }
    writeln!(out, "axioms PASS").unwrap();
    writeln!(out, "total-application {}", yn(s.is_total())).unwrap();
    if s.len() <= EXHAUSTIVE_LIMIT {
        match is_join_compatible(s).expect("within the exhaustive limit") {
            None => writeln!(out, "join-compatible yes").unwrap(),
            Some(w) => writeln!(
                out,
                "join-compatible no family={{{}}} target={} meet-of-implications={} implication-of-join={}",
                s.lattice().set_names(w.family).join(","),
                s.name(w.target),
                s.name(w.meet_of_imps),
                s.name(w.imp_of_join)
            )
            .unwrap(),
        }
    }
    let mut ok = true;
    for sep in &l.separators {
        let name = sep.name.as_deref().unwrap_or("S");
        let rep = classify_separator(s, sep.members);
        ok &= rep.is_separator;
        writeln!(
            out,
            "separator {name}: {} consistent={} classical={} filter={}",
            if rep.is_separator { "valid" } else { "INVALID" },
            yn(rep.consistent),
            yn(rep.classical),
            yn(rep.filter)
        )
        .unwrap();
    }
    Ok(code(ok))
}

fn parse_bindings(s: &ImplicativeStructure, ctx: Option<&str>) -> Result<Vec<(String, Elem)>, CliError> {
    let Some(ctx) = ctx else { return Ok(Vec::new()) };
    ctx.split(',')
        .filter(|b| !b.trim().is_empty())
        .map(|b| {
            let (x, v) = b
                .split_once('=')
                .ok_or_else(|| usage(format!("expected `x=element` in context, got `{b}`")))?;
            Ok((x.trim().to_string(), element(s, v.trim())?))
        })
        .collect()
}

pub fn eval(l: &Loaded, term: &str, ctx: Option<&str>, ty: Option<&str>, out: &mut String) -> Outcome {
    require_valid(l)?;
    let s = &l.structure;
    let t = parse_term(term).map_err(|e| usage(format!("term: {e}")))?;
    let env = parse_bindings(s, ctx)?;
    if let Some(ty) = ty {
        let a = element(s, ty)?;
        let ctx = TypingContext::new(env).map_err(|e| usage(e.to_string()))?;
        let typed = check_typing(s, &ctx, &t, a).map_err(eval_error)?;
        writeln!(out, "typed {}", yn(typed)).unwrap();
        return Ok(code(typed));
    }
    let v = eval_term(s, &t, &env).map_err(eval_error)?;
    writeln!(out, "{}", s.name(v)).unwrap();
    Ok(0)
}

fn eval_error(e: EvalError) -> CliError {
    match e {
        EvalError::Undefined(..) | EvalError::DepthExceeded { .. } => CliError::Failed(e.to_string()),
        _ => usage(e.to_string()),
    }
}

pub fn combinators(l: &Loaded, which: &[String], out: &mut String) -> Outcome {
    require_valid(l)?;
    let s = &l.structure;
    let list: Vec<Combinator> = if which.is_empty() {
        Combinator::ALL.to_vec()
    } else {
        which
            .iter()
            .map(|w| w.parse().map_err(|_| usage(format!("unknown combinator `{w}`"))))
            .collect::<Result<_, _>>()?
    };
    let mut ok = true;
    for c in list {
        let v = combinator(s, c);
        let mut line = format!("{c} {}", s.name(v));
        if let Some(text) = c.term_text() {
            let t = parse_term(text).expect("combinator term parses");
            match eval_term(s, &t, &[]) {
                Ok(e) => {
                    line.push_str(&format!(" eval={}", s.name(e)));
                    // the two coincide on full structures
                    if e != v && s.kind() == Kind::Full {
                        ok = false;
                        line.push_str(" MISMATCH");
                    }
                }
                Err(EvalError::Undefined(..)) => line.push_str(" eval=undefined"),
                Err(e) => return Err(CliError::Failed(e.to_string())),
            }
        }
        writeln!(out, "{line}").unwrap();
    }
    Ok(code(ok))
}

pub fn sep_gen(l: &Loaded, gens: &[String], out: &mut String) -> Outcome {
    require_valid(l)?;
    let s = &l.structure;
    let mut set = ElemSet::EMPTY;
    for g in gens {
        set.insert(element(s, g)?);
    }
    let sep = generate_separator(s, set).map_err(|e| CliError::Failed(e.to_string()))?;
    writeln!(out, "separator {}", names(s, sep)).unwrap();
    writeln!(out, "consistent {}", yn(!sep.contains(s.bottom()))).unwrap();
    Ok(0)
}

pub fn sep_classify(l: &Loaded, sep: Option<&str>, set: Option<&str>, out: &mut String) -> Outcome {
    require_valid(l)?;
    let s = &l.structure;
    let members = match (sep, set) {
        (Some(name), None) => l.separator(name).ok_or_else(|| usage(format!("no separator named `{name}`")))?.members,
        (None, Some(list)) => list
            .split(',')
            .filter(|m| !m.trim().is_empty())
            .map(|m| element(s, m.trim()))
            .collect::<Result<ElemSet, _>>()?,
        _ => return Err(usage("give exactly one of --sep and --set")),
    };
    writeln!(out, "members {}", names(s, members)).unwrap();
    let r = classify_separator(s, members);
    writeln!(out, "{r}").unwrap();
    if let Some(u) = r.ultra_by_enumeration {
        writeln!(out, "maximal-consistent: {}", yn(u)).unwrap();
    }
    Ok(0)
}

pub fn sep_list(l: &Loaded, out: &mut String) -> Outcome {
    require_valid(l)?;
    let s = &l.structure;
    let all = enumerate_separators(s).map_err(|e| usage(e.to_string()))?;
    for sep in &all {
        let r = classify_separator(s, *sep);
        writeln!(
            out,
            "{{{}}} consistent={} classical={} filter={} classes={}",
            s.lattice().set_names(*sep).join(","),
            yn(r.consistent),
            yn(r.classical),
            yn(r.filter),
            r.classes.expect("enumerated sets are separators")
        )
        .unwrap();
    }
    writeln!(out, "total {}", all.len()).unwrap();
    Ok(0)
}

pub fn quotient(l: &Loaded, sep: &str, graph: bool, out: &mut String) -> Outcome {
    let alg = algebra(l, sep)?;
    let q = build_quotient(&alg).map_err(|e| CliError::Failed(e.to_string()))?;
    if graph {
        out.push_str(&q.graph(&alg));
        return Ok(0);
    }
    let s = alg.structure();
    writeln!(out, "quotient {} sep={sep}", l.name).unwrap();
    writeln!(out, "classes {}", q.len()).unwrap();
    for c in 0..q.len() {
        writeln!(out, "class c{c} rep={} members={}", s.name(q.representative(c)), names(s, q.members(c))).unwrap();
    }
    writeln!(out, "top c{}", q.top()).unwrap();
    writeln!(out, "bottom c{}", q.bottom()).unwrap();
    for x in 0..q.len() {
        let row: Vec<String> = (0..q.len()).map(|y| format!("c{}", q.imp(x, y))).collect();
        writeln!(out, "imp c{x}: {}", row.join(" ")).unwrap();
    }
    writeln!(out, "boolean {}", yn(q.is_boolean())).unwrap();
    let v = q.heyting_violations();
    for w in &v {
        writeln!(out, "VIOLATION {w}").unwrap();
    }
    writeln!(out, "heyting {}", if v.is_empty() { "PASS" } else { "FAIL" }).unwrap();
    Ok(code(v.is_empty()))
}

fn interpretation(l: &Loaded) -> Result<&Interpretation, CliError> {
    l.interpretation
        .as_ref()
        .ok_or_else(|| usage(format!("{} has no `domain` section", l.name)))
}

pub fn fol_formula(l: &Loaded, formula: &str, out: &mut String) -> Outcome {
    require_valid(l)?;
    let i = interpretation(l)?;
    let f = parse_formula(formula).map_err(|e| usage(e.to_string()))?;
    let v = interpret_formula(&l.structure, i, &f).map_err(|e| usage(e.to_string()))?;
    writeln!(out, "{}", l.structure.name(v)).unwrap();
    Ok(0)
}

pub fn fol_soundness(l: &Loaded, out: &mut String) -> Outcome {
    require_valid(l)?;
    let s = &l.structure;
    let i = interpretation(l)?;
    let lines = soundness_audit(s, i).map_err(|e| usage(e.to_string()))?;
    let mut ok = true;
    for a in &lines {
        ok &= a.passed();
        let w = a.witness_value.map_or("undefined", |v| s.name(v));
        writeln!(
            out,
            "{} {} value={} witness={} in-core={}",
            if a.passed() { "PASS" } else { "FAIL" },
            a.formula,
            s.name(a.value),
            w,
            yn(a.in_core)
        )
        .unwrap();
    }
    Ok(code(ok))
}

pub const AUDITS: [&str; 6] = ["functor", "adjunction", "bc", "generic", "rho", "collapse"];

fn print_checks(checks: &[Check], out: &mut String) -> bool {
    for c in checks {
        writeln!(out, "{c}").unwrap();
    }
    checks.iter().all(|c| c.passed)
}

pub fn tripos(l: &Loaded, sep: &str, max_index: usize, audits: &[String], seed: u64, out: &mut String) -> Outcome {
    let alg = algebra(l, sep)?;
    for a in audits {
        if !AUDITS.contains(&a.as_str()) {
            return Err(usage(format!("unknown audit `{a}`; expected one of {}", AUDITS.join(","))));
        }
    }
    let list: Vec<&str> = if audits.is_empty() { AUDITS.to_vec() } else { audits.iter().map(String::as_str).collect() };
    writeln!(out, "tripos {} sep={sep} max-index={max_index} seed={seed}", l.name).unwrap();
    let mut checks = Vec::new();
    for a in list {
        match a {
            "functor" => checks.push(functoriality_audit(&alg, max_index, seed)),
            "adjunction" => checks.extend(adjunction_audit(&alg, max_index, seed)),
            "bc" => checks.extend(beck_chevalley_audit(&alg, max_index, seed)),
            "generic" => checks.push(generic_predicate_audit(&alg, max_index, seed)),
            "rho" => {
                for i in 0..=max_index {
                    let r = rho_audit(&alg, i, seed);
                    let mut detail = format!(
                        "injective={} uniform-is-power={} meet-closed={} {}",
                        yn(r.injective),
                        yn(r.uniform_is_power),
                        yn(r.meet_closed),
                        if r.exhaustive { "exhaustive" } else { "sampled" }
                    );
                    if let Some(w) = &r.witness {
                        detail.push_str(&format!(" witness {w}"));
                    }
                    checks.push(Check { name: format!("rho[{i}]"), passed: r.agree(), detail });
                }
            }
            "collapse" => {
                let r = forcing_collapse_audit(&alg, max_index, seed);
                checks.push(Check {
                    name: "collapse".into(),
                    passed: r.consistent(),
                    detail: format!("verdict={} principal={}", r.verdict, yn(r.principal)),
                });
            }
            _ => unreachable!("audit names checked above"),
        }
    }
    Ok(code(print_checks(&checks, out)))
}

pub fn complete(l: &Loaded, audit_index: Option<usize>, seed: u64, out: &mut String) -> Outcome {
    require_valid(l)?;
    let a = &l.structure;
    let c = complete_quasi(a);
    let seps: Vec<Separator> = l
        .separators
        .iter()
        .map(|s| Separator { members: c.extend_separator(s.members), name: s.name.clone() })
        .collect();
    let completed = from_structure(&format!("{}_completed", l.name), c.structure.clone(), seps);
    let Some(k) = audit_index else {
        out.push_str(&emit(&completed));
        return Ok(0);
    };
    writeln!(out, "complete {} max-index={k} seed={seed}", l.name).unwrap();
    let r = report(&c.structure, seed);
    writeln!(out, "CHECK completed-axioms {}", if r.is_valid() { "PASS" } else { "FAIL" }).unwrap();
    let mut ok = r.is_valid();
    for (orig, ext) in l.separators.iter().zip(&completed.separators) {
        let name = orig.name.as_deref().unwrap_or("S");
        let src = ImplicativeAlgebra::new(a.clone(), orig.clone()).map_err(|e| CliError::Failed(format!("{name}: {e}")))?;
        let dst = match ImplicativeAlgebra::new(c.structure.clone(), ext.clone()) {
            Ok(d) => d,
            Err(e) => {
                writeln!(out, "CHECK separator[{name}] FAIL {e}").unwrap();
                ok = false;
                continue;
            }
        };
        writeln!(out, "separator {name}").unwrap();
        ok &= print_checks(&embedding_iso_audit(&src, &c, &dst, k, seed), out);
    }
    Ok(code(ok))
}

pub fn aks_emit(l: &Loaded, sep: &str, induced: bool, audit_index: Option<usize>, seed: u64, out: &mut String) -> Outcome {
    let alg = algebra(l, sep)?;
    let aks = aks_from_classical(&alg).map_err(|e| CliError::Failed(e.to_string()))?;
    if let Err(e) = aks.validate() {
        return Err(CliError::Failed(e.to_string()));
    }
    if !induced && audit_index.is_none() {
        write_aks(&aks, out);
        return Ok(0);
    }
    let b = make_from_aks(&aks).map_err(|e| CliError::Failed(e.to_string()))?;
    if let Some(k) = audit_index {
        writeln!(out, "aks {} sep={sep} max-index={k} seed={seed}", l.name).unwrap();
        let psi = meet_of_stacks(alg.structure(), b.structure());
        return match reduction_iso_audit(&b, &alg, &psi, k, seed) {
            Ok(checks) => Ok(code(print_checks(&checks, out))),
            Err(e) => {
                writeln!(out, "CHECK reduction FAIL {e}").unwrap();
                Ok(1)
            }
        };
    }
    let f = from_structure(&format!("{}_aks", l.name), b.structure().clone(), vec![b.separator().clone()]);
    out.push_str(&emit(&f));
    Ok(0)
}

fn write_aks(aks: &Aks, out: &mut String) {
    let t = |i: usize| aks.terms[i].as_str();
    let p = |i: usize| aks.stacks[i].as_str();
    writeln!(out, "terms {}", aks.terms.join(" ")).unwrap();
    writeln!(out, "stacks {}", aks.stacks.join(" ")).unwrap();
    writeln!(out, "k {}", t(aks.k)).unwrap();
    writeln!(out, "s {}", t(aks.s)).unwrap();
    writeln!(out, "cc {}", t(aks.cc)).unwrap();
    let pl: Vec<&str> = aks.proof_like.iter().map(t).collect();
    writeln!(out, "proof-like {}", pl.join(" ")).unwrap();
    for (i, row) in aks.app.iter().enumerate() {
        let r: Vec<&str> = row.iter().map(|&u| t(u)).collect();
        writeln!(out, "app {}: {}", t(i), r.join(" ")).unwrap();
    }
    for (i, row) in aks.push.iter().enumerate() {
        let r: Vec<&str> = row.iter().map(|&u| p(u)).collect();
        writeln!(out, "push {}: {}", t(i), r.join(" ")).unwrap();
    }
    let k: Vec<&str> = aks.kont.iter().map(|&u| t(u)).collect();
    writeln!(out, "kont {}", k.join(" ")).unwrap();
    for (i, set) in aks.pole.iter().enumerate() {
        let r: Vec<&str> = set.iter().map(p).collect();
        writeln!(out, "pole {}: {}", t(i), r.join(" ")).unwrap();
    }
}
