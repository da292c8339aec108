//! The `.ialg` file format: one keyword-first directive per line, `#` comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use implicative::fol::{decode, Interpretation, Table};
use implicative::structure::{make_dummy, make_heyting, DummyMode};
use implicative::{build_lattice, ElemSet, ImplicativeStructure, Kind, Separator};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpMode {
    Heyting,
    DummyRight,
    DummyTop,
    Table,
}

impl ImpMode {
    fn keyword(self) -> &'static str {
        match self {
            ImpMode::Heyting => "heyting",
            ImpMode::DummyRight => "dummy-right",
            ImpMode::DummyTop => "dummy-top",
            ImpMode::Table => "table",
        }
    }
}

/// A parsed file: the structure, its named subsets and an optional interpretation.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub name: String,
    pub mode: ImpMode,
    pub structure: ImplicativeStructure,
    pub separators: Vec<Separator>,
    pub interpretation: Option<Interpretation>,
}

impl Loaded {
    pub fn separator(&self, name: &str) -> Option<&Separator> {
        self.separators.iter().find(|s| s.name.as_deref() == Some(name))
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, LoadError> {
    Err(LoadError::Parse { line, msg: msg.into() })
}

pub fn load_file(path: &Path) -> Result<Loaded, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

/// `(line, name, [(tuple, value)])`
type TableLines = Vec<(usize, String, Vec<(Vec<String>, String)>)>;

#[derive(Default)]
struct Raw {
    name: Option<(usize, String)>,
    kind: Option<(usize, Kind)>,
    elements: Option<(usize, Vec<String>)>,
    order: Vec<(usize, String, String)>,
    imp: Option<(usize, ImpMode)>,
    rows: Vec<(usize, String, Vec<String>)>,
    separators: Vec<(usize, String, Vec<String>)>,
    domain: Option<(usize, Vec<String>)>,
    preds: TableLines,
    funs: TableLines,
}

fn once<T>(slot: &mut Option<(usize, T)>, line: usize, what: &str, v: T) -> Result<(), LoadError> {
    if let Some((prev, _)) = slot {
        return err(line, format!("duplicate `{what}` directive (first on line {prev})"));
    }
    *slot = Some((line, v));
    Ok(())
}

/// `NAME: entries...`
fn split_head(line: usize, rest: &str) -> Result<(String, &str), LoadError> {
    let Some((head, tail)) = rest.split_once(':') else {
        return err(line, "expected `NAME: ...`");
    };
    let head = head.trim();
    if head.is_empty() || head.contains(char::is_whitespace) {
        return err(line, "expected a single name before `:`");
    }
    Ok((head.to_string(), tail))
}

/// `()`, `d`, or `(d1,d2,...)` followed by `=value`.
fn parse_entry(line: usize, word: &str) -> Result<(Vec<String>, String), LoadError> {
    let Some((tuple, value)) = word.rsplit_once('=') else {
        return err(line, format!("expected `tuple=value`, got `{word}`"));
    };
    if value.is_empty() {
        return err(line, format!("missing value in `{word}`"));
    }
    let args = if let Some(inner) = tuple.strip_prefix('(') {
        let Some(inner) = inner.strip_suffix(')') else {
            return err(line, format!("unclosed tuple in `{word}`"));
        };
        if inner.is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(|s| s.to_string()).collect()
        }
    } else {
        vec![tuple.to_string()]
    };
    if args.iter().any(|a| a.is_empty()) {
        return err(line, format!("empty tuple component in `{word}`"));
    }
    Ok((args, value.to_string()))
}

pub fn parse(text: &str) -> Result<Loaded, LoadError> {
    let mut raw = Raw::default();
    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let content = full.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (kw, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let words: Vec<&str> = rest.split_whitespace().collect();
        match kw {
            "structure" => {
                if words.len() != 1 {
                    return err(line, "expected `structure NAME`");
                }
                once(&mut raw.name, line, "structure", words[0].to_string())?;
            }
            "kind" => {
                let k = match words.as_slice() {
                    ["full"] => Kind::Full,
                    ["quasi"] => Kind::Quasi,
                    _ => return err(line, "expected `kind full` or `kind quasi`"),
                };
                once(&mut raw.kind, line, "kind", k)?;
            }
            "elements" => {
                if words.is_empty() {
                    return err(line, "no elements listed");
                }
                once(&mut raw.elements, line, "elements", words.iter().map(|w| w.to_string()).collect())?;
            }
            "order" => {
                if words.is_empty() {
                    return err(line, "expected pairs `a<=b`");
                }
                for w in words {
                    match w.split_once("<=") {
                        Some((a, b)) if !a.is_empty() && !b.is_empty() => {
                            raw.order.push((line, a.to_string(), b.to_string()))
                        }
                        _ => return err(line, format!("expected `a<=b`, got `{w}`")),
                    }
                }
            }
            "imp" => {
                let m = match words.as_slice() {
                    ["heyting"] => ImpMode::Heyting,
                    ["dummy-right"] => ImpMode::DummyRight,
                    ["dummy-top"] => ImpMode::DummyTop,
                    ["table"] => ImpMode::Table,
                    _ => return err(line, "expected `imp heyting|dummy-right|dummy-top|table`"),
                };
                once(&mut raw.imp, line, "imp", m)?;
            }
            "row" => {
                let (name, tail) = split_head(line, rest)?;
                raw.rows.push((line, name, tail.split_whitespace().map(str::to_string).collect()));
            }
            "separator" => {
                let Some((name, members)) = words.split_first() else {
                    return err(line, "expected `separator NAME m1 m2 ...`");
                };
                if raw.separators.iter().any(|(_, n, _)| n == name) {
                    return err(line, format!("duplicate separator `{name}`"));
                }
                raw.separators.push((line, name.to_string(), members.iter().map(|m| m.to_string()).collect()));
            }
            "domain" => {
                if words.is_empty() {
                    return err(line, "empty domain");
                }
                once(&mut raw.domain, line, "domain", words.iter().map(|w| w.to_string()).collect())?;
            }
            "pred" | "fun" => {
                let (name, tail) = split_head(line, rest)?;
                let entries = tail
                    .split_whitespace()
                    .map(|w| parse_entry(line, w))
                    .collect::<Result<Vec<_>, _>>()?;
                let list = if kw == "pred" { &mut raw.preds } else { &mut raw.funs };
                if list.iter().any(|(_, n, _)| *n == name) {
                    return err(line, format!("duplicate {kw} `{name}`"));
                }
                list.push((line, name, entries));
            }
            other => return err(line, format!("unknown directive `{other}`")),
        }
    }
    build(raw)
}

fn build(raw: Raw) -> Result<Loaded, LoadError> {
    let Some((_, name)) = raw.name.clone() else {
        return err(1, "missing `structure` directive");
    };
    let Some((_, kind)) = raw.kind else {
        return err(1, "missing `kind` directive");
    };
    let Some((el_line, elements)) = raw.elements.clone() else {
        return err(1, "missing `elements` directive");
    };
    let Some((imp_line, mode)) = raw.imp else {
        return err(1, "missing `imp` directive");
    };
    let pairs: Vec<(String, String)> = raw.order.iter().map(|(_, a, b)| (a.clone(), b.clone())).collect();
    let lattice = build_lattice(&elements, &pairs).map_err(|e| {
        let line = raw.order.last().map_or(el_line, |(l, _, _)| *l);
        LoadError::Parse { line, msg: e.to_string() }
    })?;
    let lookup = |line: usize, n: &str| {
        lattice
            .lookup(n)
            .ok_or_else(|| LoadError::Parse { line, msg: format!("unknown element `{n}`") })
    };
    if mode != ImpMode::Table {
        if let Some((line, _, _)) = raw.rows.first() {
            return err(*line, "`row` directives need `imp table`");
        }
    }
    let table = match mode {
        ImpMode::Heyting => make_heyting(&lattice)
            .map_err(|e| LoadError::Parse { line: imp_line, msg: e.to_string() })?
            .imp_table()
            .to_vec(),
        ImpMode::DummyRight => make_dummy(&lattice, DummyMode::Right).imp_table().to_vec(),
        ImpMode::DummyTop => make_dummy(&lattice, DummyMode::Top).imp_table().to_vec(),
        ImpMode::Table => {
            if raw.rows.len() != elements.len() {
                let line = raw.rows.last().map_or(imp_line, |r| r.0);
                return err(line, format!("expected {} rows, found {}", elements.len(), raw.rows.len()));
            }
            let mut t = Vec::new();
            for ((line, row_name, vals), expected) in raw.rows.iter().zip(&elements) {
                if row_name != expected {
                    return err(*line, format!("expected row `{expected}`, found `{row_name}`"));
                }
                if vals.len() != elements.len() {
                    return err(*line, format!("expected {} entries, found {}", elements.len(), vals.len()));
                }
                t.push(vals.iter().map(|v| lookup(*line, v)).collect::<Result<Vec<_>, _>>()?);
            }
            t
        }
    };
    let structure = ImplicativeStructure::new(lattice.clone(), table, kind)
        .map_err(|e| LoadError::Parse { line: imp_line, msg: e.to_string() })?;
    let mut separators = Vec::new();
    for (line, sname, members) in &raw.separators {
        let mut set = ElemSet::EMPTY;
        for m in members {
            set.insert(lookup(*line, m)?);
        }
        separators.push(Separator::named(sname.clone(), set));
    }
    let interpretation = build_interpretation(&raw, &structure)?;
    Ok(Loaded { name, mode, structure, separators, interpretation })
}

fn build_interpretation(raw: &Raw, s: &ImplicativeStructure) -> Result<Option<Interpretation>, LoadError> {
    let Some((dom_line, domain)) = &raw.domain else {
        if let Some((line, _, _)) = raw.preds.first().or(raw.funs.first()) {
            return err(*line, "`pred` and `fun` need a `domain` directive");
        }
        return Ok(None);
    };
    let m = domain.len();
    let dom_index = |line: usize, n: &str| {
        domain
            .iter()
            .position(|d| d == n)
            .ok_or_else(|| LoadError::Parse { line, msg: format!("unknown domain element `{n}`") })
    };
    for (i, d) in domain.iter().enumerate() {
        if domain[..i].contains(d) {
            return err(*dom_line, format!("duplicate domain element `{d}`"));
        }
    }
    let table = |line: usize, name: &str, entries: &[(Vec<String>, String)], value: &dyn Fn(&str) -> Result<usize, LoadError>| {
        let arity = entries.first().map_or(0, |e| e.0.len());
        let size = m.pow(arity as u32);
        let mut values: Vec<Option<usize>> = vec![None; size];
        for (args, v) in entries {
            if args.len() != arity {
                return err(line, format!("`{name}` mixes arities {arity} and {}", args.len()));
            }
            let idx = args
                .iter()
                .try_fold(0, |acc, a| dom_index(line, a).map(|d| acc * m + d))?;
            if values[idx].replace(value(v)?).is_some() {
                return err(line, format!("`{name}` defines {} twice", show_tuple(args)));
            }
        }
        if let Some(missing) = values.iter().position(Option::is_none) {
            let args: Vec<String> = decode(missing, arity, m).into_iter().map(|d| domain[d].clone()).collect();
            return err(line, format!("`{name}` is missing {}", show_tuple(&args)));
        }
        Ok(Table { arity, values: values.into_iter().map(Option::unwrap).collect() })
    };
    let mut preds = BTreeMap::new();
    for (line, name, entries) in &raw.preds {
        let value = |v: &str| {
            s.lattice()
                .lookup(v)
                .ok_or_else(|| LoadError::Parse { line: *line, msg: format!("unknown element `{v}`") })
        };
        preds.insert(name.clone(), table(*line, name, entries, &value)?);
    }
    let mut funcs = BTreeMap::new();
    for (line, name, entries) in &raw.funs {
        let value = |v: &str| dom_index(*line, v);
        funcs.insert(name.clone(), table(*line, name, entries, &value)?);
    }
    let i = Interpretation { domain: domain.clone(), preds, funcs };
    i.check(s).map_err(|e| LoadError::Parse { line: *dom_line, msg: e.to_string() })?;
    Ok(Some(i))
}

fn show_tuple(args: &[String]) -> String {
    if args.len() == 1 {
        args[0].clone()
    } else {
        format!("({})", args.join(","))
    }
}

/// Canonical text: cover pairs for the order, members in carrier order, tables in tuple order.
pub fn emit(l: &Loaded) -> String {
    let s = &l.structure;
    let lat = s.lattice();
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "structure {}", l.name).unwrap();
    writeln!(w, "kind {}", s.kind()).unwrap();
    writeln!(w, "elements {}", lat.names().join(" ")).unwrap();
    let covers: Vec<String> = lat.covers().iter().map(|&(a, b)| format!("{}<={}", lat.name(a), lat.name(b))).collect();
    if !covers.is_empty() {
        writeln!(w, "order {}", covers.join(" ")).unwrap();
    }
    writeln!(w, "imp {}", l.mode.keyword()).unwrap();
    if l.mode == ImpMode::Table {
        for a in s.elements() {
            let row: Vec<&str> = s.elements().map(|b| s.name(s.imp(a, b))).collect();
            writeln!(w, "row {}: {}", s.name(a), row.join(" ")).unwrap();
        }
    }
    for sep in &l.separators {
        let mut line = format!("separator {}", sep.name.as_deref().unwrap_or("S"));
        for m in lat.set_names(sep.members) {
            line.push(' ');
            line.push_str(m);
        }
        writeln!(w, "{line}").unwrap();
    }
    if let Some(i) = &l.interpretation {
        let m = i.domain.len();
        writeln!(w, "domain {}", i.domain.join(" ")).unwrap();
        let entries = |t: &Table, value: &dyn Fn(usize) -> String| {
            (0..t.values.len())
                .map(|k| {
                    let args: Vec<String> = decode(k, t.arity, m).into_iter().map(|d| i.domain[d].clone()).collect();
                    let tuple = if t.arity == 0 { "()".to_string() } else { show_tuple(&args) };
                    format!(" {tuple}={}", value(t.values[k]))
                })
                .collect::<String>()
        };
        for (name, t) in &i.preds {
            writeln!(w, "pred {name}:{}", entries(t, &|v| s.name(v).to_string())).unwrap();
        }
        for (name, t) in &i.funcs {
            writeln!(w, "fun {name}:{}", entries(t, &|v| i.domain[v].clone())).unwrap();
        }
    }
    out
}

/// Wraps a structure built in code, in table mode.
pub fn from_structure(name: &str, structure: ImplicativeStructure, separators: Vec<Separator>) -> Loaded {
    Loaded { name: name.to_string(), mode: ImpMode::Table, structure, separators, interpretation: None }
}
