//! Golden cases for the `ialg` binary, shared by the golden and acceptance targets.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
    pub exit: i32,
}

fn case(name: &str, exit: i32, args: &[&str]) -> Case {
    Case { name: name.to_string(), args: args.iter().map(|s| s.to_string()).collect(), exit }
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Corpus files by stem, sorted.
pub fn corpus_files() -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(crate_dir().join("corpus"))
        .expect("corpus directory")
        .filter_map(|e| {
            let p = e.ok()?.path();
            let stem = p.file_stem()?.to_string_lossy().into_owned();
            (p.extension()? == "ialg").then_some(stem)
        })
        .collect();
    v.sort();
    v
}

pub fn cases() -> Vec<Case> {
    let mut v = Vec::new();
    for stem in corpus_files() {
        let path = format!("corpus/{stem}.ialg");
        let (validate_exit, emit_exit) = match stem.as_str() {
            "bad-variance" | "bad-empty-meet" => (1, 0),
            "bad-syntax" | "bad-lattice" => (2, 2),
            _ => (0, 0),
        };
        v.push(case(&format!("validate-{stem}"), validate_exit, &["validate", &path]));
        v.push(case(&format!("emit-{stem}"), emit_exit, &["emit", &path]));
    }
    v.extend([
        case("eval-dummy-top-ii", 0, &["eval", "corpus/dummy-top-c3.ialg", "--term", "(^x.x)(^x.x)"]),
        case("eval-dummy-top-i", 0, &["eval", "corpus/dummy-top-c3.ialg", "--term", "^x.x"]),
        case("eval-dummy-right-cc", 0, &["eval", "corpus/dummy-right-d4.ialg", "--term", "cc"]),
        case("eval-ctx", 0, &["eval", "corpus/c3.ialg", "--term", "^z.x (y z)", "--ctx", "x=mid,y=top"]),
        case("eval-type", 0, &["eval", "corpus/c3.ialg", "--term", "λx.λy.x", "--type", "top"]),
        case("eval-type-fails", 1, &["eval", "corpus/c3.ialg", "--term", "x", "--ctx", "x=top", "--type", "mid"]),
        case("eval-undefined", 1, &["eval", "corpus/kleene-p2.ialg", "--term", "x y", "--ctx", "x=set_0,y=set_1"]),
        case("eval-parse-error", 2, &["eval", "corpus/c3.ialg", "--term", "(^x."]),
        case("eval-unbound", 2, &["eval", "corpus/c3.ialg", "--term", "x"]),
        case("combinator-c3", 0, &["combinator", "corpus/c3.ialg"]),
        case("combinator-d4", 0, &["combinator", "corpus/d4.ialg"]),
        case("combinator-dummy-right", 0, &["combinator", "corpus/dummy-right-d4.ialg"]),
        case("combinator-dummy-top", 0, &["combinator", "corpus/dummy-top-c3.ialg"]),
        case("combinator-kleene", 0, &["combinator", "corpus/kleene-p2.ialg"]),
        case("combinator-named", 0, &["combinator", "corpus/b2.ialg", "K", "S", "FORK"]),
        case("combinator-unknown", 2, &["combinator", "corpus/b2.ialg", "Y"]),
        case("sep-gen-c3", 0, &["sep", "gen", "corpus/c3.ialg", "mid"]),
        case("sep-gen-d4", 0, &["sep", "gen", "corpus/d4.ialg", "x", "y"]),
        case("sep-classify-d4", 0, &["sep", "classify", "corpus/d4.ialg", "--set", "x,top"]),
        case("sep-classify-c3", 0, &["sep", "classify", "corpus/c3.ialg", "--sep", "TOP"]),
        case("sep-classify-not-closed", 0, &["sep", "classify", "corpus/c3.ialg", "--set", "mid"]),
        case("sep-classify-quasi", 0, &["sep", "classify", "corpus/kleene-p2.ialg", "--sep", "ALL"]),
        case("sep-list-b2", 0, &["sep", "list", "corpus/b2.ialg"]),
        case("sep-list-c3", 0, &["sep", "list", "corpus/c3.ialg"]),
        case("sep-list-d4", 0, &["sep", "list", "corpus/d4.ialg"]),
        case("sep-list-dummy-top", 0, &["sep", "list", "corpus/dummy-top-c3.ialg"]),
        case("quotient-c3-top", 0, &["quotient", "corpus/c3.ialg", "--sep", "TOP"]),
        case("quotient-c3-mid", 0, &["quotient", "corpus/c3.ialg", "--sep", "MID"]),
        case("quotient-d4-top", 0, &["quotient", "corpus/d4.ialg", "--sep", "TOP"]),
        case("quotient-d4-graph", 0, &["quotient", "corpus/d4.ialg", "--sep", "UPX", "--graph"]),
        case("quotient-unknown-sep", 2, &["quotient", "corpus/d4.ialg", "--sep", "NOPE"]),
        case("quotient-invalid", 1, &["quotient", "corpus/bad-variance.ialg", "--sep", "S"]),
        case("fol-formula", 0, &["fol", "corpus/fol-c3.ialg", "--formula", "forall x (p(x) \\/ q(x))"]),
        case("fol-function", 0, &["fol", "corpus/fol-c3.ialg", "--formula", "exists y r(s(y), y)"]),
        case("fol-soundness", 0, &["fol", "corpus/fol-c3.ialg", "--soundness"]),
        case("fol-no-domain", 2, &["fol", "corpus/c3.ialg", "--formula", "a"]),
        case("fol-parse-error", 2, &["fol", "corpus/fol-c3.ialg", "--formula", "p(x"]),
        case("tripos-b2", 0, &["tripos", "corpus/b2.ialg", "--sep", "TOP", "--max-index", "2", "--audit", "adjunction,bc"]),
        case("tripos-c3", 0, &["tripos", "corpus/c3.ialg", "--sep", "TOP", "--max-index", "3"]),
        case("tripos-d4-upx", 0, &["tripos", "corpus/d4.ialg", "--sep", "UPX", "--max-index", "2", "--seed", "7"]),
        case("tripos-bad-audit", 2, &["tripos", "corpus/b2.ialg", "--sep", "TOP", "--audit", "everything"]),
        case("complete-kleene", 0, &["complete", "corpus/kleene-p2.ialg"]),
        case("complete-kleene-audit", 0, &["complete", "corpus/kleene-p2.ialg", "--audit-index", "3"]),
        case("aks-emit-b2", 0, &["aks", "emit", "corpus/b2.ialg", "--sep", "TOP"]),
        case("aks-induced-b2", 0, &["aks", "emit", "corpus/b2.ialg", "--sep", "TOP", "--induced"]),
        case("aks-audit-d4", 0, &["aks", "emit", "corpus/d4.ialg", "--sep", "TOP", "--audit-index", "2"]),
        case("aks-not-classical", 1, &["aks", "emit", "corpus/c3.ialg", "--sep", "TOP"]),
        case("missing-file", 2, &["validate", "corpus/missing.ialg"]),
        case("unknown-subcommand", 2, &["frobnicate"]),
    ]);
    v
}

/// Stdout, then stderr and the exit code when they are not the defaults.
pub fn run_case(c: &Case) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_ialg"))
        .args(&c.args)
        .current_dir(crate_dir())
        .output()
        .expect("run ialg");
    let code = out.status.code().unwrap_or(-1);
    let mut text = String::from_utf8(out.stdout).expect("utf-8 stdout");
    let err = String::from_utf8(out.stderr).expect("utf-8 stderr");
    if !err.is_empty() {
        text.push_str("--- stderr\n");
        text.push_str(&err);
    }
    text.push_str(&format!("--- exit {code}\n"));
    (text, code)
}

pub fn golden_path(c: &Case) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{}.out", c.name))
}

/// Mismatches against the stored golden files; rewrites them when `UPDATE_GOLDEN` is set.
pub fn golden_failures() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for c in cases() {
        let (text, code) = run_case(&c);
        let path = golden_path(&c);
        if update {
            std::fs::write(&path, &text).expect("write golden");
        }
        if code != c.exit {
            failures.push(format!("{}: exit {code}, expected {}", c.name, c.exit));
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == text => {}
            Ok(_) => failures.push(format!("{}: output differs from {}", c.name, rel(&path))),
            Err(_) => failures.push(format!("{}: missing {}", c.name, rel(&path))),
        }
    }
    failures
}

fn rel(p: &Path) -> String {
    p.strip_prefix(crate_dir()).unwrap_or(p).display().to_string()
}
