//! Predicates over finite index sets and the audits of their tripos structure.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::completion::Completion;
use crate::encode;
use crate::lattice::{Elem, ElemSet};
use crate::separator::ImplicativeAlgebra;
use crate::structure::EXHAUSTIVE_LIMIT;

/// A predicate over the index set `0..family.len()`.
pub type Family = Vec<Elem>;

/// Enumerations of families switch to sampling above this many candidates.
pub const ENUMERATION_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriposError {
    #[error("index sets differ: {0} vs {1}")]
    IndexMismatch(usize, usize),
    #[error("not a reduction: condition {condition} fails at {witness}")]
    NotAReduction { condition: &'static str, witness: String },
}

/// A map between finite index sets `0..domain` and `0..codomain`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinMap {
    pub codomain: usize,
    pub map: Vec<usize>,
}

impl FinMap {
    pub fn new(codomain: usize, map: Vec<usize>) -> FinMap {
        assert!(map.iter().all(|&j| j < codomain), "map leaves its codomain");
        FinMap { codomain, map }
    }

    pub fn identity(n: usize) -> FinMap {
        FinMap { codomain: n, map: (0..n).collect() }
    }

    pub fn domain(&self) -> usize {
        self.map.len()
    }

    /// `other` after `self`.
    pub fn then(&self, other: &FinMap) -> FinMap {
        assert_eq!(self.codomain, other.domain());
        FinMap { codomain: other.codomain, map: self.map.iter().map(|&j| other.map[j]).collect() }
    }

    /// Every map from `0..domain` to `0..codomain`.
    pub fn all(domain: usize, codomain: usize) -> Vec<FinMap> {
        let count = codomain.pow(domain as u32);
        (0..count)
            .map(|mut c| {
                let mut map = vec![0; domain];
                for slot in map.iter_mut() {
                    *slot = c % codomain;
                    c /= codomain;
                }
                FinMap { codomain, map }
            })
            .collect()
    }

    fn fiber(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.map.iter().enumerate().filter(move |(_, &t)| t == j).map(|(i, _)| i)
    }
}

/// A least-index minimal separator element below every member, if any.
pub fn uniform_witness(alg: &ImplicativeAlgebra, family: &[Elem]) -> Option<Elem> {
    let s = alg.structure();
    let lower: Vec<Elem> = alg.sep().iter().filter(|&c| family.iter().all(|&a| s.leq(c, a))).collect();
    lower
        .iter()
        .copied()
        .find(|&c| !lower.iter().any(|&d| d != c && s.leq(d, c)))
}

/// Membership in the uniform power separator.
pub fn in_uniform(alg: &ImplicativeAlgebra, family: &[Elem]) -> bool {
    uniform_witness(alg, family).is_some()
}

/// `p |- q` iff the family `p_i -> q_i` is uniformly in the separator.
pub fn pred_entails(alg: &ImplicativeAlgebra, p: &[Elem], q: &[Elem]) -> Result<bool, TriposError> {
    if p.len() != q.len() {
        return Err(TriposError::IndexMismatch(p.len(), q.len()));
    }
    Ok(entails(alg, p, q))
}

fn entails(alg: &ImplicativeAlgebra, p: &[Elem], q: &[Elem]) -> bool {
    let s = alg.structure();
    in_uniform(alg, &p.iter().zip(q).map(|(&a, &b)| s.imp(a, b)).collect::<Vec<_>>())
}

fn equiv(alg: &ImplicativeAlgebra, p: &[Elem], q: &[Elem]) -> bool {
    entails(alg, p, q) && entails(alg, q, p)
}

pub fn pred_equiv(alg: &ImplicativeAlgebra, p: &[Elem], q: &[Elem]) -> Result<bool, TriposError> {
    Ok(pred_entails(alg, p, q)? && pred_entails(alg, q, p)?)
}

/// Reindexing `q` along `f`: `i |-> q(f(i))`.
pub fn subst(f: &FinMap, q: &[Elem]) -> Family {
    assert_eq!(f.codomain, q.len());
    f.map.iter().map(|&j| q[j]).collect()
}

/// Fiberwise meet; empty fibers give the top.
pub fn forall_along(alg: &ImplicativeAlgebra, f: &FinMap, p: &[Elem]) -> Family {
    assert_eq!(f.domain(), p.len());
    let s = alg.structure();
    (0..f.codomain)
        .map(|j| encode::forall(s, &f.fiber(j).map(|i| p[i]).collect::<Vec<_>>()))
        .collect()
}

/// Fiberwise existential encoding.
pub fn exists_along(alg: &ImplicativeAlgebra, f: &FinMap, p: &[Elem]) -> Family {
    assert_eq!(f.domain(), p.len());
    let s = alg.structure();
    (0..f.codomain)
        .map(|j| encode::exists(s, &f.fiber(j).map(|i| p[i]).collect::<Vec<_>>()))
        .collect()
}

/// Families indexed by `0..size` over `0..n`: all of them when at most
/// [`ENUMERATION_CAP`], otherwise that many seeded random draws.
pub fn families(n: usize, size: usize, seed: u64) -> (Vec<Family>, bool) {
    let total = (n as u128).checked_pow(size as u32).unwrap_or(u128::MAX);
    if total <= ENUMERATION_CAP as u128 {
        let fams = (0..total as usize)
            .map(|mut c| {
                let mut f = vec![0; size];
                for slot in f.iter_mut() {
                    *slot = c % n;
                    c /= n;
                }
                f
            })
            .collect();
        return (fams, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (size as u64) << 32);
    let fams = (0..ENUMERATION_CAP).map(|_| (0..size).map(|_| rng.gen_range(0..n)).collect()).collect();
    (fams, false)
}

/// One named audit outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, failure: Option<String>, ok_detail: impl Into<String>) -> Check {
        match failure {
            None => Check { name: name.into(), passed: true, detail: ok_detail.into() },
            Some(w) => Check { name: name.into(), passed: false, detail: w },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CHECK {} {}", self.name, if self.passed { "PASS" } else { "FAIL" })?;
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}

fn show(alg: &ImplicativeAlgebra, p: &[Elem]) -> String {
    let names: Vec<&str> = p.iter().map(|&e| alg.structure().name(e)).collect();
    format!("[{}]", names.join(","))
}

fn show_map(f: &FinMap) -> String {
    let m: Vec<String> = f.map.iter().map(|j| j.to_string()).collect();
    format!("{}->{}:[{}]", f.domain(), f.codomain, m.join(","))
}

fn sampling_note(all_exhaustive: bool) -> &'static str {
    if all_exhaustive {
        "exhaustive"
    } else {
        "sampled"
    }
}

/// Reindexing respects identities, composition and entailment.
pub fn functoriality_audit(alg: &ImplicativeAlgebra, max_index: usize, seed: u64) -> Check {
    let n = alg.structure().len();
    let mut exhaustive = true;
    let failure = (|| {
        for i in 0..=max_index {
            let (fi, ex) = families(n, i, seed);
            exhaustive &= ex;
            for p in &fi {
                if subst(&FinMap::identity(i), p) != *p {
                    return Some(format!("identity {}", show(alg, p)));
                }
            }
            for j in 0..=max_index {
                let (fj, ex) = families(n, j, seed);
                exhaustive &= ex;
                for f in FinMap::all(i, j) {
                    for p in &fj {
                        for q in &fj {
                            if entails(alg, p, q) && !entails(alg, &subst(&f, p), &subst(&f, q)) {
                                return Some(format!("monotone {} {} {}", show_map(&f), show(alg, p), show(alg, q)));
                            }
                        }
                    }
                    for k in 0..=max_index {
                        let (fk, _) = families(n, k, seed);
                        for g in FinMap::all(j, k) {
                            let gf = f.then(&g);
                            for r in &fk {
                                if subst(&gf, r) != subst(&f, &subst(&g, r)) {
                                    return Some(format!(
                                        "composition {} {} {}",
                                        show_map(&f),
                                        show_map(&g),
                                        show(alg, r)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    })();
    Check::new("functoriality", failure, sampling_note(exhaustive))
}

/// Existential left adjoint and universal right adjoint to reindexing.
pub fn adjunction_audit(alg: &ImplicativeAlgebra, max_index: usize, seed: u64) -> Vec<Check> {
    let n = alg.structure().len();
    let mut exhaustive = true;
    let mut ex_fail = None;
    let mut all_fail = None;
    for i in 0..=max_index {
        let (fi, e1) = families(n, i, seed);
        for j in 0..=max_index {
            let (fj, e2) = families(n, j, seed);
            exhaustive &= e1 && e2;
            for f in FinMap::all(i, j) {
                for p in &fi {
                    let ex = exists_along(alg, &f, p);
                    let un = forall_along(alg, &f, p);
                    for q in &fj {
                        let fq = subst(&f, q);
                        if ex_fail.is_none() && entails(alg, &ex, q) != entails(alg, p, &fq) {
                            ex_fail = Some(format!("{} p={} q={}", show_map(&f), show(alg, p), show(alg, q)));
                        }
                        if all_fail.is_none() && entails(alg, &fq, p) != entails(alg, q, &un) {
                            all_fail = Some(format!("{} p={} q={}", show_map(&f), show(alg, p), show(alg, q)));
                        }
                    }
                }
            }
        }
    }
    let note = sampling_note(exhaustive);
    vec![Check::new("adjunction-exists", ex_fail, note), Check::new("adjunction-forall", all_fail, note)]
}

/// A cospan `g1: I1 -> J <- I2 :g2` and its pullback projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackSquare {
    pub g1: FinMap,
    pub g2: FinMap,
    pub f1: FinMap,
    pub f2: FinMap,
}

impl PullbackSquare {
    pub fn new(g1: FinMap, g2: FinMap) -> PullbackSquare {
        assert_eq!(g1.codomain, g2.codomain);
        let mut pairs = Vec::new();
        for a in 0..g1.domain() {
            for b in 0..g2.domain() {
                if g1.map[a] == g2.map[b] {
                    pairs.push((a, b));
                }
            }
        }
        let f1 = FinMap::new(g1.domain(), pairs.iter().map(|p| p.0).collect());
        let f2 = FinMap::new(g2.domain(), pairs.iter().map(|p| p.1).collect());
        PullbackSquare { g1, g2, f1, f2 }
    }

    /// Both Beck–Chevalley conditions for one predicate over `I2`, up to equivalence.
    pub fn holds_for(&self, alg: &ImplicativeAlgebra, p: &[Elem]) -> (bool, bool) {
        let ex_l = exists_along(alg, &self.f1, &subst(&self.f2, p));
        let ex_r = subst(&self.g1, &exists_along(alg, &self.g2, p));
        let un_l = forall_along(alg, &self.f1, &subst(&self.f2, p));
        let un_r = subst(&self.g1, &forall_along(alg, &self.g2, p));
        (equiv(alg, &ex_l, &ex_r), equiv(alg, &un_l, &un_r))
    }
}

/// Every pullback square with index sets of size at most `max_index`.
pub fn beck_chevalley_audit(alg: &ImplicativeAlgebra, max_index: usize, seed: u64) -> Vec<Check> {
    let n = alg.structure().len();
    let mut exhaustive = true;
    let mut ex_fail = None;
    let mut all_fail = None;
    for j in 0..=max_index {
        for i1 in 0..=max_index {
            for i2 in 0..=max_index {
                let (fams, ex) = families(n, i2, seed);
                exhaustive &= ex;
                for g1 in FinMap::all(i1, j) {
                    for g2 in FinMap::all(i2, j) {
                        let sq = PullbackSquare::new(g1.clone(), g2.clone());
                        for p in &fams {
                            let (e, a) = sq.holds_for(alg, p);
                            let w = || format!("g1={} g2={} p={}", show_map(&g1), show_map(&g2), show(alg, p));
                            if !e && ex_fail.is_none() {
                                ex_fail = Some(w());
                            }
                            if !a && all_fail.is_none() {
                                all_fail = Some(w());
                            }
                        }
                    }
                }
            }
        }
    }
    let note = sampling_note(exhaustive);
    vec![Check::new("beck-chevalley-exists", ex_fail, note), Check::new("beck-chevalley-forall", all_fail, note)]
}

/// Every predicate is the reindexing of the identity family along itself.
pub fn generic_predicate_audit(alg: &ImplicativeAlgebra, max_index: usize, seed: u64) -> Check {
    let n = alg.structure().len();
    let tr: Family = (0..n).collect();
    let mut exhaustive = true;
    let mut failure = None;
    for i in 0..=max_index {
        let (fams, ex) = families(n, i, seed);
        exhaustive &= ex;
        for p in &fams {
            let sigma = FinMap::new(n, p.clone());
            let q = subst(&sigma, &tr);
            if (q != *p || !equiv(alg, &q, p)) && failure.is_none() {
                failure = Some(show(alg, p));
            }
        }
    }
    Check::new("generic-predicate", failure, sampling_note(exhaustive))
}

/// The three conditions that decide whether predicates over `I` reduce to pointwise ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoReport {
    pub index: usize,
    /// Pointwise equivalence implies equivalence of predicates.
    pub injective: bool,
    /// Uniform membership coincides with pointwise membership.
    pub uniform_is_power: bool,
    /// The separator is closed under meets of `I`-indexed families.
    pub meet_closed: bool,
    pub exhaustive: bool,
    pub witness: Option<String>,
}

impl RhoReport {
    pub fn agree(&self) -> bool {
        self.injective == self.uniform_is_power && self.uniform_is_power == self.meet_closed
    }
}

pub fn rho_audit(alg: &ImplicativeAlgebra, index: usize, seed: u64) -> RhoReport {
    let s = alg.structure();
    let sep = alg.sep();
    let (fams, exhaustive) = families(s.len(), index, seed);
    let mut witness = None;
    let pointwise_equiv =
        |p: &[Elem], q: &[Elem]| p.iter().zip(q).all(|(&a, &b)| alg.entails(a, b) && alg.entails(b, a));
    let mut injective = true;
    'outer: for p in &fams {
        for q in &fams {
            if pointwise_equiv(p, q) && !equiv(alg, p, q) {
                injective = false;
                witness = Some(format!("p={} q={}", show(alg, p), show(alg, q)));
                break 'outer;
            }
        }
    }
    let uniform_is_power = fams
        .iter()
        .all(|p| in_uniform(alg, p) == p.iter().all(|&a| sep.contains(a)));
    let sep_members: Vec<Elem> = sep.iter().collect();
    let (sep_fams, _) = families(sep_members.len(), index, seed);
    let meet_closed = sep_fams.iter().all(|f| {
        let m = s.lattice().meet_iter(f.iter().map(|&k| sep_members[k]));
        sep.contains(m)
    });
    RhoReport { index, injective, uniform_is_power, meet_closed, exhaustive, witness }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapseVerdict {
    Forcing,
    NonForcing,
}

impl fmt::Display for CollapseVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CollapseVerdict::Forcing => "forcing",
            CollapseVerdict::NonForcing => "non-forcing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseReport {
    pub verdict: CollapseVerdict,
    pub principal: bool,
    pub rho: Vec<RhoReport>,
}

impl CollapseReport {
    /// The rho conditions hold at every size that can separate filters from non-filters
    /// exactly when the separator is principal.
    pub fn consistent(&self) -> bool {
        self.rho.iter().all(RhoReport::agree)
            && self
                .rho
                .iter()
                .filter(|r| r.index >= 2)
                .all(|r| r.injective == self.principal)
    }
}

/// "forcing" exactly when the separator is a principal filter.
pub fn forcing_collapse_audit(alg: &ImplicativeAlgebra, max_index: usize, seed: u64) -> CollapseReport {
    let sep = alg.sep();
    let principal = !sep.is_empty() && sep.contains(alg.structure().lattice().meet(sep));
    let verdict = if principal { CollapseVerdict::Forcing } else { CollapseVerdict::NonForcing };
    let rho = (0..=max_index).map(|i| rho_audit(alg, i, seed)).collect();
    CollapseReport { verdict, principal, rho }
}

fn meet_families(n: usize) -> Vec<ElemSet> {
    if n <= EXHAUSTIVE_LIMIT {
        (0..1u64 << n).map(ElemSet).collect()
    } else {
        let mut v = vec![ElemSet::EMPTY];
        for i in 0..n {
            for j in i..n {
                v.push(ElemSet::singleton(i).with(j));
            }
        }
        v
    }
}

/// Checks that `psi: B -> A` preserves meets and implication, reflects the separator,
/// and is onto; then compares the predicate preorders for each `|I| <= max_index`.
pub fn reduction_iso_audit(
    b: &ImplicativeAlgebra,
    a: &ImplicativeAlgebra,
    psi: &[Elem],
    max_index: usize,
    seed: u64,
) -> Result<Vec<Check>, TriposError> {
    let (sb, sa) = (b.structure(), a.structure());
    if psi.len() != sb.len() || psi.iter().any(|&x| x >= sa.len()) {
        return Err(TriposError::NotAReduction { condition: "total map", witness: format!("{} entries", psi.len()) });
    }
    for fam in meet_families(sb.len()) {
        let lhs = psi[sb.lattice().meet(fam)];
        let rhs = sa.lattice().meet_iter(fam.iter().map(|x| psi[x]));
        if lhs != rhs {
            return Err(TriposError::NotAReduction {
                condition: "meets",
                witness: format!("{:?}", sb.lattice().set_names(fam)),
            });
        }
    }
    for x in sb.elements() {
        for y in sb.elements() {
            if psi[sb.imp(x, y)] != sa.imp(psi[x], psi[y]) {
                return Err(TriposError::NotAReduction {
                    condition: "implication",
                    witness: format!("{} {}", sb.name(x), sb.name(y)),
                });
            }
        }
        if b.sep().contains(x) != a.sep().contains(psi[x]) {
            return Err(TriposError::NotAReduction { condition: "separator", witness: sb.name(x).to_string() });
        }
    }
    let image: ElemSet = psi.iter().copied().collect();
    if let Some(miss) = sa.lattice().all().difference(image).first() {
        return Err(TriposError::NotAReduction { condition: "surjectivity", witness: sa.name(miss).to_string() });
    }
    let preimage = |y: Elem| psi.iter().position(|&v| v == y);
    Ok(predicate_iso(b, a, psi, &preimage, max_index, seed))
}

/// The inclusion of a quasi algebra into its completion: embedding laws, then the
/// predicate preorders, with `(b -> c) -> c` normalization as the candidate preimage.
pub fn embedding_iso_audit(
    a: &ImplicativeAlgebra,
    completion: &Completion,
    b: &ImplicativeAlgebra,
    max_index: usize,
    seed: u64,
) -> Vec<Check> {
    let laws = completion.embedding_violations(a.structure());
    let sep_ok = (0..a.structure().len())
        .all(|x| a.sep().contains(x) == b.sep().contains(completion.embedding[x]));
    let mut out = vec![
        Check::new("embedding-laws", laws.into_iter().next(), ""),
        Check::new(
            "embedding-separator",
            (!sep_ok).then(|| "separator not reflected".to_string()),
            "",
        ),
    ];
    let phi = &completion.embedding;
    let candidate = |y: Elem| {
        let c = completion.normalize(y);
        phi.iter().position(|&v| v == c)
    };
    out.extend(predicate_iso(a, b, phi, &candidate, max_index, seed));
    out
}

/// For each size, the map on families preserves and reflects entailment and hits every class.
fn predicate_iso(
    src: &ImplicativeAlgebra,
    dst: &ImplicativeAlgebra,
    map: &[Elem],
    candidate: &dyn Fn(Elem) -> Option<Elem>,
    max_index: usize,
    seed: u64,
) -> Vec<Check> {
    let apply = |p: &[Elem]| p.iter().map(|&x| map[x]).collect::<Vec<_>>();
    let mut out = Vec::new();
    for i in 0..=max_index {
        let (sf, ex1) = families(src.structure().len(), i, seed);
        let (df, ex2) = families(dst.structure().len(), i, seed);
        let images: Vec<Family> = sf.iter().map(|p| apply(p)).collect();
        let mut order_fail = None;
        'o: for (p, mp) in sf.iter().zip(&images) {
            for (q, mq) in sf.iter().zip(&images) {
                if entails(src, p, q) != entails(dst, mp, mq) {
                    order_fail = Some(format!("p={} q={}", show(src, p), show(src, q)));
                    break 'o;
                }
            }
        }
        let mut onto_fail = None;
        for q in &df {
            let direct: Option<Family> = q.iter().map(|&y| candidate(y)).collect();
            let hit = match direct {
                Some(p) if equiv(dst, &apply(&p), q) => true,
                _ => images.iter().any(|m| equiv(dst, m, q)),
            };
            if !hit {
                onto_fail = Some(format!("q={}", show(dst, q)));
                break;
            }
        }
        let note = sampling_note(ex1 && ex2);
        out.push(Check::new(format!("iso-order[{i}]"), order_fail, note));
        out.push(Check::new(format!("iso-onto[{i}]"), onto_fail, note));
    }
    out
}
