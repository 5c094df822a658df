//! Interpolant checking: vocabulary conditions, a truth-table oracle for ground
//! formulas, and prover refutations for first-order formulas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::extract::{ipol_all, ExtractionOptions};
use crate::normalize::prepare_inputs;
use crate::prover::{prove, ProofLimits, ProverPolicy, StartClauses};
use crate::syntax::{Atom, Formula, Polarity, Term};
use crate::tableau::{NodeId, Side, Tableau};

/// Truth tables are refused above this many distinct atoms.
pub const DEFAULT_ATOM_BUDGET: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{0} distinct atoms exceed the truth-table budget of {1}")]
    AtomBudget(usize, usize),
    #[error("formula is not ground")]
    NotGround,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SyntacticCheck {
    /// Predicates with polarity, functions and free variables all shared.
    pub lyndon_ok: bool,
    /// As `lyndon_ok` but ignoring polarity.
    pub craig_ok: bool,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticVerdict {
    Proved,
    /// The prover gave up; nothing is known.
    NotProved(String),
    OraclePass,
    OracleFail,
}

impl SemanticVerdict {
    pub fn confirmed(&self) -> bool {
        matches!(self, SemanticVerdict::Proved | SemanticVerdict::OraclePass)
    }

    pub fn refuted(&self) -> bool {
        matches!(self, SemanticVerdict::OracleFail)
    }
}

impl fmt::Display for SemanticVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticVerdict::Proved => f.write_str("proved"),
            SemanticVerdict::NotProved(r) => write!(f, "inconclusive ({r})"),
            SemanticVerdict::OraclePass => f.write_str("holds (truth table)"),
            SemanticVerdict::OracleFail => f.write_str("fails (truth table)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerificationMethod {
    TruthTable,
    Refutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub syntactic: SyntacticCheck,
    /// `f |= h`
    pub left: SemanticVerdict,
    /// `h |= g`
    pub right: SemanticVerdict,
    pub method: VerificationMethod,
}

impl VerificationReport {
    /// Syntactically valid and semantically confirmed in both directions.
    pub fn confirmed(&self) -> bool {
        self.syntactic.lyndon_ok && self.left.confirmed() && self.right.confirmed()
    }

    /// Some check definitely failed.
    pub fn failed(&self) -> bool {
        !self.syntactic.lyndon_ok || self.left.refuted() || self.right.refuted()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lyndon: {}", if self.syntactic.lyndon_ok { "ok" } else { "violated" })?;
        writeln!(f, "craig: {}", if self.syntactic.craig_ok { "ok" } else { "violated" })?;
        for v in &self.syntactic.violations {
            writeln!(f, "  {v}")?;
        }
        writeln!(f, "f |= h: {}", self.left)?;
        write!(f, "h |= g: {}", self.right)
    }
}

/// Vocabulary conditions of a Craig-Lyndon interpolant `h` of `f` and `g`.
pub fn check_syntactic(f: &Formula, g: &Formula, h: &Formula) -> SyntacticCheck {
    let mut v = Vec::new();
    let (pf, pg, ph) = (f.pred_polarities(), g.pred_polarities(), h.pred_polarities());
    let mut polarity_only = true;
    for (p, pol) in &ph {
        let key = (p.clone(), *pol);
        if !pf.contains(&key) || !pg.contains(&key) {
            let missing = if !pf.contains(&key) { "f" } else { "g" };
            v.push(format!("predicate {p} occurs with polarity {pol} in h but not in {missing}"));
            let craig_ok = pf.iter().any(|(q, _)| q == p) && pg.iter().any(|(q, _)| q == p);
            polarity_only &= craig_ok;
        }
    }
    let mut craig = polarity_only;
    let (ff, fg) = (f.functions(), g.functions());
    for s in h.functions() {
        if !ff.contains(&s) || !fg.contains(&s) {
            v.push(format!("function {s} occurs in h but not in {}", if ff.contains(&s) { "g" } else { "f" }));
            craig = false;
        }
    }
    let (vf, vg) = (f.free_vars(), g.free_vars());
    for x in h.free_vars() {
        if !vf.contains(&x) || !vg.contains(&x) {
            v.push(format!("free variable {x} of h is not free in both f and g"));
            craig = false;
        }
    }
    SyntacticCheck { lyndon_ok: v.is_empty(), craig_ok: craig, violations: v }
}

/// Atoms of quantifier-free formulas, numbered in order of first occurrence.
struct AtomIndex {
    index: BTreeMap<Atom, usize>,
}

impl AtomIndex {
    fn new<'a>(fs: impl IntoIterator<Item = &'a Formula>, budget: usize) -> Result<Self, VerifyError> {
        let mut index = BTreeMap::new();
        for f in fs {
            if !f.is_quantifier_free() {
                return Err(VerifyError::NotGround);
            }
            f.for_each_atom(&mut |a| {
                let n = index.len();
                index.entry(a.clone()).or_insert(n);
            });
        }
        if index.len() > budget {
            return Err(VerifyError::AtomBudget(index.len(), budget));
        }
        Ok(AtomIndex { index })
    }

    fn eval(&self, f: &Formula, bits: u64) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => bits >> self.index[a] & 1 == 1,
            Formula::Not(a) => !self.eval(a, bits),
            Formula::And(a, b) => self.eval(a, bits) && self.eval(b, bits),
            Formula::Or(a, b) => self.eval(a, bits) || self.eval(b, bits),
            Formula::Imp(a, b) => !self.eval(a, bits) || self.eval(b, bits),
            Formula::Iff(a, b) => self.eval(a, bits) == self.eval(b, bits),
            Formula::Quant(..) => unreachable!("quantifier-free"),
        }
    }

    fn assignments(&self) -> std::ops::Range<u64> {
        0..(1u64 << self.index.len())
    }
}

/// `f |= g` by truth table, treating each distinct atom as a proposition.
pub fn ground_entails(f: &Formula, g: &Formula) -> Result<bool, VerifyError> {
    ground_entails_with_budget(f, g, DEFAULT_ATOM_BUDGET)
}

pub fn ground_entails_with_budget(f: &Formula, g: &Formula, budget: usize) -> Result<bool, VerifyError> {
    let idx = AtomIndex::new([f, g], budget)?;
    Ok(idx.assignments().all(|b| !idx.eval(f, b) || idx.eval(g, b)))
}

pub fn ground_satisfiable(f: &Formula) -> Result<bool, VerifyError> {
    let idx = AtomIndex::new([f], DEFAULT_ATOM_BUDGET)?;
    Ok(idx.assignments().any(|b| idx.eval(f, b)))
}

pub fn ground_equivalent(f: &Formula, g: &Formula) -> Result<bool, VerifyError> {
    let idx = AtomIndex::new([f, g], DEFAULT_ATOM_BUDGET)?;
    Ok(idx.assignments().all(|b| idx.eval(f, b) == idx.eval(g, b)))
}

/// Replaces free variables by constants `fv_<name>` so the formulas become sentences.
pub fn close_with_constants(fs: &[&Formula]) -> (Vec<Formula>, BTreeMap<String, String>) {
    let mut names = BTreeMap::new();
    for f in fs {
        for v in f.free_vars() {
            names.entry(v.clone()).or_insert_with(|| format!("fv_{v}"));
        }
    }
    let out = fs.iter().map(|f| f.substitute_free(&|v| names.get(v).map(|c: &String| Term::constant(c.clone())))).collect();
    (out, names)
}

fn entails_by_refutation(f: &Formula, g: &Formula, limits: ProofLimits) -> SemanticVerdict {
    let prepared = match prepare_inputs(f, g) {
        Ok(p) => p,
        Err(e) => return SemanticVerdict::NotProved(e.to_string()),
    };
    let policy = ProverPolicy { start: StartClauses::FromG, regularity: true };
    match prove(&prepared.f_clauses, &prepared.g_clauses, limits, policy) {
        Ok(_) => SemanticVerdict::Proved,
        Err(e) => SemanticVerdict::NotProved(e.to_string()),
    }
}

/// `f |= h` and `h |= g`: by truth table when all three are ground and small,
/// otherwise by refuting `f & ~h` and `h & ~g` with the prover.
pub fn check_semantic(f: &Formula, g: &Formula, h: &Formula, limits: ProofLimits) -> (SemanticVerdict, SemanticVerdict, VerificationMethod) {
    if f.is_ground() && g.is_ground() && h.is_ground() {
        if let (Ok(l), Ok(r)) = (ground_entails(f, h), ground_entails(h, g)) {
            let v = |ok: bool| if ok { SemanticVerdict::OraclePass } else { SemanticVerdict::OracleFail };
            return (v(l), v(r), VerificationMethod::TruthTable);
        }
    }
    let (closed, _) = close_with_constants(&[f, g, h]);
    let (l, r) = check_semantic_fo(&closed[0], &closed[1], &closed[2], limits);
    (l, r, VerificationMethod::Refutation)
}

/// Refutation-based checks of `f |= h` and `h |= g` for sentences.
pub fn check_semantic_fo(f: &Formula, g: &Formula, h: &Formula, limits: ProofLimits) -> (SemanticVerdict, SemanticVerdict) {
    (entails_by_refutation(f, h, limits), entails_by_refutation(h, g, limits))
}

pub fn verify(f: &Formula, g: &Formula, h: &Formula, limits: ProofLimits) -> VerificationReport {
    let syntactic = check_syntactic(f, g, h);
    let (left, right, method) = check_semantic(f, g, h, limits);
    VerificationReport { syntactic, left, right, method }
}

fn literal_pairs(f: &Formula) -> BTreeSet<(Atom, Polarity)> {
    f.literal_polarities()
}

/// Checks, at every node `N` of a ground two-sided tableau, that
/// `for_f & path(F,N) |= ipol(N) |= ~for_g | ~path(G,N)` and that the literals of
/// `ipol(N)` occur with the same polarity on both sides of these entailments.
/// Returns the first violation.
pub fn check_node_invariants(t: &Tableau, opts: ExtractionOptions) -> Result<(), String> {
    let values = ipol_all(t, opts).map_err(|e| e.to_string())?;
    let ff = Formula::from_clauses(&t.for_f);
    let fg = Formula::from_clauses(&t.for_g);
    for id in t.preorder() {
        check_node(t, id, &values[&id], &ff, &fg)?;
    }
    Ok(())
}

fn check_node(t: &Tableau, id: NodeId, h: &Formula, ff: &Formula, fg: &Formula) -> Result<(), String> {
    let pf = t.path(Side::F, id).map_err(|e| e.to_string())?;
    let pg = t.path(Side::G, id).map_err(|e| e.to_string())?;
    let left = Formula::and(ff.clone(), Formula::conj(pf.iter().map(Formula::literal)));
    let right = Formula::or(Formula::not(fg.clone()), Formula::not(Formula::conj(pg.iter().map(Formula::literal))));
    let where_ = t.describe_branch(id);
    if !ground_entails(&left, h).map_err(|e| e.to_string())? {
        return Err(format!("at `{where_}`: F-side does not entail ipol = {h}"));
    }
    if !ground_entails(h, &right).map_err(|e| e.to_string())? {
        return Err(format!("at `{where_}`: ipol = {h} does not entail the G-side"));
    }
    let (ll, lr, lh) = (literal_pairs(&left), literal_pairs(&right), literal_pairs(h));
    if let Some((a, p)) = lh.iter().find(|x| !ll.contains(x) || !lr.contains(x)) {
        return Err(format!("at `{where_}`: literal {p}{a} of ipol = {h} is not shared"));
    }
    Ok(())
}
