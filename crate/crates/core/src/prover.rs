//! Connection-method prover producing closed clausal tableaux with rigid
//! variables.
//!
//! The search is depth-first with chronological backtracking over all choices,
//! wrapped in iterative deepening on tableau depth. An open leaf is closed either
//! by reduction (unifying with the complement of an ancestor, nearest first) or by
//! extension (attaching a fresh copy of an input clause one of whose literals
//! unifies with the complement of the leaf; that literal closes immediately).
//! Substitutions are global to the tableau, which is what makes variables rigid.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::syntax::{Atom, Clause, Literal, Substitution, Term};
use crate::tableau::Tableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofLimits {
    /// Maximum number of edges on a root-to-leaf path.
    pub max_depth: usize,
    pub timeout_ms: u64,
    pub max_inferences: u64,
}

impl Default for ProofLimits {
    fn default() -> Self {
        ProofLimits { max_depth: 12, timeout_ms: 10_000, max_inferences: 50_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartClauses {
    /// Clauses of the second input first, then those of the first.
    #[default]
    FromG,
    FromF,
    /// Clauses whose literals are all negative.
    Negative,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProverPolicy {
    pub start: StartClauses,
    /// Reject extensions that repeat a literal already on the branch.
    pub regularity: bool,
}

impl Default for ProverPolicy {
    fn default() -> Self {
        ProverPolicy { start: StartClauses::FromG, regularity: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exhausted {
    /// Every tableau up to the depth bound was tried.
    DepthLimit(usize),
    Timeout(u64),
    Inferences(u64),
    /// The search space was exhausted without reaching the depth bound, so no
    /// closed tableau exists.
    Saturated,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct NotProved {
    pub reason: Exhausted,
    pub inferences: u64,
}

impl fmt::Display for NotProved {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason {
            Exhausted::DepthLimit(d) => write!(f, "not proved: depth limit {d} reached"),
            Exhausted::Timeout(ms) => write!(f, "not proved: timeout after {ms} ms"),
            Exhausted::Inferences(n) => write!(f, "not proved: inference limit {n} reached"),
            Exhausted::Saturated => f.write_str("not proved: no closed tableau exists (search space exhausted)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Proof {
    /// Leaf-closed, with targets, sides unassigned.
    pub tableau: Tableau,
    /// Depth bound at which the proof was found.
    pub depth: usize,
    pub inferences: u64,
}

/// Most general unifier of two terms, fully applied (idempotent).
pub fn unify(s: &Term, t: &Term) -> Option<Substitution> {
    let mut b = Bindings::default();
    if !b.unify(s, t) {
        return None;
    }
    let vars: Vec<String> = b.map.keys().cloned().collect();
    Some(Substitution::from_pairs(vars.into_iter().map(|v| {
        let r = b.resolve(&Term::Var(v.clone()));
        (v, r)
    })))
}

#[derive(Default)]
struct Bindings {
    map: HashMap<String, Term>,
    trail: Vec<String>,
}

impl Bindings {
    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.map.get(v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: &str, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn bind(&mut self, v: &str, t: Term) {
        self.map.insert(v.to_string(), t);
        self.trail.push(v.to_string());
    }

    fn unify(&mut self, s: &Term, t: &Term) -> bool {
        let s = self.walk(s).clone();
        let t = self.walk(t).clone();
        match (&s, &t) {
            (Term::Var(a), Term::Var(b)) if a == b => true,
            (Term::Var(a), _) => {
                if self.occurs(a, &t) {
                    return false;
                }
                self.bind(a, t);
                true
            }
            (_, Term::Var(b)) => {
                if self.occurs(b, &s) {
                    return false;
                }
                self.bind(b, s);
                true
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    fn unify_atoms(&mut self, a: &Atom, b: &Atom) -> bool {
        a.pred == b.pred && a.args.len() == b.args.len() && a.args.iter().zip(&b.args).all(|(x, y)| self.unify(x, y))
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("nonempty");
            self.map.remove(&v);
        }
    }

    fn resolve(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Var(v) => Term::Var(v.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.resolve(a)).collect()),
        }
    }

    fn resolve_literal(&self, l: &Literal) -> Literal {
        l.map_args(|t| self.resolve(t))
    }

    /// Equality of two literals under the current bindings.
    fn same_literal(&self, a: &Literal, b: &Literal) -> bool {
        a.positive == b.positive
            && a.atom.pred == b.atom.pred
            && a.atom.args.len() == b.atom.args.len()
            && a.atom.args.iter().zip(&b.atom.args).all(|(x, y)| self.same_term(x, y))
    }

    fn same_term(&self, a: &Term, b: &Term) -> bool {
        match (self.walk(a), self.walk(b)) {
            (Term::Var(x), Term::Var(y)) => x == y,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.same_term(x, y))
            }
            _ => false,
        }
    }
}

struct SNode {
    lit: Option<Literal>,
    parent: usize,
    children: Vec<usize>,
    target: Option<usize>,
    depth: usize,
}

enum Abort {
    Timeout,
    Inferences,
}

struct Search<'a> {
    clauses: &'a [Clause],
    /// Extension candidates, shorter clauses first.
    order: Vec<usize>,
    b: Bindings,
    nodes: Vec<SNode>,
    next_var: usize,
    limit: usize,
    regularity: bool,
    inferences: u64,
    max_inferences: u64,
    deadline: Instant,
    hit_limit: bool,
    abort: Option<Abort>,
}

impl Search<'_> {
    fn copy_clause(&mut self, c: &Clause) -> Vec<Literal> {
        let mut ren: HashMap<String, Term> = HashMap::new();
        let mut next = self.next_var;
        let out = c
            .iter()
            .map(|l| {
                l.map_args(|t| {
                    t.replace_top_down(&mut |s| match s {
                        Term::Var(v) => Some(
                            ren.entry(v.clone())
                                .or_insert_with(|| {
                                    next += 1;
                                    Term::Var(format!("_{next}"))
                                })
                                .clone(),
                        ),
                        _ => None,
                    })
                })
            })
            .collect();
        self.next_var = next;
        out
    }

    fn tick(&mut self) -> bool {
        self.inferences += 1;
        if self.inferences >= self.max_inferences {
            self.abort = Some(Abort::Inferences);
        } else if self.inferences.is_multiple_of(1024) && Instant::now() >= self.deadline {
            self.abort = Some(Abort::Timeout);
        }
        self.abort.is_none()
    }

    fn add_children(&mut self, parent: usize, lits: Vec<Literal>) -> Vec<usize> {
        let depth = self.nodes[parent].depth + 1;
        let mut ids = Vec::with_capacity(lits.len());
        for l in lits {
            let id = self.nodes.len();
            self.nodes.push(SNode { lit: Some(l), parent, children: Vec::new(), target: None, depth });
            ids.push(id);
        }
        self.nodes[parent].children = ids.clone();
        ids
    }

    fn remove_children(&mut self, parent: usize, keep: usize) {
        self.nodes.truncate(keep);
        self.nodes[parent].children.clear();
    }

    fn branch_repeats(&self, from: usize, lit: &Literal) -> bool {
        let mut n = from;
        while n != 0 {
            if let Some(l) = &self.nodes[n].lit {
                if self.b.same_literal(l, lit) {
                    return true;
                }
            }
            n = self.nodes[n].parent;
        }
        false
    }

    fn solve(&mut self, goals: &mut Vec<usize>) -> bool {
        let Some(g) = goals.pop() else { return true };
        if self.abort.is_some() {
            goals.push(g);
            return false;
        }
        let lit = self.nodes[g].lit.clone().expect("goal label");

        let mut anc = self.nodes[g].parent;
        while anc != 0 {
            let al = self.nodes[anc].lit.as_ref().expect("label");
            if al.positive != lit.positive && al.atom.pred == lit.atom.pred {
                let mark = self.b.trail.len();
                let al = al.atom.clone();
                if self.b.unify_atoms(&lit.atom, &al) {
                    if !self.tick() {
                        self.b.undo(mark);
                        goals.push(g);
                        return false;
                    }
                    self.nodes[g].target = Some(anc);
                    if self.solve(goals) {
                        return true;
                    }
                    self.nodes[g].target = None;
                }
                self.b.undo(mark);
                if self.abort.is_some() {
                    goals.push(g);
                    return false;
                }
            }
            anc = self.nodes[anc].parent;
        }

        if self.nodes[g].depth + 1 > self.limit {
            self.hit_limit = true;
        } else {
            for oi in 0..self.order.len() {
                let clause = &self.clauses[self.order[oi]];
                for li in 0..clause.len() {
                    let cl = &clause.literals()[li];
                    if cl.positive == lit.positive || cl.atom.pred != lit.atom.pred {
                        continue;
                    }
                    let copy = self.copy_clause(clause);
                    let mark = self.b.trail.len();
                    if !self.b.unify_atoms(&lit.atom, &copy[li].atom) {
                        self.b.undo(mark);
                        continue;
                    }
                    if !self.tick() {
                        self.b.undo(mark);
                        goals.push(g);
                        return false;
                    }
                    if self.regularity
                        && copy.iter().enumerate().any(|(i, l)| i != li && self.branch_repeats(g, l))
                    {
                        self.b.undo(mark);
                        continue;
                    }
                    let keep = self.nodes.len();
                    let ids = self.add_children(g, copy);
                    self.nodes[ids[li]].target = Some(g);
                    let before = goals.len();
                    goals.extend(ids.iter().enumerate().rev().filter(|(i, _)| *i != li).map(|(_, &id)| id));
                    if self.solve(goals) {
                        return true;
                    }
                    goals.truncate(before);
                    self.remove_children(g, keep);
                    self.b.undo(mark);
                    if self.abort.is_some() {
                        goals.push(g);
                        return false;
                    }
                }
            }
        }
        goals.push(g);
        false
    }

    fn try_start(&mut self, start: &Clause) -> bool {
        self.nodes.truncate(1);
        self.nodes[0].children.clear();
        self.b.undo(0);
        if !self.tick() {
            return false;
        }
        let copy = self.copy_clause(start);
        let ids = self.add_children(0, copy);
        let mut goals: Vec<usize> = ids.into_iter().rev().collect();
        self.solve(&mut goals)
    }

    fn to_tableau(&self, f: &[Clause], g: &[Clause]) -> Tableau {
        let mut t = Tableau::new(f.to_vec(), g.to_vec());
        let mut map = vec![0usize; self.nodes.len()];
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            for &c in &self.nodes[n].children {
                let l = self.b.resolve_literal(self.nodes[c].lit.as_ref().expect("label"));
                map[c] = t.add_child(map[n], l, None);
            }
            stack.extend(self.nodes[n].children.iter().rev());
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(tg) = n.target {
                t.nodes[map[i]].target = Some(map[tg]);
            }
        }
        t
    }
}

fn start_order(f: &[Clause], g: &[Clause], policy: StartClauses) -> Vec<Clause> {
    let chain = |a: &[Clause], b: &[Clause]| a.iter().chain(b).cloned().collect::<Vec<_>>();
    match policy {
        StartClauses::FromG => chain(g, f),
        StartClauses::FromF => chain(f, g),
        StartClauses::All => chain(f, g),
        StartClauses::Negative => {
            let all = chain(f, g);
            let neg: Vec<Clause> = all.iter().filter(|c| c.iter().all(|l| !l.positive)).cloned().collect();
            if neg.is_empty() {
                all
            } else {
                neg
            }
        }
    }
}

const PROVER_STACK: usize = 512 * 1024 * 1024;

/// Searches for a closed clausal tableau for the conjunction of `f` and `g`.
pub fn prove(f: &[Clause], g: &[Clause], limits: ProofLimits, policy: ProverPolicy) -> Result<Proof, NotProved> {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(PROVER_STACK)
            .spawn_scoped(s, || prove_inline(f, g, limits, policy))
            .expect("spawn prover thread")
            .join()
            .expect("prover thread panicked")
    })
}

/// Like [`prove`] for a single clause set.
pub fn prove_clauses(cf: &[Clause], limits: ProofLimits, policy: ProverPolicy) -> Result<Proof, NotProved> {
    prove(cf, &[], limits, policy)
}

fn prove_inline(f: &[Clause], g: &[Clause], limits: ProofLimits, policy: ProverPolicy) -> Result<Proof, NotProved> {
    if f.iter().chain(g).any(Clause::is_empty) {
        return Ok(Proof { tableau: Tableau::new(f.to_vec(), g.to_vec()), depth: 0, inferences: 0 });
    }
    let clauses: Vec<Clause> = f.iter().chain(g).cloned().collect();
    let starts = start_order(f, g, policy.start);
    let mut order: Vec<usize> = (0..clauses.len()).collect();
    order.sort_by_key(|&i| clauses[i].len());
    let mut search = Search {
        clauses: &clauses,
        order,
        b: Bindings::default(),
        nodes: vec![SNode { lit: None, parent: 0, children: Vec::new(), target: None, depth: 0 }],
        next_var: 0,
        limit: 0,
        regularity: policy.regularity,
        inferences: 0,
        max_inferences: limits.max_inferences.max(1),
        deadline: Instant::now() + Duration::from_millis(limits.timeout_ms),
        hit_limit: false,
        abort: None,
    };
    for d in 1..=limits.max_depth.max(1) {
        search.limit = d;
        search.hit_limit = false;
        for start in &starts {
            if search.try_start(start) {
                return Ok(Proof { tableau: search.to_tableau(f, g), depth: d, inferences: search.inferences });
            }
            match search.abort {
                Some(Abort::Timeout) => {
                    return Err(NotProved { reason: Exhausted::Timeout(limits.timeout_ms), inferences: search.inferences })
                }
                Some(Abort::Inferences) => {
                    return Err(NotProved {
                        reason: Exhausted::Inferences(limits.max_inferences),
                        inferences: search.inferences,
                    })
                }
                None => {}
            }
        }
        if !search.hit_limit {
            return Err(NotProved { reason: Exhausted::Saturated, inferences: search.inferences });
        }
    }
    Err(NotProved { reason: Exhausted::DepthLimit(limits.max_depth), inferences: search.inferences })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_clause, parse_term};

    fn cl(ss: &[&str]) -> Vec<Clause> {
        ss.iter().map(|s| parse_clause(s).unwrap()).collect()
    }

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn unification() {
        assert_eq!(unify(&t("X"), &t("f(a)")).unwrap().to_string(), "{X -> f(a)}");
        assert!(unify(&t("X"), &t("f(X)")).is_none());
        let s = unify(&t("f(X, b)"), &t("f(a, Y)")).unwrap();
        assert_eq!(s.to_string(), "{X -> a, Y -> b}");
        let s = unify(&t("f(X, Y)"), &t("f(Y, g(Z))")).unwrap();
        assert_eq!(s.apply_term(&t("f(X, Y)")), s.apply_term(&t("f(Y, g(Z))")));
        assert_eq!(s.compose(&s), s, "idempotent");
    }

    #[test]
    fn trivial_contradiction() {
        let p = prove(&cl(&["p"]), &cl(&["~p"]), ProofLimits::default(), ProverPolicy::default()).unwrap();
        assert_eq!(p.tableau.len(), 3);
        assert!(p.tableau.validate().is_ok(), "{:?}", p.tableau.validate());
    }

    #[test]
    fn small_ground_clauses() {
        let f = cl(&["a | e", "~a | b", "~a | c"]);
        let g = cl(&["~b | ~c | d", "~d", "~e"]);
        let p = prove(&f, &g, ProofLimits::default(), ProverPolicy::default()).unwrap();
        assert!(p.tableau.validate().is_ok(), "{:?}", p.tableau.validate());
        assert_eq!(p.tableau.leaf_close().unwrap(), p.tableau);
    }

    #[test]
    fn first_order_unifier() {
        let p = prove(&cl(&["p(X, f(X))"]), &cl(&["~p(g, Y)"]), ProofLimits::default(), ProverPolicy::default())
            .unwrap();
        let labels: Vec<String> = p.tableau.preorder().iter().skip(1).map(|&n| p.tableau.label(n).unwrap().to_string()).collect();
        assert_eq!(labels, vec!["~p(g, f(g))", "p(g, f(g))"]);
    }

    #[test]
    fn satisfiable_is_saturated() {
        let e = prove(&cl(&["p | q"]), &cl(&["~p"]), ProofLimits::default(), ProverPolicy::default()).unwrap_err();
        assert_eq!(e.reason, Exhausted::Saturated);
        let e = prove(&cl(&["p(X) | ~p(f(X))"]), &cl(&["~p(a)"]), ProofLimits { max_depth: 4, ..Default::default() }, ProverPolicy::default())
            .unwrap_err();
        assert_eq!(e.reason, Exhausted::DepthLimit(4));
    }

    #[test]
    fn deterministic() {
        let f = cl(&["p(X) | q(X)", "~q(a) | r"]);
        let g = cl(&["~p(a)", "~r"]);
        let a = prove(&f, &g, ProofLimits::default(), ProverPolicy::default()).unwrap();
        let b = prove(&f, &g, ProofLimits::default(), ProverPolicy::default()).unwrap();
        assert_eq!(a.tableau, b.tableau);
    }

    #[test]
    fn empty_clause_gives_root_tableau() {
        let p = prove(&cl(&["$false"]), &cl(&["p"]), ProofLimits::default(), ProverPolicy::default()).unwrap();
        assert_eq!(p.tableau.len(), 1);
        assert!(p.tableau.validate().is_ok());
    }
}
