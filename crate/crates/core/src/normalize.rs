//! Negation normal form, prenexing, Skolemization, clausification, and the
//! preparation of an interpolation problem `(F, G)` into clause sets for `F` and
//! `~G`.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{
    Atom, Clause, Formula, Literal, Quantifier, Symbol, SymbolKind, SyntaxError, Term, EQUALITY,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("{which} is not a sentence: free variable(s) {vars}")]
    NotClosed { which: &'static str, vars: String },
    #[error("symbol `{0}` collides with the reserved Skolem namespace")]
    ReservedSymbol(String),
    #[error("`=` occurs in the input but equality mode is disabled")]
    EqualityDisabled,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Negation normal form: only atoms are negated, `=>` and `<=>` are expanded, and
/// truth constants are simplified away where possible.
pub fn nnf(f: &Formula) -> Formula {
    nnf_pol(f, true)
}

fn nnf_pol(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::True => {
            if positive {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::False => {
            if positive {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(a) => nnf_pol(a, !positive),
        Formula::And(a, b) => {
            if positive {
                Formula::and_s(nnf_pol(a, true), nnf_pol(b, true))
            } else {
                Formula::or_s(nnf_pol(a, false), nnf_pol(b, false))
            }
        }
        Formula::Or(a, b) => {
            if positive {
                Formula::or_s(nnf_pol(a, true), nnf_pol(b, true))
            } else {
                Formula::and_s(nnf_pol(a, false), nnf_pol(b, false))
            }
        }
        Formula::Imp(a, b) => {
            if positive {
                Formula::or_s(nnf_pol(a, false), nnf_pol(b, true))
            } else {
                Formula::and_s(nnf_pol(a, true), nnf_pol(b, false))
            }
        }
        Formula::Iff(a, b) => {
            // (a & b) | (~a & ~b), negated: (a & ~b) | (~a & b)
            let (pa, na) = (nnf_pol(a, true), nnf_pol(a, false));
            let (pb, nb) = (nnf_pol(b, true), nnf_pol(b, false));
            if positive {
                Formula::or_s(Formula::and_s(pa, pb), Formula::and_s(na, nb))
            } else {
                Formula::or_s(Formula::and_s(pa, nb), Formula::and_s(na, pb))
            }
        }
        Formula::Quant(q, v, body) => {
            let q = if positive { *q } else { q.dual() };
            match nnf_pol(body, positive) {
                b @ (Formula::True | Formula::False) => b,
                b => Formula::Quant(q, v.clone(), Box::new(b)),
            }
        }
    }
}

/// Renames bound variables so that no two quantifiers bind the same name and no
/// bound name equals a free variable. A name is kept on first use.
pub fn rename_apart(f: &Formula) -> Formula {
    let mut used: BTreeSet<String> = f.free_vars();
    rename_rec(f, &mut BTreeMap::new(), &mut used)
}

fn rename_rec(f: &Formula, scope: &mut BTreeMap<String, String>, used: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(a.map_args(|t| {
            t.replace_top_down(&mut |s| match s {
                Term::Var(v) => scope.get(v).map(|n| Term::Var(n.clone())),
                _ => None,
            })
        })),
        Formula::Not(a) => Formula::not(rename_rec(a, scope, used)),
        Formula::And(a, b) => Formula::and(rename_rec(a, scope, used), rename_rec(b, scope, used)),
        Formula::Or(a, b) => Formula::or(rename_rec(a, scope, used), rename_rec(b, scope, used)),
        Formula::Imp(a, b) => Formula::imp(rename_rec(a, scope, used), rename_rec(b, scope, used)),
        Formula::Iff(a, b) => Formula::iff(rename_rec(a, scope, used), rename_rec(b, scope, used)),
        Formula::Quant(q, v, body) => {
            let fresh = fresh_var(v, used);
            used.insert(fresh.clone());
            let prev = scope.insert(v.clone(), fresh.clone());
            let body = rename_rec(body, scope, used);
            match prev {
                Some(p) => scope.insert(v.clone(), p),
                None => scope.remove(v),
            };
            Formula::Quant(*q, fresh, Box::new(body))
        }
    }
}

fn fresh_var(base: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    (2..).map(|i| format!("{base}_{i}")).find(|n| !used.contains(n)).expect("unbounded")
}

/// Prenex form of an NNF formula whose bound variables are pairwise distinct and
/// distinct from its free variables. Quantifiers keep their left-to-right order.
pub fn prenex(f: &Formula) -> (Vec<(Quantifier, String)>, Formula) {
    let mut prefix = Vec::new();
    let matrix = pull(f, &mut prefix);
    (prefix, matrix)
}

fn pull(f: &Formula, prefix: &mut Vec<(Quantifier, String)>) -> Formula {
    match f {
        Formula::Quant(q, v, body) => {
            prefix.push((*q, v.clone()));
            pull(body, prefix)
        }
        Formula::And(a, b) => Formula::and(pull(a, prefix), pull(b, prefix)),
        Formula::Or(a, b) => Formula::or(pull(a, prefix), pull(b, prefix)),
        _ => f.clone(),
    }
}

/// Result of Skolemizing a sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skolemized {
    pub matrix: Formula,
    /// Universally quantified variables of the matrix, in prefix order.
    pub universals: Vec<String>,
    pub skolems: BTreeSet<Symbol>,
}

/// Generates fresh Skolem symbols `<prefix>1, <prefix>2, …`.
#[derive(Clone, Debug)]
pub struct SkolemNames {
    prefix: &'static str,
    next: usize,
}

impl SkolemNames {
    pub fn new(prefix: &'static str) -> Self {
        SkolemNames { prefix, next: 1 }
    }

    fn fresh(&mut self) -> String {
        let n = format!("{}{}", self.prefix, self.next);
        self.next += 1;
        n
    }
}

/// Skolemizes a sentence: nnf and renaming apart, then each existential variable
/// is replaced by a fresh function of the universal variables whose quantifiers
/// enclose it, in their textual order. This is Skolemization of the prenex form
/// that places every existential as far left as its scope allows.
pub fn skolemize(f: &Formula, names: &mut SkolemNames) -> Skolemized {
    let mut out = Skolemized { matrix: Formula::True, universals: Vec::new(), skolems: BTreeSet::new() };
    let nf = rename_apart(&nnf(f));
    out.matrix = skolem_rec(&nf, &mut Vec::new(), &mut BTreeMap::new(), names, &mut out);
    out
}

fn skolem_rec(
    f: &Formula,
    enclosing: &mut Vec<String>,
    binding: &mut BTreeMap<String, Term>,
    names: &mut SkolemNames,
    out: &mut Skolemized,
) -> Formula {
    match f {
        Formula::Quant(Quantifier::Forall, v, body) => {
            out.universals.push(v.clone());
            enclosing.push(v.clone());
            let b = skolem_rec(body, enclosing, binding, names, out);
            enclosing.pop();
            b
        }
        Formula::Quant(Quantifier::Exists, v, body) => {
            let name = names.fresh();
            let args: Vec<Term> = enclosing.iter().map(|u| Term::Var(u.clone())).collect();
            out.skolems.insert(Symbol::function(name.clone(), args.len()));
            binding.insert(v.clone(), Term::App(name, args));
            skolem_rec(body, enclosing, binding, names, out)
        }
        Formula::And(a, b) => {
            let a = skolem_rec(a, enclosing, binding, names, out);
            Formula::and(a, skolem_rec(b, enclosing, binding, names, out))
        }
        Formula::Or(a, b) => {
            let a = skolem_rec(a, enclosing, binding, names, out);
            Formula::or(a, skolem_rec(b, enclosing, binding, names, out))
        }
        _ => f.substitute_free(&|v| binding.get(v).cloned()),
    }
}

/// Conjunctive normal form of a quantifier-free NNF formula by distribution.
/// Duplicate literals, tautologies, and repeated clauses are removed; literal and
/// clause order follow the formula's text order.
pub fn clausify(matrix: &Formula) -> Vec<Clause> {
    let mut out: Vec<Clause> = Vec::new();
    for c in cnf(&nnf(matrix)) {
        let c = dedup_literals(c);
        if c.is_tautology() || out.contains(&c) {
            continue;
        }
        out.push(c);
    }
    out
}

fn dedup_literals(c: Vec<Literal>) -> Clause {
    let mut lits: Vec<Literal> = Vec::with_capacity(c.len());
    for l in c {
        if !lits.contains(&l) {
            lits.push(l);
        }
    }
    Clause(lits)
}

fn cnf(f: &Formula) -> Vec<Vec<Literal>> {
    match f {
        Formula::True => Vec::new(),
        Formula::False => vec![Vec::new()],
        Formula::Atom(a) => vec![vec![Literal::pos(a.clone())]],
        Formula::Not(a) => match a.as_ref() {
            Formula::Atom(a) => vec![vec![Literal::neg(a.clone())]],
            _ => unreachable!("cnf expects negation normal form"),
        },
        Formula::And(a, b) => {
            let mut l = cnf(a);
            l.extend(cnf(b));
            l
        }
        Formula::Or(a, b) => {
            let (l, r) = (cnf(a), cnf(b));
            let mut out = Vec::with_capacity(l.len() * r.len());
            for x in &l {
                for y in &r {
                    let mut c = x.clone();
                    c.extend(y.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
        _ => unreachable!("cnf expects a quantifier-free formula in negation normal form"),
    }
}

/// Clause sets for `F` and `~G`, with Skolem symbols drawn from disjoint namespaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreparedInputs {
    pub f_clauses: Vec<Clause>,
    pub g_clauses: Vec<Clause>,
    pub f_skolems: BTreeSet<Symbol>,
    pub g_skolems: BTreeSet<Symbol>,
    pub f_original: Formula,
    pub g_original: Formula,
}

pub const F_SKOLEM_PREFIX: &str = "sk";
pub const G_SKOLEM_PREFIX: &str = "skg";

fn is_reserved(name: &str) -> bool {
    [G_SKOLEM_PREFIX, F_SKOLEM_PREFIX].iter().any(|p| {
        name.strip_prefix(p).is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    })
}

/// Rejects symbols that would clash with generated Skolem names.
pub fn check_reserved(f: &Formula) -> Result<(), NormalizeError> {
    for s in f.functions().into_iter().chain(f.predicates()) {
        if is_reserved(&s.name) {
            return Err(NormalizeError::ReservedSymbol(s.name));
        }
    }
    Ok(())
}

fn require_sentence(f: &Formula, which: &'static str) -> Result<(), NormalizeError> {
    let fv = f.free_vars();
    if fv.is_empty() {
        Ok(())
    } else {
        Err(NormalizeError::NotClosed { which, vars: fv.into_iter().collect::<Vec<_>>().join(", ") })
    }
}

/// Skolemizes and clausifies `f` and `~g` independently.
pub fn prepare_inputs(f: &Formula, g: &Formula) -> Result<PreparedInputs, NormalizeError> {
    require_sentence(f, "F")?;
    require_sentence(g, "G")?;
    crate::syntax::check_signature([f, g])?;
    check_reserved(f)?;
    check_reserved(g)?;
    let sf = skolemize(f, &mut SkolemNames::new(F_SKOLEM_PREFIX));
    let sg = skolemize(&Formula::not(g.clone()), &mut SkolemNames::new(G_SKOLEM_PREFIX));
    let prepared = PreparedInputs {
        f_clauses: clausify(&sf.matrix),
        g_clauses: clausify(&sg.matrix),
        f_skolems: sf.skolems,
        g_skolems: sg.skolems,
        f_original: f.clone(),
        g_original: g.clone(),
    };
    debug_assert!(prepared.f_skolems.is_disjoint(&prepared.g_skolems));
    Ok(prepared)
}

/// Where to put the axioms that concern symbols shared by both inputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityPlacement {
    F,
    G,
    Both,
    /// With `G` when `=` occurs in `g` only, otherwise with `F`.
    #[default]
    Auto,
}

/// Equality axioms for `(f, g)`: reflexivity, symmetry, transitivity, and
/// substitutivity for every function and predicate. Axioms about symbols of only
/// one input go to that input's side; the rest follow `placement`.
pub fn equality_axioms(
    f: &Formula,
    g: &Formula,
    placement: EqualityPlacement,
) -> (Formula, Formula) {
    let (fe, ge) = (f.contains_equality(), g.contains_equality());
    if !fe && !ge {
        return (Formula::True, Formula::True);
    }
    let shared_to_f = match placement {
        EqualityPlacement::F | EqualityPlacement::Both => true,
        EqualityPlacement::G => false,
        EqualityPlacement::Auto => fe,
    };
    let shared_to_g = match placement {
        EqualityPlacement::G | EqualityPlacement::Both => true,
        EqualityPlacement::F => false,
        EqualityPlacement::Auto => !fe,
    };
    let syms = |h: &Formula| -> BTreeSet<Symbol> {
        h.functions()
            .into_iter()
            .chain(h.predicates())
            .filter(|s| s.name != EQUALITY && s.arity > 0)
            .collect()
    };
    let (sf, sg) = (syms(f), syms(g));
    let mut ef = Vec::new();
    let mut eg = Vec::new();
    let basic = equivalence_axioms();
    if shared_to_f {
        ef.extend(basic.iter().cloned());
    }
    if shared_to_g {
        eg.extend(basic.iter().cloned());
    }
    for s in sf.union(&sg) {
        let ax = substitutivity(s);
        match (sf.contains(s), sg.contains(s)) {
            (true, false) => ef.extend(ax),
            (false, true) => eg.extend(ax),
            _ => {
                if shared_to_f {
                    ef.extend(ax.iter().cloned());
                }
                if shared_to_g {
                    eg.extend(ax);
                }
            }
        }
    }
    (Formula::conj(ef), Formula::conj(eg))
}

fn eq(a: &str, b: &str) -> Formula {
    Formula::Atom(Atom::equality(Term::var(a), Term::var(b)))
}

fn forall_all(vars: &[String], body: Formula) -> Formula {
    vars.iter().rev().fold(body, |acc, v| Formula::forall(v.clone(), acc))
}

fn equivalence_axioms() -> Vec<Formula> {
    let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        forall_all(&v(&["X"]), eq("X", "X")),
        forall_all(&v(&["X", "Y"]), Formula::imp(eq("X", "Y"), eq("Y", "X"))),
        forall_all(
            &v(&["X", "Y", "Z"]),
            Formula::imp(Formula::and(eq("X", "Y"), eq("Y", "Z")), eq("X", "Z")),
        ),
    ]
}

/// One axiom per argument position: `![X,Y,…]: (p(…X…) & X = Y => p(…Y…))`, or
/// `f(…X…) = f(…Y…)` for functions.
fn substitutivity(s: &Symbol) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 0..s.arity {
        let (x, y) = ("X".to_string(), "Y".to_string());
        let others: Vec<String> = (1..=s.arity).filter(|j| *j != i + 1).map(|j| format!("Z{j}")).collect();
        let args = |v: &str| -> Vec<Term> {
            let mut k = 0;
            (0..s.arity)
                .map(|j| {
                    if j == i {
                        Term::var(v)
                    } else {
                        k += 1;
                        Term::Var(others[k - 1].clone())
                    }
                })
                .collect()
        };
        let mut vars = vec![x.clone(), y.clone()];
        vars.extend(others.iter().cloned());
        let body = match s.kind {
            SymbolKind::Predicate => Formula::imp(
                Formula::and(Formula::Atom(Atom::new(s.name.clone(), args(&x))), eq(&x, &y)),
                Formula::Atom(Atom::new(s.name.clone(), args(&y))),
            ),
            SymbolKind::Function => Formula::imp(
                eq(&x, &y),
                Formula::Atom(Atom::equality(Term::app(s.name.clone(), args(&x)), Term::app(s.name.clone(), args(&y)))),
            ),
        };
        out.push(forall_all(&vars, body));
    }
    out
}
