use std::collections::BTreeSet;
use std::fmt;

use super::term::{Atom, Clause, Literal, Polarity, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn prop(name: &str) -> Self {
        Formula::Atom(Atom::prop(name))
    }

    pub fn literal(l: &Literal) -> Self {
        let a = Formula::Atom(l.atom.clone());
        if l.positive {
            a
        } else {
            Formula::Not(Box::new(a))
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Self {
        Formula::Quant(Quantifier::Forall, v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Self {
        Formula::Quant(Quantifier::Exists, v.into(), Box::new(body))
    }

    /// Right-associated conjunction; empty gives `$true`.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else { return Formula::True };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Right-associated disjunction; empty gives `$false`.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else { return Formula::False };
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    pub fn from_clause(c: &Clause) -> Self {
        Formula::disj(c.iter().map(Formula::literal))
    }

    pub fn from_clauses<'a>(cs: impl IntoIterator<Item = &'a Clause>) -> Self {
        Formula::conj(cs.into_iter().map(Formula::from_clause))
    }

    /// Conjunction with the truth-value rules `F & $false = $false`, `F & $true = F`
    /// applied at the top.
    pub fn and_s(a: Formula, b: Formula) -> Self {
        match (&a, &b) {
            (Formula::False, _) | (_, Formula::False) => Formula::False,
            (Formula::True, _) => b,
            (_, Formula::True) => a,
            _ => Formula::and(a, b),
        }
    }

    /// Disjunction with `F | $true = $true`, `F | $false = F` applied at the top.
    pub fn or_s(a: Formula, b: Formula) -> Self {
        match (&a, &b) {
            (Formula::True, _) | (_, Formula::True) => Formula::True,
            (Formula::False, _) => b,
            (_, Formula::False) => a,
            _ => Formula::or(a, b),
        }
    }

    /// Exhaustive truth-value simplification with the four rules for `&` and `|`.
    /// Nothing else is rewritten: negation, implication and quantifiers are kept.
    pub fn simplify_tv(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(a) => Formula::not(a.simplify_tv()),
            Formula::And(a, b) => Formula::and_s(a.simplify_tv(), b.simplify_tv()),
            Formula::Or(a, b) => Formula::or_s(a.simplify_tv(), b.simplify_tv()),
            Formula::Imp(a, b) => Formula::imp(a.simplify_tv(), b.simplify_tv()),
            Formula::Iff(a, b) => Formula::iff(a.simplify_tv(), b.simplify_tv()),
            Formula::Quant(q, v, b) => Formula::Quant(*q, v.clone(), Box::new(b.simplify_tv())),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Quant(..) => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut ok = true;
        self.for_each_atom(&mut |a| ok &= a.is_ground());
        ok && self.is_quantifier_free()
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Visits atom occurrences in textual order.
    pub fn for_each_atom<'a>(&'a self, visit: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => visit(a),
            Formula::Not(a) | Formula::Quant(_, _, a) => a.for_each_atom(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.for_each_atom(visit);
                b.for_each_atom(visit);
            }
        }
    }

    /// Rebuilds every atom with `f`, keeping the connective structure.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Not(a) => Formula::not(a.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Imp(a, b) => Formula::imp(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Quant(q, v, b) => Formula::Quant(*q, v.clone(), Box::new(b.map_atoms(f))),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                let mut vs = BTreeSet::new();
                a.args.iter().for_each(|t| t.collect_vars(&mut vs));
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, v, b) => {
                bound.push(v.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn functions(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| a.args.iter().for_each(|t| t.collect_functions(&mut out)));
        out
    }

    /// Predicate symbols without polarity.
    pub fn predicates(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            out.insert(a.predicate());
        });
        out
    }

    /// Predicate/polarity pairs; `=>` flips its antecedent and `<=>` contributes both.
    pub fn pred_polarities(&self) -> BTreeSet<(Symbol, Polarity)> {
        let mut out = BTreeSet::new();
        self.walk_polarity(Polarity::Positive, &mut |a, p| {
            out.insert((a.predicate(), p));
        });
        out
    }

    /// Literal/polarity pairs, i.e. the atoms occurring with the given polarity.
    pub fn literal_polarities(&self) -> BTreeSet<(Atom, Polarity)> {
        let mut out = BTreeSet::new();
        self.walk_polarity(Polarity::Positive, &mut |a, p| {
            out.insert((a.clone(), p));
        });
        out
    }

    fn walk_polarity(&self, pol: Polarity, visit: &mut impl FnMut(&Atom, Polarity)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => visit(a, pol),
            Formula::Not(a) => a.walk_polarity(pol.flip(), visit),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.walk_polarity(pol, visit);
                b.walk_polarity(pol, visit);
            }
            Formula::Imp(a, b) => {
                a.walk_polarity(pol.flip(), visit);
                b.walk_polarity(pol, visit);
            }
            Formula::Iff(a, b) => {
                for p in [pol, pol.flip()] {
                    a.walk_polarity(p, visit);
                    b.walk_polarity(p, visit);
                }
            }
            Formula::Quant(_, _, b) => b.walk_polarity(pol, visit),
        }
    }

    /// Replaces free occurrences of variables by terms. Bound variables that would
    /// capture a free variable of the replacement are not renamed; callers only
    /// substitute ground terms or fresh variables.
    pub fn substitute_free(&self, f: &impl Fn(&str) -> Option<Term>) -> Formula {
        self.subst_free_rec(&mut Vec::new(), f)
    }

    fn subst_free_rec(&self, bound: &mut Vec<String>, f: &impl Fn(&str) -> Option<Term>) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.map_args(|t| {
                t.replace_top_down(&mut |s| match s {
                    Term::Var(v) if !bound.contains(v) => f(v),
                    _ => None,
                })
            })),
            Formula::Not(a) => Formula::not(a.subst_free_rec(bound, f)),
            Formula::And(a, b) => Formula::and(a.subst_free_rec(bound, f), b.subst_free_rec(bound, f)),
            Formula::Or(a, b) => Formula::or(a.subst_free_rec(bound, f), b.subst_free_rec(bound, f)),
            Formula::Imp(a, b) => Formula::imp(a.subst_free_rec(bound, f), b.subst_free_rec(bound, f)),
            Formula::Iff(a, b) => Formula::iff(a.subst_free_rec(bound, f), b.subst_free_rec(bound, f)),
            Formula::Quant(q, v, b) => {
                bound.push(v.clone());
                let body = b.subst_free_rec(bound, f);
                bound.pop();
                Formula::Quant(*q, v.clone(), Box::new(body))
            }
        }
    }

    /// Number of connective, quantifier and atom nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::Quant(_, _, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn contains_equality(&self) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| found |= a.is_equality());
        found
    }
}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Self {
        Formula::Atom(a)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render::render(self))
    }
}
