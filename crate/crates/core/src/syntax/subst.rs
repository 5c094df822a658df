use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::formula::Formula;
use super::term::{Atom, Clause, Literal, Term};

/// Finite map from variable names to terms. Identity bindings are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("substitution is not injective: `{0}` and `{1}` map to the same term")]
pub struct NotInjective(pub String, pub String);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Term)>) -> Self {
        let mut s = Self::new();
        for (v, t) in pairs {
            s.bind(v, t);
        }
        s
    }

    pub fn bind(&mut self, var: impl Into<String>, t: Term) {
        let var = var.into();
        if t == Term::Var(var.clone()) {
            self.map.remove(&var);
        } else {
            self.map.insert(var, t);
        }
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> BTreeSet<String> {
        self.map.keys().cloned().collect()
    }

    pub fn range(&self) -> Vec<&Term> {
        self.map.values().collect()
    }

    pub fn is_ground(&self) -> bool {
        self.map.values().all(Term::is_ground)
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity_witness().is_none()
    }

    fn injectivity_witness(&self) -> Option<NotInjective> {
        let mut seen: BTreeMap<&Term, &String> = BTreeMap::new();
        for (v, t) in &self.map {
            if let Some(w) = seen.insert(t, v) {
                return Some(NotInjective(w.clone(), v.clone()));
            }
        }
        None
    }

    /// Restriction to the given variables.
    pub fn restrict(&self, vars: &BTreeSet<String>) -> Substitution {
        Substitution {
            map: self.map.iter().filter(|(v, _)| vars.contains(*v)).map(|(v, t)| (v.clone(), t.clone())).collect(),
        }
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply_term(a)).collect()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        a.map_args(|t| self.apply_term(t))
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        l.map_args(|t| self.apply_term(t))
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause(c.iter().map(|l| self.apply_literal(l)).collect())
    }

    /// Application to a formula; quantified variables shadow the substitution.
    pub fn apply_formula(&self, f: &Formula) -> Formula {
        f.substitute_free(&|v| self.map.get(v).cloned())
    }

    /// The substitution that first applies `self` and then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.bind(v.clone(), other.apply_term(t));
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }

    /// Range terms in replacement order: larger terms first, ties by rendered form.
    fn inverse_order(&self) -> Vec<(&Term, &String)> {
        let mut pairs: Vec<(&Term, &String)> = self.map.iter().map(|(v, t)| (t, v)).collect();
        pairs.sort_by_cached_key(|(t, _)| (std::cmp::Reverse(t.size()), t.to_string()));
        pairs
    }

    /// Replaces every occurrence of a range term that is not inside another range
    /// term by its preimage variable.
    pub fn inverse_apply_term(&self, t: &Term) -> Result<Term, NotInjective> {
        if let Some(e) = self.injectivity_witness() {
            return Err(e);
        }
        Ok(self.inverse_term_unchecked(&self.inverse_order(), t))
    }

    fn inverse_term_unchecked(&self, order: &[(&Term, &String)], t: &Term) -> Term {
        // Replacing larger range terms first and never descending into a replaced
        // occurrence gives the outermost-occurrence semantics; a sequential pass per
        // range term is equivalent because replaced subtrees become variables.
        let mut cur = t.clone();
        for (rt, v) in order {
            cur = cur.replace_top_down(&mut |s| if s == *rt { Some(Term::Var((*v).clone())) } else { None });
        }
        cur
    }

    pub fn inverse_apply_formula(&self, f: &Formula) -> Result<Formula, NotInjective> {
        if let Some(e) = self.injectivity_witness() {
            return Err(e);
        }
        let order = self.inverse_order();
        Ok(f.map_atoms(&mut |a| a.map_args(|t| self.inverse_term_unchecked(&order, t))))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse::{parse_formula, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn s(pairs: &[(&str, &str)]) -> Substitution {
        Substitution::from_pairs(pairs.iter().map(|(v, x)| (v.to_string(), t(x))))
    }

    #[test]
    fn apply_basics() {
        let f = parse_formula("p(X, Y)").unwrap();
        assert_eq!(s(&[("X", "a")]).apply_formula(&f).to_string(), "p(a, Y)");
        assert_eq!(Substitution::new().apply_term(&t("f(X)")), t("f(X)"));
    }

    #[test]
    fn identity_bindings_dropped() {
        assert!(s(&[("X", "X")]).is_empty());
    }

    #[test]
    fn composition() {
        let c = s(&[("X", "Y")]).compose(&s(&[("Y", "a")]));
        assert_eq!(c, s(&[("X", "a"), ("Y", "a")]));
        let sigma = s(&[("X", "f(Y)")]);
        assert_eq!(Substitution::new().compose(&sigma), sigma);
    }

    #[test]
    fn example_instance_application() {
        let theta = s(&[("U1", "g1"), ("U2", "f(g1)")]);
        let f = parse_formula("p(U1, f(U1)) & q(f(g2(U2)), U1)").unwrap();
        assert_eq!(theta.apply_formula(&f).to_string(), "p(g1, f(g1)) & q(f(g2(f(g1))), g1)");
    }

    #[test]
    fn inverse_application() {
        let sigma = s(&[("X", "f(a)"), ("Y", "g(f(a))")]);
        let f = parse_formula("p(h(f(a), g(f(a))))").unwrap();
        assert_eq!(sigma.inverse_apply_formula(&f).unwrap().to_string(), "p(h(X, Y))");
        let g = parse_formula("p(b)").unwrap();
        assert_eq!(s(&[("X", "a")]).inverse_apply_formula(&g).unwrap(), g);
        assert!(s(&[("X", "a"), ("Y", "a")]).inverse_apply_term(&t("a")).is_err());
    }
}
