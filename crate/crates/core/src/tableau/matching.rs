use std::collections::BTreeMap;

use crate::syntax::{Clause, Literal, Substitution, Term};

type Bindings = BTreeMap<String, Term>;

/// One-way matching: extends `s` so that `pattern` instantiated by `s` equals
/// `instance`. Variables of `instance` are treated as constants.
fn match_term(pattern: &Term, instance: &Term, s: &mut Bindings) -> bool {
    match pattern {
        Term::Var(v) => match s.get(v) {
            Some(t) => t == instance,
            None => {
                s.insert(v.clone(), instance.clone());
                true
            }
        },
        Term::App(f, args) => match instance {
            Term::App(g, iargs) if f == g && args.len() == iargs.len() => {
                args.iter().zip(iargs).all(|(a, b)| match_term(a, b, s))
            }
            _ => false,
        },
    }
}

fn match_literal(pattern: &Literal, instance: &Literal, s: &mut Bindings) -> bool {
    pattern.positive == instance.positive
        && pattern.atom.pred == instance.atom.pred
        && pattern.atom.args.len() == instance.atom.args.len()
        && pattern.atom.args.iter().zip(&instance.atom.args).all(|(a, b)| match_term(a, b, s))
}

/// Ordered clause matching: literal `i` of the pattern matches literal `i` of the
/// instance under one common substitution.
pub fn match_clause_ordered(pattern: &Clause, instance: &[Literal]) -> Option<Substitution> {
    if pattern.len() != instance.len() {
        return None;
    }
    let mut s = Bindings::new();
    pattern.iter().zip(instance).all(|(p, i)| match_literal(p, i, &mut s)).then(|| Substitution::from_pairs(s))
}

/// Matching up to a permutation of the instance literals.
pub fn match_clause_permuted(pattern: &Clause, instance: &[Literal]) -> Option<Substitution> {
    if pattern.len() != instance.len() {
        return None;
    }
    let mut used = vec![false; instance.len()];
    permute(pattern.literals(), instance, &mut used, Bindings::new()).map(Substitution::from_pairs)
}

fn permute(pattern: &[Literal], instance: &[Literal], used: &mut [bool], s: Bindings) -> Option<Bindings> {
    let Some((first, rest)) = pattern.split_first() else { return Some(s) };
    for i in 0..instance.len() {
        if used[i] {
            continue;
        }
        let mut s2 = s.clone();
        if match_literal(first, &instance[i], &mut s2) {
            used[i] = true;
            if let Some(r) = permute(rest, instance, used, s2) {
                return Some(r);
            }
            used[i] = false;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_clause, parse_literal};

    fn lits(s: &str) -> Vec<Literal> {
        s.split(" | ").map(|l| parse_literal(l).unwrap()).collect()
    }

    #[test]
    fn ordered_matching() {
        let c = parse_clause("p(X) | ~q(X, Y)").unwrap();
        let s = match_clause_ordered(&c, &lits("p(a) | ~q(a, b)")).unwrap();
        assert_eq!(s.to_string(), "{X -> a, Y -> b}");
        assert!(match_clause_ordered(&c, &lits("p(a) | ~q(b, b)")).is_none());
        assert!(match_clause_ordered(&c, &lits("~q(a, b) | p(a)")).is_none());
        assert!(match_clause_permuted(&c, &lits("~q(a, b) | p(a)")).is_some());
    }

    #[test]
    fn instance_variables_are_rigid() {
        let c = parse_clause("p(X, X)").unwrap();
        assert!(match_clause_ordered(&c, &lits("p(X, X)")).is_some());
        assert!(match_clause_ordered(&c, &lits("p(X, Y)")).is_none());
        assert!(match_clause_ordered(&c, &lits("p(Y, X)")).is_none());
        let d = parse_clause("p(a)").unwrap();
        assert!(match_clause_ordered(&d, &lits("p(X)")).is_none());
    }
}
