//! Tree-resolution refutations for small propositional clause sets, read off a
//! semantic tree. Used to produce test inputs for the simulations.

use std::collections::BTreeMap;

use super::{DTNode, DeductionTree};
use crate::syntax::{Atom, Clause};

/// Builds a tree-resolution refutation of `f ∪ g`, or `None` if the clauses are
/// satisfiable. Atoms are split in order of first occurrence; at each leaf of
/// the semantic tree the first falsified clause is used.
pub fn refute(f: &[Clause], g: &[Clause]) -> Option<DeductionTree> {
    let clauses: Vec<&Clause> = f.iter().chain(g).filter(|c| !c.is_tautology()).collect();
    let mut atoms: Vec<Atom> = Vec::new();
    for c in &clauses {
        for l in c.iter() {
            if !atoms.contains(&l.atom) {
                atoms.push(l.atom.clone());
            }
        }
    }
    let mut assign = BTreeMap::new();
    let root = split(&clauses, &atoms, 0, &mut assign)?;
    Some(DeductionTree { f_clauses: f.to_vec(), g_clauses: g.to_vec(), root, labels: None })
}

fn falsified(c: &Clause, assign: &BTreeMap<Atom, bool>) -> bool {
    c.iter().all(|l| assign.get(&l.atom) == Some(&!l.positive))
}

/// Refutation whose root clause is falsified by `assign`.
fn split(clauses: &[&Clause], atoms: &[Atom], i: usize, assign: &mut BTreeMap<Atom, bool>) -> Option<DTNode> {
    if let Some(c) = clauses.iter().find(|c| falsified(c, assign)) {
        return Some(DTNode::leaf((*c).clone()));
    }
    let a = atoms.get(i)?;
    assign.insert(a.clone(), false);
    let left = split(clauses, atoms, i + 1, assign);
    assign.insert(a.clone(), true);
    let right = split(clauses, atoms, i + 1, assign);
    assign.remove(a);
    let (left, right) = (left?, right?);
    // A side whose clause does not mention the split literal is already
    // falsified higher up and needs no resolution step.
    if !left.clause.iter().any(|l| l.positive && l.atom == *a) {
        return Some(left);
    }
    if !right.clause.iter().any(|l| !l.positive && l.atom == *a) {
        return Some(right);
    }
    Some(DTNode::resolve(left, right, a.clone()))
}
