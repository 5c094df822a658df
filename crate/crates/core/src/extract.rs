//! Interpolant extraction from two-sided leaf-closed tableaux, and the ground
//! interpolation pipeline built on it.

use std::collections::BTreeMap;

use crate::config::{InterpolationConfig, InterpolationReport};
use crate::normalize::prepare_inputs;
use crate::prover::prove;
use crate::syntax::Formula;
use crate::tableau::{NodeId, Side, Tableau};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractionOptions {
    /// Apply truth-value simplification while composing.
    pub simplify: bool,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        ExtractionOptions { simplify: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("node `{0}` has no side")]
    MissingSide(String),
    #[error("leaf `{0}` has no target")]
    MissingTarget(String),
}

/// Value of `ipol` at `node`.
pub fn ipol(t: &Tableau, node: NodeId, opts: ExtractionOptions) -> Result<Formula, ExtractError> {
    let mut memo = BTreeMap::new();
    compute(t, node, opts, &mut memo)?;
    Ok(memo.remove(&node).expect("computed"))
}

/// `ipol` for every node of the tableau.
pub fn ipol_all(t: &Tableau, opts: ExtractionOptions) -> Result<BTreeMap<NodeId, Formula>, ExtractError> {
    let mut memo = BTreeMap::new();
    compute(t, Tableau::ROOT, opts, &mut memo)?;
    Ok(memo)
}

fn side_of(t: &Tableau, n: NodeId) -> Result<Side, ExtractError> {
    t.nodes[n].side.ok_or_else(|| ExtractError::MissingSide(t.describe_branch(n)))
}

fn compute(
    t: &Tableau,
    n: NodeId,
    opts: ExtractionOptions,
    memo: &mut BTreeMap<NodeId, Formula>,
) -> Result<(), ExtractError> {
    let node = &t.nodes[n];
    let value = if node.children.is_empty() {
        if n == Tableau::ROOT {
            // The proof is the empty clause itself; the side holding it decides.
            if t.for_f.iter().any(|c| c.is_empty()) {
                Formula::False
            } else {
                Formula::True
            }
        } else {
            let tgt = node.target.ok_or_else(|| ExtractError::MissingTarget(t.describe_branch(n)))?;
            let lit = node.label.as_ref().expect("leaf label");
            match (side_of(t, n)?, side_of(t, tgt)?) {
                (Side::F, Side::F) => Formula::False,
                (Side::F, Side::G) => Formula::literal(lit),
                (Side::G, Side::F) => Formula::literal(&lit.complement()),
                (Side::G, Side::G) => Formula::True,
            }
        }
    } else {
        let side = side_of(t, node.children[0])?;
        let mut parts = Vec::with_capacity(node.children.len());
        for &c in &node.children {
            compute(t, c, opts, memo)?;
            parts.push(memo[&c].clone());
        }
        combine(side, parts, opts.simplify)
    };
    memo.insert(n, value);
    Ok(())
}

/// Disjunction (F-sided children) or conjunction (G-sided), right-associated in
/// child order. A single child passes through unchanged.
fn combine(side: Side, parts: Vec<Formula>, simplify: bool) -> Formula {
    let mut it = parts.into_iter().rev();
    let mut acc = it.next().expect("inner node has children");
    for p in it {
        acc = match (side, simplify) {
            (Side::F, true) => Formula::or_s(p, acc),
            (Side::F, false) => Formula::or(p, acc),
            (Side::G, true) => Formula::and_s(p, acc),
            (Side::G, false) => Formula::and(p, acc),
        };
    }
    acc
}

/// Ground interpolation: clausify `f` and `~g`, prove, leaf-close, assign sides,
/// set targets, and extract.
pub fn cti_ground(f: &Formula, g: &Formula, config: &InterpolationConfig) -> Result<InterpolationReport, Error> {
    if !f.is_ground() || !g.is_ground() {
        return Err(Error::NotGround);
    }
    let prepared = prepare_inputs(f, g)?;
    let proof = prove(&prepared.f_clauses, &prepared.g_clauses, config.limits, config.prover)?;
    let closed = proof.tableau.leaf_close()?;
    let (sided, ambiguities) = closed.assign_sides(&config.side_policy)?;
    let tableau = sided.compute_default_targets(config.target_policy)?;
    let opts = ExtractionOptions { simplify: config.simplify };
    let annotations = ipol_all(&tableau, opts)?;
    let h = annotations[&Tableau::ROOT].clone();
    let mut report = InterpolationReport::new(h.clone(), h, tableau, annotations, prepared);
    report.ambiguities = ambiguities;
    report.proof_depth = proof.depth;
    report.inferences = proof.inferences;
    if config.verify {
        report.verification = Some(crate::verify::verify(f, g, &report.interpolant, config.limits));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_clause, parse_formula, parse_literal};

    fn lit(s: &str) -> crate::syntax::Literal {
        parse_literal(s).unwrap()
    }

    #[test]
    fn leaf_table() {
        let mut t = Tableau::new(vec![parse_clause("p").unwrap()], vec![parse_clause("~p").unwrap()]);
        let p = t.add_child(0, lit("p"), Some(Side::F));
        let np = t.add_child(p, lit("~p"), Some(Side::G));
        t.nodes[np].target = Some(p);
        assert_eq!(ipol(&t, 0, Default::default()).unwrap().to_string(), "p");
        t.nodes[p].side = Some(Side::G);
        assert_eq!(ipol(&t, 0, Default::default()).unwrap(), Formula::True);
        t.nodes[np].side = Some(Side::F);
        assert_eq!(ipol(&t, np, Default::default()).unwrap().to_string(), "~p");
        t.nodes[p].side = Some(Side::F);
        assert_eq!(ipol(&t, 0, Default::default()).unwrap(), Formula::False);
    }

    #[test]
    fn missing_side_is_an_error() {
        let mut t = Tableau::new(vec![parse_clause("p").unwrap()], vec![parse_clause("~p").unwrap()]);
        let p = t.add_child(0, lit("p"), None);
        let np = t.add_child(p, lit("~p"), None);
        t.nodes[np].target = Some(p);
        assert!(matches!(ipol(&t, 0, Default::default()), Err(ExtractError::MissingSide(_))));
    }

    #[test]
    fn shared_clause_side_policies() {
        let f = parse_formula("a & b & (b => c)").unwrap();
        let g = parse_formula("c | ~(b => c) | d").unwrap();
        let mut cfg = InterpolationConfig::default();
        let h = cti_ground(&f, &g, &cfg).unwrap().interpolant;
        assert!(h == parse_formula("c").unwrap() || h == parse_formula("b").unwrap(), "{h}");
        cfg.side_policy = crate::tableau::SidePolicy::PreferG;
        let h2 = cti_ground(&f, &g, &cfg).unwrap().interpolant;
        assert!(crate::verify::ground_entails(&f, &h2).unwrap());
    }

    #[test]
    fn rejects_non_ground() {
        let f = parse_formula("![X]: p(X)").unwrap();
        assert!(matches!(cti_ground(&f, &f, &Default::default()), Err(Error::NotGround)));
    }
}
