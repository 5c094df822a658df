//! Lifting ground interpolants to quantified first-order interpolants, and the
//! first-order interpolation pipeline.

use std::collections::{BTreeMap, BTreeSet};

use crate::config::{InterpolationConfig, InterpolationReport};
use crate::extract::{ipol_all, ExtractionOptions};
use crate::normalize::{equality_axioms, prepare_inputs, NormalizeError};
use crate::prover::prove;
use crate::syntax::{Formula, Quantifier, Substitution, Symbol, Term};
use crate::tableau::{Side, Tableau};
use crate::verify::close_with_constants;
use crate::Error;

/// Inputs of the lifting step: the two formulas, the symbol sets whose terms get
/// quantified, and the ground interpolant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingFront {
    pub f: Formula,
    pub g: Formula,
    pub fset: BTreeSet<Symbol>,
    pub gset: BTreeSet<Symbol>,
    pub h_ground: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid lifting front: {0}")]
pub struct FrontError(pub String);

impl LiftingFront {
    /// Checks that the symbol sets are disjoint, that `f` uses no symbol of
    /// `gset` and `g` none of `fset`, and that `h_ground` is ground.
    pub fn new(
        f: Formula,
        g: Formula,
        fset: BTreeSet<Symbol>,
        gset: BTreeSet<Symbol>,
        h_ground: Formula,
    ) -> Result<Self, FrontError> {
        if let Some(s) = fset.intersection(&gset).next() {
            return Err(FrontError(format!("{s} is in both symbol sets")));
        }
        if let Some(s) = f.functions().intersection(&gset).next() {
            return Err(FrontError(format!("{s} occurs in f but belongs to the G set")));
        }
        if let Some(s) = g.functions().intersection(&fset).next() {
            return Err(FrontError(format!("{s} occurs in g but belongs to the F set")));
        }
        if !h_ground.is_ground() {
            return Err(FrontError("ground interpolant is not ground".into()));
        }
        Ok(LiftingFront { f, g, fset, gset, h_ground })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedInterpolant {
    pub prefix: Vec<(Quantifier, String)>,
    pub matrix: Formula,
    /// Variable and the term it replaces, in prefix order.
    pub replaced: Vec<(String, Term)>,
}

impl LiftedInterpolant {
    pub fn formula(&self) -> Formula {
        self.prefix.iter().rev().fold(self.matrix.clone(), |acc, (q, v)| Formula::Quant(*q, v.clone(), Box::new(acc)))
    }
}

fn in_set(t: &Term, set: &BTreeSet<Symbol>) -> bool {
    match t {
        Term::App(f, args) => set.contains(&Symbol::function(f.clone(), args.len())),
        Term::Var(_) => false,
    }
}

/// Terms whose outermost symbol is in `fset` or `gset` and that occur in `h`
/// outside any other such term. Ordered by size, then rendered form, so strict
/// subterms come first.
pub fn fg_maximal_terms(h: &Formula, fset: &BTreeSet<Symbol>, gset: &BTreeSet<Symbol>) -> Vec<Term> {
    fn visit(t: &Term, fset: &BTreeSet<Symbol>, gset: &BTreeSet<Symbol>, out: &mut BTreeSet<Term>) {
        if in_set(t, fset) || in_set(t, gset) {
            out.insert(t.clone());
        } else if let Term::App(_, args) = t {
            args.iter().for_each(|a| visit(a, fset, gset, out));
        }
    }
    let mut found = BTreeSet::new();
    h.for_each_atom(&mut |a| a.args.iter().for_each(|t| visit(t, fset, gset, &mut found)));
    let mut terms: Vec<Term> = found.into_iter().collect();
    terms.sort_by_cached_key(|t| (t.size(), t.to_string()));
    terms
}

/// Replaces maximal F/G-terms by fresh variables quantified existentially for
/// F-terms and universally for G-terms.
pub fn lift(front: &LiftingFront) -> LiftedInterpolant {
    let mut taken: BTreeSet<String> = front.f.free_vars();
    taken.extend(front.g.free_vars());
    lift_avoiding(front, &taken)
}

fn lift_avoiding(front: &LiftingFront, taken: &BTreeSet<String>) -> LiftedInterpolant {
    let terms = fg_maximal_terms(&front.h_ground, &front.fset, &front.gset);
    let mut names = (1..).map(|i| format!("V{i}")).filter(|n| !taken.contains(n));
    let mut prefix = Vec::with_capacity(terms.len());
    let mut replaced = Vec::with_capacity(terms.len());
    for t in terms {
        let v = names.next().expect("unbounded");
        let q = if in_set(&t, &front.fset) { Quantifier::Exists } else { Quantifier::Forall };
        prefix.push((q, v.clone()));
        replaced.push((v, t));
    }
    let sigma = Substitution::from_pairs(replaced.iter().cloned());
    let matrix = sigma.inverse_apply_formula(&front.h_ground).expect("distinct terms give an injective substitution");
    LiftedInterpolant { prefix, matrix, replaced }
}

/// First-order interpolation: Skolemize and clausify `f` and `~g`, prove, ground
/// the tableau, assign sides, extract the ground interpolant, and lift it.
/// Free variables of the inputs are treated as constants throughout and
/// restored in the result.
pub fn ctif(f: &Formula, g: &Formula, config: &InterpolationConfig) -> Result<InterpolationReport, Error> {
    if !config.equality && (f.contains_equality() || g.contains_equality()) {
        return Err(NormalizeError::EqualityDisabled.into());
    }
    let (closed, fv_names) = close_with_constants(&[f, g]);
    let (mut fc, mut gc) = (closed[0].clone(), closed[1].clone());
    // The prover sees the axioms after the input clauses so that start clauses
    // from the inputs are tried first.
    let (mut pf, mut pg) = (fc.clone(), gc.clone());
    if config.equality {
        let (ef, eg) = equality_axioms(&fc, &gc, config.equality_placement);
        if ef != Formula::True {
            pf = Formula::and(pf, ef.clone());
            fc = Formula::and(ef, fc);
        }
        if eg != Formula::True {
            pg = Formula::or(pg, Formula::not(eg.clone()));
            gc = Formula::imp(eg, gc);
        }
    }
    let prepared = prepare_inputs(&pf, &pg)?;
    let proof = prove(&prepared.f_clauses, &prepared.g_clauses, config.limits, config.prover)?;
    let closed_tab = proof.tableau.leaf_close()?;
    let (ground, grounding) = closed_tab.ground(&config.grounding)?;
    let (sided, ambiguities) = ground.assign_sides(&config.side_policy)?;
    let tableau = sided.compute_default_targets(config.target_policy)?;
    let annotations = ipol_all(&tableau, ExtractionOptions { simplify: config.simplify })?;
    let h_ground = annotations[&Tableau::ROOT].clone();

    let (ff, fg) = (fc.functions(), gc.functions());
    let mut fset: BTreeSet<Symbol> = prepared.f_skolems.iter().cloned().collect();
    fset.extend(ff.difference(&fg).cloned());
    let mut gset: BTreeSet<Symbol> = prepared.g_skolems.iter().cloned().collect();
    gset.extend(fg.difference(&ff).cloned());
    if let Some(c0) = &grounding.fresh_constant {
        let s = Symbol::function(c0.clone(), 0);
        match config.c0_side {
            Side::F => fset.insert(s),
            Side::G => gset.insert(s),
        };
    }
    let front = LiftingFront::new(fc.clone(), gc.clone(), fset.clone(), gset.clone(), h_ground.clone())
        .map_err(|e| Error::Internal(e.to_string()))?;
    let mut taken: BTreeSet<String> = fv_names.keys().cloned().collect();
    taken.extend(f.free_vars());
    taken.extend(g.free_vars());
    let lifted = lift_avoiding(&front, &taken);
    let back: BTreeMap<String, String> = fv_names.iter().map(|(v, c)| (c.clone(), v.clone())).collect();
    let h = restore_free_vars(&lifted.formula(), &back);

    let mut report = InterpolationReport::new(h, h_ground, tableau, annotations, prepared);
    report.fset = fset;
    report.gset = gset;
    report.grounding = grounding;
    report.ambiguities = ambiguities;
    report.lifted = Some(lifted);
    report.free_var_constants = fv_names;
    report.proof_depth = proof.depth;
    report.inferences = proof.inferences;
    if config.verify {
        let (vf, vg) = if config.equality { (restore_free_vars(&fc, &back), restore_free_vars(&gc, &back)) } else { (f.clone(), g.clone()) };
        report.verification = Some(crate::verify::verify(&vf, &vg, &report.interpolant, config.limits));
    }
    Ok(report)
}

fn restore_free_vars(h: &Formula, back: &BTreeMap<String, String>) -> Formula {
    if back.is_empty() {
        return h.clone();
    }
    h.map_atoms(&mut |a| {
        a.map_args(|t| {
            t.replace_top_down(&mut |s| match s {
                Term::App(c, args) if args.is_empty() => back.get(c).map(|v| Term::Var(v.clone())),
                _ => None,
            })
        })
    })
}
