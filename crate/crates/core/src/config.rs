//! Choice points of the interpolation pipeline and the report it produces.

use std::collections::{BTreeMap, BTreeSet};

use crate::lift::LiftedInterpolant;
use crate::normalize::{EqualityPlacement, PreparedInputs};
use crate::prover::{ProofLimits, ProverPolicy};
use crate::syntax::{Formula, Symbol};
use crate::tableau::{Ambiguity, GroundingLog, GroundingPolicy, NodeId, Side, SidePolicy, Tableau, TargetPolicy};
use crate::verify::VerificationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationConfig {
    /// Side for clause occurrences that instantiate clauses of both inputs.
    pub side_policy: SidePolicy,
    pub grounding: GroundingPolicy,
    pub target_policy: TargetPolicy,
    /// Which symbol set receives the constant added during grounding.
    pub c0_side: Side,
    pub limits: ProofLimits,
    pub prover: ProverPolicy,
    /// Treat `=` as a predicate with equality axioms.
    pub equality: bool,
    pub equality_placement: EqualityPlacement,
    pub verify: bool,
    pub simplify: bool,
}

impl Default for InterpolationConfig {
    fn default() -> Self {
        InterpolationConfig {
            side_policy: SidePolicy::PreferF,
            grounding: GroundingPolicy::LeastConstant,
            target_policy: TargetPolicy::Nearest,
            c0_side: Side::F,
            limits: ProofLimits::default(),
            prover: ProverPolicy::default(),
            equality: false,
            equality_placement: EqualityPlacement::Auto,
            verify: false,
            simplify: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InterpolationReport {
    /// The interpolant.
    pub interpolant: Formula,
    /// The ground interpolant read off the tableau, before lifting.
    pub ground_interpolant: Formula,
    /// Two-sided, ground, leaf-closed tableau the interpolant was extracted from.
    pub tableau: Tableau,
    /// `ipol` value of every tableau node.
    pub annotations: BTreeMap<NodeId, Formula>,
    pub prepared: PreparedInputs,
    /// Symbols whose maximal terms are lifted to existential variables.
    pub fset: BTreeSet<Symbol>,
    /// Symbols whose maximal terms are lifted to universal variables.
    pub gset: BTreeSet<Symbol>,
    pub grounding: GroundingLog,
    pub ambiguities: Vec<Ambiguity>,
    pub lifted: Option<LiftedInterpolant>,
    /// Free variables of the inputs and the constants that stood in for them.
    pub free_var_constants: BTreeMap<String, String>,
    pub proof_depth: usize,
    pub inferences: u64,
    pub verification: Option<VerificationReport>,
}

impl InterpolationReport {
    pub fn new(
        interpolant: Formula,
        ground_interpolant: Formula,
        tableau: Tableau,
        annotations: BTreeMap<NodeId, Formula>,
        prepared: PreparedInputs,
    ) -> Self {
        InterpolationReport {
            interpolant,
            ground_interpolant,
            tableau,
            annotations,
            prepared,
            fset: BTreeSet::new(),
            gset: BTreeSet::new(),
            grounding: GroundingLog::default(),
            ambiguities: Vec::new(),
            lifted: None,
            free_var_constants: BTreeMap::new(),
            proof_depth: 0,
            inferences: 0,
            verification: None,
        }
    }

    /// Machine-readable summary of the choice points and results.
    pub fn summary_json(&self) -> serde_json::Value {
        let syms = |s: &BTreeSet<Symbol>| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        serde_json::json!({
            "interpolant": self.interpolant.to_string(),
            "ground_interpolant": self.ground_interpolant.to_string(),
            "f_clauses": self.prepared.f_clauses.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "g_clauses": self.prepared.g_clauses.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "fset": syms(&self.fset),
            "gset": syms(&self.gset),
            "grounding": self.grounding.assignment.iter().map(|(v, t)| (v.clone(), t.to_string())).collect::<BTreeMap<_, _>>(),
            "fresh_constant": self.grounding.fresh_constant,
            "ambiguous_clauses": self.ambiguities.iter().map(|a| serde_json::json!({"clause": a.clause, "side": a.chosen.to_string()})).collect::<Vec<_>>(),
            "proof_depth": self.proof_depth,
            "inferences": self.inferences,
            "tableau_nodes": self.tableau.len(),
        })
    }
}
