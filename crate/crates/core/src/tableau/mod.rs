//! Clausal tableaux with side labels and closing targets.
//!
//! A [`Tableau`] is an arena of [`TabNode`]s; node `0` is the unlabeled root. The
//! children of every inner node spell an instance of an input clause. After side
//! assignment each sibling group carries the side (`F` or `G`) of the clause set
//! it was taken from.

mod exchange;
mod matching;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{Clause, Literal, Substitution, Symbol, Term};

pub use exchange::{AnnotatedNode, ExchangeError, TableauJson};
pub use matching::{match_clause_ordered, match_clause_permuted};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    F,
    G,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::F => Side::G,
            Side::G => Side::F,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::F => "F",
            Side::G => "G",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabNode {
    /// `None` only for the root.
    pub label: Option<Literal>,
    pub side: Option<Side>,
    /// A strict ancestor carrying the complementary literal.
    pub target: Option<NodeId>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

/// How clause occurrences in the tableau are compared with input clauses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchMode {
    #[default]
    Ordered,
    Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    pub nodes: Vec<TabNode>,
    pub for_f: Vec<Clause>,
    pub for_g: Vec<Clause>,
    pub match_mode: MatchMode,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TableauError {
    #[error("node {0} is a leaf and has no clause")]
    LeafHasNoClause(NodeId),
    #[error("tableau is not closed: open branch {0}")]
    OpenBranch(String),
    #[error("leaf {0} has no ancestor with the complementary literal")]
    NoComplementaryAncestor(String),
    #[error("node {0} has no side")]
    MissingSide(String),
    #[error("clause `{0}` is not an instance of any input clause")]
    NotAnInstance(String),
    #[error("grounding maps `{var}` to `{term}`, which uses symbols outside the signature")]
    BadGrounding { var: String, term: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetPolicy {
    /// Closest complementary ancestor.
    #[default]
    Nearest,
    /// Closest complementary ancestor on the leaf's own side, else the closest one.
    SameSidePreferred,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum GroundingPolicy {
    /// Every variable becomes the least constant of the signature, or a fresh
    /// constant if the signature has none.
    #[default]
    LeastConstant,
    /// Given terms per variable; unmapped variables fall back to `LeastConstant`.
    Explicit(BTreeMap<String, Term>),
}

/// What grounding did.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundingLog {
    pub assignment: Substitution,
    /// The fresh constant introduced because the signature had none.
    pub fresh_constant: Option<String>,
    /// Variables not covered by an explicit map.
    pub defaulted: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum SidePolicy {
    #[default]
    PreferF,
    PreferG,
    /// Sides keyed by the rendered clause occurrence; unlisted clauses use `PreferF`.
    Explicit(BTreeMap<String, Side>),
}

/// A clause occurrence that was an instance of clauses of both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambiguity {
    pub node: NodeId,
    pub clause: String,
    pub chosen: Side,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }
}

/// Name used for the constant added when the signature has none.
pub const FRESH_CONSTANT: &str = "c0";

impl Tableau {
    pub const ROOT: NodeId = 0;

    pub fn new(for_f: Vec<Clause>, for_g: Vec<Clause>) -> Self {
        Tableau {
            nodes: vec![TabNode { label: None, side: None, target: None, parent: None, children: Vec::new() }],
            for_f,
            for_g,
            match_mode: MatchMode::Ordered,
        }
    }

    pub fn add_child(&mut self, parent: NodeId, label: Literal, side: Option<Side>) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(TabNode { label: Some(label), side, target: None, parent: Some(parent), children: Vec::new() });
        self.nodes[parent].children.push(id);
        id
    }

    /// Appends one child per literal of `clause` below `parent`.
    pub fn extend(&mut self, parent: NodeId, clause: &[Literal], side: Option<Side>) -> Vec<NodeId> {
        clause.iter().map(|l| self.add_child(parent, l.clone(), side)).collect()
    }

    pub fn node(&self, id: NodeId) -> &TabNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_empty()
    }

    pub fn label(&self, id: NodeId) -> Option<&Literal> {
        self.nodes[id].label.as_ref()
    }

    /// Strict ancestors, nearest first.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(self.nodes[id].parent, move |&n| self.nodes[n].parent)
    }

    /// Number of edges from the root.
    pub fn depth(&self, id: NodeId) -> usize {
        self.ancestors(id).count()
    }

    /// Length of the longest root-to-leaf path in edges.
    pub fn height(&self) -> usize {
        self.leaves().into_iter().map(|l| self.depth(l)).max().unwrap_or(0)
    }

    /// Nodes from the root down to `id`.
    pub fn branch(&self, id: NodeId) -> Vec<NodeId> {
        let mut b: Vec<NodeId> = self.ancestors(id).collect();
        b.reverse();
        b.push(id);
        b
    }

    /// Nodes in depth-first, left-to-right preorder.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![Self::ROOT];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.nodes[n].children.iter().rev());
        }
        out
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.preorder().into_iter().filter(|&n| self.is_leaf(n)).collect()
    }

    pub fn clause_of(&self, id: NodeId) -> Result<Clause, TableauError> {
        let n = &self.nodes[id];
        if n.children.is_empty() {
            return Err(TableauError::LeafHasNoClause(id));
        }
        Ok(Clause(n.children.iter().map(|&c| self.nodes[c].label.clone().expect("non-root label")).collect()))
    }

    /// Strict ancestors labeled with the complement of `id`'s label, nearest first.
    pub fn complementary_ancestors(&self, id: NodeId) -> Vec<NodeId> {
        let Some(l) = self.label(id) else { return Vec::new() };
        self.ancestors(id).filter(|&a| self.label(a).is_some_and(|al| al.is_complement_of(l))).collect()
    }

    pub fn is_closing(&self, id: NodeId) -> bool {
        !self.complementary_ancestors(id).is_empty()
    }

    /// Human-readable branch description, e.g. `a / ~a / b`.
    pub fn describe_branch(&self, id: NodeId) -> String {
        let parts: Vec<String> =
            self.branch(id).into_iter().skip(1).map(|n| self.label(n).map(|l| l.to_string()).unwrap_or_default()).collect();
        if parts.is_empty() {
            "(root)".into()
        } else {
            parts.join(" / ")
        }
    }

    fn input_has_empty_clause(&self) -> bool {
        self.for_f.iter().chain(&self.for_g).any(Clause::is_empty)
    }

    /// Removes everything below closing nodes, so that every leaf is closing, and
    /// fills in missing leaf targets with the nearest complementary ancestor.
    pub fn leaf_close(&self) -> Result<Tableau, TableauError> {
        let mut out = Tableau::new(self.for_f.clone(), self.for_g.clone());
        out.match_mode = self.match_mode;
        out.nodes[0].side = self.nodes[0].side;
        let mut map: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        map.insert(Self::ROOT, Self::ROOT);
        let mut stack = vec![Self::ROOT];
        while let Some(old) = stack.pop() {
            let new = map[&old];
            let closing = old != Self::ROOT && self.is_closing(old);
            if closing {
                let t = self.nodes[old].target.filter(|t| self.complementary_ancestors(old).contains(t));
                out.nodes[new].target = t.map(|t| map[&t]);
                continue;
            }
            if self.is_leaf(old) {
                if old == Self::ROOT && self.input_has_empty_clause() {
                    continue;
                }
                return Err(TableauError::OpenBranch(self.describe_branch(old)));
            }
            for &c in &self.nodes[old].children {
                let n = &self.nodes[c];
                let id = out.add_child(new, n.label.clone().expect("label"), n.side);
                map.insert(c, id);
            }
            stack.extend(self.nodes[old].children.iter().rev());
        }
        out.fill_targets(TargetPolicy::Nearest, false)?;
        Ok(out)
    }

    /// Sets every leaf target according to `policy`, replacing existing ones.
    pub fn compute_default_targets(&self, policy: TargetPolicy) -> Result<Tableau, TableauError> {
        let mut t = self.clone();
        t.fill_targets(policy, true)?;
        Ok(t)
    }

    fn fill_targets(&mut self, policy: TargetPolicy, overwrite: bool) -> Result<(), TableauError> {
        for leaf in self.leaves() {
            if leaf == Self::ROOT || (!overwrite && self.nodes[leaf].target.is_some()) {
                continue;
            }
            let cands = self.complementary_ancestors(leaf);
            let Some(&nearest) = cands.first() else {
                return Err(TableauError::NoComplementaryAncestor(self.describe_branch(leaf)));
            };
            let side = self.nodes[leaf].side;
            let chosen = match policy {
                TargetPolicy::Nearest => nearest,
                TargetPolicy::SameSidePreferred => {
                    cands.iter().copied().find(|&a| side.is_some() && self.nodes[a].side == side).unwrap_or(nearest)
                }
            };
            self.nodes[leaf].target = Some(chosen);
        }
        Ok(())
    }

    /// Labels of the branch up to and including `id` whose side is `side`.
    pub fn path(&self, side: Side, id: NodeId) -> Result<Vec<Literal>, TableauError> {
        let mut out = Vec::new();
        for n in self.branch(id).into_iter().skip(1) {
            match self.nodes[n].side {
                None => return Err(TableauError::MissingSide(self.describe_branch(n))),
                Some(s) if s == side => out.push(self.nodes[n].label.clone().expect("label")),
                Some(_) => {}
            }
        }
        Ok(out)
    }

    /// All variables in node labels.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for n in &self.nodes {
            if let Some(l) = &n.label {
                l.collect_vars(&mut out);
            }
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.nodes.iter().all(|n| n.label.as_ref().is_none_or(Literal::is_ground))
    }

    /// Function symbols of the input clause sets.
    pub fn signature(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for c in self.for_f.iter().chain(&self.for_g) {
            for l in c {
                l.atom.args.iter().for_each(|t| t.collect_functions(&mut out));
            }
        }
        out
    }

    /// Instantiates every variable of the tableau with a ground term over the
    /// signature of the input clauses.
    pub fn ground(&self, policy: &GroundingPolicy) -> Result<(Tableau, GroundingLog), TableauError> {
        let sig = self.signature();
        let mut log = GroundingLog::default();
        let vars = self.variables();
        let least = sig.iter().filter(|s| s.is_constant()).map(|s| s.name.clone()).min();
        let mut default_const = || -> String {
            if let Some(c) = &least {
                return c.clone();
            }
            if log.fresh_constant.is_none() {
                let names: BTreeSet<&str> = sig.iter().map(|s| s.name.as_str()).collect();
                let name = std::iter::once(FRESH_CONSTANT.to_string())
                    .chain((1..).map(|i| format!("{FRESH_CONSTANT}_{i}")))
                    .find(|n| !names.contains(n.as_str()))
                    .expect("unbounded");
                log.fresh_constant = Some(name);
            }
            log.fresh_constant.clone().expect("set above")
        };
        let mut pairs = Vec::new();
        let mut defaulted = Vec::new();
        for v in &vars {
            let t = match policy {
                GroundingPolicy::Explicit(m) if m.contains_key(v) => {
                    let t = m[v].clone();
                    let mut used = BTreeSet::new();
                    t.collect_functions(&mut used);
                    if !t.is_ground() || !used.is_subset(&sig) {
                        return Err(TableauError::BadGrounding { var: v.clone(), term: t.to_string() });
                    }
                    t
                }
                GroundingPolicy::Explicit(_) => {
                    defaulted.push(v.clone());
                    Term::constant(default_const())
                }
                GroundingPolicy::LeastConstant => Term::constant(default_const()),
            };
            pairs.push((v.clone(), t));
        }
        log.defaulted = defaulted;
        log.assignment = Substitution::from_pairs(pairs);
        let mut out = self.clone();
        for n in out.nodes.iter_mut() {
            if let Some(l) = &n.label {
                n.label = Some(log.assignment.apply_literal(l));
            }
        }
        Ok((out, log))
    }

    fn instance_of_any(&self, clauses: &[Clause], inst: &[Literal]) -> bool {
        clauses.iter().any(|c| match self.match_mode {
            MatchMode::Ordered => match_clause_ordered(c, inst).is_some(),
            MatchMode::Permutation => match_clause_permuted(c, inst).is_some(),
        })
    }

    /// Labels every sibling group with the side whose clause set it instantiates.
    pub fn assign_sides(&self, policy: &SidePolicy) -> Result<(Tableau, Vec<Ambiguity>), TableauError> {
        let mut out = self.clone();
        let mut amb = Vec::new();
        for id in self.preorder() {
            if self.is_leaf(id) {
                continue;
            }
            let clause = self.clause_of(id)?;
            let in_f = self.instance_of_any(&self.for_f, clause.literals());
            let in_g = self.instance_of_any(&self.for_g, clause.literals());
            let side = match (in_f, in_g) {
                (true, false) => Side::F,
                (false, true) => Side::G,
                (false, false) => return Err(TableauError::NotAnInstance(clause.to_string())),
                (true, true) => {
                    let chosen = match policy {
                        SidePolicy::PreferF => Side::F,
                        SidePolicy::PreferG => Side::G,
                        SidePolicy::Explicit(m) => m.get(&clause.to_string()).copied().unwrap_or(Side::F),
                    };
                    amb.push(Ambiguity { node: id, clause: clause.to_string(), chosen });
                    chosen
                }
            };
            for &c in &self.nodes[id].children {
                out.nodes[c].side = Some(side);
            }
        }
        Ok((out, amb))
    }

    /// Checks the clausal-tableau conditions: labels, instance property (per side
    /// once sides are present), uniform sibling sides, closed leaves, and correct
    /// targets. All violations are collected in tree order.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        if self.nodes[0].label.is_some() {
            v.push("root carries a label".to_string());
        }
        for id in self.preorder() {
            let n = &self.nodes[id];
            if id != Self::ROOT && n.label.is_none() {
                v.push(format!("node {id} has no label"));
                continue;
            }
            if !n.children.is_empty() {
                let clause = self.clause_of(id).expect("inner node");
                let sides: BTreeSet<Option<Side>> = n.children.iter().map(|&c| self.nodes[c].side).collect();
                if sides.len() > 1 {
                    v.push(format!("children of `{}` have mixed sides", self.describe_branch(id)));
                }
                let ok = match sides.into_iter().next().flatten() {
                    Some(Side::F) => self.instance_of_any(&self.for_f, clause.literals()),
                    Some(Side::G) => self.instance_of_any(&self.for_g, clause.literals()),
                    None => {
                        self.instance_of_any(&self.for_f, clause.literals())
                            || self.instance_of_any(&self.for_g, clause.literals())
                    }
                };
                if !ok {
                    v.push(format!("clause `{clause}` below `{}` is not an instance of its side's clauses", self.describe_branch(id)));
                }
            } else if id == Self::ROOT {
                if !self.input_has_empty_clause() {
                    v.push("tableau has no clause but the input has no empty clause".to_string());
                }
            } else {
                let cands = self.complementary_ancestors(id);
                match n.target {
                    _ if cands.is_empty() => v.push(format!("leaf `{}` is open", self.describe_branch(id))),
                    None => v.push(format!("leaf `{}` has no target", self.describe_branch(id))),
                    Some(t) if !cands.contains(&t) => {
                        v.push(format!("target of leaf `{}` is not a complementary ancestor", self.describe_branch(id)))
                    }
                    Some(_) => {}
                }
            }
            if !n.children.is_empty() && n.target.is_some() {
                v.push(format!("inner node `{}` has a target", self.describe_branch(id)));
            }
        }
        ValidationReport { violations: v }
    }

    /// Renders the tree one node per line, indented by depth.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for id in self.preorder() {
            let n = &self.nodes[id];
            let d = self.depth(id);
            let label = n.label.as_ref().map_or("*".to_string(), |l| l.to_string());
            out.push_str(&"  ".repeat(d));
            out.push_str(&label);
            if let Some(s) = n.side {
                out.push_str(&format!(" [{s}]"));
            }
            if let Some(t) = n.target {
                out.push_str(&format!(" -> {}", self.depth(t)));
            }
            out.push('\n');
        }
        out
    }
}
