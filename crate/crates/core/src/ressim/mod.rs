//! Propositional resolution deduction trees and their translation into
//! two-sided clausal tableaux in cut normal form.
//!
//! Each supported interpolation system for resolution (Huang, HKPYM, McMillan,
//! optimized Huang) has a direct partial-interpolant computation and a tableau
//! translation whose `ipol` values coincide with it.

pub mod treegen;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::extract::{ipol_all, ExtractionOptions};
use crate::syntax::{parse_atom, parse_clause, Atom, Clause, Formula, Literal, SyntaxError};
use crate::tableau::{NodeId, Side, Tableau};

/// A node of a tree-shaped resolution refutation. Inner nodes resolve the left
/// child's positive pivot literal against the right child's negative one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DTNode {
    pub clause: Clause,
    pub pivot: Option<Atom>,
    pub children: Vec<DTNode>,
}

impl DTNode {
    pub fn leaf(clause: Clause) -> Self {
        DTNode { clause, pivot: None, children: Vec::new() }
    }

    /// Binary resolvent upon `pivot` with duplicate literals merged.
    pub fn resolve(left: DTNode, right: DTNode, pivot: Atom) -> Self {
        let pos = Literal::pos(pivot.clone());
        let neg = Literal::neg(pivot.clone());
        let mut lits: Vec<Literal> = Vec::new();
        for l in left.clause.iter().filter(|l| **l != pos).chain(right.clause.iter().filter(|l| **l != neg)) {
            if !lits.contains(l) {
                lits.push(l.clone());
            }
        }
        DTNode { clause: Clause(lits), pivot: Some(pivot), children: vec![left, right] }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(DTNode::size).sum::<usize>()
    }

    /// Visits nodes in preorder together with their paths (see [`child_path`]).
    pub fn for_each<'a>(&'a self, visit: &mut impl FnMut(&str, &'a DTNode)) {
        fn go<'a>(n: &'a DTNode, path: &mut String, visit: &mut impl FnMut(&str, &'a DTNode)) {
            visit(path, n);
            for (i, c) in n.children.iter().enumerate() {
                path.push(if i == 0 { '0' } else { '1' });
                go(c, path, visit);
                path.pop();
            }
        }
        go(self, &mut String::new(), visit)
    }
}

/// Path of child `i` below `path`; the root has the empty path.
pub fn child_path(path: &str, i: usize) -> String {
    format!("{path}{i}")
}

fn show_path(path: &str) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        format!("node {path}")
    }
}

/// Provenance of a literal occurrence: from a clause of F, of G, or both after
/// merging.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Origin {
    F,
    G,
    FG,
}

impl Origin {
    pub fn union(self, other: Origin) -> Origin {
        if self == other {
            self
        } else {
            Origin::FG
        }
    }
}

/// Per-node provenance tags, parallel to the node's clause, keyed by path.
pub type Provenance = BTreeMap<String, Vec<Origin>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeductionTree {
    pub f_clauses: Vec<Clause>,
    pub g_clauses: Vec<Clause>,
    pub root: DTNode,
    pub labels: Option<Provenance>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct NodeJson {
    clause: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pivot: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<NodeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TreeJson {
    f_clauses: Vec<String>,
    g_clauses: Vec<String>,
    root: NodeJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Provenance>,
}

#[derive(Debug, thiserror::Error)]
pub enum TreeError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in `{text}`: {source}")]
    Syntax { text: String, source: SyntaxError },
    #[error("invalid deduction tree: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("method opt-huang needs provenance labels: {0}")]
    Labels(String),
    #[error("leaf `{0}` has no complementary ancestor")]
    NoTarget(String),
}

fn syntax(text: &str, source: SyntaxError) -> TreeError {
    TreeError::Syntax { text: text.to_string(), source }
}

fn clause_from_literals(lits: &[String]) -> Result<Clause, TreeError> {
    if lits.is_empty() {
        return Ok(Clause::default());
    }
    parse_clause(&lits.join(" | ")).map_err(|e| syntax(&lits.join(" | "), e))
}

fn node_from_json(n: &NodeJson) -> Result<DTNode, TreeError> {
    let pivot = match &n.pivot {
        Some(p) => Some(parse_atom(p).map_err(|e| syntax(p, e))?),
        None => None,
    };
    Ok(DTNode {
        clause: clause_from_literals(&n.clause)?,
        pivot,
        children: n.children.iter().map(node_from_json).collect::<Result<_, _>>()?,
    })
}

fn node_to_json(n: &DTNode) -> NodeJson {
    NodeJson {
        clause: n.clause.iter().map(|l| l.to_string()).collect(),
        pivot: n.pivot.as_ref().map(|a| a.to_string()),
        children: n.children.iter().map(node_to_json).collect(),
    }
}

impl DeductionTree {
    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        let j: TreeJson = serde_json::from_str(text)?;
        let clauses = |ts: &[String]| {
            ts.iter().map(|t| parse_clause(t).map_err(|e| syntax(t, e))).collect::<Result<Vec<_>, _>>()
        };
        Ok(DeductionTree {
            f_clauses: clauses(&j.f_clauses)?,
            g_clauses: clauses(&j.g_clauses)?,
            root: node_from_json(&j.root)?,
            labels: j.labels,
        })
    }

    pub fn to_json_string(&self) -> String {
        let j = TreeJson {
            f_clauses: self.f_clauses.iter().map(|c| c.to_string()).collect(),
            g_clauses: self.g_clauses.iter().map(|c| c.to_string()).collect(),
            root: node_to_json(&self.root),
            labels: self.labels.clone(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    fn origin_of_leaf(&self, c: &Clause) -> Option<Side> {
        if self.f_clauses.iter().any(|d| d.same_literals(c)) {
            Some(Side::F)
        } else if self.g_clauses.iter().any(|d| d.same_literals(c)) {
            Some(Side::G)
        } else {
            None
        }
    }
}

fn has_duplicates(c: &Clause) -> bool {
    c.iter().enumerate().any(|(i, l)| c.0[i + 1..].contains(l))
}

/// Checks leaf membership, resolvent correctness with merging, an empty root
/// clause, duplicate-free clauses, and that the two clause sets share no
/// clause. Returns all violations.
pub fn validate_tree(t: &DeductionTree) -> Vec<String> {
    let mut v = Vec::new();
    for c in &t.f_clauses {
        if t.g_clauses.iter().any(|d| d.same_literals(c)) {
            v.push(format!("clause `{c}` occurs on both sides"));
        }
    }
    if !t.root.clause.is_empty() {
        v.push(format!("root clause is `{}`, not empty", t.root.clause));
    }
    t.root.for_each(&mut |path, n| {
        let at = show_path(path);
        if has_duplicates(&n.clause) {
            v.push(format!("{at}: clause `{}` has duplicate literals", n.clause));
        }
        match (n.children.as_slice(), &n.pivot) {
            ([], None) => {
                if t.origin_of_leaf(&n.clause).is_none() {
                    v.push(format!("{at}: leaf clause `{}` is not an input clause", n.clause));
                }
            }
            ([], Some(_)) => v.push(format!("{at}: leaf has a pivot")),
            ([l, r], Some(a)) => {
                if !l.clause.0.contains(&Literal::pos(a.clone())) {
                    v.push(format!("{at}: left child lacks `{a}`"));
                }
                if !r.clause.0.contains(&Literal::neg(a.clone())) {
                    v.push(format!("{at}: right child lacks `~{a}`"));
                }
                let expected = DTNode::resolve(DTNode::leaf(l.clause.clone()), DTNode::leaf(r.clause.clone()), a.clone());
                if !expected.clause.same_literals(&n.clause) {
                    v.push(format!("{at}: clause `{}` is not the resolvent `{}`", n.clause, expected.clause));
                }
            }
            ([_, _], None) => v.push(format!("{at}: inner node has no pivot")),
            (cs, _) => v.push(format!("{at}: {} children", cs.len())),
        }
    });
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Color {
    F,
    G,
    Transparent,
}

/// Classification of atoms by the clause sets they occur in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coloring(pub BTreeMap<Atom, Color>);

impl Coloring {
    pub fn of(f: &[Clause], g: &[Clause]) -> Self {
        let atoms = |cs: &[Clause]| cs.iter().flat_map(|c| c.iter().map(|l| l.atom.clone())).collect::<BTreeSet<_>>();
        let (af, ag) = (atoms(f), atoms(g));
        let mut m = BTreeMap::new();
        for a in af.union(&ag) {
            let c = match (af.contains(a), ag.contains(a)) {
                (true, true) => Color::Transparent,
                (true, false) => Color::F,
                _ => Color::G,
            };
            m.insert(a.clone(), c);
        }
        Coloring(m)
    }

    pub fn get(&self, a: &Atom) -> Option<Color> {
        self.0.get(a).copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Huang,
    Hkpym,
    Mcmillan,
    OptHuang,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Huang, Method::Hkpym, Method::Mcmillan, Method::OptHuang];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Huang => "huang",
            Method::Hkpym => "hkpym",
            Method::Mcmillan => "mcmillan",
            Method::OptHuang => "opt-huang",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected huang, hkpym, mcmillan or opt-huang)"))
    }
}

/// Computes provenance tags for every node: leaf literals inherit the side of
/// their clause, resolvent literals the union of the occurrences they merge.
pub fn derive_provenance(t: &DeductionTree) -> Provenance {
    fn go(t: &DeductionTree, n: &DTNode, path: &str, out: &mut Provenance) -> Vec<Origin> {
        let tags = if n.is_leaf() {
            let o = match t.origin_of_leaf(&n.clause) {
                Some(Side::G) => Origin::G,
                _ => Origin::F,
            };
            vec![o; n.clause.len()]
        } else {
            let a = n.pivot.clone().expect("inner node has a pivot");
            let (pos, neg) = (Literal::pos(a.clone()), Literal::neg(a));
            let lt = go(t, &n.children[0], &child_path(path, 0), out);
            let rt = go(t, &n.children[1], &child_path(path, 1), out);
            n.clause
                .iter()
                .map(|l| {
                    let from = |c: &DTNode, tags: &[Origin], skip: &Literal| {
                        c.clause.iter().zip(tags).filter(|(k, _)| *k == l && *k != skip).map(|(_, o)| *o).next()
                    };
                    match (from(&n.children[0], &lt, &pos), from(&n.children[1], &rt, &neg)) {
                        (Some(x), Some(y)) => x.union(y),
                        (Some(x), None) | (None, Some(x)) => x,
                        (None, None) => Origin::FG,
                    }
                })
                .collect()
        };
        out.insert(path.to_string(), tags.clone());
        tags
    }
    let mut out = Provenance::new();
    go(t, &t.root, "", &mut out);
    out
}

/// How a resolution step upon `A` is encoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    /// One cut `~A | A` with the given side.
    Cut(Side),
    /// A cut with side `upper` whose two children carry cuts with side `lower`;
    /// each lower cut has one leaf closed by its parent.
    Stacked { upper: Side, lower: Side },
    /// F-sided cut; the `A` child carries a G-sided cut holding the right subtree.
    RightG,
    /// F-sided cut; the `~A` child carries a G-sided cut holding the left subtree.
    LeftG,
}

fn origin_at(labels: &Provenance, n: &DTNode, path: &str, lit: &Literal) -> Result<Origin, TreeError> {
    let tags = labels.get(path).ok_or_else(|| TreeError::Labels(format!("no labels for {}", show_path(path))))?;
    if tags.len() != n.clause.len() {
        return Err(TreeError::Labels(format!("{} has {} labels for {} literals", show_path(path), tags.len(), n.clause.len())));
    }
    let i = n.clause.iter().position(|l| l == lit).expect("pivot literal in child");
    Ok(tags[i])
}

fn step_for(
    method: Method,
    coloring: &Coloring,
    labels: Option<&Provenance>,
    n: &DTNode,
    path: &str,
) -> Result<Step, TreeError> {
    let a = n.pivot.as_ref().expect("inner node has a pivot");
    let color = coloring.get(a).unwrap_or(Color::Transparent);
    Ok(match (method, color) {
        (_, Color::F) => Step::Cut(Side::F),
        (_, Color::G) => Step::Cut(Side::G),
        (Method::Huang, Color::Transparent) => Step::Stacked { upper: Side::F, lower: Side::G },
        (Method::Hkpym, Color::Transparent) => Step::Stacked { upper: Side::G, lower: Side::F },
        (Method::Mcmillan, Color::Transparent) => Step::Cut(Side::G),
        (Method::OptHuang, Color::Transparent) => {
            let labels = labels.ok_or_else(|| TreeError::Labels("tree carries no labels".into()))?;
            let lo = origin_at(labels, &n.children[0], &child_path(path, 0), &Literal::pos(a.clone()))?;
            let ro = origin_at(labels, &n.children[1], &child_path(path, 1), &Literal::neg(a.clone()))?;
            match (lo, ro) {
                (Origin::F, Origin::F) => Step::Cut(Side::F),
                (Origin::G, Origin::G) => Step::Cut(Side::G),
                (Origin::F, Origin::G) => Step::RightG,
                (Origin::G, Origin::F) => Step::LeftG,
                _ => Step::Stacked { upper: Side::F, lower: Side::G },
            }
        }
    })
}

/// Partial interpolant of every tree node, keyed by path, computed directly
/// from the method's definition with truth-value simplification. Opt-huang
/// reads provenance from `t.labels`.
pub fn partial_interpolants(
    t: &DeductionTree,
    coloring: &Coloring,
    method: Method,
) -> Result<BTreeMap<String, Formula>, TreeError> {
    fn go(
        t: &DeductionTree,
        c: &Coloring,
        m: Method,
        n: &DTNode,
        path: &str,
        out: &mut BTreeMap<String, Formula>,
    ) -> Result<Formula, TreeError> {
        let pi = if n.is_leaf() {
            match (t.origin_of_leaf(&n.clause), m) {
                (Some(Side::G), _) => Formula::True,
                (_, Method::Mcmillan) => {
                    // Restriction of the clause to transparent atoms.
                    let parts: Vec<Formula> = n
                        .clause
                        .iter()
                        .map(|l| match c.get(&l.atom) {
                            Some(Color::Transparent) => Formula::literal(l),
                            _ => Formula::False,
                        })
                        .collect();
                    parts.into_iter().rev().reduce(|acc, p| Formula::or_s(p, acc)).unwrap_or(Formula::False)
                }
                _ => Formula::False,
            }
        } else {
            let a = n.pivot.clone().expect("inner node has a pivot");
            let p1 = go(t, c, m, &n.children[0], &child_path(path, 0), out)?;
            let p2 = go(t, c, m, &n.children[1], &child_path(path, 1), out)?;
            let (pa, na) = (Formula::atom(a.clone()), Formula::literal(&Literal::neg(a)));
            match step_for(m, c, t.labels.as_ref(), n, path)? {
                Step::Cut(Side::F) => Formula::or_s(p1, p2),
                Step::Cut(Side::G) => Formula::and_s(p1, p2),
                Step::Stacked { upper: Side::F, .. } => Formula::or_s(Formula::and_s(p1, na), Formula::and_s(pa, p2)),
                Step::Stacked { upper: Side::G, .. } => Formula::and_s(Formula::or_s(p1, pa), Formula::or_s(na, p2)),
                Step::RightG => Formula::or_s(p1, Formula::and_s(pa, p2)),
                Step::LeftG => Formula::or_s(Formula::and_s(p1, na), p2),
            }
        };
        out.insert(path.to_string(), pi.clone());
        Ok(pi)
    }
    let mut out = BTreeMap::new();
    go(t, coloring, method, &t.root, "", &mut out)?;
    Ok(out)
}

/// Root partial interpolant according to Huang's method.
pub fn huang_pi(t: &DeductionTree, coloring: &Coloring) -> Formula {
    partial_interpolants(t, coloring, Method::Huang).expect("huang needs no labels").remove("").expect("root")
}

/// Result of translating a deduction tree into a tableau.
#[derive(Clone, Debug)]
pub struct Translation {
    /// Leaf-closed two-sided tableau; its clause sets are the inputs plus the
    /// cut clauses it uses.
    pub tableau: Tableau,
    /// Tableau node corresponding to each tree node, keyed by path.
    pub ct: BTreeMap<String, NodeId>,
    /// Cut clauses `~A | A` for every atom of the F clauses.
    pub cuts_f: Vec<Clause>,
    /// Cut clauses `~A | A` for every atom of the G clauses.
    pub cuts_g: Vec<Clause>,
    /// Leaves of lower cuts, closed by their parent.
    pub cut_leaves: BTreeSet<NodeId>,
}

fn cut(a: &Atom) -> Clause {
    Clause(vec![Literal::neg(a.clone()), Literal::pos(a.clone())])
}

fn all_cuts(cs: &[Clause]) -> Vec<Clause> {
    let atoms: BTreeSet<&Atom> = cs.iter().flat_map(|c| c.iter().map(|l| &l.atom)).collect();
    atoms.into_iter().map(cut).collect()
}

struct Builder<'a> {
    tree: &'a DeductionTree,
    coloring: &'a Coloring,
    method: Method,
    tab: Tableau,
    ct: BTreeMap<String, NodeId>,
    used: BTreeSet<(Side, Atom)>,
    clause_leaves: Vec<NodeId>,
    cut_leaves: BTreeSet<NodeId>,
}

impl Builder<'_> {
    fn cut_pair(&mut self, at: NodeId, a: &Atom, side: Side) -> (NodeId, NodeId) {
        self.used.insert((side, a.clone()));
        let n = self.tab.add_child(at, Literal::neg(a.clone()), Some(side));
        let p = self.tab.add_child(at, Literal::pos(a.clone()), Some(side));
        (n, p)
    }

    fn closed_by_parent(&mut self, leaf: NodeId) {
        self.tab.nodes[leaf].target = self.tab.nodes[leaf].parent;
        self.cut_leaves.insert(leaf);
    }

    fn fill(&mut self, n: &DTNode, path: &str, at: NodeId) -> Result<(), TreeError> {
        self.ct.insert(path.to_string(), at);
        if n.is_leaf() {
            let side = self.tree.origin_of_leaf(&n.clause).unwrap_or(Side::F);
            for l in n.clause.iter() {
                let id = self.tab.add_child(at, l.clone(), Some(side));
                self.clause_leaves.push(id);
            }
            return Ok(());
        }
        let a = n.pivot.clone().expect("inner node has a pivot");
        let (p0, p1) = (child_path(path, 0), child_path(path, 1));
        let (c1, c2) = match step_for(self.method, self.coloring, self.tree.labels.as_ref(), n, path)? {
            Step::Cut(side) => self.cut_pair(at, &a, side),
            Step::Stacked { upper, lower } => {
                let (n1, n2) = self.cut_pair(at, &a, upper);
                let (c1, l1) = self.cut_pair(n1, &a, lower);
                let (l2, c2) = self.cut_pair(n2, &a, lower);
                self.closed_by_parent(l1);
                self.closed_by_parent(l2);
                (c1, c2)
            }
            Step::RightG => {
                let (c1, n2) = self.cut_pair(at, &a, Side::F);
                let (l2, c2) = self.cut_pair(n2, &a, Side::G);
                self.closed_by_parent(l2);
                (c1, c2)
            }
            Step::LeftG => {
                let (n1, c2) = self.cut_pair(at, &a, Side::F);
                let (c1, l1) = self.cut_pair(n1, &a, Side::G);
                self.closed_by_parent(l1);
                (c1, c2)
            }
        };
        self.fill(&n.children[0], &p0, c1)?;
        self.fill(&n.children[1], &p1, c2)
    }
}

/// Translates a validated deduction tree into a two-sided leaf-closed tableau
/// for the inputs extended by cut clauses. Leaves from input clauses target the
/// nearest complementary ancestor, restricted to their own side except for
/// McMillan's method.
pub fn ct_translate(t: &DeductionTree, coloring: &Coloring, method: Method) -> Result<Translation, TreeError> {
    let mut b = Builder {
        tree: t,
        coloring,
        method,
        tab: Tableau::new(t.f_clauses.clone(), t.g_clauses.clone()),
        ct: BTreeMap::new(),
        used: BTreeSet::new(),
        clause_leaves: Vec::new(),
        cut_leaves: BTreeSet::new(),
    };
    b.fill(&t.root, "", Tableau::ROOT)?;
    let Builder { mut tab, ct, used, clause_leaves, cut_leaves, .. } = b;
    for (side, a) in used {
        match side {
            Side::F => tab.for_f.push(cut(&a)),
            Side::G => tab.for_g.push(cut(&a)),
        }
    }
    for leaf in clause_leaves {
        let cands = tab.complementary_ancestors(leaf);
        let side = tab.nodes[leaf].side;
        let same = cands.iter().copied().find(|&c| tab.nodes[c].side == side);
        let target = match method {
            Method::Mcmillan => cands.first().copied(),
            _ => same.or_else(|| cands.first().copied()),
        };
        tab.nodes[leaf].target = Some(target.ok_or_else(|| TreeError::NoTarget(tab.describe_branch(leaf)))?);
    }
    Ok(Translation { tableau: tab, ct, cuts_f: all_cuts(&t.f_clauses), cuts_g: all_cuts(&t.g_clauses), cut_leaves })
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub translation: Translation,
    pub annotations: BTreeMap<NodeId, Formula>,
    /// `ipol` of the tableau root.
    pub interpolant: Formula,
}

/// Validates the tree, translates it, and extracts the interpolant from the
/// resulting tableau.
pub fn simulate(t: &DeductionTree, method: Method) -> Result<Simulation, TreeError> {
    let violations = validate_tree(t);
    if !violations.is_empty() {
        return Err(TreeError::Invalid(violations));
    }
    let coloring = Coloring::of(&t.f_clauses, &t.g_clauses);
    let translation = ct_translate(t, &coloring, method)?;
    let annotations =
        ipol_all(&translation.tableau, ExtractionOptions::default()).expect("translated tableaux carry sides and targets");
    let interpolant = annotations[&Tableau::ROOT].clone();
    Ok(Simulation { translation, annotations, interpolant })
}
