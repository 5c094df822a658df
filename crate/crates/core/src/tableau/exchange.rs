//! JSON exchange format for tableaux.
//!
//! A node is `{"literal": "~p(a)" | null, "side": "F" | "G" | null,
//! "target": <depth of the target ancestor, root = 0> | null, "children": [...]}`;
//! the top level is `{"f_clauses": [...], "g_clauses": [...], "root": {...}}`.
//! Annotated dumps add `"ipol": "<formula>"` to every node.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{MatchMode, NodeId, Side, Tableau};
use crate::syntax::{parse_clause, parse_literal, Clause, Formula, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedNode {
    pub literal: Option<String>,
    #[serde(default)]
    pub side: Option<Side>,
    #[serde(default)]
    pub target: Option<usize>,
    #[serde(default)]
    pub children: Vec<AnnotatedNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ipol: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauJson {
    pub f_clauses: Vec<String>,
    pub g_clauses: Vec<String>,
    pub root: AnnotatedNode,
    #[serde(default, rename = "match", skip_serializing_if = "is_ordered")]
    pub match_mode: MatchMode,
}

fn is_ordered(m: &MatchMode) -> bool {
    *m == MatchMode::Ordered
}

#[derive(Debug, thiserror::Error)]
pub enum ExchangeError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in `{text}`: {source}")]
    Syntax { text: String, source: SyntaxError },
    #[error("{0}")]
    Structure(String),
}

fn clauses(texts: &[String]) -> Result<Vec<Clause>, ExchangeError> {
    texts
        .iter()
        .map(|t| parse_clause(t).map_err(|e| ExchangeError::Syntax { text: t.clone(), source: e }))
        .collect()
}

impl TableauJson {
    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self, ExchangeError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Builds the tableau. Node ids follow the preorder of the JSON tree.
    pub fn to_tableau(&self) -> Result<Tableau, ExchangeError> {
        let mut t = Tableau::new(clauses(&self.f_clauses)?, clauses(&self.g_clauses)?);
        t.match_mode = self.match_mode;
        if self.root.literal.is_some() {
            return Err(ExchangeError::Structure("root must have a null literal".into()));
        }
        t.nodes[0].side = self.root.side;
        let mut branch = vec![Tableau::ROOT];
        build(&mut t, &self.root, &mut branch)?;
        Ok(t)
    }

    /// `ipol` strings of an annotated dump, keyed by the node ids of `to_tableau`.
    pub fn annotations(&self) -> BTreeMap<NodeId, String> {
        let mut out = BTreeMap::new();
        let mut stack = vec![&self.root];
        let mut id = 0;
        while let Some(n) = stack.pop() {
            if let Some(s) = &n.ipol {
                out.insert(id, s.clone());
            }
            id += 1;
            stack.extend(n.children.iter().rev());
        }
        out
    }
}

fn build(t: &mut Tableau, node: &AnnotatedNode, branch: &mut Vec<NodeId>) -> Result<(), ExchangeError> {
    let me = *branch.last().expect("nonempty");
    if let Some(d) = node.target {
        if d + 1 >= branch.len() {
            return Err(ExchangeError::Structure(format!(
                "target {d} of `{}` is not a strict ancestor",
                t.describe_branch(me)
            )));
        }
        t.nodes[me].target = Some(branch[d]);
    }
    for c in &node.children {
        let text = c.literal.as_ref().ok_or_else(|| ExchangeError::Structure("non-root node without literal".into()))?;
        let lit = parse_literal(text).map_err(|e| ExchangeError::Syntax { text: text.clone(), source: e })?;
        let id = t.add_child(me, lit, c.side);
        branch.push(id);
        build(t, c, branch)?;
        branch.pop();
    }
    Ok(())
}

impl Tableau {
    pub fn to_json(&self) -> TableauJson {
        self.to_json_annotated(&BTreeMap::new())
    }

    pub fn to_json_annotated(&self, ipol: &BTreeMap<NodeId, Formula>) -> TableauJson {
        TableauJson {
            f_clauses: self.for_f.iter().map(|c| c.to_string()).collect(),
            g_clauses: self.for_g.iter().map(|c| c.to_string()).collect(),
            root: self.node_json(Tableau::ROOT, ipol),
            match_mode: self.match_mode,
        }
    }

    fn node_json(&self, id: NodeId, ipol: &BTreeMap<NodeId, Formula>) -> AnnotatedNode {
        let n = &self.nodes[id];
        AnnotatedNode {
            literal: n.label.as_ref().map(|l| l.to_string()),
            side: n.side,
            target: n.target.map(|t| self.depth(t)),
            children: n.children.iter().map(|&c| self.node_json(c, ipol)).collect(),
            ipol: ipol.get(&id).map(|f| f.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = r#"{
      "f_clauses": ["p", "~p | q"],
      "g_clauses": ["~q"],
      "root": {"literal": null, "side": null, "target": null, "children": [
        {"literal": "p", "side": "F", "target": null, "children": [
          {"literal": "~p", "side": "F", "target": 1, "children": []},
          {"literal": "q", "side": "F", "target": null, "children": [
            {"literal": "~q", "side": "G", "target": 2, "children": [], "ipol": "q"}
          ]}
        ]}
      ]}
    }"#;

    #[test]
    fn round_trip() {
        let j = TableauJson::from_str(FIXTURE).unwrap();
        let t = j.to_tableau().unwrap();
        assert!(t.validate().is_ok(), "{:?}", t.validate());
        assert_eq!(t.nodes[2].target, Some(1));
        assert_eq!(j.annotations().get(&4).map(String::as_str), Some("q"));
        let back = TableauJson::from_str(&t.to_json().to_string_pretty()).unwrap().to_tableau().unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn bad_target_rejected() {
        let bad = FIXTURE.replace("\"target\": 2", "\"target\": 3");
        assert!(TableauJson::from_str(&bad).unwrap().to_tableau().is_err());
    }
}
