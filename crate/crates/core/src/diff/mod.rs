//! Tree differencing: matching, edit-script generation, replay, and the
//! changed-statement sets that anchor feature extraction.

mod matcher;
mod script;
mod work;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{NodeId, NodeKind, NormalizedAst};

pub use matcher::Matching;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("cannot diff `{buggy}` against `{patched}`: different grammars")]
    GrammarMismatch { buggy: String, patched: String },
    #[error("invalid edit script: {0}")]
    InvalidScript(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EditOp {
    Upd,
    Add,
    Del,
    Mov,
}

impl EditOp {
    pub fn as_str(self) -> &'static str {
        match self {
            EditOp::Upd => "UPD",
            EditOp::Add => "ADD",
            EditOp::Del => "DEL",
            EditOp::Mov => "MOV",
        }
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Target parent of an ADD or MOV while the script is replayed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeRef {
    /// Above the file root; used only when the root itself is replaced.
    Root,
    /// A node of the buggy tree.
    Src(NodeId),
    /// The node inserted by the earlier ADD whose `dst_node` is this id.
    Added(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditAction {
    pub op: EditOp,
    pub src_node: Option<NodeId>,
    pub dst_node: Option<NodeId>,
    /// Child index under `parent` after the action, for ADD and MOV.
    pub position: Option<usize>,
    pub parent: Option<NodeRef>,
    /// Kind of the inserted node (ADD).
    pub kind: Option<NodeKind>,
    /// New label (ADD, UPD).
    pub label: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditScript {
    pub actions: Vec<EditAction>,
    /// Matched pairs whose labels are unchanged, in buggy pre-order.
    pub mapping: Vec<(NodeId, NodeId)>,
}

impl EditScript {
    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Full node matching: unchanged pairs plus updated ones.
    pub fn matching(&self, buggy: &NormalizedAst, patched: &NormalizedAst) -> Matching {
        let upd = self
            .actions
            .iter()
            .filter(|a| a.op == EditOp::Upd)
            .filter_map(|a| Some((a.src_node?, a.dst_node?)));
        Matching::from_pairs(buggy.len(), patched.len(), self.mapping.iter().copied().chain(upd))
    }

    pub fn count(&self, op: EditOp) -> usize {
        self.actions.iter().filter(|a| a.op == op).count()
    }

    /// One action per line: `OP src_path dst_path position`, absent fields
    /// written as `-`. Paths are child-index sequences from the file root,
    /// which is `/`.
    pub fn to_text(&self, buggy: &NormalizedAst, patched: &NormalizedAst) -> String {
        let mut out = String::new();
        let path = |ast: &NormalizedAst, id: Option<NodeId>| match id {
            Some(id) if ast.get(id).is_some() => node_path(ast, id),
            _ => "-".to_string(),
        };
        for a in &self.actions {
            let pos = a.position.map_or("-".to_string(), |p| p.to_string());
            out.push_str(&format!(
                "{} {} {} {}\n",
                a.op,
                path(buggy, a.src_node),
                path(patched, a.dst_node),
                pos
            ));
        }
        out
    }
}

pub fn node_path(ast: &NormalizedAst, id: NodeId) -> String {
    let mut steps: Vec<usize> = std::iter::once(id)
        .chain(ast.ancestors(id))
        .filter_map(|n| ast.position_in_parent(n))
        .collect();
    if steps.is_empty() {
        return "/".to_string();
    }
    steps.reverse();
    steps.iter().map(|s| format!("/{s}")).collect()
}

pub fn diff(buggy: &NormalizedAst, patched: &NormalizedAst) -> Result<EditScript, DiffError> {
    if buggy.grammar_id != patched.grammar_id {
        return Err(DiffError::GrammarMismatch {
            buggy: buggy.grammar_id.clone(),
            patched: patched.grammar_id.clone(),
        });
    }
    let matching = matcher::Matcher::new(buggy, patched).run();
    let actions = script::Generator::new(buggy, patched, &matching).run()?;
    let mapping = matching
        .pairs()
        .filter(|&(s, d)| buggy.label(s) == patched.label(d))
        .collect();
    Ok(EditScript { actions, mapping })
}

pub fn apply(buggy: &NormalizedAst, script: &EditScript) -> Result<NormalizedAst, DiffError> {
    let mut work = work::WorkTree::new(buggy);
    let missing = |what: &str| DiffError::InvalidScript(format!("{what} missing"));
    for a in &script.actions {
        match a.op {
            EditOp::Upd => {
                let w = work.of_src(a.src_node.ok_or_else(|| missing("UPD source"))?)?;
                work.update(w, a.label.clone().ok_or_else(|| missing("UPD label"))?);
            }
            EditOp::Add => {
                let parent = work.resolve(a.parent.ok_or_else(|| missing("ADD parent"))?)?;
                work.insert(
                    parent,
                    a.position.ok_or_else(|| missing("ADD position"))?,
                    a.kind.ok_or_else(|| missing("ADD kind"))?,
                    a.label.clone().unwrap_or_default(),
                    a.dst_node.ok_or_else(|| missing("ADD destination"))?,
                )?;
            }
            EditOp::Mov => {
                let w = work.of_src(a.src_node.ok_or_else(|| missing("MOV source"))?)?;
                let parent = work.resolve(a.parent.ok_or_else(|| missing("MOV parent"))?)?;
                work.detach(w)?;
                work.attach(w, parent, a.position.ok_or_else(|| missing("MOV position"))?)?;
            }
            EditOp::Del => {
                let w = work.of_src(a.src_node.ok_or_else(|| missing("DEL source"))?)?;
                work.delete(w)?;
            }
        }
    }
    work.into_ast()
}

/// Statement-level anchors touched by the script on each side, in source
/// order. A statement nested in another touched statement is folded into
/// it; member declarations do not absorb the statements in their bodies.
pub fn changed_statements(
    script: &EditScript,
    buggy: &NormalizedAst,
    patched: &NormalizedAst,
) -> (Vec<NodeId>, Vec<NodeId>) {
    let mut src = BTreeSet::new();
    let mut dst = BTreeSet::new();
    for a in &script.actions {
        if let Some(s) = a.src_node.filter(|s| buggy.get(*s).is_some()) {
            src.extend(buggy.nearest_anchor(s));
        }
        if let Some(d) = a.dst_node.filter(|d| patched.get(*d).is_some()) {
            dst.extend(patched.nearest_anchor(d));
        }
    }
    (maximal(buggy, &src), maximal(patched, &dst))
}

fn maximal(ast: &NormalizedAst, set: &BTreeSet<NodeId>) -> Vec<NodeId> {
    let absorbs = |n: NodeId| {
        let k = ast.kind(n);
        !(k.is_callable_declaration() || k.is_type_declaration() || k == NodeKind::Initializer)
    };
    set.iter()
        .copied()
        .filter(|&n| !ast.ancestors(n).any(|a| set.contains(&a) && absorbs(a)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse_source;

    fn java(src: &str) -> NormalizedAst {
        parse_source(src, "java").unwrap()
    }

    fn roundtrip(a: &str, b: &str) -> EditScript {
        let (x, y) = (java(a), java(b));
        let script = diff(&x, &y).unwrap();
        let out = apply(&x, &script).unwrap();
        assert!(out.isomorphic_to(&y), "{}\n---\n{}", out.dump(), y.dump());
        out.validate().unwrap();
        script
    }

    #[test]
    fn identical_trees_give_empty_script() {
        let src = "class A { void f() { int x = 1; g(x); } }";
        let script = roundtrip(src, src);
        assert!(script.is_empty());
        assert_eq!(script.mapping.len(), java(src).len());
    }

    #[test]
    fn literal_change_is_one_update() {
        let script = roundtrip("class A { int f() { return 0; } }", "class A { int f() { return 1; } }");
        assert_eq!(script.actions.len(), 1);
        assert_eq!(script.actions[0].op, EditOp::Upd);
        assert_eq!(script.to_text(&java("class A { int f() { return 0; } }"), &java("class A { int f() { return 1; } }")),
            "UPD /0/1/3/0/0 /0/1/3/0/0 -\n");
    }

    #[test]
    fn wrap_in_if_adds_and_moves() {
        let a = "class B { int lower, upper; void f(int v) { int tmp = v; upper = tmp; } }";
        let b = "class B { int lower, upper; void f(int v) { int tmp = v; if (tmp == -1) { upper = tmp; } } }";
        let script = roundtrip(a, b);
        let (x, y) = (java(a), java(b));
        assert!(script.actions.iter().any(|act| act.op == EditOp::Add
            && act.dst_node.is_some_and(|d| y.kind(d) == NodeKind::If)));
        let mov = script.actions.iter().find(|act| act.op == EditOp::Mov).expect("a move");
        assert_eq!(x.kind(mov.src_node.unwrap()), NodeKind::ExprStmt);
        let (s, d) = changed_statements(&script, &x, &y);
        assert_eq!(s.len(), 1);
        assert_eq!(x.kind(s[0]), NodeKind::ExprStmt);
        assert_eq!(d.len(), 1);
        assert_eq!(y.kind(d[0]), NodeKind::If);
    }

    #[test]
    fn statement_reorder_and_delete() {
        roundtrip(
            "class A { void f() { a(); b(); c(); d(); } }",
            "class A { void f() { d(); b(); a(); } int g; }",
        );
        roundtrip("class A { }", "interface A { void f(); }");
        roundtrip("", "class A {}");
        roundtrip("class A {}", "");
    }

    #[test]
    fn grammar_mismatch() {
        let mut y = java("class A {}");
        y.grammar_id = "other".into();
        assert!(matches!(diff(&java("class A {}"), &y), Err(DiffError::GrammarMismatch { .. })));
    }

    #[test]
    fn stale_reference_is_invalid() {
        let x = java("class A {}");
        let script = EditScript {
            actions: vec![EditAction {
                op: EditOp::Del,
                src_node: Some(NodeId(999)),
                dst_node: None,
                position: None,
                parent: None,
                kind: None,
                label: None,
            }],
            mapping: vec![],
        };
        assert!(matches!(apply(&x, &script), Err(DiffError::InvalidScript(_))));
    }

    #[test]
    fn empty_script_changes_nothing() {
        let (s, d) = changed_statements(&EditScript::default(), &java("class A {}"), &java("class A {}"));
        assert!(s.is_empty() && d.is_empty());
        let x = java("class A { int f() { return 0; } }");
        assert!(apply(&x, &EditScript::default()).unwrap().isomorphic_to(&x));
    }
}
