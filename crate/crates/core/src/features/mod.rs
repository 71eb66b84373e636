//! Patch features: code description over SRC/FORMER/LATTER windows, repair
//! patterns, and contextual syntax, encoded into fixed-length vectors.

mod code_desc;
mod contextual;
mod encode;
pub mod matrix;
mod patterns;
pub mod schema;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{NodeId, NodeKind, NormalizedAst, ScopeIndex};
use crate::diff::{changed_statements, EditOp, EditScript, Matching};

pub use code_desc::extract_code_description;
pub use contextual::extract_contextual;
pub use encode::{encode, FeatureVector};
pub use patterns::extract_repair_patterns;
pub use schema::{FeatureEntry, FeatureGroup, FeatureKind, FeatureSchema, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawValue {
    Flag(bool),
    Text(String),
}

/// Feature values of one file-pair diff, keyed by raw feature name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFeatures {
    pub values: BTreeMap<String, RawValue>,
}

impl RawFeatures {
    pub fn flag(&self, name: &str) -> Option<bool> {
        match self.values.get(name)? {
            RawValue::Flag(b) => Some(*b),
            RawValue::Text(_) => None,
        }
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        match self.values.get(name)? {
            RawValue::Text(s) => Some(s),
            RawValue::Flag(_) => None,
        }
    }

    fn extend_flags<'a>(&mut self, flags: impl IntoIterator<Item = (String, bool)> + 'a) {
        self.values.extend(flags.into_iter().map(|(k, v)| (k, RawValue::Flag(v))));
    }
}

/// All 202 raw features of one diff.
pub fn extract(buggy: &NormalizedAst, patched: &NormalizedAst, script: &EditScript) -> RawFeatures {
    let view = DiffView::new(buggy, patched, script);
    let mut raw = RawFeatures::default();
    raw.extend_flags(code_desc::extract(&view));
    raw.extend_flags(
        schema::PATTERN_FEATURES
            .iter()
            .map(|n| n.to_string())
            .zip(patterns::extract(&view)),
    );
    raw.values.extend(contextual::extract(&view));
    raw
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Buggy,
    Patched,
}

/// Everything the extractors ask about one diff, computed once.
pub(crate) struct DiffView<'a> {
    pub buggy: &'a NormalizedAst,
    pub patched: &'a NormalizedAst,
    pub script: &'a EditScript,
    pub matching: Matching,
    pub src_stmts: Vec<NodeId>,
    pub dst_stmts: Vec<NodeId>,
    index_b: ScopeIndex,
    index_p: ScopeIndex,
    /// Per node: the subtree contains a node named by some action.
    touched_b: Vec<bool>,
    touched_p: Vec<bool>,
    added: Vec<bool>,
}

impl<'a> DiffView<'a> {
    pub fn new(buggy: &'a NormalizedAst, patched: &'a NormalizedAst, script: &'a EditScript) -> Self {
        let (src_stmts, dst_stmts) = changed_statements(script, buggy, patched);
        let mut touched_b = vec![false; buggy.len()];
        let mut touched_p = vec![false; patched.len()];
        let mut added = vec![false; patched.len()];
        for a in &script.actions {
            if let Some(s) = a.src_node.filter(|s| s.index() < buggy.len()) {
                touched_b[s.index()] = true;
            }
            if let Some(d) = a.dst_node.filter(|d| d.index() < patched.len()) {
                touched_p[d.index()] = true;
                if a.op == EditOp::Add {
                    added[d.index()] = true;
                }
            }
        }
        bubble_up(buggy, &mut touched_b);
        bubble_up(patched, &mut touched_p);
        DiffView {
            buggy,
            patched,
            script,
            matching: script.matching(buggy, patched),
            src_stmts,
            dst_stmts,
            index_b: ScopeIndex::new(buggy),
            index_p: ScopeIndex::new(patched),
            touched_b,
            touched_p,
            added,
        }
    }

    pub fn ast(&self, side: Side) -> &'a NormalizedAst {
        match side {
            Side::Buggy => self.buggy,
            Side::Patched => self.patched,
        }
    }

    pub fn index(&self, side: Side) -> &ScopeIndex {
        match side {
            Side::Buggy => &self.index_b,
            Side::Patched => &self.index_p,
        }
    }

    pub fn touched(&self, side: Side, id: NodeId) -> bool {
        match side {
            Side::Buggy => self.touched_b[id.index()],
            Side::Patched => self.touched_p[id.index()],
        }
    }

    pub fn is_added(&self, d: NodeId) -> bool {
        self.added[d.index()]
    }

    /// Patched nodes that existed before the patch.
    pub fn is_kept_dst(&self, d: NodeId) -> bool {
        self.matching.has_dst(d)
    }

    /// Buggy nodes that survive the patch.
    pub fn is_kept_src(&self, s: NodeId) -> bool {
        self.matching.has_src(s)
    }

    pub fn actions(&self, op: EditOp) -> impl Iterator<Item = &'a crate::diff::EditAction> {
        self.script.actions.iter().filter(move |a| a.op == op)
    }

    /// The faulty statement: first changed buggy statement in source order,
    /// or the first patched one for pure insertions.
    pub fn faulty(&self) -> Option<(Side, NodeId)> {
        self.src_stmts
            .first()
            .map(|&s| (Side::Buggy, s))
            .or_else(|| self.dst_stmts.first().map(|&d| (Side::Patched, d)))
    }
}

fn bubble_up(ast: &NormalizedAst, marks: &mut [bool]) {
    for id in ast.postorder() {
        if marks[id.index()] {
            if let Some(p) = ast.parent(id) {
                marks[p.index()] = true;
            }
        }
    }
}

pub(crate) const LOGICAL_OPS: [&str; 2] = ["&&", "||"];
pub(crate) const RELATIONAL_OPS: [&str; 6] = ["==", "!=", "<", "<=", ">", ">="];
pub(crate) const ARITHMETIC_OPS: [&str; 5] = ["+", "-", "*", "/", "%"];

/// Guard expression of a conditional or loop node.
pub(crate) fn condition_of(ast: &NormalizedAst, id: NodeId) -> Option<NodeId> {
    let children = ast.children(id);
    match ast.kind(id) {
        NodeKind::If | NodeKind::While | NodeKind::Conditional => children.first().copied(),
        NodeKind::DoWhile => children.last().copied(),
        NodeKind::For => children
            .iter()
            .take(children.len().saturating_sub(1))
            .copied()
            .find(|&c| !matches!(ast.kind(c), NodeKind::ForInit | NodeKind::ForUpdate)),
        _ => None,
    }
}

/// Then/else branches of an `If`, or the value arms of a `?:`.
pub(crate) fn branches_of(ast: &NormalizedAst, id: NodeId) -> &[NodeId] {
    match ast.kind(id) {
        NodeKind::If | NodeKind::Conditional => ast.children(id).get(1..).unwrap_or(&[]),
        _ => &[],
    }
}

/// Statements of a branch: the block's statements, or the branch itself.
pub(crate) fn branch_statements(ast: &NormalizedAst, branch: NodeId) -> Vec<NodeId> {
    if ast.kind(branch) == NodeKind::Block {
        ast.children(branch).to_vec()
    } else {
        vec![branch]
    }
}

pub(crate) fn is_null_literal(ast: &NormalizedAst, id: NodeId) -> bool {
    ast.kind(id) == NodeKind::Literal && ast.label(id) == "null"
}

/// `x == null` or `x != null`; returns the operator.
pub(crate) fn null_comparison(ast: &NormalizedAst, id: NodeId) -> Option<&str> {
    let op = ast.operator_of(id).filter(|_| ast.kind(id) == NodeKind::Binary)?;
    if !(op == "==" || op == "!=") {
        return None;
    }
    ast.children(id).iter().any(|&c| is_null_literal(ast, c)).then_some(op)
}

pub(crate) fn contains_null_check(ast: &NormalizedAst, id: NodeId) -> bool {
    ast.subtree(id).into_iter().any(|n| null_comparison(ast, n).is_some())
}

/// Operand children of a binary/unary/assignment node (everything but the
/// operator token).
pub(crate) fn operands(ast: &NormalizedAst, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
    ast.children(id).iter().copied().filter(move |&c| ast.kind(c) != NodeKind::Operator)
}

/// Argument children of a call or instance creation.
pub(crate) fn call_arguments(ast: &NormalizedAst, id: NodeId) -> Vec<NodeId> {
    let children = ast.children(id);
    match ast.kind(id) {
        NodeKind::MethodCall => {
            let name = children.iter().position(|&c| ast.kind(c) == NodeKind::MethodName);
            name.map_or(Vec::new(), |i| children[i + 1..].to_vec())
        }
        NodeKind::NewObject => children
            .iter()
            .copied()
            .skip_while(|&c| ast.kind(c) != NodeKind::Type)
            .skip(1)
            .filter(|&c| ast.kind(c) != NodeKind::ClassBody)
            .collect(),
        NodeKind::ExplicitCtorCall => children.get(1..).unwrap_or(&[]).to_vec(),
        _ => Vec::new(),
    }
}

/// Receiver expression of a method call, if written.
pub(crate) fn call_receiver(ast: &NormalizedAst, id: NodeId) -> Option<NodeId> {
    let first = *ast.children(id).first()?;
    (ast.kind(id) == NodeKind::MethodCall
        && !matches!(ast.kind(first), NodeKind::MethodName | NodeKind::TypeArguments))
    .then_some(first)
}

/// A capitalised bare name used as a qualifier reads as a type reference
/// (`Math.max`, `Color.RED`) rather than a variable.
pub(crate) fn is_type_qualifier(ast: &NormalizedAst, id: NodeId) -> bool {
    ast.kind(id) == NodeKind::Name
        && ast.label(id).starts_with(|c: char| c.is_ascii_uppercase())
        && !ast.label(id).chars().all(|c| c.is_ascii_uppercase() || c == '_' || c.is_ascii_digit())
        && ast.parent(id).is_some_and(|p| {
            matches!(ast.kind(p), NodeKind::FieldAccess | NodeKind::MethodCall | NodeKind::MethodRef)
                && ast.children(p).first() == Some(&id)
        })
}

/// Identifier leaves that denote variables: bare names that are not type
/// qualifiers, and `this.x` field names.
pub(crate) fn is_variable_use(ast: &NormalizedAst, id: NodeId) -> bool {
    match ast.kind(id) {
        NodeKind::Name => !is_type_qualifier(ast, id),
        NodeKind::FieldName => ast
            .parent(id)
            .and_then(|p| ast.children(p).first().copied())
            .is_some_and(|q| ast.kind(q) == NodeKind::This),
        _ => false,
    }
}

/// Target variable leaf of an assignment or `++`/`--`.
pub(crate) fn assignment_target(ast: &NormalizedAst, id: NodeId) -> Option<NodeId> {
    let target = match ast.kind(id) {
        NodeKind::Assignment => ast.children(id).first().copied()?,
        NodeKind::Unary | NodeKind::Postfix
            if ast.operator_of(id).is_some_and(|op| op == "++" || op == "--") =>
        {
            operands(ast, id).next()?
        }
        _ => return None,
    };
    match ast.kind(target) {
        NodeKind::Name => Some(target),
        NodeKind::FieldAccess => ast.child_of_kind(target, NodeKind::FieldName),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse_source;
    use crate::diff::diff;

    #[test]
    fn all_names_present_and_typed() {
        let a = parse_source("class A { int f(int x) { return x; } }", "java").unwrap();
        let b = parse_source("class A { int f(int x) { return x + 1; } }", "java").unwrap();
        let raw = extract(&a, &b, &diff(&a, &b).unwrap());
        let schema = FeatureSchema::v1();
        assert_eq!(raw.values.len(), schema.raw_len());
        for e in &schema.entries {
            let v = raw.values.get(&e.name).unwrap_or_else(|| panic!("missing {}", e.name));
            match (e.kind, v) {
                (FeatureKind::Binary, RawValue::Flag(_)) => {}
                (FeatureKind::String, RawValue::Text(t)) => assert!(schema.vocab(&e.name).contains(t)),
                _ => panic!("{} has the wrong type", e.name),
            }
        }
        assert_eq!(raw.flag("SRC_opAdd"), Some(true));
        assert_eq!(raw.flag("expArithMod"), Some(true));
    }
}
