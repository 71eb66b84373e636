//! Normalized syntax trees and the structural queries the feature
//! extractors run against them.
//!
//! A [`NormalizedAst`] is produced by a grammar adapter (see [`registry`]).
//! Nodes live in a flat table indexed by [`NodeId`]; the table order is a
//! pre-order walk of the tree, so sibling order matches source order.

mod context;
mod error;
pub mod java;
mod kind;
pub mod registry;
mod scope;

use std::collections::VecDeque;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use context::{statement_context, StatementContext};
pub use error::AstError;
pub use kind::{NodeKind, StatementKind};
pub use registry::{parse_source, GrammarRegistry};
pub use scope::{
    declared_type, resolve_variable, type_category, ScopeIndex, TypeCategory, VariableInfo, VariableScope,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Byte range `[start, end)` in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AstNode {
    pub id: NodeId,
    pub kind: NodeKind,
    /// Token text for leaves (identifiers, literals, operators, types);
    /// empty for inner nodes.
    pub label: String,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    pub span: Span,
}

impl AstNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Unattached node description used to build trees bottom-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSpec {
    pub kind: NodeKind,
    pub label: String,
    pub span: Span,
    pub children: Vec<TreeSpec>,
}

impl TreeSpec {
    pub fn new(kind: NodeKind, label: impl Into<String>, span: Span) -> Self {
        TreeSpec { kind, label: label.into(), span, children: Vec::new() }
    }

    pub fn with_children(mut self, children: Vec<TreeSpec>) -> Self {
        self.children = children;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedAst {
    pub root: NodeId,
    pub nodes: Vec<AstNode>,
    pub source_path: PathBuf,
    pub grammar_id: String,
    /// Byte offsets of line starts; empty for synthesized trees.
    #[serde(default)]
    pub line_starts: Vec<usize>,
}

impl NormalizedAst {
    /// Flattens a tree description into a node table in pre-order.
    pub fn from_spec(spec: TreeSpec, grammar_id: &str, source_path: &Path) -> Self {
        let mut nodes = Vec::new();
        fn push(spec: TreeSpec, parent: Option<NodeId>, nodes: &mut Vec<AstNode>) -> NodeId {
            let id = NodeId(nodes.len() as u32);
            nodes.push(AstNode {
                id,
                kind: spec.kind,
                label: spec.label,
                children: Vec::with_capacity(spec.children.len()),
                parent,
                span: spec.span,
            });
            for child in spec.children {
                let cid = push(child, Some(id), nodes);
                nodes[id.index()].children.push(cid);
            }
            id
        }
        let root = push(spec, None, &mut nodes);
        NormalizedAst {
            root,
            nodes,
            source_path: source_path.to_path_buf(),
            grammar_id: grammar_id.to_string(),
            line_starts: Vec::new(),
        }
    }

    pub fn with_source_lines(mut self, source: &str) -> Self {
        self.line_starts = std::iter::once(0)
            .chain(source.match_indices('\n').map(|(i, _)| i + 1))
            .collect();
        self
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &AstNode {
        &self.nodes[id.index()]
    }

    pub fn get(&self, id: NodeId) -> Option<&AstNode> {
        self.nodes.get(id.index())
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.node(id).kind
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.node(id).label
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.node(id).parent
    }

    pub fn child_of_kind(&self, id: NodeId, kind: NodeKind) -> Option<NodeId> {
        self.children(id).iter().copied().find(|&c| self.kind(c) == kind)
    }

    pub fn position_in_parent(&self, id: NodeId) -> Option<usize> {
        let parent = self.parent(id)?;
        self.children(parent).iter().position(|&c| c == id)
    }

    pub fn ancestors(&self, id: NodeId) -> Ancestors<'_> {
        Ancestors { ast: self, next: self.parent(id) }
    }

    pub fn is_ancestor(&self, ancestor: NodeId, of: NodeId) -> bool {
        self.ancestors(of).any(|a| a == ancestor)
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.ancestors(id).count()
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        self.subtree(self.root)
    }

    /// Pre-order node list of the subtree rooted at `id` (inclusive).
    pub fn subtree(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.children(n).iter().rev().copied());
        }
        out
    }

    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        fn walk(ast: &NormalizedAst, id: NodeId, out: &mut Vec<NodeId>) {
            for &c in ast.children(id) {
                walk(ast, c, out);
            }
            out.push(id);
        }
        walk(self, self.root, &mut out);
        out
    }

    pub fn breadth_first(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut queue = VecDeque::from([self.root]);
        while let Some(n) = queue.pop_front() {
            out.push(n);
            queue.extend(self.children(n).iter().copied());
        }
        out
    }

    /// Whether the node is statement-level: a statement kind, or a block
    /// sitting directly in a statement list.
    pub fn is_statement(&self, id: NodeId) -> bool {
        let kind = self.kind(id);
        if kind.is_statement_kind() {
            return true;
        }
        match kind {
            NodeKind::Block => self
                .parent(id)
                .is_some_and(|p| self.kind(p).is_statement_list()),
            k if k.is_type_declaration() => self
                .parent(id)
                .is_some_and(|p| self.kind(p).is_statement_list()),
            _ => false,
        }
    }

    /// Statements plus member/type declarations: the nodes changes are
    /// anchored to.
    pub fn is_anchor(&self, id: NodeId) -> bool {
        let kind = self.kind(id);
        self.is_statement(id)
            || kind.is_type_declaration()
            || kind.is_callable_declaration()
            || matches!(kind, NodeKind::FieldDecl | NodeKind::Initializer)
    }

    pub fn statement_kind(&self, id: NodeId) -> Option<StatementKind> {
        if !self.is_anchor(id) {
            return None;
        }
        Some(match self.kind(id) {
            NodeKind::ExprStmt => {
                let expr = self.children(id).first().copied();
                match expr.map(|e| (self.kind(e), e)) {
                    Some((NodeKind::Assignment, _)) => StatementKind::Assignment,
                    Some((NodeKind::Unary | NodeKind::Postfix, e)) if self.is_increment(e) => {
                        StatementKind::Assignment
                    }
                    Some((NodeKind::MethodCall | NodeKind::NewObject, _)) => {
                        StatementKind::Invocation
                    }
                    _ => StatementKind::Other,
                }
            }
            NodeKind::ExplicitCtorCall => StatementKind::Invocation,
            NodeKind::If => StatementKind::Conditional,
            k if k.is_loop() => StatementKind::Loop,
            NodeKind::Try => StatementKind::Try,
            NodeKind::Catch => StatementKind::Catch,
            NodeKind::Return => StatementKind::Return,
            NodeKind::Switch | NodeKind::SwitchCase => StatementKind::Case,
            NodeKind::Break => StatementKind::Break,
            NodeKind::Continue => StatementKind::Continue,
            NodeKind::Throw => StatementKind::Throw,
            NodeKind::LocalVarDecl | NodeKind::FieldDecl => StatementKind::Declaration,
            NodeKind::Block => StatementKind::Block,
            NodeKind::MethodDecl => StatementKind::Method,
            NodeKind::ConstructorDecl => StatementKind::Constructor,
            k if k.is_type_declaration() => StatementKind::Class,
            NodeKind::Synchronized => StatementKind::Synchronized,
            _ => StatementKind::Other,
        })
    }

    fn is_increment(&self, id: NodeId) -> bool {
        self.operator_of(id).is_some_and(|op| op == "++" || op == "--")
    }

    /// Operator token of a binary, unary, postfix or assignment node.
    pub fn operator_of(&self, id: NodeId) -> Option<&str> {
        match self.kind(id) {
            NodeKind::Binary | NodeKind::Unary | NodeKind::Postfix | NodeKind::Assignment => self
                .children(id)
                .iter()
                .find(|&&c| self.kind(c) == NodeKind::Operator)
                .map(|&c| self.label(c)),
            _ => None,
        }
    }

    /// Nearest anchor at or above `id`.
    pub fn nearest_anchor(&self, id: NodeId) -> Option<NodeId> {
        std::iter::once(id).chain(self.ancestors(id)).find(|&n| self.is_anchor(n))
    }

    /// Nearest statement-level node at or above `id`.
    pub fn nearest_statement(&self, id: NodeId) -> Option<NodeId> {
        std::iter::once(id).chain(self.ancestors(id)).find(|&n| self.is_statement(n))
    }

    /// Nearest enclosing anchor strictly above `id`, skipping non-statement
    /// blocks (method bodies, branch bodies).
    pub fn parent_anchor(&self, id: NodeId) -> Option<NodeId> {
        self.ancestors(id).find(|&n| self.is_anchor(n))
    }

    pub fn enclosing(&self, id: NodeId, pred: impl Fn(NodeKind) -> bool) -> Option<NodeId> {
        self.ancestors(id).find(|&n| pred(self.kind(n)))
    }

    pub fn enclosing_callable(&self, id: NodeId) -> Option<NodeId> {
        self.enclosing(id, |k| {
            k.is_callable_declaration() || matches!(k, NodeKind::Initializer | NodeKind::Lambda)
        })
    }

    pub fn enclosing_type(&self, id: NodeId) -> Option<NodeId> {
        self.enclosing(id, |k| k.is_type_declaration())
    }

    /// Declared name of a declaration node (class, method, variable, ...).
    pub fn decl_name(&self, id: NodeId) -> Option<&str> {
        self.child_of_kind(id, NodeKind::DeclName).map(|n| self.label(n))
    }

    pub fn has_modifier(&self, id: NodeId, modifier: &str) -> bool {
        self.children(id)
            .iter()
            .any(|&c| self.kind(c) == NodeKind::Modifier && self.label(c) == modifier)
    }

    /// Zero-based line of a byte offset; `None` for synthesized trees.
    pub fn line_of(&self, offset: usize) -> Option<usize> {
        if self.line_starts.is_empty() {
            return None;
        }
        Some(self.line_starts.partition_point(|&s| s <= offset).saturating_sub(1))
    }

    /// Structural comparison on kinds, labels and child order.
    pub fn isomorphic(&self, a: NodeId, other: &NormalizedAst, b: NodeId) -> bool {
        let (na, nb) = (self.node(a), other.node(b));
        na.kind == nb.kind
            && na.label == nb.label
            && na.children.len() == nb.children.len()
            && na
                .children
                .iter()
                .zip(&nb.children)
                .all(|(&x, &y)| self.isomorphic(x, other, y))
    }

    pub fn isomorphic_to(&self, other: &NormalizedAst) -> bool {
        self.isomorphic(self.root, other, other.root)
    }

    /// Indented one-node-per-line dump, for debugging and golden tests.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        fn walk(ast: &NormalizedAst, id: NodeId, depth: usize, out: &mut String) {
            let node = ast.node(id);
            out.push_str(&"  ".repeat(depth));
            out.push_str(node.kind.name());
            if !node.label.is_empty() {
                out.push_str(" \"");
                out.push_str(&node.label);
                out.push('"');
            }
            out.push('\n');
            for &c in &node.children {
                walk(ast, c, depth + 1, out);
            }
        }
        walk(self, self.root, 0, &mut out);
        out
    }

    /// Checks the structural invariants: single rooted tree, parent links
    /// consistent, spans nested and ordered.
    pub fn validate(&self) -> Result<(), String> {
        if self.nodes.is_empty() {
            return Err("empty node table".into());
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        if self.parent(self.root).is_some() {
            return Err("root has a parent".into());
        }
        while let Some(n) = stack.pop() {
            if std::mem::replace(&mut seen[n.index()], true) {
                return Err(format!("node {} reached twice", n.0));
            }
            let node = self.node(n);
            let mut prev_end = node.span.start;
            for &c in &node.children {
                let child = self.get(c).ok_or_else(|| format!("dangling child {}", c.0))?;
                if child.parent != Some(n) {
                    return Err(format!("node {} has wrong parent link", c.0));
                }
                if !node.span.contains(&child.span) {
                    return Err(format!("span of {} escapes parent {}", c.0, n.0));
                }
                if child.span.start < prev_end {
                    return Err(format!("span of {} overlaps previous sibling", c.0));
                }
                prev_end = child.span.end;
                stack.push(c);
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(format!("node {i} unreachable from root"));
        }
        Ok(())
    }
}

pub struct Ancestors<'a> {
    ast: &'a NormalizedAst,
    next: Option<NodeId>,
}

impl Iterator for Ancestors<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let cur = self.next?;
        self.next = self.ast.parent(cur);
        Some(cur)
    }
}
