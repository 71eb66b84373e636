//! Random labelled trees for differencing tests.

use std::path::Path;

use patchguard::ast::{NodeKind, NormalizedAst, Span, TreeSpec};

pub const KINDS: &[NodeKind] = &[
    NodeKind::Block,
    NodeKind::ExprStmt,
    NodeKind::If,
    NodeKind::Binary,
    NodeKind::MethodCall,
];
pub const LEAF_KINDS: &[NodeKind] = &[NodeKind::Name, NodeKind::Literal, NodeKind::Operator];
pub const LABELS: &[&str] = &["a", "b", "c", "0", "1", "+"];

/// Node i > 0 hangs under node `parent % i`; kinds and labels are drawn from
/// small pools so that repeated subtrees are common.
pub fn build(nodes: &[(usize, usize, usize)]) -> NormalizedAst {
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, &(p, _, _)) in nodes.iter().enumerate().skip(1) {
        children[p % i].push(i);
    }
    fn spec(i: usize, nodes: &[(usize, usize, usize)], children: &[Vec<usize>], next: &mut usize) -> TreeSpec {
        let start = *next;
        *next += 1;
        let kids: Vec<TreeSpec> = children[i].iter().map(|&c| spec(c, nodes, children, next)).collect();
        let (_, k, l) = nodes[i];
        let (kind, label) = if kids.is_empty() {
            (LEAF_KINDS[k % LEAF_KINDS.len()], LABELS[l % LABELS.len()])
        } else {
            (KINDS[k % KINDS.len()], "")
        };
        TreeSpec::new(kind, label, Span::new(start, *next)).with_children(kids)
    }
    let mut next = 0;
    NormalizedAst::from_spec(spec(0, nodes, &children, &mut next), "java", Path::new(""))
}
