//! Structural detectors for the 26 repair patterns. Each detector is a
//! predicate over the edit script and the matching between the two trees.

use std::collections::HashMap;

use super::schema::PATTERN_FEATURES;
use super::{
    branch_statements, branches_of, call_arguments, null_comparison, operands, DiffView,
    ARITHMETIC_OPS, LOGICAL_OPS, RELATIONAL_OPS,
};
use crate::ast::{NodeId, NodeKind, NormalizedAst};
use crate::diff::{EditOp, EditScript};

pub fn extract_repair_patterns(
    buggy: &NormalizedAst,
    patched: &NormalizedAst,
    script: &EditScript,
) -> Vec<(String, bool)> {
    PATTERN_FEATURES
        .iter()
        .map(|n| n.to_string())
        .zip(extract(&DiffView::new(buggy, patched, script)))
        .collect()
}

pub(crate) fn extract(view: &DiffView) -> Vec<bool> {
    let detectors: [fn(&DiffView) -> bool; 25] = [
        wraps_if,
        wraps_else,
        wraps_loop,
        wraps_try_catch,
        unwrap_try_catch,
        wraps_if_else,
        unwrap_if_else,
        wraps_method,
        unwrap_method,
        exp_logic_expand,
        exp_arith_mod,
        exp_logic_reduce,
        exp_logic_mod,
        cond_block_others_add,
        cond_block_rem,
        cond_block_exc_add,
        cond_block_ret_add,
        miss_null_check_p,
        miss_null_check_n,
        code_move,
        copy_paste,
        wrong_var_ref,
        wrong_method_ref,
        single_line,
        const_change,
    ];
    let mut out: Vec<bool> = detectors.iter().map(|d| d(view)).collect();
    let classified = out.iter().any(|&b| b);
    out.push(!classified);
    out
}

/// Patched nodes inserted by the script.
fn added<'a>(view: &'a DiffView) -> impl Iterator<Item = NodeId> + 'a {
    view.actions(EditOp::Add).filter_map(|a| a.dst_node)
}

/// Buggy nodes removed by the script.
fn deleted<'a>(view: &'a DiffView) -> impl Iterator<Item = NodeId> + 'a {
    view.actions(EditOp::Del).filter_map(|a| a.src_node)
}

/// Whether a pre-existing statement sits somewhere under `root` (patched).
fn holds_kept_statement(view: &DiffView, root: NodeId) -> bool {
    let p = view.patched;
    p.subtree(root).into_iter().any(|n| p.is_statement(n) && view.is_kept_dst(n))
}

/// Whether a statement under `root` (buggy) survives the patch.
fn releases_kept_statement(view: &DiffView, root: NodeId) -> bool {
    let b = view.buggy;
    b.subtree(root).into_iter().any(|n| b.is_statement(n) && view.is_kept_src(n))
}

fn added_ifs<'a>(view: &'a DiffView) -> impl Iterator<Item = NodeId> + 'a {
    added(view).filter(|&d| view.patched.kind(d) == NodeKind::If)
}

fn wraps_if(view: &DiffView) -> bool {
    let p = view.patched;
    added_ifs(view).any(|x| {
        let branches = branches_of(p, x);
        branches.len() == 1 && holds_kept_statement(view, branches[0])
    })
}

fn wraps_else(view: &DiffView) -> bool {
    let p = view.patched;
    added_ifs(view).any(|x| match branches_of(p, x) {
        [then, els] => !holds_kept_statement(view, *then) && holds_kept_statement(view, *els),
        _ => false,
    })
}

fn wraps_if_else(view: &DiffView) -> bool {
    let p = view.patched;
    added(view).any(|x| match (p.kind(x), branches_of(p, x)) {
        (NodeKind::If, [then, _]) => holds_kept_statement(view, *then),
        (NodeKind::Conditional, arms) => arms.iter().any(|&a| view.is_kept_dst(a)),
        _ => false,
    })
}

fn unwrap_if_else(view: &DiffView) -> bool {
    let b = view.buggy;
    deleted(view).any(|x| match b.kind(x) {
        NodeKind::If => branches_of(b, x).iter().any(|&br| releases_kept_statement(view, br)),
        NodeKind::Conditional => branches_of(b, x).iter().any(|&a| view.is_kept_src(a)),
        _ => false,
    })
}

fn body_blocks(ast: &NormalizedAst, id: NodeId) -> Vec<NodeId> {
    ast.children(id)
        .iter()
        .copied()
        .filter(|&c| ast.kind(c) == NodeKind::Block || ast.is_statement(c))
        .collect()
}

fn wraps_loop(view: &DiffView) -> bool {
    let p = view.patched;
    added(view)
        .filter(|&x| p.kind(x).is_loop())
        .any(|x| body_blocks(p, x).into_iter().any(|blk| holds_kept_statement(view, blk)))
}

fn wraps_try_catch(view: &DiffView) -> bool {
    let p = view.patched;
    added(view).filter(|&x| p.kind(x) == NodeKind::Try).any(|x| {
        p.child_of_kind(x, NodeKind::Block).is_some_and(|blk| holds_kept_statement(view, blk))
    })
}

fn unwrap_try_catch(view: &DiffView) -> bool {
    let b = view.buggy;
    deleted(view).filter(|&x| b.kind(x) == NodeKind::Try).any(|x| {
        b.child_of_kind(x, NodeKind::Block).is_some_and(|blk| releases_kept_statement(view, blk))
    })
}

fn wraps_method(view: &DiffView) -> bool {
    let p = view.patched;
    added(view)
        .filter(|&x| p.kind(x) == NodeKind::MethodCall)
        .any(|x| call_arguments(p, x).into_iter().any(|a| view.is_kept_dst(a)))
}

fn unwrap_method(view: &DiffView) -> bool {
    let b = view.buggy;
    deleted(view)
        .filter(|&x| b.kind(x) == NodeKind::MethodCall)
        .any(|x| call_arguments(b, x).into_iter().any(|a| view.is_kept_src(a)))
}

fn has_op(ast: &NormalizedAst, id: NodeId, ops: &[&str]) -> bool {
    ast.kind(id) == NodeKind::Binary && ast.operator_of(id).is_some_and(|op| ops.contains(&op))
}

fn exp_logic_expand(view: &DiffView) -> bool {
    let p = view.patched;
    added(view).any(|x| has_op(p, x, &LOGICAL_OPS) && operands(p, x).any(|c| view.is_kept_dst(c)))
}

fn exp_logic_reduce(view: &DiffView) -> bool {
    let b = view.buggy;
    deleted(view).any(|x| has_op(b, x, &LOGICAL_OPS) && operands(b, x).any(|c| view.is_kept_src(c)))
}

/// Operator token updates, as (old, new).
fn operator_updates<'a>(view: &'a DiffView) -> impl Iterator<Item = (&'a str, &'a str)> + 'a {
    view.actions(EditOp::Upd).filter_map(|a| {
        let s = a.src_node?;
        (view.buggy.kind(s) == NodeKind::Operator)
            .then(|| (view.buggy.label(s), a.label.as_deref().unwrap_or("")))
    })
}

fn exp_logic_mod(view: &DiffView) -> bool {
    let logical = |op: &str| LOGICAL_OPS.contains(&op) || RELATIONAL_OPS.contains(&op) || op == "!";
    let negation_toggled = |ast: &NormalizedAst, x: NodeId, kept: &dyn Fn(NodeId) -> bool| {
        ast.kind(x) == NodeKind::Unary && ast.operator_of(x) == Some("!") && operands(ast, x).any(kept)
    };
    operator_updates(view).any(|(old, new)| logical(old) || logical(new))
        || added(view).any(|x| negation_toggled(view.patched, x, &|c| view.is_kept_dst(c)))
        || deleted(view).any(|x| negation_toggled(view.buggy, x, &|c| view.is_kept_src(c)))
}

fn exp_arith_mod(view: &DiffView) -> bool {
    operator_updates(view).any(|(old, new)| ARITHMETIC_OPS.contains(&old) || ARITHMETIC_OPS.contains(&new))
        || added(view).any(|x| {
            has_op(view.patched, x, &ARITHMETIC_OPS) && operands(view.patched, x).any(|c| view.is_kept_dst(c))
        })
        || deleted(view).any(|x| {
            has_op(view.buggy, x, &ARITHMETIC_OPS) && operands(view.buggy, x).any(|c| view.is_kept_src(c))
        })
}

/// Statements directly inside the branches of an inserted `if`.
fn added_if_statements(view: &DiffView) -> Vec<NodeId> {
    let p = view.patched;
    added_ifs(view)
        .flat_map(|x| branches_of(p, x).to_vec())
        .flat_map(|br| branch_statements(p, br))
        .collect()
}

fn cond_block_others_add(view: &DiffView) -> bool {
    let p = view.patched;
    added_if_statements(view)
        .into_iter()
        .any(|s| !matches!(p.kind(s), NodeKind::Return | NodeKind::Throw))
}

fn cond_block_ret_add(view: &DiffView) -> bool {
    let p = view.patched;
    added_if_statements(view)
        .into_iter()
        .any(|s| p.kind(s) == NodeKind::Return && view.is_added(s))
}

fn cond_block_exc_add(view: &DiffView) -> bool {
    let p = view.patched;
    added_if_statements(view)
        .into_iter()
        .any(|s| p.kind(s) == NodeKind::Throw && view.is_added(s))
}

fn cond_block_rem(view: &DiffView) -> bool {
    deleted(view).any(|x| view.buggy.kind(x) == NodeKind::If)
}

fn miss_null_check_p(view: &DiffView) -> bool {
    added(view).any(|x| null_comparison(view.patched, x) == Some("=="))
}

fn miss_null_check_n(view: &DiffView) -> bool {
    added(view).any(|x| null_comparison(view.patched, x) == Some("!="))
}

/// A statement relocated into code that already existed (moves caused by
/// wrapping land under an inserted parent and do not count).
fn code_move(view: &DiffView) -> bool {
    view.actions(EditOp::Mov).any(|a| {
        let (Some(s), Some(d)) = (a.src_node, a.dst_node) else { return false };
        view.buggy.is_statement(s) && view.patched.parent(d).is_some_and(|q| view.is_kept_dst(q))
    })
}

/// The same change made in two places: two isomorphic inserted statement
/// subtrees, or two identical label updates on different statements.
fn copy_paste(view: &DiffView) -> bool {
    let p = view.patched;
    let roots: Vec<NodeId> = added(view)
        .filter(|&d| p.is_statement(d) && p.parent(d).is_none_or(|q| !view.is_added(q)))
        .collect();
    for (i, &x) in roots.iter().enumerate() {
        if roots[i + 1..].iter().any(|&y| p.isomorphic(x, p, y)) {
            return true;
        }
    }
    let mut seen: HashMap<(&str, &str), NodeId> = HashMap::new();
    for a in view.actions(EditOp::Upd) {
        let Some(s) = a.src_node else { continue };
        let Some(stmt) = view.buggy.nearest_anchor(s) else { continue };
        let key = (view.buggy.label(s), a.label.as_deref().unwrap_or(""));
        match seen.get(&key) {
            Some(&other) if other != stmt => return true,
            _ => {
                seen.insert(key, stmt);
            }
        }
    }
    false
}

/// A replaced leaf: either updated in place, or deleted and re-inserted
/// at the same position under the same parent.
fn leaf_replaced(view: &DiffView, kinds: &[NodeKind]) -> bool {
    let (b, p) = (view.buggy, view.patched);
    let updated = view
        .actions(EditOp::Upd)
        .any(|a| a.src_node.is_some_and(|s| kinds.contains(&b.kind(s))));
    updated
        || deleted(view).filter(|&s| kinds.contains(&b.kind(s))).any(|s| {
            let (Some(parent), Some(pos)) = (b.parent(s), b.position_in_parent(s)) else { return false };
            let Some(dst_parent) = view.matching.dst_of(parent) else { return false };
            p.children(dst_parent)
                .get(pos)
                .is_some_and(|&d| view.is_added(d) && kinds.contains(&p.kind(d)))
        })
}

fn wrong_var_ref(view: &DiffView) -> bool {
    leaf_replaced(view, &[NodeKind::Name, NodeKind::FieldName])
}

fn wrong_method_ref(view: &DiffView) -> bool {
    leaf_replaced(view, &[NodeKind::MethodName])
}

fn const_change(view: &DiffView) -> bool {
    leaf_replaced(view, &[NodeKind::Literal])
}

/// Every touched node on each side lies on one and the same line.
fn single_line(view: &DiffView) -> bool {
    if view.script.is_empty() {
        return false;
    }
    let lines = |ast: &NormalizedAst, ids: &mut dyn Iterator<Item = NodeId>| -> Option<Vec<usize>> {
        let mut out = Vec::new();
        for id in ids {
            let span = ast.node(id).span;
            out.push(ast.line_of(span.start)?);
            out.push(ast.line_of(span.end.saturating_sub(1).max(span.start))?);
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    };
    let src = lines(view.buggy, &mut view.script.actions.iter().filter_map(|a| a.src_node));
    let dst = lines(view.patched, &mut view.script.actions.iter().filter_map(|a| a.dst_node));
    matches!((src, dst), (Some(s), Some(d)) if s.len() <= 1 && d.len() <= 1)
}
