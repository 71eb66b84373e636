//! Operator, variable, statement and AST-operation flags for the SRC,
//! FORMER and LATTER windows.

use std::collections::BTreeSet;

use super::schema::{self, window_feature, WINDOWS};
use super::{
    call_arguments, condition_of, is_variable_use, operands, DiffView, Side, LOGICAL_OPS,
};
use crate::ast::{statement_context, NodeId, NodeKind, NormalizedAst, ScopeIndex, TypeCategory, VariableScope};
use crate::diff::{EditOp, EditScript};

const CONTEXT_SIZE: usize = 3;
/// Operator, variable and statement flags: the part shared by all windows.
const NODE_FLAGS: usize = 40;

pub fn extract_code_description(
    buggy: &NormalizedAst,
    patched: &NormalizedAst,
    script: &EditScript,
) -> Vec<(String, bool)> {
    extract(&DiffView::new(buggy, patched, script))
}

pub(crate) fn extract(view: &DiffView) -> Vec<(String, bool)> {
    let mut src = [false; NODE_FLAGS];
    let mut former = [false; NODE_FLAGS];
    let mut latter = [false; NODE_FLAGS];
    for (side, stmts) in [(Side::Buggy, &view.src_stmts), (Side::Patched, &view.dst_stmts)] {
        let ast = view.ast(side);
        let index = view.index(side);
        for &s in stmts {
            merge(&mut src, node_flags(ast, index, &src_window(view, side, s)));
            let Ok(ctx) = statement_context(ast, s, CONTEXT_SIZE) else { continue };
            merge(&mut former, node_flags(ast, index, &subtrees(ast, &ctx.former)));
            merge(&mut latter, node_flags(ast, index, &subtrees(ast, &ctx.latter)));
        }
    }
    let ops = ast_operation_flags(view);
    let mut out = Vec::with_capacity(150);
    for (window, flags) in WINDOWS.iter().zip([&src, &former, &latter]) {
        let op_flags = if *window == "SRC" { ops } else { [false; 10] };
        out.extend(
            schema::code_description_names()
                .zip(flags.iter().chain(op_flags.iter()))
                .map(|(name, &v)| (window_feature(window, name), v)),
        );
    }
    out
}

fn merge(into: &mut [bool; NODE_FLAGS], from: [bool; NODE_FLAGS]) {
    for (a, b) in into.iter_mut().zip(from) {
        *a |= b;
    }
}

fn subtrees(ast: &NormalizedAst, roots: &[NodeId]) -> Vec<NodeId> {
    roots.iter().flat_map(|&r| ast.subtree(r)).collect()
}

/// Nodes of a changed statement, skipping nested statements (and nested
/// declarations) that no action touches.
fn src_window(view: &DiffView, side: Side, stmt: NodeId) -> Vec<NodeId> {
    let ast = view.ast(side);
    let mut out = Vec::new();
    let mut stack = vec![stmt];
    while let Some(n) = stack.pop() {
        if n != stmt && ast.is_anchor(n) && !view.touched(side, n) {
            continue;
        }
        out.push(n);
        stack.extend(ast.children(n).iter().rev().copied());
    }
    out
}

fn flag_index(name: &str) -> usize {
    schema::code_description_names()
        .position(|n| n == name)
        .unwrap_or_else(|| panic!("unknown code-description feature {name}"))
}

fn operator_feature(kind: NodeKind, op: &str) -> Option<&'static str> {
    let binary_like = matches!(kind, NodeKind::Binary | NodeKind::Assignment);
    let op = if kind == NodeKind::Assignment { op.strip_suffix('=').unwrap_or(op) } else { op };
    Some(match (binary_like, op) {
        (true, "+") => "opAdd",
        (true, "-") => "opSub",
        (true, "*") => "opMul",
        (true, "/") => "opDiv",
        (true, "%") => "opMod",
        (true, "==") => "opEqual",
        (true, "!=") => "opNotEqual",
        (true, "<") => "opLessThan",
        (true, "<=") => "opLessEqual",
        (true, ">") => "opGreaterThan",
        (true, ">=") => "opGreaterEqual",
        (true, "&" | "|" | "^" | "<<" | ">>" | ">>>") => "opBitwise",
        (false, "~") => "opBitwise",
        (false, "++" | "+") => "uopInc",
        (false, "--" | "-") => "uopDec",
        _ => return None,
    })
}

fn is_constant(ast: &NormalizedAst, id: NodeId) -> bool {
    match ast.kind(id) {
        NodeKind::Literal => true,
        NodeKind::Unary => {
            ast.operator_of(id).is_some_and(|op| op == "-" || op == "+")
                && operands(ast, id).all(|c| ast.kind(c) == NodeKind::Literal)
        }
        _ => false,
    }
}

fn is_zero(ast: &NormalizedAst, id: NodeId) -> bool {
    if ast.kind(id) != NodeKind::Literal {
        return false;
    }
    let text = ast.label(id).to_ascii_lowercase();
    let digits = text.trim_end_matches(['l', 'f', 'd']);
    let digits = digits.strip_prefix("0x").or_else(|| digits.strip_prefix("0b")).unwrap_or(digits);
    !digits.is_empty()
        && digits.chars().all(|c| c == '0' || c == '.' || c == '_')
        && digits.contains('0')
}

/// Value assigned by an assignment or initialised by a declarator.
fn assigned_value(ast: &NormalizedAst, id: NodeId) -> Option<NodeId> {
    match ast.kind(id) {
        NodeKind::Assignment if ast.operator_of(id) == Some("=") => ast.children(id).last().copied(),
        NodeKind::VarDeclarator => {
            let value = *ast.children(id).last()?;
            (ast.kind(value) != NodeKind::DeclName).then_some(value)
        }
        _ => None,
    }
}

fn is_parameter_decl(ast: &NormalizedAst, decl: NodeId) -> bool {
    ast.parent(decl).is_some_and(|p| ast.kind(p) == NodeKind::Parameter)
        && ast
            .parent(decl)
            .and_then(|p| ast.parent(p))
            .is_some_and(|pp| matches!(ast.kind(pp), NodeKind::Parameters | NodeKind::LambdaParams))
}

fn node_flags(ast: &NormalizedAst, index: &ScopeIndex, nodes: &[NodeId]) -> [bool; NODE_FLAGS] {
    let mut flags = [false; NODE_FLAGS];
    let mut set = |name: &str| flags[flag_index(name)] = true;
    for &n in nodes {
        let kind = ast.kind(n);
        if let Some(op) = ast.operator_of(n) {
            if let Some(name) = operator_feature(kind, op) {
                set(name);
            }
        }
        if is_variable_use(ast, n) || (kind == NodeKind::DeclName && ast.parent(n).is_some_and(|p| ast.kind(p) == NodeKind::VarDeclarator)) {
            let info = index.resolve(ast, n);
            set(match info.scope {
                VariableScope::Local => "localVar",
                VariableScope::Global => "globalVar",
            });
            match info.category {
                TypeCategory::Abstract => set("abstVar"),
                TypeCategory::Primitive => set("primVar"),
                TypeCategory::Enumeration => set("enum"),
                TypeCategory::Object => {}
            }
            if info.declared_in.is_some_and(|d| is_parameter_decl(ast, d)) {
                set("funcArgument");
            }
        }
        if kind == NodeKind::FieldName {
            let qualifier = ast.parent(n).and_then(|p| ast.children(p).first().copied());
            if qualifier.is_some_and(|q| {
                ast.kind(q) == NodeKind::Name && index.category_of(ast.label(q)) == TypeCategory::Enumeration
            }) {
                set("enum");
            }
        }
        if let Some(value) = assigned_value(ast, n) {
            if is_constant(ast, value) {
                set("assignConst");
            }
            if is_zero(ast, value) {
                set("assignZero");
            }
        }
        if kind == NodeKind::Assignment || super::assignment_target(ast, n).is_some() {
            set("assignLhs");
        }
        match kind {
            NodeKind::MethodCall => set("callee"),
            NodeKind::If | NodeKind::Conditional => set("stmtCond"),
            NodeKind::FieldAccess => set("memberAccess"),
            NodeKind::Return => set("stmtReturn"),
            NodeKind::Try | NodeKind::Catch | NodeKind::Finally => set("stmtTry"),
            NodeKind::Switch | NodeKind::SwitchExpr | NodeKind::SwitchCase | NodeKind::Yield => set("stmtBranch"),
            NodeKind::Break => set("stmtBreak"),
            NodeKind::Continue => set("stmtContinue"),
            NodeKind::Throw => set("stmtThrow"),
            NodeKind::NewObject | NodeKind::NewArray => set("stmtNew"),
            NodeKind::Cast => set("stmtCast"),
            NodeKind::LocalVarDecl => set("stmtDecl"),
            NodeKind::Literal => set("constant"),
            k if k.is_loop() => set("stmtLoop"),
            _ => {}
        }
        if !call_arguments(ast, n).is_empty() {
            set("callArgument");
        }
        match ast.statement_kind(n) {
            Some(crate::ast::StatementKind::Invocation) => set("stmtCall"),
            Some(crate::ast::StatementKind::Assignment) => set("stmtAssign"),
            _ => {}
        }
    }
    flags
}

/// Flags describing the script itself; only meaningful for SRC.
fn ast_operation_flags(view: &DiffView) -> [bool; 10] {
    let (b, p) = (view.buggy, view.patched);
    let mut flags = [false; 10];
    let mut set = |name: &str| flags[flag_index(name) - NODE_FLAGS] = true;

    let mut removed_stmt_parents = BTreeSet::new();
    for a in view.actions(EditOp::Del) {
        let s = a.src_node.expect("DEL has a source");
        if b.is_statement(s) {
            set("removeStmt");
            if let Some(parent) = b.parent(s).and_then(|q| view.matching.dst_of(q)) {
                removed_stmt_parents.insert(parent);
            }
        }
        let compound = b.kind(s) == NodeKind::Block
            || (b.is_statement(s) && b.children(s).iter().any(|&c| b.kind(c) == NodeKind::Block));
        if compound && b.subtree(s).iter().all(|&n| !view.is_kept_src(n)) {
            set("removeWholeBlock");
        }
        let enclosing_if = b.ancestors(s).find(|&x| b.kind(x) == NodeKind::If);
        if let Some(x) = enclosing_if.filter(|&x| view.is_kept_src(x)) {
            let in_cond = condition_of(b, x).is_some_and(|c| c == s || b.is_ancestor(c, s));
            if !in_cond && (b.is_statement(s) || b.kind(s) == NodeKind::Block) {
                set("removePartialIf");
            }
        }
    }
    for a in view.actions(EditOp::Add) {
        let d = a.dst_node.expect("ADD has a destination");
        if p.is_statement(d) {
            set("insertStmt");
            if p.parent(d).is_some_and(|q| removed_stmt_parents.contains(&q)) {
                set("replaceStmt");
            }
        }
        if matches!(p.kind(d), NodeKind::If | NodeKind::Conditional | NodeKind::Switch) {
            set("insertCond");
        }
        if p.kind(d) == NodeKind::Binary
            && p.operator_of(d).is_some_and(|op| LOGICAL_OPS.contains(&op))
            && in_kept_condition(view, Side::Patched, d)
        {
            set("insertCond");
        }
    }
    for a in view.actions(EditOp::Upd) {
        let s = a.src_node.expect("UPD has a source");
        if b.kind(s) == NodeKind::Literal {
            set("updateLiteral");
        } else {
            set("updateStmt");
        }
    }
    for a in view.actions(EditOp::Mov) {
        if b.is_statement(a.src_node.expect("MOV has a source")) {
            set("moveStmt");
        }
    }
    for a in &view.script.actions {
        let hit = a.src_node.is_some_and(|s| in_kept_condition(view, Side::Buggy, s))
            || a.dst_node.is_some_and(|d| in_kept_condition(view, Side::Patched, d));
        if hit {
            set("replaceCond");
        }
    }
    flags
}

/// Whether `id` lies inside the guard of a conditional or loop that exists
/// on both sides.
fn in_kept_condition(view: &DiffView, side: Side, id: NodeId) -> bool {
    let ast = view.ast(side);
    ast.ancestors(id).any(|x| {
        let kept = match side {
            Side::Buggy => view.is_kept_src(x),
            Side::Patched => view.is_kept_dst(x),
        };
        kept && condition_of(ast, x).is_some_and(|c| c == id || ast.is_ancestor(c, id))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse_source;
    use crate::diff::diff;

    fn flags(a: &str, b: &str) -> std::collections::HashMap<String, bool> {
        let (x, y) = (parse_source(a, "java").unwrap(), parse_source(b, "java").unwrap());
        extract_code_description(&x, &y, &diff(&x, &y).unwrap()).into_iter().collect()
    }

    #[test]
    fn empty_script_is_all_zero() {
        let src = "class A { void f() { int x = 0; } }";
        let f = flags(src, src);
        assert_eq!(f.len(), 150);
        assert!(f.values().all(|v| !v));
    }

    #[test]
    fn first_statement_has_empty_former() {
        let f = flags(
            "class A { void f(int a) { a = 1; g(a); h(); } }",
            "class A { void f(int a) { a = 2; g(a); h(); } }",
        );
        assert!(WINDOWS.len() == 3);
        assert!(f.iter().filter(|(k, _)| k.starts_with("FORMER_")).all(|(_, v)| !v));
        assert!(f["LATTER_callee"] && f["LATTER_stmtCall"] && f["LATTER_funcArgument"]);
        assert!(f["SRC_assignConst"] && f["SRC_updateLiteral"] && f["SRC_localVar"]);
        assert!(!f["LATTER_updateLiteral"]);
    }

    #[test]
    fn zero_assignment_and_condition_replacement() {
        let f = flags(
            "class A { int n; void f() { if (n > 1) { n = 1; } } }",
            "class A { int n; void f() { if (n >= 1) { n = 0; } } }",
        );
        assert!(f["SRC_assignZero"] && f["SRC_replaceCond"] && f["SRC_opGreaterEqual"]);
        assert!(f["SRC_globalVar"] && f["SRC_primVar"]);
    }

    #[test]
    fn zero_literals() {
        let ast = parse_source("class A { double x = 0.0; long y = 0L; int z = 10; int w = 0x0; }", "java").unwrap();
        let lits: Vec<bool> = ast
            .preorder()
            .into_iter()
            .filter(|&n| ast.kind(n) == NodeKind::Literal)
            .map(|n| is_zero(&ast, n))
            .collect();
        assert_eq!(lits, [true, true, false, true]);
    }
}
