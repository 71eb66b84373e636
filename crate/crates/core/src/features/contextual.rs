//! Contextual features of the faulty statement: statement types around it,
//! the method it sits in, similar variables in scope, and unused or
//! unassigned variables in its class and method.

use std::collections::{BTreeMap, HashSet};

use super::schema::{
    METHOD_FEATURES, NONE, OTHER, SIMILARITY_FEATURES, TYPE_FEATURES, USAGE_FEATURES,
};
use super::{
    assignment_target, call_receiver, condition_of, contains_null_check, is_type_qualifier,
    is_variable_use, DiffView, RawValue,
};
use crate::ast::{
    declared_type, statement_context, NodeId, NodeKind, NormalizedAst, ScopeIndex, TypeCategory,
};
use crate::diff::EditScript;

/// Library calls that commonly throw on bad input.
const EXCEPTION_PRONE_CALLS: &[&str] = &[
    "parseInt",
    "parseLong",
    "parseDouble",
    "parseFloat",
    "valueOf",
    "charAt",
    "substring",
    "get",
    "next",
    "remove",
    "pop",
    "element",
    "getFirst",
    "getLast",
    "forName",
    "newInstance",
];

const RUNTIME_EXCEPTIONS: &[&str] = &[
    "RuntimeException",
    "IllegalArgumentException",
    "IllegalStateException",
    "NullPointerException",
    "IndexOutOfBoundsException",
    "ArrayIndexOutOfBoundsException",
    "StringIndexOutOfBoundsException",
    "ArithmeticException",
    "ClassCastException",
    "UnsupportedOperationException",
    "ConcurrentModificationException",
    "NumberFormatException",
    "NoSuchElementException",
    "ArrayStoreException",
    "NegativeArraySizeException",
    "DateTimeException",
    "UncheckedIOException",
];

const CHECKED_EXCEPTIONS: &[&str] = &[
    "Exception",
    "IOException",
    "FileNotFoundException",
    "InterruptedException",
    "CloneNotSupportedException",
    "ClassNotFoundException",
    "ReflectiveOperationException",
    "NoSuchMethodException",
    "NoSuchFieldException",
    "IllegalAccessException",
    "InstantiationException",
    "ParseException",
    "SQLException",
    "TimeoutException",
    "ExecutionException",
    "URISyntaxException",
    "GeneralSecurityException",
];

pub fn extract_contextual(
    buggy: &NormalizedAst,
    patched: &NormalizedAst,
    script: &EditScript,
) -> BTreeMap<String, RawValue> {
    extract(&DiffView::new(buggy, patched, script))
}

pub(crate) fn extract(view: &DiffView) -> BTreeMap<String, RawValue> {
    let mut out = BTreeMap::new();
    let Some((side, stmt)) = view.faulty() else {
        for name in TYPE_FEATURES {
            out.insert(name.to_string(), RawValue::Text(NONE.to_string()));
        }
        for name in METHOD_FEATURES.iter().chain(&SIMILARITY_FEATURES).chain(&USAGE_FEATURES) {
            out.insert(name.to_string(), RawValue::Flag(false));
        }
        return out;
    };
    let ast = view.ast(side);
    let index = view.index(side);
    let texts = type_features(ast, stmt);
    for (name, value) in TYPE_FEATURES.iter().zip(texts) {
        out.insert(name.to_string(), RawValue::Text(value));
    }
    let flags = method_features(ast, stmt)
        .into_iter()
        .zip(METHOD_FEATURES)
        .chain(similarity_features(ast, index, stmt).into_iter().zip(SIMILARITY_FEATURES))
        .chain(usage_features(ast, index, stmt).into_iter().zip(USAGE_FEATURES));
    for (value, name) in flags {
        out.insert(name.to_string(), RawValue::Flag(value));
    }
    out
}

fn kind_text(ast: &NormalizedAst, id: Option<NodeId>) -> String {
    id.and_then(|n| ast.statement_kind(n))
        .map_or(NONE.to_string(), |k| k.as_str().to_string())
}

fn type_features(ast: &NormalizedAst, stmt: NodeId) -> Vec<String> {
    let ctx = statement_context(ast, stmt, 3).unwrap_or_default();
    let before = |i: usize| ctx.former.len().checked_sub(i).map(|j| ctx.former[j]);
    let after = |i: usize| ctx.latter.get(i - 1).copied();
    vec![
        kind_text(ast, Some(stmt)),
        kind_text(ast, ast.parent_anchor(stmt)),
        kind_text(ast, before(1)),
        kind_text(ast, before(2)),
        kind_text(ast, before(3)),
        kind_text(ast, after(1)),
        kind_text(ast, after(2)),
        kind_text(ast, after(3)),
        class_exception_type(ast, stmt).to_string(),
    ]
}

fn exception_category(type_text: &str) -> &'static str {
    let base = type_text.split('<').next().unwrap_or(type_text);
    let simple = base.rsplit('.').next().unwrap_or(base);
    if simple == "Throwable" {
        "throwable"
    } else if RUNTIME_EXCEPTIONS.contains(&simple) {
        "runtime"
    } else if CHECKED_EXCEPTIONS.contains(&simple) {
        "checked"
    } else if simple.ends_with("Error") {
        "error"
    } else {
        OTHER
    }
}

fn is_exception_name(type_text: &str) -> bool {
    ["Exception", "Error", "Throwable"].iter().any(|s| type_text.ends_with(s))
}

/// The class's own exception supertype if it is one; otherwise the first
/// exception it throws or declares, in source order.
fn class_exception_type(ast: &NormalizedAst, stmt: NodeId) -> &'static str {
    let class = if ast.kind(stmt).is_type_declaration() { Some(stmt) } else { ast.enclosing_type(stmt) };
    let Some(class) = class else { return NONE };
    let supertype = ast
        .child_of_kind(class, NodeKind::Extends)
        .and_then(|e| ast.child_of_kind(e, NodeKind::Type))
        .map(|t| ast.label(t))
        .filter(|t| is_exception_name(t));
    if let Some(t) = supertype {
        return exception_category(t);
    }
    for n in ast.subtree(class) {
        let thrown = match ast.kind(n) {
            NodeKind::Throws => ast.child_of_kind(n, NodeKind::Type),
            NodeKind::Throw => ast
                .children(n)
                .first()
                .filter(|&&e| ast.kind(e) == NodeKind::NewObject)
                .and_then(|&e| ast.child_of_kind(e, NodeKind::Type)),
            _ => None,
        };
        if let Some(t) = thrown {
            return exception_category(ast.label(t));
        }
    }
    NONE
}

fn calls_in(ast: &NormalizedAst, stmt: NodeId) -> Vec<NodeId> {
    ast.subtree(stmt).into_iter().filter(|&n| ast.kind(n) == NodeKind::MethodCall).collect()
}

/// Conditions guarding `stmt`: those of enclosing conditionals and loops,
/// plus earlier `if` statements in the same block that exit early.
fn guards(ast: &NormalizedAst, stmt: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut child = stmt;
    for anc in ast.ancestors(stmt) {
        if ast.kind(anc).is_callable_declaration() || ast.kind(anc).is_type_declaration() {
            break;
        }
        if let Some(c) = condition_of(ast, anc).filter(|&c| c != child) {
            out.push(c);
        }
        if ast.kind(anc).is_statement_list() {
            for &sib in ast.children(anc).iter().take_while(|&&s| s != child) {
                if ast.kind(sib) == NodeKind::If && exits_early(ast, sib) {
                    out.extend(condition_of(ast, sib));
                }
            }
        }
        child = anc;
    }
    out
}

fn exits_early(ast: &NormalizedAst, if_node: NodeId) -> bool {
    ast.children(if_node).get(1).is_some_and(|&then| {
        super::branch_statements(ast, then)
            .last()
            .is_some_and(|&s| matches!(ast.kind(s), NodeKind::Return | NodeKind::Throw | NodeKind::Continue | NodeKind::Break))
    })
}

fn method_features(ast: &NormalizedAst, stmt: NodeId) -> [bool; 7] {
    let calls = calls_in(ast, stmt);
    let has_calls = !calls.is_empty();
    let guards = guards(ast, stmt);
    let callable = if ast.kind(stmt).is_callable_declaration() { Some(stmt) } else { ast.enclosing_callable(stmt) };

    let null_guard = has_calls && guards.iter().any(|&g| contains_null_check(ast, g));
    let normal_guard = has_calls && guards.iter().any(|&g| !contains_null_check(ast, g));
    let in_try = has_calls && {
        let mut child = stmt;
        ast.ancestors(stmt).any(|anc| {
            let hit = ast.kind(anc) == NodeKind::Try && ast.child_of_kind(anc, NodeKind::Block) == Some(child);
            child = anc;
            hit
        })
    };
    let synchronized = callable.is_some_and(|c| ast.has_modifier(c, "synchronized"))
        || ast.ancestors(stmt).any(|a| ast.kind(a) == NodeKind::Synchronized);
    let objective = calls
        .iter()
        .any(|&c| call_receiver(ast, c).is_some_and(|r| !is_type_qualifier(ast, r)));
    let throws = callable.is_some_and(|c| ast.child_of_kind(c, NodeKind::Throws).is_some());
    let throwing_methods: HashSet<&str> = ast
        .preorder()
        .into_iter()
        .filter(|&n| ast.kind(n).is_callable_declaration() && ast.child_of_kind(n, NodeKind::Throws).is_some())
        .filter_map(|n| ast.decl_name(n))
        .collect();
    let prone = calls.iter().any(|&c| {
        ast.child_of_kind(c, NodeKind::MethodName).is_some_and(|m| {
            let name = ast.label(m);
            throwing_methods.contains(name) || EXCEPTION_PRONE_CALLS.contains(&name)
        })
    });
    [null_guard, in_try, synchronized, objective, throws, normal_guard, prone]
}

/// Variable declarations (their `DeclName`s) visible from `stmt`: locals
/// and parameters of the enclosing callable plus fields of the class.
fn visible_declarations(ast: &NormalizedAst, stmt: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    if let Some(callable) = ast.enclosing_callable(stmt).or(Some(stmt).filter(|&s| ast.kind(s).is_callable_declaration())) {
        out.extend(ast.subtree(callable).into_iter().filter(|&n| {
            ast.kind(n) == NodeKind::DeclName
                && ast.parent(n).is_some_and(|p| matches!(ast.kind(p), NodeKind::VarDeclarator | NodeKind::Parameter))
        }));
    }
    if let Some(class) = ast.enclosing_type(stmt) {
        for &m in ast.children(class) {
            if ast.kind(m) == NodeKind::FieldDecl {
                out.extend(
                    ast.children(m)
                        .iter()
                        .filter_map(|&d| ast.child_of_kind(d, NodeKind::DeclName)),
                );
            }
        }
    }
    out
}

/// Guard conditions anywhere in the enclosing callable.
fn callable_conditions(ast: &NormalizedAst, stmt: NodeId) -> Vec<NodeId> {
    let Some(callable) = ast.enclosing_callable(stmt) else { return Vec::new() };
    ast.subtree(callable).into_iter().filter_map(|n| condition_of(ast, n)).collect()
}

fn mentions(ast: &NormalizedAst, root: NodeId, name: &str) -> bool {
    ast.subtree(root)
        .into_iter()
        .any(|n| is_variable_use(ast, n) && ast.label(n) == name)
}

fn similarity_features(ast: &NormalizedAst, index: &ScopeIndex, stmt: NodeId) -> [bool; 4] {
    let mut flags = [false; 4];
    let used: Vec<(String, String, TypeCategory)> = ast
        .subtree(stmt)
        .into_iter()
        .filter(|&n| is_variable_use(ast, n))
        .filter_map(|n| {
            let info = index.resolve(ast, n);
            let ty = declared_type(ast, info.declared_in?)?.to_string();
            Some((info.name, ty, info.category))
        })
        .collect();
    if used.is_empty() {
        return flags;
    }
    let conditions = callable_conditions(ast, stmt);
    for decl in visible_declarations(ast, stmt) {
        let name = ast.label(decl);
        let Some(ty) = declared_type(ast, decl) else { continue };
        let Some((_, _, category)) = used.iter().find(|(n, t, _)| t == ty && n != name) else { continue };
        let offset = if *category == TypeCategory::Primitive { 2 } else { 0 };
        for &c in conditions.iter().filter(|&&c| mentions(ast, c, name)) {
            if contains_null_check(ast, c) {
                flags[offset + 1] = true;
            } else {
                flags[offset] = true;
            }
        }
    }
    flags
}

/// Whether the declarator `decl` (a `DeclName`) carries an initializer.
fn initialised(ast: &NormalizedAst, decl: NodeId) -> bool {
    ast.parent(decl).is_some_and(|d| ast.kind(d) == NodeKind::VarDeclarator && ast.children(d).len() > 1)
}

fn usage_features(ast: &NormalizedAst, index: &ScopeIndex, stmt: NodeId) -> [bool; 6] {
    let mut flags = [false; 6];
    let class = ast.enclosing_type(stmt).or(Some(stmt).filter(|&s| ast.kind(s).is_type_declaration()));
    if let Some(class) = class {
        let nodes = ast.subtree(class);
        let assigned: HashSet<&str> =
            nodes.iter().filter_map(|&n| assignment_target(ast, n)).map(|t| ast.label(t)).collect();
        let read: HashSet<&str> = nodes
            .iter()
            .filter(|&&n| is_variable_use(ast, n) || ast.kind(n) == NodeKind::FieldName)
            .map(|&n| ast.label(n))
            .collect();
        for &m in ast.children(class).iter().filter(|&&m| ast.kind(m) == NodeKind::FieldDecl) {
            for decl in ast.children(m).iter().filter_map(|&d| ast.child_of_kind(d, NodeKind::DeclName)) {
                let name = ast.label(decl);
                flags[0] |= !initialised(ast, decl) && !assigned.contains(name);
                flags[1] |= !read.contains(name);
            }
        }
    }
    let callable = ast.enclosing_callable(stmt).or(Some(stmt).filter(|&s| ast.kind(s).is_callable_declaration()));
    if let Some(callable) = callable {
        let nodes = ast.subtree(callable);
        let assigned: HashSet<&str> =
            nodes.iter().filter_map(|&n| assignment_target(ast, n)).map(|t| ast.label(t)).collect();
        let read: HashSet<&str> =
            nodes.iter().filter(|&&n| is_variable_use(ast, n)).map(|&n| ast.label(n)).collect();
        let locals = nodes.iter().copied().filter(|&n| {
            ast.kind(n) == NodeKind::DeclName
                && ast.parent(n).and_then(|d| ast.parent(d)).is_some_and(|l| ast.kind(l) == NodeKind::LocalVarDecl)
        });
        for decl in locals {
            let name = ast.label(decl);
            flags[2] |= !initialised(ast, decl) && !assigned.contains(name);
            flags[3] |= !read.contains(name);
        }
    }
    for n in ast.subtree(stmt) {
        let value = match ast.kind(n) {
            NodeKind::Assignment => ast.children(n).last().copied(),
            NodeKind::VarDeclarator if ast.children(n).len() > 1 => ast.children(n).last().copied(),
            _ => None,
        };
        let Some(value) = value else { continue };
        for v in ast.subtree(value).into_iter().filter(|&v| is_variable_use(ast, v)) {
            match index.resolve(ast, v).category {
                TypeCategory::Primitive => flags[5] = true,
                _ => flags[4] = true,
            }
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse_source;
    use crate::diff::diff;

    fn ctx(a: &str, b: &str) -> BTreeMap<String, RawValue> {
        let (x, y) = (parse_source(a, "java").unwrap(), parse_source(b, "java").unwrap());
        extract_contextual(&x, &y, &diff(&x, &y).unwrap())
    }

    fn text(m: &BTreeMap<String, RawValue>, k: &str) -> String {
        match &m[k] {
            RawValue::Text(t) => t.clone(),
            RawValue::Flag(_) => panic!("{k} is a flag"),
        }
    }

    fn flag(m: &BTreeMap<String, RawValue>, k: &str) -> bool {
        m[k] == RawValue::Flag(true)
    }

    #[test]
    fn first_statement_has_none_before() {
        let m = ctx(
            "class A { void f(int a) { a = 1; g(a); } }",
            "class A { void f(int a) { a = 2; g(a); } }",
        );
        assert_eq!(text(&m, "typeOfFaultyStatement"), "assignment");
        assert_eq!(text(&m, "typeOfFaultyStatementParent"), "method");
        for i in 1..=3 {
            assert_eq!(text(&m, &format!("typeOfFaultyStatementBefore{i}")), "none");
        }
        assert_eq!(text(&m, "typeOfFaultyStatementAfter1"), "invocation");
        assert_eq!(text(&m, "typeOfFaultyStatementAfter2"), "none");
        assert_eq!(text(&m, "faultyClassExceptionType"), "none");
    }

    #[test]
    fn unread_field() {
        let m = ctx(
            "class A { int unused; int n; void f() { n = 1; } }",
            "class A { int unused; int n; void f() { n = 2; } }",
        );
        assert!(flag(&m, "fieldNotUsed"));
        assert!(flag(&m, "fieldNotAssigned"));
        let m = ctx(
            "class A { int n; int f() { n = 1; return n; } }",
            "class A { int n; int f() { n = 2; return n; } }",
        );
        assert!(!flag(&m, "fieldNotUsed") && !flag(&m, "fieldNotAssigned"));
    }

    #[test]
    fn method_context() {
        let a = "class A { synchronized void f(String s) throws IOException { if (s != null) { try { s.trim(); } catch (Exception e) {} } } }";
        let b = "class A { synchronized void f(String s) throws IOException { if (s != null) { try { s.strip(); } catch (Exception e) {} } } }";
        let m = ctx(a, b);
        for k in ["methodCallWithNullGuard", "methodCallWithTryCatch", "inSynchronizedMethod", "hasObjectiveMethodCall", "methodThrowsException"] {
            assert!(flag(&m, k), "{k}");
        }
        assert!(!flag(&m, "methodCallWithNormalGuard"));
        assert_eq!(text(&m, "faultyClassExceptionType"), "checked");
    }

    #[test]
    fn similar_guarded_variable() {
        let a = "class A { void f(String s, String t) { if (t != null) { } s.trim(); } }";
        let b = "class A { void f(String s, String t) { if (t != null) { } s.strip(); } }";
        let m = ctx(a, b);
        assert!(flag(&m, "similarObjectTypeWithNullGuard"));
        assert!(!flag(&m, "similarObjectTypeWithNormalGuard"));
        let a = "class A { void f(int i, int j) { while (j < 3) { j++; } g(i); } }";
        let b = "class A { void f(int i, int j) { while (j < 3) { j++; } h(i); } }";
        let m = ctx(a, b);
        assert!(flag(&m, "similarPrimitiveTypeWithNormalGuard"));
    }

    #[test]
    fn exception_categories() {
        assert_eq!(exception_category("IllegalStateException"), "runtime");
        assert_eq!(exception_category("java.io.IOException"), "checked");
        assert_eq!(exception_category("AssertionError"), "error");
        assert_eq!(exception_category("Throwable"), "throwable");
        assert_eq!(exception_category("MyException"), "other");
    }
}
