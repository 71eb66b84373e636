//! Lexical variable resolution over a single file. No classpath: anything
//! not declared in the file resolves to a global object.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{NodeId, NodeKind, NormalizedAst};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableScope {
    Local,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeCategory {
    Primitive,
    Object,
    Abstract,
    Enumeration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableInfo {
    pub name: String,
    pub scope: VariableScope,
    pub category: TypeCategory,
    /// The `DeclName` leaf of the declaration, when found in this file.
    pub declared_in: Option<NodeId>,
}

impl VariableInfo {
    fn unresolved(name: &str) -> Self {
        VariableInfo {
            name: name.to_string(),
            scope: VariableScope::Global,
            category: TypeCategory::Object,
            declared_in: None,
        }
    }
}

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double"];

/// Per-file facts reused across many lookups: locally declared types and
/// enum constants.
#[derive(Debug, Clone, Default)]
pub struct ScopeIndex {
    types: HashMap<String, TypeCategory>,
    enum_constants: HashMap<String, NodeId>,
}

impl ScopeIndex {
    pub fn new(ast: &NormalizedAst) -> Self {
        let mut index = ScopeIndex::default();
        for id in ast.preorder() {
            let kind = ast.kind(id);
            if kind.is_type_declaration() {
                let Some(name) = ast.decl_name(id) else { continue };
                let category = match kind {
                    NodeKind::InterfaceDecl => TypeCategory::Abstract,
                    NodeKind::EnumDecl => TypeCategory::Enumeration,
                    NodeKind::ClassDecl if ast.has_modifier(id, "abstract") => TypeCategory::Abstract,
                    _ => TypeCategory::Object,
                };
                index.types.insert(name.to_string(), category);
            } else if kind == NodeKind::EnumConstant {
                if let Some(n) = ast.child_of_kind(id, NodeKind::DeclName) {
                    index.enum_constants.entry(ast.label(n).to_string()).or_insert(n);
                }
            }
        }
        index
    }

    pub fn category_of(&self, type_text: &str) -> TypeCategory {
        type_category(type_text, self)
    }

    pub fn resolve(&self, ast: &NormalizedAst, ident: NodeId) -> VariableInfo {
        let name = ast.label(ident).to_string();
        match ast.kind(ident) {
            NodeKind::DeclName => return self.info_for_decl(ast, ident),
            NodeKind::FieldName => {
                // `this.x` is a field of the enclosing class; other qualifiers
                // need type information we do not have.
                let parent = ast.parent(ident);
                let qualifier = parent.and_then(|p| ast.children(p).first().copied());
                if qualifier.is_some_and(|q| ast.kind(q) == NodeKind::This) {
                    if let Some(decl) = self.find_field(ast, ident, &name) {
                        return self.info_for_decl(ast, decl);
                    }
                }
                return VariableInfo::unresolved(&name);
            }
            _ => {}
        }
        if let Some(decl) = self.find_lexical(ast, ident, &name) {
            return self.info_for_decl(ast, decl);
        }
        if let Some(&decl) = self.enum_constants.get(&name) {
            return VariableInfo {
                name,
                scope: VariableScope::Global,
                category: TypeCategory::Enumeration,
                declared_in: Some(decl),
            };
        }
        VariableInfo::unresolved(&name)
    }

    fn info_for_decl(&self, ast: &NormalizedAst, decl: NodeId) -> VariableInfo {
        let name = ast.label(decl).to_string();
        let holder = ast.parent(decl);
        let holder_kind = holder.map(|h| ast.kind(h));
        if holder_kind == Some(NodeKind::EnumConstant) {
            return VariableInfo {
                name,
                scope: VariableScope::Global,
                category: TypeCategory::Enumeration,
                declared_in: Some(decl),
            };
        }
        let declaration = declaration_of(ast, decl);
        let category = declared_type(ast, decl).map_or(TypeCategory::Object, |t| self.category_of(t));
        let scope = match declaration.map(|d| (ast.kind(d), d)) {
            Some((NodeKind::FieldDecl, _)) => VariableScope::Global,
            // record components are fields
            Some((NodeKind::Parameter, d))
                if ast
                    .parent(d)
                    .and_then(|p| ast.parent(p))
                    .is_some_and(|g| ast.kind(g) == NodeKind::RecordDecl) =>
            {
                VariableScope::Global
            }
            Some(_) => VariableScope::Local,
            None => VariableScope::Global,
        };
        VariableInfo { name, scope, category, declared_in: Some(decl) }
    }

    /// Innermost lexical declaration of `name` visible at `ident`.
    fn find_lexical(&self, ast: &NormalizedAst, ident: NodeId, name: &str) -> Option<NodeId> {
        let use_start = ast.node(ident).span.start;
        let mut child = ident;
        for anc in ast.ancestors(ident) {
            let kind = ast.kind(anc);
            let found = match kind {
                NodeKind::Block | NodeKind::SwitchCase => ast
                    .children(anc)
                    .iter()
                    .take_while(|&&c| c != child)
                    .chain(std::iter::once(&child))
                    .filter(|&&c| ast.kind(c) == NodeKind::LocalVarDecl)
                    .filter_map(|&c| declarator_named(ast, c, name))
                    .filter(|&d| ast.node(d).span.start < use_start)
                    .last(),
                NodeKind::For => ast
                    .child_of_kind(anc, NodeKind::ForInit)
                    .and_then(|init| {
                        ast.children(init)
                            .iter()
                            .filter(|&&c| ast.kind(c) == NodeKind::LocalVarDecl)
                            .find_map(|&c| declarator_named(ast, c, name))
                    }),
                NodeKind::ForEach | NodeKind::Catch => ast
                    .child_of_kind(anc, NodeKind::Parameter)
                    .and_then(|p| param_named(ast, p, name)),
                NodeKind::Try => ast.child_of_kind(anc, NodeKind::Resources).and_then(|r| {
                    ast.children(r)
                        .iter()
                        .filter(|&&c| ast.kind(c) == NodeKind::LocalVarDecl)
                        .find_map(|&c| declarator_named(ast, c, name))
                }),
                NodeKind::Lambda => ast.child_of_kind(anc, NodeKind::LambdaParams).and_then(|ps| {
                    ast.children(ps).iter().find_map(|&p| param_named(ast, p, name))
                }),
                NodeKind::MethodDecl | NodeKind::ConstructorDecl => {
                    ast.child_of_kind(anc, NodeKind::Parameters).and_then(|ps| {
                        ast.children(ps).iter().find_map(|&p| param_named(ast, p, name))
                    })
                }
                k if k.is_type_declaration() || k == NodeKind::ClassBody => {
                    type_member_named(ast, anc, name)
                }
                _ => None,
            };
            if found.is_some() {
                return found;
            }
            child = anc;
        }
        None
    }

    fn find_field(&self, ast: &NormalizedAst, ident: NodeId, name: &str) -> Option<NodeId> {
        ast.ancestors(ident)
            .filter(|&a| ast.kind(a).is_type_declaration() || ast.kind(a) == NodeKind::ClassBody)
            .find_map(|a| type_member_named(ast, a, name))
    }
}

/// Declaration holding a `DeclName`: the declarator's parent for variables,
/// the parameter itself for parameters.
fn declaration_of(ast: &NormalizedAst, decl: NodeId) -> Option<NodeId> {
    let holder = ast.parent(decl)?;
    match ast.kind(holder) {
        NodeKind::VarDeclarator => ast.parent(holder),
        _ => Some(holder),
    }
}

/// Declared type text of the variable whose `DeclName` is `decl`.
pub fn declared_type(ast: &NormalizedAst, decl: NodeId) -> Option<&str> {
    declaration_of(ast, decl)
        .and_then(|d| ast.child_of_kind(d, NodeKind::Type))
        .map(|t| ast.label(t))
}

fn declarator_named(ast: &NormalizedAst, decl: NodeId, name: &str) -> Option<NodeId> {
    ast.children(decl)
        .iter()
        .filter(|&&c| ast.kind(c) == NodeKind::VarDeclarator)
        .filter_map(|&c| ast.child_of_kind(c, NodeKind::DeclName))
        .find(|&n| ast.label(n) == name)
}

fn param_named(ast: &NormalizedAst, param: NodeId, name: &str) -> Option<NodeId> {
    ast.child_of_kind(param, NodeKind::DeclName).filter(|&n| ast.label(n) == name)
}

/// Field, record component or enum constant of a type body.
fn type_member_named(ast: &NormalizedAst, ty: NodeId, name: &str) -> Option<NodeId> {
    for &m in ast.children(ty) {
        let found = match ast.kind(m) {
            NodeKind::FieldDecl => declarator_named(ast, m, name),
            NodeKind::EnumConstant => param_named(ast, m, name),
            NodeKind::Parameters if ast.kind(ty) == NodeKind::RecordDecl => {
                ast.children(m).iter().find_map(|&p| param_named(ast, p, name))
            }
            _ => None,
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

pub fn resolve_variable(ast: &NormalizedAst, ident: NodeId) -> VariableInfo {
    ScopeIndex::new(ast).resolve(ast, ident)
}

/// Category of a declared type given the file's local type declarations.
pub fn type_category(type_text: &str, index: &ScopeIndex) -> TypeCategory {
    let text = type_text.trim();
    if text.ends_with(']') || text.ends_with("...") {
        return TypeCategory::Object;
    }
    if PRIMITIVES.contains(&text) {
        return TypeCategory::Primitive;
    }
    let base = text.split('<').next().unwrap_or(text);
    let simple = base.rsplit('.').next().unwrap_or(base);
    index.types.get(simple).copied().unwrap_or(TypeCategory::Object)
}
