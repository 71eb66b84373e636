use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! node_kinds {
    ($($variant:ident),* $(,)?) => {
        /// Language-neutral node kinds produced by every grammar adapter.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum NodeKind {
            $($variant),*
        }

        impl NodeKind {
            pub const ALL: &'static [NodeKind] = &[$(NodeKind::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(NodeKind::$variant => stringify!($variant)),*
                }
            }

            pub fn from_name(name: &str) -> Option<NodeKind> {
                match name {
                    $(stringify!($variant) => Some(NodeKind::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

node_kinds! {
    // declarations
    CompilationUnit,
    PackageDecl,
    ImportDecl,
    ClassDecl,
    InterfaceDecl,
    EnumDecl,
    RecordDecl,
    EnumConstant,
    FieldDecl,
    MethodDecl,
    ConstructorDecl,
    Initializer,
    Parameters,
    Parameter,
    Throws,
    Extends,
    Implements,
    TypeParameters,
    Modifier,
    Annotation,
    Type,
    DeclName,
    VarDeclarator,
    ClassBody,
    // statements
    Block,
    LocalVarDecl,
    ExprStmt,
    If,
    While,
    DoWhile,
    For,
    ForInit,
    ForUpdate,
    ForEach,
    Try,
    Resources,
    Catch,
    Finally,
    Switch,
    SwitchCase,
    CaseLabel,
    DefaultLabel,
    Return,
    Break,
    Continue,
    Throw,
    Synchronized,
    Labeled,
    Label,
    Empty,
    Assert,
    Yield,
    ExplicitCtorCall,
    // expressions
    Assignment,
    Binary,
    Unary,
    Postfix,
    Operator,
    Conditional,
    InstanceOf,
    MethodCall,
    MethodName,
    NewObject,
    NewArray,
    ArrayInit,
    ArrayAccess,
    FieldAccess,
    FieldName,
    Cast,
    Lambda,
    LambdaParams,
    MethodRef,
    Name,
    This,
    Super,
    ClassLiteral,
    Literal,
    TypeArguments,
    SwitchExpr,
}

impl NodeKind {
    pub fn is_type_declaration(self) -> bool {
        matches!(
            self,
            NodeKind::ClassDecl | NodeKind::InterfaceDecl | NodeKind::EnumDecl | NodeKind::RecordDecl
        )
    }

    pub fn is_callable_declaration(self) -> bool {
        matches!(self, NodeKind::MethodDecl | NodeKind::ConstructorDecl)
    }

    pub fn is_loop(self) -> bool {
        matches!(
            self,
            NodeKind::While | NodeKind::DoWhile | NodeKind::For | NodeKind::ForEach
        )
    }

    /// Kinds that are statements wherever they occur. `Block` is handled
    /// separately because its statement-ness depends on its parent.
    pub fn is_statement_kind(self) -> bool {
        matches!(
            self,
            NodeKind::LocalVarDecl
                | NodeKind::ExprStmt
                | NodeKind::If
                | NodeKind::While
                | NodeKind::DoWhile
                | NodeKind::For
                | NodeKind::ForEach
                | NodeKind::Try
                | NodeKind::Catch
                | NodeKind::Switch
                | NodeKind::SwitchCase
                | NodeKind::Return
                | NodeKind::Break
                | NodeKind::Continue
                | NodeKind::Throw
                | NodeKind::Synchronized
                | NodeKind::Labeled
                | NodeKind::Empty
                | NodeKind::Assert
                | NodeKind::Yield
                | NodeKind::ExplicitCtorCall
        )
    }

    /// Kinds that may legitimately be childless and unlabelled: empty
    /// containers and keyword-only statements.
    pub fn is_placeholder(self) -> bool {
        matches!(
            self,
            NodeKind::CompilationUnit
                | NodeKind::Parameters
                | NodeKind::Block
                | NodeKind::ClassBody
                | NodeKind::ArrayInit
                | NodeKind::LambdaParams
                | NodeKind::TypeArguments
                | NodeKind::ForInit
                | NodeKind::ForUpdate
                | NodeKind::Resources
                | NodeKind::DefaultLabel
                | NodeKind::Return
                | NodeKind::Break
                | NodeKind::Continue
                | NodeKind::Empty
                | NodeKind::This
                | NodeKind::Super
        )
    }

    /// Containers whose children form an ordered statement list.
    pub fn is_statement_list(self) -> bool {
        matches!(self, NodeKind::Block | NodeKind::SwitchCase)
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Statement categories used by the contextual type features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatementKind {
    Assignment,
    Conditional,
    Loop,
    Try,
    Catch,
    Return,
    Invocation,
    Case,
    Break,
    Continue,
    Throw,
    Declaration,
    Block,
    Method,
    Class,
    Constructor,
    Synchronized,
    Other,
}

impl StatementKind {
    pub const ALL: [StatementKind; 18] = [
        StatementKind::Assignment,
        StatementKind::Conditional,
        StatementKind::Loop,
        StatementKind::Try,
        StatementKind::Catch,
        StatementKind::Return,
        StatementKind::Invocation,
        StatementKind::Case,
        StatementKind::Break,
        StatementKind::Continue,
        StatementKind::Throw,
        StatementKind::Declaration,
        StatementKind::Block,
        StatementKind::Method,
        StatementKind::Class,
        StatementKind::Constructor,
        StatementKind::Synchronized,
        StatementKind::Other,
    ];

    /// Value used in feature vectors and one-hot column names.
    pub fn as_str(self) -> &'static str {
        match self {
            StatementKind::Assignment => "assignment",
            StatementKind::Conditional => "conditional",
            StatementKind::Loop => "loop",
            StatementKind::Try => "try",
            StatementKind::Catch => "catch",
            StatementKind::Return => "return",
            StatementKind::Invocation => "invocation",
            StatementKind::Case => "case",
            StatementKind::Break => "break",
            StatementKind::Continue => "continue",
            StatementKind::Throw => "throw",
            StatementKind::Declaration => "declaration",
            StatementKind::Block => "block",
            StatementKind::Method => "method",
            StatementKind::Class => "class",
            StatementKind::Constructor => "constructor",
            StatementKind::Synchronized => "synchronized",
            StatementKind::Other => "other",
        }
    }
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
