//! Feature names, groups and one-hot vocabularies, versioned together.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ast::StatementKind;

pub const SCHEMA_VERSION: &str = "1.0.0";

pub const OPERATOR_FEATURES: [&str; 14] = [
    "opAdd",
    "opSub",
    "opMul",
    "opDiv",
    "opMod",
    "opEqual",
    "opNotEqual",
    "opLessThan",
    "opLessEqual",
    "opGreaterThan",
    "opGreaterEqual",
    "uopInc",
    "uopDec",
    "opBitwise",
];

pub const VARIABLE_FEATURES: [&str; 5] = ["localVar", "globalVar", "abstVar", "primVar", "enum"];

pub const STATEMENT_FEATURES: [&str; 21] = [
    "assignConst",
    "assignLhs",
    "assignZero",
    "callee",
    "callArgument",
    "stmtCond",
    "stmtCall",
    "stmtLoop",
    "memberAccess",
    "funcArgument",
    "stmtAssign",
    "stmtReturn",
    "stmtTry",
    "stmtBranch",
    "stmtBreak",
    "stmtContinue",
    "stmtThrow",
    "stmtNew",
    "stmtCast",
    "stmtDecl",
    "constant",
];

pub const AST_OP_FEATURES: [&str; 10] = [
    "insertStmt",
    "replaceCond",
    "replaceStmt",
    "removePartialIf",
    "removeWholeBlock",
    "insertCond",
    "removeStmt",
    "updateStmt",
    "moveStmt",
    "updateLiteral",
];

pub const PATTERN_FEATURES: [&str; 26] = [
    "wrapsIf",
    "wrapsElse",
    "wrapsLoop",
    "wrapsTryCatch",
    "unwrapTryCatch",
    "wrapsIfElse",
    "unwrapIfElse",
    "wrapsMethod",
    "unwrapMethod",
    "expLogicExpand",
    "expArithMod",
    "expLogicReduce",
    "expLogicMod",
    "condBlockOthersAdd",
    "condBlockRem",
    "condBlockExcAdd",
    "condBlockRetAdd",
    "missNullCheckP",
    "missNullCheckN",
    "codeMove",
    "copyPaste",
    "wrongVarRef",
    "wrongMethodRef",
    "singleLine",
    "constChange",
    "notClassified",
];

pub const TYPE_FEATURES: [&str; 9] = [
    "typeOfFaultyStatement",
    "typeOfFaultyStatementParent",
    "typeOfFaultyStatementBefore1",
    "typeOfFaultyStatementBefore2",
    "typeOfFaultyStatementBefore3",
    "typeOfFaultyStatementAfter1",
    "typeOfFaultyStatementAfter2",
    "typeOfFaultyStatementAfter3",
    "faultyClassExceptionType",
];

pub const METHOD_FEATURES: [&str; 7] = [
    "methodCallWithNullGuard",
    "methodCallWithTryCatch",
    "inSynchronizedMethod",
    "hasObjectiveMethodCall",
    "methodThrowsException",
    "methodCallWithNormalGuard",
    "hasInvocationsProneException",
];

pub const SIMILARITY_FEATURES: [&str; 4] = [
    "similarObjectTypeWithNormalGuard",
    "similarObjectTypeWithNullGuard",
    "similarPrimitiveTypeWithNormalGuard",
    "similarPrimitiveTypeWithNullGuard",
];

pub const USAGE_FEATURES: [&str; 6] = [
    "fieldNotAssigned",
    "fieldNotUsed",
    "localVarNotAssigned",
    "localVarNotUsed",
    "objectUsedInAssignment",
    "primitiveUsedInAssignment",
];

/// Sentinel for an empty context position.
pub const NONE: &str = "none";
/// Sentinel for a value outside the known categories.
pub const OTHER: &str = "other";

pub const EXCEPTION_CATEGORIES: [&str; 6] = [NONE, "runtime", "checked", "error", "throwable", OTHER];

/// Window prefixes of the code-description blocks, in layout order.
pub const WINDOWS: [&str; 3] = ["SRC", "FORMER", "LATTER"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Binary,
    String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureGroup {
    CodeDescriptionSrc,
    CodeDescriptionFormer,
    CodeDescriptionLatter,
    RepairPattern,
    Contextual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureEntry {
    pub name: String,
    pub kind: FeatureKind,
    pub group: FeatureGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub version: String,
    pub entries: Vec<FeatureEntry>,
    /// One-hot vocabulary of each string feature, in column order.
    pub string_vocab: BTreeMap<String, Vec<String>>,
}

/// Code-description names of one window, in layout order.
pub fn code_description_names() -> impl Iterator<Item = &'static str> {
    OPERATOR_FEATURES
        .iter()
        .chain(&VARIABLE_FEATURES)
        .chain(&STATEMENT_FEATURES)
        .chain(&AST_OP_FEATURES)
        .copied()
}

pub fn window_feature(window: &str, name: &str) -> String {
    format!("{window}_{name}")
}

impl FeatureSchema {
    pub fn v1() -> Self {
        let mut entries = Vec::with_capacity(202);
        let groups = [
            FeatureGroup::CodeDescriptionSrc,
            FeatureGroup::CodeDescriptionFormer,
            FeatureGroup::CodeDescriptionLatter,
        ];
        for (window, group) in WINDOWS.iter().zip(groups) {
            for name in code_description_names() {
                entries.push(FeatureEntry { name: window_feature(window, name), kind: FeatureKind::Binary, group });
            }
        }
        for name in PATTERN_FEATURES {
            entries.push(FeatureEntry {
                name: name.to_string(),
                kind: FeatureKind::Binary,
                group: FeatureGroup::RepairPattern,
            });
        }
        let contextual = TYPE_FEATURES
            .iter()
            .map(|n| (n, FeatureKind::String))
            .chain(
                METHOD_FEATURES
                    .iter()
                    .chain(&SIMILARITY_FEATURES)
                    .chain(&USAGE_FEATURES)
                    .map(|n| (n, FeatureKind::Binary)),
            );
        for (name, kind) in contextual {
            entries.push(FeatureEntry { name: name.to_string(), kind, group: FeatureGroup::Contextual });
        }

        let statement_vocab: Vec<String> = StatementKind::ALL
            .iter()
            .map(|k| k.as_str().to_string())
            .chain(std::iter::once(NONE.to_string()))
            .collect();
        let mut string_vocab = BTreeMap::new();
        for name in &TYPE_FEATURES[..8] {
            string_vocab.insert(name.to_string(), statement_vocab.clone());
        }
        string_vocab.insert(
            TYPE_FEATURES[8].to_string(),
            EXCEPTION_CATEGORIES.iter().map(|s| s.to_string()).collect(),
        );
        FeatureSchema { version: SCHEMA_VERSION.to_string(), entries, string_vocab }
    }

    pub fn for_version(version: &str) -> Option<Self> {
        (version == SCHEMA_VERSION).then(Self::v1)
    }

    pub fn raw_len(&self) -> usize {
        self.entries.len()
    }

    pub fn count(&self, group: FeatureGroup) -> usize {
        self.entries.iter().filter(|e| e.group == group).count()
    }

    pub fn string_features(&self) -> impl Iterator<Item = &FeatureEntry> {
        self.entries.iter().filter(|e| e.kind == FeatureKind::String)
    }

    pub fn vocab(&self, name: &str) -> &[String] {
        self.string_vocab.get(name).map_or(&[], Vec::as_slice)
    }

    /// Raw entries minus string features plus the sum of their vocabularies.
    pub fn expanded_len(&self) -> usize {
        let strings: Vec<_> = self.string_features().collect();
        self.raw_len() - strings.len() + strings.iter().map(|e| self.vocab(&e.name).len()).sum::<usize>()
    }

    /// Column names after one-hot expansion; string columns are
    /// `{feature}_{value}`.
    pub fn expanded_columns(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.expanded_len());
        for e in &self.entries {
            match e.kind {
                FeatureKind::Binary => out.push(e.name.clone()),
                FeatureKind::String => {
                    out.extend(self.vocab(&e.name).iter().map(|v| format!("{}_{}", e.name, v)))
                }
            }
        }
        out
    }

    pub fn entry(&self, name: &str) -> Option<&FeatureEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// One documented feature of the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: FeatureKind,
    pub group: FeatureGroup,
    pub definition: String,
    /// One-hot values of a string feature; empty for flags.
    pub vocab: Vec<String>,
}

#[derive(Deserialize)]
struct CatalogDoc {
    version: String,
    windows: BTreeMap<String, String>,
    code_description: BTreeMap<String, String>,
    repair_pattern: BTreeMap<String, String>,
    contextual: BTreeMap<String, String>,
}

const CATALOG_V1: &str = include_str!("../../catalog/features-1.0.0.toml");

impl FeatureSchema {
    /// The shipped catalog document for this schema version.
    pub fn catalog_source(&self) -> Option<&'static str> {
        (self.version == SCHEMA_VERSION).then_some(CATALOG_V1)
    }

    /// Every schema entry with its documented definition, in schema order.
    /// Entries the document does not cover get an empty definition.
    pub fn catalog(&self) -> Vec<CatalogEntry> {
        let doc = self.catalog_source().map(|src| {
            toml::from_str::<CatalogDoc>(src).unwrap_or_else(|e| panic!("bundled catalog is malformed: {e}"))
        });
        let doc = doc.filter(|d| d.version == self.version);
        let definition = |e: &FeatureEntry| -> Option<String> {
            let doc = doc.as_ref()?;
            match e.group {
                FeatureGroup::RepairPattern => doc.repair_pattern.get(&e.name).cloned(),
                FeatureGroup::Contextual => doc.contextual.get(&e.name).cloned(),
                _ => {
                    let (window, flag) = e.name.split_once('_')?;
                    let d = doc.code_description.get(flag)?;
                    Some(format!("{d} Window: {}", doc.windows.get(window)?))
                }
            }
        };
        self.entries
            .iter()
            .map(|e| CatalogEntry {
                name: e.name.clone(),
                kind: e.kind,
                group: e.group,
                definition: definition(e).unwrap_or_default(),
                vocab: self.vocab(&e.name).to_vec(),
            })
            .collect()
    }
}

impl Default for FeatureSchema {
    fn default() -> Self {
        Self::v1()
    }
}
