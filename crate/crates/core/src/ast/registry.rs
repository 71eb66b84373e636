//! Grammar adapters keyed by grammar id, each backed by a versioned
//! concrete-kind mapping file.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::Deserialize;

use super::java::JavaAdapter;
use super::{AstError, NodeKind, NormalizedAst};

/// Parsed form of a grammar mapping file.
#[derive(Debug, Clone)]
pub struct KindMapping {
    pub grammar_id: String,
    pub version: String,
    pub extensions: Vec<String>,
    pub kinds: BTreeMap<String, NodeKind>,
}

#[derive(Deserialize)]
struct MappingFile {
    grammar_id: String,
    version: String,
    #[serde(default)]
    extensions: Vec<String>,
    kinds: BTreeMap<String, String>,
}

impl KindMapping {
    pub fn from_toml(text: &str) -> Result<Self, AstError> {
        let file: MappingFile =
            toml::from_str(text).map_err(|e| AstError::InvalidMapping(e.to_string()))?;
        let mut kinds = BTreeMap::new();
        for (concrete, normalized) in file.kinds {
            let kind = NodeKind::from_name(&normalized).ok_or_else(|| {
                AstError::InvalidMapping(format!("`{concrete}` maps to unknown kind `{normalized}`"))
            })?;
            kinds.insert(concrete, kind);
        }
        Ok(KindMapping {
            grammar_id: file.grammar_id,
            version: file.version,
            extensions: file.extensions,
            kinds,
        })
    }

    pub fn lookup(&self, concrete: &str) -> Result<NodeKind, AstError> {
        self.kinds.get(concrete).copied().ok_or_else(|| AstError::UnmappedKind {
            grammar: self.grammar_id.clone(),
            kind: concrete.to_string(),
        })
    }
}

pub trait GrammarAdapter: Send + Sync {
    fn mapping(&self) -> &KindMapping;

    fn parse(&self, source: &str, path: &Path) -> Result<NormalizedAst, AstError>;
}

#[derive(Clone, Default)]
pub struct GrammarRegistry {
    adapters: BTreeMap<String, Arc<dyn GrammarAdapter>>,
}

impl GrammarRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry with the shipped Java adapter.
    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register(Arc::new(JavaAdapter::new().expect("bundled Java mapping is valid")));
        reg
    }

    pub fn register(&mut self, adapter: Arc<dyn GrammarAdapter>) {
        self.adapters.insert(adapter.mapping().grammar_id.clone(), adapter);
    }

    pub fn get(&self, grammar_id: &str) -> Result<&dyn GrammarAdapter, AstError> {
        self.adapters
            .get(grammar_id)
            .map(|a| a.as_ref())
            .ok_or_else(|| AstError::UnknownGrammar(grammar_id.to_string()))
    }

    pub fn grammar_ids(&self) -> impl Iterator<Item = &str> {
        self.adapters.keys().map(String::as_str)
    }

    /// Grammar id claiming the file extension of `path`.
    pub fn grammar_for_path(&self, path: &Path) -> Option<&str> {
        let ext = path.extension()?.to_str()?;
        self.adapters
            .values()
            .find(|a| a.mapping().extensions.iter().any(|e| e == ext))
            .map(|a| a.mapping().grammar_id.as_str())
    }

    pub fn parse(&self, source: &str, grammar_id: &str, path: &Path) -> Result<NormalizedAst, AstError> {
        self.get(grammar_id)?.parse(source, path)
    }
}

pub fn default_registry() -> &'static GrammarRegistry {
    static REGISTRY: OnceLock<GrammarRegistry> = OnceLock::new();
    REGISTRY.get_or_init(GrammarRegistry::with_defaults)
}

pub fn parse_source(source: &str, grammar_id: &str) -> Result<NormalizedAst, AstError> {
    default_registry().parse(source, grammar_id, Path::new(""))
}
