//! Java grammar adapter.

pub mod lexer;
pub mod parser;

use std::path::Path;

use self::parser::RawNode;
use crate::ast::registry::{GrammarAdapter, KindMapping};
use crate::ast::{AstError, NormalizedAst, TreeSpec};

pub const MAPPING_TOML: &str = include_str!("../../../grammars/java.toml");

pub struct JavaAdapter {
    mapping: KindMapping,
}

impl JavaAdapter {
    pub fn new() -> Result<Self, AstError> {
        let mapping = KindMapping::from_toml(MAPPING_TOML)?;
        for production in parser::PRODUCTIONS {
            mapping.lookup(production)?;
        }
        Ok(JavaAdapter { mapping })
    }

    fn lower(&self, raw: RawNode) -> Result<TreeSpec, AstError> {
        let kind = self.mapping.lookup(raw.kind)?;
        let children = raw
            .children
            .into_iter()
            .map(|c| self.lower(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TreeSpec::new(kind, raw.label, raw.span).with_children(children))
    }
}

impl GrammarAdapter for JavaAdapter {
    fn mapping(&self) -> &KindMapping {
        &self.mapping
    }

    fn parse(&self, source: &str, path: &Path) -> Result<NormalizedAst, AstError> {
        let raw = parser::parse(source)?;
        let spec = self.lower(raw)?;
        Ok(NormalizedAst::from_spec(spec, &self.mapping.grammar_id, path).with_source_lines(source))
    }
}
