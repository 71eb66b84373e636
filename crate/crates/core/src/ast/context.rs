use serde::{Deserialize, Serialize};

use super::{AstError, NodeId, NormalizedAst};

/// Same-block neighbours of a statement. `former` is in source order, so
/// its last element is the statement immediately before.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementContext {
    pub former: Vec<NodeId>,
    pub latter: Vec<NodeId>,
}

pub fn statement_context(
    ast: &NormalizedAst,
    stmt: NodeId,
    k: usize,
) -> Result<StatementContext, AstError> {
    if ast.get(stmt).is_none() || !ast.is_statement(stmt) {
        return Err(AstError::NotAStatement(stmt));
    }
    let Some(parent) = ast.parent(stmt) else {
        return Ok(StatementContext::default());
    };
    if !ast.kind(parent).is_statement_list() {
        return Ok(StatementContext::default());
    }
    let siblings: Vec<NodeId> = ast
        .children(parent)
        .iter()
        .copied()
        .filter(|&c| ast.is_statement(c))
        .collect();
    let pos = siblings.iter().position(|&s| s == stmt).expect("statement is a child of its parent");
    let former = siblings[pos.saturating_sub(k)..pos].to_vec();
    let latter = siblings[pos + 1..(pos + 1 + k).min(siblings.len())].to_vec();
    Ok(StatementContext { former, latter })
}
