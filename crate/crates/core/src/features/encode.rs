use serde::{Deserialize, Serialize};

use super::{FeatureError, FeatureKind, FeatureSchema, RawFeatures, RawValue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub schema_version: String,
    pub values: Vec<u32>,
}

/// One-hot expands each diff and sums the per-diff vectors.
pub fn encode(per_diff: &[RawFeatures], schema: &FeatureSchema) -> Result<FeatureVector, FeatureError> {
    if per_diff.is_empty() {
        return Err(FeatureError::SchemaMismatch("a patch must change at least one file".into()));
    }
    let mut values = vec![0u32; schema.expanded_len()];
    for raw in per_diff {
        if raw.values.len() != schema.raw_len() {
            return Err(FeatureError::SchemaMismatch(format!(
                "expected {} raw features, got {}",
                schema.raw_len(),
                raw.values.len()
            )));
        }
        let mut col = 0;
        for e in &schema.entries {
            let value = raw
                .values
                .get(&e.name)
                .ok_or_else(|| FeatureError::SchemaMismatch(format!("missing feature {}", e.name)))?;
            match (e.kind, value) {
                (FeatureKind::Binary, RawValue::Flag(b)) => {
                    values[col] += u32::from(*b);
                    col += 1;
                }
                (FeatureKind::String, RawValue::Text(t)) => {
                    let vocab = schema.vocab(&e.name);
                    let i = vocab.iter().position(|v| v == t).ok_or_else(|| {
                        FeatureError::SchemaMismatch(format!("`{t}` is not a value of {}", e.name))
                    })?;
                    values[col + i] += 1;
                    col += vocab.len();
                }
                _ => return Err(FeatureError::SchemaMismatch(format!("wrong value type for {}", e.name))),
            }
        }
    }
    Ok(FeatureVector { schema_version: schema.version.clone(), values })
}
