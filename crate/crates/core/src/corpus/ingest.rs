//! Reading patches from a corpus directory and turning them into feature
//! rows.
//!
//! Layout: `<root>/<patch_id>/metadata.json` next to `buggy/` and
//! `patched/` trees that mirror repository paths. The metadata names the
//! project, the tool, an optional label and the changed files:
//!
//! ```json
//! {"project": "Math", "tool": "Arja", "label": "overfitting",
//!  "files": ["src/main/java/org/Foo.java"]}
//! ```
//!
//! A file entry may also be `{"buggy": "a/Foo.java", "patched": "b/Foo.java"}`
//! when the two sides differ.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use log::warn;
use rayon::prelude::*;
use serde::Deserialize;

use super::{CorpusError, Dataset, FilePair, PatchRecord};
use crate::ast::java::lexer::token_texts;
use crate::ast::registry::default_registry;
use crate::diff::diff;
use crate::features::matrix::{Label, MatrixRow};
use crate::features::{encode, extract, FeatureSchema, FeatureVector};

const METADATA: &str = "metadata.json";

#[derive(Deserialize)]
#[serde(untagged)]
enum FileEntry {
    Same(PathBuf),
    Split { buggy: PathBuf, patched: PathBuf },
}

#[derive(Deserialize)]
struct Metadata {
    project: String,
    tool: String,
    #[serde(default)]
    label: Option<Label>,
    files: Vec<FileEntry>,
}

/// A patch left out of a run, with the reason.
#[derive(Debug)]
pub struct Skipped {
    pub patch_id: String,
    pub error: CorpusError,
}

#[derive(Debug, Default)]
pub struct Ingested {
    pub records: Vec<PatchRecord>,
    pub skipped: Vec<Skipped>,
}

pub fn ingest(root: &Path) -> Result<Vec<PatchRecord>, CorpusError> {
    Ok(ingest_with_skips(root)?.records)
}

/// Like [`ingest`], also returning the patches that were skipped.
pub fn ingest_with_skips(root: &Path) -> Result<Ingested, CorpusError> {
    if !root.is_dir() {
        return Err(CorpusError::CorpusNotFound(root.to_path_buf()));
    }
    let io = |source| CorpusError::Io { path: root.to_path_buf(), source };
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    let mut out = Ingested::default();
    for dir in dirs {
        let patch_id = dir.file_name().unwrap_or_default().to_string_lossy().into_owned();
        match read_record(&dir, &patch_id) {
            Ok(r) => out.records.push(r),
            Err(error) => {
                warn!("skipping patch {patch_id}: {error}");
                out.skipped.push(Skipped { patch_id, error });
            }
        }
    }
    Ok(out)
}

fn read_record(dir: &Path, patch_id: &str) -> Result<PatchRecord, CorpusError> {
    let malformed = |reason: String| CorpusError::MalformedMetadata { patch_id: patch_id.to_string(), reason };
    let path = dir.join(METADATA);
    let text = std::fs::read_to_string(&path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    let meta: Metadata = serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
    if meta.files.is_empty() {
        return Err(malformed("no changed files listed".into()));
    }
    let mut file_pairs = Vec::with_capacity(meta.files.len());
    for entry in meta.files {
        let (b, p) = match entry {
            FileEntry::Same(f) => (f.clone(), f),
            FileEntry::Split { buggy, patched } => (buggy, patched),
        };
        let pair = FilePair { buggy: dir.join("buggy").join(b), patched: dir.join("patched").join(p) };
        for side in [&pair.buggy, &pair.patched] {
            if !side.is_file() {
                return Err(CorpusError::Io {
                    path: side.clone(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "listed file is missing"),
                });
            }
        }
        file_pairs.push(pair);
    }
    Ok(PatchRecord { patch_id: patch_id.to_string(), project: meta.project, tool: meta.tool, label: meta.label, file_pairs })
}

fn read(path: &Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

/// Token texts of a file with comments and whitespace dropped. Files no
/// grammar claims, or that fail to lex, fall back to whitespace splitting.
fn tokens(path: &Path) -> Vec<String> {
    let Ok(text) = std::fs::read_to_string(path) else { return Vec::new() };
    let lexed = match default_registry().grammar_for_path(path) {
        Some("java") => token_texts(&text).ok(),
        _ => None,
    };
    lexed.unwrap_or_else(|| text.split_whitespace().map(str::to_string).collect())
}

/// Drops every patch whose token streams equal those of an earlier patch
/// on both sides of every file pair. Input order is kept.
pub fn deduplicate(records: Vec<PatchRecord>) -> Vec<PatchRecord> {
    let keys: Vec<Vec<(Vec<String>, Vec<String>)>> = records
        .par_iter()
        .map(|r| r.file_pairs.iter().map(|p| (tokens(&p.buggy), tokens(&p.patched))).collect())
        .collect();
    let mut seen = HashSet::new();
    records
        .into_iter()
        .zip(keys)
        .filter_map(|(r, key)| {
            if seen.insert(key) {
                Some(r)
            } else {
                log::info!("dropping duplicate patch {}", r.patch_id);
                None
            }
        })
        .collect()
}

/// Diffs, extracts and encodes every file pair of one patch.
pub fn extract_patch(record: &PatchRecord, schema: &FeatureSchema) -> Result<FeatureVector, CorpusError> {
    let registry = default_registry();
    let mut per_diff = Vec::with_capacity(record.file_pairs.len());
    for pair in &record.file_pairs {
        let grammar = registry
            .grammar_for_path(&pair.buggy)
            .ok_or_else(|| CorpusError::UnsupportedFile(pair.buggy.clone()))?;
        let parse = |path: &Path| {
            registry
                .parse(&read(path)?, grammar, path)
                .map_err(|source| CorpusError::Parse { path: path.to_path_buf(), source })
        };
        let (buggy, patched) = (parse(&pair.buggy)?, parse(&pair.patched)?);
        let script =
            diff(&buggy, &patched).map_err(|source| CorpusError::Diff { path: pair.buggy.clone(), source })?;
        per_diff.push(extract(&buggy, &patched, &script));
    }
    Ok(encode(&per_diff, schema)?)
}

/// Extracts every record in parallel. Rows come out in patch-id order;
/// patches that fail are reported, never fatal.
pub fn build_dataset(records: &[PatchRecord], schema: &FeatureSchema) -> (Dataset, Vec<Skipped>) {
    let mut results: Vec<(&PatchRecord, Result<FeatureVector, CorpusError>)> =
        records.par_iter().map(|r| (r, extract_patch(r, schema))).collect();
    results.sort_by(|a, b| a.0.patch_id.cmp(&b.0.patch_id));
    let mut rows = Vec::with_capacity(results.len());
    let mut skipped = Vec::new();
    for (r, result) in results {
        match result {
            Ok(v) => rows.push(MatrixRow {
                patch_id: r.patch_id.clone(),
                project: r.project.clone(),
                tool: r.tool.clone(),
                label: r.label,
                values: v.values.iter().map(|&x| f64::from(x)).collect(),
            }),
            Err(error) => {
                warn!("skipping patch {}: {error}", r.patch_id);
                skipped.push(Skipped { patch_id: r.patch_id.clone(), error });
            }
        }
    }
    (Dataset::new(schema.version.clone(), schema.expanded_columns(), rows), skipped)
}
