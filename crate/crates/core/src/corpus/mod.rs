//! Labelled patch corpora: ingestion from disk, duplicate removal, feature
//! extraction into a [`Dataset`], outlier pruning and minority resampling.

mod ingest;
mod prune;
mod smote;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::AstError;
use crate::diff::DiffError;
use crate::features::matrix::{read_matrix, write_matrix, Label, MatrixError, MatrixRow};
use crate::features::FeatureError;

pub use ingest::{
    build_dataset, deduplicate, extract_patch, ingest, ingest_with_skips, Ingested, Skipped,
};
pub use prune::{prune_outliers, quantile, tukey_fences, TUKEY_K};
pub use smote::{smote_minority, SMOTE_K};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus root {0} does not exist or is not a directory")]
    CorpusNotFound(PathBuf),
    #[error("malformed metadata for patch {patch_id}: {reason}")]
    MalformedMetadata { patch_id: String, reason: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: AstError },
    #[error("{}: no grammar handles this file", .0.display())]
    UnsupportedFile(PathBuf),
    #[error("{}: {source}", path.display())]
    Diff { path: PathBuf, source: DiffError },
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("dataset was already resampled; prune before resampling")]
    AlreadyResampled,
    #[error("dataset holds a single class")]
    SingleClass,
    #[error("minority class has {0} rows; at least 2 are needed")]
    TooFewMinority(usize),
    #[error("row {0} has no label")]
    Unlabeled(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("provenance record: {0}")]
    Provenance(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilePair {
    pub buggy: PathBuf,
    pub patched: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchRecord {
    pub patch_id: String,
    pub project: String,
    pub tool: String,
    pub label: Option<Label>,
    /// Absolute or corpus-resolved paths of each changed file.
    pub file_pairs: Vec<FilePair>,
}

/// Processing steps a dataset has been through.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub raw: bool,
    pub deduplicated: bool,
    pub outlier_pruned: bool,
    pub resampled: bool,
}

/// The two original minority rows a synthetic row was interpolated from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticOrigin {
    pub base: String,
    pub neighbor: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub schema_version: String,
    pub columns: Vec<String>,
    pub rows: Vec<MatrixRow>,
    pub provenance: Provenance,
    /// Keyed by synthetic patch id.
    pub synthetic: BTreeMap<String, SyntheticOrigin>,
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    schema_version: String,
    columns: usize,
    rows: usize,
    provenance: Provenance,
    synthetic: BTreeMap<String, SyntheticOrigin>,
}

impl Dataset {
    pub fn new(schema_version: impl Into<String>, columns: Vec<String>, rows: Vec<MatrixRow>) -> Self {
        Dataset {
            schema_version: schema_version.into(),
            columns,
            rows,
            provenance: Provenance { raw: true, ..Provenance::default() },
            synthetic: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Labels of every row, or the first unlabelled row's id.
    pub fn labels(&self) -> Result<Vec<Label>, CorpusError> {
        self.rows
            .iter()
            .map(|r| r.label.ok_or_else(|| CorpusError::Unlabeled(r.patch_id.clone())))
            .collect()
    }

    /// `(correct, overfitting)` row counts; unlabelled rows are not counted.
    pub fn class_counts(&self) -> (usize, usize) {
        self.rows.iter().fold((0, 0), |(c, o), r| match r.label {
            Some(Label::Correct) => (c + 1, o),
            Some(Label::Overfitting) => (c, o + 1),
            None => (c, o),
        })
    }

    /// Rows at `indices`, in that order. Synthetic origins follow the rows
    /// they describe.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let rows: Vec<MatrixRow> = indices.iter().map(|&i| self.rows[i].clone()).collect();
        let synthetic = rows
            .iter()
            .filter_map(|r| self.synthetic.get(&r.patch_id).map(|o| (r.patch_id.clone(), o.clone())))
            .collect();
        Dataset { rows, synthetic, columns: self.columns.clone(), ..self.clone_meta() }
    }

    /// Keeps only the columns at `indices`, in that order.
    pub fn select_columns(&self, indices: &[usize]) -> Dataset {
        let rows = self
            .rows
            .iter()
            .map(|r| MatrixRow { values: indices.iter().map(|&c| r.values[c]).collect(), ..r.clone() })
            .collect();
        Dataset {
            columns: indices.iter().map(|&c| self.columns[c].clone()).collect(),
            rows,
            synthetic: self.synthetic.clone(),
            ..self.clone_meta()
        }
    }

    fn clone_meta(&self) -> Dataset {
        Dataset {
            schema_version: self.schema_version.clone(),
            columns: Vec::new(),
            rows: Vec::new(),
            provenance: self.provenance,
            synthetic: BTreeMap::new(),
        }
    }

    pub fn sidecar_path(matrix: &Path) -> PathBuf {
        let mut name = matrix.file_name().unwrap_or_default().to_os_string();
        name.push(".provenance.json");
        matrix.with_file_name(name)
    }

    /// Writes the matrix file and its provenance sidecar.
    pub fn save(&self, matrix: &Path) -> Result<(), CorpusError> {
        let io = |source| CorpusError::Io { path: matrix.to_path_buf(), source };
        let out = BufWriter::new(File::create(matrix).map_err(io)?);
        write_matrix(out, &self.columns, &self.rows)?;
        let sidecar = Sidecar {
            schema_version: self.schema_version.clone(),
            columns: self.columns.len(),
            rows: self.rows.len(),
            provenance: self.provenance,
            synthetic: self.synthetic.clone(),
        };
        let path = Self::sidecar_path(matrix);
        let text = serde_json::to_string_pretty(&sidecar).map_err(|e| CorpusError::Provenance(e.to_string()))?;
        std::fs::write(&path, text + "\n").map_err(|source| CorpusError::Io { path, source })
    }

    pub fn load(matrix: &Path) -> Result<Dataset, CorpusError> {
        let io = |source| CorpusError::Io { path: matrix.to_path_buf(), source };
        let (columns, rows) = read_matrix(BufReader::new(File::open(matrix).map_err(io)?))?;
        let path = Self::sidecar_path(matrix);
        let text = std::fs::read_to_string(&path).map_err(|source| CorpusError::Io { path, source })?;
        let sidecar: Sidecar = serde_json::from_str(&text).map_err(|e| CorpusError::Provenance(e.to_string()))?;
        if sidecar.columns != columns.len() || sidecar.rows != rows.len() {
            return Err(CorpusError::Provenance(format!(
                "sidecar describes {}x{}, matrix is {}x{}",
                sidecar.rows,
                sidecar.columns,
                rows.len(),
                columns.len()
            )));
        }
        Ok(Dataset {
            schema_version: sidecar.schema_version,
            columns,
            rows,
            provenance: sidecar.provenance,
            synthetic: sidecar.synthetic,
        })
    }
}
