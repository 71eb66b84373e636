//! Gradient-boosted decision trees for binary logistic loss.
//!
//! Each round fits one regression tree to the loss gradients and hessians
//! with exact greedy split search; leaf weights are `-G / (H + 1)` scaled by
//! the learning rate. Training is deterministic for a given row order and
//! set of hyperparameters.

mod tree;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, Dataset};
use crate::features::matrix::Label;
use crate::features::FeatureVector;

pub use tree::{leaf_weight, split_gain, SplitChoice, TreeNode, LAMBDA};
use tree::{grow, NodeRows, TreeParams};

/// Version of the model file layout.
pub const MODEL_FORMAT: u32 = 1;

/// Keeps the prior log-odds finite on single-class data.
const PRIOR_CLAMP: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum LearnerError {
    #[error("training data holds a single class")]
    SingleClass,
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("training data is empty")]
    Empty,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("model file: {0}")]
    Format(String),
    #[error("{}: {source}", path.display())]
    Io { path: std::path::PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub learning_rate: f64,
    pub max_depth: usize,
    /// Minimum gain (gamma) a split must reach to be kept.
    pub min_split_gain: f64,
    pub rounds: usize,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams { learning_rate: 0.3, max_depth: 6, min_split_gain: 0.5, rounds: 100, seed: 42 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub format: u32,
    pub schema_version: String,
    pub columns: Vec<String>,
    pub hyperparams: Hyperparams,
    pub base_score: f64,
    pub trees: Vec<TreeNode>,
    /// Split occurrences per column, over all trees.
    pub split_counts: BTreeMap<String, usize>,
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Mean binary logistic loss of margins `f` against 0/1 targets.
pub fn logistic_loss(margins: &[f64], y: &[f64]) -> f64 {
    let total: f64 = margins
        .iter()
        .zip(y)
        .map(|(&f, &t)| {
            // log(1 + e^f) - t f, written to stay finite for large |f|
            let softplus = if f > 0.0 { f + (-f).exp().ln_1p() } else { f.exp().ln_1p() };
            softplus - t * f
        })
        .sum();
    total / margins.len().max(1) as f64
}

/// Trains on raw rows. Returns the model and the training loss before the
/// first round and after every round.
pub fn train_rows(
    x: &[Vec<f64>],
    labels: &[Label],
    columns: &[String],
    schema_version: &str,
    hp: &Hyperparams,
) -> Result<(Model, Vec<f64>), LearnerError> {
    if x.is_empty() {
        return Err(LearnerError::Empty);
    }
    if labels.len() != x.len() {
        return Err(LearnerError::SchemaMismatch(format!("{} rows but {} labels", x.len(), labels.len())));
    }
    if let Some(row) = x.iter().find(|r| r.len() != columns.len()) {
        return Err(LearnerError::SchemaMismatch(format!("row of {} values for {} columns", row.len(), columns.len())));
    }
    let y: Vec<f64> = labels.iter().map(|l| f64::from(l.as_int())).collect();
    let prior = (y.iter().sum::<f64>() / y.len() as f64).clamp(PRIOR_CLAMP, 1.0 - PRIOR_CLAMP);
    let base_score = (prior / (1.0 - prior)).ln();
    let single_class = y.iter().all(|&t| t == y[0]);

    let mut margins = vec![base_score; x.len()];
    let mut history = vec![logistic_loss(&margins, &y)];
    let mut trees = Vec::new();
    if !single_class {
        let params = TreeParams {
            max_depth: hp.max_depth,
            min_split_gain: hp.min_split_gain,
            learning_rate: hp.learning_rate,
        };
        let presorted = NodeRows::root(x, columns.len());
        for _ in 0..hp.rounds {
            let p: Vec<f64> = margins.iter().map(|&f| sigmoid(f)).collect();
            let grad: Vec<f64> = p.iter().zip(&y).map(|(p, t)| p - t).collect();
            let hess: Vec<f64> = p.iter().map(|p| p * (1.0 - p)).collect();
            let tree = grow(x, &grad, &hess, presorted.clone(), &params, 0);
            for (m, row) in margins.iter_mut().zip(x) {
                *m += tree.predict(row);
            }
            history.push(logistic_loss(&margins, &y));
            trees.push(tree);
        }
    }
    let mut model = Model {
        format: MODEL_FORMAT,
        schema_version: schema_version.to_string(),
        columns: columns.to_vec(),
        hyperparams: *hp,
        base_score,
        trees,
        split_counts: BTreeMap::new(),
    };
    model.split_counts = feature_importance(&model).into_iter().filter(|(_, c)| *c > 0).collect();
    Ok((model, history))
}

pub fn train(ds: &Dataset, hp: &Hyperparams) -> Result<Model, LearnerError> {
    let labels = ds.labels()?;
    let x: Vec<Vec<f64>> = ds.rows.iter().map(|r| r.values.clone()).collect();
    Ok(train_rows(&x, &labels, &ds.columns, &ds.schema_version, hp)?.0)
}

impl Model {
    pub fn margin(&self, x: &[f64]) -> Result<f64, LearnerError> {
        if x.len() != self.columns.len() {
            return Err(LearnerError::SchemaMismatch(format!(
                "vector of {} values, model expects {}",
                x.len(),
                self.columns.len()
            )));
        }
        Ok(self.base_score + self.trees.iter().map(|t| t.predict(x)).sum::<f64>())
    }

    pub fn save(&self, path: &Path) -> Result<(), LearnerError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| LearnerError::Format(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|source| LearnerError::Io { path: path.to_path_buf(), source })
    }

    pub fn load(path: &Path) -> Result<Model, LearnerError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| LearnerError::Io { path: path.to_path_buf(), source })?;
        let model: Model = serde_json::from_str(&text).map_err(|e| LearnerError::Format(e.to_string()))?;
        if model.format != MODEL_FORMAT {
            return Err(LearnerError::Format(format!("unsupported model format {}", model.format)));
        }
        Ok(model)
    }
}

pub fn predict_proba(m: &Model, x: &[f64]) -> Result<f64, LearnerError> {
    Ok(sigmoid(m.margin(x)?))
}

/// Like [`predict_proba`], also checking the vector's schema version.
pub fn predict_vector(m: &Model, v: &FeatureVector) -> Result<f64, LearnerError> {
    if v.schema_version != m.schema_version {
        return Err(LearnerError::SchemaMismatch(format!(
            "vector schema {} against model schema {}",
            v.schema_version, m.schema_version
        )));
    }
    let x: Vec<f64> = v.values.iter().map(|&c| f64::from(c)).collect();
    predict_proba(m, &x)
}

/// Overfitting when the probability reaches `threshold`.
pub fn classify(m: &Model, x: &[f64], threshold: f64) -> Result<Label, LearnerError> {
    Ok(label_for(predict_proba(m, x)?, threshold))
}

pub fn label_for(proba: f64, threshold: f64) -> Label {
    if proba >= threshold {
        Label::Overfitting
    } else {
        Label::Correct
    }
}

/// Split count of every column, in column order; unused columns count 0.
pub fn feature_importance(m: &Model) -> Vec<(String, usize)> {
    let mut counts = vec![0usize; m.columns.len()];
    for t in &m.trees {
        for (f, _, _) in t.splits() {
            counts[f] += 1;
        }
    }
    m.columns.iter().cloned().zip(counts).collect()
}
