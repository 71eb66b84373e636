//! k-fold cross-validation and leave-one-group-out evaluation.
//!
//! Every split prunes outliers and resamples on its training rows only, so
//! neither the Tukey fences nor the SMOTE neighbours see a test row.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{metrics, top_k_features, Confusion, EvalError, Metrics};
use crate::corpus::{prune_outliers, smote_minority, CorpusError, Dataset, SyntheticOrigin, SMOTE_K};
use crate::features::matrix::Label;
use crate::learner::{label_for, predict_proba, train, Hyperparams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKey {
    Fold,
    Tool,
    Project,
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKey::Fold => "fold",
            GroupKey::Tool => "tool",
            GroupKey::Project => "project",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub hp: Hyperparams,
    pub threshold: f64,
    /// Rows outlied in at least this many columns are pruned from each
    /// training split; 0 disables pruning.
    pub min_outlied: usize,
    pub smote_k: usize,
    /// Train on the best `k` columns by Fisher score, ranked on each
    /// split's training rows.
    pub top_k: Option<usize>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { hp: Hyperparams::default(), threshold: 0.5, min_outlied: 15, smote_k: SMOTE_K, top_k: None }
    }
}

/// Row indices of one train/test partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub name: String,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub patch_id: String,
    pub truth: Label,
    pub proba: f64,
    pub pred: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitResult {
    pub name: String,
    pub confusion: Confusion,
    pub metrics: Metrics,
    /// Original rows the model was trained on, after pruning.
    pub trained_on: Vec<String>,
    /// Synthetic training rows and the two rows each was drawn between.
    pub synthetic: BTreeMap<String, SyntheticOrigin>,
    pub outcomes: Vec<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub grouping_key: GroupKey,
    pub splits: Vec<SplitResult>,
    /// Element-wise sum of the split confusions.
    pub aggregate: Confusion,
    pub aggregate_metrics: Metrics,
}

impl EvalReport {
    pub fn from_splits(grouping_key: GroupKey, splits: Vec<SplitResult>) -> Self {
        let aggregate: Confusion = splits.iter().map(|s| s.confusion).sum();
        EvalReport { grouping_key, splits, aggregate, aggregate_metrics: metrics(&aggregate) }
    }

    /// Every per-patch outcome, split by split.
    pub fn outcomes(&self) -> impl Iterator<Item = &Outcome> {
        self.splits.iter().flat_map(|s| &s.outcomes)
    }
}

fn check_input(ds: &Dataset) -> Result<Vec<Label>, EvalError> {
    if ds.provenance.resampled {
        return Err(CorpusError::AlreadyResampled.into());
    }
    Ok(ds.labels()?)
}

/// Stratified folds: each class is shuffled by `seed`, then the classes
/// are dealt round-robin, so fold sizes differ by at most one.
pub fn kfold_plan(ds: &Dataset, k: usize, seed: u64) -> Result<Vec<Split>, EvalError> {
    let labels = check_input(ds)?;
    if k < 2 || k > ds.len() {
        return Err(EvalError::TooFewRows { rows: ds.len(), k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity(ds.len());
    for class in [Label::Overfitting, Label::Correct] {
        let mut idx: Vec<usize> = (0..ds.len()).filter(|&i| labels[i] == class).collect();
        if idx.is_empty() {
            return Err(EvalError::SingleClass);
        }
        idx.shuffle(&mut rng);
        order.extend(idx);
    }
    let mut fold_of = vec![0; ds.len()];
    for (pos, &i) in order.iter().enumerate() {
        fold_of[i] = pos % k;
    }
    let width = k.to_string().len();
    Ok((0..k)
        .map(|f| {
            let (test, train) = (0..ds.len()).partition(|&i| fold_of[i] == f);
            Split { name: format!("fold{:0width$}", f + 1), train, test }
        })
        .collect())
}

/// One split per distinct group value, named after it, in sorted order.
pub fn group_plan(ds: &Dataset, key: GroupKey) -> Result<Vec<Split>, EvalError> {
    check_input(ds)?;
    let value = |i: usize| -> &str {
        let r = &ds.rows[i];
        match key {
            GroupKey::Tool => &r.tool,
            GroupKey::Project | GroupKey::Fold => &r.project,
        }
    };
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for i in 0..ds.len() {
        groups.entry(value(i)).or_default().push(i);
    }
    if groups.len() < 2 {
        return Err(EvalError::SingleGroup(key));
    }
    Ok(groups
        .into_iter()
        .map(|(name, test)| Split {
            name: name.to_string(),
            train: (0..ds.len()).filter(|&i| value(i) != name).collect(),
            test,
        })
        .collect())
}

fn run_split(ds: &Dataset, split: &Split, cfg: &EvalConfig) -> Result<SplitResult, EvalError> {
    let mut train_set = ds.subset(&split.train);
    if cfg.min_outlied > 0 {
        train_set = prune_outliers(&train_set, cfg.min_outlied)?;
    }
    let trained_on = train_set.rows.iter().map(|r| r.patch_id.clone()).collect();
    let columns: Vec<usize> = match cfg.top_k {
        Some(k) => {
            let subset = top_k_features(&train_set, k)?;
            train_set = subset.apply(&train_set);
            subset.columns
        }
        None => (0..ds.columns.len()).collect(),
    };
    train_set = match smote_minority(&train_set, cfg.smote_k, cfg.hp.seed) {
        Ok(resampled) => resampled,
        Err(e @ (CorpusError::SingleClass | CorpusError::TooFewMinority(_))) => {
            log::warn!("split {}: training without resampling ({e})", split.name);
            train_set
        }
        Err(e) => return Err(e.into()),
    };
    let model = train(&train_set, &cfg.hp)?;
    let mut confusion = Confusion::default();
    let mut outcomes = Vec::with_capacity(split.test.len());
    for &i in &split.test {
        let row = &ds.rows[i];
        let truth = row.label.ok_or_else(|| CorpusError::Unlabeled(row.patch_id.clone()))?;
        let x: Vec<f64> = columns.iter().map(|&c| row.values[c]).collect();
        let proba = predict_proba(&model, &x)?;
        let pred = label_for(proba, cfg.threshold);
        confusion.add(truth, pred);
        outcomes.push(Outcome { patch_id: row.patch_id.clone(), truth, proba, pred });
    }
    Ok(SplitResult {
        name: split.name.clone(),
        confusion,
        metrics: metrics(&confusion),
        trained_on,
        synthetic: train_set.synthetic,
        outcomes,
    })
}

/// Trains and tests every split. Splits run in parallel; results keep plan
/// order.
pub fn run_plan(ds: &Dataset, plan: &[Split], key: GroupKey, cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    check_input(ds)?;
    let splits = plan.par_iter().map(|s| run_split(ds, s, cfg)).collect::<Result<Vec<_>, _>>()?;
    Ok(EvalReport::from_splits(key, splits))
}

pub fn kfold_cv(ds: &Dataset, k: usize, cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    let plan = kfold_plan(ds, k, cfg.hp.seed)?;
    run_plan(ds, &plan, GroupKey::Fold, cfg)
}

pub fn leave_one_group_out(ds: &Dataset, key: GroupKey, cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    let plan = group_plan(ds, key)?;
    run_plan(ds, &plan, key, cfg)
}
