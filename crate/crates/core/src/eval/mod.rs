//! Classification metrics, evaluation protocols and feature ranking.
//!
//! Overfitting is the positive class throughout. Ratios with a zero
//! denominator, and precision/recall on a split holding one class only, are
//! `None` rather than 0 or 1.

mod protocol;
mod report;
mod select;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::CorpusError;
use crate::features::matrix::Label;
use crate::learner::LearnerError;

pub use protocol::{
    kfold_cv, kfold_plan, leave_one_group_out, group_plan, run_plan, EvalConfig, GroupKey, Outcome, Split,
    SplitResult, EvalReport,
};
pub use report::{read_outcomes, write_outcomes, write_report_matrix, write_report_text, REPORT_COLUMNS};
pub use select::{fisher_ranking, fisher_score, top_k_features, FeatureSubset};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{preds} predictions for {truth} labels")]
    LengthMismatch { preds: usize, truth: usize },
    #[error("{rows} rows cannot fill {k} folds")]
    TooFewRows { rows: usize, k: usize },
    #[error("dataset holds a single class")]
    SingleClass,
    #[error("only one {0} value; at least two groups are needed")]
    SingleGroup(GroupKey),
    #[error("k = {k} outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error("report: {0}")]
    Report(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn new(tp: usize, fp: usize, tn: usize, fn_: usize) -> Self {
        Confusion { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn add(&mut self, truth: Label, pred: Label) {
        match (truth, pred) {
            (Label::Overfitting, Label::Overfitting) => self.tp += 1,
            (Label::Correct, Label::Overfitting) => self.fp += 1,
            (Label::Correct, Label::Correct) => self.tn += 1,
            (Label::Overfitting, Label::Correct) => self.fn_ += 1,
        }
    }

    /// Truth holds a single class (or nothing).
    fn single_class(&self) -> bool {
        self.tp + self.fn_ == 0 || self.tn + self.fp == 0
    }
}

impl std::ops::Add for Confusion {
    type Output = Confusion;

    fn add(self, o: Confusion) -> Confusion {
        Confusion::new(self.tp + o.tp, self.fp + o.fp, self.tn + o.tn, self.fn_ + o.fn_)
    }
}

impl std::iter::Sum for Confusion {
    fn sum<I: Iterator<Item = Confusion>>(iter: I) -> Confusion {
        iter.fold(Confusion::default(), |a, b| a + b)
    }
}

pub fn confusion(preds: &[Label], truth: &[Label]) -> Result<Confusion, EvalError> {
    if preds.len() != truth.len() {
        return Err(EvalError::LengthMismatch { preds: preds.len(), truth: truth.len() });
    }
    let mut c = Confusion::default();
    for (&p, &t) in preds.iter().zip(truth) {
        c.add(t, p);
    }
    Ok(c)
}

/// Ratios in `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub accuracy: Option<f64>,
    pub cpr: Option<f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Precision, recall and accuracy. Precision and recall are absent on a
/// single-class split even when a denominator happens to be nonzero.
pub fn metrics(c: &Confusion) -> Metrics {
    let one_class = c.single_class();
    Metrics {
        precision: if one_class { None } else { ratio(c.tp, c.tp + c.fp) },
        recall: if one_class { None } else { ratio(c.tp, c.tp + c.fn_) },
        accuracy: ratio(c.tp + c.tn, c.total()),
        cpr: cpr(c),
    }
}

/// Share of correct patches among those classified correct: `tn / (tn + fn)`.
pub fn cpr(c: &Confusion) -> Option<f64> {
    ratio(c.tn, c.tn + c.fn_)
}

/// Share of correct patches before classification.
pub fn cpr_orig(num_correct: usize, num_patches: usize) -> Option<f64> {
    ratio(num_correct, num_patches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Correct as C, Overfitting as O};

    #[test]
    fn confusion_by_definition() {
        assert_eq!(confusion(&[O, C, C], &[O, O, C]).unwrap(), Confusion::new(1, 0, 1, 1));
        assert_eq!(confusion(&[], &[]).unwrap(), Confusion::default());
        assert!(matches!(confusion(&[O], &[]), Err(EvalError::LengthMismatch { .. })));
    }

    #[test]
    fn degenerate_denominators() {
        let m = metrics(&Confusion::new(0, 0, 7, 0));
        assert_eq!((m.precision, m.recall, m.accuracy), (None, None, Some(1.0)));
        assert_eq!(cpr(&Confusion::new(3, 1, 0, 0)), None);
        assert_eq!(metrics(&Confusion::default()).accuracy, None);
        // correct-only split with false alarms: precision is still absent
        let m = metrics(&Confusion::new(0, 35, 210, 0));
        assert_eq!((m.precision, m.recall), (None, None));
        assert!((m.accuracy.unwrap() - 210.0 / 245.0).abs() < 1e-12);
    }
}
