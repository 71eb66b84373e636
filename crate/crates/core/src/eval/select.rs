//! Univariate Fisher-score ranking for top-K feature selection.

use serde::Serialize;

use super::EvalError;
use crate::corpus::Dataset;
use crate::features::matrix::Label;

/// Between-class scatter over within-class scatter of one column:
/// `sum_c n_c (mu_c - mu)^2 / sum_c n_c var_c`, with population variances.
/// A column with no between-class spread scores 0; one that separates the
/// classes with no within-class spread scores infinity.
pub fn fisher_score(values: &[f64], labels: &[Label]) -> f64 {
    let n = values.len() as f64;
    if n == 0.0 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n;
    let (mut between, mut within) = (0.0, 0.0);
    for class in [Label::Correct, Label::Overfitting] {
        let xs: Vec<f64> = values.iter().zip(labels).filter(|(_, &l)| l == class).map(|(&v, _)| v).collect();
        if xs.is_empty() {
            continue;
        }
        let nc = xs.len() as f64;
        let mc = xs.iter().sum::<f64>() / nc;
        between += nc * (mc - mean).powi(2);
        within += xs.iter().map(|v| (v - mc).powi(2)).sum::<f64>();
    }
    match (between > 0.0, within > 0.0) {
        (false, _) => 0.0,
        (true, true) => between / within,
        (true, false) => f64::INFINITY,
    }
}

/// Columns as `(index, score)`, best first, ties by column index.
pub fn fisher_ranking(ds: &Dataset) -> Result<Vec<(usize, f64)>, EvalError> {
    let labels = ds.labels()?;
    let mut scored: Vec<(usize, f64)> = (0..ds.columns.len())
        .map(|c| {
            let col: Vec<f64> = ds.rows.iter().map(|r| r.values[c]).collect();
            (c, fisher_score(&col, &labels))
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(scored)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureSubset {
    /// Selected column indices in their original order.
    pub columns: Vec<usize>,
    pub names: Vec<String>,
}

impl FeatureSubset {
    pub fn apply(&self, ds: &Dataset) -> Dataset {
        ds.select_columns(&self.columns)
    }
}

/// The `k` best columns by Fisher score.
pub fn top_k_features(ds: &Dataset, k: usize) -> Result<FeatureSubset, EvalError> {
    let max = ds.columns.len();
    if k == 0 || k > max {
        return Err(EvalError::KOutOfRange { k, max });
    }
    let mut columns: Vec<usize> = fisher_ranking(ds)?.into_iter().take(k).map(|(c, _)| c).collect();
    columns.sort_unstable();
    let names = columns.iter().map(|&c| ds.columns[c].clone()).collect();
    Ok(FeatureSubset { columns, names })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Correct as C, Overfitting as O};

    #[test]
    fn constant_column_scores_zero() {
        assert_eq!(fisher_score(&[2.0; 4], &[C, C, O, O]), 0.0);
        assert_eq!(fisher_score(&[0.0, 0.0, 1.0, 1.0], &[C, C, O, O]), f64::INFINITY);
    }

    #[test]
    fn hand_computed_score() {
        // means 1 and 4, overall 2.5; between 2*2.25*2 = 9; within 2*1 + 2*1 = 4
        let s = fisher_score(&[0.0, 2.0, 3.0, 5.0], &[C, C, O, O]);
        assert!((s - 9.0 / 4.0).abs() < 1e-12);
    }
}
