//! Tukey-fence outlier pruning.

use super::{CorpusError, Dataset};

pub const TUKEY_K: f64 = 1.5;

/// Quantile `p` of sorted data, interpolating linearly between order
/// statistics at rank `(n - 1) * p`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `[Q1 - 1.5 IQR, Q3 + 1.5 IQR]` for every column.
pub fn tukey_fences(ds: &Dataset) -> Vec<(f64, f64)> {
    (0..ds.columns.len())
        .map(|c| {
            let mut col: Vec<f64> = ds.rows.iter().map(|r| r.values[c]).collect();
            col.sort_by(f64::total_cmp);
            let (q1, q3) = (quantile(&col, 0.25), quantile(&col, 0.75));
            let iqr = q3 - q1;
            (q1 - TUKEY_K * iqr, q3 + TUKEY_K * iqr)
        })
        .collect()
}

/// Removes rows with at least `min_outlied` values outside their column's
/// fences. Fences come from the dataset as given; surviving rows are
/// untouched.
pub fn prune_outliers(ds: &Dataset, min_outlied: usize) -> Result<Dataset, CorpusError> {
    if ds.is_empty() {
        return Err(CorpusError::EmptyDataset);
    }
    if ds.provenance.resampled {
        return Err(CorpusError::AlreadyResampled);
    }
    let fences = tukey_fences(ds);
    let keep: Vec<usize> = ds
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            let outlied = r.values.iter().zip(&fences).filter(|(&v, &(lo, hi))| v < lo || v > hi).count();
            outlied < min_outlied
        })
        .map(|(i, _)| i)
        .collect();
    if keep.len() < ds.len() {
        log::info!("pruned {} of {} rows as outliers", ds.len() - keep.len(), ds.len());
    }
    let mut out = ds.subset(&keep);
    out.provenance.outlier_pruned = true;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&xs, 0.25), 1.75);
        assert_eq!(quantile(&xs, 0.5), 2.5);
        assert_eq!(quantile(&xs, 0.75), 3.25);
        assert_eq!(quantile(&[7.0], 0.25), 7.0);
    }
}
