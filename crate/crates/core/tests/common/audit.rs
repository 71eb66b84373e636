//! Leakage audit for evaluation reports.

use std::collections::BTreeSet;

use patchguard::corpus::{prune_outliers, Dataset};
use patchguard::eval::{EvalReport, SplitResult};

/// Nothing from a split's test rows reaches its training set, directly, via
/// a synthetic row, or via the outlier fences.
pub fn audit(ds: &Dataset, report: &EvalReport, min_outlied: usize, test_of: impl Fn(&SplitResult) -> BTreeSet<String>) {
    let mut evaluated = 0;
    for s in &report.splits {
        let test = test_of(s);
        let trained: BTreeSet<String> = s.trained_on.iter().cloned().collect();
        assert!(trained.is_disjoint(&test), "split {} trains on test rows", s.name);
        for origin in s.synthetic.values() {
            assert!(trained.contains(&origin.base) && trained.contains(&origin.neighbor));
        }
        let train_idx: Vec<usize> = (0..ds.len()).filter(|&i| !test.contains(&ds.rows[i].patch_id)).collect();
        let pruned = prune_outliers(&ds.subset(&train_idx), min_outlied).unwrap();
        assert_eq!(pruned.rows.iter().map(|r| r.patch_id.clone()).collect::<Vec<_>>(), s.trained_on);
        let tested: BTreeSet<String> = s.outcomes.iter().map(|o| o.patch_id.clone()).collect();
        assert_eq!(tested, test);
        assert_eq!(s.confusion.total(), test.len());
        evaluated += test.len();
    }
    assert_eq!(evaluated, ds.len());
    assert_eq!(report.aggregate, report.splits.iter().map(|s| s.confusion).sum());
}
