mod common;

use std::collections::BTreeSet;

use common::audit::audit;
use common::oracles::{blobs, row};
use common::tables::{self, mismatches, APPROACHES, KNOWN_MISPRINTS, PROJECTS, TOOLS};
use patchguard::corpus::Dataset;
use patchguard::eval::{
    fisher_ranking, kfold_cv, kfold_plan, leave_one_group_out, metrics, top_k_features, Confusion, EvalConfig,
    EvalError, EvalReport, GroupKey, Metrics, SplitResult,
};
use patchguard::features::matrix::Label;
use patchguard::learner::Hyperparams;
use proptest::prelude::*;

#[test]
fn approach_rows_reproduce() {
    assert!(mismatches(&APPROACHES, 0.01).is_empty(), "{:?}", mismatches(&APPROACHES, 0.01));
}

#[test]
fn tool_rows_reproduce_except_misprints() {
    let found: BTreeSet<(&str, &str)> = mismatches(&TOOLS, 0.01).into_iter().map(|(r, m, _, _)| (r, m)).collect();
    assert_eq!(found, KNOWN_MISPRINTS.into_iter().collect());
}

fn split(name: &str, c: Confusion) -> SplitResult {
    SplitResult {
        name: name.into(),
        confusion: c,
        metrics: metrics(&c),
        trained_on: Vec::new(),
        synthetic: Default::default(),
        outcomes: Vec::new(),
    }
}

#[test]
fn project_totals_pool() {
    let splits = PROJECTS.iter().map(|&(p, tp, fp, tn, fn_)| split(p, Confusion::new(tp, fp, tn, fn_))).collect();
    let report = EvalReport::from_splits(GroupKey::Project, splits);
    let ((tp, fp, tn, fn_), printed) = tables::PROJECT_TOTAL;
    assert_eq!(report.splits.len(), 26);
    assert_eq!(report.aggregate, Confusion::new(tp, fp, tn, fn_));
    let m = report.aggregate_metrics;
    for (got, want) in [m.precision, m.recall, m.accuracy].into_iter().zip(printed) {
        assert!((100.0 * got.unwrap() - want).abs() <= 0.05, "{got:?} vs {want}");
    }
    for (name, acc) in tables::CORRECT_ONLY_ACCURACY {
        let s = report.splits.iter().find(|s| s.name == name).unwrap();
        assert_eq!((s.metrics.precision, s.metrics.recall), (None, None), "{name}");
        assert!((100.0 * s.metrics.accuracy.unwrap() - acc).abs() <= 0.05, "{name}");
    }
}

fn fast() -> EvalConfig {
    EvalConfig { hp: Hyperparams { rounds: 20, ..Hyperparams::default() }, ..EvalConfig::default() }
}

#[test]
fn kfold_has_no_leakage() {
    let ds = blobs(80, 1, 2);
    let cfg = fast();
    let report = kfold_cv(&ds, 10, &cfg).unwrap();
    let plan = kfold_plan(&ds, 10, cfg.hp.seed).unwrap();
    assert_eq!(report.grouping_key, GroupKey::Fold);
    audit(&ds, &report, 15, |s| {
        let p = plan.iter().find(|p| p.name == s.name).unwrap();
        p.test.iter().map(|&i| ds.rows[i].patch_id.clone()).collect()
    });
    assert!(report.splits.iter().any(|s| !s.synthetic.is_empty()), "resampling never ran");
    assert!(report.aggregate_metrics.accuracy.unwrap() >= 0.95, "{:?}", report.aggregate);
}

#[test]
fn group_protocols_have_no_leakage() {
    let ds = blobs(60, 2, 0);
    for key in [GroupKey::Project, GroupKey::Tool] {
        let report = leave_one_group_out(&ds, key, &fast()).unwrap();
        assert_eq!(report.splits.len(), if key == GroupKey::Project { 3 } else { 2 });
        audit(&ds, &report, 15, |s| {
            ds.rows
                .iter()
                .filter(|r| (if key == GroupKey::Project { &r.project } else { &r.tool }) == &s.name)
                .map(|r| r.patch_id.clone())
                .collect()
        });
    }
}

#[test]
fn one_class_group_has_absent_precision_and_recall() {
    let mut ds = blobs(40, 3, 0);
    for (i, label) in [Label::Correct, Label::Correct, Label::Correct].into_iter().enumerate() {
        ds.rows.push(row(100 + i, "Wicket", "Arja", label, vec![0.5; 20]));
    }
    let report = leave_one_group_out(&ds, GroupKey::Project, &fast()).unwrap();
    let solo = report.splits.iter().find(|s| s.name == "Wicket").unwrap();
    let Metrics { precision, recall, accuracy, .. } = solo.metrics;
    assert_eq!((precision, recall), (None, None));
    assert!(accuracy.is_some());
    assert_eq!(solo.confusion.tp + solo.confusion.fn_, 0);
    assert!(report.aggregate_metrics.precision.is_some());
}

#[test]
fn protocol_errors() {
    let ds = blobs(8, 4, 0);
    assert!(matches!(kfold_cv(&ds, 9, &fast()), Err(EvalError::TooFewRows { rows: 8, k: 9 })));
    let mut single = ds.clone();
    single.rows.iter_mut().for_each(|r| r.project = "Math".into());
    assert!(matches!(leave_one_group_out(&single, GroupKey::Project, &fast()), Err(EvalError::SingleGroup(_))));
    let mut resampled = ds.clone();
    resampled.provenance.resampled = true;
    assert!(kfold_cv(&resampled, 2, &fast()).is_err());
}

#[test]
fn fisher_selects_the_separating_column() {
    // column 0: 0,1 vs 3,4 (means 0.5 and 3.5); column 1: noise
    let rows = vec![
        row(0, "P", "T", Label::Correct, vec![0.0, 5.0]),
        row(1, "P", "T", Label::Correct, vec![1.0, 1.0]),
        row(2, "P", "T", Label::Overfitting, vec![3.0, 2.0]),
        row(3, "P", "T", Label::Overfitting, vec![4.0, 4.0]),
    ];
    let ds = Dataset::new("1.0.0", vec!["sep".into(), "noise".into()], rows);
    let ranking = fisher_ranking(&ds).unwrap();
    // between: 2*1.5^2*2 = 9, within: 0.25*4 = 1
    assert_eq!(ranking[0], (0, 9.0));
    // means 3 and 3: no between-class spread
    assert_eq!(ranking[1], (1, 0.0));
    assert_eq!(top_k_features(&ds, 1).unwrap().names, ["sep"]);
    assert_eq!(top_k_features(&ds, 2).unwrap().columns, [0, 1]);
    assert!(matches!(top_k_features(&ds, 3), Err(EvalError::KOutOfRange { k: 3, max: 2 })));
    assert!(matches!(top_k_features(&ds, 0), Err(EvalError::KOutOfRange { .. })));
}

proptest! {
    #[test]
    fn metric_identities(tp in 0usize..500, fp in 0usize..500, tn in 0usize..500, fn_ in 0usize..500) {
        let c = Confusion::new(tp, fp, tn, fn_);
        let m = metrics(&c);
        if let Some(a) = m.accuracy {
            prop_assert!((a * c.total() as f64 - (tp + tn) as f64).abs() < 1e-9);
        } else {
            prop_assert_eq!(c.total(), 0);
        }
        for v in [m.precision, m.recall, m.accuracy, m.cpr].into_iter().flatten() {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert_eq!(m.cpr.is_none(), tn + fn_ == 0);
    }

    #[test]
    fn folds_partition(n in 4usize..60, k in 2usize..10, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let ds = blobs(n, 5, 0);
        let plan = kfold_plan(&ds, k, seed).unwrap();
        let mut seen = vec![0; n];
        for s in &plan {
            for &i in &s.test {
                seen[i] += 1;
            }
            prop_assert_eq!(s.train.len() + s.test.len(), n);
            prop_assert!(s.test.iter().all(|i| !s.train.contains(i)));
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        let sizes: Vec<usize> = plan.iter().map(|s| s.test.len()).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }
}
