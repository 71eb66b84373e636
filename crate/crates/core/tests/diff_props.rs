mod common;

use common::javagen::Gen;
use common::trees::{build, LABELS};
use common::{java, ted};
use patchguard::ast::NormalizedAst;
use patchguard::diff::{apply, changed_statements, diff, EditOp, EditScript};
use proptest::prelude::*;

fn check_script(b: &NormalizedAst, p: &NormalizedAst, script: &EditScript) {
    let out = apply(b, script).expect("script applies");
    assert!(out.isomorphic_to(p), "round trip failed\n{}\n---\n{}", out.dump(), p.dump());
    out.validate().unwrap();
    for &(s, d) in &script.mapping {
        assert_eq!(b.kind(s), p.kind(d));
    }
    for a in &script.actions {
        match a.op {
            EditOp::Upd | EditOp::Mov => assert!(a.src_node.is_some() && a.dst_node.is_some()),
            EditOp::Add => assert!(a.src_node.is_none() && a.dst_node.is_some() && a.position.is_some()),
            EditOp::Del => assert!(a.src_node.is_some() && a.dst_node.is_none()),
        }
        if matches!(a.op, EditOp::Del | EditOp::Upd) {
            let s = a.src_node.unwrap();
            assert!(script.mapping.iter().all(|&(m, _)| m != s), "{s:?} both mapped and {}", a.op);
        }
    }
}

fn tree_strategy(max: usize) -> impl Strategy<Value = Vec<(usize, usize, usize)>> {
    prop::collection::vec((0usize..64, 0usize..16, 0usize..16), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn java_round_trip(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let base = g.class();
        let mutant = g.mutate(&base);
        let (b, p) = (java(&base.to_java()), java(&mutant.to_java()));
        let script = diff(&b, &p).unwrap();
        check_script(&b, &p, &script);
        let (src, dst) = changed_statements(&script, &b, &p);
        prop_assert_eq!(script.is_empty(), src.is_empty() && dst.is_empty());
    }

    #[test]
    fn single_relabel_is_one_update(nodes in tree_strategy(20), pick in any::<usize>(), shift in 1usize..LABELS.len()) {
        let b = build(&nodes);
        let leaves: Vec<usize> = (0..b.len()).filter(|&i| b.nodes[i].children.is_empty()).collect();
        let leaf = leaves[pick % leaves.len()];
        let mut p = b.clone();
        let old = LABELS.iter().position(|l| *l == p.nodes[leaf].label).unwrap();
        p.nodes[leaf].label = LABELS[(old + shift) % LABELS.len()].to_string();
        prop_assert_eq!(ted::distance(&b, &p), 1);
        let script = diff(&b, &p).unwrap();
        check_script(&b, &p, &script);
        prop_assert_eq!(script.actions.len(), 1, "{}", script.to_text(&b, &p));
        prop_assert_eq!(script.actions[0].op, EditOp::Upd);
        prop_assert_eq!(script.actions[0].src_node.unwrap().index(), leaf);
    }

    #[test]
    fn random_tree_pairs_round_trip(a in tree_strategy(20), c in tree_strategy(20)) {
        let (b, p) = (build(&a), build(&c));
        let script = diff(&b, &p).unwrap();
        check_script(&b, &p, &script);
        if script.count(EditOp::Mov) == 0 {
            prop_assert!(script.actions.len() >= ted::distance(&b, &p));
        }
    }
}

#[test]
fn ted_oracle_sanity() {
    let x = java("class A { int f() { return 0; } }");
    let y = java("class A { int f() { return 1; } }");
    assert_eq!(ted::distance(&x, &x), 0);
    assert_eq!(ted::distance(&x, &y), 1);
    let z = java("class A { int f() { g(); return 0; } }");
    // ExprStmt, MethodCall, MethodName
    assert_eq!(ted::distance(&x, &z), 3);
}

#[test]
fn generator_produces_varied_edits() {
    let mut totals = [0usize; 4];
    let mut empty = 0;
    for seed in 0..200 {
        let mut g = Gen::new(seed);
        let base = g.class();
        let mutant = g.mutate(&base);
        let (b, p) = (java(&base.to_java()), java(&mutant.to_java()));
        let script = diff(&b, &p).unwrap();
        empty += script.is_empty() as usize;
        for (i, op) in [EditOp::Upd, EditOp::Add, EditOp::Del, EditOp::Mov].into_iter().enumerate() {
            totals[i] += script.count(op);
        }
    }
    assert!(empty < 40, "{empty} of 200 mutations were no-ops");
    assert!(totals.iter().all(|&t| t > 0), "{totals:?}");
}
