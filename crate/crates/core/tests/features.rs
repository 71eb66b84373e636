mod common;

use common::javagen::Gen;
use common::java;
use common::oracles::one_hot_groups;
use patchguard::diff::diff;
use patchguard::features::{encode, extract, FeatureError, FeatureKind, FeatureSchema, RawFeatures, RawValue};
use proptest::prelude::*;

fn features(buggy: &str, patched: &str) -> RawFeatures {
    let (b, p) = (java(buggy), java(patched));
    extract(&b, &p, &diff(&b, &p).unwrap())
}

fn fixture(name: &str) -> (String, String) {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    let read = |f: &str| std::fs::read_to_string(dir.join(f)).unwrap();
    (read("buggy.java"), read("patched.java"))
}

#[test]
fn wrap_with_if_golden() {
    let (b, p) = fixture("wrap_if");
    let raw = features(&b, &p);
    let on = ["wrapsIf", "condBlockOthersAdd", "SRC_opEqual", "SRC_uopDec", "SRC_localVar"];
    let off = ["condBlockRetAdd", "SRC_opAdd", "SRC_assignZero", "notClassified", "codeMove"];
    for name in on {
        assert_eq!(raw.flag(name), Some(true), "{name}");
    }
    for name in off {
        assert_eq!(raw.flag(name), Some(false), "{name}");
    }
    let patterns: Vec<_> = patchguard::features::schema::PATTERN_FEATURES
        .iter()
        .filter(|n| raw.flag(n) == Some(true))
        .collect();
    assert_eq!(patterns, [&"wrapsIf", &"condBlockOthersAdd"]);
    assert_eq!(raw.text("typeOfFaultyStatementParent"), Some("method"));

    let schema = FeatureSchema::v1();
    let v = encode(&[raw], &schema).unwrap();
    let cols = schema.expanded_columns();
    let col = |name: &str| v.values[cols.iter().position(|c| c == name).unwrap()];
    assert_eq!(col("typeOfFaultyStatementParent_method"), 1);
    let siblings: u32 = cols
        .iter()
        .zip(&v.values)
        .filter(|(c, _)| c.starts_with("typeOfFaultyStatementParent_"))
        .map(|(_, &x)| x)
        .sum();
    assert_eq!(siblings, 1);
}

#[test]
fn unread_field_is_reported() {
    let raw = features(
        "class A { int cache; int f(int a) { return a + 1; } }",
        "class A { int cache; int f(int a) { return a + 2; } }",
    );
    assert_eq!(raw.flag("fieldNotUsed"), Some(true));
    assert_eq!(raw.flag("fieldNotAssigned"), Some(true));
    let raw = features(
        "class A { int cache = 0; int f(int a) { return a + cache; } }",
        "class A { int cache = 0; int f(int a) { return a - cache; } }",
    );
    assert_eq!(raw.flag("fieldNotUsed"), Some(false));
    assert_eq!(raw.flag("fieldNotAssigned"), Some(false));
}

#[test]
fn first_statement_of_block_has_empty_former_window() {
    let raw = features(
        "class A { void f(int a) { a = 1; g(a); } }",
        "class A { void f(int a) { a = 2; g(a); } }",
    );
    let former: Vec<_> = raw.values.iter().filter(|(k, _)| k.starts_with("FORMER_")).collect();
    assert_eq!(former.len(), 50);
    assert!(former.iter().all(|(_, v)| **v == RawValue::Flag(false)));
    for i in 1..=3 {
        assert_eq!(raw.text(&format!("typeOfFaultyStatementBefore{i}")), Some("none"));
    }
}

#[test]
fn accumulation_over_two_diffs() {
    let raw = features(
        "class A { void f() { int x = 1; g(x); } }",
        "class A { void f() { int x = 2; g(x); } }",
    );
    assert_eq!(raw.flag("SRC_localVar"), Some(true));
    let schema = FeatureSchema::v1();
    let cols = schema.expanded_columns();
    let v = encode(&[raw.clone(), raw], &schema).unwrap();
    assert_eq!(v.values[cols.iter().position(|c| c == "SRC_localVar").unwrap()], 2);
    assert!(matches!(encode(&[], &schema), Err(FeatureError::SchemaMismatch(_))));
}

fn arb_raw() -> impl Strategy<Value = RawFeatures> {
    let schema = FeatureSchema::v1();
    let n = schema.raw_len();
    proptest::collection::vec(any::<u16>(), n).prop_map(move |seeds| {
        let mut raw = RawFeatures::default();
        for (e, s) in schema.entries.iter().zip(seeds) {
            let value = match e.kind {
                FeatureKind::Binary => RawValue::Flag(s % 2 == 1),
                FeatureKind::String => {
                    let vocab = schema.vocab(&e.name);
                    RawValue::Text(vocab[s as usize % vocab.len()].clone())
                }
            };
            raw.values.insert(e.name.clone(), value);
        }
        raw
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn encoding_shape_and_one_hot(diffs in proptest::collection::vec(arb_raw(), 1..5)) {
        let schema = FeatureSchema::v1();
        let groups = one_hot_groups(&schema);
        for d in &diffs {
            let v = encode(std::slice::from_ref(d), &schema).unwrap();
            prop_assert_eq!(v.values.len(), schema.expanded_len());
            prop_assert!(v.values.iter().all(|&x| x <= 1));
            for g in &groups {
                prop_assert_eq!(v.values[g.clone()].iter().sum::<u32>(), 1);
            }
        }
        let all = encode(&diffs, &schema).unwrap();
        prop_assert_eq!(all.values.len(), schema.expanded_len());
        for g in &groups {
            prop_assert_eq!(all.values[g.clone()].iter().sum::<u32>() as usize, diffs.len());
        }
    }

    #[test]
    fn accumulation_is_monotone(diffs in proptest::collection::vec(arb_raw(), 2..5), cut in 1usize..4) {
        let schema = FeatureSchema::v1();
        let cut = cut.min(diffs.len() - 1);
        let sub = encode(&diffs[..cut], &schema).unwrap();
        let sup = encode(&diffs, &schema).unwrap();
        prop_assert!(sub.values.iter().zip(&sup.values).all(|(a, b)| a <= b));
    }

    /// Code outside the changed method never moves the vector: adding an
    /// unrelated method with its own locals to both sides leaves every
    /// feature unchanged.
    #[test]
    fn unrelated_code_does_not_leak(seed in any::<u64>(), noise_seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let base = g.class();
        let patched = g.mutate(&base);
        let (b, p) = (base.to_java(), patched.to_java());
        let plain = features(&b, &p);
        let noise = noise_method(noise_seed);
        let with = |src: &str| {
            let end = src.rfind('}').unwrap();
            format!("{}{}}}\n", &src[..end], noise)
        };
        let noisy = features(&with(&b), &with(&p));
        prop_assert_eq!(plain, noisy);
    }
}

/// A method over its own identifiers, disjoint from the generator's.
fn noise_method(seed: u64) -> String {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut body = String::from("        int z0 = 1;\n");
    let mut vars = 1;
    for _ in 0..rng.gen_range(1..8) {
        let a = rng.gen_range(0..vars);
        let lit = rng.gen_range(0..9);
        let line = match rng.gen_range(0..5) {
            0 => {
                vars += 1;
                format!("int z{} = z{a} * {lit};", vars - 1)
            }
            1 => format!("z{a} = z{a} - {lit};"),
            2 => format!("if (z{a} >= {lit}) {{ sink{lit}(z{a}); }}"),
            3 => format!("while (z{a} < {lit}) {{ z{a}++; }}"),
            _ => format!("sink{lit}(z{a} % 3);"),
        };
        body.push_str(&format!("        {line}\n"));
    }
    format!("    void unrelatedNoise() {{\n{body}    }}\n")
}
