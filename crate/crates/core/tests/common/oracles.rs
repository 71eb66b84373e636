//! Independent reference implementations and shared test data.

use patchguard::corpus::Dataset;
use patchguard::features::{FeatureKind, FeatureSchema};
use patchguard::features::matrix::{Label, MatrixRow};
use rand::{Rng, SeedableRng};

/// Exhaustive search over every midpoint, scoring each split from scratch.
pub fn oracle_stump(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let prior = ys.iter().sum::<f64>() / ys.len() as f64;
    let p0 = prior; // sigmoid(log-odds(prior)) is the prior itself
    let g: Vec<f64> = ys.iter().map(|y| p0 - y).collect();
    let h = p0 * (1.0 - p0);
    let mut values = xs.to_vec();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let obj = |gs: f64, n: f64| gs * gs / (n * h + 1.0);
    let total: f64 = g.iter().sum();
    let mut best: Option<(f64, f64)> = None;
    for w in values.windows(2) {
        let t = (w[0] + w[1]) / 2.0;
        let (mut gl, mut nl) = (0.0, 0.0);
        for (x, gi) in xs.iter().zip(&g) {
            if *x < t {
                gl += gi;
                nl += 1.0;
            }
        }
        let n = xs.len() as f64;
        let gain = 0.5 * (obj(gl, nl) + obj(total - gl, n - nl) - obj(total, n));
        if best.is_none_or(|(bg, _)| gain > bg + 1e-12) {
            best = Some((gain, t));
        }
    }
    best
}

/// Quartile by hand: weight the two neighbouring order statistics.
pub fn oracle_quartile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (v.len() as f64 - 1.0);
    let below = pos as usize;
    if below + 1 >= v.len() {
        return v[below];
    }
    let w = pos - below as f64;
    (1.0 - w) * v[below] + w * v[below + 1]
}

/// Whether `z` lies on the segment from `a` to `b`.
pub fn on_segment(z: &[f64], a: &[f64], b: &[f64]) -> bool {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let len2: f64 = d.iter().map(|x| x * x).sum();
    let t = if len2 == 0.0 { 0.0 } else { z.iter().zip(a).zip(&d).map(|((z, a), d)| (z - a) * d).sum::<f64>() / len2 };
    (-1e-9..=1.0 + 1e-9).contains(&t)
        && z.iter().zip(a).zip(&d).all(|((z, a), d)| (a + t * d - z).abs() < 1e-6)
}

pub fn row(i: usize, project: &str, tool: &str, label: Label, values: Vec<f64>) -> MatrixRow {
    MatrixRow { patch_id: format!("p{i:03}"), project: project.into(), tool: tool.into(), label: Some(label), values }
}

/// Two noisy blobs, one correct for every two overfitting, spread over
/// three projects and two tools. `outliers` rows get extreme values.
pub fn blobs(n: usize, seed: u64, outliers: usize) -> Dataset {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|i| {
            let label = if i % 3 == 0 { Label::Correct } else { Label::Overfitting };
            let centre = if label == Label::Overfitting { 4.0 } else { 0.0 };
            let mut values: Vec<f64> = (0..20).map(|_| centre + rng.gen_range(-1.0..1.0)).collect();
            if i < outliers {
                values.iter_mut().for_each(|v| *v = 500.0);
            }
            row(i, ["Math", "Lang", "Chart"][(i / 3) % 3], ["Arja", "Kali"][i % 2], label, values)
        })
        .collect();
    Dataset::new("1.0.0", (0..20).map(|c| format!("c{c}")).collect(), rows)
}

/// 99 ordinary rows plus `p099`, far outside the fences in `outlied` of its
/// 20 columns.
pub fn planted(outlied: usize) -> Dataset {
    let cols = 20;
    let mut rows: Vec<MatrixRow> = (0..99)
        .map(|i| row(i, "P", "T", if i % 3 == 0 { Label::Correct } else { Label::Overfitting }, (0..cols).map(|c| ((i * 7 + c * 3) % 10) as f64).collect()))
        .collect();
    let mut target: Vec<f64> = (0..cols).map(|c| (c % 10) as f64).collect();
    for v in target.iter_mut().take(outlied) {
        *v = 1000.0;
    }
    rows.push(row(99, "P", "T", Label::Correct, target));
    Dataset::new("1.0.0", (0..cols).map(|c| format!("c{c}")).collect(), rows)
}

/// Each one-hot group as a range of expanded columns.
pub fn one_hot_groups(schema: &FeatureSchema) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut at = 0;
    for e in &schema.entries {
        match e.kind {
            FeatureKind::Binary => at += 1,
            FeatureKind::String => {
                let n = schema.vocab(&e.name).len();
                out.push(at..at + n);
                at += n;
            }
        }
    }
    out
}
