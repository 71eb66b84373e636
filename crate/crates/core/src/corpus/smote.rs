//! SMOTE oversampling of the minority class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CorpusError, Dataset, SyntheticOrigin};
use crate::features::matrix::{Label, MatrixRow};

pub const SMOTE_K: usize = 5;

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// For each minority row, the positions (within `minority`) of its `k`
/// nearest other minority rows, ties broken by position.
fn neighbours(ds: &Dataset, minority: &[usize], k: usize) -> Vec<Vec<usize>> {
    minority
        .par_iter()
        .enumerate()
        .map(|(i, &row)| {
            let x = &ds.rows[row].values;
            let mut dists: Vec<(f64, usize)> = minority
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, &other)| (squared_distance(x, &ds.rows[other].values), j))
                .collect();
            dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            dists.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect()
}

/// Appends synthetic minority rows until both classes have the same count.
/// Each synthetic row is `x + u (x_nn - x)` for a random minority row `x`,
/// one of its `k` nearest minority neighbours `x_nn`, and `u` uniform in
/// `[0, 1)`. Original rows pass through unchanged.
pub fn smote_minority(ds: &Dataset, k: usize, seed: u64) -> Result<Dataset, CorpusError> {
    let labels = ds.labels()?;
    let (correct, overfitting) = ds.class_counts();
    if correct == 0 || overfitting == 0 {
        return Err(CorpusError::SingleClass);
    }
    let (minority_label, need) = if correct < overfitting {
        (Label::Correct, overfitting - correct)
    } else {
        (Label::Overfitting, correct - overfitting)
    };
    let minority: Vec<usize> = (0..ds.len()).filter(|&i| labels[i] == minority_label).collect();
    if need > 0 && minority.len() < 2 {
        return Err(CorpusError::TooFewMinority(minority.len()));
    }
    let mut out = ds.clone();
    out.provenance.resampled = true;
    if need == 0 {
        return Ok(out);
    }
    let near = neighbours(ds, &minority, k.max(1).min(minority.len() - 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..need {
        let i = rng.gen_range(0..minority.len());
        let j = near[i][rng.gen_range(0..near[i].len())];
        let u: f64 = rng.gen();
        let (x, nn) = (&ds.rows[minority[i]], &ds.rows[minority[j]]);
        let values = x.values.iter().zip(&nn.values).map(|(a, b)| a + u * (b - a)).collect();
        let patch_id = format!("{}#smote{s}", x.patch_id);
        out.synthetic.insert(
            patch_id.clone(),
            SyntheticOrigin { base: x.patch_id.clone(), neighbor: nn.patch_id.clone() },
        );
        out.rows.push(MatrixRow { patch_id, project: x.project.clone(), tool: x.tool.clone(), label: Some(minority_label), values });
    }
    log::debug!("smote added {need} {minority_label:?} rows");
    Ok(out)
}
