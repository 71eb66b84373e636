//! Regression trees fitted to logistic-loss gradients with exact greedy
//! split search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// L2 penalty on leaf weights.
pub const LAMBDA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeNode {
    Leaf {
        weight: f64,
    },
    /// Rows with `x[feature] < threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        gain: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { weight } => return *weight,
                TreeNode::Split { feature, threshold, left, right, .. } => {
                    node = if x[*feature] < *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Every split node, pre-order, as `(feature, threshold, gain)`.
    pub fn splits(&self) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            if let TreeNode::Split { feature, threshold, gain, left, right } = n {
                out.push((*feature, *threshold, *gain));
                stack.push(right);
                stack.push(left);
            }
        }
        out
    }
}

pub(crate) struct TreeParams {
    pub max_depth: usize,
    pub min_split_gain: f64,
    pub learning_rate: f64,
}

/// The best split of one node: gain, feature, threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitChoice {
    pub gain: f64,
    pub feature: usize,
    pub threshold: f64,
}

/// Gains this close (relative) count as tied, so summation order cannot
/// override the tie-break.
const TIE_TOLERANCE: f64 = 1e-10;

fn beats(gain: f64, incumbent: f64) -> bool {
    gain > incumbent + TIE_TOLERANCE * incumbent.abs().max(1e-12)
}

fn score(g: f64, h: f64) -> f64 {
    g * g / (h + LAMBDA)
}

/// Structure-score improvement of splitting `(g, h)` into left and right.
pub fn split_gain(gl: f64, hl: f64, g: f64, h: f64) -> f64 {
    0.5 * (score(gl, hl) + score(g - gl, h - hl) - score(g, h))
}

pub fn leaf_weight(g: f64, h: f64) -> f64 {
    -g / (h + LAMBDA)
}

/// Row indices of one node, sorted by each feature's value.
#[derive(Clone)]
pub(crate) struct NodeRows {
    pub rows: Vec<u32>,
    pub by_feature: Vec<Vec<u32>>,
}

impl NodeRows {
    /// All rows, presorted once per training run.
    pub fn root(x: &[Vec<f64>], n_features: usize) -> Self {
        let by_feature = (0..n_features)
            .into_par_iter()
            .map(|f| {
                let mut idx: Vec<u32> = (0..x.len() as u32).collect();
                idx.sort_by(|&a, &b| x[a as usize][f].total_cmp(&x[b as usize][f]).then(a.cmp(&b)));
                idx
            })
            .collect();
        NodeRows { rows: (0..x.len() as u32).collect(), by_feature }
    }

    /// Stable partition into the rows going left and right.
    fn split(self, goes_left: &[bool]) -> (NodeRows, NodeRows) {
        let part = |v: Vec<u32>| -> (Vec<u32>, Vec<u32>) { v.into_iter().partition(|&i| goes_left[i as usize]) };
        let (rl, rr) = part(self.rows);
        let (fl, fr) = self.by_feature.into_par_iter().map(part).unzip();
        (NodeRows { rows: rl, by_feature: fl }, NodeRows { rows: rr, by_feature: fr })
    }

    fn sums(&self, grad: &[f64], hess: &[f64]) -> (f64, f64) {
        self.rows.iter().fold((0.0, 0.0), |(g, h), &i| (g + grad[i as usize], h + hess[i as usize]))
    }
}

/// Best split over all features of one node. Ties go to the lowest
/// feature, then the lowest threshold.
pub(crate) fn best_split(x: &[Vec<f64>], grad: &[f64], hess: &[f64], node: &NodeRows) -> Option<SplitChoice> {
    let (g, h) = node.sums(grad, hess);
    let per_feature: Vec<Option<SplitChoice>> = node
        .by_feature
        .par_iter()
        .enumerate()
        .map(|(f, order)| {
            let mut best: Option<SplitChoice> = None;
            let (mut gl, mut hl) = (0.0, 0.0);
            let mut prev: Option<f64> = None;
            for &i in order {
                let i = i as usize;
                let v = x[i][f];
                if let Some(p) = prev.filter(|&p| p < v) {
                    let gain = split_gain(gl, hl, g, h);
                    if best.is_none_or(|b| beats(gain, b.gain)) {
                        best = Some(SplitChoice { gain, feature: f, threshold: p + (v - p) / 2.0 });
                    }
                }
                gl += grad[i];
                hl += hess[i];
                prev = Some(v);
            }
            best
        })
        .collect();
    per_feature
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<SplitChoice>, c| match acc {
            Some(a) if !beats(c.gain, a.gain) => Some(a),
            _ => Some(c),
        })
}

pub(crate) fn grow(
    x: &[Vec<f64>],
    grad: &[f64],
    hess: &[f64],
    node: NodeRows,
    params: &TreeParams,
    depth: usize,
) -> TreeNode {
    let split = if depth < params.max_depth { best_split(x, grad, hess, &node) } else { None };
    match split.filter(|s| s.gain > 0.0 && s.gain >= params.min_split_gain) {
        Some(s) => {
            let goes_left: Vec<bool> = x.iter().map(|r| r[s.feature] < s.threshold).collect();
            let (left, right) = node.split(&goes_left);
            TreeNode::Split {
                feature: s.feature,
                threshold: s.threshold,
                gain: s.gain,
                left: Box::new(grow(x, grad, hess, left, params, depth + 1)),
                right: Box::new(grow(x, grad, hess, right, params, depth + 1)),
            }
        }
        None => {
            let (g, h) = node.sums(grad, hess);
            TreeNode::Leaf { weight: params.learning_rate * leaf_weight(g, h) }
        }
    }
}
