//! Node matching between two trees: greedy top-down subtree matching,
//! bottom-up container matching by dice similarity, and a child-alignment
//! recovery pass.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::ast::{NodeId, NormalizedAst};

const MIN_HEIGHT: usize = 2;
const MIN_DICE: f64 = 0.5;

/// Per-tree precomputed shape facts. Node ids are pre-order indices, so the
/// subtree of `n` is exactly the id range `n .. n + size[n]`.
pub(crate) struct TreeInfo<'a> {
    pub ast: &'a NormalizedAst,
    pub size: Vec<usize>,
    pub height: Vec<usize>,
    pub hash: Vec<u64>,
    pub depth: Vec<usize>,
}

impl<'a> TreeInfo<'a> {
    pub fn new(ast: &'a NormalizedAst) -> Self {
        let n = ast.len();
        let mut size = vec![1; n];
        let mut height = vec![1; n];
        let mut hash = vec![0u64; n];
        let mut depth = vec![0; n];
        for id in ast.preorder() {
            if let Some(p) = ast.parent(id) {
                depth[id.index()] = depth[p.index()] + 1;
            }
        }
        for id in ast.postorder() {
            let node = ast.node(id);
            let mut h = DefaultHasher::new();
            node.kind.hash(&mut h);
            node.label.hash(&mut h);
            for &c in &node.children {
                size[id.index()] += size[c.index()];
                height[id.index()] = height[id.index()].max(height[c.index()] + 1);
                hash[c.index()].hash(&mut h);
            }
            node.children.len().hash(&mut h);
            hash[id.index()] = h.finish();
        }
        TreeInfo { ast, size, height, hash, depth }
    }

    pub fn descendants(&self, id: NodeId) -> impl Iterator<Item = NodeId> {
        (id.0 + 1..id.0 + self.size[id.index()] as u32).map(NodeId)
    }

    pub fn contains(&self, ancestor: NodeId, node: NodeId) -> bool {
        node.0 >= ancestor.0 && (node.0 as usize) < ancestor.index() + self.size[ancestor.index()]
    }
}

/// Partial bijection between source and destination node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    src_to_dst: Vec<Option<NodeId>>,
    dst_to_src: Vec<Option<NodeId>>,
}

impl Matching {
    pub fn new(src_len: usize, dst_len: usize) -> Self {
        Matching { src_to_dst: vec![None; src_len], dst_to_src: vec![None; dst_len] }
    }

    pub fn from_pairs(src_len: usize, dst_len: usize, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut m = Matching::new(src_len, dst_len);
        for (s, d) in pairs {
            if s.index() < src_len && d.index() < dst_len {
                m.link(s, d);
            }
        }
        m
    }

    pub fn link(&mut self, s: NodeId, d: NodeId) {
        self.src_to_dst[s.index()] = Some(d);
        self.dst_to_src[d.index()] = Some(s);
    }

    pub fn dst_of(&self, s: NodeId) -> Option<NodeId> {
        self.src_to_dst.get(s.index()).copied().flatten()
    }

    pub fn src_of(&self, d: NodeId) -> Option<NodeId> {
        self.dst_to_src.get(d.index()).copied().flatten()
    }

    pub fn has_src(&self, s: NodeId) -> bool {
        self.dst_of(s).is_some()
    }

    pub fn has_dst(&self, d: NodeId) -> bool {
        self.src_of(d).is_some()
    }

    /// Pairs in source pre-order.
    pub fn pairs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.src_to_dst
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|d| (NodeId(i as u32), d)))
    }

    pub fn len(&self) -> usize {
        self.pairs().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub(crate) struct Matcher<'a> {
    pub src: TreeInfo<'a>,
    pub dst: TreeInfo<'a>,
    pub m: Matching,
}

impl<'a> Matcher<'a> {
    pub fn new(src: &'a NormalizedAst, dst: &'a NormalizedAst) -> Self {
        let src = TreeInfo::new(src);
        let dst = TreeInfo::new(dst);
        let m = Matching::new(src.ast.len(), dst.ast.len());
        Matcher { src, dst, m }
    }

    pub fn run(mut self) -> Matching {
        self.top_down();
        self.bottom_up();
        self.recover_all();
        self.match_moved_subtrees();
        self.recover_all();
        self.m
    }

    fn isomorphic(&self, s: NodeId, d: NodeId) -> bool {
        self.src.hash[s.index()] == self.dst.hash[d.index()]
            && self.src.size[s.index()] == self.dst.size[d.index()]
            && self.src.ast.isomorphic(s, self.dst.ast, d)
    }

    fn map_subtree(&mut self, s: NodeId, d: NodeId) {
        for (a, b) in self.src.ast.subtree(s).into_iter().zip(self.dst.ast.subtree(d)) {
            self.m.link(a, b);
        }
    }

    fn subtree_free(&self, s: NodeId, d: NodeId) -> bool {
        std::iter::once(s).chain(self.src.descendants(s)).all(|n| !self.m.has_src(n))
            && std::iter::once(d).chain(self.dst.descendants(d)).all(|n| !self.m.has_dst(n))
    }

    fn dice(&self, s: NodeId, d: NodeId) -> f64 {
        let ns = self.src.size[s.index()] - 1;
        let nd = self.dst.size[d.index()] - 1;
        if ns + nd == 0 {
            return 0.0;
        }
        let common = self
            .src
            .descendants(s)
            .filter(|&n| self.m.dst_of(n).is_some_and(|p| self.dst.contains(d, p) && p != d))
            .count();
        2.0 * common as f64 / (ns + nd) as f64
    }

    /// Ordering key for competing candidate pairs; smaller is better.
    fn tie_key(&self, s: NodeId, d: NodeId, primary: f64) -> (std::cmp::Reverse<u64>, usize, usize, u32, u32) {
        let depth_gap = self.src.depth[s.index()].abs_diff(self.dst.depth[d.index()]);
        let pos_gap = s.index().abs_diff(d.index());
        (std::cmp::Reverse((primary * 1e9) as u64), depth_gap, pos_gap, s.0, d.0)
    }

    fn parent_dice(&self, s: NodeId, d: NodeId) -> f64 {
        match (self.src.ast.parent(s), self.dst.ast.parent(d)) {
            (Some(ps), Some(pd)) => self.dice(ps, pd),
            _ => 0.0,
        }
    }

    fn top_down(&mut self) {
        let mut l1 = HeightQueue::new(&self.src, self.src.ast.root);
        let mut l2 = HeightQueue::new(&self.dst, self.dst.ast.root);
        let mut ambiguous: Vec<(NodeId, NodeId)> = Vec::new();
        loop {
            let (h1, h2) = (l1.peek_height(), l2.peek_height());
            let h = h1.min(h2);
            if h1 == 0 || h2 == 0 {
                break;
            }
            if h1 != h2 {
                if h1 > h2 {
                    for n in l1.pop_height(h1) {
                        l1.open(&self.src, n);
                    }
                } else {
                    for n in l2.pop_height(h2) {
                        l2.open(&self.dst, n);
                    }
                }
                continue;
            }
            let c1 = l1.pop_height(h);
            let c2 = l2.pop_height(h);
            let mut buckets: HashMap<u64, (Vec<NodeId>, Vec<NodeId>)> = HashMap::new();
            for &s in &c1 {
                buckets.entry(self.src.hash[s.index()]).or_default().0.push(s);
            }
            for &d in &c2 {
                buckets.entry(self.dst.hash[d.index()]).or_default().1.push(d);
            }
            let mut used1 = vec![false; c1.len()];
            let mut used2 = vec![false; c2.len()];
            let mut keys: Vec<u64> = buckets.keys().copied().collect();
            keys.sort_unstable();
            for key in keys {
                let (ss, ds) = &buckets[&key];
                let pairs: Vec<(NodeId, NodeId)> = ss
                    .iter()
                    .flat_map(|&s| ds.iter().map(move |&d| (s, d)))
                    .filter(|&(s, d)| self.isomorphic(s, d))
                    .collect();
                if pairs.is_empty() {
                    continue;
                }
                if ss.len() == 1 && ds.len() == 1 {
                    self.map_subtree(pairs[0].0, pairs[0].1);
                } else {
                    ambiguous.extend(pairs.iter().copied());
                }
                for (s, d) in pairs {
                    used1[c1.iter().position(|&x| x == s).unwrap()] = true;
                    used2[c2.iter().position(|&x| x == d).unwrap()] = true;
                }
            }
            for (i, &s) in c1.iter().enumerate() {
                if !used1[i] {
                    l1.open(&self.src, s);
                }
            }
            for (i, &d) in c2.iter().enumerate() {
                if !used2[i] {
                    l2.open(&self.dst, d);
                }
            }
        }
        let mut keyed: Vec<_> = ambiguous
            .into_iter()
            .map(|(s, d)| (self.tie_key(s, d, self.parent_dice(s, d)), s, d))
            .collect();
        keyed.sort();
        for (_, s, d) in keyed {
            if self.subtree_free(s, d) {
                self.map_subtree(s, d);
            }
        }
    }

    fn bottom_up(&mut self) {
        let (sroot, droot) = (self.src.ast.root, self.dst.ast.root);
        for s in self.src.ast.postorder() {
            if s == sroot {
                break;
            }
            if self.m.has_src(s) || self.src.ast.children(s).is_empty() {
                continue;
            }
            let kind = self.src.ast.kind(s);
            let mut candidates: Vec<NodeId> = Vec::new();
            for n in self.src.descendants(s) {
                let Some(p) = self.m.dst_of(n) else { continue };
                for a in self.dst.ast.ancestors(p) {
                    if a != droot && !self.m.has_dst(a) && self.dst.ast.kind(a) == kind {
                        candidates.push(a);
                    }
                }
            }
            candidates.sort_unstable();
            candidates.dedup();
            let best = candidates
                .into_iter()
                .map(|d| (self.dice(s, d), d))
                .filter(|&(dice, _)| dice >= MIN_DICE)
                .min_by_key(|&(dice, d)| self.tie_key(s, d, dice));
            if let Some((_, d)) = best {
                self.m.link(s, d);
                self.recover_subtree(s, d);
            }
        }
        if !self.m.has_src(sroot) && !self.m.has_dst(droot) && self.src.ast.kind(sroot) == self.dst.ast.kind(droot) {
            self.m.link(sroot, droot);
        }
    }

    fn recover_subtree(&mut self, s: NodeId, d: NodeId) {
        let mut queue = vec![(s, d)];
        while let Some((a, b)) = queue.pop() {
            self.recover_children(a, b);
            for &c in self.src.ast.children(a) {
                if let Some(p) = self.m.dst_of(c) {
                    if self.dst.ast.parent(p) == Some(b) && self.src.size[c.index()] > 1 {
                        queue.push((c, p));
                    }
                }
            }
        }
    }

    fn recover_all(&mut self) {
        for s in self.src.ast.breadth_first() {
            if let Some(d) = self.m.dst_of(s) {
                self.recover_children(s, d);
            }
        }
    }

    /// Order-preserving alignment of the children of a matched pair. Pairs
    /// are scored lexicographically: already matched, free isomorphic
    /// subtree, same kind and label, same kind.
    fn recover_children(&mut self, s: NodeId, d: NodeId) {
        let a: Vec<NodeId> = self
            .src
            .ast
            .children(s)
            .iter()
            .copied()
            .filter(|&c| self.m.dst_of(c).is_none_or(|p| self.dst.ast.parent(p) == Some(d)))
            .collect();
        let b: Vec<NodeId> = self
            .dst
            .ast
            .children(d)
            .iter()
            .copied()
            .filter(|&c| self.m.src_of(c).is_none_or(|p| self.src.ast.parent(p) == Some(s)))
            .collect();
        if a.is_empty() || b.is_empty() {
            return;
        }
        if a.iter().all(|&c| self.m.has_src(c)) || b.iter().all(|&c| self.m.has_dst(c)) {
            return;
        }
        let score = |x: NodeId, y: NodeId| -> Option<usize> {
            match (self.m.dst_of(x), self.m.src_of(y)) {
                (Some(p), _) => (p == y).then_some(3),
                (None, Some(_)) => None,
                (None, None) => {
                    let (sx, dy) = (self.src.ast.node(x), self.dst.ast.node(y));
                    if sx.kind != dy.kind {
                        None
                    } else if self.isomorphic(x, y) && self.subtree_free(x, y) {
                        Some(2)
                    } else if sx.label == dy.label {
                        Some(1)
                    } else {
                        Some(0)
                    }
                }
            }
        };
        for (x, y, tier) in align(&a, &b, score) {
            match tier {
                3 => {}
                2 => self.map_subtree(x, y),
                _ => self.m.link(x, y),
            }
        }
    }

    /// Unmatched isomorphic subtrees left over after matching are paired
    /// in source order so the script reports them as moves.
    /// Pairs unmatched isomorphic subtrees anywhere in the two trees, largest
    /// first, so that relocated code (including code wrapped into or
    /// unwrapped from a new parent) surfaces as MOV rather than DEL + ADD.
    fn match_moved_subtrees(&mut self) {
        let fully_free = |info: &TreeInfo, has: &dyn Fn(NodeId) -> bool, n: NodeId| {
            std::iter::once(n).chain(info.descendants(n)).all(|x| !has(x))
        };
        let mut by_hash: HashMap<u64, Vec<NodeId>> = HashMap::new();
        for d in self.dst.ast.preorder() {
            if d != self.dst.ast.root && fully_free(&self.dst, &|n| self.m.has_dst(n), d) {
                by_hash.entry(self.dst.hash[d.index()]).or_default().push(d);
            }
        }
        let mut candidates: Vec<NodeId> = self
            .src
            .ast
            .preorder()
            .into_iter()
            .filter(|&s| s != self.src.ast.root && fully_free(&self.src, &|n| self.m.has_src(n), s))
            .collect();
        candidates.sort_by_key(|&s| (std::cmp::Reverse(self.src.size[s.index()]), s));
        for s in candidates {
            if !fully_free(&self.src, &|n| self.m.has_src(n), s) {
                continue;
            }
            let Some(ds) = by_hash.get(&self.src.hash[s.index()]) else { continue };
            let found = ds
                .iter()
                .copied()
                .find(|&d| fully_free(&self.dst, &|n| self.m.has_dst(n), d) && self.isomorphic(s, d));
            if let Some(d) = found {
                self.map_subtree(s, d);
            }
        }
    }
}

/// Weighted order-preserving alignment. `score` returns the tier of a
/// permitted pair (higher is better) or `None`. Maximizes the count of
/// pairs per tier lexicographically from the highest tier down; ties keep
/// pairs positionally aligned.
pub(crate) fn align<A: Copy, B: Copy>(
    a: &[A],
    b: &[B],
    score: impl Fn(A, B) -> Option<usize>,
) -> Vec<(A, B, usize)> {
    const TIERS: usize = 4;
    type Score = [u32; TIERS];
    fn add(mut s: Score, tier: usize) -> Score {
        s[TIERS - 1 - tier] += 1;
        s
    }
    let (n, m) = (a.len(), b.len());
    // dp[i][j] = best score aligning a[i..] with b[j..]
    let mut dp = vec![[0u32; TIERS]; (n + 1) * (m + 1)];
    let idx = |i: usize, j: usize| i * (m + 1) + j;
    let mut tiers = vec![None; n * m];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            let t = score(a[i], b[j]);
            tiers[i * m + j] = t;
            let mut best = dp[idx(i + 1, j)].max(dp[idx(i, j + 1)]);
            if let Some(t) = t {
                best = best.max(add(dp[idx(i + 1, j + 1)], t));
            }
            dp[idx(i, j)] = best;
        }
    }
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        let here = dp[idx(i, j)];
        if let Some(t) = tiers[i * m + j] {
            if add(dp[idx(i + 1, j + 1)], t) == here {
                out.push((a[i], b[j], t));
                i += 1;
                j += 1;
                continue;
            }
        }
        // prefer skipping on the longer remaining side to keep pairs aligned
        let skip_a = dp[idx(i + 1, j)] == here;
        let skip_b = dp[idx(i, j + 1)] == here;
        if skip_a && (!skip_b || n - i >= m - j) {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

struct HeightQueue {
    items: Vec<NodeId>,
    heights: Vec<usize>,
}

impl HeightQueue {
    fn new(info: &TreeInfo, root: NodeId) -> Self {
        let mut q = HeightQueue { items: Vec::new(), heights: info.height.clone() };
        q.push(root);
        q
    }

    fn peek_height(&self) -> usize {
        self.items.iter().map(|n| self.heights[n.index()]).max().unwrap_or(0)
    }

    fn pop_height(&mut self, h: usize) -> Vec<NodeId> {
        let (mut take, keep): (Vec<NodeId>, Vec<NodeId>) =
            self.items.iter().partition(|n| self.heights[n.index()] == h);
        self.items = keep;
        take.sort_unstable();
        take
    }

    fn push(&mut self, n: NodeId) {
        if self.heights[n.index()] >= MIN_HEIGHT {
            self.items.push(n);
        }
    }

    fn open(&mut self, info: &TreeInfo, n: NodeId) {
        for &c in info.ast.children(n) {
            self.push(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn align_prefers_positional_pairs() {
        let a = ['y', 'y'];
        let b = ['x', 'y'];
        let pairs = align(&a, &b, |p, q| Some(if p == q { 2 } else { 0 }));
        assert_eq!(pairs, vec![('y', 'x', 0), ('y', 'y', 2)]);
        let pairs = align(&['x', 'y'], &['y', 'y'], |p, q| Some(if p == q { 2 } else { 0 }));
        assert_eq!(pairs, vec![('x', 'y', 0), ('y', 'y', 2)]);
    }

    #[test]
    fn align_respects_forbidden_pairs() {
        let pairs = align(&[1, 2, 3], &[3, 1], |p, q| (p == q).then_some(1));
        assert_eq!(pairs.len(), 1);
    }
}
