//! Edit-script generation from a matching, after Chawathe et al.: a
//! breadth-first pass over the destination inserting, updating and moving,
//! child alignment by LCS, then post-order deletion.

use super::matcher::{align, Matching};
use super::work::{WorkTree, VIRTUAL_ROOT};
use super::{DiffError, EditAction, EditOp, NodeRef};
use crate::ast::{NodeId, NormalizedAst};

pub(crate) struct Generator<'a> {
    dst: &'a NormalizedAst,
    work: WorkTree,
    /// destination node -> working node
    w_of_dst: Vec<Option<usize>>,
    /// working node -> destination node
    dst_of_w: Vec<Option<NodeId>>,
    w_in_order: Vec<bool>,
    dst_in_order: Vec<bool>,
    actions: Vec<EditAction>,
}

impl<'a> Generator<'a> {
    pub fn new(src: &'a NormalizedAst, dst: &'a NormalizedAst, matching: &Matching) -> Self {
        let work = WorkTree::new(src);
        let mut w_of_dst = vec![None; dst.len()];
        let mut dst_of_w = vec![None; work.nodes.len()];
        for (s, d) in matching.pairs() {
            let w = s.index() + 1;
            w_of_dst[d.index()] = Some(w);
            dst_of_w[w] = Some(d);
        }
        let n = work.nodes.len();
        Generator {
            dst,
            work,
            w_of_dst,
            dst_of_w,
            w_in_order: vec![false; n],
            dst_in_order: vec![false; dst.len()],
            actions: Vec::new(),
        }
    }

    fn grow(&mut self) {
        let n = self.work.nodes.len();
        self.dst_of_w.resize(n, None);
        self.w_in_order.resize(n, false);
    }

    fn node_ref(&self, w: usize) -> NodeRef {
        if w == VIRTUAL_ROOT {
            return NodeRef::Root;
        }
        match self.work.nodes[w].origin {
            Some(id) => NodeRef::Src(id),
            None => NodeRef::Added(self.dst_of_w[w].expect("inserted nodes are matched")),
        }
    }

    fn dst_parent_w(&self, x: NodeId) -> usize {
        match self.dst.parent(x) {
            Some(y) => self.w_of_dst[y.index()].expect("parents are processed first"),
            None => VIRTUAL_ROOT,
        }
    }

    fn dst_siblings(&self, x: NodeId) -> Vec<NodeId> {
        match self.dst.parent(x) {
            Some(y) => self.dst.children(y).to_vec(),
            None => vec![self.dst.root],
        }
    }

    fn find_pos(&self, x: NodeId) -> usize {
        let siblings = self.dst_siblings(x);
        if let Some(&first) = siblings.iter().find(|&&c| self.dst_in_order[c.index()]) {
            if first == x {
                return 0;
            }
        }
        let mut v = None;
        for &c in &siblings {
            if c == x {
                break;
            }
            if self.dst_in_order[c.index()] {
                v = Some(c);
            }
        }
        match v {
            None => 0,
            Some(v) => {
                let u = self.w_of_dst[v.index()].expect("in-order nodes are matched");
                self.work.position(u) + 1
            }
        }
    }

    fn origin(&self, w: usize) -> Option<NodeId> {
        self.work.nodes[w].origin
    }

    fn do_move(&mut self, w: usize, x: NodeId, z: usize) -> Result<(), DiffError> {
        self.work.detach(w)?;
        let k = self.find_pos(x);
        self.work.attach(w, z, k)?;
        self.actions.push(EditAction {
            op: EditOp::Mov,
            src_node: self.origin(w),
            dst_node: Some(x),
            position: Some(k),
            parent: Some(self.node_ref(z)),
            kind: None,
            label: None,
        });
        Ok(())
    }

    pub fn run(mut self) -> Result<Vec<EditAction>, DiffError> {
        for x in self.dst.breadth_first() {
            let z = self.dst_parent_w(x);
            let w = match self.w_of_dst[x.index()] {
                None => {
                    let k = self.find_pos(x);
                    let node = self.dst.node(x);
                    let w = self.work.insert(z, k, node.kind, node.label.clone(), x)?;
                    self.grow();
                    self.w_of_dst[x.index()] = Some(w);
                    self.dst_of_w[w] = Some(x);
                    self.actions.push(EditAction {
                        op: EditOp::Add,
                        src_node: None,
                        dst_node: Some(x),
                        position: Some(k),
                        parent: Some(self.node_ref(z)),
                        kind: Some(node.kind),
                        label: Some(node.label.clone()),
                    });
                    w
                }
                Some(w) => {
                    let label = &self.dst.node(x).label;
                    if self.work.nodes[w].label != *label {
                        self.work.update(w, label.clone());
                        self.actions.push(EditAction {
                            op: EditOp::Upd,
                            src_node: self.origin(w),
                            dst_node: Some(x),
                            position: None,
                            parent: None,
                            kind: None,
                            label: Some(label.clone()),
                        });
                    }
                    if self.work.parent(w) != Some(z) {
                        self.do_move(w, x, z)?;
                    }
                    w
                }
            };
            self.w_in_order[w] = true;
            self.dst_in_order[x.index()] = true;
            self.align_children(w, x)?;
        }
        for w in self.work.postorder() {
            if w != VIRTUAL_ROOT && self.dst_of_w[w].is_none() && self.work.nodes[w].alive {
                self.work.delete(w)?;
                self.actions.push(EditAction {
                    op: EditOp::Del,
                    src_node: self.origin(w),
                    dst_node: None,
                    position: None,
                    parent: None,
                    kind: None,
                    label: None,
                });
            }
        }
        Ok(self.actions)
    }

    fn align_children(&mut self, w: usize, x: NodeId) -> Result<(), DiffError> {
        for &c in self.work.children(w) {
            self.w_in_order[c] = false;
        }
        for &c in self.dst.children(x) {
            self.dst_in_order[c.index()] = false;
        }
        let s1: Vec<usize> = self
            .work
            .children(w)
            .iter()
            .copied()
            .filter(|&c| self.dst_of_w[c].is_some_and(|d| self.dst.parent(d) == Some(x)))
            .collect();
        let s2: Vec<NodeId> = self
            .dst
            .children(x)
            .iter()
            .copied()
            .filter(|&c| self.w_of_dst[c.index()].is_some_and(|u| self.work.parent(u) == Some(w)))
            .collect();
        let lcs = align(&s1, &s2, |a, b| (self.dst_of_w[a] == Some(b)).then_some(0));
        for &(a, b, _) in &lcs {
            self.w_in_order[a] = true;
            self.dst_in_order[b.index()] = true;
        }
        for b in s2 {
            let a = self.w_of_dst[b.index()].expect("filtered to matched");
            if !self.w_in_order[a] {
                self.do_move(a, b, w)?;
                self.w_in_order[a] = true;
                self.dst_in_order[b.index()] = true;
            }
        }
        Ok(())
    }
}
