//! Mutable tree used both while generating a script and while applying
//! one, so that replay follows exactly the same intermediate states.

use std::collections::HashMap;
use std::path::Path;

use super::{DiffError, NodeRef};
use crate::ast::{NodeId, NodeKind, NormalizedAst, Span, TreeSpec};

pub(crate) const VIRTUAL_ROOT: usize = 0;

#[derive(Debug, Clone)]
pub(crate) struct WorkNode {
    pub kind: NodeKind,
    pub label: String,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    pub origin: Option<NodeId>,
    pub alive: bool,
}

/// Working copy of the source tree hung under a virtual root so that even
/// the file root can be replaced.
#[derive(Debug, Clone)]
pub(crate) struct WorkTree {
    pub nodes: Vec<WorkNode>,
    by_src: Vec<usize>,
    by_added: HashMap<NodeId, usize>,
    grammar_id: String,
    source_path: std::path::PathBuf,
}

impl WorkTree {
    pub fn new(ast: &NormalizedAst) -> Self {
        let mut nodes = Vec::with_capacity(ast.len() + 1);
        nodes.push(WorkNode {
            kind: NodeKind::CompilationUnit,
            label: String::new(),
            children: vec![1],
            parent: None,
            origin: None,
            alive: true,
        });
        for n in &ast.nodes {
            nodes.push(WorkNode {
                kind: n.kind,
                label: n.label.clone(),
                children: n.children.iter().map(|c| c.index() + 1).collect(),
                parent: Some(n.parent.map_or(VIRTUAL_ROOT, |p| p.index() + 1)),
                origin: Some(n.id),
                alive: true,
            });
        }
        // the real root is always node 0 of a NormalizedAst
        let by_src = (1..=ast.len()).collect();
        WorkTree {
            nodes,
            by_src,
            by_added: HashMap::new(),
            grammar_id: ast.grammar_id.clone(),
            source_path: ast.source_path.clone(),
        }
    }

    pub fn of_src(&self, id: NodeId) -> Result<usize, DiffError> {
        self.by_src
            .get(id.index())
            .copied()
            .filter(|&w| self.nodes[w].alive)
            .ok_or_else(|| DiffError::InvalidScript(format!("no source node {}", id.0)))
    }

    pub fn resolve(&self, r: NodeRef) -> Result<usize, DiffError> {
        match r {
            NodeRef::Root => Ok(VIRTUAL_ROOT),
            NodeRef::Src(id) => self.of_src(id),
            NodeRef::Added(id) => self
                .by_added
                .get(&id)
                .copied()
                .filter(|&w| self.nodes[w].alive)
                .ok_or_else(|| DiffError::InvalidScript(format!("no inserted node for {}", id.0))),
        }
    }

    pub fn parent(&self, w: usize) -> Option<usize> {
        self.nodes[w].parent
    }

    pub fn children(&self, w: usize) -> &[usize] {
        &self.nodes[w].children
    }

    pub fn position(&self, w: usize) -> usize {
        let p = self.nodes[w].parent.expect("attached node");
        self.nodes[p].children.iter().position(|&c| c == w).expect("child of parent")
    }

    fn check_pos(&self, parent: usize, pos: usize) -> Result<(), DiffError> {
        if pos > self.nodes[parent].children.len() {
            return Err(DiffError::InvalidScript(format!(
                "position {pos} out of range ({} children)",
                self.nodes[parent].children.len()
            )));
        }
        Ok(())
    }

    pub fn insert(
        &mut self,
        parent: usize,
        pos: usize,
        kind: NodeKind,
        label: String,
        added: NodeId,
    ) -> Result<usize, DiffError> {
        self.check_pos(parent, pos)?;
        if self.by_added.contains_key(&added) {
            return Err(DiffError::InvalidScript(format!("node {} inserted twice", added.0)));
        }
        let w = self.nodes.len();
        self.nodes.push(WorkNode { kind, label, children: Vec::new(), parent: Some(parent), origin: None, alive: true });
        self.nodes[parent].children.insert(pos, w);
        self.by_added.insert(added, w);
        Ok(w)
    }

    pub fn detach(&mut self, w: usize) -> Result<(), DiffError> {
        let Some(p) = self.nodes[w].parent else {
            return Err(DiffError::InvalidScript("cannot detach the virtual root".into()));
        };
        let pos = self.position(w);
        self.nodes[p].children.remove(pos);
        self.nodes[w].parent = None;
        Ok(())
    }

    pub fn attach(&mut self, w: usize, parent: usize, pos: usize) -> Result<(), DiffError> {
        self.check_pos(parent, pos)?;
        let mut a = Some(parent);
        while let Some(x) = a {
            if x == w {
                return Err(DiffError::InvalidScript("move would create a cycle".into()));
            }
            a = self.nodes[x].parent;
        }
        self.nodes[parent].children.insert(pos, w);
        self.nodes[w].parent = Some(parent);
        Ok(())
    }

    pub fn update(&mut self, w: usize, label: String) {
        self.nodes[w].label = label;
    }

    /// Removes `w` together with anything still below it.
    pub fn delete(&mut self, w: usize) -> Result<(), DiffError> {
        self.detach(w)?;
        let mut stack = vec![w];
        while let Some(n) = stack.pop() {
            self.nodes[n].alive = false;
            stack.extend(self.nodes[n].children.iter().copied());
        }
        Ok(())
    }

    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(VIRTUAL_ROOT, false)];
        while let Some((n, done)) = stack.pop() {
            if done {
                out.push(n);
            } else {
                stack.push((n, true));
                for &c in self.nodes[n].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Converts back to an AST; spans are synthetic pre-order intervals.
    pub fn into_ast(self) -> Result<NormalizedAst, DiffError> {
        let roots = &self.nodes[VIRTUAL_ROOT].children;
        if roots.len() != 1 {
            return Err(DiffError::InvalidScript(format!("script leaves {} roots", roots.len())));
        }
        fn build(t: &WorkTree, w: usize, counter: &mut usize) -> TreeSpec {
            let start = *counter;
            *counter += 1;
            let children: Vec<TreeSpec> = t.nodes[w].children.iter().map(|&c| build(t, c, counter)).collect();
            TreeSpec::new(t.nodes[w].kind, t.nodes[w].label.clone(), Span::new(start, *counter))
                .with_children(children)
        }
        let mut counter = 0;
        let spec = build(&self, roots[0], &mut counter);
        Ok(NormalizedAst::from_spec(spec, &self.grammar_id, Path::new(&self.source_path)))
    }
}
