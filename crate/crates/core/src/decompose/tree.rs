//! Decomposition trees: storage, evaluation, serialization and re-rooting.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quasigroup::{compose_at, Quasigroup};

/// Index of an internal node; the root is always node 0 and ids follow
/// depth-first pre-order.
pub type NodeId = usize;

/// A child slot of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Child {
    Var(usize),
    Node(NodeId),
}

/// An edge of the unrooted tree. `Output` joins the root to the value leaf
/// `x_0`; `Inner(v)` joins node `v` to its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Edge {
    Output,
    Leaf(usize),
    Inner(NodeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub label: Quasigroup,
    pub children: Vec<Child>,
}

/// A nested description of a tree, used to build and rewrite trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subtree {
    Var(usize),
    Node(Quasigroup, Vec<Subtree>),
}

impl Subtree {
    pub fn node(label: Quasigroup, children: Vec<Subtree>) -> Subtree {
        Subtree::Node(label, children)
    }

    /// A node whose children are the given variables.
    pub fn leaves(label: Quasigroup, vars: impl IntoIterator<Item = usize>) -> Subtree {
        Subtree::Node(label, vars.into_iter().map(Subtree::Var).collect())
    }
}

/// Serialized form: `{"table": "...", "children": [...]}` or `{"var": i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeDoc {
    Leaf {
        var: usize,
    },
    Node {
        table: String,
        children: Vec<TreeDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTree {
    arity: usize,
    nodes: Vec<Node>,
    parent: Vec<Option<(NodeId, usize)>>,
}

impl DecompositionTree {
    pub fn from_subtree(spec: Subtree) -> Result<DecompositionTree> {
        if matches!(spec, Subtree::Var(_)) {
            return Err(Error::InvalidTree("the root must be a node".into()));
        }
        let mut tree = DecompositionTree {
            arity: 0,
            nodes: Vec::new(),
            parent: Vec::new(),
        };
        let mut vars = Vec::new();
        tree.push(spec, None, &mut vars)?;
        let n = vars.len();
        vars.sort_unstable();
        if vars != (1..=n).collect::<Vec<_>>() {
            return Err(Error::InvalidTree(
                "leaf variables must be a permutation of 1..=n".into(),
            ));
        }
        tree.arity = n;
        Ok(tree)
    }

    fn push(
        &mut self,
        spec: Subtree,
        parent: Option<(NodeId, usize)>,
        vars: &mut Vec<usize>,
    ) -> Result<NodeId> {
        let Subtree::Node(label, kids) = spec else {
            unreachable!("callers only push nodes")
        };
        if kids.len() < 2 || label.arity() != kids.len() {
            return Err(Error::InvalidTree(format!(
                "node of arity {} has {} children",
                label.arity(),
                kids.len()
            )));
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            label,
            children: Vec::new(),
        });
        self.parent.push(parent);
        let mut children = Vec::with_capacity(kids.len());
        for (k, kid) in kids.into_iter().enumerate() {
            match kid {
                Subtree::Var(v) => {
                    vars.push(v);
                    children.push(Child::Var(v));
                }
                node => children.push(Child::Node(self.push(node, Some((id, k + 1)), vars)?)),
            }
        }
        self.nodes[id].children = children;
        Ok(id)
    }

    /// A one-node tree over `x_1, ..., x_n`.
    pub fn single(q: Quasigroup) -> Result<DecompositionTree> {
        let n = q.arity();
        DecompositionTree::from_subtree(Subtree::leaves(q, 1..=n))
    }

    pub fn to_subtree(&self) -> Subtree {
        self.subtree_at(0)
    }

    pub fn subtree_at(&self, id: NodeId) -> Subtree {
        let node = &self.nodes[id];
        Subtree::Node(
            node.label.clone(),
            node.children
                .iter()
                .map(|c| match *c {
                    Child::Var(v) => Subtree::Var(v),
                    Child::Node(c) => self.subtree_at(c),
                })
                .collect(),
        )
    }

    pub fn from_doc(doc: &TreeDoc) -> Result<DecompositionTree> {
        fn convert(doc: &TreeDoc) -> Result<Subtree> {
            match doc {
                TreeDoc::Leaf { var } => Ok(Subtree::Var(*var)),
                TreeDoc::Node { table, children } => Ok(Subtree::Node(
                    Quasigroup::from_digits(children.len(), table)?,
                    children.iter().map(convert).collect::<Result<_>>()?,
                )),
            }
        }
        DecompositionTree::from_subtree(convert(doc)?)
    }

    pub fn to_doc(&self) -> TreeDoc {
        fn convert(spec: &Subtree) -> TreeDoc {
            match spec {
                Subtree::Var(v) => TreeDoc::Leaf { var: *v },
                Subtree::Node(q, kids) => TreeDoc::Node {
                    table: q.digits(),
                    children: kids.iter().map(convert).collect(),
                },
            }
        }
        convert(&self.to_subtree())
    }

    pub fn from_json(text: &str) -> Result<DecompositionTree> {
        let doc: TreeDoc = serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))?;
        DecompositionTree::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("tree documents serialize")
    }

    /// Number of variables `n`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn label(&self, id: NodeId) -> &Quasigroup {
        &self.nodes[id].label
    }

    pub fn children(&self, id: NodeId) -> &[Child] {
        &self.nodes[id].children
    }

    /// The parent of `id` and the argument position it occupies there.
    pub fn parent(&self, id: NodeId) -> Option<(NodeId, usize)> {
        self.parent[id]
    }

    pub fn depth(&self, mut id: NodeId) -> usize {
        let mut d = 0;
        while let Some((p, _)) = self.parent[id] {
            id = p;
            d += 1;
        }
        d
    }

    /// Node ids in breadth-first order from the root.
    pub fn bfs_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            out.push(u);
            for c in &self.nodes[u].children {
                if let Child::Node(v) = *c {
                    queue.push_back(v);
                }
            }
        }
        out
    }

    /// `(parent, position, child)` for every inner edge, parents in
    /// breadth-first order and children left to right.
    pub fn inner_edges(&self) -> Vec<(NodeId, usize, NodeId)> {
        let mut out = Vec::new();
        for u in self.bfs_order() {
            for (k, c) in self.nodes[u].children.iter().enumerate() {
                if let Child::Node(v) = *c {
                    out.push((u, k + 1, v));
                }
            }
        }
        out
    }

    /// The edge joining `id` to the rest of the tree on its value side.
    pub fn value_edge(&self, id: NodeId) -> Edge {
        if id == 0 {
            Edge::Output
        } else {
            Edge::Inner(id)
        }
    }

    /// Edges at argument positions `1..=arity` of node `id`.
    pub fn child_edges(&self, id: NodeId) -> Vec<Edge> {
        self.nodes[id]
            .children
            .iter()
            .map(|c| match *c {
                Child::Var(v) => Edge::Leaf(v),
                Child::Node(v) => Edge::Inner(v),
            })
            .collect()
    }

    /// All edges at node `id`: the value edge, then the child edges.
    pub fn incident_edges(&self, id: NodeId) -> Vec<Edge> {
        let mut out = vec![self.value_edge(id)];
        out.extend(self.child_edges(id));
        out
    }

    /// All edges of the tree: output, leaves in variable order, inner edges by child id.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = vec![Edge::Output];
        out.extend((1..=self.arity).map(Edge::Leaf));
        out.extend((1..self.nodes.len()).map(Edge::Inner));
        out
    }

    /// The leaf edges incident to node `id` (including `Output` at the root).
    pub fn leaf_edges(&self, id: NodeId) -> Vec<Edge> {
        self.incident_edges(id)
            .into_iter()
            .filter(|e| !matches!(e, Edge::Inner(_)))
            .collect()
    }

    /// The node owning a leaf edge.
    pub fn owner(&self, leaf: Edge) -> Option<NodeId> {
        match leaf {
            Edge::Output => Some(0),
            Edge::Leaf(v) => {
                (0..self.nodes.len()).find(|&u| self.nodes[u].children.contains(&Child::Var(v)))
            }
            Edge::Inner(_) => None,
        }
    }

    /// Variables in left-to-right leaf order.
    pub fn leaf_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.arity);
        self.collect_leaves(0, &mut out);
        out
    }

    fn collect_leaves(&self, id: NodeId, out: &mut Vec<usize>) {
        for c in &self.nodes[id].children {
            match *c {
                Child::Var(v) => out.push(v),
                Child::Node(c) => self.collect_leaves(c, out),
            }
        }
    }

    /// The quasigroup computed by the subtree at `id`, with arguments in
    /// left-to-right leaf order.
    pub fn eval_subtree(&self, id: NodeId) -> Result<Quasigroup> {
        let node = &self.nodes[id];
        let mut q = node.label.clone();
        for (k, c) in node.children.iter().enumerate().rev() {
            if let Child::Node(c) = *c {
                q = compose_at(&q, &self.eval_subtree(c)?, k + 1)?;
            }
        }
        Ok(q)
    }

    /// The represented quasigroup `f(x_1, ..., x_n)`.
    pub fn eval(&self) -> Result<Quasigroup> {
        let q = self.eval_subtree(0)?;
        q.rearrange_args(&self.leaf_order())
    }

    /// Replaces every label through `relabel(id, label)`.
    pub fn map_labels(
        &self,
        mut relabel: impl FnMut(NodeId, &Quasigroup) -> Result<Quasigroup>,
    ) -> Result<DecompositionTree> {
        let mut out = self.clone();
        for (id, node) in out.nodes.iter_mut().enumerate() {
            let label = relabel(id, &node.label)?;
            if label.arity() != node.label.arity() {
                return Err(Error::ArityMismatch {
                    expected: node.label.arity(),
                    found: label.arity(),
                });
            }
            node.label = label;
        }
        Ok(out)
    }

    /// The same decomposition with leaf `x_j` as the output; it evaluates to
    /// the inverse of the original quasigroup in argument `j`, with the old
    /// output appearing as variable `j`.
    pub fn reroot(&self, j: usize) -> Result<DecompositionTree> {
        let leaf_owner = self
            .owner(Edge::Leaf(j))
            .ok_or_else(|| Error::InvalidArgument(format!("no variable {j}")))?;
        let pos = self.nodes[leaf_owner]
            .children
            .iter()
            .position(|&c| c == Child::Var(j))
            .expect("owner holds the leaf")
            + 1;
        self.reroot_from(leaf_owner, pos, Subtree::Var(j))
    }

    /// Rebuilds node `id` with the child at `pos` turned into the value and
    /// `replacement` standing where that child was.
    fn reroot_from(
        &self,
        id: NodeId,
        pos: usize,
        replacement: Subtree,
    ) -> Result<DecompositionTree> {
        Ok(
            DecompositionTree::from_subtree(self.inverted(id, pos, replacement)?)
                .expect("re-rooting preserves validity"),
        )
    }

    fn inverted(&self, id: NodeId, pos: usize, replacement: Subtree) -> Result<Subtree> {
        let node = &self.nodes[id];
        let label = node.label.inverse(pos)?;
        let mut kids: Vec<Subtree> = node
            .children
            .iter()
            .map(|c| match *c {
                Child::Var(v) => Subtree::Var(v),
                Child::Node(c) => self.subtree_at(c),
            })
            .collect();
        let up = match self.parent[id] {
            None => replacement,
            Some((p, ppos)) => self.inverted(p, ppos, replacement)?,
        };
        kids[pos - 1] = up;
        Ok(Subtree::Node(label, kids))
    }
}
