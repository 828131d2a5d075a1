//! Insert-only tree model: real nodes, subdivision (bend) nodes, edges with
//! desired lengths, and all-pairs tree distances kept up to date per insert.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Width, in characters, that a label occupies for metric purposes.
pub const MAX_LABEL_CHARS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree already has a root")]
    NotEmpty,
    #[error("tree has no root")]
    NoRoot,
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is a subdivision node")]
    NotReal(NodeId),
    #[error("desired length must be positive and finite")]
    InvalidLength,
    #[error("unknown edge {}", .0.0)]
    UnknownEdge(EdgeId),
    #[error("edge {} is already subdivided", .0.0)]
    AlreadySubdivided(EdgeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Real,
    Subdivision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub id: NodeId,
    pub label: String,
    pub kind: NodeKind,
    pub inserted_at: usize,
}

impl NodeRecord {
    pub fn is_real(&self) -> bool {
        self.kind == NodeKind::Real
    }

    /// Character count used for label boxes, capped at 16.
    pub fn label_chars(&self) -> usize {
        self.label.chars().count().min(MAX_LABEL_CHARS)
    }

    /// Label shortened to 16 visible characters, ending in `…` when cut.
    pub fn display_label(&self) -> String {
        if self.label.chars().count() <= MAX_LABEL_CHARS {
            self.label.clone()
        } else {
            let mut s: String = self.label.chars().take(MAX_LABEL_CHARS - 1).collect();
            s.push('…');
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub id: EdgeId,
    /// Endpoint that was already in the tree.
    pub parent: NodeId,
    /// Endpoint added together with the edge.
    pub child: NodeId,
    pub desired_length: f64,
    pub inserted_at: usize,
    /// Drawn pieces from parent to child, in path order.
    pub segments: Vec<(NodeId, NodeId)>,
    pub subdivided: bool,
}

impl EdgeRecord {
    pub fn segment_desired_length(&self) -> f64 {
        self.desired_length / self.segments.len() as f64
    }

    /// Interior (bend) nodes in path order.
    pub fn bends(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.segments.iter().skip(1).map(|s| s.0)
    }

    /// Every node on the drawn path, parent first.
    pub fn path(&self) -> impl Iterator<Item = NodeId> + '_ {
        core::iter::once(self.parent).chain(self.segments.iter().map(|s| s.1))
    }
}

/// All-pairs tree distances between real nodes, as sums of desired lengths.
///
/// Stored as a dense lower triangle indexed by real-node ordinal.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DistanceStore {
    tri: Vec<f64>,
    len: usize,
}

impl DistanceStore {
    #[inline]
    fn slot(i: usize, j: usize) -> usize {
        debug_assert!(i > j);
        i * (i - 1) / 2 + j
    }

    /// Distance between real ordinals `i` and `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            core::cmp::Ordering::Equal => 0.0,
            core::cmp::Ordering::Greater => self.tri[Self::slot(i, j)],
            core::cmp::Ordering::Less => self.tri[Self::slot(j, i)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn push_root(&mut self) {
        self.len = 1;
    }

    /// Appends a node hanging from ordinal `parent` at distance `length`.
    fn push_child(&mut self, parent: usize, length: f64) {
        let k = self.len;
        self.tri.reserve(k);
        for j in 0..k {
            let d = self.get(parent, j) + length;
            self.tri.push(d);
        }
        self.len += 1;
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvolvingTree {
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
    /// Drawn-segment adjacency (includes subdivision nodes).
    adjacency: Vec<Vec<NodeId>>,
    /// Edge hanging a real node from its parent.
    parent_edge: Vec<Option<EdgeId>>,
    real_nodes: Vec<NodeId>,
    ordinal: Vec<Option<usize>>,
    root: Option<NodeId>,
    dist: DistanceStore,
}

impl EvolvingTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_root(&mut self, label: impl Into<String>) -> Result<NodeId, TreeError> {
        if !self.nodes.is_empty() {
            return Err(TreeError::NotEmpty);
        }
        let id = self.push_node(label.into(), NodeKind::Real, 0);
        self.root = Some(id);
        self.dist.push_root();
        Ok(id)
    }

    pub fn add_child(
        &mut self,
        parent: NodeId,
        label: impl Into<String>,
        desired_length: f64,
    ) -> Result<EdgeId, TreeError> {
        let parent_ord = self.real_ordinal(parent)?;
        if !(desired_length > 0.0 && desired_length.is_finite()) {
            return Err(TreeError::InvalidLength);
        }
        let t = self.timestep() + 1;
        let child = self.push_node(label.into(), NodeKind::Real, t);
        self.dist.push_child(parent_ord, desired_length);

        let id = EdgeId(self.edges.len());
        self.edges.push(EdgeRecord {
            id,
            parent,
            child,
            desired_length,
            inserted_at: t,
            segments: vec![(parent, child)],
            subdivided: false,
        });
        self.parent_edge[child.0] = Some(id);
        self.adjacency[parent.0].push(child);
        self.adjacency[child.0].push(parent);
        Ok(id)
    }

    /// Splits `edge` into `n_s + 1` equal pieces joined by new bend nodes.
    pub fn subdivide(&mut self, edge: EdgeId, n_s: usize) -> Result<Vec<NodeId>, TreeError> {
        let rec = self.edges.get(edge.0).ok_or(TreeError::UnknownEdge(edge))?;
        if rec.subdivided {
            return Err(TreeError::AlreadySubdivided(edge));
        }
        let (parent, child, t) = (rec.parent, rec.child, rec.inserted_at);
        self.edges[edge.0].subdivided = true;
        if n_s == 0 {
            return Ok(Vec::new());
        }

        let bends: Vec<NodeId> = (0..n_s)
            .map(|_| self.push_node(String::new(), NodeKind::Subdivision, t))
            .collect();
        let path: Vec<NodeId> = core::iter::once(parent)
            .chain(bends.iter().copied())
            .chain(core::iter::once(child))
            .collect();

        replace_neighbor(&mut self.adjacency[parent.0], child, path[1]);
        replace_neighbor(&mut self.adjacency[child.0], parent, path[n_s]);
        for w in 1..=n_s {
            self.adjacency[path[w].0] = vec![path[w - 1], path[w + 1]];
        }
        self.edges[edge.0].segments = path.windows(2).map(|w| (w[0], w[1])).collect();
        Ok(bends)
    }

    fn push_node(&mut self, label: String, kind: NodeKind, inserted_at: usize) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(NodeRecord {
            id,
            label,
            kind,
            inserted_at,
        });
        self.adjacency.push(Vec::new());
        self.parent_edge.push(None);
        if kind == NodeKind::Real {
            self.ordinal.push(Some(self.real_nodes.len()));
            self.real_nodes.push(id);
        } else {
            self.ordinal.push(None);
        }
        id
    }

    fn real_ordinal(&self, id: NodeId) -> Result<usize, TreeError> {
        match self.ordinal.get(id.0) {
            None => Err(TreeError::UnknownNode(id)),
            Some(None) => Err(TreeError::NotReal(id)),
            Some(Some(k)) => Ok(*k),
        }
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    /// Number of real edges inserted so far.
    pub fn timestep(&self) -> usize {
        self.edges.len()
    }

    /// All nodes, real and subdivision.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn real_count(&self) -> usize {
        self.real_nodes.len()
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeRecord> {
        self.nodes.get(id.0)
    }

    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }

    pub fn edge(&self, id: EdgeId) -> Option<&EdgeRecord> {
        self.edges.get(id.0)
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    /// Real nodes in insertion order; position `k` is the node's ordinal.
    pub fn real_nodes(&self) -> &[NodeId] {
        &self.real_nodes
    }

    pub fn ordinal(&self, id: NodeId) -> Option<usize> {
        self.ordinal.get(id.0).copied().flatten()
    }

    /// Neighbours along drawn segments.
    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id.0]
    }

    /// The edge that attached real node `id`; `None` for the root.
    pub fn parent_edge(&self, id: NodeId) -> Option<&EdgeRecord> {
        self.parent_edge
            .get(id.0)
            .copied()
            .flatten()
            .map(|e| &self.edges[e.0])
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent_edge(id).map(|e| e.parent)
    }

    /// Whether real nodes `a` and `b` are joined by a tree edge.
    pub fn are_tree_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.parent(a) == Some(b) || self.parent(b) == Some(a)
    }

    pub fn distances(&self) -> &DistanceStore {
        &self.dist
    }

    /// Tree distance between two real nodes.
    pub fn distance(&self, a: NodeId, b: NodeId) -> Result<f64, TreeError> {
        Ok(self.dist.get(self.real_ordinal(a)?, self.real_ordinal(b)?))
    }

    /// Every drawn segment, edge by edge in insertion order.
    pub fn segments(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().flat_map(|e| e.segments.iter().copied())
    }

    pub fn segment_count(&self) -> usize {
        self.edges.iter().map(|e| e.segments.len()).sum()
    }
}

fn replace_neighbor(list: &mut [NodeId], old: NodeId, new: NodeId) {
    if let Some(slot) = list.iter_mut().find(|n| **n == old) {
        *slot = new;
    }
}
