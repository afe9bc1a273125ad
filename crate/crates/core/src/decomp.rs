//! s-t tree-decompositions of two-terminal series-parallel graphs.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::sp::{SpKind, SpTree};

pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("invalid series-parallel tree: {0}")]
    InvalidSpTree(String),
    #[error("malformed decomposition: {0}")]
    Malformed(String),
    #[error("vertex {0} is in no bag")]
    VertexNotInDecomposition(Vertex),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no node on the path has both terminals in the subgraph")]
    WitnessMissing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// One node as supplied to [`STDecomposition::from_nodes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompNode {
    /// Sorted, distinct.
    pub bag: Vec<Vertex>,
    pub source: Vertex,
    pub sink: Vertex,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct STDecomposition {
    nodes: Vec<DecompNode>,
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    depth: Vec<usize>,
}

impl STDecomposition {
    /// Builds the decomposition that mirrors `sp` node for node: leaves and
    /// parallel nodes get bag `{s, t}`, series nodes `{s₁, t₁ = s₂, t₂}`.
    pub fn build(sp: &SpTree) -> Result<STDecomposition, DecompError> {
        let problems = sp.validate();
        if !problems.is_empty() {
            return Err(DecompError::InvalidSpTree(problems.join("; ")));
        }
        let nodes = sp
            .nodes()
            .iter()
            .map(|n| {
                let (bag, children) = match n.kind {
                    SpKind::Leaf => (vec![n.source, n.sink], None),
                    SpKind::Parallel(l, r) => (vec![n.source, n.sink], Some((l, r))),
                    SpKind::Series(l, r) => (vec![n.source, sp.node(l).sink, n.sink], Some((l, r))),
                };
                let mut bag = bag;
                bag.sort_unstable();
                bag.dedup();
                DecompNode {
                    bag,
                    source: n.source,
                    sink: n.sink,
                    left: children.map(|c| c.0),
                    right: children.map(|c| c.1),
                }
            })
            .collect();
        STDecomposition::from_nodes(nodes, sp.root())
    }

    /// Assembles a decomposition from explicit nodes. Only tree shape is
    /// checked here; use [`STDecomposition::validate`] for the rest.
    pub fn from_nodes(mut nodes: Vec<DecompNode>, root: NodeId) -> Result<Self, DecompError> {
        let len = nodes.len();
        if root >= len {
            return Err(DecompError::Malformed(format!("root {root} out of range")));
        }
        let mut parent = vec![None; len];
        let mut depth = vec![usize::MAX; len];
        depth[root] = 0;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for c in [nodes[u].left, nodes[u].right].into_iter().flatten() {
                if c >= len {
                    return Err(DecompError::Malformed(format!(
                        "node {u} has child {c} out of range"
                    )));
                }
                if depth[c] != usize::MAX {
                    return Err(DecompError::Malformed(format!("node {c} reached twice")));
                }
                depth[c] = depth[u] + 1;
                parent[c] = Some(u);
                stack.push(c);
            }
        }
        if let Some(u) = depth.iter().position(|&d| d == usize::MAX) {
            return Err(DecompError::Malformed(format!(
                "node {u} unreachable from root"
            )));
        }
        for node in &mut nodes {
            node.bag.sort_unstable();
            node.bag.dedup();
        }
        Ok(STDecomposition {
            nodes,
            root,
            parent,
            depth,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[DecompNode] {
        &self.nodes
    }

    pub fn bag(&self, u: NodeId) -> &[Vertex] {
        &self.nodes[u].bag
    }

    pub fn source(&self, u: NodeId) -> Vertex {
        self.nodes[u].source
    }

    pub fn sink(&self, u: NodeId) -> Vertex {
        self.nodes[u].sink
    }

    /// The bag vertex that is neither terminal, for size-3 bags.
    pub fn middle(&self, u: NodeId) -> Option<Vertex> {
        let n = &self.nodes[u];
        if n.bag.len() != 3 {
            return None;
        }
        n.bag
            .iter()
            .copied()
            .find(|&x| x != n.source && x != n.sink)
    }

    pub fn left(&self, u: NodeId) -> Option<NodeId> {
        self.nodes[u].left
    }

    pub fn right(&self, u: NodeId) -> Option<NodeId> {
        self.nodes[u].right
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        self.parent[u]
    }

    pub fn depth(&self, u: NodeId) -> usize {
        self.depth[u]
    }

    /// Which child of its parent `u` is; `None` at the root.
    pub fn side(&self, u: NodeId) -> Option<Side> {
        let p = self.parent[u]?;
        Some(if self.nodes[p].left == Some(u) {
            Side::Left
        } else {
            Side::Right
        })
    }

    pub fn is_leaf(&self, u: NodeId) -> bool {
        self.nodes[u].left.is_none() && self.nodes[u].right.is_none()
    }

    /// `a ≤ b` in the tree order, i.e. `a` is `b` or an ancestor of it.
    pub fn is_ancestor_or_self(&self, a: NodeId, b: NodeId) -> bool {
        let mut v = b;
        while self.depth[v] > self.depth[a] {
            v = self.parent[v].unwrap();
        }
        v == a
    }

    pub fn comparable(&self, a: NodeId, b: NodeId) -> bool {
        self.is_ancestor_or_self(a, b) || self.is_ancestor_or_self(b, a)
    }

    pub fn lca(&self, u: NodeId, v: NodeId) -> NodeId {
        let (mut a, mut b) = (u, v);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    /// In-order `u ⪯ v`: neither `r(u ∧ v) ≤ u` nor `ℓ(u ∧ v) ≤ v`.
    pub fn in_order_leq(&self, u: NodeId, v: NodeId) -> bool {
        let w = self.lca(u, v);
        let below =
            |c: Option<NodeId>, x: NodeId| c.is_some_and(|c| self.is_ancestor_or_self(c, x));
        !below(self.nodes[w].right, u) && !below(self.nodes[w].left, v)
    }

    pub fn in_order_less(&self, u: NodeId, v: NodeId) -> bool {
        u != v && self.in_order_leq(u, v)
    }

    /// Nodes listed by in-order traversal.
    pub fn in_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut cur = Some(self.root);
        while cur.is_some() || !stack.is_empty() {
            while let Some(u) = cur {
                stack.push(u);
                cur = self.nodes[u].left;
            }
            let u = stack.pop().unwrap();
            out.push(u);
            cur = self.nodes[u].right;
        }
        out
    }

    /// Ancestors of `u` from the root down to `u` itself.
    pub fn root_path(&self, u: NodeId) -> Vec<NodeId> {
        let mut path = vec![u];
        let mut v = u;
        while let Some(p) = self.parent[v] {
            path.push(p);
            v = p;
        }
        path.reverse();
        path
    }

    /// Tree path from `u` to `v`, both included.
    pub fn path(&self, u: NodeId, v: NodeId) -> Vec<NodeId> {
        let w = self.lca(u, v);
        let mut up = vec![u];
        let mut a = u;
        while a != w {
            a = self.parent[a].unwrap();
            up.push(a);
        }
        let mut down = Vec::new();
        let mut b = v;
        while b != w {
            down.push(b);
            b = self.parent[b].unwrap();
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// The node of least depth whose bag contains `x`.
    pub fn least_node(&self, x: Vertex) -> Result<NodeId, DecompError> {
        (0..self.len())
            .filter(|&u| self.nodes[u].bag.contains(&x))
            .min_by_key(|&u| (self.depth[u], u))
            .ok_or(DecompError::VertexNotInDecomposition(x))
    }

    /// Children swapped everywhere and every `(s_u, t_u)` exchanged; a
    /// decomposition of `(G, t, s)` with the opposite in-order.
    pub fn reverse(&self) -> STDecomposition {
        let mut out = self.clone();
        for node in &mut out.nodes {
            std::mem::swap(&mut node.left, &mut node.right);
            std::mem::swap(&mut node.source, &mut node.sink);
        }
        out
    }

    /// Children swapped at every internal node whose bag has two vertices.
    pub fn swap_size2_children(&self) -> STDecomposition {
        let mut out = self.clone();
        for node in &mut out.nodes {
            if node.bag.len() == 2 {
                std::mem::swap(&mut node.left, &mut node.right);
            }
        }
        out
    }

    /// Every violated condition for being an s-t tree-decomposition of
    /// `(g, s, t)`; empty when valid.
    pub fn validate(&self, g: &Graph, s: Vertex, t: Vertex) -> Vec<String> {
        let mut problems = Vec::new();
        let n = g.vertex_count();
        for (u, node) in self.nodes.iter().enumerate() {
            if let Some(&x) = node.bag.iter().find(|&&x| x >= n) {
                problems.push(format!("node {u}: bag vertex {x} not in graph"));
            }
            if node.bag.len() > 3 {
                problems.push(format!(
                    "node {u}: bag of size {} exceeds width 2",
                    node.bag.len()
                ));
            }
            if node.source == node.sink {
                problems.push(format!("node {u}: source equals sink"));
            }
            if !node.bag.contains(&node.source) || !node.bag.contains(&node.sink) {
                problems.push(format!("node {u}: terminals not in bag"));
            }
            match (node.left, node.right) {
                (None, None) => {
                    if node.bag.len() != 2 {
                        problems.push(format!("leaf {u}: bag has size {}", node.bag.len()));
                    }
                }
                (Some(l), Some(r)) => {
                    let (ln, rn) = (&self.nodes[l], &self.nodes[r]);
                    match node.bag.len() {
                        2 => {
                            if ln.source != node.source
                                || rn.source != node.source
                                || ln.sink != node.sink
                                || rn.sink != node.sink
                            {
                                problems.push(format!(
                                    "node {u}: size-2 bag but children do not inherit its terminals"
                                ));
                            }
                        }
                        3 if ln.source != node.source
                            || ln.sink != rn.source
                            || !node.bag.contains(&ln.sink)
                            || rn.sink != node.sink =>
                        {
                            problems.push(format!(
                                "node {u}: size-3 bag but children terminals do not chain through it"
                            ));
                        }
                        _ => {}
                    }
                }
                _ => problems.push(format!("node {u} has exactly one child")),
            }
        }
        let root = &self.nodes[self.root];
        if (root.source, root.sink) != (s, t) {
            problems.push(format!(
                "root terminals ({}, {}) differ from ({s}, {t})",
                root.source, root.sink
            ));
        }
        // Vertex coverage and subtree connectivity: the nodes containing x
        // must have exactly one topmost member.
        let mut tops = vec![0usize; n];
        for (u, node) in self.nodes.iter().enumerate() {
            for &x in node.bag.iter().filter(|&&x| x < n) {
                let parent_has = self.parent[u].is_some_and(|p| self.nodes[p].bag.contains(&x));
                if !parent_has {
                    tops[x] += 1;
                }
            }
        }
        for (x, &c) in tops.iter().enumerate() {
            match c {
                0 => problems.push(format!("vertex {x} is in no bag")),
                1 => {}
                _ => problems.push(format!("bags containing vertex {x} are not connected")),
            }
        }
        let pairs: BTreeSet<(Vertex, Vertex)> = self
            .nodes
            .iter()
            .flat_map(|node| {
                let b = &node.bag;
                (0..b.len()).flat_map(move |i| (i + 1..b.len()).map(move |j| (b[i], b[j])))
            })
            .collect();
        for (u, v) in g.edges() {
            if !pairs.contains(&(u, v)) {
                problems.push(format!("edge {u}-{v} is in no bag"));
            }
        }
        if problems.is_empty() {
            for x in (0..n).filter(|&x| x != s && x != t) {
                let w = self.least_node(x).unwrap();
                if x == self.source(w) || x == self.sink(w) {
                    problems.push(format!("vertex {x} is a terminal of its least node {w}"));
                }
            }
        }
        problems
    }

    pub fn is_valid(&self, g: &Graph, s: Vertex, t: Vertex) -> bool {
        self.validate(g, s, t).is_empty()
    }

    fn check_connected(&self, g: &Graph, h: &[Vertex]) -> Result<(), DecompError> {
        if h.iter().any(|&v| v >= g.vertex_count()) || !g.induces_connected(h) {
            return Err(DecompError::PreconditionViolated(
                "vertex set does not induce a connected subgraph".into(),
            ));
        }
        Ok(())
    }

    /// Whether `h` meets `Y_{v1} ∩ Y_{v2}` for a tree edge `v1 v2` on the path
    /// between `u1` and `u2`, given that `h` is connected and meets both
    /// `Y_{u1}` and `Y_{u2}`. A degenerate path has no edges and gives `true`.
    pub fn separation_hits(
        &self,
        g: &Graph,
        u1: NodeId,
        u2: NodeId,
        edge: Option<(NodeId, NodeId)>,
        h: &[Vertex],
    ) -> Result<bool, DecompError> {
        self.check_connected(g, h)?;
        let hset: BTreeSet<Vertex> = h.iter().copied().collect();
        let meets = |u: NodeId| self.nodes[u].bag.iter().any(|x| hset.contains(x));
        if !meets(u1) || !meets(u2) {
            return Err(DecompError::PreconditionViolated(
                "subgraph misses an end bag".into(),
            ));
        }
        let path = self.path(u1, u2);
        let Some((v1, v2)) = edge else {
            return if u1 == u2 {
                Ok(true)
            } else {
                Err(DecompError::PreconditionViolated(
                    "no tree edge given".into(),
                ))
            };
        };
        let on_path = path
            .windows(2)
            .any(|w| (w[0], w[1]) == (v1, v2) || (w[0], w[1]) == (v2, v1));
        if !on_path {
            return Err(DecompError::PreconditionViolated(
                "edge is not on the tree path".into(),
            ));
        }
        let y2 = &self.nodes[v2].bag;
        Ok(self.nodes[v1]
            .bag
            .iter()
            .any(|x| y2.contains(x) && hset.contains(x)))
    }

    /// A node `v` on the path between comparable `u1` and `u2` with
    /// `{s_v, t_v} ⊆ h`, found greedily: the deepest path node whose source
    /// (or, when `u2` is above `u1`, sink) lies in `h`.
    pub fn st_subset_witness(
        &self,
        g: &Graph,
        u1: NodeId,
        u2: NodeId,
        h: &[Vertex],
    ) -> Result<NodeId, DecompError> {
        self.check_connected(g, h)?;
        if !self.comparable(u1, u2) {
            return Err(DecompError::PreconditionViolated(
                "nodes are not comparable".into(),
            ));
        }
        let hset: BTreeSet<Vertex> = h.iter().copied().collect();
        if !hset.contains(&self.source(u1)) || !hset.contains(&self.sink(u2)) {
            return Err(DecompError::PreconditionViolated(
                "s of the first node or t of the second is missing".into(),
            ));
        }
        let (top, bottom, key): (NodeId, NodeId, fn(&DecompNode) -> Vertex) =
            if self.is_ancestor_or_self(u1, u2) {
                (u1, u2, |n| n.source)
            } else {
                (u2, u1, |n| n.sink)
            };
        // Walk upward from the bottom; the first hit is the deepest.
        let mut v = bottom;
        loop {
            if hset.contains(&key(&self.nodes[v])) {
                break;
            }
            if v == top {
                return Err(DecompError::WitnessMissing);
            }
            v = self.parent[v].unwrap();
        }
        let node = &self.nodes[v];
        if hset.contains(&node.source) && hset.contains(&node.sink) {
            Ok(v)
        } else {
            Err(DecompError::WitnessMissing)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sp::{embed_into_sp, SpTreeBuilder};

    fn path_abc() -> (Graph, STDecomposition) {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut b = SpTreeBuilder::new();
        let l = b.leaf(0, 1);
        let r = b.leaf(1, 2);
        let root = b.series(l, r);
        let d = STDecomposition::build(&b.finish(root)).unwrap();
        (g, d)
    }

    #[test]
    fn single_leaf() {
        let mut b = SpTreeBuilder::new();
        let l = b.leaf(0, 1);
        let d = STDecomposition::build(&b.finish(l)).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.bag(0), &[0, 1]);
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(d.is_valid(&g, 0, 1));
        let r = d.reverse();
        assert_eq!((r.source(0), r.sink(0)), (1, 0));
        assert!(r.is_valid(&g, 1, 0));
    }

    #[test]
    fn path_decomposition() {
        let (g, d) = path_abc();
        assert_eq!(d.bag(d.root()), &[0, 1, 2]);
        assert_eq!(d.middle(d.root()), Some(1));
        let l = d.left(d.root()).unwrap();
        let r = d.right(d.root()).unwrap();
        assert_eq!(d.bag(l), &[0, 1]);
        assert_eq!(d.bag(r), &[1, 2]);
        assert!(d.is_valid(&g, 0, 2));
        assert!(!d.is_valid(&g, 2, 0));
        assert_eq!(d.least_node(1).unwrap(), d.root());
        assert_eq!(d.least_node(0).unwrap(), d.root());
        assert_eq!(d.in_order(), vec![l, d.root(), r]);
        let rev = d.reverse();
        assert_eq!(rev.in_order(), vec![r, d.root(), l]);
        assert!(rev.is_valid(&g, 2, 0));
        assert_eq!(rev.reverse(), d);
        assert_eq!(d.swap_size2_children(), d);
    }

    #[test]
    fn four_cycle_swap() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let e = embed_into_sp(&g).unwrap();
        let d = STDecomposition::build(&e.sp).unwrap();
        assert!(d.is_valid(&e.host, e.source(), e.sink()));
        let swapped = d.swap_size2_children();
        assert!(swapped.is_valid(&e.host, e.source(), e.sink()));
        assert_eq!(swapped.swap_size2_children(), d);
        assert_eq!(swapped.left(swapped.root()), d.right(d.root()));
    }

    #[test]
    fn size_three_leaf_is_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let d = STDecomposition::from_nodes(
            vec![DecompNode {
                bag: vec![0, 1, 2],
                source: 0,
                sink: 2,
                left: None,
                right: None,
            }],
            0,
        )
        .unwrap();
        assert!(!d.is_valid(&g, 0, 2));
    }

    #[test]
    fn in_order_matches_traversal() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
            .unwrap();
        let e = embed_into_sp(&g).unwrap();
        let d = STDecomposition::build(&e.sp).unwrap();
        let order = d.in_order();
        for (i, &u) in order.iter().enumerate() {
            for (j, &v) in order.iter().enumerate() {
                assert_eq!(d.in_order_leq(u, v), i <= j);
            }
        }
        assert!(d.in_order_less(d.left(d.root()).unwrap(), d.root()));
    }

    #[test]
    fn lemma_helpers_on_path() {
        let (g, d) = path_abc();
        let root = d.root();
        let l = d.left(root).unwrap();
        let r = d.right(root).unwrap();
        assert_eq!(
            d.separation_hits(&g, l, r, Some((l, root)), &[0, 1]),
            Ok(true)
        );
        assert_eq!(d.separation_hits(&g, l, l, None, &[0]), Ok(true));
        assert!(d
            .separation_hits(&g, l, r, Some((l, r)), &[0, 1, 2])
            .is_err());
        assert_eq!(d.st_subset_witness(&g, root, r, &[0, 1, 2]), Ok(r));
        assert_eq!(d.st_subset_witness(&g, r, r, &[1, 2]), Ok(r));
        assert!(d.st_subset_witness(&g, l, r, &[0, 1, 2]).is_err());
        assert!(d.st_subset_witness(&g, root, r, &[0, 2]).is_err());
    }
}
