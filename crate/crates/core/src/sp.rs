//! Treewidth-2 recognition and series-parallel supergraphs.
//!
//! A graph of treewidth at most 2 is completed to a 2-tree by a degree-≤2
//! elimination, each 2-tree is reduced to a two-terminal series-parallel
//! composition tree around a reference edge, and components are chained in
//! series through bridge edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::graph::{Graph, GraphError, Vertex};

/// Whether `g` reduces to nothing by deleting vertices of degree at most 1
/// and suppressing vertices of degree 2.
pub fn has_treewidth_at_most_2(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut stack: Vec<Vertex> = (0..n).filter(|&v| adj[v].len() <= 2).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] || adj[v].len() > 2 {
            continue;
        }
        alive[v] = false;
        remaining -= 1;
        let nbrs: Vec<Vertex> = std::mem::take(&mut adj[v]).into_iter().collect();
        for &u in &nbrs {
            adj[u].remove(&v);
        }
        if let [a, b] = nbrs[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        for &u in &nbrs {
            if adj[u].len() <= 2 {
                stack.push(u);
            }
        }
    }
    remaining == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpKind {
    /// A single edge from `source` to `sink`.
    Leaf,
    Series(usize, usize),
    Parallel(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpNode {
    pub kind: SpKind,
    pub source: Vertex,
    pub sink: Vertex,
}

impl SpNode {
    pub fn children(&self) -> Option<(usize, usize)> {
        match self.kind {
            SpKind::Leaf => None,
            SpKind::Series(l, r) | SpKind::Parallel(l, r) => Some((l, r)),
        }
    }
}

/// Binary composition tree of a two-terminal series-parallel graph. Nodes are
/// numbered in preorder when produced by [`SpTreeBuilder::finish`], so the
/// root is node 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpTree {
    nodes: Vec<SpNode>,
    root: usize,
}

#[derive(Debug, Default)]
pub struct SpTreeBuilder {
    nodes: Vec<SpNode>,
}

impl SpTreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder seeded with the nodes of `tree`; returns the id of its root.
    pub fn from_tree(tree: &SpTree) -> (Self, usize) {
        (
            SpTreeBuilder {
                nodes: tree.nodes.clone(),
            },
            tree.root,
        )
    }

    pub fn source(&self, id: usize) -> Vertex {
        self.nodes[id].source
    }

    pub fn sink(&self, id: usize) -> Vertex {
        self.nodes[id].sink
    }

    pub fn leaf(&mut self, source: Vertex, sink: Vertex) -> usize {
        self.push(SpKind::Leaf, source, sink)
    }

    pub fn series(&mut self, left: usize, right: usize) -> usize {
        let (s, t) = (self.nodes[left].source, self.nodes[right].sink);
        self.push(SpKind::Series(left, right), s, t)
    }

    pub fn parallel(&mut self, left: usize, right: usize) -> usize {
        let (s, t) = (self.nodes[left].source, self.nodes[left].sink);
        self.push(SpKind::Parallel(left, right), s, t)
    }

    fn push(&mut self, kind: SpKind, source: Vertex, sink: Vertex) -> usize {
        self.nodes.push(SpNode { kind, source, sink });
        self.nodes.len() - 1
    }

    /// Keeps the nodes reachable from `root`, renumbered in preorder.
    pub fn finish(self, root: usize) -> SpTree {
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            order.push(id);
            if let Some((l, r)) = self.nodes[id].children() {
                stack.push(r);
                stack.push(l);
            }
        }
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        for (i, &old) in order.iter().enumerate() {
            new_id[old] = i;
        }
        let nodes = order
            .iter()
            .map(|&old| {
                let node = self.nodes[old];
                let kind = match node.kind {
                    SpKind::Leaf => SpKind::Leaf,
                    SpKind::Series(l, r) => SpKind::Series(new_id[l], new_id[r]),
                    SpKind::Parallel(l, r) => SpKind::Parallel(new_id[l], new_id[r]),
                };
                SpNode { kind, ..node }
            })
            .collect();
        SpTree { nodes, root: 0 }
    }
}

impl SpTree {
    /// Unchecked constructor; pair with [`SpTree::validate`].
    pub fn from_nodes(nodes: Vec<SpNode>, root: usize) -> SpTree {
        SpTree { nodes, root }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &[SpNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &SpNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn source(&self) -> Vertex {
        self.nodes[self.root].source
    }

    pub fn sink(&self) -> Vertex {
        self.nodes[self.root].sink
    }

    /// Edges of the represented graph, as `(min, max)`.
    pub fn edge_set(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.nodes
            .iter()
            .filter(|n| n.kind == SpKind::Leaf)
            .map(|n| (n.source.min(n.sink), n.source.max(n.sink)))
            .collect()
    }

    /// Every violated composition condition; empty when the tree is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let len = self.nodes.len();
        if self.root >= len {
            problems.push(format!("root {} out of range", self.root));
            return problems;
        }
        // Structure: each node reached exactly once from the root.
        let mut visits = vec![0usize; len];
        let mut post = Vec::with_capacity(len);
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                post.push(id);
                continue;
            }
            visits[id] += 1;
            if visits[id] > 1 {
                problems.push(format!("node {id} is reachable more than once"));
                return problems;
            }
            stack.push((id, true));
            if let Some((l, r)) = self.nodes[id].children() {
                for c in [r, l] {
                    if c >= len {
                        problems.push(format!("node {id} has child {c} out of range"));
                        return problems;
                    }
                    stack.push((c, false));
                }
            }
        }
        if let Some(orphan) = visits.iter().position(|&v| v == 0) {
            problems.push(format!("node {orphan} is unreachable from the root"));
        }

        type Part = (BTreeSet<Vertex>, BTreeSet<(Vertex, Vertex)>);
        let mut parts: Vec<Option<Part>> = vec![None; len];
        for id in post {
            let node = self.nodes[id];
            let part = match node.kind {
                SpKind::Leaf => {
                    if node.source == node.sink {
                        problems.push(format!("leaf {id} is a loop"));
                    }
                    let e = (node.source.min(node.sink), node.source.max(node.sink));
                    (
                        BTreeSet::from([node.source, node.sink]),
                        BTreeSet::from([e]),
                    )
                }
                SpKind::Series(l, r) | SpKind::Parallel(l, r) => {
                    let (lv, le) = parts[l].take().unwrap();
                    let (rv, re) = parts[r].take().unwrap();
                    let (ln, rn) = (self.nodes[l], self.nodes[r]);
                    if !le.is_disjoint(&re) {
                        problems.push(format!("node {id}: children share an edge"));
                    }
                    let common: BTreeSet<Vertex> = lv.intersection(&rv).copied().collect();
                    match node.kind {
                        SpKind::Series(..) => {
                            if ln.sink != rn.source {
                                problems.push(format!(
                                    "series node {id}: left sink differs from right source"
                                ));
                            }
                            if common != BTreeSet::from([ln.sink]) {
                                problems.push(format!(
                                    "series node {id}: children share {:?}, expected only the joint",
                                    common
                                ));
                            }
                            if (node.source, node.sink) != (ln.source, rn.sink) {
                                problems.push(format!("series node {id}: wrong terminals"));
                            }
                        }
                        _ => {
                            if (ln.source, ln.sink) != (rn.source, rn.sink) {
                                problems.push(format!(
                                    "parallel node {id}: children have different terminals"
                                ));
                            }
                            if common != BTreeSet::from([ln.source, ln.sink]) {
                                problems.push(format!(
                                    "parallel node {id}: children share {:?}, expected only the terminals",
                                    common
                                ));
                            }
                            if (node.source, node.sink) != (ln.source, ln.sink) {
                                problems.push(format!("parallel node {id}: wrong terminals"));
                            }
                        }
                    }
                    let mut v = lv;
                    v.extend(rv);
                    let mut e = le;
                    e.extend(re);
                    (v, e)
                }
            };
            parts[id] = Some(part);
        }
        problems
    }
}

/// A series-parallel supergraph of some input graph.
///
/// Host vertices `0..original_vertex_count` are the input vertices in their
/// original order; fresh vertices follow.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub host: Graph,
    pub sp: SpTree,
    pub original_vertex_count: usize,
    pub added_edges: BTreeSet<(Vertex, Vertex)>,
    pub added_vertices: BTreeSet<Vertex>,
}

impl Embedding {
    pub fn source(&self) -> Vertex {
        self.sp.source()
    }

    pub fn sink(&self) -> Vertex {
        self.sp.sink()
    }

    /// DOT rendering of the host; fill edges are dashed, fresh vertices boxed.
    pub fn to_dot(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
        let mut out = String::from("graph host {\n");
        for v in 0..self.host.vertex_count() {
            let name = quote(self.host.name(v));
            let mut attrs = Vec::new();
            if self.added_vertices.contains(&v) {
                attrs.push("shape=box");
            }
            if v == self.source() || v == self.sink() {
                attrs.push("peripheries=2");
            }
            if attrs.is_empty() {
                writeln!(out, "  {name};").unwrap();
            } else {
                writeln!(out, "  {name} [{}];", attrs.join(", ")).unwrap();
            }
        }
        for (u, v) in self.host.edges() {
            let style = if self.added_edges.contains(&(u, v)) {
                " [style=dashed]"
            } else {
                ""
            };
            writeln!(
                out,
                "  {} -- {}{style};",
                quote(self.host.name(u)),
                quote(self.host.name(v))
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Embeds `g` into a two-terminal series-parallel supergraph.
pub fn embed_into_sp(g: &Graph) -> Result<Embedding, GraphError> {
    if !has_treewidth_at_most_2(g) {
        return Err(GraphError::NotTreewidth2);
    }
    let mut host = g.clone();
    let mut b = SpTreeBuilder::new();
    let mut pieces = Vec::new();
    for comp in g.components() {
        if let [v] = comp[..] {
            let c = host.add_vertex(host.fresh_name("~c"))?;
            host.add_edge(v, c)?;
            pieces.push(b.leaf(v, c));
            continue;
        }
        complete_to_two_tree(&mut host, &comp)?;
        pieces.push(reduce_two_tree(&host, &comp, &mut b)?);
    }
    if pieces.is_empty() {
        let s = host.add_vertex(host.fresh_name("~c"))?;
        let t = host.add_vertex(host.fresh_name("~c"))?;
        host.add_edge(s, t)?;
        pieces.push(b.leaf(s, t));
    }
    let mut acc = pieces[0];
    for &piece in &pieces[1..] {
        let (t, s) = (b.sink(acc), b.source(piece));
        host.add_edge(t, s)?;
        let bridge = b.leaf(t, s);
        let joined = b.series(acc, bridge);
        acc = b.series(joined, piece);
    }
    let sp = b.finish(acc);
    Ok(finish_embedding(g, host, sp))
}

fn finish_embedding(g: &Graph, host: Graph, sp: SpTree) -> Embedding {
    let original = g.vertex_count();
    let added_edges = host
        .edges()
        .into_iter()
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect();
    let added_vertices = (original..host.vertex_count()).collect();
    Embedding {
        host,
        sp,
        original_vertex_count: original,
        added_edges,
        added_vertices,
    }
}

/// Adds fill edges to `host` so that `comp` (connected, ≥ 2 vertices) spans a
/// 2-tree.
fn complete_to_two_tree(host: &mut Graph, comp: &[Vertex]) -> Result<(), GraphError> {
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = comp
        .iter()
        .map(|&v| (v, host.neighbors(v).collect()))
        .collect();
    let mut cands: BTreeSet<Vertex> = comp.iter().copied().filter(|v| adj[v].len() <= 2).collect();
    while adj.len() > 2 {
        let v = cands.pop_first().ok_or(GraphError::NotTreewidth2)?;
        let nbrs: Vec<Vertex> = adj.remove(&v).unwrap().into_iter().collect();
        for u in &nbrs {
            adj.get_mut(u).unwrap().remove(&v);
        }
        match nbrs[..] {
            [a, b] => {
                if adj.get_mut(&a).unwrap().insert(b) {
                    adj.get_mut(&b).unwrap().insert(a);
                    host.add_edge(a, b)?;
                }
            }
            [a] => {
                let b = *adj[&a].first().expect("component stays connected");
                host.add_edge(v, b)?;
            }
            _ => unreachable!("connected component with more than two vertices left"),
        }
        for u in &nbrs {
            if adj[u].len() <= 2 {
                cands.insert(*u);
            } else {
                cands.remove(u);
            }
        }
    }
    Ok(())
}

/// Series-parallel tree of the 2-tree spanned by `comp` in `host`, rooted at
/// its smallest edge.
fn reduce_two_tree(
    host: &Graph,
    comp: &[Vertex],
    b: &mut SpTreeBuilder,
) -> Result<usize, GraphError> {
    let (s, t) = comp
        .iter()
        .flat_map(|&u| {
            host.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
        .min()
        .expect("component has an edge");
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = comp
        .iter()
        .map(|&v| (v, host.neighbors(v).collect()))
        .collect();
    let protected = |v: Vertex| v == s || v == t;
    let mut cands: BTreeSet<Vertex> = comp
        .iter()
        .copied()
        .filter(|&v| !protected(v) && adj[&v].len() == 2)
        .collect();
    // Vertices hanging off each edge, in elimination order.
    let mut attached: BTreeMap<(Vertex, Vertex), Vec<Vertex>> = BTreeMap::new();
    while adj.len() > 2 {
        let v = cands.pop_first().ok_or(GraphError::NotTreewidth2)?;
        let nbrs: Vec<Vertex> = adj.remove(&v).unwrap().into_iter().collect();
        let [x, y] = nbrs[..] else {
            return Err(GraphError::NotTreewidth2);
        };
        if !adj[&x].contains(&y) {
            return Err(GraphError::NotTreewidth2);
        }
        attached.entry((x, y)).or_default().push(v);
        for u in [x, y] {
            adj.get_mut(&u).unwrap().remove(&v);
            if !protected(u) && adj[&u].len() == 2 {
                cands.insert(u);
            } else {
                cands.remove(&u);
            }
        }
    }
    Ok(compose(s, t, &attached, b))
}

/// `P(leaf(a, b), S(a→v, v→b), ...)` over every vertex hanging off `{a, b}`.
fn compose(
    a: Vertex,
    z: Vertex,
    attached: &BTreeMap<(Vertex, Vertex), Vec<Vertex>>,
    b: &mut SpTreeBuilder,
) -> usize {
    let mut acc = b.leaf(a, z);
    if let Some(hanging) = attached.get(&(a.min(z), a.max(z))) {
        for &v in hanging {
            let left = compose(a, v, attached, b);
            let right = compose(v, z, attached, b);
            let path = b.series(left, right);
            acc = b.parallel(acc, path);
        }
    }
    acc
}

/// Series-composes fresh edges `{s*, s}` and `{t, t*}` around the embedding so
/// that neither terminal is an input vertex.
pub fn augment_with_fresh_terminals(e: &Embedding) -> Embedding {
    let mut host = e.host.clone();
    let (s, t) = (e.source(), e.sink());
    let s_new = host.add_vertex(host.fresh_name("~s")).unwrap();
    let t_new = host.add_vertex(host.fresh_name("~t")).unwrap();
    host.add_edge(s_new, s).unwrap();
    host.add_edge(t, t_new).unwrap();
    let (mut b, old) = SpTreeBuilder::from_tree(&e.sp);
    let head = b.leaf(s_new, s);
    let tail = b.leaf(t, t_new);
    let inner = b.series(old, tail);
    let root = b.series(head, inner);
    let mut added_edges = e.added_edges.clone();
    added_edges.insert((s_new.min(s), s_new.max(s)));
    added_edges.insert((t.min(t_new), t.max(t_new)));
    let mut added_vertices = e.added_vertices.clone();
    added_vertices.extend([s_new, t_new]);
    Embedding {
        host,
        sp: b.finish(root),
        original_vertex_count: e.original_vertex_count,
        added_edges,
        added_vertices,
    }
}
