//! Simple undirected graphs with named vertices.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("graph has treewidth greater than 2")]
    NotTreewidth2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    adj: Vec<BTreeSet<Vertex>>,
}

impl Graph {
    pub fn new(names: Vec<String>) -> Result<Graph, GraphError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        let adj = vec![BTreeSet::new(); names.len()];
        Ok(Graph { names, index, adj })
    }

    /// Graph on `n` vertices named `v0 .. v{n-1}`.
    pub fn with_vertices(n: usize) -> Graph {
        Graph::new((0..n).map(|i| format!("v{i}")).collect()).expect("names are distinct")
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        let mut g = Graph::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<Vertex, GraphError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(GraphError::DuplicateVertex(name));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.adj.push(BTreeSet::new());
        Ok(id)
    }

    /// A vertex name starting with `prefix` not yet in use.
    pub fn fresh_name(&self, prefix: &str) -> String {
        if !self.index.contains_key(prefix) {
            return prefix.to_string();
        }
        (0..)
            .map(|k| format!("{prefix}{k}"))
            .find(|s| !self.index.contains_key(s))
            .unwrap()
    }

    /// Adds `{u, v}`; returns `false` when it was already present.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        let n = self.names.len();
        if u >= n {
            return Err(GraphError::IndexOutOfRange(u));
        }
        if v >= n {
            return Err(GraphError::IndexOutOfRange(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.names[u].clone()));
        }
        let fresh = self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(fresh)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(u).is_some_and(|a| a.contains(&v))
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.range(u + 1..).map(|&v| (u, v)));
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether `set` induces a connected subgraph. The empty set is not
    /// considered connected.
    pub fn induces_connected(&self, set: &[Vertex]) -> bool {
        let Some(&start) = set.first() else {
            return false;
        };
        let mut inside = vec![false; self.vertex_count()];
        for &v in set {
            inside[v] = true;
        }
        let mut seen = vec![false; self.vertex_count()];
        seen[start] = true;
        let mut reached = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        let distinct = set.iter().collect::<BTreeSet<_>>().len();
        reached == distinct
    }

    /// Whether every vertex and edge of `self` appears in `other` (matched by
    /// vertex name).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        let map: Option<Vec<Vertex>> = self.names.iter().map(|n| other.index_of(n)).collect();
        let Some(map) = map else {
            return false;
        };
        self.edges()
            .into_iter()
            .all(|(u, v)| other.has_edge(map[u], map[v]))
    }
}
