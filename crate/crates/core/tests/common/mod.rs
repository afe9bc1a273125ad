//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use tw2dim::{Graph, LinearExtension, Poset, Vertex};

/// Adjacency bitmasks on at most 8 vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    pub adj: Vec<u8>,
}

impl SmallGraph {
    pub fn from_graph(g: &Graph) -> SmallGraph {
        let mut adj = vec![0u8; g.vertex_count()];
        for (u, v) in g.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        SmallGraph { adj }
    }

    fn has_k4_subgraph(&self) -> bool {
        let n = self.adj.len();
        for a in 0..n {
            for b in a + 1..n {
                if self.adj[a] >> b & 1 == 0 {
                    continue;
                }
                for c in b + 1..n {
                    if self.adj[a] >> c & 1 == 0 || self.adj[b] >> c & 1 == 0 {
                        continue;
                    }
                    for d in c + 1..n {
                        let m = 1 << d;
                        if self.adj[a] & m != 0 && self.adj[b] & m != 0 && self.adj[c] & m != 0 {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Contracts edge `uv` into `u` and drops `v`.
    fn contract(&self, u: usize, v: usize) -> SmallGraph {
        let n = self.adj.len();
        let map = |w: usize| match w.cmp(&v) {
            std::cmp::Ordering::Equal => u - usize::from(u > v),
            std::cmp::Ordering::Greater => w - 1,
            std::cmp::Ordering::Less => w,
        };
        let mut adj = vec![0u8; n - 1];
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (map(a), map(b));
                if self.adj[a] >> b & 1 == 1 && x != y {
                    adj[x] |= 1 << y;
                }
            }
        }
        SmallGraph { adj }
    }
}

/// Whether `g` has a K4 minor: a K4 subgraph, or one after some sequence of
/// edge contractions. Memoized across calls.
pub fn has_k4_minor(g: &SmallGraph, memo: &mut HashMap<SmallGraph, bool>) -> bool {
    if g.adj.len() < 4 {
        return false;
    }
    if let Some(&known) = memo.get(g) {
        return known;
    }
    let mut found = g.has_k4_subgraph();
    let n = g.adj.len();
    'outer: for u in 0..n {
        for v in u + 1..n {
            if !found && g.adj[u] >> v & 1 == 1 && has_k4_minor(&g.contract(u, v), memo) {
                found = true;
                break 'outer;
            }
        }
    }
    memo.insert(g.clone(), found);
    found
}

/// Graph on `n` vertices with the edges selected by the bits of `code`
/// over the pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if code >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// All linear extensions of a small poset.
pub fn all_extensions(p: &Poset) -> Vec<LinearExtension> {
    fn go(p: &Poset, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<LinearExtension>) {
        if prefix.len() == p.len() {
            out.push(LinearExtension::new(prefix.clone()));
            return;
        }
        for x in 0..p.len() {
            if !used[x] && (0..p.len()).all(|z| !p.less(z, x) || used[z]) {
                used[x] = true;
                prefix.push(x);
                go(p, prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(p, &mut Vec::new(), &mut vec![false; p.len()], &mut out);
    out
}

/// Random vertex set inducing a connected subgraph of `g`, grown from a
/// random start vertex.
pub fn random_connected_set<R: Rng>(g: &Graph, rng: &mut R) -> Vec<Vertex> {
    let n = g.vertex_count();
    let start = rng.gen_range(0..n);
    let target = rng.gen_range(1..=n);
    let mut inside = vec![false; n];
    inside[start] = true;
    let mut set = vec![start];
    let mut frontier: Vec<Vertex> = g.neighbors(start).collect();
    while set.len() < target && !frontier.is_empty() {
        let i = rng.gen_range(0..frontier.len());
        let v = frontier.swap_remove(i);
        if inside[v] {
            continue;
        }
        inside[v] = true;
        set.push(v);
        frontier.extend(g.neighbors(v).filter(|&w| !inside[w]));
    }
    set.shuffle(rng);
    set
}
