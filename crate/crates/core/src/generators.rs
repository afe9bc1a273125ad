//! Instance families. Random families use ChaCha8 seeded with
//! `seed_from_u64`, so a `(family, n, seed)` triple gives the same poset on
//! every platform.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::poset::Poset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    StandardExample,
    Kelly,
    Chain,
    Antichain,
    Forest,
    RandomTw2,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::StandardExample,
        Family::Kelly,
        Family::Chain,
        Family::Antichain,
        Family::Forest,
        Family::RandomTw2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::StandardExample => "standard_example",
            Family::Kelly => "kelly",
            Family::Chain => "chain",
            Family::Antichain => "antichain",
            Family::Forest => "forest",
            Family::RandomTw2 => "random_tw2",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, Family::Forest | Family::RandomTw2)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GenError::BadParameter(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Poset, GenError> {
        match self.family {
            Family::StandardExample => standard_example(self.n),
            Family::Kelly => kelly(self.n),
            Family::Chain => chain(self.n),
            Family::Antichain => antichain(self.n),
            Family::Forest => forest_poset(self.n, self.seed),
            Family::RandomTw2 => random_tw2_poset(self.n, self.seed),
        }
    }
}

fn at_least(n: usize, min: usize, what: &str) -> Result<(), GenError> {
    if n < min {
        return Err(GenError::BadParameter(format!(
            "{what} needs n >= {min}, got {n}"
        )));
    }
    Ok(())
}

fn build(names: Vec<String>, rel: &[(usize, usize)]) -> Poset {
    Poset::from_relation(names, rel).expect("generated relation is acyclic")
}

/// `a1..an, b1..bn` with `a_i < b_j` exactly when `i != j`.
pub fn standard_example(n: usize) -> Result<Poset, GenError> {
    at_least(n, 2, "standard_example")?;
    let names = (1..=n)
        .map(|i| format!("a{i}"))
        .chain((1..=n).map(|i| format!("b{i}")))
        .collect();
    let rel: Vec<_> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, n + j)))
        .collect();
    Ok(build(names, &rel))
}

/// Kelly's planar construction containing `S_n`.
///
/// Elements are `a1..an`, `b1..bn`, a chain `c0 < c1 < .. < cn` and a chain
/// `dn < .. < d1 < d0`, with covers `a_i < c_i`, `a_i < d_{i-1}`,
/// `c_{j-1} < b_j` and `d_j < b_j`:
///
/// ```text
///   b1    b2   ..   bn
///   | \   | \       | \
///  c0 d1 c1 d2 ..  c(n-1) dn
/// ```
///
/// so `a_i < b_j` runs up the `c` chain when `i < j` and up the `d` chain when
/// `i > j`.
pub fn kelly(n: usize) -> Result<Poset, GenError> {
    at_least(n, 2, "kelly")?;
    let a = |i: usize| i - 1;
    let b = |i: usize| n + i - 1;
    let c = |i: usize| 2 * n + i;
    let d = |i: usize| 3 * n + 1 + i;
    let names = (1..=n)
        .map(|i| format!("a{i}"))
        .chain((1..=n).map(|i| format!("b{i}")))
        .chain((0..=n).map(|i| format!("c{i}")))
        .chain((0..=n).map(|i| format!("d{i}")))
        .collect();
    let mut rel = Vec::new();
    for i in 1..=n {
        rel.push((c(i - 1), c(i)));
        rel.push((d(i), d(i - 1)));
        rel.push((a(i), c(i)));
        rel.push((a(i), d(i - 1)));
        rel.push((c(i - 1), b(i)));
        rel.push((d(i), b(i)));
    }
    Ok(build(names, &rel))
}

pub fn chain(n: usize) -> Result<Poset, GenError> {
    at_least(n, 1, "chain")?;
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(build(names, &rel))
}

pub fn antichain(n: usize) -> Result<Poset, GenError> {
    at_least(n, 1, "antichain")?;
    Ok(build((0..n).map(|i| format!("x{i}")).collect(), &[]))
}

fn element_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Random forest: each vertex joins a random earlier vertex with probability
/// 0.8, and each edge gets a random direction.
pub fn forest_poset(n: usize, seed: u64) -> Result<Poset, GenError> {
    at_least(n, 1, "forest")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rel = Vec::new();
    for v in 1..n {
        if rng.gen_bool(0.8) {
            let u = rng.gen_range(0..v);
            rel.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
        }
    }
    Ok(build(element_names(n), &rel))
}

/// Random poset whose cover graph has treewidth at most 2, with the default
/// edge deletion probability 0.3.
pub fn random_tw2_poset(n: usize, seed: u64) -> Result<Poset, GenError> {
    random_tw2_poset_with(n, seed, 0.3)
}

/// Grows a random 2-tree, drops each non-initial edge with probability
/// `delete` when that keeps the graph connected, orients edges along a random
/// vertex order, and closes transitively.
pub fn random_tw2_poset_with(n: usize, seed: u64, delete: f64) -> Result<Poset, GenError> {
    at_least(n, 1, "random_tw2")?;
    if !(0.0..=1.0).contains(&delete) {
        return Err(GenError::BadParameter(format!(
            "deletion probability {delete}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    if n >= 2 {
        edges.push((0, 1));
    }
    for v in 2..n {
        let (x, y) = edges[rng.gen_range(0..edges.len())];
        edges.push((x, v));
        edges.push((y, v));
    }
    let mut present = vec![true; edges.len()];
    for i in 1..edges.len() {
        if rng.gen_bool(delete) {
            present[i] = false;
            let rest: Vec<_> = (0..edges.len())
                .filter(|&j| present[j])
                .map(|j| edges[j])
                .collect();
            let g = Graph::from_edges(n, &rest).expect("edges are simple");
            if g.components().len() > 1 {
                present[i] = true;
            }
        }
    }
    let kept: Vec<_> = (0..edges.len())
        .filter(|&j| present[j])
        .map(|j| edges[j])
        .collect();
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(&mut rng);
    let rel: Vec<_> = kept
        .iter()
        .map(|&(u, v)| if rank[u] < rank[v] { (u, v) } else { (v, u) })
        .collect();
    Ok(build(element_names(n), &rel))
}
