//! Exact dimension by backtracking, for small posets.
//!
//! Only critical pairs are searched: `(x, y)` with `x ∥ y`, every element
//! below `x` also below `y`, and every element above `y` also above `x`. A
//! family of linear extensions reversing all critical pairs is a realizer, so
//! the least number of reversible sets covering the critical pairs is the
//! dimension.

use thiserror::Error;

use crate::bits::BitMatrix;
use crate::poset::{IncPair, LinearExtension, Poset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimensionError {
    #[error("dimension exceeds {0}")]
    Exceeded(usize),
    #[error("{pairs} incomparable pairs exceed the search cap of {cap}")]
    TooLarge { pairs: usize, cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionOptions {
    /// Largest dimension tried before giving up.
    pub max_d: usize,
    /// Largest number of ordered incomparable pairs accepted.
    pub cap: usize,
}

impl Default for DimensionOptions {
    fn default() -> Self {
        DimensionOptions { max_d: 12, cap: 60 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionResult {
    pub dimension: usize,
    pub witness: Vec<LinearExtension>,
    /// Partition of all incomparable pairs; part `i` is reversed by
    /// `witness[i]`.
    pub parts: Vec<Vec<IncPair>>,
}

pub fn critical_pairs(p: &Poset) -> Vec<IncPair> {
    p.incomparable_pairs()
        .into_iter()
        .filter(
            |&IncPair {
                 first: x,
                 second: y,
             }| {
                (0..p.len())
                    .all(|z| (!p.less(z, x) || p.less(z, y)) && (!p.less(y, z) || p.less(x, z)))
            },
        )
        .collect()
}

struct Search<'a> {
    n: usize,
    base: &'a BitMatrix,
    pairs: &'a [IncPair],
    assignment: Vec<usize>,
}

impl Search<'_> {
    /// Adds arc `y -> x` (y placed below x); `false` if that closes a cycle.
    fn add(&self, reach: &mut BitMatrix, pair: IncPair) -> bool {
        let (x, y) = (pair.first, pair.second);
        if reach.get(x, y) {
            return false;
        }
        let mut src = reach.clone();
        src.set(x, x);
        for a in 0..self.n {
            if a == y || reach.get(a, y) {
                reach.or_row_from(a, &src, x);
            }
        }
        true
    }

    fn run(&mut self, i: usize, parts: &mut Vec<BitMatrix>, d: usize) -> bool {
        if i == self.pairs.len() {
            return true;
        }
        let pair = self.pairs[i];
        for k in 0..parts.len() {
            let saved = parts[k].clone();
            if self.add(&mut parts[k], pair) {
                self.assignment[i] = k;
                if self.run(i + 1, parts, d) {
                    return true;
                }
            }
            parts[k] = saved;
        }
        if parts.len() < d {
            let mut fresh = self.base.clone();
            if self.add(&mut fresh, pair) {
                parts.push(fresh);
                self.assignment[i] = parts.len() - 1;
                if self.run(i + 1, parts, d) {
                    return true;
                }
                parts.pop();
            }
        }
        false
    }
}

/// Least `d` such that `Inc(P)` splits into `d` reversible sets, with a
/// witnessing realizer. Chains (and the empty poset) have dimension 1.
pub fn dimension_exact(
    p: &Poset,
    opts: &DimensionOptions,
) -> Result<DimensionResult, DimensionError> {
    let inc = p.incomparable_pairs();
    if inc.len() > opts.cap {
        return Err(DimensionError::TooLarge {
            pairs: inc.len(),
            cap: opts.cap,
        });
    }
    if inc.is_empty() {
        let ext = p
            .linear_extension_reversing(&[])
            .expect("posets have extensions");
        return Ok(DimensionResult {
            dimension: 1,
            witness: vec![ext],
            parts: vec![Vec::new()],
        });
    }
    let critical = critical_pairs(p);
    let base = p.strict_order_matrix();
    for d in 2..=opts.max_d {
        let mut search = Search {
            n: p.len(),
            base: &base,
            pairs: &critical,
            assignment: vec![0; critical.len()],
        };
        if !search.run(0, &mut Vec::new(), d) {
            continue;
        }
        let mut groups = vec![Vec::new(); d];
        for (i, &k) in search.assignment.iter().enumerate() {
            groups[k].push(critical[i]);
        }
        let witness: Vec<LinearExtension> = groups
            .iter()
            .map(|g| p.linear_extension_reversing(g).expect("part is reversible"))
            .collect();
        let positions: Vec<Vec<usize>> = witness.iter().map(LinearExtension::positions).collect();
        let mut parts = vec![Vec::new(); d];
        for pair in inc {
            let k = positions
                .iter()
                .position(|pos| pos[pair.second] < pos[pair.first])
                .expect("reversing the critical pairs reverses every pair");
            parts[k].push(pair);
        }
        return Ok(DimensionResult {
            dimension: d,
            witness,
            parts,
        });
    }
    Err(DimensionError::Exceeded(opts.max_d))
}

/// Whether some `2n` elements induce the standard example `S_n`:
/// `a_i ∥ b_i`, and `a_i < b_j`, `a_i ∥ a_j`, `b_i ∥ b_j` for `i ≠ j`.
pub fn contains_standard_example(p: &Poset, n: usize) -> bool {
    fn extend(p: &Poset, n: usize, chosen: &mut Vec<(usize, usize)>) -> bool {
        if chosen.len() == n {
            return true;
        }
        let start = chosen.last().map_or(0, |&(a, _)| a + 1);
        for a in start..p.len() {
            if !chosen
                .iter()
                .all(|&(aj, bj)| p.incomparable(a, aj) && p.less(a, bj))
            {
                continue;
            }
            for b in 0..p.len() {
                let fits = p.incomparable(a, b)
                    && chosen
                        .iter()
                        .all(|&(aj, bj)| p.incomparable(b, bj) && p.less(aj, b));
                if fits {
                    chosen.push((a, b));
                    if extend(p, n, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
        }
        false
    }
    extend(p, n, &mut Vec::new())
}
