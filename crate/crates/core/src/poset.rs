//! Finite posets stored as a dense reachability matrix.
//!
//! Elements are addressed by their index in declaration order, which is also
//! the canonical order used for every tie-break in this crate (covering
//! chains, topological sorts, pair enumeration).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::bits::BitMatrix;
use crate::graph::Graph;

/// Index of an element in its poset's canonical order.
pub type Element = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("relation has a directed cycle through `{0}`")]
    Cycle(String),
    #[error("`{0}` is not below `{1}`")]
    NotComparable(String, String),
    #[error("({0}, {1}) is not an incomparable pair")]
    PairNotIncomparable(String, String),
    #[error("pair set is not reversible; witness cycle {0}")]
    NotReversible(AlternatingCycle),
}

/// Ordered pair of incomparable elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IncPair {
    pub first: Element,
    pub second: Element,
}

impl IncPair {
    pub fn new(first: Element, second: Element) -> Self {
        IncPair { first, second }
    }

    pub fn reversed(self) -> Self {
        IncPair {
            first: self.second,
            second: self.first,
        }
    }
}

impl fmt::Display for IncPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// A permutation of the ground set, listed from bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearExtension {
    pub order: Vec<Element>,
}

impl LinearExtension {
    pub fn new(order: Vec<Element>) -> Self {
        LinearExtension { order }
    }

    /// `positions()[x]` is the rank of `x`. Panics if `order` is not a
    /// permutation of `0..order.len()`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.order.len()];
        for (i, &x) in self.order.iter().enumerate() {
            pos[x] = i;
        }
        pos
    }
}

/// Cyclic family of incomparable pairs with `x_i <= y_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingCycle {
    pub pairs: Vec<IncPair>,
}

impl AlternatingCycle {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_alternating(&self, poset: &Poset) -> bool {
        let n = self.pairs.len();
        n >= 2
            && self
                .pairs
                .iter()
                .all(|p| poset.incomparable(p.first, p.second))
            && (0..n).all(|i| poset.leq(self.pairs[i].first, self.pairs[(i + 1) % n].second))
    }

    /// `x_i <= y_j` holds exactly when `j = i + 1` cyclically.
    pub fn is_strict(&self, poset: &Poset) -> bool {
        let n = self.pairs.len();
        self.is_alternating(poset)
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    poset.leq(self.pairs[i].first, self.pairs[j].second) == (j == (i + 1) % n)
                })
            })
    }
}

impl fmt::Display for AlternatingCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, Element>,
    less: BitMatrix,
    covers: Vec<(Element, Element)>,
    upper_covers: Vec<Vec<Element>>,
    lower_covers: Vec<Vec<Element>>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.less == other.less
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds the poset generated by `covers`, given as `(lower, upper)` names.
    pub fn from_cover_relations<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
    ) -> Result<Poset, PosetError> {
        let names: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(name.clone()));
            }
        }
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| PosetError::UnknownElement(s.as_ref().to_string()))
        };
        let relation = covers
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, PosetError>>()?;
        Poset::from_relation(names, &relation)
    }

    /// Builds the transitive closure of `relation` (pairs `(lower, upper)` of
    /// indices into `names`).
    pub fn from_relation(
        names: Vec<String>,
        relation: &[(Element, Element)],
    ) -> Result<Poset, PosetError> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(name.clone()));
            }
        }
        let mut succ: Vec<Vec<Element>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in relation {
            if a >= n {
                return Err(PosetError::IndexOutOfRange(a));
            }
            if b >= n {
                return Err(PosetError::IndexOutOfRange(b));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        let mut queue: VecDeque<Element> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&v| indeg[v] > 0).unwrap();
            return Err(PosetError::Cycle(names[stuck].clone()));
        }
        let mut less = BitMatrix::new(n);
        for &v in topo.iter().rev() {
            for &w in &succ[v] {
                less.set(v, w);
                less.or_row_into(w, v);
            }
        }
        Ok(Poset::from_matrix(names, index, less))
    }

    fn from_matrix(names: Vec<String>, index: HashMap<String, Element>, less: BitMatrix) -> Poset {
        let n = names.len();
        let mut covers = Vec::new();
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        let mut through = BitMatrix::new(n);
        for x in 0..n {
            for z in less.row_ones(x) {
                through.or_row_from(x, &less, z);
            }
            for y in less.row_ones(x) {
                if !through.get(x, y) {
                    covers.push((x, y));
                }
            }
        }
        for &(x, y) in &covers {
            upper_covers[x].push(y);
            lower_covers[y].push(x);
        }
        Poset {
            names,
            index,
            less,
            covers,
            upper_covers,
            lower_covers,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Element) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<Element> {
        self.index.get(name).copied()
    }

    pub fn element(&self, name: &str) -> Result<Element, PosetError> {
        self.index_of(name)
            .ok_or_else(|| PosetError::UnknownElement(name.to_string()))
    }

    #[inline]
    pub fn less(&self, x: Element, y: Element) -> bool {
        self.less.get(x, y)
    }

    #[inline]
    pub fn leq(&self, x: Element, y: Element) -> bool {
        x == y || self.less.get(x, y)
    }

    pub fn comparable(&self, x: Element, y: Element) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn incomparable(&self, x: Element, y: Element) -> bool {
        !self.comparable(x, y)
    }

    /// Cover relations `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(Element, Element)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: Element) -> &[Element] {
        &self.upper_covers[x]
    }

    pub fn lower_covers(&self, x: Element) -> &[Element] {
        &self.lower_covers[x]
    }

    fn check(&self, x: Element) -> Result<(), PosetError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(PosetError::IndexOutOfRange(x))
        }
    }

    /// All `y >= x`, ascending.
    pub fn upset(&self, x: Element) -> Result<Vec<Element>, PosetError> {
        self.check(x)?;
        Ok((0..self.len()).filter(|&y| self.leq(x, y)).collect())
    }

    /// All `y <= x`, ascending.
    pub fn downset(&self, x: Element) -> Result<Vec<Element>, PosetError> {
        self.check(x)?;
        Ok((0..self.len()).filter(|&y| self.leq(y, x)).collect())
    }

    /// Covering chain from `x` up to `y`. Each step moves to the smallest upper
    /// cover that still lies below `y`.
    pub fn covering_chain(&self, x: Element, y: Element) -> Result<Vec<Element>, PosetError> {
        self.check(x)?;
        self.check(y)?;
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable(
                self.names[x].clone(),
                self.names[y].clone(),
            ));
        }
        let mut chain = vec![x];
        let mut cur = x;
        while cur != y {
            cur = *self.upper_covers[cur]
                .iter()
                .find(|&&c| self.leq(c, y))
                .expect("some upper cover lies below y");
            chain.push(cur);
        }
        Ok(chain)
    }

    /// `Inc(P)` in lexicographic order; symmetric by construction.
    pub fn incomparable_pairs(&self) -> Vec<IncPair> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.incomparable(x, y) {
                    out.push(IncPair::new(x, y));
                }
            }
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|x| (x + 1..self.len()).all(|y| self.comparable(x, y)))
    }

    pub fn dual(&self) -> Poset {
        Poset::from_matrix(
            self.names.clone(),
            self.index.clone(),
            self.less.transpose(),
        )
    }

    /// Subposet induced on `elements` (kept in the given order).
    pub fn induced(&self, elements: &[Element]) -> Poset {
        let names: Vec<String> = elements.iter().map(|&e| self.names[e].clone()).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut less = BitMatrix::new(elements.len());
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                if self.less(a, b) {
                    less.set(i, j);
                }
            }
        }
        Poset::from_matrix(names, index, less)
    }

    pub fn cover_graph(&self) -> Graph {
        let mut g = Graph::new(self.names.clone()).expect("poset names are distinct");
        for &(a, b) in &self.covers {
            g.add_edge(a, b).expect("cover endpoints are distinct");
        }
        g
    }

    pub(crate) fn strict_order_matrix(&self) -> BitMatrix {
        self.less.clone()
    }

    fn check_pairs(&self, pairs: &[IncPair]) -> Result<(), PosetError> {
        for p in pairs {
            self.check(p.first)?;
            self.check(p.second)?;
            if !self.incomparable(p.first, p.second) {
                return Err(PosetError::PairNotIncomparable(
                    self.names[p.first].clone(),
                    self.names[p.second].clone(),
                ));
            }
        }
        Ok(())
    }

    /// Cover arcs plus `y -> x` for each `(x, y)` in `pairs`.
    fn augmented_arcs(&self, pairs: &[IncPair]) -> Vec<Vec<Element>> {
        let mut arcs: Vec<Vec<Element>> = self.upper_covers.clone();
        for p in pairs {
            arcs[p.second].push(p.first);
        }
        arcs
    }

    /// Kahn's algorithm with a min-heap; `None` when the digraph has a cycle.
    fn canonical_topo(&self, arcs: &[Vec<Element>]) -> Option<Vec<Element>> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for out in arcs {
            for &w in out {
                indeg[w] += 1;
            }
        }
        let mut heap: BinaryHeap<Reverse<Element>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = heap.pop() {
            order.push(v);
            for &w in &arcs[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_reversible(&self, pairs: &[IncPair]) -> Result<bool, PosetError> {
        self.check_pairs(pairs)?;
        Ok(self.canonical_topo(&self.augmented_arcs(pairs)).is_some())
    }

    /// A strict alternating cycle made of pairs from `pairs`, or `None` when
    /// the set is reversible.
    pub fn find_strict_alternating_cycle(
        &self,
        pairs: &[IncPair],
    ) -> Result<Option<AlternatingCycle>, PosetError> {
        self.check_pairs(pairs)?;
        let arcs = self.augmented_arcs(pairs);
        if self.canonical_topo(&arcs).is_some() {
            return Ok(None);
        }
        let cycle = shortest_cycle(&arcs).expect("digraph is cyclic");
        let k = cycle.len();
        // Rotate so the walk starts with a reversed-pair arc.
        let start = (0..k)
            .find(|&i| self.incomparable(cycle[i], cycle[(i + 1) % k]))
            .expect("cover arcs alone are acyclic");
        let walk: Vec<Element> = (0..k).map(|i| cycle[(start + i) % k]).collect();
        let mut alt = Vec::new();
        for i in 0..k {
            let (a, b) = (walk[i], walk[(i + 1) % k]);
            if self.incomparable(a, b) {
                alt.push(IncPair::new(b, a));
            }
        }
        let mut cycle = AlternatingCycle { pairs: alt };
        debug_assert!(cycle.is_alternating(self));
        self.strictify(&mut cycle);
        Ok(Some(cycle))
    }

    /// Shortens an alternating cycle along chords `x_i <= y_j` until strict.
    fn strictify(&self, cycle: &mut AlternatingCycle) {
        'outer: loop {
            let n = cycle.pairs.len();
            for i in 0..n {
                for j in 0..n {
                    if j != (i + 1) % n && self.leq(cycle.pairs[i].first, cycle.pairs[j].second) {
                        let len = (i + n - j) % n + 1;
                        cycle.pairs = (0..len).map(|t| cycle.pairs[(j + t) % n]).collect();
                        continue 'outer;
                    }
                }
            }
            return;
        }
    }

    /// Canonical linear extension placing `y` below `x` for every `(x, y)`.
    pub fn linear_extension_reversing(
        &self,
        pairs: &[IncPair],
    ) -> Result<LinearExtension, PosetError> {
        self.check_pairs(pairs)?;
        match self.canonical_topo(&self.augmented_arcs(pairs)) {
            Some(order) => Ok(LinearExtension::new(order)),
            None => {
                let cycle = self
                    .find_strict_alternating_cycle(pairs)?
                    .expect("cyclic digraph yields a cycle");
                Err(PosetError::NotReversible(cycle))
            }
        }
    }

    pub fn is_linear_extension(&self, ext: &LinearExtension) -> bool {
        self.extension_problems(ext).is_empty()
    }

    fn extension_problems(&self, ext: &LinearExtension) -> Vec<String> {
        let n = self.len();
        if ext.order.len() != n {
            return vec![format!("has {} entries, expected {n}", ext.order.len())];
        }
        let mut seen = vec![false; n];
        for &x in &ext.order {
            if x >= n || seen[x] {
                return vec![format!("is not a permutation (entry {x})")];
            }
            seen[x] = true;
        }
        let pos = ext.positions();
        self.covers
            .iter()
            .filter(|&&(a, b)| pos[a] > pos[b])
            .map(|&(a, b)| format!("places {} above {}", self.names[a], self.names[b]))
            .collect()
    }

    /// Every reason `exts` fails to be a realizer; empty when it is one.
    pub fn realizer_problems(&self, exts: &[LinearExtension]) -> Vec<String> {
        let mut problems = Vec::new();
        if exts.is_empty() {
            problems.push("no linear extensions given".to_string());
            return problems;
        }
        for (i, ext) in exts.iter().enumerate() {
            for p in self.extension_problems(ext) {
                problems.push(format!("extension {i} {p}"));
            }
        }
        if !problems.is_empty() {
            return problems;
        }
        let positions: Vec<Vec<usize>> = exts.iter().map(LinearExtension::positions).collect();
        for pair in self.incomparable_pairs() {
            if !positions
                .iter()
                .any(|pos| pos[pair.second] < pos[pair.first])
            {
                problems.push(format!(
                    "no extension places {} below {}",
                    self.names[pair.second], self.names[pair.first]
                ));
            }
        }
        problems
    }

    pub fn verify_realizer(&self, exts: &[LinearExtension]) -> bool {
        self.realizer_problems(exts).is_empty()
    }
}

/// Shortest directed cycle (as a vertex list) by BFS from every vertex.
fn shortest_cycle(arcs: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = arcs.len();
    let mut best: Option<Vec<usize>> = None;
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut closing = None;
        'bfs: while let Some(v) = queue.pop_front() {
            if best.as_ref().is_some_and(|b| dist[v] + 1 >= b.len()) {
                break;
            }
            for &w in &arcs[v] {
                if w == s {
                    closing = Some(v);
                    break 'bfs;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if let Some(mut v) = closing {
            let mut cycle = vec![v];
            while v != s {
                v = parent[v];
                cycle.push(v);
            }
            cycle.reverse();
            best = Some(cycle);
        }
    }
    best
}
