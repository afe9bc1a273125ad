//! Signature classification of incomparable pairs and the 12-extension
//! realizer built from it.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::decomp::{NodeId, STDecomposition};
use crate::graph::{GraphError, Vertex};
use crate::poset::{AlternatingCycle, Element, IncPair, LinearExtension, Poset};
use crate::sp::{augment_with_fresh_terminals, embed_into_sp, Embedding};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("cover graph has treewidth greater than 2")]
    NotTreewidth2,
    #[error("pair {0} is not incomparable")]
    NotIncomparable(IncPair),
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
    #[error("class {class} is not reversible: {cycle}")]
    ReversibilityViolation {
        class: PairClass,
        cycle: AlternatingCycle,
    },
}

impl From<GraphError> for RealizeError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::NotTreewidth2 => RealizeError::NotTreewidth2,
            other => RealizeError::MalformedInstance(other.to_string()),
        }
    }
}

/// Signature of an incomparable pair. Every component is 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairClass {
    Type1 { alpha: u8, beta: u8 },
    Type2 { alpha: u8, gamma: u8, delta: u8 },
}

impl PairClass {
    /// The 12 signatures, type 1 first.
    pub fn all() -> Vec<PairClass> {
        let mut out = Vec::with_capacity(12);
        for alpha in 1..=2 {
            for beta in 1..=2 {
                out.push(PairClass::Type1 { alpha, beta });
            }
        }
        for alpha in 1..=2 {
            for gamma in 1..=2 {
                for delta in 1..=2 {
                    out.push(PairClass::Type2 {
                        alpha,
                        gamma,
                        delta,
                    });
                }
            }
        }
        out
    }

    pub fn kind(&self) -> u8 {
        match self {
            PairClass::Type1 { .. } => 1,
            PairClass::Type2 { .. } => 2,
        }
    }

    pub fn alpha(&self) -> u8 {
        match *self {
            PairClass::Type1 { alpha, .. } | PairClass::Type2 { alpha, .. } => alpha,
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairClass::Type1 { alpha, beta } => write!(f, "1({alpha},{beta})"),
            PairClass::Type2 {
                alpha,
                gamma,
                delta,
            } => write!(f, "2({alpha},{gamma},{delta})"),
        }
    }
}

fn expect(
    out: &mut Vec<Violation>,
    check: &'static str,
    pair: IncPair,
    original: PairClass,
    got: Result<PairClass, RealizeError>,
    ok: &dyn Fn(PairClass) -> bool,
) {
    let detail = match got {
        Ok(k) if ok(k) => return,
        Ok(k) => format!("{original} became {k}"),
        Err(e) => format!("{original} could not be re-classified: {e}"),
    };
    out.push(Violation {
        check,
        pair: Some(pair),
        detail,
    });
}

fn flip(v: u8) -> u8 {
    3 - v
}

/// A poset together with the decomposition its pairs are classified on.
#[derive(Clone, Debug)]
pub struct ClassifiedInstance {
    pub poset: Poset,
    /// Host vertices `0..poset.len()` are the poset's elements.
    pub embedding: Embedding,
    pub decomposition: STDecomposition,
    /// Least node of each element.
    pub w: Vec<NodeId>,
    pub classification: BTreeMap<IncPair, PairClass>,
}

impl ClassifiedInstance {
    /// Cover graph, series-parallel embedding with fresh terminals, and the
    /// s-t tree-decomposition built from it.
    pub fn new(poset: &Poset) -> Result<ClassifiedInstance, RealizeError> {
        let embedding = augment_with_fresh_terminals(&embed_into_sp(&poset.cover_graph())?);
        let decomposition = STDecomposition::build(&embedding.sp)
            .map_err(|e| RealizeError::MalformedInstance(e.to_string()))?;
        ClassifiedInstance::with_decomposition(poset.clone(), embedding, decomposition)
    }

    /// Classifies every pair of `poset` against `decomposition`, which must
    /// cover the elements as host vertices `0..poset.len()`.
    pub fn with_decomposition(
        poset: Poset,
        embedding: Embedding,
        decomposition: STDecomposition,
    ) -> Result<ClassifiedInstance, RealizeError> {
        let w = least_nodes(&poset, &decomposition)?;
        let mut classification = BTreeMap::new();
        for p in poset.incomparable_pairs() {
            let class = classify_with(&poset, &decomposition, &w, p)?;
            classification.insert(p, class);
        }
        Ok(ClassifiedInstance {
            poset,
            embedding,
            decomposition,
            w,
            classification,
        })
    }
}

/// `w(x)` for every element, checking that `x` is the middle of its bag.
fn least_nodes(poset: &Poset, d: &STDecomposition) -> Result<Vec<NodeId>, RealizeError> {
    let n = poset.len();
    let mut best: Vec<Option<NodeId>> = vec![None; n];
    for u in 0..d.len() {
        for &x in d.bag(u).iter().filter(|&&x| x < n) {
            let better = best[x].is_none_or(|b| (d.depth(u), u) < (d.depth(b), b));
            if better {
                best[x] = Some(u);
            }
        }
    }
    best.into_iter()
        .enumerate()
        .map(|(x, u)| {
            let u = u.ok_or_else(|| {
                RealizeError::MalformedInstance(format!("element {x} is in no bag"))
            })?;
            if d.middle(u) != Some(x) {
                return Err(RealizeError::MalformedInstance(format!(
                    "element {x} is not the middle vertex of its least node {u}"
                )));
            }
            Ok(u)
        })
        .collect()
}

fn in_upset(poset: &Poset, x: Element, v: Vertex) -> bool {
    v < poset.len() && poset.leq(x, v)
}

fn in_downset(poset: &Poset, y: Element, v: Vertex) -> bool {
    v < poset.len() && poset.leq(v, y)
}

fn classify_with(
    poset: &Poset,
    d: &STDecomposition,
    w: &[NodeId],
    p: IncPair,
) -> Result<PairClass, RealizeError> {
    let (x, y) = (p.first, p.second);
    if x >= poset.len() || y >= poset.len() || !poset.incomparable(x, y) {
        return Err(RealizeError::NotIncomparable(p));
    }
    let (wx, wy) = (w[x], w[y]);
    if wx == wy {
        return Err(RealizeError::MalformedInstance(format!(
            "incomparable {x} and {y} share least node {wx}"
        )));
    }
    let alpha = if d.in_order_less(wx, wy) { 1 } else { 2 };
    let wxy = d.lca(wx, wy);
    let bag = d.bag(wxy);
    let ux = bag.iter().any(|&v| in_upset(poset, x, v));
    let dy = bag.iter().any(|&v| in_downset(poset, y, v));
    if !ux || !dy {
        let beta = if ux { 2 } else { 1 };
        return Ok(PairClass::Type1 { alpha, beta });
    }
    let gamma = if d
        .root_path(wxy)
        .into_iter()
        .any(|u| in_upset(poset, x, d.source(u)) && in_upset(poset, x, d.sink(u)))
    {
        2
    } else {
        1
    };
    let delta = if bag.len() == 3 {
        alpha
    } else {
        let (s, t) = (d.source(wxy), d.sink(wxy));
        if in_upset(poset, x, s) && in_downset(poset, y, t) {
            1
        } else if in_upset(poset, x, t) && in_downset(poset, y, s) {
            2
        } else {
            return Err(RealizeError::MalformedInstance(format!(
                "pair {p}: terminals of node {wxy} split neither way"
            )));
        }
    };
    Ok(PairClass::Type2 {
        alpha,
        gamma,
        delta,
    })
}

pub fn classify_pair(c: &ClassifiedInstance, p: IncPair) -> Result<PairClass, RealizeError> {
    classify_with(&c.poset, &c.decomposition, &c.w, p)
}

/// Pairs grouped by signature; each group is checked to be reversible.
pub fn partition_inc_pairs(
    c: &ClassifiedInstance,
) -> Result<BTreeMap<PairClass, Vec<IncPair>>, RealizeError> {
    let mut parts: BTreeMap<PairClass, Vec<IncPair>> = BTreeMap::new();
    for (&p, &class) in &c.classification {
        parts.entry(class).or_default().push(p);
    }
    for (&class, pairs) in &parts {
        let cycle = c
            .poset
            .find_strict_alternating_cycle(pairs)
            .map_err(|e| RealizeError::MalformedInstance(e.to_string()))?;
        if let Some(cycle) = cycle {
            return Err(RealizeError::ReversibilityViolation { class, cycle });
        }
    }
    Ok(parts)
}

/// Linear extensions labelled by the signature class they reverse. A poset
/// without incomparable pairs gets one unlabelled extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realizer {
    pub extensions: Vec<(Option<PairClass>, LinearExtension)>,
}

impl Realizer {
    pub fn len(&self) -> usize {
        self.extensions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extensions.is_empty()
    }

    pub fn linear_extensions(&self) -> Vec<LinearExtension> {
        self.extensions.iter().map(|(_, e)| e.clone()).collect()
    }

    pub fn verify(&self, poset: &Poset) -> bool {
        poset.verify_realizer(&self.linear_extensions())
    }
}

/// Realizer with one extension per nonempty signature class.
pub fn realize_tw2(poset: &Poset) -> Result<Realizer, RealizeError> {
    let c = ClassifiedInstance::new(poset)?;
    realize_instance(&c)
}

pub fn realize_instance(c: &ClassifiedInstance) -> Result<Realizer, RealizeError> {
    let parts = partition_inc_pairs(c)?;
    if parts.is_empty() {
        let ext = c
            .poset
            .linear_extension_reversing(&[])
            .expect("a poset has a linear extension");
        return Ok(Realizer {
            extensions: vec![(None, ext)],
        });
    }
    let extensions = parts
        .into_iter()
        .map(|(class, pairs)| {
            let ext = c
                .poset
                .linear_extension_reversing(&pairs)
                .map_err(|e| RealizeError::MalformedInstance(e.to_string()))?;
            Ok((Some(class), ext))
        })
        .collect::<Result<_, RealizeError>>()?;
    Ok(Realizer { extensions })
}

/// Pair count for each of the 12 signatures, zeros included.
pub fn signature_census(c: &ClassifiedInstance) -> BTreeMap<PairClass, usize> {
    let mut census: BTreeMap<PairClass, usize> =
        PairClass::all().into_iter().map(|k| (k, 0)).collect();
    for class in c.classification.values() {
        *census.get_mut(class).unwrap() += 1;
    }
    census
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: &'static str,
    pub pair: Option<IncPair>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pair {
            Some(p) => write!(f, "{} {p}: {}", self.check, self.detail),
            None => write!(f, "{}: {}", self.check, self.detail),
        }
    }
}

/// Re-classifies every pair under the dual poset, the reversed
/// decomposition, and the size-2 child swap, and reports each pair whose
/// signature does not transform as expected.
pub fn metamorphic_check(c: &ClassifiedInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    let d = &c.decomposition;
    let p = &c.poset;
    for (x, &u) in c.w.iter().enumerate() {
        if d.bag(u).len() != 3 || d.middle(u) != Some(x) {
            out.push(Violation {
                check: "least-node-middle",
                pair: None,
                detail: format!("element {x} is not the middle of node {u}"),
            });
        }
    }
    let dual = p.dual();
    let reversed = d.reverse();
    let swapped = d.swap_size2_children();
    for (&pair, &class) in &c.classification {
        let back = pair.reversed();
        let in_dual = classify_with(&dual, d, &c.w, back);
        let in_reversed = classify_with(p, &reversed, &c.w, pair);
        match class {
            PairClass::Type1 { alpha, beta } => {
                if beta == 2 {
                    expect(&mut out, "dual-flips-type1", pair, class, in_dual, &|k| {
                        k == PairClass::Type1 {
                            alpha: flip(alpha),
                            beta: 1,
                        }
                    });
                }
                expect(
                    &mut out,
                    "reverse-flips-type1-alpha",
                    pair,
                    class,
                    in_reversed,
                    &|k| {
                        k == PairClass::Type1 {
                            alpha: flip(alpha),
                            beta,
                        }
                    },
                );
            }
            PairClass::Type2 {
                alpha,
                gamma,
                delta,
            } => {
                expect(
                    &mut out,
                    "dual-flips-type2",
                    pair,
                    class,
                    in_dual,
                    &|k| match k {
                        PairClass::Type2 {
                            alpha: a,
                            gamma: g,
                            delta: dl,
                        } => a == flip(alpha) && dl == flip(delta) && (gamma == 1 || g == 1),
                        _ => false,
                    },
                );
                expect(
                    &mut out,
                    "reverse-flips-type2-alpha-delta",
                    pair,
                    class,
                    in_reversed,
                    &|k| {
                        k == PairClass::Type2 {
                            alpha: flip(alpha),
                            gamma,
                            delta: flip(delta),
                        }
                    },
                );
                if alpha == 2 && delta == 1 {
                    let in_swapped = classify_with(p, &swapped, &c.w, pair);
                    expect(
                        &mut out,
                        "swap-fixes-type2-alpha",
                        pair,
                        class,
                        in_swapped,
                        &|k| {
                            k == PairClass::Type2 {
                                alpha: 1,
                                gamma,
                                delta,
                            }
                        },
                    );
                }
            }
        }
        if let Some(&other) = c.classification.get(&back) {
            if other.alpha() != flip(class.alpha()) {
                out.push(Violation {
                    check: "alpha-antisymmetric",
                    pair: Some(pair),
                    detail: format!("{class} against reverse pair {other}"),
                });
            }
        }
        let path = d.root_path(d.lca(c.w[pair.first], c.w[pair.second]));
        let up = path
            .iter()
            .any(|&u| in_upset(p, pair.first, d.source(u)) && in_upset(p, pair.first, d.sink(u)));
        let down = path.iter().any(|&u| {
            in_downset(p, pair.second, d.source(u)) && in_downset(p, pair.second, d.sink(u))
        });
        if up && down {
            out.push(Violation {
                check: "no-split-terminal-pair",
                pair: Some(pair),
                detail: "ancestors with terminals in both U(x) and D(y)".into(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn antichain2() -> Poset {
        Poset::from_cover_relations::<&str>(&["x", "y"], &[]).unwrap()
    }

    #[test]
    fn twelve_distinct_classes() {
        let all = PairClass::all();
        assert_eq!(all.len(), 12);
        let set: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(set.len(), 12);
    }

    #[test]
    fn antichain_alpha_is_antisymmetric() {
        let c = ClassifiedInstance::new(&antichain2()).unwrap();
        let a = c.classification[&IncPair::new(0, 1)];
        let b = c.classification[&IncPair::new(1, 0)];
        assert_eq!(a.alpha(), 3 - b.alpha());
        assert!(metamorphic_check(&c).is_empty());
    }

    #[test]
    fn chain_has_single_extension() {
        let p = Poset::from_cover_relations(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let r = realize_tw2(&p).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r.verify(&p));
        let c = ClassifiedInstance::new(&p).unwrap();
        assert!(signature_census(&c).values().all(|&n| n == 0));
        assert!(partition_inc_pairs(&c).unwrap().is_empty());
    }

    #[test]
    fn standard_example_two() {
        let p =
            Poset::from_cover_relations(&["a1", "a2", "b1", "b2"], &[("a1", "b2"), ("a2", "b1")])
                .unwrap();
        let r = realize_tw2(&p).unwrap();
        assert!(r.len() >= 2 && r.len() <= 12);
        assert!(r.verify(&p));
        let c = ClassifiedInstance::new(&p).unwrap();
        assert_eq!(signature_census(&c).values().sum::<usize>(), 8);
        assert!(metamorphic_check(&c).is_empty());
    }

    #[test]
    fn comparable_pair_is_rejected() {
        let p = Poset::from_cover_relations(&["a", "b"], &[("a", "b")]).unwrap();
        let c = ClassifiedInstance::new(&p).unwrap();
        assert_eq!(
            classify_pair(&c, IncPair::new(0, 1)),
            Err(RealizeError::NotIncomparable(IncPair::new(0, 1)))
        );
    }
}
