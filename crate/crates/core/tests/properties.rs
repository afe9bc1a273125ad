mod common;

use proptest::prelude::*;

use common::all_extensions;
use tw2dim::dimension::critical_pairs;
use tw2dim::io::{
    read_decomposition, read_graph, read_poset, read_realizer, write_decomposition, write_graph,
    write_poset, write_realizer,
};
use tw2dim::{
    augment_with_fresh_terminals, contains_standard_example, dimension_exact, embed_into_sp,
    has_treewidth_at_most_2, metamorphic_check, realize_tw2, ClassifiedInstance, DimensionOptions,
    Graph, IncPair, Poset, STDecomposition,
};

/// Random poset on at most `max` elements: each pair `i < j` is related
/// `i < j` with the given bit.
fn small_poset(max: usize) -> impl Strategy<Value = Poset> {
    (0..=max).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.3), n * n.saturating_sub(1) / 2)
            .prop_map(move |bits| {
                let mut rel = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if bits[k] {
                            rel.push((i, j));
                        }
                        k += 1;
                    }
                }
                let names = (0..n).map(|i| format!("v{i}")).collect();
                Poset::from_relation(names, &rel).unwrap()
            })
    })
}

fn tw2_poset() -> impl Strategy<Value = Poset> {
    (1usize..40, any::<u64>())
        .prop_map(|(n, seed)| tw2dim::generators::random_tw2_poset(n, seed).unwrap())
}

/// Subset of the incomparable pairs selected by `mask`.
fn pick_pairs(p: &Poset, mask: u64) -> Vec<IncPair> {
    p.incomparable_pairs()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
        .map(|(_, q)| q)
        .collect()
}

fn reversible_by_brute_force(p: &Poset, pairs: &[IncPair]) -> bool {
    all_extensions(p).iter().any(|e| {
        let pos = e.positions();
        pairs.iter().all(|q| pos[q.second] < pos[q.first])
    })
}

fn dim(p: &Poset) -> usize {
    dimension_exact(
        p,
        &DimensionOptions {
            max_d: 12,
            cap: 200,
        },
    )
    .unwrap()
    .dimension
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn order_is_transitive_and_irreflexive(p in small_poset(8)) {
        let n = p.len();
        for x in 0..n {
            prop_assert!(!p.less(x, x));
            for y in 0..n {
                for z in 0..n {
                    if p.less(x, y) && p.less(y, z) {
                        prop_assert!(p.less(x, z));
                    }
                }
            }
        }
    }

    #[test]
    fn covers_are_the_transitive_reduction(p in small_poset(8)) {
        let n = p.len();
        let mut expected = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if p.less(x, y) && !(0..n).any(|z| p.less(x, z) && p.less(z, y)) {
                    expected.push((x, y));
                }
            }
        }
        let mut got = p.covers().to_vec();
        got.sort_unstable();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn dual_is_an_involution(p in small_poset(8)) {
        let d = p.dual();
        prop_assert_eq!(d.dual(), p.clone());
        for x in 0..p.len() {
            for y in 0..p.len() {
                prop_assert_eq!(p.less(x, y), d.less(y, x));
            }
        }
    }

    #[test]
    fn upsets_and_downsets_are_connected_in_the_cover_graph(p in small_poset(8)) {
        let g = p.cover_graph();
        for x in 0..p.len() {
            let up = p.upset(x).unwrap();
            let down = p.downset(x).unwrap();
            prop_assert!(up.contains(&x) && down.contains(&x));
            prop_assert!(g.induces_connected(&up));
            prop_assert!(g.induces_connected(&down));
            prop_assert!(up.iter().all(|&y| p.leq(x, y)));
            prop_assert!(down.iter().all(|&y| p.leq(y, x)));
        }
    }

    #[test]
    fn covering_chains_climb_by_covers(p in small_poset(8)) {
        for x in 0..p.len() {
            for y in 0..p.len() {
                if p.leq(x, y) {
                    let c = p.covering_chain(x, y).unwrap();
                    prop_assert_eq!(c.first(), Some(&x));
                    prop_assert_eq!(c.last(), Some(&y));
                    for w in c.windows(2) {
                        prop_assert!(p.upper_covers(w[0]).contains(&w[1]));
                    }
                } else {
                    prop_assert!(p.covering_chain(x, y).is_err());
                }
            }
        }
    }

    #[test]
    fn reversibility_matches_brute_force(p in small_poset(7), mask in any::<u64>()) {
        let pairs = pick_pairs(&p, mask);
        let fast = p.is_reversible(&pairs).unwrap();
        prop_assert_eq!(fast, reversible_by_brute_force(&p, &pairs));
        let cycle = p.find_strict_alternating_cycle(&pairs).unwrap();
        match p.linear_extension_reversing(&pairs) {
            Ok(ext) => {
                prop_assert!(fast && cycle.is_none());
                prop_assert!(p.is_linear_extension(&ext));
                let pos = ext.positions();
                prop_assert!(pairs.iter().all(|q| pos[q.second] < pos[q.first]));
            }
            Err(_) => {
                prop_assert!(!fast);
                let cycle = cycle.unwrap();
                prop_assert!(cycle.is_strict(&p));
                prop_assert!(cycle.pairs.iter().all(|q| pairs.contains(q)));
            }
        }
    }

    #[test]
    fn reversibility_is_preserved_by_duality(p in small_poset(8), mask in any::<u64>()) {
        let pairs = pick_pairs(&p, mask);
        let flipped: Vec<IncPair> = pairs.iter().map(|q| q.reversed()).collect();
        prop_assert_eq!(
            p.is_reversible(&pairs).unwrap(),
            p.dual().is_reversible(&flipped).unwrap()
        );
    }

    #[test]
    fn critical_pairs_are_incomparable_pairs(p in small_poset(8)) {
        let inc = p.incomparable_pairs();
        for q in critical_pairs(&p) {
            prop_assert!(inc.contains(&q));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dimension_witness_is_a_realizer_partitioning_inc(p in small_poset(7)) {
        let r = dimension_exact(&p, &DimensionOptions::default()).unwrap();
        prop_assert_eq!(r.witness.len(), r.dimension);
        prop_assert!(p.verify_realizer(&r.witness));
        let mut all: Vec<IncPair> = r.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        let mut inc = p.incomparable_pairs();
        inc.sort_unstable();
        prop_assert_eq!(all, inc);
        for (part, ext) in r.parts.iter().zip(&r.witness) {
            let pos = ext.positions();
            prop_assert!(part.iter().all(|q| pos[q.second] < pos[q.first]));
        }
    }

    #[test]
    fn dimension_is_minimal_by_brute_force(p in small_poset(6)) {
        let d = dim(&p);
        let exts = all_extensions(&p);
        let inc = p.incomparable_pairs();
        // No family of d - 1 extensions reverses every incomparable pair.
        if d > 1 {
            let k = d - 1;
            let mut idx: Vec<usize> = (0..k).collect();
            let mut found = false;
            if exts.len() >= k {
                loop {
                    let reversed = |q: &IncPair| idx.iter().any(|&i| {
                        let pos = exts[i].positions();
                        pos[q.second] < pos[q.first]
                    });
                    if inc.iter().all(reversed) {
                        found = true;
                        break;
                    }
                    let Some(j) = (0..k).rev().find(|&j| idx[j] < exts.len() - k + j) else { break };
                    idx[j] += 1;
                    for l in j + 1..k {
                        idx[l] = idx[l - 1] + 1;
                    }
                }
            }
            prop_assert!(!found);
        }
    }

    #[test]
    fn dimension_is_monotone_and_dual_invariant(p in small_poset(7), mask in any::<u8>()) {
        let d = dim(&p);
        prop_assert_eq!(d, dim(&p.dual()));
        let keep: Vec<usize> = (0..p.len()).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assert!(dim(&p.induced(&keep)) <= d);
    }

    #[test]
    fn containing_a_standard_example_bounds_dimension(p in small_poset(8)) {
        let d = dim(&p);
        for n in 2..=4 {
            if contains_standard_example(&p, n) {
                prop_assert!(d >= n);
            }
        }
    }
}

fn random_graph() -> impl Strategy<Value = Graph> {
    (0usize..9).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.35), n * n.saturating_sub(1) / 2)
            .prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, &edges).unwrap()
            })
    })
}

fn check_decomposition(
    d: &STDecomposition,
    g: &Graph,
    s: usize,
    t: usize,
) -> Result<(), TestCaseError> {
    prop_assert!(d.validate(g, s, t).is_empty(), "{:?}", d.validate(g, s, t));
    let order = d.in_order();
    prop_assert_eq!(order.len(), d.len());
    for (i, &u) in order.iter().enumerate() {
        for &v in &order[i + 1..] {
            prop_assert!(d.in_order_less(u, v) && !d.in_order_less(v, u));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn embedding_contains_the_graph(g in random_graph()) {
        match embed_into_sp(&g) {
            Ok(e) => {
                prop_assert!(has_treewidth_at_most_2(&g));
                prop_assert!(g.is_subgraph_of(&e.host));
                prop_assert!(has_treewidth_at_most_2(&e.host));
                prop_assert!(e.sp.validate().is_empty());
                prop_assert_eq!(e.sp.edge_set().len(), e.host.edge_count());
                prop_assert_eq!(e.original_vertex_count, g.vertex_count());
                let a = augment_with_fresh_terminals(&e);
                prop_assert!(e.host.is_subgraph_of(&a.host));
                prop_assert!(a.source() >= g.vertex_count() && a.sink() >= g.vertex_count());
                prop_assert!(a.sp.validate().is_empty());
                let d = STDecomposition::build(&a.sp).unwrap();
                check_decomposition(&d, &a.host, a.source(), a.sink())?;
                check_decomposition(&d.reverse(), &a.host, a.sink(), a.source())?;
                check_decomposition(&d.swap_size2_children(), &a.host, a.source(), a.sink())?;
            }
            Err(_) => prop_assert!(!has_treewidth_at_most_2(&g)),
        }
    }

    #[test]
    fn graph_text_round_trips(g in random_graph()) {
        let back = read_graph(&write_graph(&g)).unwrap();
        prop_assert_eq!(back.names(), g.names());
        prop_assert_eq!(back.edges(), g.edges());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn realizers_are_small_and_verify(p in tw2_poset()) {
        let r = realize_tw2(&p).unwrap();
        prop_assert!(!r.is_empty() && r.len() <= 12);
        prop_assert!(r.verify(&p));
        let c = ClassifiedInstance::new(&p).unwrap();
        prop_assert!(metamorphic_check(&c).is_empty());
        prop_assert_eq!(c.classification.len(), p.incomparable_pairs().len());
    }

    #[test]
    fn io_round_trips(p in tw2_poset()) {
        let back = read_poset(&write_poset(&p)).unwrap();
        prop_assert_eq!(&back, &p);
        let r = realize_tw2(&p).unwrap();
        let r2 = read_realizer(&write_realizer(&r, &p), &p).unwrap();
        prop_assert_eq!(r2.extensions, r.extensions);
        let c = ClassifiedInstance::new(&p).unwrap();
        let json = write_decomposition(&c.decomposition, &c.embedding.host);
        let d = read_decomposition(&json, &c.embedding.host).unwrap();
        prop_assert_eq!(d.nodes(), c.decomposition.nodes());
        prop_assert_eq!(d.root(), c.decomposition.root());
    }
}
