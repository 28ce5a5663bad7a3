use std::collections::BTreeSet;

use misbench_core::graph::{
    parse_graph, serialize_graph, validate_graph, Graph, GraphFormat, Vertex,
};
use misbench_core::rrg::{enumerate_regular, sample_rrg, RrgParams, SamplerMethod};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
            .flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v)))
            .collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let edges: Vec<_> = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&e, _)| e)
                .collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn round_trip_both_formats(g in arb_graph(25)) {
        for format in [GraphFormat::EdgeList, GraphFormat::Dimacs] {
            let text = serialize_graph(&g, format);
            let back = parse_graph(text.as_bytes(), format).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(serialize_graph(&back, format), text);
        }
    }

    #[test]
    fn adjacency_is_symmetric_and_handshake_holds(g in arb_graph(30)) {
        let mut total = 0;
        for u in g.vertices() {
            total += g.degree(u);
            for &v in g.neighbors(u) {
                prop_assert!(g.neighbors(v).contains(&u));
                prop_assert!(v != u);
            }
            prop_assert!(g.neighbors(u).windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert_eq!(total, 2 * g.num_edges());
        prop_assert!(validate_graph(&g, None).is_simple);
    }

    #[test]
    fn rrg_is_simple_and_regular(n in 2usize..150, d in 1usize..9, seed in any::<u64>(), pairing in any::<bool>()) {
        prop_assume!(d < n && (n * d) % 2 == 0);
        let method = if pairing { SamplerMethod::Pairing } else { SamplerMethod::Auto };
        let g = sample_rrg(&RrgParams::new(n, d, seed).with_method(method)).unwrap();
        let report = validate_graph(&g, Some(d));
        prop_assert!(report.is_simple);
        prop_assert_eq!(report.is_regular, Some(d));
        prop_assert!(report.deviating.is_empty());
        prop_assert_eq!(g.num_edges(), n * d / 2);
    }
}

#[test]
fn rrg_is_reproducible_and_round_trips() {
    let p = RrgParams::new(100, 3, 7);
    let g = sample_rrg(&p).unwrap();
    assert_eq!(g, sample_rrg(&p).unwrap());
    assert_ne!(g, sample_rrg(&RrgParams::new(100, 3, 8)).unwrap());
    let text = serialize_graph(&g, GraphFormat::EdgeList);
    assert!(text.starts_with("100 150\n"));
    assert_eq!(
        parse_graph(text.as_bytes(), GraphFormat::EdgeList).unwrap(),
        g
    );
}

#[test]
fn large_degree_sampling() {
    let g = sample_rrg(&RrgParams::new(2000, 20, 1)).unwrap();
    assert_eq!(validate_graph(&g, Some(20)).is_regular, Some(20));
    // Dense side goes through the complement.
    let g = sample_rrg(&RrgParams::new(30, 26, 1).with_method(SamplerMethod::Exact)).unwrap();
    assert_eq!(validate_graph(&g, Some(26)).is_regular, Some(26));
}

/// Brute force over every edge subset of K_n.
fn brute_force_regular(n: usize, d: usize) -> BTreeSet<Vec<(Vertex, Vertex)>> {
    let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
        .flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v)))
        .collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        if mask.count_ones() as usize != n * d / 2 {
            continue;
        }
        let mut deg = vec![0; n];
        let mut edges = Vec::new();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                deg[u as usize] += 1;
                deg[v as usize] += 1;
                edges.push((u, v));
            }
        }
        if deg.iter().all(|&x| x == d) {
            out.insert(edges);
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for (n, d) in [(4, 2), (5, 2), (6, 2), (6, 3), (5, 4), (6, 4)] {
        let listed: Vec<Vec<(Vertex, Vertex)>> = enumerate_regular(n, d)
            .unwrap()
            .iter()
            .map(|g| g.edges().to_vec())
            .collect();
        let expected = brute_force_regular(n, d);
        let as_set: BTreeSet<_> = listed.iter().cloned().collect();
        assert_eq!(as_set.len(), listed.len(), "duplicates for ({n},{d})");
        assert_eq!(as_set, expected, "({n},{d})");
    }
    assert_eq!(enumerate_regular(6, 3).unwrap().len(), 70);
}

#[test]
fn enumeration_count_for_cubic_on_eight() {
    assert_eq!(enumerate_regular(8, 3).unwrap().len(), 19355);
}
