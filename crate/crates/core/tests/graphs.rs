//! Spanning-tree code against a path-walking stretch oracle, the weighted
//! matrix-tree theorem and union-find.
mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use subsel::lowstretch::{
    all_spanning_trees, greedy_tree, max_weight_tree, random_tree, stretch_bound, stretch_direct,
    stretch_subset, stretch_trace, tree_from_subset, SpanningTree, TreeSampler, WeightedGraph,
};
use subsel::{Error, Subset};

/// Sum over all edges of `w_e` times the resistance of the tree path between
/// its endpoints, found by depth-first search.
fn oracle_stretch(n: usize, edges: &[(usize, usize, f64)], tree: &[usize]) -> f64 {
    let mut adj = vec![Vec::new(); n];
    for &i in tree {
        let (u, v, w) = edges[i];
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let resistance = |from: usize, to: usize| {
        let mut stack = vec![(from, usize::MAX, 0.0)];
        while let Some((x, parent, r)) = stack.pop() {
            if x == to {
                return r;
            }
            for &(y, w) in &adj[x] {
                if y != parent {
                    stack.push((y, x, r + 1.0 / w));
                }
            }
        }
        unreachable!("tree spans the graph")
    };
    edges.iter().map(|&(u, v, w)| w * resistance(u, v)).sum()
}

/// Weighted matrix-tree theorem: any cofactor of the Laplacian.
fn kirchhoff(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    let mut l = DMatrix::<f64>::zeros(n, n);
    for &(u, v, w) in edges {
        l[(u, u)] += w;
        l[(v, v)] += w;
        l[(u, v)] -= w;
        l[(v, u)] -= w;
    }
    l.view((1, 1), (n - 1, n - 1)).into_owned().determinant()
}

fn graph(n: usize, density: f64, seed: u64) -> (WeightedGraph, Vec<(usize, usize, f64)>) {
    let edges = random_connected_graph(n, density, &mut rng(seed));
    let g = WeightedGraph::new(n, &edges).unwrap();
    // the library normalizes endpoints, keep the oracle's list aligned
    let normalized = g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
    (g, normalized)
}

#[test]
fn complete_graph_k3_has_stretch_four() {
    let g = WeightedGraph::complete(3);
    for t in all_spanning_trees(&g).unwrap() {
        assert!((stretch_direct(&g, &t).unwrap() - 4.0).abs() < 1e-12);
    }
}

#[test]
fn stretch_matches_the_path_oracle() {
    for seed in 0..30 {
        let (g, edges) = graph(3 + (seed as usize % 8), 0.4, seed);
        for t in [greedy_tree(&g).unwrap(), max_weight_tree(&g).unwrap(), random_tree(&g, seed).unwrap()] {
            let want = oracle_stretch(g.n_vertices(), &edges, t.edge_ids.indices());
            let got = stretch_direct(&g, &t).unwrap();
            assert!((got - want).abs() <= 1e-10 * want, "seed {seed}: {got} vs {want}");
        }
    }
}

#[test]
fn tree_count_and_weight_sum_follow_kirchhoff() {
    for seed in 0..15 {
        let (g, edges) = graph(3 + (seed as usize % 4), 0.6, 500 + seed);
        let trees = all_spanning_trees(&g).unwrap();
        let sum: f64 = trees.iter().map(|t| t.weight_product(&g)).sum();
        let want = kirchhoff(g.n_vertices(), &edges);
        assert!((sum - want).abs() <= 1e-9 * want, "seed {seed}");
        let unit: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v, 1.0)).collect();
        assert_eq!(trees.len() as f64, kirchhoff(g.n_vertices(), &unit).round());
    }
}

#[test]
fn cayley_counts() {
    for (n, count) in [(3, 3), (4, 16), (5, 125)] {
        assert_eq!(all_spanning_trees(&WeightedGraph::complete(n)).unwrap().len(), count);
    }
}

#[test]
fn max_weight_tree_is_the_heaviest() {
    for seed in 0..15 {
        let (g, _) = graph(4 + (seed as usize % 3), 0.5, 900 + seed);
        let best = all_spanning_trees(&g)
            .unwrap()
            .iter()
            .map(|t| t.weight_product(&g))
            .fold(0.0, f64::max);
        let mw = max_weight_tree(&g).unwrap().weight_product(&g);
        assert!((mw - best).abs() <= 1e-12 * best);
    }
}

#[test]
fn random_tree_frequencies_follow_weight_products() {
    let (g, _) = graph(4, 0.7, 42);
    let trees = all_spanning_trees(&g).unwrap();
    let w: Vec<f64> = trees.iter().map(|t| t.weight_product(&g)).collect();
    let total: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / total).collect();
    let sampler = TreeSampler::new(&g).unwrap();
    let mut counts = vec![0usize; trees.len()];
    let mut r = rng(4242);
    for _ in 0..20_000 {
        let t = sampler.sample(&mut r);
        counts[trees.iter().position(|x| x.edge_ids == t.edge_ids).unwrap()] += 1;
    }
    let stat = chi_square(&counts, &p);
    assert!(stat <= chi_square_critical(trees.len() - 1, 0.999), "chi2 {stat}");
}

/// Calibration of the goodness-of-fit test itself: over many seeds the
/// fraction of runs above the 0.99 quantile stays near one percent.
#[test]
fn weighted_triangle_chi_square_is_calibrated() {
    let g = WeightedGraph::new(3, &[(0, 1, 2.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
    let trees = all_spanning_trees(&g).unwrap();
    let p: Vec<f64> = trees.iter().map(|t| t.weight_product(&g) / 5.0).collect();
    let sampler = TreeSampler::new(&g).unwrap();
    let crit = chi_square_critical(2, 0.99);
    let runs = 400;
    let mut above = 0;
    for seed in 0..runs {
        let mut r = rng(seed);
        let mut counts = vec![0usize; 3];
        for _ in 0..2_000 {
            let t = sampler.sample(&mut r);
            counts[trees.iter().position(|x| x.edge_ids == t.edge_ids).unwrap()] += 1;
        }
        above += usize::from(chi_square(&counts, &p) > crit);
    }
    // Binomial(400, 0.01) exceeds 12 with probability below 1e-3
    assert!(above <= 12, "{above} of {runs} runs above the 0.99 quantile");
}

#[test]
fn bad_graphs_are_rejected() {
    assert!(matches!(WeightedGraph::new(2, &[(0, 0, 1.0)]), Err(Error::SelfLoop { .. })));
    assert!(matches!(
        WeightedGraph::new(2, &[(0, 1, -1.0)]),
        Err(Error::NonPositiveWeight { .. })
    ));
    let split = WeightedGraph::new(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
    assert!(!split.is_connected());
    assert!(matches!(greedy_tree(&split), Err(Error::Disconnected)));
}

#[test]
fn non_tree_subsets_are_rejected() {
    let g = WeightedGraph::complete(4);
    // edges (0,1), (0,2), (1,2) close a cycle
    let cycle = Subset::from_unsorted(vec![0, 1, 3], g.m()).unwrap();
    assert!(!g.is_spanning_tree(&cycle));
    assert!(matches!(SpanningTree::new(&g, cycle.clone()), Err(Error::NotASpanningTree(_))));
    assert!(matches!(tree_from_subset(&g, &cycle), Err(Error::NotATree)));
}

#[test]
fn stretch_bound_formula() {
    assert_eq!(stretch_bound(3, 3), 4.0);
    assert_eq!(stretch_bound(4, 6), 12.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn three_stretch_routes_agree(n in 3usize..9, density in 0.1f64..0.9, seed in any::<u64>()) {
        let (g, _) = graph(n, density, seed);
        let t = random_kruskal_tree(&g, &mut rng(seed ^ 0x5eed));
        let t = SpanningTree::new(&g, t).unwrap();
        let d = stretch_direct(&g, &t).unwrap();
        let tr = stretch_trace(&g, &t).unwrap();
        let s = stretch_subset(&g, &t).unwrap();
        prop_assert!((d - tr).abs() <= 1e-8 * d);
        prop_assert!((d - s).abs() <= 1e-8 * d);
        // each tree edge contributes exactly one
        prop_assert!(d >= (n - 1) as f64 * (1.0 - 1e-12));
    }

    #[test]
    fn subset_rank_test_agrees_with_union_find(
        n in 3usize..7,
        seed in any::<u64>(),
        pick in proptest::collection::vec(any::<prop::sample::Index>(), 6),
    ) {
        let (g, edges) = graph(n, 0.6, seed);
        let mut ids: Vec<usize> = pick.iter().map(|i| i.index(g.m())).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.truncate(n - 1);
        prop_assume!(ids.len() == n - 1);
        let pairs: Vec<(usize, usize)> = ids.iter().map(|&i| (edges[i].0, edges[i].1)).collect();
        let s = Subset::from_unsorted(ids, g.m()).unwrap();
        prop_assert_eq!(tree_from_subset(&g, &s).is_ok(), is_tree(n, &pairs));
        prop_assert_eq!(g.is_spanning_tree(&s), is_tree(n, &pairs));
    }

    #[test]
    fn greedy_tree_meets_the_stretch_bound(n in 3usize..9, density in 0.1f64..0.9, seed in any::<u64>()) {
        let (g, _) = graph(n, density, seed);
        let t = greedy_tree(&g).unwrap();
        prop_assert!(stretch_direct(&g, &t).unwrap() <= stretch_bound(n, g.m()) * (1.0 + 1e-9));
    }
}
