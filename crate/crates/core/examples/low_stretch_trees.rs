//! Spanning trees of complete graphs by greedy edge removal, compared with
//! the maximum-weight tree and random trees drawn with probability
//! proportional to their weight product.
//!
//! Run with `cargo run --release --example low_stretch_trees`.

use subsel::lowstretch::{
    greedy_tree, max_weight_tree, stretch_bound, stretch_direct, TreeSampler, WeightedGraph,
};
use subsel::randomized::rng_from_seed;

fn main() -> subsel::Result<()> {
    println!("{:>4} {:>6} {:>12} {:>12} {:>10} {:>10}", "n", "m", "greedy", "maxweight", "m ln^2 n", "bound");
    for n in [10, 15, 20, 25, 30] {
        let g = WeightedGraph::complete(n);
        let greedy = stretch_direct(&g, &greedy_tree(&g)?)?;
        let mw = stretch_direct(&g, &max_weight_tree(&g)?)?;
        let m = g.m() as f64;
        let ln2 = (n as f64).ln().powi(2);
        println!(
            "{n:>4} {:>6} {greedy:>12.1} {mw:>12.1} {:>10.1} {:>10.0}",
            g.m(),
            m * ln2,
            stretch_bound(n, g.m())
        );
    }

    // a weighted triangle: trees appear in proportion to their weight products
    let tri = WeightedGraph::new(3, &[(0, 1, 2.0), (1, 2, 1.0), (0, 2, 1.0)])?;
    let sampler = TreeSampler::new(&tri)?;
    let mut rng = rng_from_seed(1);
    let mut counts = std::collections::BTreeMap::new();
    let draws = 10_000;
    for _ in 0..draws {
        *counts.entry(sampler.sample(&mut rng).edge_ids.into_vec()).or_insert(0usize) += 1;
    }
    println!("\nweighted triangle (2, 1, 1), {draws} random trees:");
    for (edges, c) in counts {
        println!("  edges {edges:?}: {:.3}", c as f64 / draws as f64);
    }
    Ok(())
}
