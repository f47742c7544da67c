//! Randomized selection by leverage-score sampling. Below the sampling
//! threshold the result carries no guarantee and may even lose rank.
//!
//! Run with `cargo run --release --example leverage_sampling`.

use subsel::randomized::{leverage_plan, leverage_select, random_matrix, sample_threshold, DEFAULT_DELTA};
use subsel::Error;

fn main() -> subsel::Result<()> {
    let x = random_matrix(2, 300, 5);
    let plan = leverage_plan(&x)?;
    let top = plan.leverage.iter().copied().fold(0.0, f64::max);
    println!("largest leverage score {top:.4}, uniform share {:.4}", 2.0 / 300.0);
    let threshold = sample_threshold(2, 300, DEFAULT_DELTA);
    println!("sampling threshold for delta = {DEFAULT_DELTA}: {threshold}");

    for k in [4, 20, threshold] {
        let mut ratios = Vec::new();
        let mut lost = 0;
        for seed in 0..50 {
            match leverage_select(&x, k, seed) {
                Ok(r) => ratios.push(r.fro_ratio()),
                Err(Error::SampleRankDeficient { .. }) => lost += 1,
                Err(e) => return Err(e),
            }
        }
        ratios.sort_by(f64::total_cmp);
        let median = ratios.get(ratios.len() / 2).copied().unwrap_or(f64::NAN);
        println!("k = {k:>3}: median Frobenius ratio {median:.3}, rank lost in {lost} of 50 draws");
    }
    Ok(())
}
