//! Deterministic greedy column removal on a random 4 x 20 matrix, showing
//! how the achieved ratio tracks the guarantee as `k` shrinks.
//!
//! Run with `cargo run --release --example greedy_removal`.

use subsel::greedy::{greedy_remove_frobenius, greedy_remove_spectral};
use subsel::randomized::random_matrix;

fn main() -> subsel::Result<()> {
    let x = random_matrix(4, 20, 3);
    println!("{:>3} {:>12} {:>12} {:>12} {:>12}", "k", "F ratio", "F bound", "2 ratio", "2 bound");
    for k in (4..=20).rev().step_by(2) {
        let f = greedy_remove_frobenius(&x, k)?;
        let s = greedy_remove_spectral(&x, k)?;
        println!(
            "{k:>3} {:>12.3} {:>12.3} {:>12.3} {:>12.3}",
            f.fro_ratio(),
            f.bound_fro / f.fro_sq_full,
            s.spec_ratio(),
            s.bound_spec / s.spec_sq_full
        );
    }
    let pick = greedy_remove_frobenius(&x, 6)?;
    println!("\nk = 6 keeps columns {:?}", pick.indices.indices());
    Ok(())
}
