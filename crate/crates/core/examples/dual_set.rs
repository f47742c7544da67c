//! Dual-set sparsification: weights on the right singular vectors that keep
//! the smallest eigenvalue away from zero while no weight grows too large.

use subsel::dualset::{dual_set_sparsify, dualset_select, lower_target, upper_target};
use subsel::linalg::thin_svd;
use subsel::randomized::random_matrix;

fn main() -> subsel::Result<()> {
    let x = random_matrix(3, 40, 11);
    let y = thin_svd(&x, 1e-10)?.y;
    for k in [6, 12, 24, 40] {
        let w = dual_set_sparsify(&y, k)?;
        println!(
            "k = {k:>2}: {:>2} nonzero weights, lambda_min {:.4} >= {:.4}, max weight {:.3} <= {:.3}",
            w.support.len(),
            w.lambda_min(&y),
            lower_target(3, k),
            w.max_weight(),
            upper_target(40, k)
        );
    }
    let r = dualset_select(&x, 12)?;
    println!(
        "\nselection with k = 12: ||X_S^+||_F^2 / ||X^+||_F^2 = {:.3} (guarantee {:.1})",
        r.fro_ratio(),
        r.bound_fro / r.fro_sq_full
    );
    Ok(())
}
