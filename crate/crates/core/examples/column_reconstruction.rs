//! Rank-r approximation of a matrix from k of its own columns, compared
//! with the best rank-r error sigma_{r+1}.
//!
//! Run with `cargo run --release --example column_reconstruction`.

use subsel::applications::column_lowrank;
use subsel::linalg::singular_values;
use subsel::randomized::random_matrix;
use subsel::Matrix;

fn main() -> subsel::Result<()> {
    // a rank-3 signal plus small noise
    let signal = random_matrix(30, 3, 1).matmul(&random_matrix(3, 25, 2));
    let a = signal.sub(&random_matrix(30, 25, 3).scale(0.05));
    println!("leading singular values: {:?}", &singular_values(&a)[..5]);
    for k in [3, 5, 10] {
        let r = column_lowrank(&a, 3, k)?;
        println!(
            "k = {k:>2}: columns {:?}\n        error {:.4}, sigma_4 {:.4}, bound {:.4}",
            r.s.indices(),
            r.achieved_spec_error,
            r.sigma_r_plus_1,
            r.bound()
        );
    }

    let d = Matrix::from_rows(&[[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]])?;
    let r = column_lowrank(&d, 1, 1)?;
    println!("\ndiag(3, 2, 1), r = k = 1: column {:?}, error {}", r.s.indices(), r.achieved_spec_error);
    Ok(())
}
