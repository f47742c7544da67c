//! Least squares restricted to k columns chosen from the top right singular
//! vectors, against the truncated-SVD solution that uses every column.

use subsel::applications::sparse_ls;
use subsel::randomized::random_matrix;

fn main() -> subsel::Result<()> {
    let a = random_matrix(40, 15, 7);
    let b: Vec<f64> = random_matrix(40, 1, 8).data().to_vec();
    for k in [4, 6, 10, 15] {
        let r = sparse_ls(&a, &b, 4, k)?;
        let nnz = r.xk.iter().filter(|v| **v != 0.0).count();
        println!(
            "k = {k:>2}: residual {:.4} with {nnz} nonzeros; rank-4 SVD residual {:.4}, additive bound {:.4}",
            r.residual, r.svd_residual, r.additive_bound
        );
    }
    Ok(())
}
