//! Feature selection for clustering: pick k of the columns of a data matrix
//! whose rows fall in r groups, then cluster on those features only.

use subsel::applications::kmeans_features;
use subsel::randomized::random_matrix;
use subsel::Matrix;

fn main() -> subsel::Result<()> {
    // 3 groups separated along features 0, 1 and 2; features 3..12 are noise
    let noise = random_matrix(30, 12, 4);
    let rows: Vec<Vec<f64>> = (0..30)
        .map(|i| {
            (0..12)
                .map(|d| if d == i % 3 { 6.0 } else { 0.0 } + 0.5 * noise.get(i, d))
                .collect()
        })
        .collect();
    let a = Matrix::from_rows(&rows)?;
    for k in [3, 4, 6] {
        println!("k = {k}: features {:?}", kmeans_features(&a, 3, k)?.indices());
    }
    Ok(())
}
