//! Oracles shared by the integration tests. They go through nalgebra's
//! Cholesky and symmetric eigensolver on `X_S X_S^T` directly, never through
//! the library's SVD-based norms.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use subsel::{Matrix, Subset};

pub fn rng(seed: u64) -> ChaCha8Rng {
    subsel::randomized::rng_from_seed(seed)
}

pub fn uniform_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
    Matrix::new(rows, cols, data).unwrap()
}

fn gram_of(x: &Matrix, idx: &[usize]) -> DMatrix<f64> {
    let n = x.rows();
    DMatrix::from_fn(n, n, |i, j| idx.iter().map(|&c| x.get(i, c) * x.get(j, c)).sum())
}

/// `(||X_S^+||_F^2, ||X_S^+||_2^2)` from the inverse Gram matrix, or `None`
/// when `X_S X_S^T` is numerically singular.
pub fn pinv_norms(x: &Matrix, idx: &[usize]) -> Option<(f64, f64)> {
    let g = gram_of(x, idx);
    let eig = g.clone().symmetric_eigen();
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    if !(lmin > 1e-12 * lmax) {
        return None;
    }
    let inv = g.cholesky()?.inverse();
    Some((inv.trace(), 1.0 / lmin))
}

pub fn full_norms(x: &Matrix) -> (f64, f64) {
    let all: Vec<usize> = (0..x.cols()).collect();
    pinv_norms(x, &all).expect("full-rank input")
}

/// Eigenvalues of `X_S X_S^T`, i.e. squared singular values, descending.
pub fn sq_singular_values(x: &Matrix, idx: &[usize]) -> Vec<f64> {
    let mut ev: Vec<f64> = gram_of(x, idx).symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// `det(X_S X_S^T)` by LU.
pub fn gram_det(x: &Matrix, idx: &[usize]) -> f64 {
    gram_of(x, idx).determinant()
}

/// All k-subsets of `0..m`, lexicographic.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Orthonormal-row `n x m` matrix from the QR factor of a random `m x n`.
pub fn orthonormal_rows(n: usize, m: usize, rng: &mut impl Rng) -> Matrix {
    let a = uniform_matrix(m, n, rng).to_nalgebra();
    let q = a.qr().q();
    Matrix::from_nalgebra(&q.transpose())
}

/// Union-find spanning-tree test on an edge list.
pub fn is_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            a = p[a];
        }
        a
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Random connected graph: a random spanning path plus each remaining pair
/// with probability `density`; weights uniform in `[0.5, 3)`.
pub fn random_connected_graph(
    n: usize,
    density: f64,
    rng: &mut impl Rng,
) -> Vec<(usize, usize, f64)> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut edges = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for w in order.windows(2) {
        edges.push((w[0], w[1], rng.random_range(0.5..3.0)));
        present[w[0]][w[1]] = true;
        present[w[1]][w[0]] = true;
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.random_bool(density) {
                edges.push((u, v, rng.random_range(0.5..3.0)));
            }
        }
    }
    edges
}

/// A uniformly random edge order fed to Kruskal: some spanning tree.
pub fn random_kruskal_tree(g: &subsel::lowstretch::WeightedGraph, rng: &mut impl Rng) -> Subset {
    let m = g.m();
    let mut order: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let n = g.n_vertices();
    let mut picked = Vec::new();
    let mut pairs = Vec::new();
    for i in order {
        let e = g.edges()[i];
        pairs.push((e.u, e.v));
        if is_forest(n, &pairs) {
            picked.push(i);
        } else {
            pairs.pop();
        }
    }
    Subset::from_unsorted(picked, m).unwrap()
}

fn is_forest(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &[usize], mut a: usize) -> usize {
        while p[a] != a {
            a = p[a];
        }
        a
    }
    for &(u, v) in edges {
        let (a, b) = (find(&parent, u), find(&parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Pearson chi-square statistic of `counts` against probabilities `p`.
pub fn chi_square(counts: &[usize], p: &[f64]) -> f64 {
    let total: usize = counts.iter().sum();
    counts
        .iter()
        .zip(p)
        .map(|(&c, &pi)| {
            let e = pi * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum()
}

/// Upper `1 - alpha` quantile of the chi-square distribution.
pub fn chi_square_critical(df: usize, confidence: f64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    ChiSquared::new(df as f64).unwrap().inverse_cdf(confidence)
}
