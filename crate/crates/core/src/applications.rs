//! Downstream uses of spectral greedy selection on the top-`r` right singular
//! rows of a data matrix `A`: column-based rank-`r` reconstruction, sparse
//! least squares, and unsupervised feature selection for k-means.

use crate::error::{Error, Result};
use crate::greedy::greedy_remove_spectral;
use crate::linalg::{self, columns, norm2, Matrix, Subset, DEFAULT_RANK_TOL};

#[derive(Debug, Clone)]
pub struct LowRankResult {
    pub s: Subset,
    /// Best rank-`r` approximation of `A` inside the span of `A_S`.
    pub approx: Matrix,
    pub achieved_spec_error: f64,
    pub sigma_r_plus_1: f64,
    /// `sqrt(2 + r(m-k)/(k-r+1))`.
    pub bound_factor: f64,
}

impl LowRankResult {
    pub fn bound(&self) -> f64 {
        self.bound_factor * self.sigma_r_plus_1
    }
}

#[derive(Debug, Clone)]
pub struct SparseLSResult {
    pub s: Subset,
    /// Length `m`, zero outside `s`.
    pub xk: Vec<f64>,
    pub residual: f64,
    /// `||A x_r - b||` for the rank-`r` truncated SVD solution `x_r`.
    pub svd_residual: f64,
    /// `(1 + sqrt(r(m-k)/(k-r+1))) ||b|| sigma_{r+1} / sigma_r`.
    pub additive_bound: f64,
}

/// Checks `1 <= r < rank(a)` and `r <= k <= m`; returns the singular values.
fn check_rank(a: &Matrix, r: usize, k: usize) -> Result<Vec<f64>> {
    let rank = linalg::rank(a, DEFAULT_RANK_TOL);
    if r == 0 || r >= rank {
        return Err(Error::BadRank {
            r,
            reason: format!("need 1 <= r < rank(A) = {rank}"),
        });
    }
    if k < r || k > a.cols() {
        return Err(Error::BadK {
            k,
            reason: format!("need {r} <= k <= {}", a.cols()),
        });
    }
    Ok(linalg::singular_values(a))
}

fn select(a: &Matrix, r: usize, k: usize) -> Result<Subset> {
    let y = linalg::thin_svd(a, DEFAULT_RANK_TOL)?.y.top_rows(r);
    Ok(greedy_remove_spectral(&y, k)?.indices)
}

fn residual(a: &Matrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mat_vec(x);
    norm2(&ax.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>())
}

pub fn column_lowrank(a: &Matrix, r: usize, k: usize) -> Result<LowRankResult> {
    let sigma = check_rank(a, r, k)?;
    let s = select(a, r, k)?;
    let q = linalg::orthonormal_basis(&columns(a, &s)?, DEFAULT_RANK_TOL)?;
    let approx = q.matmul(&linalg::truncate_rank(&q.transpose().matmul(a), r));
    let (m, rf, kf) = (a.cols() as f64, r as f64, k as f64);
    Ok(LowRankResult {
        s,
        achieved_spec_error: a.sub(&approx).spectral_norm(),
        approx,
        sigma_r_plus_1: sigma[r],
        bound_factor: (2.0 + rf * (m - kf) / (kf - rf + 1.0)).sqrt(),
    })
}

pub fn sparse_ls(a: &Matrix, b: &[f64], r: usize, k: usize) -> Result<SparseLSResult> {
    if b.len() != a.rows() {
        return Err(Error::BadShape {
            rows: a.rows(),
            cols: b.len(),
            reason: "right-hand side length differs from row count".into(),
        });
    }
    let sigma = check_rank(a, r, k)?;
    let s = select(a, r, k)?;
    let xs = linalg::pinv_solve(&columns(a, &s)?, b)?;
    let mut xk = vec![0.0; a.cols()];
    for (&i, v) in s.indices().iter().zip(xs) {
        xk[i] = v;
    }

    let svd = linalg::thin_svd(a, DEFAULT_RANK_TOL)?;
    let utb = svd.u.transpose().mat_vec(b);
    let coef: Vec<f64> = (0..svd.rank())
        .map(|l| if l < r { utb[l] / svd.sigma[l] } else { 0.0 })
        .collect();
    let x_svd = svd.y.transpose().mat_vec(&coef);

    let (m, rf, kf) = (a.cols() as f64, r as f64, k as f64);
    let factor = 1.0 + (rf * (m - kf) / (kf - rf + 1.0)).sqrt();
    Ok(SparseLSResult {
        residual: residual(a, &xk, b),
        svd_residual: residual(a, &x_svd, b),
        additive_bound: factor * norm2(b) * sigma[r] / sigma[r - 1],
        s,
        xk,
    })
}

/// `k` of the columns (features) of `a` for clustering its rows into `r`
/// groups. The selected features are used as-is, without rescaling.
pub fn kmeans_features(a: &Matrix, r: usize, k: usize) -> Result<Subset> {
    check_rank(a, r, k)?;
    select(a, r, k)
}
