//! Dense linear-algebra substrate.
//!
//! Matrices are stored row-major in 64-bit floats. Column indices are 0-based
//! everywhere; a subset `{0, 2}` refers to the first and third columns.
//!
//! The SVD and symmetric eigensolvers are delegated to `nalgebra`. Determinants
//! go through a local Cholesky factorization so that the determinant route of
//! [`pinv_fro_sq_via_det`] stays independent of the SVD route of
//! [`pinv_fro_sq`].

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Singular values at or below `DEFAULT_RANK_TOL * sigma_max` are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Dense row-major matrix with finite entries and at least one row and column.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::BadShape {
                rows,
                cols,
                reason: "rows and cols must be positive".into(),
            });
        }
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                reason: format!("expected {} entries, got {}", rows * cols, data.len()),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::BadShape {
                    rows: nrows,
                    cols: ncols,
                    reason: format!("row {i} has {} entries", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(nrows, ncols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Panics on a non-finite value; the finite-entry invariant is never relaxed.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(v.is_finite(), "non-finite entry");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `X X^T`.
    pub fn gram(&self) -> Matrix {
        let n = self.rows;
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                g.data[i * n + j] = v;
                g.data[j * n + i] = v;
            }
        }
        g
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    /// Removes row `i`.
    pub fn without_row(&self, i: usize) -> Option<Matrix> {
        if self.rows <= 1 {
            return None;
        }
        let data = (0..self.rows)
            .filter(|&r| r != i)
            .flat_map(|r| self.row(r).iter().copied())
            .collect();
        Some(Matrix {
            rows: self.rows - 1,
            cols: self.cols,
            data,
        })
    }

    /// The first `r` rows.
    pub fn top_rows(&self, r: usize) -> Matrix {
        assert!(r >= 1 && r <= self.rows);
        Matrix {
            rows: r,
            cols: self.cols,
            data: self.data[..r * self.cols].to_vec(),
        }
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Matrix {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                data.push(m[(i, j)]);
            }
        }
        Matrix {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

/// Strictly increasing list of 0-based column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub(crate) Vec<usize>);

impl Subset {
    /// Validates ordering and range against a host with `cols` columns.
    pub fn new(indices: Vec<usize>, cols: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSubset);
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= cols) {
            return Err(Error::IndexOutOfRange { index: bad, cols });
        }
        Ok(Self(indices))
    }

    /// Sorts and deduplicates arbitrary indices.
    pub fn from_unsorted(mut indices: Vec<usize>, cols: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(indices, cols)
    }

    pub fn all(m: usize) -> Self {
        Self((0..m).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Copy without index `i`; no-op if absent.
    pub fn without(&self, i: usize) -> Subset {
        Subset(self.0.iter().copied().filter(|&j| j != i).collect())
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

/// Thin SVD `x = u * diag(sigma) * y` truncated to the numerical rank.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    /// n x rho, orthonormal columns.
    pub u: Matrix,
    /// Positive, non-increasing.
    pub sigma: Vec<f64>,
    /// rho x m, orthonormal rows (the transposed right factor).
    pub y: Matrix,
}

impl ThinSvd {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Squared norm of column `j` of `y` (the leverage score).
    pub fn leverage(&self, j: usize) -> f64 {
        (0..self.y.rows()).map(|l| self.y.get(l, j).powi(2)).sum()
    }

    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (l, s) in self.sigma.iter().enumerate() {
                let v = us.get(i, l) * s;
                us.set(i, l, v);
            }
        }
        us.matmul(&self.y)
    }
}

/// nalgebra's `svd()` with its default tolerance can return factors that do
/// not reconstruct the input (seen on weighted incidence matrices); an
/// explicit convergence tolerance avoids that.
fn to_faer(x: &Matrix) -> faer::Mat<f64> {
    faer::Mat::from_fn(x.rows(), x.cols(), |i, j| x.get(i, j))
}

/// Thin SVD with singular values non-increasing; `vt` is `V^T`.
fn sorted_svd(x: &Matrix) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let svd = to_faer(x).thin_svd().expect("SVD converges");
    let (u, v) = (svd.U(), svd.V());
    let s: Vec<f64> = svd.S().column_vector().iter().copied().collect();
    let u = DMatrix::from_fn(u.nrows(), s.len(), |i, j| u[(i, j)]);
    let vt = DMatrix::from_fn(s.len(), v.nrows(), |i, j| v[(j, i)]);
    (u, s, vt)
}

/// All `min(rows, cols)` singular values, non-increasing.
pub fn singular_values(x: &Matrix) -> Vec<f64> {
    let mut s = to_faer(x).singular_values().expect("SVD converges");
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank relative to the largest singular value.
pub fn rank(x: &Matrix, rank_tol: f64) -> usize {
    let s = singular_values(x);
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&v| v > rank_tol * smax && v > 0.0).count()
}

pub fn thin_svd(x: &Matrix, rank_tol: f64) -> Result<ThinSvd> {
    let (u, s, vt) = sorted_svd(x);
    let smax = s.first().copied().unwrap_or(0.0);
    let rho = s.iter().filter(|&&v| v > rank_tol * smax && v > 0.0).count();
    if rho == 0 {
        return Err(Error::AllZeroMatrix);
    }
    let u = DMatrix::from_fn(u.nrows(), rho, |i, j| u[(i, j)]);
    let vt = DMatrix::from_fn(rho, vt.ncols(), |i, j| vt[(i, j)]);
    Ok(ThinSvd {
        u: Matrix::from_nalgebra(&u),
        sigma: s[..rho].to_vec(),
        y: Matrix::from_nalgebra(&vt),
    })
}

fn full_row_rank_sigma(x: &Matrix) -> Result<Vec<f64>> {
    let s = singular_values(x);
    let smax = s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&v| v > DEFAULT_RANK_TOL * smax && v > 0.0).count();
    if rank < x.rows() {
        return Err(Error::RankDeficient {
            rank,
            rows: x.rows(),
        });
    }
    Ok(s)
}

/// `||X^+||_F^2 = sum_i sigma_i^{-2}` for full-row-rank `x`.
pub fn pinv_fro_sq(x: &Matrix) -> Result<f64> {
    Ok(full_row_rank_sigma(x)?.iter().map(|s| s.powi(-2)).sum())
}

/// `||X^+||_2^2 = sigma_min^{-2}` for full-row-rank `x`.
pub fn pinv_spec_sq(x: &Matrix) -> Result<f64> {
    let s = full_row_rank_sigma(x)?;
    Ok(s[x.rows() - 1].powi(-2))
}

/// `X_S`, columns kept in ascending original order.
pub fn columns(x: &Matrix, s: &Subset) -> Result<Matrix> {
    if let Some(&bad) = s.indices().iter().find(|&&j| j >= x.cols()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            cols: x.cols(),
        });
    }
    if s.is_empty() {
        return Err(Error::BadShape {
            rows: x.rows(),
            cols: 0,
            reason: "empty column subset".into(),
        });
    }
    let k = s.len();
    let mut data = Vec::with_capacity(x.rows() * k);
    for i in 0..x.rows() {
        let row = x.row(i);
        data.extend(s.indices().iter().map(|&j| row[j]));
    }
    Ok(Matrix {
        rows: x.rows(),
        cols: k,
        data,
    })
}

/// Lower Cholesky factor of a symmetric positive definite matrix, `None` when a
/// pivot is not strictly positive.
pub fn cholesky(a: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a.get(j, j);
        for p in 0..j {
            d -= l[j * n + p] * l[j * n + p];
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in j + 1..n {
            let mut v = a.get(i, j);
            for p in 0..j {
                v -= l[i * n + p] * l[j * n + p];
            }
            l[i * n + j] = v / djj;
        }
    }
    Some(Matrix {
        rows: n,
        cols: n,
        data: l,
    })
}

/// Determinant of an SPD matrix via Cholesky; 0 when the factorization breaks down.
pub fn spd_det(a: &Matrix) -> f64 {
    match cholesky(a) {
        Some(l) => (0..a.rows()).map(|i| l.get(i, i).powi(2)).product(),
        None => 0.0,
    }
}

/// `det(X_S X_S^T)`, the squared volume spanned by the selected columns.
pub fn gram_det(x: &Matrix, s: &Subset) -> Result<f64> {
    if s.len() < x.rows() {
        return Err(Error::SubsetTooSmall {
            size: s.len(),
            rows: x.rows(),
        });
    }
    Ok(spd_det(&columns(x, s)?.gram()))
}

/// k-th elementary symmetric polynomial of `values`; `e_0 = 1`.
pub fn elem_sym(values: &[f64], k: usize) -> Result<f64> {
    if k > values.len() {
        return Err(Error::KOutOfRange {
            k,
            len: values.len(),
        });
    }
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &v in values {
        for j in (1..=k).rev() {
            e[j] += v * e[j - 1];
        }
    }
    Ok(e[k])
}

/// All elementary symmetric polynomials `e_0..=e_len` of `values`.
pub fn elem_sym_all(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (c, &v) in values.iter().enumerate() {
        for j in (1..=c + 1).rev() {
            e[j] += v * e[j - 1];
        }
    }
    e
}

/// `||X_S^+||_F^2` through determinants: the trace of the adjugate of
/// `X_S X_S^T` over its determinant. The i-th diagonal adjugate entry is the
/// Gram determinant of `X_S` with row `i` deleted.
pub fn pinv_fro_sq_via_det(x: &Matrix, s: &Subset) -> Result<f64> {
    let xs = columns(x, s)?;
    let g = xs.gram();
    let n = g.rows();
    let det = spd_det(&g);
    let hadamard: f64 = (0..n).map(|i| g.get(i, i)).product();
    if !(det > 1e-12 * hadamard) {
        return Err(Error::SingularGram);
    }
    let minors: f64 = if n == 1 {
        1.0
    } else {
        (0..n)
            .map(|i| {
                let yi = xs.without_row(i).expect("n > 1");
                spd_det(&yi.gram())
            })
            .sum()
    };
    Ok(minors / det)
}

/// Eigenvalues of a symmetric matrix in non-increasing order.
pub fn sym_eigenvalues(a: &Matrix) -> Vec<f64> {
    let mut ev: Vec<f64> = a
        .to_nalgebra()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Orthonormal basis of the column space, one basis vector per column.
pub fn orthonormal_basis(x: &Matrix, rank_tol: f64) -> Result<Matrix> {
    Ok(thin_svd(x, rank_tol)?.u)
}

/// Minimum-norm least-squares solution `x^+ b`.
pub fn pinv_solve(x: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    assert_eq!(x.rows(), b.len());
    if b.iter().all(|&v| v == 0.0) {
        return Ok(vec![0.0; x.cols()]);
    }
    let svd = thin_svd(x, DEFAULT_RANK_TOL)?;
    let utb = svd.u.transpose().mat_vec(b);
    let scaled: Vec<f64> = utb.iter().zip(&svd.sigma).map(|(c, s)| c / s).collect();
    Ok(svd.y.transpose().mat_vec(&scaled))
}

/// Best rank-`r` approximation via SVD truncation. Ties in singular values
/// follow the solver's order.
pub fn truncate_rank(x: &Matrix, r: usize) -> Matrix {
    let (u, s, vt) = sorted_svd(x);
    let r = r.min(s.len());
    let mut out = DMatrix::<f64>::zeros(x.rows(), x.cols());
    for l in 0..r {
        out += s[l] * u.column(l) * vt.row(l);
    }
    Matrix::from_nalgebra(&out)
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Calls `f` on each k-subset of `0..m` in lexicographic order.
pub fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
