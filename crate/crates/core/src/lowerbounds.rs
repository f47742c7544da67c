//! Hard instances on which every column subset is provably bad, plus an
//! exhaustive verifier.
//!
//! Both families start from `A = [e_1 + alpha e_2, e_1 + alpha e_3, ...]`, an
//! `(m+1) x m` matrix with `A^T A = J + alpha^2 I`. The spectral family takes
//! `X` as the top `n` right singular rows of `A`; the Frobenius family repeats
//! an `(m/n + 1) x (m/n)` copy of `A` `n` times on the block diagonal first.
//! Either way `X` has orthonormal rows, so `||X^+||_2^2 = 1` and
//! `||X^+||_F^2 = n`. The right singular vectors are only determined up to
//! rotation inside degenerate singular spaces; the bounds hold for any choice.

use crate::error::{Error, Result};
use crate::linalg::{self, columns, for_each_subset, Matrix, Subset, DEFAULT_RANK_TOL};
use crate::volume::check_enumerable;

/// Small `alpha` used to approach the `alpha -> 0` limits.
pub const DEFAULT_ALPHA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Spectral,
    Frobenius,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Spectral => "spectral",
            Family::Frobenius => "frobenius",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "spectral" => Ok(Family::Spectral),
            "frobenius" => Ok(Family::Frobenius),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HardInstance {
    pub x: Matrix,
    pub family: Family,
    pub alpha: f64,
    pub n: usize,
    pub m: usize,
}

impl HardInstance {
    /// Closed-form lower-bound factor for subsets of size `k`.
    pub fn gamma(&self, k: usize) -> f64 {
        let (m, n, k, a2) = (self.m as f64, self.n as f64, k as f64, self.alpha * self.alpha);
        match self.family {
            Family::Spectral => (m + a2) / (k + a2) - 1.0,
            Family::Frobenius => (m - k) / (k + a2) + 1.0 - k / n,
        }
    }

    /// `||X^+||^2` in the norm the family targets.
    pub fn full_norm(&self) -> f64 {
        match self.family {
            Family::Spectral => 1.0,
            Family::Frobenius => self.n as f64,
        }
    }
}

fn shape_error(n: usize, m: usize, reason: &str) -> Error {
    Error::BadShape {
        rows: n,
        cols: m,
        reason: reason.into(),
    }
}

/// `(m+1) x m` matrix with columns `e_0 + alpha e_{j+1}`.
fn base_matrix(m: usize, alpha: f64) -> Matrix {
    let mut a = Matrix::zeros(m + 1, m);
    for j in 0..m {
        a.set(0, j, 1.0);
        a.set(j + 1, j, alpha);
    }
    a
}

fn top_right_rows(a: &Matrix, n: usize) -> Result<Matrix> {
    Ok(linalg::thin_svd(a, DEFAULT_RANK_TOL)?.y.top_rows(n))
}

fn check_alpha(n: usize, m: usize, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(shape_error(n, m, "alpha must be positive and finite"));
    }
    Ok(())
}

pub fn build_spectral_hard(n: usize, m: usize, alpha: f64) -> Result<HardInstance> {
    if n == 0 || m <= 2 || m <= n {
        return Err(shape_error(n, m, "need n >= 1, m > 2 and m > n"));
    }
    check_alpha(n, m, alpha)?;
    let x = top_right_rows(&base_matrix(m, alpha), n)?;
    Ok(HardInstance {
        x,
        family: Family::Spectral,
        alpha,
        n,
        m,
    })
}

pub fn build_frobenius_hard(n: usize, m: usize, alpha: f64) -> Result<HardInstance> {
    if n == 0 || m % n != 0 || m / n <= 2 {
        return Err(shape_error(n, m, "need n | m and m/n > 2"));
    }
    check_alpha(n, m, alpha)?;
    let block = base_matrix(m / n, alpha);
    let (br, bc) = (block.rows(), block.cols());
    let mut b = Matrix::zeros(n * br, m);
    for t in 0..n {
        for i in 0..br {
            for j in 0..bc {
                b.set(t * br + i, t * bc + j, block.get(i, j));
            }
        }
    }
    let x = top_right_rows(&b, n)?;
    Ok(HardInstance {
        x,
        family: Family::Frobenius,
        alpha,
        n,
        m,
    })
}

#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    pub family: Family,
    pub k: usize,
    pub gamma: f64,
    /// `gamma * ||X^+||^2`.
    pub bound: f64,
    pub full_norm: f64,
    /// Smallest `||X_S^+||^2` over full-rank subsets.
    pub min_value: f64,
    pub argmin: Option<Subset>,
    pub slack: f64,
    /// True when `gamma <= 0`, so the inequality holds trivially.
    pub vacuous: bool,
    pub violations: usize,
    pub full_rank_subsets: usize,
}

impl LowerBoundReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// `min_value / ||X^+||^2`.
    pub fn min_ratio(&self) -> f64 {
        self.min_value / self.full_norm
    }
}

/// Checks the family's inequality on every full-rank `k`-subset.
pub fn verify_lower_bound(inst: &HardInstance, k: usize) -> Result<LowerBoundReport> {
    if k < inst.n || k > inst.m {
        return Err(Error::BadK {
            k,
            reason: format!("need {} <= k <= {}", inst.n, inst.m),
        });
    }
    check_enumerable(inst.m, k)?;
    let gamma = inst.gamma(k);
    let bound = gamma * inst.full_norm();
    let tol = 1e-9 * bound.abs().max(1.0);
    let mut min_value = f64::INFINITY;
    let mut argmin = None;
    let mut violations = 0;
    let mut full_rank_subsets = 0;
    let mut err = None;
    for_each_subset(inst.m, k, |idx| {
        if err.is_some() {
            return;
        }
        let s = Subset(idx.to_vec());
        let xs = match columns(&inst.x, &s) {
            Ok(xs) => xs,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        let value = match inst.family {
            Family::Spectral => linalg::pinv_spec_sq(&xs),
            Family::Frobenius => linalg::pinv_fro_sq(&xs),
        };
        let Ok(value) = value else { return };
        full_rank_subsets += 1;
        if value < bound - tol {
            violations += 1;
        }
        if value < min_value {
            min_value = value;
            argmin = Some(s);
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(LowerBoundReport {
        family: inst.family,
        k,
        gamma,
        bound,
        full_norm: inst.full_norm(),
        min_value,
        argmin,
        slack: min_value - bound,
        vacuous: gamma <= 0.0,
        violations,
        full_rank_subsets,
    })
}
