//! Deterministic dual-set spectral sparsification and the column selection
//! built on it.
//!
//! Given vectors `v_1..v_m` in `R^n` with `sum v_i v_i^T = I_n`, the standard
//! basis `e_1..e_m` of `R^m` as the second set, and `n < k <= m`, we pick at
//! most `k` weights so that
//!
//! ```text
//! lambda_min(sum s_i v_i v_i^T) >= (1 - sqrt(n/k))^2
//! max_i s_i                     <= (1 + sqrt(m/k))^2
//! ```
//!
//! using a lower barrier on the `v` side and an upper barrier on the `e` side.
//! Each of the `k` steps shifts the lower barrier by 1 and the upper one by
//! `(1 + sqrt(m/k)) / (1 - sqrt(n/k))`.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Subset, DEFAULT_RANK_TOL};
use crate::selection::{check_short_fat, full_norms, subset_norms, SelectionResult, Timer};

/// Tolerance on `sum v_i v_i^T = I_n`.
pub const IDENTITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct DualSetWeights {
    pub s: Vec<f64>,
    pub support: Subset,
}

impl DualSetWeights {
    /// `lambda_min(sum s_i v_i v_i^T)` for the columns of `v`.
    pub fn lambda_min(&self, v: &Matrix) -> f64 {
        let n = v.rows();
        let mut a = Matrix::zeros(n, n);
        for &i in self.support.indices() {
            let col = v.col(i);
            for r in 0..n {
                for c in 0..n {
                    let val = a.get(r, c) + self.s[i] * col[r] * col[c];
                    a.set(r, c, val);
                }
            }
        }
        *linalg::sym_eigenvalues(&a).last().expect("n >= 1")
    }

    /// Largest weight, i.e. `lambda_max(sum s_i e_i e_i^T)`.
    pub fn max_weight(&self) -> f64 {
        self.s.iter().copied().fold(0.0, f64::max)
    }
}

pub fn lower_target(n: usize, k: usize) -> f64 {
    (1.0 - (n as f64 / k as f64).sqrt()).powi(2)
}

pub fn upper_target(m: usize, k: usize) -> f64 {
    (1.0 + (m as f64 / k as f64).sqrt()).powi(2)
}

/// Approximation factor `(1 + sqrt(m/k))^2 / (1 - sqrt(n/k))^2`.
pub fn dualset_factor(n: usize, m: usize, k: usize) -> f64 {
    upper_target(m, k) / lower_target(n, k)
}

/// Weights for the columns of `v` (n x m) against the standard basis of `R^m`.
pub fn dual_set_sparsify(v: &Matrix, k: usize) -> Result<DualSetWeights> {
    let (n, m) = (v.rows(), v.cols());
    if !(n < k && k <= m) {
        return Err(Error::BadK {
            k,
            reason: format!("need {n} < k <= {m}"),
        });
    }
    let g = v.gram();
    let mut deviation: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c { 1.0 } else { 0.0 };
            deviation = deviation.max((g.get(r, c) - target).abs());
        }
    }
    if deviation > IDENTITY_TOL {
        return Err(Error::DecompositionNotIdentity { deviation });
    }

    let (nf, mf, kf) = (n as f64, m as f64, k as f64);
    let delta_l = 1.0;
    let delta_u = (1.0 + (mf / kf).sqrt()) / (1.0 - (nf / kf).sqrt());
    let cols: Vec<Vec<f64>> = (0..m).map(|i| v.col(i)).collect();
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
    let mut b = vec![0.0; m];
    let mut s = vec![0.0; m];

    for step in 0..k {
        let tau = step as f64;
        let lower = tau - (kf * nf).sqrt();
        let upper = delta_u * (tau + (mf * kf).sqrt());
        let lower_next = lower + delta_l;
        let upper_next = upper + delta_u;

        let eig = a.clone().symmetric_eigen();
        let lambda: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let phi = |l: f64| lambda.iter().map(|&x| 1.0 / (x - l)).sum::<f64>();
        let phi_gap = phi(lower_next) - phi(lower);
        let psi = |u: f64| b.iter().map(|&x| 1.0 / (u - x)).sum::<f64>();
        let psi_gap = psi(upper) - psi(upper_next);

        let mut best: Option<(usize, f64, f64)> = None;
        for (i, col) in cols.iter().enumerate() {
            // coordinates of v_i in the eigenbasis of A
            let mut quad1 = 0.0;
            let mut quad2 = 0.0;
            for (j, &lam) in lambda.iter().enumerate() {
                let c: f64 = (0..n).map(|r| eig.eigenvectors[(r, j)] * col[r]).sum();
                let d = lam - lower_next;
                quad1 += c * c / d;
                quad2 += c * c / (d * d);
            }
            let l_val = quad2 / phi_gap - quad1;
            let d = upper_next - b[i];
            let u_val = 1.0 / (d * d) / psi_gap + 1.0 / d;
            let gap = l_val - u_val;
            if best.is_none_or(|(_, g, _)| gap > g) {
                best = Some((i, gap, 0.5 * (l_val + u_val)));
            }
        }
        let (i, gap, inv_t) = best.expect("m >= 1");
        if gap < -1e-9 * inv_t.abs().max(1.0) || inv_t <= 0.0 {
            return Err(Error::Invariant(format!(
                "no column satisfies the barrier condition at step {step}"
            )));
        }
        let t = 1.0 / inv_t;
        s[i] += t;
        b[i] += t;
        for r in 0..n {
            for c in 0..n {
                a[(r, c)] += t * cols[i][r] * cols[i][c];
            }
        }
    }

    let scale = (1.0 - (nf / kf).sqrt()) / kf;
    s.iter_mut().for_each(|w| *w *= scale);
    let support = Subset::new((0..m).filter(|&i| s[i] > 0.0).collect(), m)?;
    Ok(DualSetWeights { s, support })
}

/// Column selection from the support of the dual-set weights on the right
/// singular vectors of `x`.
pub fn dualset_select(x: &Matrix, k: usize) -> Result<SelectionResult> {
    let timer = Timer::start();
    check_short_fat(x)?;
    let (n, m) = (x.rows(), x.cols());
    if !(n < k && k <= m) {
        return Err(Error::BadK {
            k,
            reason: format!("need {n} < k <= {m}"),
        });
    }
    let (fro_full, spec_full) = full_norms(x)?;
    let svd = linalg::thin_svd(x, DEFAULT_RANK_TOL)?;
    let weights = dual_set_sparsify(&svd.y, k)?;
    let (fro, spec) = subset_norms(x, &weights.support)?;
    let factor = dualset_factor(n, m, k);
    Ok(SelectionResult {
        indices: weights.support,
        algo: "dualset",
        fro_sq_selected: fro,
        spec_sq_selected: spec,
        fro_sq_full: fro_full,
        spec_sq_full: spec_full,
        bound_fro: factor * fro_full,
        bound_spec: factor * spec_full,
        seed: None,
        rounds: None,
        elapsed_ms: timer.ms(),
        warnings: Vec::new(),
    })
}
