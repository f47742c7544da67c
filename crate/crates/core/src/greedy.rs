//! Deterministic greedy column removal.
//!
//! Starting from all `m` columns, each step deletes the column whose removal
//! increases `||X_S^+||_F^2` the least. With `X_S = U diag(sigma) Y` the
//! increase caused by deleting column `r` is
//!
//! ```text
//! sum_l (y_rl / sigma_l)^2 / (1 - ||y_r||^2)
//! ```
//!
//! and columns with `||y_r||^2 >= 1 - tau` are never removed, since deleting
//! them would drop the rank. Scores are compared with the cross-multiplied
//! form, which avoids the subtraction `1 - ||y_r||^2`.
//!
//! The thin SVD is recomputed after every removal.

use crate::error::{Error, Result};
use crate::linalg::{self, columns, Matrix, Subset, DEFAULT_RANK_TOL};
use crate::selection::{check_short_fat, full_norms, subset_norms, SelectionResult, Timer};

/// Rank guard: a column is a removal candidate only if its leverage is below `1 - RANK_GUARD_TAU`.
pub const RANK_GUARD_TAU: f64 = 1e-10;

/// SVD of the currently active columns.
#[derive(Debug, Clone)]
pub struct RemovalState {
    pub active: Subset,
    pub sigma: Vec<f64>,
    /// rho x |active|, columns in the order of `active`.
    pub y: Matrix,
}

impl RemovalState {
    pub fn new(x: &Matrix, active: Subset) -> Result<Self> {
        let xs = columns(x, &active)?;
        let svd = linalg::thin_svd(&xs, DEFAULT_RANK_TOL)?;
        if svd.rank() < x.rows() {
            return Err(Error::Invariant(format!(
                "active set of size {} has rank {} < {}",
                active.len(),
                svd.rank(),
                x.rows()
            )));
        }
        Ok(Self {
            active,
            sigma: svd.sigma,
            y: svd.y,
        })
    }

    fn position(&self, col: usize) -> Result<usize> {
        self.active
            .indices()
            .binary_search(&col)
            .map_err(|_| Error::IndexOutOfRange {
                index: col,
                cols: self.active.len(),
            })
    }

    /// `(sum_l (y_rl / sigma_l)^2, ||y_r||^2)` for original column `col`.
    pub fn column_terms(&self, col: usize) -> Result<(f64, f64)> {
        let p = self.position(col)?;
        let mut weighted = 0.0;
        let mut lev = 0.0;
        for (l, s) in self.sigma.iter().enumerate() {
            let v = self.y.get(l, p);
            weighted += (v / s).powi(2);
            lev += v * v;
        }
        Ok((weighted, lev))
    }

    pub fn is_candidate(&self, col: usize) -> Result<bool> {
        Ok(self.column_terms(col)?.1 < 1.0 - RANK_GUARD_TAU)
    }

    /// Increase of `||X_S^+||_F^2` if `col` is removed. Only for diagnostics;
    /// selection goes through [`removal_score_less`].
    pub fn removal_increase(&self, col: usize) -> Result<f64> {
        let (w, lev) = self.column_terms(col)?;
        Ok(w / (1.0 - lev))
    }
}

/// True iff removing `g` costs no more than removing `h`.
pub fn removal_score_less(g: usize, h: usize, state: &RemovalState) -> Result<bool> {
    let (wg, pg) = state.column_terms(g)?;
    let (wh, ph) = state.column_terms(h)?;
    for (idx, p) in [(g, pg), (h, ph)] {
        if !(p < 1.0 - RANK_GUARD_TAU) {
            return Err(Error::NotCandidate {
                index: idx,
                leverage: p,
            });
        }
    }
    Ok(wg + pg * wh <= wh + ph * wg)
}

fn pick_removal(state: &RemovalState) -> Result<Option<usize>> {
    let mut best: Option<usize> = None;
    for &c in state.active.indices() {
        if !state.is_candidate(c)? {
            continue;
        }
        best = match best {
            None => Some(c),
            // strictly better only; equal scores keep the smaller index
            Some(b) if removal_score_less(c, b, state)? && !removal_score_less(b, c, state)? => {
                Some(c)
            }
            keep => keep,
        };
    }
    Ok(best)
}

fn validate(x: &Matrix, k: usize) -> Result<(f64, f64)> {
    check_short_fat(x)?;
    let (n, m) = (x.rows(), x.cols());
    if k < n || k > m {
        return Err(Error::BadK {
            k,
            reason: format!("need {n} <= k <= {m}"),
        });
    }
    full_norms(x)
}

/// Active sets `S_0 = [m], S_1, ..., S_{m-k}` visited by greedy removal.
pub fn greedy_removal_path(x: &Matrix, k: usize) -> Result<Vec<Subset>> {
    validate(x, k)?;
    let mut path = vec![Subset::all(x.cols())];
    while path.last().expect("non-empty").len() > k {
        let state = RemovalState::new(x, path.last().expect("non-empty").clone())?;
        let j = pick_removal(&state)?.ok_or_else(|| {
            Error::Invariant(format!(
                "no removable column left at |S| = {}",
                state.active.len()
            ))
        })?;
        path.push(state.active.without(j));
    }
    Ok(path)
}

/// Greedy removal targeting the Frobenius norm.
pub fn greedy_remove_frobenius(x: &Matrix, k: usize) -> Result<SelectionResult> {
    let timer = Timer::start();
    let (fro_full, spec_full) = validate(x, k)?;
    let s = greedy_removal_path(x, k)?.pop().expect("non-empty");
    let (fro, spec) = subset_norms(x, &s)?;
    let (n, m) = (x.rows() as f64, x.cols() as f64);
    let ratio = (m - n + 1.0) / (k as f64 - n + 1.0);
    Ok(SelectionResult {
        indices: s,
        algo: "greedy-f",
        fro_sq_selected: fro,
        spec_sq_selected: spec,
        fro_sq_full: fro_full,
        spec_sq_full: spec_full,
        bound_fro: ratio * fro_full,
        bound_spec: ratio * n * spec_full,
        seed: None,
        rounds: None,
        elapsed_ms: timer.ms(),
        warnings: Vec::new(),
    })
}

/// Factor `1 + n(m-k)/(k-n+1)` of the per-singular-value guarantee.
pub fn spectral_factor(n: usize, m: usize, k: usize) -> f64 {
    1.0 + (n * (m - k)) as f64 / (k - n + 1) as f64
}

/// Greedy removal run on the orthonormal right factor of `x`, which targets
/// the spectral norm and every singular value.
pub fn greedy_remove_spectral(x: &Matrix, k: usize) -> Result<SelectionResult> {
    let timer = Timer::start();
    let (fro_full, spec_full) = validate(x, k)?;
    let svd = linalg::thin_svd(x, DEFAULT_RANK_TOL)?;
    let s = greedy_removal_path(&svd.y, k)?.pop().expect("non-empty");
    let (fro, spec) = subset_norms(x, &s)?;
    let (n, m) = (x.rows(), x.cols());
    let ratio = (m - n + 1) as f64 / (k - n + 1) as f64;
    Ok(SelectionResult {
        indices: s,
        algo: "greedy-2",
        fro_sq_selected: fro,
        spec_sq_selected: spec,
        fro_sq_full: fro_full,
        spec_sq_full: spec_full,
        bound_fro: ratio * n as f64 * spec_full,
        bound_spec: spectral_factor(n, m, k) * spec_full,
        seed: None,
        rounds: None,
        elapsed_ms: timer.ms(),
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y24() -> Matrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Matrix::from_rows(&[[h, h, 0.0, 0.0], [0.0, 0.0, h, h]]).unwrap()
    }

    fn handmade_state(y_cols: &[[f64; 2]], sigma: [f64; 2]) -> RemovalState {
        let m = y_cols.len();
        let mut y = Matrix::zeros(2, m);
        for (j, c) in y_cols.iter().enumerate() {
            y.set(0, j, c[0]);
            y.set(1, j, c[1]);
        }
        RemovalState {
            active: Subset::all(m),
            sigma: sigma.to_vec(),
            y,
        }
    }

    #[test]
    fn score_comparison_is_reflexive_and_prefers_low_leverage() {
        let st = handmade_state(&[[0.1, 0.0], [0.5, 0.0], [0.0, 1.0]], [1.0, 1.0]);
        assert!(removal_score_less(0, 0, &st).unwrap());
        assert!(removal_score_less(0, 1, &st).unwrap());
        assert!(!removal_score_less(1, 0, &st).unwrap());
        assert!(matches!(
            removal_score_less(0, 2, &st),
            Err(Error::NotCandidate { index: 2, .. })
        ));
    }

    #[test]
    fn score_comparison_matches_direct_ratio() {
        let st = handmade_state(&[[0.3, 0.2], [0.1, 0.6], [0.4, -0.1]], [2.0, 0.5]);
        for g in 0..3 {
            for h in 0..3 {
                let direct = st.removal_increase(g).unwrap() <= st.removal_increase(h).unwrap();
                assert_eq!(removal_score_less(g, h, &st).unwrap(), direct, "{g} {h}");
            }
        }
    }

    #[test]
    fn k_equals_m_removes_nothing() {
        let r = greedy_remove_frobenius(&y24(), 4).unwrap();
        assert_eq!(r.indices, Subset::all(4));
        assert!((r.fro_ratio() - 1.0).abs() < 1e-12);
        assert!((r.bound_fro - r.fro_sq_full).abs() < 1e-12);
    }

    #[test]
    fn y24_single_removal_is_tight() {
        let r = greedy_remove_frobenius(&y24(), 3).unwrap();
        assert_eq!(r.indices.len(), 3);
        assert!((r.fro_sq_selected - 3.0).abs() < 1e-10);
        assert!((r.bound_fro - 3.0).abs() < 1e-12);
        let r2 = greedy_remove_spectral(&y24(), 3).unwrap();
        let smin_sq = 1.0 / r2.spec_sq_selected;
        assert!((smin_sq - 0.5).abs() < 1e-10);
        assert!((spectral_factor(2, 4, 3) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bad_k_and_rank_deficient_input() {
        assert!(matches!(greedy_remove_frobenius(&y24(), 1), Err(Error::BadK { .. })));
        assert!(matches!(greedy_remove_frobenius(&y24(), 5), Err(Error::BadK { .. })));
        let rd = Matrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]).unwrap();
        assert!(matches!(
            greedy_remove_frobenius(&rd, 2),
            Err(Error::RankDeficientInput { .. })
        ));
    }

    #[test]
    fn rank_guard_keeps_isolated_columns() {
        // column 2 is the only one touching row 1: leverage exactly 1
        let x = Matrix::from_rows(&[[1.0, 1.0, 0.0, 2.0], [0.0, 0.0, 3.0, 0.0]]).unwrap();
        let r = greedy_remove_frobenius(&x, 2).unwrap();
        assert!(r.indices.contains(2));
        assert!(r.fro_sq_selected <= r.bound_fro * (1.0 + 1e-12));
    }
}
