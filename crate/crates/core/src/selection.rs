use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{self, columns, Matrix, Subset};

/// Outcome of one subset-selection run.
#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub indices: Subset,
    pub algo: &'static str,
    pub fro_sq_selected: f64,
    pub spec_sq_selected: f64,
    pub fro_sq_full: f64,
    pub spec_sq_full: f64,
    /// Upper bound on `fro_sq_selected`; infinite when no guarantee applies.
    pub bound_fro: f64,
    pub bound_spec: f64,
    pub seed: Option<u64>,
    /// Rejection rounds used (volume sampling only).
    pub rounds: Option<usize>,
    pub elapsed_ms: f64,
    pub warnings: Vec<String>,
}

impl SelectionResult {
    pub fn fro_ratio(&self) -> f64 {
        self.fro_sq_selected / self.fro_sq_full
    }

    pub fn spec_ratio(&self) -> f64 {
        self.spec_sq_selected / self.spec_sq_full
    }
}

/// `||X^+||_F^2` and `||X^+||_2^2` of a full-row-rank input.
pub(crate) fn full_norms(x: &Matrix) -> Result<(f64, f64)> {
    let s = linalg::singular_values(x);
    let smax = s.first().copied().unwrap_or(0.0);
    let rank = s
        .iter()
        .filter(|&&v| v > linalg::DEFAULT_RANK_TOL * smax && v > 0.0)
        .count();
    if rank < x.rows() {
        return Err(Error::RankDeficientInput {
            rank,
            rows: x.rows(),
        });
    }
    let fro = s[..x.rows()].iter().map(|v| v.powi(-2)).sum();
    Ok((fro, s[x.rows() - 1].powi(-2)))
}

/// Norms of `X_S^+`, or `SampleRankDeficient` if `X_S` lost rank.
pub(crate) fn subset_norms(x: &Matrix, s: &Subset) -> Result<(f64, f64)> {
    let xs = columns(x, s)?;
    let rank_err = |_| Error::SampleRankDeficient {
        indices: s.indices().to_vec(),
    };
    let fro = linalg::pinv_fro_sq(&xs).map_err(rank_err)?;
    let spec = linalg::pinv_spec_sq(&xs).map_err(rank_err)?;
    Ok((fro, spec))
}

pub(crate) struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Self(Instant::now())
    }

    pub fn ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}

pub(crate) fn check_short_fat(x: &Matrix) -> Result<()> {
    if x.cols() < x.rows() {
        return Err(Error::BadShape {
            rows: x.rows(),
            cols: x.cols(),
            reason: "expected at least as many columns as rows".into(),
        });
    }
    Ok(())
}
