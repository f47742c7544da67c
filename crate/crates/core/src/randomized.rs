//! Randomized selection by boosted leverage-score sampling with replacement.
//!
//! Column `i` is drawn with probability proportional to
//! `tau_i = max(||y_i||^2, n/m)`, where `y_i` is the i-th column of the
//! orthonormal right factor. Draws use ChaCha8 seeded from a `u64` and
//! inverse-CDF lookup, so a seed reproduces the same subset on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Subset, DEFAULT_RANK_TOL};
use crate::selection::{check_short_fat, full_norms, subset_norms, SelectionResult, Timer};

/// Failure probability used when none is given.
pub const DEFAULT_DELTA: f64 = 0.5;

pub const NO_GUARANTEE: &str = "no guarantee: k is below the sampling threshold";

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries i.i.d. uniform on `[-1, 1)`, filled row by row.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = rng_from_seed(seed);
    let data = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
    Matrix::new(rows, cols, data).expect("finite entries")
}

#[derive(Debug, Clone)]
pub struct SamplingPlan {
    pub leverage: Vec<f64>,
    pub tau: Vec<f64>,
    pub p: Vec<f64>,
    cdf: Vec<f64>,
    /// Orthonormal right factor whose columns were scored.
    pub y: Matrix,
}

impl SamplingPlan {
    pub fn draw(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.random();
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.p.len() - 1)
    }

    /// `k` independent draws with replacement.
    pub fn draws(&self, k: usize, seed: u64) -> Vec<usize> {
        let mut rng = rng_from_seed(seed);
        (0..k).map(|_| self.draw(&mut rng)).collect()
    }

    /// Multiplicity weights `s_i = #{t : c_t = i} / (k p_i)`.
    pub fn weights(&self, draws: &[usize]) -> Vec<f64> {
        let k = draws.len() as f64;
        let mut s = vec![0.0; self.p.len()];
        for &c in draws {
            s[c] += 1.0 / (k * self.p[c]);
        }
        s
    }

    /// The rescaled draw `y_c / sqrt(p_c)`.
    pub fn scaled_column(&self, c: usize) -> Vec<f64> {
        let f = 1.0 / self.p[c].sqrt();
        self.y.col(c).into_iter().map(|v| v * f).collect()
    }
}

pub fn leverage_plan(x: &Matrix) -> Result<SamplingPlan> {
    check_short_fat(x)?;
    full_norms(x)?;
    let svd = linalg::thin_svd(x, DEFAULT_RANK_TOL)?;
    let (n, m) = (x.rows() as f64, x.cols());
    let floor = n / m as f64;
    let leverage: Vec<f64> = (0..m).map(|j| svd.leverage(j)).collect();
    let tau: Vec<f64> = leverage.iter().map(|&l| l.max(floor)).collect();
    let total: f64 = tau.iter().sum();
    let p: Vec<f64> = tau.iter().map(|t| t / total).collect();
    let mut acc = 0.0;
    let cdf = p
        .iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect();
    Ok(SamplingPlan {
        leverage,
        tau,
        p,
        cdf,
        y: svd.y,
    })
}

/// `min(ceil(32 n ln(2n/delta)), m)`.
pub fn sample_threshold(n: usize, m: usize, delta: f64) -> usize {
    let t = (32.0 * n as f64 * (2.0 * n as f64 / delta).ln()).ceil();
    if t >= m as f64 {
        m
    } else {
        t as usize
    }
}

pub fn leverage_select(x: &Matrix, k: usize, seed: u64) -> Result<SelectionResult> {
    leverage_select_with_delta(x, k, seed, DEFAULT_DELTA)
}

pub fn leverage_select_with_delta(
    x: &Matrix,
    k: usize,
    seed: u64,
    delta: f64,
) -> Result<SelectionResult> {
    let timer = Timer::start();
    let (n, m) = (x.rows(), x.cols());
    if k == 0 || k > m {
        return Err(Error::BadK {
            k,
            reason: format!("need 1 <= k <= {m}"),
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadK {
            k,
            reason: format!("failure probability {delta} outside (0, 1)"),
        });
    }
    let plan = leverage_plan(x)?;
    let (fro_full, spec_full) = full_norms(x)?;
    let s = Subset::from_unsorted(plan.draws(k, seed), m)?;
    let (fro, spec) = subset_norms(x, &s)?;
    let mut warnings = Vec::new();
    let (bound_fro, bound_spec) = if k >= sample_threshold(n, m, delta) {
        let f = 4.0 * m as f64;
        (f * fro_full, f * spec_full)
    } else {
        warnings.push(NO_GUARANTEE.to_string());
        (f64::INFINITY, f64::INFINITY)
    };
    Ok(SelectionResult {
        indices: s,
        algo: "leverage",
        fro_sq_selected: fro,
        spec_sq_selected: spec,
        fro_sq_full: fro_full,
        spec_sq_full: spec_full,
        bound_fro,
        bound_spec,
        seed: Some(seed),
        rounds: None,
        elapsed_ms: timer.ms(),
        warnings,
    })
}
