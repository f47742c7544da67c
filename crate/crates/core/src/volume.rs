//! Volume sampling: subsets of `k` columns drawn with probability proportional
//! to `det(X_S X_S^T)`.
//!
//! For general `k` the distribution is enumerated exactly, up to a cap on the
//! number of subsets (default 2e6, overridable through `SUBSEL_ENUM_CAP`).
//! For `k = n` a sequential sampler runs in `O(n^2 m)`: with `Y` the
//! orthonormal right factor, it repeatedly picks a column with probability
//! proportional to its squared residual norm and projects that direction out
//! of every remaining column. The probability of an ordered pick sequence is
//! `prod_t ||r_t||^2 / (n - t)`, whose product over the `n!` orderings of a set
//! is `det(Y_S)^2 / n!`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, binomial, columns, for_each_subset, Matrix, Subset, DEFAULT_RANK_TOL};
use crate::randomized::rng_from_seed;
use crate::selection::{check_short_fat, full_norms, subset_norms, SelectionResult, Timer};

pub const DEFAULT_ENUM_CAP: u128 = 2_000_000;
pub const ENUM_CAP_ENV: &str = "SUBSEL_ENUM_CAP";

/// Enumeration cap, honouring `SUBSEL_ENUM_CAP` when it parses.
pub fn enumeration_cap() -> u128 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

pub(crate) fn check_enumerable(m: usize, k: usize) -> Result<()> {
    let count = binomial(m, k);
    let cap = enumeration_cap();
    if count > cap {
        return Err(Error::TooManySubsets { count, cap });
    }
    Ok(())
}

/// Squared volume of `X_S`, with near-degenerate subsets snapped to zero:
/// a subset counts as zero-volume when its Gram determinant falls below
/// `1e-12 * g^(2n)`, `g` the geometric mean of the selected column norms.
pub fn effective_volume(x: &Matrix, s: &Subset) -> Result<f64> {
    let det = linalg::gram_det(x, s)?;
    let xs = columns(x, s)?;
    let n = x.rows() as f64;
    let log_mean = (0..xs.cols())
        .map(|j| linalg::norm2(&xs.col(j)).ln())
        .sum::<f64>()
        / xs.cols() as f64;
    let threshold = 1e-12 * (2.0 * n * log_mean).exp();
    Ok(if det > threshold && det > 0.0 { det } else { 0.0 })
}

#[derive(Debug, Clone)]
pub struct VolSampTable {
    pub k: usize,
    /// Positive-probability subsets in lexicographic order.
    pub entries: Vec<(Subset, f64)>,
    pub total_volume: f64,
}

impl VolSampTable {
    pub fn probability(&self, s: &Subset) -> f64 {
        self.entries
            .binary_search_by(|(t, _)| t.cmp(s))
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    /// Inverse-CDF draw from the table.
    pub fn sample(&self, rng: &mut impl Rng) -> Subset {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (s, p) in &self.entries {
            acc += p;
            if u < acc {
                return s.clone();
            }
        }
        self.entries.last().expect("non-empty table").0.clone()
    }
}

fn check_k(x: &Matrix, k: usize) -> Result<()> {
    check_short_fat(x)?;
    if k < x.rows() || k > x.cols() {
        return Err(Error::BadK {
            k,
            reason: format!("need {} <= k <= {}", x.rows(), x.cols()),
        });
    }
    Ok(())
}

pub fn volsamp_enumerate(x: &Matrix, k: usize) -> Result<VolSampTable> {
    check_k(x, k)?;
    check_enumerable(x.cols(), k)?;
    let m = x.cols();
    let mut entries = Vec::new();
    let mut err = None;
    for_each_subset(m, k, |idx| {
        if err.is_some() {
            return;
        }
        let s = Subset(idx.to_vec());
        match effective_volume(x, &s) {
            Ok(v) if v > 0.0 => entries.push((s, v)),
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let total_volume: f64 = entries.iter().map(|(_, v)| v).sum();
    if entries.is_empty() {
        return Err(Error::RankDeficientInput {
            rank: linalg::rank(x, DEFAULT_RANK_TOL),
            rows: x.rows(),
        });
    }
    for e in &mut entries {
        e.1 /= total_volume;
    }
    Ok(VolSampTable {
        k,
        entries,
        total_volume,
    })
}

/// One `k = n` draw using the sequential residual-projection sampler.
pub fn volsamp_draw_fast(y: &Matrix, rng: &mut impl Rng) -> Subset {
    let (n, m) = (y.rows(), y.cols());
    let mut resid: Vec<Vec<f64>> = (0..m).map(|j| y.col(j)).collect();
    let mut picked = Vec::with_capacity(n);
    for _ in 0..n {
        let w: Vec<f64> = resid
            .iter()
            .enumerate()
            .map(|(j, r)| {
                if picked.contains(&j) {
                    0.0
                } else {
                    r.iter().map(|v| v * v).sum::<f64>().max(0.0)
                }
            })
            .collect();
        let total: f64 = w.iter().sum();
        let u: f64 = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut choice = None;
        for (j, &wj) in w.iter().enumerate() {
            if wj <= 0.0 {
                continue;
            }
            acc += wj;
            choice = Some(j);
            if u < acc {
                break;
            }
        }
        let j = choice.expect("positive residual mass while rank remains");
        let norm = w[j].sqrt();
        let q: Vec<f64> = resid[j].iter().map(|v| v / norm).collect();
        for r in resid.iter_mut() {
            let dot: f64 = r.iter().zip(&q).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(&q).for_each(|(a, b)| *a -= dot * b);
        }
        picked.push(j);
    }
    picked.sort_unstable();
    Subset(picked)
}

/// Draw from `VolSamp(x, k)`: fast path for `k = n`, enumeration otherwise.
pub fn volsamp_draw(x: &Matrix, k: usize, seed: u64) -> Result<Subset> {
    check_k(x, k)?;
    let mut rng = rng_from_seed(seed);
    if k == x.rows() {
        full_norms(x)?;
        let svd = linalg::thin_svd(x, DEFAULT_RANK_TOL)?;
        Ok(volsamp_draw_fast(&svd.y, &mut rng))
    } else {
        Ok(volsamp_enumerate(x, k)?.sample(&mut rng))
    }
}

/// `(m - n + 1) / (k - n + 1)`.
pub fn volume_fro_factor(n: usize, m: usize, k: usize) -> f64 {
    (m - n + 1) as f64 / (k - n + 1) as f64
}

/// Exact `E ||X_S^+||_F^2` under volume sampling.
pub fn expected_pinv_fro(x: &Matrix, k: usize) -> Result<f64> {
    let table = volsamp_enumerate(x, k)?;
    table.entries.iter().try_fold(0.0, |acc, (s, p)| {
        Ok(acc + p * linalg::pinv_fro_sq(&columns(x, s)?)?)
    })
}

#[derive(Debug, Clone)]
pub struct SpecBoundReport {
    /// `E[sigma_i^{-2}(X_S)]`, i = 1..n.
    pub expectations: Vec<f64>,
    /// `(1 + n(m-k)/(k-n+1)) sigma_i^{-2}(X)`.
    pub bounds: Vec<f64>,
    pub all_hold: bool,
}

pub fn expected_spec_bound_check(x: &Matrix, k: usize) -> Result<SpecBoundReport> {
    let table = volsamp_enumerate(x, k)?;
    let n = x.rows();
    let mut expectations = vec![0.0; n];
    for (s, p) in &table.entries {
        let sv = linalg::singular_values(&columns(x, s)?);
        for i in 0..n {
            expectations[i] += p * sv[i].powi(-2);
        }
    }
    let factor = crate::greedy::spectral_factor(n, x.cols(), k);
    let bounds: Vec<f64> = linalg::singular_values(x)[..n]
        .iter()
        .map(|s| factor * s.powi(-2))
        .collect();
    let all_hold = expectations
        .iter()
        .zip(&bounds)
        .all(|(e, b)| *e <= b * (1.0 + 1e-9));
    Ok(SpecBoundReport {
        expectations,
        bounds,
        all_hold,
    })
}

/// Best single-column removal: the full-rank `m - 1` subset minimizing
/// `||X_S^+||_F^2`, with its value.
pub fn one_removal_certificate(x: &Matrix) -> Result<(Subset, f64)> {
    if x.cols() <= x.rows() {
        return Err(Error::BadShape {
            rows: x.rows(),
            cols: x.cols(),
            reason: "need more columns than rows".into(),
        });
    }
    full_norms(x)?;
    let all = Subset::all(x.cols());
    let mut best: Option<(Subset, f64)> = None;
    for j in 0..x.cols() {
        let s = all.without(j);
        let xs = columns(x, &s)?;
        if let Ok(v) = linalg::pinv_fro_sq(&xs) {
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((s, v));
            }
        }
    }
    best.ok_or_else(|| Error::Invariant("every single removal drops the rank".into()))
}

/// Rounds needed for the rejection loop to fail with probability at most 1e-9.
pub fn default_max_rounds(eta: f64) -> usize {
    ((1e-9f64).ln() / (1.0 / (1.0 + eta)).ln()).ceil() as usize
}

/// Draws `k = n` volume samples until `||X_S^{-1}||_F^2` is within
/// `(1 + eta)(m - n + 1) ||X^+||_F^2`.
pub fn rejection_select(
    x: &Matrix,
    eta: f64,
    seed: u64,
    max_rounds: Option<usize>,
) -> Result<SelectionResult> {
    let timer = Timer::start();
    check_short_fat(x)?;
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::BadK {
            k: x.rows(),
            reason: format!("eta must be positive, got {eta}"),
        });
    }
    let (fro_full, spec_full) = full_norms(x)?;
    let (n, m) = (x.rows(), x.cols());
    let alpha = (1.0 + eta) * (m - n + 1) as f64 * fro_full;
    let max_rounds = max_rounds.unwrap_or_else(|| default_max_rounds(eta));
    let y = linalg::thin_svd(x, DEFAULT_RANK_TOL)?.y;
    let mut rng = rng_from_seed(seed);
    for round in 1..=max_rounds {
        let s = volsamp_draw_fast(&y, &mut rng);
        let Ok((fro, spec)) = subset_norms(x, &s) else {
            continue;
        };
        if fro <= alpha {
            return Ok(SelectionResult {
                indices: s,
                algo: "volume",
                fro_sq_selected: fro,
                spec_sq_selected: spec,
                fro_sq_full: fro_full,
                spec_sq_full: spec_full,
                bound_fro: alpha,
                bound_spec: (1.0 + eta) * (m - n + 1) as f64 * n as f64 * spec_full,
                seed: Some(seed),
                rounds: Some(round),
                elapsed_ms: timer.ms(),
                warnings: Vec::new(),
            });
        }
    }
    Err(Error::MaxRoundsExceeded { rounds: max_rounds })
}
