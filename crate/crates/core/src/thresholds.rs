//! Noise thresholds: density evolution on the erasure channel and empirical
//! belief-propagation thresholds on the BI-AWGN channel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::q_function;
use crate::channels::{awgn_llr, biawgn_transmit, ChannelModel};
use crate::codes::{DegreeDistribution, LinearCode};
use crate::error::{Error, Result};
use crate::secrecy::BpDecoder;
use crate::seeding::{derive_seed, trial_rng};
use crate::stats::{wilson_interval, Z95};

pub const DE_TOLERANCE: f64 = 1e-8;
pub const DE_MAX_ITER: usize = 10_000;
pub const BP_MAX_ITER: usize = 200;
/// Final width of the density-evolution bisection bracket.
pub const BISECTION_WIDTH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMethod {
    DensityEvolution,
    EmpiricalBp,
    UserSupplied,
}

impl ThresholdMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdMethod::DensityEvolution => "DE-bisection",
            ThresholdMethod::EmpiricalBp => "empirical-BP",
            ThresholdMethod::UserSupplied => "user-supplied (typical-pair, paper)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// Erasure probability or SNR, depending on the channel.
    pub estimate: f64,
    pub lo: f64,
    /// Infinite when an empirical search ran off the end of its grid.
    pub hi: f64,
    pub method: ThresholdMethod,
    /// DE: bisection steps. Empirical: decoding trials run in total.
    pub work: u64,
    /// Empirical only: word errors and trials at the reported grid point.
    pub word_errors: Option<u64>,
    pub trials: Option<u64>,
    /// Empirical only: 95% Wilson interval of the word error rate there.
    pub wer_interval: Option<(f64, f64)>,
    pub above_grid: bool,
}

impl ThresholdResult {
    /// A threshold taken as given, e.g. a typical-pair value from the literature.
    pub fn user_supplied(value: f64) -> Self {
        ThresholdResult {
            estimate: value,
            lo: value,
            hi: value,
            method: ThresholdMethod::UserSupplied,
            work: 0,
            word_errors: None,
            trials: None,
            wer_interval: None,
            above_grid: false,
        }
    }
}

/// Limit of `x ← ε·λ(1 − ρ(1 − x))` from `x₀ = ε`.
pub fn de_residual(erasure: f64, dd: &DegreeDistribution, tol: f64, max_iter: usize) -> f64 {
    let mut x = erasure;
    for _ in 0..max_iter {
        let next = erasure * dd.lambda_poly(1.0 - dd.rho_poly(1.0 - x));
        let step = (next - x).abs();
        x = next;
        if step < tol {
            break;
        }
    }
    x
}

/// Largest erasure probability whose DE residual falls below `tol`.
pub fn bec_bp_threshold(dd: &DegreeDistribution, tol: f64) -> ThresholdResult {
    let good = |e: f64| de_residual(e, dd, DE_TOLERANCE, DE_MAX_ITER) < tol;
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut steps = 0;
    if good(hi) {
        lo = hi;
    } else {
        while hi - lo > BISECTION_WIDTH {
            let mid = 0.5 * (lo + hi);
            if good(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            steps += 1;
        }
    }
    ThresholdResult {
        estimate: 0.5 * (lo + hi),
        lo,
        hi,
        method: ThresholdMethod::DensityEvolution,
        work: steps,
        word_errors: None,
        trials: None,
        wer_interval: None,
        above_grid: false,
    }
}

/// Smallest grid SNR at which BP on `code` reaches word error rate at most
/// `target_wer`, using the all-zero codeword.
///
/// The bracket is `(previous grid point, found point)`; the lower end is 0
/// when the first grid point already succeeds. Each grid point stops early
/// once the error count makes the target unreachable.
pub fn empirical_bp_threshold_awgn(
    code: &LinearCode,
    grid: &[f64],
    trials: u64,
    target_wer: f64,
    seed: u64,
) -> Result<ThresholdResult> {
    if grid.is_empty() {
        return Err(Error::invalid("SNR grid is empty"));
    }
    if grid.iter().any(|&g| !(g >= 0.0 && g.is_finite())) {
        return Err(Error::invalid("SNR grid values must be finite and non-negative"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("SNR grid must be strictly ascending"));
    }
    if trials < 100 {
        return Err(Error::invalid(format!("at least 100 trials are required, got {trials}")));
    }
    crate::error::check_probability("target word error rate", target_wer)?;

    let decoder = BpDecoder::new(code.sparse());
    let zeros = vec![1i8; code.n()];
    let allowed = (target_wer * trials as f64).floor() as u64;
    // fixed batch size keeps `work` independent of the thread count
    let batch = (allowed + 1).clamp(4, 64);
    let mut work = 0;

    for (g, &snr) in grid.iter().enumerate() {
        let grid_seed = derive_seed(seed, "bp-threshold", g as u64);
        let mut errors = 0u64;
        let mut done = 0u64;
        while done < trials && errors <= allowed {
            let end = (done + batch).min(trials);
            errors += (done..end)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(grid_seed, t);
                    let z = biawgn_transmit(&zeros, snr, &mut rng).expect("validated SNR");
                    let out = decoder.decode(&awgn_llr(&z, snr), BP_MAX_ITER).expect("length n");
                    u64::from(!(out.success && out.word.iter().all(|&b| b == 0)))
                })
                .sum::<u64>();
            work += end - done;
            done = end;
        }
        if done == trials && errors <= allowed {
            return Ok(ThresholdResult {
                estimate: snr,
                lo: if g == 0 { 0.0 } else { grid[g - 1] },
                hi: snr,
                method: ThresholdMethod::EmpiricalBp,
                work,
                word_errors: Some(errors),
                trials: Some(trials),
                wer_interval: Some(wilson_interval(errors, trials, Z95)),
                above_grid: false,
            });
        }
    }
    let last = *grid.last().expect("non-empty grid");
    Ok(ThresholdResult {
        estimate: last,
        lo: last,
        hi: f64::INFINITY,
        method: ThresholdMethod::EmpiricalBp,
        work,
        word_errors: None,
        trials: Some(trials),
        wer_interval: None,
        above_grid: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyCondition {
    pub holds: bool,
    /// Left side minus right side, in probability units.
    pub margin: f64,
}

/// `ε ≥ 1 − δ⋆` on the erasure channel, `Q(√2λ) ≥ (1 − δ⋆)/2` on BI-AWGN and
/// `q ≥ (1 − δ⋆)/2` on the BSC.
pub fn check_secrecy_condition(ch: &ChannelModel, delta_star: f64) -> Result<SecrecyCondition> {
    ch.validate()?;
    crate::error::check_probability("erasure threshold", delta_star)?;
    let margin = match *ch {
        ChannelModel::Bec { erasure } => erasure - (1.0 - delta_star),
        ChannelModel::BiAwgn { snr } => q_function((2.0 * snr).sqrt()) - (1.0 - delta_star) / 2.0,
        ChannelModel::Bsc { crossover } => crossover - (1.0 - delta_star) / 2.0,
    };
    Ok(SecrecyCondition {
        holds: margin >= 0.0,
        margin,
    })
}
