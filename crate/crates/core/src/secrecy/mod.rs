//! Coset encoding over a nested pair and the eavesdropper's equivocation.
//!
//! With `X` uniform on the coset `D·w + C1` and `W = H1·X`, an erasure
//! pattern `E` leaves `H(W | Z = z) = rank(H1_E)` bits for every observation
//! `z`: the unknown part of `X` ranges over an affine space and `W` is its
//! image under `H1_E`. The estimators below average that rank over random
//! patterns; the AWGN and BSC versions evaluate it at the erasure rate of the
//! embedded erasure channel, which lower-bounds the true equivocation.

mod brute_force;
mod decoders;

pub use brute_force::{brute_force_equivocation, BruteForceEquivocation, BEC_EXHAUSTIVE_LIMIT, BSC_EXHAUSTIVE_LIMIT};
pub use decoders::{bp_decode_awgn, peeling_decode_bec, BpDecoder, BpOutcome, PeelingOutcome};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{awgn_embedded_erasure, c_biawgn};
use crate::channels::{awgn_llr, biawgn_transmit, modulate};
use crate::codes::NestedCodePair;
use crate::error::{Error, Result};
use crate::seeding::trial_rng;
use crate::stats::{mean_and_half_width, wilson_interval, Z95};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivocationMethod {
    ExactRank,
    DegradationRank,
    FanoBound,
    BruteForce,
}

impl EquivocationMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EquivocationMethod::ExactRank => "exact-rank",
            EquivocationMethod::DegradationRank => "degradation-rank",
            EquivocationMethod::FanoBound => "fano-bound",
            EquivocationMethod::BruteForce => "brute-force",
        }
    }
}

/// Equivocation rate estimate in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivocationEstimate {
    pub rate: f64,
    /// 95% confidence half-width.
    pub half_width: f64,
    pub trials: u64,
    pub method: EquivocationMethod,
    /// Erasure rate of the (embedded) erasure channel, where one was used.
    pub erasure: Option<f64>,
}

/// A transmitted word together with the message and dither that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetCodeword {
    pub message: Vec<u8>,
    pub dither: Vec<u8>,
    pub word: Vec<u8>,
}

/// `x = D·w ⊕ ditherᵀ·G1`.
pub fn encode_with_dither(pair: &NestedCodePair, message: &[u8], dither: &[u8]) -> Result<CosetCodeword> {
    if message.len() != pair.message_len() {
        return Err(Error::DimensionMismatch {
            context: "message length",
            expected: pair.message_len(),
            found: message.len(),
        });
    }
    let mut word = pair.coset_leader(message)?;
    let offset = pair.coarse().generator().vec_mat(dither)?;
    for (x, o) in word.iter_mut().zip(offset) {
        *x ^= o;
    }
    Ok(CosetCodeword {
        message: message.to_vec(),
        dither: dither.to_vec(),
        word,
    })
}

/// Encodes `message` as a uniformly random member of its coset.
pub fn encode<R: Rng + ?Sized>(pair: &NestedCodePair, message: &[u8], rng: &mut R) -> Result<CosetCodeword> {
    let dither: Vec<u8> = (0..pair.coarse_dim()).map(|_| rng.random::<bool>() as u8).collect();
    encode_with_dither(pair, message, &dither)
}

/// Legitimate receiver over the noiseless main channel: `w = H1·y`.
pub fn main_decode(pair: &NestedCodePair, received: &[u8]) -> Result<Vec<u8>> {
    pair.coarse_check().mat_vec(received)
}

/// `H(W | Z)` in bits when the positions in `erased` are erased: `rank(H1_E)`.
pub fn exact_equivocation_bec(pair: &NestedCodePair, erased: &[usize]) -> Result<usize> {
    Ok(pair.coarse_check_transposed().row_submatrix(erased)?.rank())
}

/// Erased positions of one trial. Uses one uniform per position, so for a
/// fixed `(seed, trial)` the pattern grows monotonically with `erasure`.
fn erasure_pattern(n: usize, erasure: f64, seed: u64, trial: u64) -> Vec<usize> {
    let mut rng = trial_rng(seed, trial);
    (0..n).filter(|_| rng.random::<f64>() < erasure).collect()
}

/// Monte Carlo average of [`exact_equivocation_bec`] over i.i.d. erasure
/// patterns, normalized by `n`.
pub fn mc_equivocation_bec(pair: &NestedCodePair, erasure: f64, trials: u64, seed: u64) -> Result<EquivocationEstimate> {
    crate::error::check_probability("erasure probability", erasure)?;
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let n = pair.n();
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let erased = erasure_pattern(n, erasure, seed, t);
            let r = exact_equivocation_bec(pair, &erased).expect("pattern indices are in range") as u128;
            (r, r * r)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let (mean, half) = mean_and_half_width(sum, sum_sq, trials);
    Ok(EquivocationEstimate {
        rate: mean / n as f64,
        half_width: half / n as f64,
        trials,
        method: EquivocationMethod::ExactRank,
        erasure: Some(erasure),
    })
}

/// Lower bound on the BI-AWGN(λ) equivocation rate through the embedded
/// erasure channel of rate `2Q(sqrt(2λ))`.
pub fn equivocation_lb_awgn(pair: &NestedCodePair, snr: f64, trials: u64, seed: u64) -> Result<EquivocationEstimate> {
    if !(snr > 0.0 && snr.is_finite()) {
        return Err(Error::invalid(format!("SNR must be positive and finite, got {snr}")));
    }
    let mut est = mc_equivocation_bec(pair, awgn_embedded_erasure(snr), trials, seed)?;
    est.method = EquivocationMethod::DegradationRank;
    Ok(est)
}

/// Lower bound on the BSC(q) equivocation rate through the embedded erasure
/// channel of rate `2q`.
pub fn equivocation_lb_bsc(pair: &NestedCodePair, crossover: f64, trials: u64, seed: u64) -> Result<EquivocationEstimate> {
    if !(0.0..=0.5).contains(&crossover) {
        return Err(Error::invalid(format!("crossover must lie in [0, 1/2], got {crossover}")));
    }
    let mut est = mc_equivocation_bec(pair, 2.0 * crossover, trials, seed)?;
    est.method = EquivocationMethod::DegradationRank;
    Ok(est)
}

/// Outcome of the good-coarse-code pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Approach1Report {
    pub estimate: EquivocationEstimate,
    /// Eavesdropper word errors when decoding inside the known coset.
    pub word_errors: u64,
    pub word_error_rate: f64,
    /// 95% Wilson interval of the word error rate.
    pub wer_interval: (f64, f64),
    /// `1 - C(λ)`: the bound's ceiling.
    pub secrecy_capacity: f64,
}

/// Finite-`n` equivocation lower bound when the coarse code is itself a good
/// code: `max(0, 1 - C(λ) - 1/n - P̂·R1)`, where `P̂` is the BP word error
/// rate of an eavesdropper who knows the message and decodes the dither.
///
/// Each trial draws `w` and a dither, sends `x = D·w + c` over BI-AWGN(λ),
/// flips the LLR signs on the support of `D·w` and runs BP on `C1`; an error
/// is any output other than `c`.
pub fn approach1_equivocation_bound(
    pair: &NestedCodePair,
    snr: f64,
    trials: u64,
    max_bp_iters: usize,
    seed: u64,
) -> Result<Approach1Report> {
    if !(snr >= 0.0 && snr.is_finite()) {
        return Err(Error::invalid(format!("SNR must be finite and non-negative, got {snr}")));
    }
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let decoder = BpDecoder::new(pair.coarse().sparse());
    let m = pair.message_len();
    let word_errors: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let message: Vec<u8> = (0..m).map(|_| rng.random::<bool>() as u8).collect();
            let cw = encode(pair, &message, &mut rng).expect("message length matches");
            let leader = pair.coset_leader(&message).expect("message length matches");
            let z = biawgn_transmit(&modulate(&cw.word), snr, &mut rng).expect("validated SNR");
            let mut llrs = awgn_llr(&z, snr);
            for (l, &b) in llrs.iter_mut().zip(&leader) {
                if b == 1 {
                    *l = -*l;
                }
            }
            let out = decoder.decode(&llrs, max_bp_iters).expect("length n");
            let target = cw.word.iter().zip(&leader).map(|(x, d)| x ^ d);
            let correct = out.success && out.word.iter().copied().eq(target);
            u64::from(!correct)
        })
        .sum();
    let n = pair.n() as f64;
    let p_hat = word_errors as f64 / trials as f64;
    let (lo, hi) = wilson_interval(word_errors, trials, Z95);
    let cap = 1.0 - c_biawgn(snr);
    let r1 = pair.coarse_rate();
    let bound = (cap - 1.0 / n - p_hat * r1).max(0.0);
    Ok(Approach1Report {
        estimate: EquivocationEstimate {
            rate: bound,
            half_width: r1 * (hi - lo) / 2.0,
            trials,
            method: EquivocationMethod::FanoBound,
            erasure: None,
        },
        word_errors,
        word_error_rate: p_hat,
        wer_interval: (lo, hi),
        secrecy_capacity: cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitlinalg::BitMatrix;
    use crate::codes::{regular_ldpc, LinearCode};

    fn bits(x: u32, len: usize) -> Vec<u8> {
        (0..len).map(|i| ((x >> i) & 1) as u8).collect()
    }

    fn rep3_pair() -> NestedCodePair {
        NestedCodePair::from_coarse(LinearCode::from_generator(&"111".parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn encode_with_zero_coarse_code_is_coset_map() {
        let c1 = LinearCode::from_parity_check(&BitMatrix::identity(4)).unwrap();
        let pair = NestedCodePair::from_coarse(c1).unwrap();
        let mut rng = trial_rng(0, 0);
        for x in 0..16 {
            let w = bits(x, 4);
            let cw = encode(&pair, &w, &mut rng).unwrap();
            assert!(cw.dither.is_empty());
            assert_eq!(cw.word, w);
        }
    }

    #[test]
    fn zero_message_zero_dither_is_zero_word() {
        let pair = NestedCodePair::from_coarse(regular_ldpc(12, 2, 3, 1).unwrap()).unwrap();
        let cw = encode_with_dither(&pair, &vec![0; pair.message_len()], &vec![0; pair.coarse_dim()]).unwrap();
        assert!(cw.word.iter().all(|&b| b == 0));
    }

    #[test]
    fn repetition_pair_enumerates_space() {
        let pair = rep3_pair();
        let mut seen = std::collections::HashSet::new();
        for w in 0..4 {
            for d in 0..2 {
                let cw = encode_with_dither(&pair, &bits(w, 2), &bits(d, 1)).unwrap();
                assert_eq!(main_decode(&pair, &cw.word).unwrap(), bits(w, 2));
                assert!(seen.insert(cw.word));
            }
        }
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn round_trip_random() {
        let pair = rep3_pair();
        for seed in 0..3 {
            let mut rng = trial_rng(seed, 0);
            let w: Vec<u8> = (0..2).map(|_| rng.random::<bool>() as u8).collect();
            let cw = encode(&pair, &w, &mut rng).unwrap();
            assert_eq!(main_decode(&pair, &cw.word).unwrap(), w);
        }
        assert_eq!(main_decode(&pair, &[0, 0, 0]).unwrap(), vec![0, 0]);
        assert!(encode(&pair, &[1], &mut trial_rng(0, 0)).is_err());

        let full = NestedCodePair::from_coarse(LinearCode::from_parity_check(&BitMatrix::zeros(1, 3)).unwrap()).unwrap();
        assert!(main_decode(&full, &[1, 0, 1]).unwrap().is_empty());
    }

    #[test]
    fn exact_equivocation_extremes() {
        let pair = NestedCodePair::from_coarse(regular_ldpc(24, 3, 6, 2).unwrap()).unwrap();
        let all: Vec<usize> = (0..24).collect();
        assert_eq!(exact_equivocation_bec(&pair, &all).unwrap(), pair.message_len());
        assert_eq!(exact_equivocation_bec(&pair, &[]).unwrap(), 0);
        // rank through the transpose equals rank of the column restriction
        let some = [0, 3, 5, 7, 11, 20];
        let direct = pair.coarse_check().column_submatrix(&some).unwrap().rank();
        assert_eq!(exact_equivocation_bec(&pair, &some).unwrap(), direct);
        assert!(exact_equivocation_bec(&pair, &[24]).is_err());
    }

    #[test]
    fn repetition_single_erasure_matches_oracle() {
        let pair = rep3_pair();
        let rank = exact_equivocation_bec(&pair, &[0]).unwrap();
        let oracle = brute_force_equivocation(&pair, &crate::channels::ChannelModel::Bec { erasure: 0.5 }).unwrap();
        let pattern = 0b001;
        assert_eq!(oracle.per_pattern.as_ref().unwrap()[pattern], rank as f64);
        assert_eq!(rank, 1);
    }

    #[test]
    fn mc_extremes() {
        let pair = NestedCodePair::from_coarse(regular_ldpc(24, 3, 6, 2).unwrap().dual()).unwrap();
        let full = mc_equivocation_bec(&pair, 1.0, 10, 1).unwrap();
        assert_eq!(full.rate, pair.information_rate());
        assert_eq!(full.half_width, 0.0);
        let none = mc_equivocation_bec(&pair, 0.0, 10, 1).unwrap();
        assert_eq!(none.rate, 0.0);
        assert!(mc_equivocation_bec(&pair, 0.5, 0, 1).is_err());
    }

    #[test]
    fn mc_is_monotone_under_coupling() {
        let pair = NestedCodePair::from_coarse(regular_ldpc(120, 3, 6, 3).unwrap().dual()).unwrap();
        let mut prev = 0.0;
        for i in 0..=20 {
            let eps = i as f64 / 20.0;
            let est = mc_equivocation_bec(&pair, eps, 40, 17).unwrap();
            assert!(est.rate >= prev, "dropped at ε={eps}");
            prev = est.rate;
        }
    }

    #[test]
    fn degradation_bounds_match_bec_at_embedded_rate() {
        let pair = NestedCodePair::from_coarse(regular_ldpc(120, 3, 6, 3).unwrap().dual()).unwrap();
        let awgn = equivocation_lb_awgn(&pair, 0.465, 50, 9).unwrap();
        let bec = mc_equivocation_bec(&pair, awgn_embedded_erasure(0.465), 50, 9).unwrap();
        assert_eq!(awgn.rate.to_bits(), bec.rate.to_bits());
        assert_eq!(awgn.half_width.to_bits(), bec.half_width.to_bits());
        assert_eq!(awgn.method, EquivocationMethod::DegradationRank);

        let bsc = equivocation_lb_bsc(&pair, 0.5, 5, 1).unwrap();
        assert_eq!(bsc.rate, pair.information_rate());
        assert_eq!(equivocation_lb_bsc(&pair, 0.0, 5, 1).unwrap().rate, 0.0);
        assert!(equivocation_lb_bsc(&pair, 0.7, 5, 1).is_err());

        assert!(equivocation_lb_awgn(&pair, 60.0, 5, 1).unwrap().rate < 1e-9);
        let near_zero = equivocation_lb_awgn(&pair, 1e-12, 5, 1).unwrap();
        assert!((near_zero.rate - pair.information_rate()).abs() < 1e-9);
        assert!(equivocation_lb_awgn(&pair, 0.0, 5, 1).is_err());
    }

    #[test]
    fn approach1_bound_properties() {
        let pair = NestedCodePair::from_coarse(regular_ldpc(240, 4, 6, 5).unwrap()).unwrap();
        let n = pair.n() as f64;
        // far above threshold: no errors, bound = 1 - C - 1/n
        let high = approach1_equivocation_bound(&pair, 6.0, 20, 100, 3).unwrap();
        assert_eq!(high.word_errors, 0);
        assert!((high.estimate.rate - (1.0 - c_biawgn(6.0) - 1.0 / n).max(0.0)).abs() < 1e-15);

        // λ = 0: every decode fails and the formula gives 1 - R1 - 1/n.
        let zero = approach1_equivocation_bound(&pair, 0.0, 10, 20, 3).unwrap();
        assert_eq!(zero.word_error_rate, 1.0);
        let expected = (1.0 - 1.0 / n - pair.coarse_rate()).max(0.0);
        assert!((zero.estimate.rate - expected).abs() < 1e-12);

        for snr in [0.2, 0.5, 1.0] {
            let r = approach1_equivocation_bound(&pair, snr, 10, 50, 4).unwrap();
            assert!(r.estimate.rate >= 0.0);
            assert!(r.estimate.rate <= 1.0 - c_biawgn(snr));
        }
    }
}
