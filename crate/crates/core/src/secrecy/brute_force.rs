//! Exhaustive `H(W | Z)` for short codes.
//!
//! The joint law of `(W, Z)` is built by running the coset encoder over every
//! message and dither and pushing each word through every channel outcome.
//! Nothing here uses ranks, so it can check the rank-based estimators.

use super::encode_with_dither;
use crate::channels::ChannelModel;
use crate::codes::NestedCodePair;
use crate::error::{Error, Result};

pub const BEC_EXHAUSTIVE_LIMIT: usize = 12;
pub const BSC_EXHAUSTIVE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceEquivocation {
    /// `H(W | Z)` in bits, averaged over the channel.
    pub bits: f64,
    /// Erasure channel only: `H(W | Z, E = e)` for every pattern `e`,
    /// indexed by the bitmask of erased positions.
    pub per_pattern: Option<Vec<f64>>,
}

fn bits_of(x: u32, len: usize) -> Vec<u8> {
    (0..len).map(|i| ((x >> i) & 1) as u8).collect()
}

fn pack(word: &[u8]) -> u32 {
    word.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as u32) << i))
}

/// Every transmitted word as `(message index, word bitmask)`, one entry per
/// (message, dither) pair.
fn codebook(pair: &NestedCodePair) -> Vec<(u32, u32)> {
    let (m, k1) = (pair.message_len(), pair.coarse_dim());
    let mut out = Vec::with_capacity(1 << (m + k1));
    for w in 0..1u32 << m {
        let message = bits_of(w, m);
        for d in 0..1u32 << k1 {
            let cw = encode_with_dither(pair, &message, &bits_of(d, k1)).expect("lengths match");
            out.push((w, pack(&cw.word)));
        }
    }
    out
}

fn entropy_of_counts(counts: impl Iterator<Item = u64>, total: u64) -> f64 {
    let t = total as f64;
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

pub fn brute_force_equivocation(pair: &NestedCodePair, ch: &ChannelModel) -> Result<BruteForceEquivocation> {
    ch.validate()?;
    let n = pair.n();
    match *ch {
        ChannelModel::Bec { erasure } => {
            if n > BEC_EXHAUSTIVE_LIMIT {
                return Err(Error::ExhaustiveLimit { n, limit: BEC_EXHAUSTIVE_LIMIT });
            }
            let book = codebook(pair);
            let full = (1u32 << n) - 1;
            let mut per_pattern = Vec::with_capacity(1 << n);
            let mut keys: Vec<u64> = Vec::with_capacity(book.len());
            for pattern in 0..1u32 << n {
                let visible = full & !pattern;
                keys.clear();
                keys.extend(book.iter().map(|&(w, x)| (((x & visible) as u64) << 32) | w as u64));
                keys.sort_unstable();
                per_pattern.push(conditional_entropy_sorted(&keys));
            }
            let bits = per_pattern
                .iter()
                .enumerate()
                .map(|(pattern, h)| {
                    let e = (pattern as u32).count_ones() as i32;
                    erasure.powi(e) * (1.0 - erasure).powi(n as i32 - e) * h
                })
                .sum();
            Ok(BruteForceEquivocation {
                bits,
                per_pattern: Some(per_pattern),
            })
        }
        ChannelModel::Bsc { crossover } => {
            if n > BSC_EXHAUSTIVE_LIMIT {
                return Err(Error::ExhaustiveLimit { n, limit: BSC_EXHAUSTIVE_LIMIT });
            }
            let book = codebook(pair);
            let messages = 1usize << pair.message_len();
            let p_word = 1.0 / book.len() as f64;
            let mut bits = 0.0;
            let mut joint = vec![0.0f64; messages];
            for z in 0..1u32 << n {
                joint.iter_mut().for_each(|p| *p = 0.0);
                for &(w, x) in &book {
                    let flips = (x ^ z).count_ones() as i32;
                    joint[w as usize] += p_word * crossover.powi(flips) * (1.0 - crossover).powi(n as i32 - flips);
                }
                let pz: f64 = joint.iter().sum();
                if pz > 0.0 {
                    bits += joint
                        .iter()
                        .filter(|&&p| p > 0.0)
                        .map(|&p| -p * (p / pz).log2())
                        .sum::<f64>();
                }
            }
            Ok(BruteForceEquivocation { bits, per_pattern: None })
        }
        ChannelModel::BiAwgn { .. } => Err(Error::invalid(
            "exhaustive equivocation is defined only for the erasure and binary symmetric channels",
        )),
    }
}

/// `H(W | Z)` from sorted `(z << 32 | w)` keys, all words equally likely.
fn conditional_entropy_sorted(keys: &[u64]) -> f64 {
    let total = keys.len() as u64;
    let mut h = 0.0;
    let mut i = 0;
    while i < keys.len() {
        let z = keys[i] >> 32;
        let mut j = i;
        let mut counts = Vec::new();
        while j < keys.len() && keys[j] >> 32 == z {
            let w = keys[j];
            let mut c = 0;
            while j < keys.len() && keys[j] == w {
                c += 1;
                j += 1;
            }
            counts.push(c);
        }
        let group = (j - i) as u64;
        h += group as f64 / total as f64 * entropy_of_counts(counts.into_iter(), group);
        i = j;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitlinalg::BitMatrix;
    use crate::codes::LinearCode;
    use crate::secrecy::exact_equivocation_bec;

    fn pair(h: &str) -> NestedCodePair {
        NestedCodePair::from_coarse(LinearCode::from_parity_check(&h.parse::<BitMatrix>().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn single_message_has_zero_equivocation() {
        let full = NestedCodePair::from_coarse(LinearCode::from_parity_check(&BitMatrix::zeros(1, 4)).unwrap()).unwrap();
        let r = brute_force_equivocation(&full, &ChannelModel::Bec { erasure: 0.7 }).unwrap();
        assert_eq!(r.bits, 0.0);
        let r = brute_force_equivocation(&full, &ChannelModel::Bsc { crossover: 0.2 }).unwrap();
        assert!(r.bits.abs() < 1e-12);
    }

    #[test]
    fn full_erasure_leaves_all_message_bits() {
        let p = pair("1100 0111");
        let r = brute_force_equivocation(&p, &ChannelModel::Bec { erasure: 1.0 }).unwrap();
        assert!((r.bits - p.message_len() as f64).abs() < 1e-12);
        let r = brute_force_equivocation(&p, &ChannelModel::Bsc { crossover: 0.5 }).unwrap();
        assert!((r.bits - p.message_len() as f64).abs() < 1e-12);
    }

    #[test]
    fn repetition_pair_patterns_equal_rank() {
        let rep = NestedCodePair::from_coarse(LinearCode::from_generator(&"111".parse().unwrap()).unwrap()).unwrap();
        let r = brute_force_equivocation(&rep, &ChannelModel::Bec { erasure: 0.3 }).unwrap();
        let per = r.per_pattern.unwrap();
        assert_eq!(per.len(), 8);
        for (pattern, &h) in per.iter().enumerate() {
            let erased: Vec<usize> = (0..3).filter(|i| pattern >> i & 1 == 1).collect();
            assert_eq!(h, exact_equivocation_bec(&rep, &erased).unwrap() as f64);
        }
    }

    #[test]
    fn bsc_noiseless_reveals_message() {
        let p = pair("1100 0111");
        let r = brute_force_equivocation(&p, &ChannelModel::Bsc { crossover: 0.0 }).unwrap();
        assert!(r.bits.abs() < 1e-12);
    }

    #[test]
    fn refuses_large_or_continuous() {
        let big = NestedCodePair::from_coarse(LinearCode::from_parity_check(&BitMatrix::identity(13)).unwrap()).unwrap();
        assert!(matches!(
            brute_force_equivocation(&big, &ChannelModel::Bec { erasure: 0.5 }),
            Err(Error::ExhaustiveLimit { n: 13, limit: 12 })
        ));
        let mid = NestedCodePair::from_coarse(LinearCode::from_parity_check(&BitMatrix::identity(11)).unwrap()).unwrap();
        assert!(matches!(
            brute_force_equivocation(&mid, &ChannelModel::Bsc { crossover: 0.1 }),
            Err(Error::ExhaustiveLimit { n: 11, limit: 10 })
        ));
        let small = pair("11");
        assert!(brute_force_equivocation(&small, &ChannelModel::BiAwgn { snr: 1.0 }).is_err());
    }
}
