//! Eavesdropper-side decoders: peeling on the erasure channel and log-domain
//! sum-product on the BI-AWGN channel.

use crate::channels::ErasureSymbol;
use crate::codes::SparseParityCheck;
use crate::error::{Error, Result};

/// Largest |tanh(m/2)| fed to `atanh`; caps check messages near ±36.
const TANH_CLAMP: f64 = 1.0 - 1e-15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelingOutcome {
    /// Recovered bits; `None` where an erasure could not be resolved.
    pub word: Vec<Option<u8>>,
    pub success: bool,
}

impl PeelingOutcome {
    pub fn bits(&self) -> Option<Vec<u8>> {
        self.word.iter().copied().collect()
    }
}

/// Resolves erasures through checks that have exactly one erased neighbour.
///
/// Unerased positions are never changed. If the known values violate a check
/// whose neighbours are all known, the observation is rejected.
pub fn peeling_decode_bec(h: &SparseParityCheck, received: &[ErasureSymbol]) -> Result<PeelingOutcome> {
    if received.len() != h.n() {
        return Err(Error::DimensionMismatch {
            context: "peeling decoder input",
            expected: h.n(),
            found: received.len(),
        });
    }
    let mut word: Vec<Option<u8>> = received.iter().map(|s| s.bit()).collect();
    let mut unknown = vec![0usize; h.num_checks()];
    let mut parity = vec![0u8; h.num_checks()];
    let mut ready = Vec::new();
    for (c, vars) in h.checks().iter().enumerate() {
        for &v in vars {
            match word[v] {
                Some(b) => parity[c] ^= b,
                None => unknown[c] += 1,
            }
        }
        match unknown[c] {
            0 if parity[c] != 0 => return Err(Error::InconsistentObservation { check: c }),
            1 => ready.push(c),
            _ => {}
        }
    }
    while let Some(c) = ready.pop() {
        if unknown[c] != 1 {
            continue;
        }
        let v = *h.check(c).iter().find(|&&v| word[v].is_none()).expect("one unknown neighbour");
        let value = parity[c];
        word[v] = Some(value);
        for &c2 in h.var(v) {
            unknown[c2] -= 1;
            parity[c2] ^= value;
            match unknown[c2] {
                0 if parity[c2] != 0 => return Err(Error::InconsistentObservation { check: c2 }),
                1 => ready.push(c2),
                _ => {}
            }
        }
    }
    let success = word.iter().all(Option::is_some);
    Ok(PeelingOutcome { word, success })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BpOutcome {
    pub word: Vec<u8>,
    /// All checks satisfied and no posterior LLR exactly zero.
    pub success: bool,
    pub iterations: usize,
}

/// Flooding sum-product decoder over a fixed Tanner graph. Messages are LLRs
/// `log p(0)/p(1)`.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    n: usize,
    /// Edge `e` of check `c` lives at `check_start[c]..check_start[c + 1]`.
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_edges: Vec<Vec<usize>>,
}

impl BpDecoder {
    pub fn new(h: &SparseParityCheck) -> Self {
        let mut check_start = Vec::with_capacity(h.num_checks() + 1);
        let mut edge_var = Vec::with_capacity(h.num_edges());
        let mut var_edges = vec![Vec::new(); h.n()];
        check_start.push(0);
        for vars in h.checks() {
            for &v in vars {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_start.push(edge_var.len());
        }
        BpDecoder {
            n: h.n(),
            check_start,
            edge_var,
            var_edges,
        }
    }

    fn syndrome_ok(&self, word: &[u8]) -> bool {
        self.check_start.windows(2).all(|w| {
            self.edge_var[w[0]..w[1]].iter().fold(0u8, |acc, &v| acc ^ word[v]) == 0
        })
    }

    pub fn decode(&self, llrs: &[f64], max_iters: usize) -> Result<BpOutcome> {
        if llrs.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "BP decoder input",
                expected: self.n,
                found: llrs.len(),
            });
        }
        let hard = |totals: &[f64]| -> (Vec<u8>, bool) {
            let decided = totals.iter().all(|&t| t != 0.0);
            (totals.iter().map(|&t| (t < 0.0) as u8).collect(), decided)
        };
        let (mut word, mut decided) = hard(llrs);
        if decided && self.syndrome_ok(&word) {
            return Ok(BpOutcome {
                word,
                success: true,
                iterations: 0,
            });
        }
        let edges = self.edge_var.len();
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| llrs[v]).collect();
        let mut c2v = vec![0.0f64; edges];
        let mut totals = llrs.to_vec();
        let mut scratch = Vec::new();
        for iter in 1..=max_iters {
            for w in self.check_start.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                scratch.clear();
                scratch.extend(v2c[lo..hi].iter().map(|&m| (0.5 * m).tanh()));
                // exclusive products via a forward pass then a backward pass
                let mut forward = 1.0;
                for (k, e) in (lo..hi).enumerate() {
                    c2v[e] = forward;
                    forward *= scratch[k];
                }
                let mut backward = 1.0;
                for (k, e) in (lo..hi).enumerate().rev() {
                    let p = (c2v[e] * backward).clamp(-TANH_CLAMP, TANH_CLAMP);
                    c2v[e] = 2.0 * p.atanh();
                    backward *= scratch[k];
                }
            }
            for (v, es) in self.var_edges.iter().enumerate() {
                let total = llrs[v] + es.iter().map(|&e| c2v[e]).sum::<f64>();
                totals[v] = total;
                for &e in es {
                    v2c[e] = total - c2v[e];
                }
            }
            (word, decided) = hard(&totals);
            if decided && self.syndrome_ok(&word) {
                return Ok(BpOutcome {
                    word,
                    success: true,
                    iterations: iter,
                });
            }
        }
        Ok(BpOutcome {
            word,
            success: false,
            iterations: max_iters,
        })
    }
}

/// One-shot convenience wrapper around [`BpDecoder`].
pub fn bp_decode_awgn(h: &SparseParityCheck, llrs: &[f64], max_iters: usize) -> Result<BpOutcome> {
    BpDecoder::new(h).decode(llrs, max_iters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{awgn_llr, biawgn_transmit, modulate};
    use crate::codes::regular_ldpc;
    use crate::seeding::trial_rng;

    fn sym(bits: &[u8]) -> Vec<ErasureSymbol> {
        modulate(bits).into_iter().map(ErasureSymbol::from_symbol).collect()
    }

    #[test]
    fn peeling_no_erasures() {
        let code = regular_ldpc(6, 2, 3, 4).unwrap();
        let cw = code.encode(&vec![1; code.k()]).unwrap();
        let out = peeling_decode_bec(code.sparse(), &sym(&cw)).unwrap();
        assert!(out.success);
        assert_eq!(out.bits().unwrap(), cw);
    }

    #[test]
    fn peeling_all_erased_fails() {
        let code = regular_ldpc(6, 2, 3, 4).unwrap();
        assert!(code.k() >= 1);
        let out = peeling_decode_bec(code.sparse(), &[ErasureSymbol::Erased; 6]).unwrap();
        assert!(!out.success);
        assert!(out.word.iter().all(Option::is_none));
    }

    #[test]
    fn peeling_single_erasure_forced_by_parity() {
        let code = regular_ldpc(6, 2, 3, 4).unwrap();
        let info: Vec<u8> = (0..code.k()).map(|i| (i % 2) as u8).collect();
        let cw = code.encode(&info).unwrap();
        for pos in 0..6 {
            let mut rx = sym(&cw);
            rx[pos] = ErasureSymbol::Erased;
            let out = peeling_decode_bec(code.sparse(), &rx).unwrap();
            assert!(out.success);
            // every position has degree 2, so a check covers it with a single unknown
            let c = code.sparse().var(pos)[0];
            let forced = code.sparse().check(c).iter().filter(|&&v| v != pos).fold(0, |a, &v| a ^ cw[v]);
            assert_eq!(out.word[pos], Some(forced));
            assert_eq!(out.bits().unwrap(), cw);
        }
    }

    #[test]
    fn peeling_rejects_inconsistent_observation() {
        let code = regular_ldpc(6, 2, 3, 4).unwrap();
        let mut bad = vec![0u8; 6];
        bad[0] = 1;
        let err = peeling_decode_bec(code.sparse(), &sym(&bad)).unwrap_err();
        assert!(matches!(err, Error::InconsistentObservation { .. }));
    }

    #[test]
    fn peeling_never_alters_known_positions() {
        let code = regular_ldpc(60, 3, 6, 2).unwrap();
        let cw = code.encode(&vec![1; code.k()]).unwrap();
        let mut rx = sym(&cw);
        for i in (0..60).step_by(3) {
            rx[i] = ErasureSymbol::Erased;
        }
        let out = peeling_decode_bec(code.sparse(), &rx).unwrap();
        for (i, s) in rx.iter().enumerate() {
            if let Some(b) = s.bit() {
                assert_eq!(out.word[i], Some(b));
            }
        }
    }

    #[test]
    fn bp_strong_llrs_succeed_immediately() {
        let code = regular_ldpc(96, 3, 6, 8).unwrap();
        let cw = code.encode(&(0..code.k()).map(|i| (i % 3 == 0) as u8).collect::<Vec<_>>()).unwrap();
        let llrs: Vec<f64> = cw.iter().map(|&b| if b == 0 { 1e6 } else { -1e6 }).collect();
        let out = bp_decode_awgn(code.sparse(), &llrs, 50).unwrap();
        assert!(out.success);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.word, cw);
    }

    #[test]
    fn bp_zero_llrs_fail() {
        let code = regular_ldpc(96, 3, 6, 8).unwrap();
        let out = bp_decode_awgn(code.sparse(), &[0.0; 96], 20).unwrap();
        assert!(!out.success);
        assert!(bp_decode_awgn(code.sparse(), &[0.0; 5], 20).is_err());
    }

    #[test]
    fn bp_corrects_noise_well_above_threshold() {
        let code = regular_ldpc(2000, 3, 6, 1).unwrap();
        let dec = BpDecoder::new(code.sparse());
        let x = modulate(&vec![0u8; 2000]);
        let mut ok = 0;
        for t in 0..20 {
            let z = biawgn_transmit(&x, 1.5, &mut trial_rng(77, t)).unwrap();
            let out = dec.decode(&awgn_llr(&z, 1.5), 200).unwrap();
            if out.success && out.word.iter().all(|&b| b == 0) {
                ok += 1;
            }
        }
        assert_eq!(ok, 20);
    }
}
