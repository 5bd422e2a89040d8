use proptest::prelude::*;

use wiretap_core::bitlinalg::BitMatrix;
use wiretap_core::channels::ChannelModel;
use wiretap_core::codes::{LinearCode, NestedCodePair};
use wiretap_core::codes::DegreeDistribution;
use wiretap_core::secrecy::{brute_force_equivocation, encode_with_dither, exact_equivocation_bec, main_decode, mc_equivocation_bec};
use wiretap_core::thresholds::{de_residual, DE_MAX_ITER, DE_TOLERANCE};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
            .prop_map(move |rows| BitMatrix::from_rows_with_cols(&rows, c).unwrap())
    })
}

fn pair(max_n: usize) -> impl Strategy<Value = NestedCodePair> {
    matrix(max_n, max_n).prop_map(|h| NestedCodePair::from_coarse(LinearCode::from_parity_check(&h).unwrap()).unwrap())
}

fn bits(x: u32, len: usize) -> Vec<u8> {
    (0..len).map(|i| ((x >> i) & 1) as u8).collect()
}

/// Gaussian elimination on rows stored as u128 masks.
fn naive_rank(m: &BitMatrix) -> usize {
    let mut rows: Vec<u128> = (0..m.rows())
        .map(|r| m.row_support(r).iter().fold(0u128, |acc, &c| acc | 1 << c))
        .collect();
    let mut rank = 0;
    for bit in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(m in matrix(64, 64)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank(), naive_rank(&m));
    }

    #[test]
    fn rank_nullity(m in matrix(40, 90)) {
        let null = m.nullspace_basis();
        prop_assert_eq!(null.rows() + m.rank(), m.cols());
        prop_assert_eq!(null.rank(), null.rows());
        prop_assert!(m.mul(&null.transpose()).unwrap().is_zero());
    }

    #[test]
    fn rref_is_idempotent(m in matrix(30, 70)) {
        let once = m.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.pivots, twice.pivots);
        prop_assert!(once.matrix.same_row_space(&m));
    }

    #[test]
    fn right_inverse_when_full_row_rank(m in matrix(20, 70)) {
        let inv = m.right_inverse();
        if m.rank() == m.rows() {
            prop_assert_eq!(m.mul(&inv.unwrap()).unwrap(), BitMatrix::identity(m.rows()));
        } else {
            prop_assert!(inv.is_err());
        }
    }

    #[test]
    fn generator_is_orthogonal_to_checks(h in matrix(20, 40)) {
        let code = LinearCode::from_parity_check(&h).unwrap();
        prop_assert!(code.parity_check().mul(&code.generator().transpose()).unwrap().is_zero());
        prop_assert_eq!(code.k() + h.rank(), code.n());
        let back = code.dual().dual();
        prop_assert!(back.same_code(&code));
        prop_assert_eq!(code.dual().k(), code.n() - code.k());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cosets_partition_the_space(p in pair(12)) {
        let n = p.n();
        let (m, k1) = (p.message_len(), p.coarse_dim());
        let mut seen = vec![false; 1 << n];
        for w in 0..1u32 << m {
            for d in 0..1u32 << k1 {
                let cw = encode_with_dither(&p, &bits(w, m), &bits(d, k1)).unwrap();
                let idx = cw.word.iter().enumerate().fold(0usize, |acc, (i, &b)| acc | (b as usize) << i);
                prop_assert!(!seen[idx]);
                seen[idx] = true;
                prop_assert_eq!(main_decode(&p, &cw.word).unwrap(), bits(w, m));
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn rank_identity_against_enumeration(p in pair(10)) {
        let oracle = brute_force_equivocation(&p, &ChannelModel::Bec { erasure: 0.5 }).unwrap();
        let per = oracle.per_pattern.unwrap();
        for (pattern, &h) in per.iter().enumerate() {
            let erased: Vec<usize> = (0..p.n()).filter(|i| pattern >> i & 1 == 1).collect();
            let rank = exact_equivocation_bec(&p, &erased).unwrap();
            prop_assert!(rank <= p.message_len().min(erased.len()));
            prop_assert_eq!(h, rank as f64);
        }
    }

    #[test]
    fn mc_equivocation_is_monotone_in_erasure(p in pair(24), seed in any::<u64>()) {
        let mut prev = 0.0;
        for i in 0..=10 {
            let est = mc_equivocation_bec(&p, i as f64 / 10.0, 16, seed).unwrap();
            prop_assert!(est.rate >= prev);
            prop_assert!(est.rate <= p.information_rate());
            prop_assert!(est.half_width >= 0.0);
            prev = est.rate;
        }
    }

    #[test]
    fn de_residual_is_monotone(dv in 2usize..6, extra in 1usize..6) {
        let dd = DegreeDistribution::regular(dv, dv + extra).unwrap();
        let mut prev = 0.0;
        for i in 0..=100 {
            let r = de_residual(i as f64 / 100.0, &dd, DE_TOLERANCE, DE_MAX_ITER);
            prop_assert!(r >= prev - 1e-7);
            prev = r;
        }
    }
}
