use super::LinearCode;
use crate::bitlinalg::BitMatrix;
use crate::error::Result;

/// Nested pair `C1 ⊆ C0 = {0,1}^n`.
///
/// Messages are `m = n - k1` bit words; message `w` is carried by the coset
/// `D·w + C1`, where `D` is a right inverse of the coarse code's parity-check
/// matrix `H1`. Decoding the coset is then `w = H1·x`.
#[derive(Debug, Clone)]
pub struct NestedCodePair {
    coarse: LinearCode,
    coset_map: BitMatrix,
    coarse_check_t: BitMatrix,
}

impl NestedCodePair {
    pub fn from_coarse(coarse: LinearCode) -> Result<Self> {
        let coset_map = coarse.parity_check().right_inverse()?;
        let coarse_check_t = coarse.parity_check().transpose();
        Ok(NestedCodePair {
            coarse,
            coset_map,
            coarse_check_t,
        })
    }

    pub fn n(&self) -> usize {
        self.coarse.n()
    }

    /// `m = n - k1`
    pub fn message_len(&self) -> usize {
        self.coarse.n() - self.coarse.k()
    }

    /// `k1`, the number of dither bits.
    pub fn coarse_dim(&self) -> usize {
        self.coarse.k()
    }

    /// `R0 - R1 = m / n` with `R0 = 1`.
    pub fn information_rate(&self) -> f64 {
        self.message_len() as f64 / self.n() as f64
    }

    pub fn coarse_rate(&self) -> f64 {
        self.coarse.rate()
    }

    pub fn coarse(&self) -> &LinearCode {
        &self.coarse
    }

    /// `H1`, `m x n`.
    pub fn coarse_check(&self) -> &BitMatrix {
        self.coarse.parity_check()
    }

    /// `H1ᵀ`, `n x m`; row `i` is column `i` of `H1`.
    pub fn coarse_check_transposed(&self) -> &BitMatrix {
        &self.coarse_check_t
    }

    /// `D`, `n x m`, with `H1·D = I`.
    pub fn coset_map(&self) -> &BitMatrix {
        &self.coset_map
    }

    /// Coset leader `D·w`.
    pub fn coset_leader(&self, message: &[u8]) -> Result<Vec<u8>> {
        self.coset_map.mat_vec(message)
    }
}
