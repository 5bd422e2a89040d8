//! Binary linear codes, LDPC ensembles, nested coset pairs and alist files.

mod alist;
mod ensemble;
mod nested;

pub use alist::{parse_alist, read_alist, to_alist_string, write_alist};
pub use ensemble::{ldpc_from_degree_distribution, regular_ldpc, DegreeDistribution};
pub use nested::NestedCodePair;

use crate::bitlinalg::BitMatrix;
use crate::error::{Error, Result};

/// Parity checks as index lists, in both directions. This is the view the
/// iterative decoders walk; it keeps every check row as supplied, including
/// linearly dependent ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseParityCheck {
    n: usize,
    check_to_vars: Vec<Vec<usize>>,
    var_to_checks: Vec<Vec<usize>>,
}

impl SparseParityCheck {
    pub fn from_checks(n: usize, check_to_vars: Vec<Vec<usize>>) -> Result<Self> {
        let mut var_to_checks = vec![Vec::new(); n];
        for (c, vars) in check_to_vars.iter().enumerate() {
            for &v in vars {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, bound: n });
                }
                var_to_checks[v].push(c);
            }
        }
        Ok(SparseParityCheck {
            n,
            check_to_vars,
            var_to_checks,
        })
    }

    pub fn from_dense(h: &BitMatrix) -> Self {
        let checks = (0..h.rows()).map(|r| h.row_support(r)).collect();
        // supports come from the matrix itself, so indices are in range
        Self::from_checks(h.cols(), checks).expect("supports within matrix width")
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut h = BitMatrix::zeros(self.check_to_vars.len(), self.n);
        for (c, vars) in self.check_to_vars.iter().enumerate() {
            for &v in vars {
                let cur = h.get(c, v);
                h.set(c, v, !cur);
            }
        }
        h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_checks(&self) -> usize {
        self.check_to_vars.len()
    }

    pub fn num_edges(&self) -> usize {
        self.check_to_vars.iter().map(Vec::len).sum()
    }

    pub fn check(&self, c: usize) -> &[usize] {
        &self.check_to_vars[c]
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.check_to_vars
    }

    pub fn var(&self, v: usize) -> &[usize] {
        &self.var_to_checks[v]
    }

    pub fn vars(&self) -> &[Vec<usize>] {
        &self.var_to_checks
    }

    /// True when `word` satisfies every check.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        self.check_to_vars
            .iter()
            .all(|vars| vars.iter().fold(0u8, |acc, &v| acc ^ (word[v] & 1)) == 0)
    }
}

/// A binary linear code of length `n` and dimension `k`.
///
/// `h` is a full-row-rank parity-check matrix (a maximal independent subset of
/// the supplied check rows), `g` a generator matrix. The sparse view retains
/// the check rows exactly as supplied.
#[derive(Debug, Clone)]
pub struct LinearCode {
    n: usize,
    k: usize,
    h: BitMatrix,
    g: BitMatrix,
    sparse: SparseParityCheck,
    ensemble: Option<DegreeDistribution>,
}

impl LinearCode {
    /// Builds the code `{x : H·x = 0}`. Dependent rows of `H` are dropped from
    /// the dense parity-check view; `k` is computed from the rank.
    pub fn from_parity_check(h: &BitMatrix) -> Result<Self> {
        if h.cols() == 0 {
            return Err(Error::invalid("a code needs block length n >= 1"));
        }
        let sparse = SparseParityCheck::from_dense(h);
        Ok(Self::from_sparse_and_dense(sparse, h))
    }

    /// Builds a code from sparse check rows (duplicate indices within a row cancel).
    pub fn from_sparse(sparse: SparseParityCheck) -> Result<Self> {
        if sparse.n() == 0 {
            return Err(Error::invalid("a code needs block length n >= 1"));
        }
        let dense = sparse.to_dense();
        Ok(Self::from_sparse_and_dense(sparse, &dense))
    }

    fn from_sparse_and_dense(sparse: SparseParityCheck, dense: &BitMatrix) -> Self {
        let keep = independent_rows(dense);
        let h = dense.row_submatrix(&keep).expect("indices from the matrix itself");
        let g = h.nullspace_basis();
        LinearCode {
            n: dense.cols(),
            k: g.rows(),
            h,
            g,
            sparse,
            ensemble: None,
        }
    }

    /// Builds the code spanned by the rows of `g` (dependent rows are dropped).
    pub fn from_generator(g: &BitMatrix) -> Result<Self> {
        if g.cols() == 0 {
            return Err(Error::invalid("a code needs block length n >= 1"));
        }
        let keep = independent_rows(g);
        let g = g.row_submatrix(&keep)?;
        let h = g.nullspace_basis();
        Ok(LinearCode {
            n: g.cols(),
            k: g.rows(),
            sparse: SparseParityCheck::from_dense(&h),
            h,
            g,
            ensemble: None,
        })
    }

    /// The dual code: generated by this code's parity checks.
    pub fn dual(&self) -> LinearCode {
        LinearCode {
            n: self.n,
            k: self.n - self.k,
            h: self.g.clone(),
            g: self.h.clone(),
            sparse: SparseParityCheck::from_dense(&self.g),
            ensemble: None,
        }
    }

    pub(crate) fn with_ensemble(mut self, dd: DegreeDistribution) -> Self {
        self.ensemble = Some(dd);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Full-row-rank parity-check matrix, `(n - k) x n`.
    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    /// Generator matrix, `k x n`.
    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    /// Check rows as supplied at construction.
    pub fn sparse(&self) -> &SparseParityCheck {
        &self.sparse
    }

    pub fn ensemble(&self) -> Option<&DegreeDistribution> {
        self.ensemble.as_ref()
    }

    /// Same set of codewords.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.k == other.k && self.g.same_row_space(&other.g)
    }

    /// `uᵀ·G` for a `k`-bit information word.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        self.g.vec_mat(info)
    }
}

/// Indices of a maximal linearly independent subset of the rows, chosen
/// greedily in row order.
fn independent_rows(m: &BitMatrix) -> Vec<usize> {
    // Echelon basis sorted by pivot; every basis row is zero left of its pivot.
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut keep = Vec::new();
    for r in 0..m.rows() {
        let mut row = m.row_words(r).to_vec();
        for (pivot, b) in &basis {
            let w = pivot / 64;
            if (row[w] >> (pivot % 64)) & 1 == 1 {
                for (x, y) in row[w..].iter_mut().zip(&b[w..]) {
                    *x ^= y;
                }
            }
        }
        if let Some(pivot) = lowest_set_bit(&row) {
            let at = basis.partition_point(|(p, _)| *p < pivot);
            basis.insert(at, (pivot, row));
            keep.push(r);
        }
    }
    keep
}

fn lowest_set_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}
