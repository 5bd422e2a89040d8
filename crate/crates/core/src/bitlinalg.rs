//! Dense GF(2) linear algebra over bit-packed matrices.
//!
//! Rows are stored as runs of `u64` words, 64 columns per word, least
//! significant bit first. Bits past `cols` in the last word of a row are kept
//! at zero so that word-level comparisons and popcounts are exact.
//!
//! Every public operation leaves its inputs untouched; elimination always
//! happens on a private copy.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Packs a slice of 0/1 values into words.
pub fn pack_bits(bits: &[u8]) -> Vec<u64> {
    let mut words = vec![0u64; words_for(bits.len())];
    for (i, &b) in bits.iter().enumerate() {
        if b & 1 == 1 {
            words[i / WORD] |= 1 << (i % WORD);
        }
    }
    words
}

/// Inverse of [`pack_bits`].
pub fn unpack_bits(words: &[u64], len: usize) -> Vec<u8> {
    (0..len)
        .map(|i| ((words[i / WORD] >> (i % WORD)) & 1) as u8)
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`BitMatrix::from_rows`] but with an explicit column count, so an
    /// empty row list still has a shape.
    pub fn from_rows_with_cols<R: AsRef<[u8]>>(rows: &[R], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "row length",
                    expected: cols,
                    found: r.len(),
                });
            }
            m.row_words_mut(i).copy_from_slice(&pack_bits(r));
        }
        Ok(m)
    }

    /// Builds a matrix whose rows have ones at the listed column positions.
    pub fn from_row_supports<S: AsRef<[usize]>>(rows: &[S], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, support) in rows.iter().enumerate() {
            for &c in support.as_ref() {
                if c >= cols {
                    return Err(Error::IndexOutOfRange { index: c, bound: cols });
                }
                m.set(i, c, true);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.words[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) outside {}x{}", self.rows, self.cols);
        let w = &mut self.words[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        unpack_bits(self.row_words(r), self.cols)
    }

    /// Column indices of the ones in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.row_words(r).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn column_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let support = self.row_support(r);
            let dst = out.row_words_mut(r);
            for k in support {
                for (d, s) in dst.iter_mut().zip(rhs.row_words(k)) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    /// `M · v` for a column vector `v` of 0/1 values.
    pub fn mat_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        let packed = pack_bits(v);
        Ok((0..self.rows)
            .map(|r| {
                let ones: u32 = self
                    .row_words(r)
                    .iter()
                    .zip(&packed)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                (ones & 1) as u8
            })
            .collect())
    }

    /// `vᵀ · M`: the GF(2) sum of the rows selected by `v`.
    pub fn vec_mat(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "vector-matrix product",
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut acc = vec![0u64; self.stride];
        for (r, &bit) in v.iter().enumerate() {
            if bit & 1 == 1 {
                for (a, w) in acc.iter_mut().zip(self.row_words(r)) {
                    *a ^= w;
                }
            }
        }
        Ok(unpack_bits(&acc, self.cols))
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        let mut work = self.words.clone();
        let stride = self.stride;
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let w = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (rank..self.rows).find(|&i| work[i * stride + w] & mask != 0) else {
                continue;
            };
            swap_rows(&mut work, stride, rank, p);
            // Columns before `c` are never read again, so the xor can start at word `w`.
            for i in rank + 1..self.rows {
                if work[i * stride + w] & mask != 0 {
                    xor_rows(&mut work, stride, rank, i, w);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> Rref {
        let mut matrix = self.clone();
        let pivots = matrix.eliminate(self.cols);
        Rref { matrix, pivots }
    }

    /// Full Gauss-Jordan elimination in place, restricted to pivots among the
    /// first `col_limit` columns. Rows move; pivot rows end up first.
    fn eliminate(&mut self, col_limit: usize) -> Vec<usize> {
        let stride = self.stride;
        let mut pivots = Vec::new();
        for c in 0..col_limit {
            let r = pivots.len();
            if r == self.rows {
                break;
            }
            let w = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (r..self.rows).find(|&i| self.words[i * stride + w] & mask != 0) else {
                continue;
            };
            swap_rows(&mut self.words, stride, r, p);
            for i in 0..self.rows {
                if i != r && self.words[i * stride + w] & mask != 0 {
                    xor_rows(&mut self.words, stride, r, i, 0);
                }
            }
            pivots.push(c);
        }
        pivots
    }

    /// Basis of `{v : M·v = 0}`, one basis vector per row.
    pub fn nullspace_basis(&self) -> BitMatrix {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (b, &f) in free.iter().enumerate() {
            basis.set(b, f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if matrix.get(i, f) {
                    basis.set(b, p, true);
                }
            }
        }
        basis
    }

    /// Returns `D` (cols × rows) with `M · D = I`. Requires full row rank.
    pub fn right_inverse(&self) -> Result<BitMatrix> {
        let (m, n) = (self.rows, self.cols);
        let mut aug = BitMatrix::zeros(m, n + m);
        for r in 0..m {
            for c in self.row_support(r) {
                aug.set(r, c, true);
            }
            aug.set(r, n + r, true);
        }
        let pivots = aug.eliminate(n);
        if pivots.len() < m {
            return Err(Error::RankDeficient {
                rank: pivots.len(),
                required: m,
            });
        }
        // aug = [R | T] with T·M = R; R has identity columns at the pivots, so
        // placing row i of T at row pivots[i] of D gives R·D = T, hence M·D = I.
        let mut d = BitMatrix::zeros(n, m);
        for (i, &p) in pivots.iter().enumerate() {
            for c in aug.row_support(i) {
                if c >= n {
                    d.set(p, c - n, true);
                }
            }
        }
        Ok(d)
    }

    /// Selects the listed columns, in order.
    pub fn column_submatrix(&self, cols: &[usize]) -> Result<BitMatrix> {
        check_indices(cols, self.cols)?;
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            let src = self.row_words(r);
            let dst = &mut out.words[r * out.stride..(r + 1) * out.stride];
            for (j, &c) in cols.iter().enumerate() {
                if (src[c / WORD] >> (c % WORD)) & 1 == 1 {
                    dst[j / WORD] |= 1 << (j % WORD);
                }
            }
        }
        Ok(out)
    }

    /// Selects the listed rows, in order.
    pub fn row_submatrix(&self, rows: &[usize]) -> Result<BitMatrix> {
        check_indices(rows, self.rows)?;
        let mut out = BitMatrix::zeros(rows.len(), self.cols);
        for (j, &r) in rows.iter().enumerate() {
            out.row_words_mut(j).copy_from_slice(self.row_words(r));
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "vertical stack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut words = self.words.clone();
        words.extend_from_slice(&other.words);
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            words,
        })
    }

    /// True when both matrices span the same row space.
    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let r = self.rank();
        r == other.rank() && self.vstack(other).map(|s| s.rank() == r).unwrap_or(false)
    }
}

fn check_indices(indices: &[usize], bound: usize) -> Result<()> {
    let mut seen = vec![false; bound];
    for &i in indices {
        if i >= bound {
            return Err(Error::IndexOutOfRange { index: i, bound });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    Ok(())
}

#[inline]
fn swap_rows(words: &mut [u64], stride: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let (head, tail) = words.split_at_mut(hi * stride);
    head[lo * stride..(lo + 1) * stride].swap_with_slice(&mut tail[..stride]);
}

/// `row[dst] ^= row[src]` over words `from..stride`.
#[inline]
fn xor_rows(words: &mut [u64], stride: usize, src: usize, dst: usize, from: usize) {
    debug_assert_ne!(src, dst);
    let (s, d) = if src < dst {
        let (head, tail) = words.split_at_mut(dst * stride);
        (&head[src * stride..(src + 1) * stride], &mut tail[..stride])
    } else {
        let (head, tail) = words.split_at_mut(src * stride);
        (&tail[..stride], &mut head[dst * stride..(dst + 1) * stride])
    };
    for (x, y) in d[from..].iter_mut().zip(&s[from..]) {
        *x ^= y;
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row_string(r))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", self.row_string(r))?;
        }
        Ok(())
    }
}

impl BitMatrix {
    fn row_string(&self, r: usize) -> String {
        (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect()
    }
}

/// Parses whitespace-separated rows of `0`/`1` characters, e.g. `"110 011"`.
impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split_whitespace()
            .map(|row| {
                row.chars()
                    .map(|ch| match ch {
                        '0' => Ok(0u8),
                        '1' => Ok(1u8),
                        other => Err(Error::invalid(format!("unexpected character {other:?} in bit row"))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    /// Row-space size by enumerating all combinations of rows.
    fn row_space_size(mat: &BitMatrix) -> usize {
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..(1 << mat.rows()) {
            let sel: Vec<u8> = (0..mat.rows()).map(|i| ((mask >> i) & 1) as u8).collect();
            seen.insert(mat.vec_mat(&sel).unwrap());
        }
        seen.len()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(4, 7).rank(), 0);
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
        let dependent = m("110 011 101");
        assert_eq!(row_space_size(&dependent), 4);
        assert_eq!(dependent.rank(), 2);
    }

    #[test]
    fn rank_does_not_mutate() {
        let a = m("110 011 101");
        let before = a.clone();
        let _ = a.rank();
        let _ = a.rref();
        assert_eq!(a, before);
    }

    #[test]
    fn rref_examples() {
        let id = BitMatrix::identity(3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let z = BitMatrix::zeros(2, 3).rref();
        assert!(z.matrix.is_zero());
        assert!(z.pivots.is_empty());

        let r = m("11 01").rref();
        assert_eq!(r.matrix, m("10 01"));
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn nullspace_examples() {
        // v1 ^ v2 = 0 has solutions {00, 11}.
        let ns = m("11").nullspace_basis();
        assert_eq!(ns, m("11"));

        assert_eq!(BitMatrix::identity(4).nullspace_basis().rows(), 0);

        let ns = BitMatrix::zeros(1, 3).nullspace_basis();
        assert_eq!(ns.rows(), 3);
        assert_eq!(ns.rank(), 3);
    }

    #[test]
    fn mat_vec_examples() {
        let v = [1, 0, 1];
        assert_eq!(BitMatrix::identity(3).mat_vec(&v).unwrap(), v.to_vec());
        assert_eq!(BitMatrix::zeros(2, 3).mat_vec(&v).unwrap(), vec![0, 0]);
        assert_eq!(m("110 011").mat_vec(&v).unwrap(), vec![1, 1]);
        assert!(matches!(
            m("110 011").mat_vec(&[1, 0]),
            Err(Error::DimensionMismatch { expected: 3, found: 2, .. })
        ));
    }

    #[test]
    fn right_inverse_examples() {
        let id = BitMatrix::identity(3);
        assert_eq!(id.right_inverse().unwrap(), id);

        let a = m("101 011");
        let d = a.right_inverse().unwrap();
        assert_eq!((d.rows(), d.cols()), (3, 2));
        assert_eq!(a.mul(&d).unwrap(), BitMatrix::identity(2));

        assert!(matches!(
            m("000").right_inverse(),
            Err(Error::RankDeficient { rank: 0, required: 1 })
        ));
    }

    #[test]
    fn column_submatrix_examples() {
        let a = m("110 011");
        assert_eq!(a.column_submatrix(&[0, 1, 2]).unwrap(), a);
        let empty = a.column_submatrix(&[]).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (2, 0));
        assert_eq!(empty.rank(), 0);

        let sel = BitMatrix::identity(3).column_submatrix(&[0, 2]).unwrap();
        assert_eq!(sel, m("10 00 01"));
        assert_eq!(sel.rank(), 2);

        assert!(matches!(
            a.column_submatrix(&[3]),
            Err(Error::IndexOutOfRange { index: 3, bound: 3 })
        ));
        assert!(matches!(a.column_submatrix(&[1, 1]), Err(Error::DuplicateIndex(1))));
    }

    #[test]
    fn padding_stays_zero_across_words() {
        let mut a = BitMatrix::zeros(3, 70);
        a.set(0, 69, true);
        a.set(1, 0, true);
        a.set(2, 64, true);
        let t = a.transpose().transpose();
        assert_eq!(t, a);
        assert_eq!(a.row_support(0), vec![69]);
        assert_eq!(a.rank(), 3);
        for r in 0..3 {
            assert_eq!(a.row_words(r)[1] >> 6, 0);
        }
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("102".parse::<BitMatrix>().is_err());
        assert!("10 1".parse::<BitMatrix>().is_err());
    }
}
