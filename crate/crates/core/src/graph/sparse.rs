use alloc::vec::Vec;

use crate::{Error, Result};

/// Allowed deviation of a stochastic row sum from one.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Compressed sparse row matrix with non-negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    weights: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, weight)` triplets in any order.
    pub fn from_triplets(n_rows: usize, n_cols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(row, col, w) in &triplets {
            if row >= n_rows || col >= n_cols {
                return Err(Error::EntryOutOfBounds {
                    row,
                    col,
                    rows: n_rows,
                    cols: n_cols,
                });
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::BadWeight(w));
            }
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        if let Some(pair) = triplets.windows(2).find(|p| (p[0].0, p[0].1) == (p[1].0, p[1].1)) {
            return Err(Error::DuplicateEntry {
                row: pair[0].0,
                col: pair[0].1,
            });
        }
        let mut row_ptr = alloc::vec![0usize; n_rows + 1];
        for &(r, _, _) in &triplets {
            row_ptr[r + 1] += 1;
        }
        for r in 0..n_rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(SparseMatrix {
            n_rows,
            n_cols,
            row_ptr,
            cols: triplets.iter().map(|t| t.1).collect(),
            weights: triplets.iter().map(|t| t.2).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            n_rows: n,
            n_cols: n,
            row_ptr: (0..=n).collect(),
            cols: (0..n).collect(),
            weights: alloc::vec![1.0; n],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// `(col, weight)` pairs of one row, in column order.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.weights[span].iter().copied())
    }

    /// All entries as `(row, col, weight)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |r| self.row(r).map(move |(c, w)| (r, c, w)))
    }

    pub fn get(&self, r: usize, c: usize) -> Option<f64> {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .binary_search(&c)
            .ok()
            .map(|k| self.weights[span.start + k])
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows).map(|r| self.row(r).map(|(_, w)| w).sum()).collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut row_ptr = alloc::vec![0usize; self.n_cols + 1];
        for &c in &self.cols {
            row_ptr[c + 1] += 1;
        }
        for c in 0..self.n_cols {
            row_ptr[c + 1] += row_ptr[c];
        }
        let mut next = row_ptr.clone();
        let mut cols = alloc::vec![0usize; self.nnz()];
        let mut weights = alloc::vec![0.0; self.nnz()];
        // rows are visited in increasing order, so columns of the transpose
        // come out sorted
        for (r, c, w) in self.entries() {
            let k = next[c];
            cols[k] = r;
            weights[k] = w;
            next[c] += 1;
        }
        SparseMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_ptr,
            cols,
            weights,
        }
    }

    /// Divides every row by its sum. Empty rows are left empty when
    /// `allow_empty` is set and rejected otherwise; rows summing to zero are
    /// always rejected.
    pub(crate) fn normalize_rows(&self, allow_empty: bool) -> Result<SparseMatrix> {
        let mut out = self.clone();
        for r in 0..self.n_rows {
            let span = self.row_ptr[r]..self.row_ptr[r + 1];
            if span.is_empty() {
                if allow_empty {
                    continue;
                }
                return Err(Error::ZeroRow(r));
            }
            let sum: f64 = self.weights[span.clone()].iter().sum();
            if sum.is_nan() || sum <= 0.0 {
                return Err(Error::ZeroRow(r));
            }
            for w in &mut out.weights[span] {
                *w /= sum;
            }
        }
        Ok(out)
    }

    /// Product with a row-stochastic matrix. Each row is evaluated as its
    /// first referenced sample plus weighted offsets from it, so constant
    /// inputs come back exactly. Rows must be empty or sum to one within
    /// `1e-9`.
    pub fn mul_vec_stochastic(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_vec(x)?;
        (0..self.n_rows)
            .map(|r| {
                let mut row = self.row(r);
                let Some((c0, w0)) = row.next() else {
                    return Ok(0.0);
                };
                let anchor = x[c0];
                let (mut sum, mut offset) = (w0, 0.0);
                for (c, w) in row {
                    sum += w;
                    offset += w * (x[c] - anchor);
                }
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    return Err(Error::NotStochastic(r));
                }
                Ok(anchor + offset)
            })
            .collect()
    }

    fn check_vec(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                left: (self.n_rows, self.n_cols),
                right: (x.len(), 1),
            });
        }
        Ok(())
    }

    /// Matrix-vector product accumulated in `f64`.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_vec(x)?;
        Ok((0..self.n_rows)
            .map(|r| self.row(r).map(|(c, w)| w * x[c]).sum())
            .collect())
    }
}
