//! Sparse storage and a block-tridiagonal direct solver.
//!
//! The finite-difference systems order unknowns by mesh node, so grouping
//! one node (or two, for the three-node stencils) per block gives a
//! block-tridiagonal matrix. Elimination streams over the blocks and keeps
//! only `S_k^{-1} U_k` restricted to the nonzero columns of `U_k`, which is
//! what makes 10^6-unknown systems fit in a few hundred megabytes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn nrows(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `r`, sorted by column.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let span = self.indptr[r]..self.indptr[r + 1];
        (&self.indices[span.clone()], &self.values[span])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).map(|k| vals[k]).unwrap_or(0.0)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.ncols);
        (0..self.nrows())
            .map(|r| {
                let (cols, vals) = self.row(r);
                cols.iter().zip(vals).map(|(c, v)| v * x[*c]).sum()
            })
            .collect()
    }
}

/// Row-by-row CSR assembly. Duplicate columns within a row are summed.
#[derive(Debug)]
pub struct CsrBuilder {
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
    row: Vec<(usize, f64)>,
}

impl CsrBuilder {
    pub fn new(ncols: usize) -> Self {
        CsrBuilder {
            ncols,
            indptr: vec![0],
            indices: Vec::new(),
            values: Vec::new(),
            row: Vec::new(),
        }
    }

    pub fn with_capacity(ncols: usize, rows: usize, nnz: usize) -> Self {
        let mut b = Self::new(ncols);
        b.indptr.reserve(rows);
        b.indices.reserve(nnz);
        b.values.reserve(nnz);
        b
    }

    pub fn push(&mut self, col: usize, value: f64) {
        debug_assert!(col < self.ncols);
        self.row.push((col, value));
    }

    pub fn finish_row(&mut self) {
        self.row.sort_unstable_by_key(|(c, _)| *c);
        let mut last: Option<usize> = None;
        for &(c, v) in &self.row {
            if last == Some(c) {
                *self.values.last_mut().unwrap() += v;
            } else {
                self.indices.push(c);
                self.values.push(v);
                last = Some(c);
            }
        }
        self.row.clear();
        self.indptr.push(self.indices.len());
    }

    pub fn build(self) -> CsrMatrix {
        debug_assert!(self.row.is_empty());
        CsrMatrix {
            ncols: self.ncols,
            indptr: self.indptr,
            indices: self.indices,
            values: self.values,
        }
    }
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Solves `a x = rhs` where `a` is block tridiagonal with respect to the
/// contiguous blocks `bounds[k]..bounds[k+1]` (rows and columns share the
/// partition). Partial pivoting is applied inside each diagonal Schur
/// complement.
pub fn solve_block_tridiagonal(a: &CsrMatrix, bounds: &[usize], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n || rhs.len() != n {
        return Err(Error::invalid(format!(
            "block solve needs a square system: {}x{} with rhs of length {}",
            n,
            a.ncols(),
            rhs.len()
        )));
    }
    if bounds.first() != Some(&0)
        || bounds.last() != Some(&n)
        || bounds.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::invalid(
            "block bounds must increase strictly from 0 to n",
        ));
    }
    let nb = bounds.len() - 1;

    // Per block: S_k^{-1} U_k on the used columns of the next block (local
    // column indices in `cols`), and S_k^{-1} (r_k - L_k y_{k-1}).
    let mut couplings: Vec<(Vec<usize>, DMatrix<f64>)> = Vec::with_capacity(nb);
    let mut ys: Vec<DVector<f64>> = Vec::with_capacity(nb);
    let mut compact = vec![usize::MAX; bounds.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)];

    for k in 0..nb {
        let (start, end) = (bounds[k], bounds[k + 1]);
        let m = end - start;
        let prev_start = if k > 0 { bounds[k - 1] } else { start };
        let next_end = if k + 1 < nb { bounds[k + 2] } else { end };

        // Columns of block k+1 touched by rows of block k.
        let mut cols: Vec<usize> = Vec::new();
        for r in start..end {
            let (rc, _) = a.row(r);
            for &c in rc {
                if c < prev_start || c >= next_end {
                    return Err(Error::invalid(format!(
                        "entry ({r}, {c}) lies outside the block-tridiagonal band"
                    )));
                }
                if c >= end {
                    let local = c - end;
                    if compact[local] == usize::MAX {
                        compact[local] = 0;
                        cols.push(local);
                    }
                }
            }
        }
        cols.sort_unstable();
        for (q, &local) in cols.iter().enumerate() {
            compact[local] = q;
        }

        let mut schur = DMatrix::<f64>::zeros(m, m);
        let mut upper = DMatrix::<f64>::zeros(m, cols.len());
        let mut r_k = DVector::from_column_slice(&rhs[start..end]);
        let prev = k.checked_sub(1).map(|p| (&couplings[p], &ys[p]));

        for r in start..end {
            let a_row = r - start;
            let (rc, rv) = a.row(r);
            for (&c, &v) in rc.iter().zip(rv) {
                if c >= end {
                    upper[(a_row, compact[c - end])] += v;
                } else if c >= start {
                    schur[(a_row, c - start)] += v;
                } else {
                    let ((pcols, px), py) = prev.expect("lower entries only exist for k > 0");
                    let local = c - prev_start;
                    for (q, &dest) in pcols.iter().enumerate() {
                        schur[(a_row, dest)] -= v * px[(local, q)];
                    }
                    r_k[a_row] -= v * py[local];
                }
            }
        }
        for &local in &cols {
            compact[local] = usize::MAX;
        }

        let lu = schur.lu();
        if !lu.is_invertible() {
            return Err(Error::SolverFailure {
                message: format!("singular Schur complement in block {k}"),
                achieved: f64::INFINITY,
            });
        }
        let y = lu.solve(&r_k).ok_or_else(|| Error::SolverFailure {
            message: format!("singular Schur complement in block {k}"),
            achieved: f64::INFINITY,
        })?;
        let x = if cols.is_empty() {
            upper
        } else {
            lu.solve(&upper).ok_or_else(|| Error::SolverFailure {
                message: format!("singular Schur complement in block {k}"),
                achieved: f64::INFINITY,
            })?
        };
        couplings.push((cols, x));
        ys.push(y);
    }

    let mut sol = vec![0.0; n];
    for k in (0..nb).rev() {
        let (start, end) = (bounds[k], bounds[k + 1]);
        let (cols, x) = &couplings[k];
        let y = &ys[k];
        for a_row in 0..end - start {
            let mut v = y[a_row];
            for (q, &local) in cols.iter().enumerate() {
                v -= x[(a_row, q)] * sol[end + local];
            }
            sol[start + a_row] = v;
        }
    }
    Ok(sol)
}
