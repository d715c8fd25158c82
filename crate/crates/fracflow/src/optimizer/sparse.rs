//! Minimal sparse matrix support: triplet assembly and CSR products.

/// Triplet accumulator. Duplicate entries are summed on conversion, in a
/// deterministic order independent of insertion order.
#[derive(Debug, Clone)]
pub struct Coo {
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<(u32, u32, f64)>,
}

impl Coo {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Coo {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        if value != 0.0 {
            self.entries.push((row as u32, col as u32, value));
        }
    }

    pub fn to_csr(&self) -> Csr {
        let mut entries = self.entries.clone();
        // stable sort: duplicates of a symmetric pair are summed in the same
        // order on both sides, so symmetry survives bitwise
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices: Vec<u32> = Vec::with_capacity(entries.len());
        let mut data: Vec<f64> = Vec::with_capacity(entries.len());
        let mut cur_row = 0usize;
        for &(r, c, v) in &entries {
            while cur_row < r as usize {
                cur_row += 1;
                indptr[cur_row] = indices.len();
            }
            if indices.len() > indptr[cur_row] && *indices.last().unwrap() == c {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                data.push(v);
            }
        }
        while cur_row < self.nrows {
            cur_row += 1;
            indptr[cur_row] = indices.len();
        }
        Csr {
            nrows: self.nrows,
            ncols: self.ncols,
            indptr,
            indices,
            data,
        }
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone)]
pub struct Csr {
    pub nrows: usize,
    pub ncols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub data: Vec<f64>,
}

impl Csr {
    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.indptr[r]..self.indptr[r + 1]).map(|p| (self.indices[p] as usize, self.data[p]))
    }

    /// y = A x
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        for r in 0..self.nrows {
            let mut acc = 0.0;
            for p in self.indptr[r]..self.indptr[r + 1] {
                acc += self.data[p] * x[self.indices[p] as usize];
            }
            y[r] = acc;
        }
    }

    /// y = A^T x
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.nrows);
        let mut y = vec![0.0; self.ncols];
        for r in 0..self.nrows {
            let xr = x[r];
            if xr == 0.0 {
                continue;
            }
            for p in self.indptr[r]..self.indptr[r + 1] {
                y[self.indices[p] as usize] += self.data[p] * xr;
            }
        }
        y
    }

    /// Maximum absolute asymmetry |A - A^T| over the pattern (square only).
    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.nrows, self.ncols);
        let mut max = 0.0f64;
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                let vt = self.get(c, r);
                max = max.max((v - vt).abs());
            }
        }
        max
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        for p in self.indptr[r]..self.indptr[r + 1] {
            if self.indices[p] as usize == c {
                return self.data[p];
            }
        }
        0.0
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Writes the matrix as `row col value` coordinate lines.
    pub fn write_coordinate<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{} {} {}", self.nrows, self.ncols, self.nnz())?;
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                writeln!(out, "{} {} {:.17e}", r, c, v)?;
            }
        }
        Ok(())
    }
}
