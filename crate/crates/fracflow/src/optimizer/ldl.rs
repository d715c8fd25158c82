//! Sparse LDL^T factorization for symmetric positive definite systems.
//!
//! Up-looking factorization over the elimination tree, preceded by a reverse
//! Cuthill-McKee reordering to keep fill on banded FEM matrices moderate.
//! The factor is built once per block and reused across all inner solves of
//! the optimization loop.

use crate::{Error, Result};
use super::sparse::Csr;

/// LDL^T factor of a permuted symmetric positive definite matrix.
pub struct LdlFactor {
    n: usize,
    /// permutation: ordered[i] = original index at permuted position i
    perm: Vec<usize>,
    lp: Vec<usize>,
    li: Vec<u32>,
    lx: Vec<f64>,
    d: Vec<f64>,
}

impl LdlFactor {
    /// Factors a symmetric matrix given in full CSR storage. `block` names
    /// the matrix in breakdown errors.
    pub fn new(a: &Csr, block: &str) -> Result<Self> {
        assert_eq!(a.nrows, a.ncols);
        let n = a.nrows;
        let perm = rcm_order(a);
        let mut perm_inv = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            perm_inv[p] = i;
        }

        // permuted upper triangle in column-compressed form
        let (cp, ci, cx) = permuted_upper_csc(a, &perm, &perm_inv);

        // elimination tree and column counts
        let mut parent = vec![usize::MAX; n];
        let mut lnz = vec![0usize; n];
        let mut flag = vec![usize::MAX; n];
        for k in 0..n {
            flag[k] = k;
            for p in cp[k]..cp[k + 1] {
                let mut i = ci[p] as usize;
                while i < k && flag[i] != k {
                    if parent[i] == usize::MAX {
                        parent[i] = k;
                    }
                    lnz[i] += 1;
                    flag[i] = k;
                    i = parent[i];
                }
            }
        }
        let mut lp = vec![0usize; n + 1];
        for k in 0..n {
            lp[k + 1] = lp[k] + lnz[k];
        }
        let nnz = lp[n];
        let mut li = vec![0u32; nnz];
        let mut lx = vec![0f64; nnz];
        let mut d = vec![0f64; n];

        // numeric factorization, one row of L at a time
        let mut y = vec![0f64; n];
        let mut pattern = vec![0usize; n];
        let mut lnz_done = vec![0usize; n];
        for k in 0..n {
            let mut top = n;
            flag[k] = k;
            y[k] = 0.0;
            for p in cp[k]..cp[k + 1] {
                let i0 = ci[p] as usize;
                y[i0] += cx[p];
                let mut len = 0;
                let mut i = i0;
                while i < k && flag[i] != k {
                    pattern[len] = i;
                    len += 1;
                    flag[i] = k;
                    i = parent[i];
                }
                while len > 0 {
                    len -= 1;
                    top -= 1;
                    pattern[top] = pattern[len];
                }
            }
            d[k] = y[k];
            y[k] = 0.0;
            for &j in &pattern[top..n] {
                let yj = y[j];
                y[j] = 0.0;
                let pend = lp[j] + lnz_done[j];
                for p in lp[j]..pend {
                    y[li[p] as usize] -= lx[p] * yj;
                }
                let l_kj = yj / d[j];
                d[k] -= l_kj * yj;
                li[pend] = k as u32;
                lx[pend] = l_kj;
                lnz_done[j] += 1;
            }
            if d[k] <= 0.0 || !d[k].is_finite() {
                return Err(Error::FactorizationBreakdown {
                    block: block.to_string(),
                    pivot: k,
                });
            }
        }

        Ok(LdlFactor {
            n,
            perm,
            lp,
            li,
            lx,
            d,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut z: Vec<f64> = (0..self.n).map(|i| b[self.perm[i]]).collect();
        // L z = b
        for j in 0..self.n {
            let zj = z[j];
            if zj != 0.0 {
                for p in self.lp[j]..self.lp[j + 1] {
                    z[self.li[p] as usize] -= self.lx[p] * zj;
                }
            }
        }
        for j in 0..self.n {
            z[j] /= self.d[j];
        }
        // L^T x = z
        for j in (0..self.n).rev() {
            let mut acc = z[j];
            for p in self.lp[j]..self.lp[j + 1] {
                acc -= self.lx[p] * z[self.li[p] as usize];
            }
            z[j] = acc;
        }
        let mut x = vec![0.0; self.n];
        for i in 0..self.n {
            x[self.perm[i]] = z[i];
        }
        x
    }

    pub fn fill_nnz(&self) -> usize {
        self.lx.len()
    }
}

fn permuted_upper_csc(a: &Csr, perm: &[usize], perm_inv: &[usize]) -> (Vec<usize>, Vec<u32>, Vec<f64>) {
    let n = a.nrows;
    let mut entries: Vec<(u32, u32, f64)> = Vec::with_capacity(a.nnz() / 2 + n);
    for r in 0..n {
        for (c, v) in a.row(r) {
            let (pi, pj) = (perm_inv[r], perm_inv[c]);
            // keep upper triangle of the permuted matrix, from the original
            // lower triangle to visit each symmetric pair once
            if r <= c {
                let (i, j) = if pi <= pj { (pi, pj) } else { (pj, pi) };
                entries.push((j as u32, i as u32, v));
            }
        }
    }
    entries.sort_unstable_by_key(|&(j, i, _)| (j, i));
    let mut cp = vec![0usize; n + 1];
    let mut ci = Vec::with_capacity(entries.len());
    let mut cx: Vec<f64> = Vec::with_capacity(entries.len());
    let mut cur = 0usize;
    for &(j, i, v) in &entries {
        while cur < j as usize {
            cur += 1;
            cp[cur] = ci.len();
        }
        if ci.len() > cp[cur] && *ci.last().unwrap() == i {
            *cx.last_mut().unwrap() += v;
        } else {
            ci.push(i);
            cx.push(v);
        }
    }
    while cur < n {
        cur += 1;
        cp[cur] = ci.len();
    }
    let _ = perm;
    (cp, ci, cx)
}

/// Reverse Cuthill-McKee ordering on the matrix adjacency graph.
fn rcm_order(a: &Csr) -> Vec<usize> {
    let n = a.nrows;
    let degree: Vec<usize> = (0..n)
        .map(|r| a.indptr[r + 1] - a.indptr[r])
        .collect();
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    loop {
        // next start: unvisited vertex of minimum degree
        let start = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| degree[v]);
        let Some(start) = start else { break };
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = a
                .row(v)
                .map(|(c, _)| c)
                .filter(|&c| !visited[c])
                .collect();
            nbrs.sort_unstable_by_key(|&c| degree[c]);
            for c in nbrs {
                visited[c] = true;
                queue.push_back(c);
            }
        }
    }
    order.reverse();
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::sparse::Coo;
    use approx::assert_relative_eq;

    fn laplacian_1d(n: usize) -> Csr {
        let mut coo = Coo::new(n, n);
        for i in 0..n {
            coo.push(i, i, 2.0);
            if i > 0 {
                coo.push(i, i - 1, -1.0);
            }
            if i + 1 < n {
                coo.push(i, i + 1, -1.0);
            }
        }
        coo.to_csr()
    }

    #[test]
    fn identity_scaled_mass_recovers_constants() {
        let n = 17;
        let mut coo = Coo::new(n, n);
        for i in 0..n {
            coo.push(i, i, 3.5);
        }
        let a = coo.to_csr();
        let f = LdlFactor::new(&a, "mass").unwrap();
        let rhs: Vec<f64> = a.matvec(&vec![1.0; n]);
        let x = f.solve(&rhs);
        for v in x {
            assert_relative_eq!(v, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn tridiagonal_solve_matches_dense_oracle() {
        let n = 40;
        let a = laplacian_1d(n);
        let f = LdlFactor::new(&a, "lap").unwrap();
        let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = f.solve(&b);
        let dense = a.to_dense();
        let xd = dense
            .lu()
            .solve(&nalgebra::DVector::from_vec(b.clone()))
            .unwrap();
        for i in 0..n {
            assert_relative_eq!(x[i], xd[i], max_relative = 1e-11, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_spd_matches_dense_oracle() {
        // A = B^T B + n I on a random sparse pattern
        let n = 60;
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut rand01 = move || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            dense[(i, i)] = n as f64;
            for _ in 0..4 {
                let j = (rand01() * n as f64) as usize % n;
                let v = rand01() - 0.5;
                dense[(i, j)] += v;
                dense[(j, i)] += v;
            }
        }
        let spd = &dense * &dense.transpose() * (1.0 / n as f64)
            + nalgebra::DMatrix::identity(n, n) * 2.0;
        let mut coo = Coo::new(n, n);
        for i in 0..n {
            for j in 0..n {
                if spd[(i, j)] != 0.0 {
                    coo.push(i, j, spd[(i, j)]);
                }
            }
        }
        let a = coo.to_csr();
        assert!(a.asymmetry() < 1e-12);
        let f = LdlFactor::new(&a, "random").unwrap();
        let b: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let x = f.solve(&b);
        let xd = spd.clone().lu().solve(&nalgebra::DVector::from_vec(b)).unwrap();
        for i in 0..n {
            assert_relative_eq!(x[i], xd[i], max_relative = 1e-10, epsilon = 1e-12);
        }
    }

    #[test]
    fn indefinite_matrix_reports_breakdown() {
        let n = 5;
        let mut coo = Coo::new(n, n);
        for i in 0..n {
            coo.push(i, i, if i == 3 { -1.0 } else { 1.0 });
        }
        let a = coo.to_csr();
        match LdlFactor::new(&a, "bad") {
            Err(Error::FactorizationBreakdown { block, .. }) => assert_eq!(block, "bad"),
            other => panic!("expected breakdown, got {other:?}", other = other.is_ok()),
        }
    }
}
