//! Dense saddle-point solve of the optimality system, used as an oracle for
//! the reduced conjugate-gradient path on coarse instances.
//!
//! The system couples the functional Gram matrix `G` with the constraint
//! matrix `C = [A_D 0 0 0 -B_F; 0 A_F -B_plus -B_minus 0]` over the free
//! unknowns; Dirichlet lifts contribute to both right-hand sides.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{BlockSystem, CrossWeighting};
use crate::optimizer::sparse::Csr;
use crate::xfem::DofMap;
use crate::{Error, Result};
use super::state::FiveFieldState;

pub struct KktSolution {
    pub state: FiveFieldState,
    pub lambda: Vec<f64>,
    /// Smallest and largest singular values of the KKT matrix.
    pub sigma_min: f64,
    pub sigma_max: f64,
}

struct Dims {
    nfd: usize,
    nff: usize,
    mp: usize,
    mm: usize,
    mf: usize,
}

impl Dims {
    fn chi(&self) -> usize {
        self.nfd + self.nff + self.mp + self.mm + self.mf
    }

    fn total(&self) -> usize {
        self.chi() + self.nfd + self.nff
    }
}

/// Assembles the dense constraint matrix over the free unknowns.
pub fn dense_constraint(blocks: &BlockSystem, dofmap: &DofMap) -> DMatrix<f64> {
    let d = dims(blocks, dofmap);
    let mut c = DMatrix::zeros(d.nfd + d.nff, d.chi());
    put_free_square(&mut c, &blocks.a_d_ff, 0, 0);
    put_free_square(&mut c, &blocks.a_f_ff, d.nfd, d.nfd);
    let col_psi_p = d.nfd + d.nff;
    let col_psi_m = col_psi_p + d.mp;
    let col_psi_f = col_psi_m + d.mm;
    put_free_rows(&mut c, &blocks.b_plus, &dofmap.free_2d, d.nfd, col_psi_p, -1.0);
    put_free_rows(&mut c, &blocks.b_minus, &dofmap.free_2d, d.nfd, col_psi_m, -1.0);
    put_free_rows(&mut c, &blocks.b_frac, &dofmap.free_3d, 0, col_psi_f, -1.0);
    c
}

/// Solves the optimality system directly. Fails on singular systems, which
/// would contradict the well-posedness of the discrete problem.
pub fn solve_kkt_direct(
    blocks: &BlockSystem,
    dofmap: &DofMap,
    weighting: CrossWeighting,
) -> Result<KktSolution> {
    let d = dims(blocks, dofmap);
    let n = d.total();
    let mut kkt = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);

    let (e_plus, e_minus, e_frac) = match weighting {
        CrossWeighting::Metric => (&blocks.e_plus, &blocks.e_minus, &blocks.e_frac),
        CrossWeighting::Transmissibility => {
            (&blocks.e_plus_w, &blocks.e_minus_w, &blocks.e_frac_w)
        }
    };

    // G block over chi
    let col_hf = d.nfd;
    let col_psi_p = d.nfd + d.nff;
    let col_psi_m = col_psi_p + d.mp;
    let col_psi_f = col_psi_m + d.mm;
    put_full_reduced(&mut kkt, &blocks.g_d, &dofmap.free_3d, 0, 0);
    put_full_reduced(&mut kkt, &blocks.g_f, &dofmap.free_2d, col_hf, col_hf);
    for (i, a) in blocks.g_psi_plus.iter().enumerate() {
        kkt[(col_psi_p + i, col_psi_p + i)] = *a;
    }
    for (i, a) in blocks.g_psi_minus.iter().enumerate() {
        kkt[(col_psi_m + i, col_psi_m + i)] = *a;
    }
    for (i, a) in blocks.g_psi_frac.iter().enumerate() {
        kkt[(col_psi_f + i, col_psi_f + i)] = *a;
    }
    put_free_rows_sym(&mut kkt, e_plus, &dofmap.free_3d, 0, col_psi_p);
    put_free_rows_sym(&mut kkt, e_minus, &dofmap.free_3d, 0, col_psi_m);
    put_free_rows_sym(&mut kkt, e_frac, &dofmap.free_2d, col_hf, col_psi_f);

    // C block and its transpose
    let row_c = d.chi();
    let c = dense_constraint(blocks, dofmap);
    for r in 0..c.nrows() {
        for cc in 0..c.ncols() {
            let v = c[(r, cc)];
            if v != 0.0 {
                kkt[(row_c + r, cc)] = v;
                kkt[(cc, row_c + r)] = v;
            }
        }
    }

    // right-hand side: constraint data minus lift contributions, and the
    // functional's linear term from the Dirichlet lift
    let g_minus_lift: Vec<f64> = blocks
        .rhs_source
        .iter()
        .zip(&blocks.a_lift_3d)
        .map(|(g, l)| g - l)
        .collect();
    for (dof, f) in dofmap.free_3d.iter().enumerate() {
        if let Some(i) = f {
            rhs[row_c + i] = g_minus_lift[dof];
        }
    }
    for (dof, f) in dofmap.free_2d.iter().enumerate() {
        if let Some(i) = f {
            rhs[row_c + d.nfd + i] = -blocks.a_lift_2d[dof];
        }
    }
    let g_lift = blocks.g_d.matvec(&blocks.lift_3d);
    for (dof, f) in dofmap.free_3d.iter().enumerate() {
        if let Some(i) = f {
            rhs[*i] -= g_lift[dof];
        }
    }
    for (ell, v) in e_plus.matvec_transpose(&blocks.lift_3d).iter().enumerate() {
        rhs[col_psi_p + ell] -= v;
    }
    for (ell, v) in e_minus.matvec_transpose(&blocks.lift_3d).iter().enumerate() {
        rhs[col_psi_m + ell] -= v;
    }
    for (ell, v) in e_frac.matvec_transpose(&blocks.lift_2d).iter().enumerate() {
        rhs[col_psi_f + ell] -= v;
    }

    let svd = kkt.clone().svd(false, false);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let sigma_min = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);

    let lu = kkt.lu();
    let sol = lu
        .solve(&rhs)
        .ok_or_else(|| Error::SingularSystem("saddle-point optimality system".into()))?;

    let mut h_d = blocks.lift_3d.clone();
    for (dof, f) in dofmap.free_3d.iter().enumerate() {
        if let Some(i) = f {
            h_d[dof] = sol[*i];
        }
    }
    let mut h_f = blocks.lift_2d.clone();
    for (dof, f) in dofmap.free_2d.iter().enumerate() {
        if let Some(i) = f {
            h_f[dof] = sol[col_hf + i];
        }
    }
    let take = |start: usize, len: usize| -> Vec<f64> {
        (0..len).map(|i| sol[start + i]).collect()
    };
    let state = FiveFieldState {
        h_d,
        h_f,
        psi_plus: take(col_psi_p, d.mp),
        psi_minus: take(col_psi_m, d.mm),
        psi_frac: take(col_psi_f, d.mf),
    };
    let lambda = take(d.chi(), d.nfd + d.nff);
    Ok(KktSolution {
        state,
        lambda,
        sigma_min,
        sigma_max,
    })
}

fn dims(blocks: &BlockSystem, dofmap: &DofMap) -> Dims {
    Dims {
        nfd: dofmap.n_free_3d,
        nff: dofmap.n_free_2d,
        mp: blocks.g_psi_plus.len(),
        mm: blocks.g_psi_minus.len(),
        mf: blocks.g_psi_frac.len(),
    }
}

/// Inserts a free-indexed square block (already reduced, e.g. `A_ff`).
fn put_free_square(m: &mut DMatrix<f64>, a: &Csr, row0: usize, col0: usize) {
    for r in 0..a.nrows {
        for (c, v) in a.row(r) {
            m[(row0 + r, col0 + c)] += v;
        }
    }
}

/// Inserts a full-indexed square block reduced to free rows and columns.
fn put_full_reduced(
    m: &mut DMatrix<f64>,
    a: &Csr,
    free: &[Option<usize>],
    row0: usize,
    col0: usize,
) {
    for r in 0..a.nrows {
        let Some(fr) = free[r] else { continue };
        for (c, v) in a.row(r) {
            if let Some(fc) = free[c] {
                m[(row0 + fr, col0 + fc)] += v;
            }
        }
    }
}

/// Inserts a full-row-indexed rectangular block restricted to free rows.
fn put_free_rows(
    m: &mut DMatrix<f64>,
    a: &Csr,
    free: &[Option<usize>],
    row0: usize,
    col0: usize,
    scale: f64,
) {
    for r in 0..a.nrows {
        let Some(fr) = free[r] else { continue };
        for (c, v) in a.row(r) {
            m[(row0 + fr, col0 + c)] += scale * v;
        }
    }
}

/// Same, also mirroring into the transposed position.
fn put_free_rows_sym(
    m: &mut DMatrix<f64>,
    a: &Csr,
    free: &[Option<usize>],
    row0: usize,
    col0: usize,
) {
    for r in 0..a.nrows {
        let Some(fr) = free[r] else { continue };
        for (c, v) in a.row(r) {
            m[(row0 + fr, col0 + c)] += v;
            m[(col0 + c, row0 + fr)] += v;
        }
    }
}
