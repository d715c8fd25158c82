//! Reduced-space conjugate gradients on the interface controls.
//!
//! The two constraint blocks are factored once; every gradient evaluation
//! costs one solve with each factor for the state and one for the adjoint.
//! Eliminating the state turns the constrained minimization into an
//! unconstrained quadratic in the interface controls, and plain CG is run on
//! its stationarity system with the gradient as residual.

use crate::assembly::{BlockSystem, CrossWeighting};
use crate::optimizer::ldl::LdlFactor;
use crate::optimizer::sparse::Csr;
use crate::xfem::DofMap;
use crate::Result;
use super::state::FiveFieldState;

/// Split of the stacked control vector `[psi_plus; psi_minus; psi_frac]`.
#[derive(Debug, Clone, Copy)]
pub struct PsiLayout {
    pub m_plus: usize,
    pub m_minus: usize,
    pub m_frac: usize,
}

impl PsiLayout {
    pub fn total(&self) -> usize {
        self.m_plus + self.m_minus + self.m_frac
    }

    pub fn split<'a>(&self, psi: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64]) {
        let (a, rest) = psi.split_at(self.m_plus);
        let (b, c) = rest.split_at(self.m_minus);
        (a, b, c)
    }
}

/// State solves, adjoint solves and the reduced gradient.
pub struct ReducedSystem<'a> {
    pub blocks: &'a BlockSystem,
    pub dofmap: &'a DofMap,
    pub layout: PsiLayout,
    pub weighting: CrossWeighting,
    /// Off by default; enables diagonal interface-mass preconditioning.
    pub jacobi_preconditioner: bool,
    factor_d: LdlFactor,
    factor_f: LdlFactor,
    rhs_free_3d: Vec<f64>,
    rhs_free_2d: Vec<f64>,
}

/// Iteration diagnostics of one CG run.
#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
    pub lambda: Vec<f64>,
}

/// Reduced gradient together with the state and adjoint realizing it.
pub struct GradientEval {
    pub gradient: Vec<f64>,
    pub h_d: Vec<f64>,
    pub h_f: Vec<f64>,
    pub lambda_d: Vec<f64>,
    pub lambda_f: Vec<f64>,
}

impl<'a> ReducedSystem<'a> {
    pub fn new(
        blocks: &'a BlockSystem,
        dofmap: &'a DofMap,
        weighting: CrossWeighting,
    ) -> Result<Self> {
        let factor_d = LdlFactor::new(&blocks.a_d_ff, "A_D")?;
        let factor_f = LdlFactor::new(&blocks.a_f_ff, "A_F")?;
        let restrict3 = |full: &[f64]| crate::assembly::restrict_3d(dofmap, full);
        let restrict2 = |full: &[f64]| crate::assembly::restrict_2d(dofmap, full);
        let rhs_free_3d: Vec<f64> = restrict3(&blocks.rhs_source)
            .iter()
            .zip(restrict3(&blocks.a_lift_3d))
            .map(|(g, l)| g - l)
            .collect();
        let rhs_free_2d: Vec<f64> = restrict2(&blocks.a_lift_2d)
            .iter()
            .map(|l| -l)
            .collect();
        Ok(ReducedSystem {
            blocks,
            dofmap,
            layout: PsiLayout {
                m_plus: blocks.g_psi_plus.len(),
                m_minus: blocks.g_psi_minus.len(),
                m_frac: blocks.g_psi_frac.len(),
            },
            weighting,
            jacobi_preconditioner: false,
            factor_d,
            factor_f,
            rhs_free_3d,
            rhs_free_2d,
        })
    }

    /// Inverse of the stacked interface-mass diagonal, the preconditioner
    /// applied when [`Self::jacobi_preconditioner`] is set.
    fn apply_preconditioner(&self, r: &[f64]) -> Vec<f64> {
        if !self.jacobi_preconditioner {
            return r.to_vec();
        }
        let diag = self
            .blocks
            .g_psi_plus
            .iter()
            .chain(&self.blocks.g_psi_minus)
            .chain(&self.blocks.g_psi_frac);
        r.iter().zip(diag).map(|(v, d)| v / d).collect()
    }

    fn e_blocks(&self) -> (&Csr, &Csr, &Csr) {
        match self.weighting {
            CrossWeighting::Metric => {
                (&self.blocks.e_plus, &self.blocks.e_minus, &self.blocks.e_frac)
            }
            CrossWeighting::Transmissibility => (
                &self.blocks.e_plus_w,
                &self.blocks.e_minus_w,
                &self.blocks.e_frac_w,
            ),
        }
    }

    fn scatter_3d(&self, free: &[f64], with_lift: bool) -> Vec<f64> {
        let mut full = if with_lift {
            self.blocks.lift_3d.clone()
        } else {
            vec![0.0; self.dofmap.n_dofs_3d]
        };
        for (dof, f) in self.dofmap.free_3d.iter().enumerate() {
            if let Some(i) = f {
                full[dof] = free[*i];
            }
        }
        full
    }

    fn scatter_2d(&self, free: &[f64], with_lift: bool) -> Vec<f64> {
        let mut full = if with_lift {
            self.blocks.lift_2d.clone()
        } else {
            vec![0.0; self.dofmap.n_dofs_frac]
        };
        for (dof, f) in self.dofmap.free_2d.iter().enumerate() {
            if let Some(i) = f {
                full[dof] = free[*i];
            }
        }
        full
    }

    /// Constraint solves `h = A^{-1}(B psi + b)`; full-length outputs with
    /// Dirichlet lifts applied. `homogeneous` drops body and boundary data
    /// (used for Hessian applications).
    pub fn solve_state(&self, psi: &[f64], homogeneous: bool) -> (Vec<f64>, Vec<f64>) {
        let (psi_p, psi_m, psi_f) = self.layout.split(psi);
        let b_psi_3 = self.blocks.b_frac.matvec(psi_f);
        let mut rhs3 = crate::assembly::restrict_3d(self.dofmap, &b_psi_3);
        let mut rhs2_full = self.blocks.b_plus.matvec(psi_p);
        for (acc, v) in rhs2_full
            .iter_mut()
            .zip(self.blocks.b_minus.matvec(psi_m))
        {
            *acc += v;
        }
        let mut rhs2 = crate::assembly::restrict_2d(self.dofmap, &rhs2_full);
        if !homogeneous {
            for (acc, v) in rhs3.iter_mut().zip(&self.rhs_free_3d) {
                *acc += v;
            }
            for (acc, v) in rhs2.iter_mut().zip(&self.rhs_free_2d) {
                *acc += v;
            }
        }
        let h3 = self.factor_d.solve(&rhs3);
        let h2 = self.factor_f.solve(&rhs2);
        (
            self.scatter_3d(&h3, !homogeneous),
            self.scatter_2d(&h2, !homogeneous),
        )
    }

    /// Reduced gradient `B^T lambda + E^T h + G_psi psi` with the adjoint
    /// `lambda = A^{-1}(G_h h + E psi)`.
    pub fn gradient(&self, psi: &[f64], homogeneous: bool) -> GradientEval {
        let (psi_p, psi_m, psi_f) = self.layout.split(psi);
        let (e_plus, e_minus, e_frac) = self.e_blocks();
        let (h3, h2) = self.solve_state(psi, homogeneous);

        // adjoint right-hand sides over full DOFs
        let mut v3 = self.blocks.g_d.matvec(&h3);
        for (acc, v) in v3.iter_mut().zip(e_plus.matvec(psi_p)) {
            *acc += v;
        }
        for (acc, v) in v3.iter_mut().zip(e_minus.matvec(psi_m)) {
            *acc += v;
        }
        let mut v2 = self.blocks.g_f.matvec(&h2);
        for (acc, v) in v2.iter_mut().zip(e_frac.matvec(psi_f)) {
            *acc += v;
        }
        let l3 = self
            .factor_d
            .solve(&crate::assembly::restrict_3d(self.dofmap, &v3));
        let l2 = self
            .factor_f
            .solve(&crate::assembly::restrict_2d(self.dofmap, &v2));
        let l3_full = self.scatter_3d(&l3, false);
        let l2_full = self.scatter_2d(&l2, false);

        let mut grad = Vec::with_capacity(self.layout.total());
        // psi_plus block: B_plus^T lambda_F + E_plus^T h_D + G_psi psi
        let mut g_p = self.blocks.b_plus.matvec_transpose(&l2_full);
        for (i, v) in e_plus.matvec_transpose(&h3).into_iter().enumerate() {
            g_p[i] += v + self.blocks.g_psi_plus[i] * psi_p[i];
        }
        grad.extend_from_slice(&g_p);
        let mut g_m = self.blocks.b_minus.matvec_transpose(&l2_full);
        for (i, v) in e_minus.matvec_transpose(&h3).into_iter().enumerate() {
            g_m[i] += v + self.blocks.g_psi_minus[i] * psi_m[i];
        }
        grad.extend_from_slice(&g_m);
        let mut g_f = self.blocks.b_frac.matvec_transpose(&l3_full);
        for (i, v) in e_frac.matvec_transpose(&h2).into_iter().enumerate() {
            g_f[i] += v + self.blocks.g_psi_frac[i] * psi_f[i];
        }
        grad.extend_from_slice(&g_f);

        GradientEval {
            gradient: grad,
            h_d: h3,
            h_f: h2,
            lambda_d: l3_full,
            lambda_f: l2_full,
        }
    }

    /// Hessian application: the linear part of the gradient map.
    pub fn hess_apply(&self, p: &[f64]) -> Vec<f64> {
        self.gradient(p, true).gradient
    }

    /// Conjugate gradients from `psi0` down to a relative residual `tol`.
    /// `on_iterate` observes every accepted iterate.
    pub fn solve_cg(
        &self,
        psi0: Vec<f64>,
        tol: f64,
        max_iters: usize,
        mut on_iterate: impl FnMut(usize, &[f64]),
    ) -> (FiveFieldState, CgOutcome) {
        let n = self.layout.total();
        assert_eq!(psi0.len(), n);
        let mut psi = psi0;
        let g0 = self.gradient(&psi, false).gradient;
        let mut r: Vec<f64> = g0.iter().map(|v| -v).collect();
        let norm0 = norm(&r);
        let mut z = self.apply_preconditioner(&r);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut iterations = 0;
        let mut rel = 1.0;
        let mut converged = norm0 == 0.0;
        while !converged && iterations < max_iters {
            let hp = self.hess_apply(&p);
            let php = dot(&p, &hp);
            if php <= 0.0 {
                // loss of positive definiteness; stop with the current iterate
                break;
            }
            let alpha = rz / php;
            for i in 0..n {
                psi[i] += alpha * p[i];
                r[i] -= alpha * hp[i];
            }
            iterations += 1;
            on_iterate(iterations, &psi);
            rel = norm(&r) / norm0;
            if rel <= tol {
                converged = true;
                break;
            }
            z = self.apply_preconditioner(&r);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }

        let eval = self.gradient(&psi, false);
        let final_rel = if norm0 > 0.0 {
            norm(&eval.gradient) / norm0
        } else {
            0.0
        };
        let (psi_p, psi_m, psi_f) = self.layout.split(&psi);
        let state = FiveFieldState {
            h_d: eval.h_d,
            h_f: eval.h_f,
            psi_plus: psi_p.to_vec(),
            psi_minus: psi_m.to_vec(),
            psi_frac: psi_f.to_vec(),
        };
        let mut lambda = eval.lambda_d;
        lambda.extend_from_slice(&eval.lambda_f);
        (
            state,
            CgOutcome {
                iterations,
                relative_residual: rel.min(final_rel),
                converged,
                lambda,
            },
        )
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
