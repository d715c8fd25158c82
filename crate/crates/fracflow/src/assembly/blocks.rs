//! Assembly of every sparse block of the discrete optimization problem.
//!
//! Block layout, with `h = [h_D; h_F]` and `psi = [psi_plus; psi_minus; psi_F]`:
//!
//! ```text
//!   A = diag(A_D, A_F)          constraint operators
//!   B = [ 0      0      B_F ]   constraint right-hand couplings
//!       [ B_plus B_minus  0  ]
//!   E = [ E_plus E_minus  0  ]  functional cross terms
//!       [ 0      0      E_F ]
//!   G = [ G_h  E  ]             mismatch functional Gram matrix
//!       [ E^T G_psi]
//! ```
//!
//! The cross blocks are assembled twice: once weighted by the interface
//! transmissibility (the form written next to the constraint equations) and
//! once unweighted. Only the unweighted variant makes `G` the Gram matrix of
//! the plain L2 mismatch functional; the weighted one is kept for diagnostic
//! comparison and is reported next to the functional value.

use nalgebra::Vector3;

use crate::geometry::{
    quadrature, CellKind, CutClassification, FractureGeometry, InterfaceQuadrature, Mesh2D,
    Mesh3D, QuadratureRule, TetPlaneRelation,
};
use crate::optimizer::{Coo, Csr};
use crate::xfem::{edge_bubble_local, DofMap, EnrichmentSpec, Evaluator2D, Evaluator3D};
use crate::Result;
use super::materials::MaterialFields;

/// All assembled blocks plus Dirichlet lift data.
#[derive(Debug)]
pub struct BlockSystem {
    pub a_d_full: Csr,
    pub a_d_ff: Csr,
    pub a_f_full: Csr,
    pub a_f_ff: Csr,
    pub b_plus: Csr,
    pub b_minus: Csr,
    pub b_frac: Csr,
    /// Transmissibility-weighted cross blocks (constraint-side definitions).
    pub e_plus_w: Csr,
    pub e_minus_w: Csr,
    pub e_frac_w: Csr,
    /// Unweighted cross blocks (metric of the mismatch functional).
    pub e_plus: Csr,
    pub e_minus: Csr,
    pub e_frac: Csr,
    pub g_d: Csr,
    pub g_f: Csr,
    pub g_psi_plus: Vec<f64>,
    pub g_psi_minus: Vec<f64>,
    pub g_psi_frac: Vec<f64>,
    /// Source vector over all 3D DOFs.
    pub rhs_source: Vec<f64>,
    /// Dirichlet lift coefficient vectors (zero on free DOFs).
    pub lift_3d: Vec<f64>,
    pub lift_2d: Vec<f64>,
    /// `A_full * lift`, used to move lifts to constraint right-hand sides.
    pub a_lift_3d: Vec<f64>,
    pub a_lift_2d: Vec<f64>,
}

impl BlockSystem {
    pub fn n_d(&self) -> usize {
        self.a_d_full.nrows
    }

    pub fn n_f(&self) -> usize {
        self.a_f_full.nrows
    }

    pub fn m(&self) -> usize {
        self.g_psi_frac.len()
    }
}

fn restrict(vec_full: &[f64], free: &[Option<usize>], n_free: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_free];
    for (dof, f) in free.iter().enumerate() {
        if let Some(i) = f {
            out[*i] = vec_full[dof];
        }
    }
    out
}

fn filter_ff(a: &Csr, free: &[Option<usize>], n_free: usize) -> Csr {
    let mut coo = Coo::new(n_free, n_free);
    for r in 0..a.nrows {
        let Some(fr) = free[r] else { continue };
        for (c, v) in a.row(r) {
            if let Some(fc) = free[c] {
                coo.push(fr, fc, v);
            }
        }
    }
    coo.to_csr()
}

/// Assembles every block of the discrete problem.
pub struct Assembler<'a> {
    pub mesh3d: &'a Mesh3D,
    pub mesh2d: &'a Mesh2D,
    pub frac: &'a FractureGeometry,
    pub spec: &'a EnrichmentSpec,
    pub cut: &'a CutClassification,
    pub dofmap: &'a DofMap,
    pub materials: &'a MaterialFields,
    pub iface: &'a InterfaceQuadrature,
}

impl<'a> Assembler<'a> {
    pub fn assemble(&self) -> Result<BlockSystem> {
        let ev3 = Evaluator3D::new(self.mesh3d, self.cut, self.dofmap, self.frac, self.spec);
        let ev2 = Evaluator2D::new(self.mesh2d);

        let n_d = self.dofmap.n_dofs_3d;
        let n_f = self.dofmap.n_dofs_frac;
        let m = self.mesh2d.triangles.len();

        let mut a_d = Coo::new(n_d, n_d);
        let mut g_d = Coo::new(n_d, n_d);
        let mut rhs_source = vec![0.0; n_d];
        self.volume_terms(&ev3, &mut a_d, &mut rhs_source)?;

        let mut e_plus_w = Coo::new(n_d, m);
        let mut e_minus_w = Coo::new(n_d, m);
        let mut e_plus = Coo::new(n_d, m);
        let mut e_minus = Coo::new(n_d, m);
        let mut b_frac = Coo::new(n_d, m);
        self.interface_terms(
            &ev3,
            &mut a_d,
            &mut g_d,
            &mut e_plus_w,
            &mut e_minus_w,
            &mut e_plus,
            &mut e_minus,
            &mut b_frac,
        );

        let mut a_f = Coo::new(n_f, n_f);
        let mut g_f = Coo::new(n_f, n_f);
        let mut b_plus = Coo::new(n_f, m);
        let mut e_frac_w = Coo::new(n_f, m);
        let mut e_frac = Coo::new(n_f, m);
        let mut g_psi = vec![0.0; m];
        self.fracture_terms(
            &ev2,
            &mut a_f,
            &mut g_f,
            &mut b_plus,
            &mut e_frac_w,
            &mut e_frac,
            &mut g_psi,
        )?;

        let a_d_full = a_d.to_csr();
        let a_f_full = a_f.to_csr();
        let a_d_ff = filter_ff(&a_d_full, &self.dofmap.free_3d, self.dofmap.n_free_3d);
        let a_f_ff = filter_ff(&a_f_full, &self.dofmap.free_2d, self.dofmap.n_free_2d);

        let lift_3d = self.dofmap.expand_3d(&vec![0.0; self.dofmap.n_free_3d]);
        let lift_2d = self.dofmap.expand_2d(&vec![0.0; self.dofmap.n_free_2d]);
        let a_lift_3d = a_d_full.matvec(&lift_3d);
        let a_lift_2d = a_f_full.matvec(&lift_2d);

        let b_plus = b_plus.to_csr();
        Ok(BlockSystem {
            a_d_full,
            a_d_ff,
            a_f_full,
            a_f_ff,
            b_minus: b_plus.clone(),
            b_plus,
            b_frac: b_frac.to_csr(),
            e_plus_w: e_plus_w.to_csr(),
            e_minus_w: e_minus_w.to_csr(),
            e_frac_w: e_frac_w.to_csr(),
            e_plus: e_plus.to_csr(),
            e_minus: e_minus.to_csr(),
            e_frac: e_frac.to_csr(),
            g_d: g_d.to_csr(),
            g_f: g_f.to_csr(),
            g_psi_plus: g_psi.clone(),
            g_psi_minus: g_psi.clone(),
            g_psi_frac: g_psi,
            rhs_source,
            lift_3d,
            lift_2d,
            a_lift_3d,
            a_lift_2d,
        })
    }

    /// Volume stiffness and source: whole elements away from the plane,
    /// sub-tetrahedra on crossed elements, higher quadrature degree where the
    /// bubble enrichment is active.
    fn volume_terms(
        &self,
        ev3: &Evaluator3D,
        a_d: &mut Coo,
        rhs: &mut [f64],
    ) -> Result<()> {
        let rule_lo = quadrature(CellKind::Tet, 2)?;
        let rule_src = quadrature(CellKind::Tet, 4)?;
        let rule_hi = quadrature(CellKind::Tet, 5)?;

        for t in 0..self.mesh3d.tets.len() {
            let basis = ev3.local_basis(t);
            let grads = ev3.p1_gradients(t);
            let bubble = ev3.has_bubble(t);
            let stiff_rule = if bubble { &rule_hi } else { &rule_lo };
            let src_rule = if bubble { &rule_hi } else { &rule_src };

            match &self.cut.relation[t] {
                TetPlaneRelation::Split(split) => {
                    for (cells, h_sign) in
                        [(&split.sub_plus, 1.0), (&split.sub_minus, -1.0)]
                    {
                        for sub in cells.iter() {
                            self.cell_contribution(
                                ev3, t, &basis, &grads, sub, h_sign, stiff_rule, src_rule, a_d,
                                rhs,
                            );
                        }
                    }
                }
                TetPlaneRelation::Untouched { side }
                | TetPlaneRelation::FaceOnPlane { side } => {
                    let verts = self.mesh3d.tet_vertices(t);
                    self.cell_contribution(
                        ev3,
                        t,
                        &basis,
                        &grads,
                        &verts,
                        side.sign(),
                        stiff_rule,
                        src_rule,
                        a_d,
                        rhs,
                    );
                }
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn cell_contribution(
        &self,
        ev3: &Evaluator3D,
        t: usize,
        basis: &[(usize, crate::xfem::LocalBasis)],
        grads: &[Vector3<f64>; 4],
        cell: &[Vector3<f64>; 4],
        h_sign: f64,
        stiff_rule: &QuadratureRule,
        src_rule: &QuadratureRule,
        a_d: &mut Coo,
        rhs: &mut [f64],
    ) {
        use crate::geometry::box_mesh::tet_volume;
        use crate::xfem::LocalBasis;

        let vol = tet_volume(cell[0], cell[1], cell[2], cell[3]);
        if vol <= 0.0 {
            return;
        }
        let nb = basis.len();
        let mut local = vec![0.0; nb * nb];
        let mut grad_buf: Vec<Vector3<f64>> = vec![Vector3::zeros(); nb];

        let scale = vol / stiff_rule.reference_measure();
        for (pt, w) in stiff_rule.points.iter().zip(&stiff_rule.weights) {
            let x = cell[0]
                + (cell[1] - cell[0]) * pt[0]
                + (cell[2] - cell[0]) * pt[1]
                + (cell[3] - cell[0]) * pt[2];
            let lambda = ev3.barycentric(t, x);
            let p_local = self.frac.to_local(x);
            let (e_val, e_grad2) = edge_bubble_local(p_local, self.spec, self.frac);
            let e_grad = self.frac.axis_u * e_grad2.x + self.frac.axis_v * e_grad2.y;
            for (i, (_, b)) in basis.iter().enumerate() {
                grad_buf[i] = match *b {
                    LocalBasis::Std { vertex_slot } => grads[vertex_slot],
                    LocalBasis::Enriched {
                        vertex_slot,
                        kind,
                        shift,
                    } => match kind {
                        crate::xfem::EnrichKind::Bubble => {
                            grads[vertex_slot] * (h_sign * e_val - shift)
                                + e_grad * (h_sign * lambda[vertex_slot])
                        }
                        crate::xfem::EnrichKind::Heaviside => {
                            grads[vertex_slot] * (h_sign - shift)
                        }
                    },
                };
            }
            let wq = w * scale;
            for i in 0..nb {
                let kg = self.materials.k_d * grad_buf[i];
                for j in 0..=i {
                    local[i * nb + j] += wq * kg.dot(&grad_buf[j]);
                }
            }
        }
        for i in 0..nb {
            for j in 0..=i {
                let v = local[i * nb + j];
                if v != 0.0 {
                    a_d.push(basis[i].0, basis[j].0, v);
                    if i != j {
                        a_d.push(basis[j].0, basis[i].0, v);
                    }
                }
            }
        }

        // source
        let scale = vol / src_rule.reference_measure();
        let mut vals = Vec::with_capacity(nb);
        for (pt, w) in src_rule.points.iter().zip(&src_rule.weights) {
            let x = cell[0]
                + (cell[1] - cell[0]) * pt[0]
                + (cell[2] - cell[0]) * pt[1]
                + (cell[3] - cell[0]) * pt[2];
            let g = (self.materials.source)(x);
            if g == 0.0 {
                continue;
            }
            let lambda = ev3.barycentric(t, x);
            let (e_val, _) = edge_bubble_local(self.frac.to_local(x), self.spec, self.frac);
            ev3.basis_values(t, &lambda, h_sign, e_val, &mut vals);
            let wq = w * scale * g;
            for (i, (dof, _)) in basis.iter().enumerate() {
                rhs[*dof] += wq * vals[i];
            }
        }
    }

    /// Interface integrals over the clipped tiling: sided trace masses for
    /// `A_D` and `G_D`, the trace-against-indicator couplings and `B_F`.
    #[allow(clippy::too_many_arguments)]
    fn interface_terms(
        &self,
        ev3: &Evaluator3D,
        a_d: &mut Coo,
        g_d: &mut Coo,
        e_plus_w: &mut Coo,
        e_minus_w: &mut Coo,
        e_plus: &mut Coo,
        e_minus: &mut Coo,
        b_frac: &mut Coo,
    ) {
        let mut vals_plus: Vec<f64> = Vec::new();
        let mut vals_minus: Vec<f64> = Vec::new();
        for piece in &self.iface.pieces {
            let t = piece.tet;
            let basis = ev3.local_basis(t);
            let nb = basis.len();
            let mut acc_a = vec![0.0; nb * nb];
            let mut acc_g = vec![0.0; nb * nb];
            let mut acc_ep_w = vec![0.0; nb];
            let mut acc_em_w = vec![0.0; nb];
            let mut acc_ep = vec![0.0; nb];
            let mut acc_em = vec![0.0; nb];
            let mut acc_bf = vec![0.0; nb];
            for (p, w) in piece.points.iter().zip(&piece.weights) {
                let x = self.frac.to_global(*p);
                let lambda = ev3.barycentric(t, x);
                let (e_val, _) = edge_bubble_local(*p, self.spec, self.frac);
                ev3.basis_values(t, &lambda, 1.0, e_val, &mut vals_plus);
                ev3.basis_values(t, &lambda, -1.0, e_val, &mut vals_minus);
                let eta = (self.materials.eta)(*p);
                for i in 0..nb {
                    let (tp, tm) = (vals_plus[i], vals_minus[i]);
                    acc_ep_w[i] -= w * eta * tp;
                    acc_em_w[i] -= w * eta * tm;
                    acc_ep[i] -= w * tp;
                    acc_em[i] -= w * tm;
                    acc_bf[i] += w * eta * (tp + tm);
                    for j in 0..=i {
                        acc_a[i * nb + j] +=
                            w * eta * (tp * vals_plus[j] + tm * vals_minus[j]);
                        acc_g[i * nb + j] += w * (tp * vals_plus[j] + tm * vals_minus[j]);
                    }
                }
            }
            for i in 0..nb {
                let dof_i = basis[i].0;
                for j in 0..=i {
                    let dof_j = basis[j].0;
                    for (coo, acc) in [(&mut *a_d, &acc_a), (&mut *g_d, &acc_g)] {
                        let v = acc[i * nb + j];
                        if v != 0.0 {
                            coo.push(dof_i, dof_j, v);
                            if i != j {
                                coo.push(dof_j, dof_i, v);
                            }
                        }
                    }
                }
                e_plus_w.push(dof_i, piece.tri, acc_ep_w[i]);
                e_minus_w.push(dof_i, piece.tri, acc_em_w[i]);
                e_plus.push(dof_i, piece.tri, acc_ep[i]);
                e_minus.push(dof_i, piece.tri, acc_em[i]);
                b_frac.push(dof_i, piece.tri, acc_bf[i]);
            }
        }
    }

    /// Integrals over the fracture mesh: tangential stiffness plus twice the
    /// transmissibility mass, the P1 mass, and the P0 couplings.
    #[allow(clippy::too_many_arguments)]
    fn fracture_terms(
        &self,
        ev2: &Evaluator2D,
        a_f: &mut Coo,
        g_f: &mut Coo,
        b_plus: &mut Coo,
        e_frac_w: &mut Coo,
        e_frac: &mut Coo,
        g_psi: &mut [f64],
    ) -> Result<()> {
        let rule = quadrature(CellKind::Triangle, 2)?;
        for t in 0..self.mesh2d.triangles.len() {
            let idx = self.mesh2d.triangles[t];
            let v = self.mesh2d.triangle_vertices(t);
            let area = self.mesh2d.triangle_area(t);
            g_psi[t] = area;
            let grads = ev2.p1_gradients(t);
            let scale = area / rule.reference_measure();
            let mut local_a = [[0.0; 3]; 3];
            let mut local_g = [[0.0; 3]; 3];
            let mut local_b = [0.0; 3];
            let mut local_ew = [0.0; 3];
            let mut local_e = [0.0; 3];
            for (pt, w) in rule.points.iter().zip(&rule.weights) {
                let p = v[0] + (v[1] - v[0]) * pt[0] + (v[2] - v[0]) * pt[1];
                let lambda = [1.0 - pt[0] - pt[1], pt[0], pt[1]];
                let eta = (self.materials.eta)(p);
                let k_f = (self.materials.k_f)(p);
                let wq = w * scale;
                for i in 0..3 {
                    let kg = k_f * grads[i];
                    local_b[i] += wq * eta * lambda[i];
                    local_ew[i] -= wq * eta * lambda[i];
                    local_e[i] -= wq * lambda[i];
                    for j in 0..=i {
                        local_a[i][j] +=
                            wq * (kg.dot(&grads[j]) + 2.0 * eta * (lambda[i] * lambda[j]));
                        local_g[i][j] += wq * (lambda[i] * lambda[j]);
                    }
                }
            }
            for i in 0..3 {
                for j in 0..=i {
                    a_f.push(idx[i], idx[j], local_a[i][j]);
                    g_f.push(idx[i], idx[j], local_g[i][j]);
                    if i != j {
                        a_f.push(idx[j], idx[i], local_a[i][j]);
                        g_f.push(idx[j], idx[i], local_g[i][j]);
                    }
                }
                b_plus.push(idx[i], t, local_b[i]);
                e_frac_w.push(idx[i], t, local_ew[i]);
                e_frac.push(idx[i], t, local_e[i]);
            }
        }
        Ok(())
    }
}

/// Convenience: `restrict` a full vector to free 3D DOFs.
pub fn restrict_3d(dofmap: &DofMap, full: &[f64]) -> Vec<f64> {
    restrict(full, &dofmap.free_3d, dofmap.n_free_3d)
}

pub fn restrict_2d(dofmap: &DofMap, full: &[f64]) -> Vec<f64> {
    restrict(full, &dofmap.free_2d, dofmap.n_free_2d)
}
