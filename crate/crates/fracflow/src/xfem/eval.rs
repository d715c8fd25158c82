//! Evaluation of the enriched 3D field and the fracture field.
//!
//! The discrete matrix pressure combines standard P1 hat functions with
//! shifted enrichments: `phi_k (H E - H(x_k) E(x_k))` on bubble vertices and
//! `phi_k (H - H(x_k))` on plain Heaviside vertices. All enrichments vanish
//! at mesh vertices. On a point of the fracture plane the Heaviside value is
//! selected by the requested side, which realizes the one-sided traces.

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::geometry::{CutClassification, FractureGeometry, Mesh2D, Mesh3D, Side};
use crate::{Error, Result};
use super::dofmap::{DofMap, EnrichKind};
use super::enrichment::{edge_bubble, EnrichmentSpec};

/// One member of the local basis of an element.
#[derive(Debug, Clone, Copy)]
pub enum LocalBasis {
    Std { vertex_slot: usize },
    Enriched { vertex_slot: usize, kind: EnrichKind, shift: f64 },
}

/// Evaluator over the enriched 3D space. Precomputes per-element barycentric
/// maps and P1 gradients; immutable and safe to share.
pub struct Evaluator3D<'a> {
    pub mesh: &'a Mesh3D,
    pub cut: &'a CutClassification,
    pub dofmap: &'a DofMap,
    pub frac: &'a FractureGeometry,
    pub spec: &'a EnrichmentSpec,
    inv_jac: Vec<Matrix3<f64>>,
    locator: Locator,
}

impl<'a> Evaluator3D<'a> {
    pub fn new(
        mesh: &'a Mesh3D,
        cut: &'a CutClassification,
        dofmap: &'a DofMap,
        frac: &'a FractureGeometry,
        spec: &'a EnrichmentSpec,
    ) -> Self {
        let mut inv_jac = Vec::with_capacity(mesh.tets.len());
        for t in 0..mesh.tets.len() {
            let v = mesh.tet_vertices(t);
            let jac = Matrix3::from_columns(&[v[1] - v[0], v[2] - v[0], v[3] - v[0]]);
            inv_jac.push(jac.try_inverse().expect("degenerate tet"));
        }
        let locator = Locator::new(mesh);
        Evaluator3D {
            mesh,
            cut,
            dofmap,
            frac,
            spec,
            inv_jac,
            locator,
        }
    }

    /// Barycentric coordinates of `x` in tet `t`.
    pub fn barycentric(&self, t: usize, x: Vector3<f64>) -> [f64; 4] {
        let v0 = self.mesh.vertices[self.mesh.tets[t][0]];
        let xi = self.inv_jac[t] * (x - v0);
        [1.0 - xi.x - xi.y - xi.z, xi.x, xi.y, xi.z]
    }

    /// Constant P1 gradients of the four hat functions on tet `t`.
    pub fn p1_gradients(&self, t: usize) -> [Vector3<f64>; 4] {
        let m = self.inv_jac[t];
        let g1 = Vector3::new(m[(0, 0)], m[(0, 1)], m[(0, 2)]);
        let g2 = Vector3::new(m[(1, 0)], m[(1, 1)], m[(1, 2)]);
        let g3 = Vector3::new(m[(2, 0)], m[(2, 1)], m[(2, 2)]);
        [-(g1 + g2 + g3), g1, g2, g3]
    }

    /// Local basis of tet `t`: (global dof, descriptor) pairs.
    pub fn local_basis(&self, t: usize) -> Vec<(usize, LocalBasis)> {
        let verts = self.mesh.tets[t];
        let mut basis = Vec::with_capacity(8);
        for (slot, &v) in verts.iter().enumerate() {
            basis.push((v, LocalBasis::Std { vertex_slot: slot }));
        }
        for (slot, &v) in verts.iter().enumerate() {
            if let Some(e) = &self.dofmap.enriched[v] {
                basis.push((
                    e.dof,
                    LocalBasis::Enriched {
                        vertex_slot: slot,
                        kind: e.kind,
                        shift: e.shift(),
                    },
                ));
            }
        }
        basis
    }

    /// Whether any member of the local basis of `t` is enriched.
    pub fn has_enrichment(&self, t: usize) -> bool {
        self.mesh.tets[t]
            .iter()
            .any(|&v| self.dofmap.enriched[v].is_some())
    }

    /// Whether any member carries the bubble enrichment (non-polynomial).
    pub fn has_bubble(&self, t: usize) -> bool {
        self.mesh.tets[t].iter().any(|&v| {
            matches!(
                self.dofmap.enriched[v],
                Some(e) if e.kind == EnrichKind::Bubble
            )
        })
    }

    /// Values of all local basis functions of `t` at a point with barycentric
    /// coordinates `lambda`, for a given Heaviside value `h_sign`.
    /// `bubble` is `E(x)` at the point (ignored by non-bubble members).
    pub fn basis_values(
        &self,
        t: usize,
        lambda: &[f64; 4],
        h_sign: f64,
        bubble: f64,
        out: &mut Vec<f64>,
    ) {
        out.clear();
        for (_, b) in self.local_basis(t) {
            out.push(match b {
                LocalBasis::Std { vertex_slot } => lambda[vertex_slot],
                LocalBasis::Enriched {
                    vertex_slot,
                    kind,
                    shift,
                } => {
                    let enr = match kind {
                        EnrichKind::Bubble => h_sign * bubble,
                        EnrichKind::Heaviside => h_sign,
                    };
                    lambda[vertex_slot] * (enr - shift)
                }
            });
        }
    }

    /// Field value at `x` inside tet `t` with an explicit Heaviside value.
    pub fn value_in_tet(&self, t: usize, x: Vector3<f64>, h_sign: f64, coeffs: &[f64]) -> f64 {
        let lambda = self.barycentric(t, x);
        let (bubble, _) = edge_bubble(x, self.spec, self.frac);
        let mut acc = 0.0;
        for (dof, b) in self.local_basis(t) {
            let val = match b {
                LocalBasis::Std { vertex_slot } => lambda[vertex_slot],
                LocalBasis::Enriched {
                    vertex_slot,
                    kind,
                    shift,
                } => {
                    let enr = match kind {
                        EnrichKind::Bubble => h_sign * bubble,
                        EnrichKind::Heaviside => h_sign,
                    };
                    lambda[vertex_slot] * (enr - shift)
                }
            };
            acc += coeffs[dof] * val;
        }
        acc
    }

    /// Field value and gradient at `x` inside tet `t`.
    pub fn value_grad_in_tet(
        &self,
        t: usize,
        x: Vector3<f64>,
        h_sign: f64,
        coeffs: &[f64],
    ) -> (f64, Vector3<f64>) {
        let lambda = self.barycentric(t, x);
        let grads = self.p1_gradients(t);
        let (bubble, bubble_grad) = edge_bubble(x, self.spec, self.frac);
        let mut value = 0.0;
        let mut grad = Vector3::zeros();
        for (dof, b) in self.local_basis(t) {
            let c = coeffs[dof];
            match b {
                LocalBasis::Std { vertex_slot } => {
                    value += c * lambda[vertex_slot];
                    grad += grads[vertex_slot] * c;
                }
                LocalBasis::Enriched {
                    vertex_slot,
                    kind,
                    shift,
                } => {
                    let (enr, enr_grad) = match kind {
                        EnrichKind::Bubble => (h_sign * bubble, bubble_grad * h_sign),
                        EnrichKind::Heaviside => (h_sign, Vector3::zeros()),
                    };
                    value += c * lambda[vertex_slot] * (enr - shift);
                    grad += (grads[vertex_slot] * (enr - shift) + enr_grad * lambda[vertex_slot])
                        * c;
                }
            }
        }
        (value, grad)
    }

    /// Heaviside value at `x` honoring a side request for on-plane points.
    pub fn h_sign(&self, x: Vector3<f64>, side: Side) -> f64 {
        let d = self.frac.signed_distance(x);
        if d.abs() <= self.cut.snap_tol {
            side.sign()
        } else {
            d.signum()
        }
    }

    /// Sided evaluation at an arbitrary point of the mesh.
    pub fn eval(&self, x: Vector3<f64>, side: Side, coeffs: &[f64]) -> Result<f64> {
        let t = self.locate(x, side)?;
        Ok(self.value_in_tet(t, x, self.h_sign(x, side), coeffs))
    }

    pub fn eval_grad(
        &self,
        x: Vector3<f64>,
        side: Side,
        coeffs: &[f64],
    ) -> Result<(f64, Vector3<f64>)> {
        let t = self.locate(x, side)?;
        Ok(self.value_grad_in_tet(t, x, self.h_sign(x, side), coeffs))
    }

    /// Finds a tet containing `x`; on-plane points prefer a tet whose
    /// interior extends to the requested side.
    pub fn locate(&self, x: Vector3<f64>, side: Side) -> Result<usize> {
        let d = self.frac.signed_distance(x);
        let probe = if d.abs() <= self.cut.snap_tol {
            // nudge towards the requested side to disambiguate plane points
            x + self.frac.normal * (side.sign() * 10.0 * self.cut.snap_tol)
        } else {
            x
        };
        self.locator
            .find(self.mesh, &self.inv_jac, probe)
            .or_else(|| self.locator.find(self.mesh, &self.inv_jac, x))
            .ok_or(Error::PointOutsideMesh([x.x, x.y, x.z]))
    }
}

/// Uniform-grid spatial index over tet bounding boxes.
struct Locator {
    lo: Vector3<f64>,
    inv_cell: Vector3<f64>,
    dims: [usize; 3],
    bins: Vec<Vec<u32>>,
}

impl Locator {
    fn new(mesh: &Mesh3D) -> Self {
        let (lo, hi) = mesh.bounding_box();
        let n = (mesh.tets.len() as f64).cbrt().ceil() as usize + 1;
        let dims = [n, n, n];
        let ext = hi - lo;
        let inv_cell = Vector3::new(
            n as f64 / ext.x.max(1e-300),
            n as f64 / ext.y.max(1e-300),
            n as f64 / ext.z.max(1e-300),
        );
        let mut bins = vec![Vec::new(); n * n * n];
        let clampi = |v: f64| -> usize { (v.floor() as i64).clamp(0, n as i64 - 1) as usize };
        for (t, _) in mesh.tets.iter().enumerate() {
            let verts = mesh.tet_vertices(t);
            let mut bmin = [usize::MAX; 3];
            let mut bmax = [0usize; 3];
            for v in verts {
                let c = [
                    clampi((v.x - lo.x) * inv_cell.x),
                    clampi((v.y - lo.y) * inv_cell.y),
                    clampi((v.z - lo.z) * inv_cell.z),
                ];
                for i in 0..3 {
                    bmin[i] = bmin[i].min(c[i]);
                    bmax[i] = bmax[i].max(c[i]);
                }
            }
            for bz in bmin[2]..=bmax[2] {
                for by in bmin[1]..=bmax[1] {
                    for bx in bmin[0]..=bmax[0] {
                        bins[(bz * n + by) * n + bx].push(t as u32);
                    }
                }
            }
        }
        Locator {
            lo,
            inv_cell,
            dims,
            bins,
        }
    }

    fn find(&self, mesh: &Mesh3D, inv_jac: &[Matrix3<f64>], x: Vector3<f64>) -> Option<usize> {
        let n = self.dims[0];
        let clampi = |v: f64| -> usize { (v.floor() as i64).clamp(0, n as i64 - 1) as usize };
        let bx = clampi((x.x - self.lo.x) * self.inv_cell.x);
        let by = clampi((x.y - self.lo.y) * self.inv_cell.y);
        let bz = clampi((x.z - self.lo.z) * self.inv_cell.z);
        let tol = 1e-10;
        for &t in &self.bins[(bz * n + by) * n + bx] {
            let t = t as usize;
            let v0 = mesh.vertices[mesh.tets[t][0]];
            let xi = inv_jac[t] * (x - v0);
            let l0 = 1.0 - xi.x - xi.y - xi.z;
            if xi.x >= -tol && xi.y >= -tol && xi.z >= -tol && l0 >= -tol {
                return Some(t);
            }
        }
        None
    }
}

/// P1 evaluator on the fracture mesh.
pub struct Evaluator2D<'a> {
    pub mesh: &'a Mesh2D,
}

impl<'a> Evaluator2D<'a> {
    pub fn new(mesh: &'a Mesh2D) -> Self {
        Evaluator2D { mesh }
    }

    pub fn barycentric(&self, t: usize, p: Vector2<f64>) -> [f64; 3] {
        let v = self.mesh.triangle_vertices(t);
        let det = (v[1] - v[0]).x * (v[2] - v[0]).y - (v[2] - v[0]).x * (v[1] - v[0]).y;
        let l1 = ((p - v[0]).x * (v[2] - v[0]).y - (v[2] - v[0]).x * (p - v[0]).y) / det;
        let l2 = ((v[1] - v[0]).x * (p - v[0]).y - (p - v[0]).x * (v[1] - v[0]).y) / det;
        [1.0 - l1 - l2, l1, l2]
    }

    pub fn p1_gradients(&self, t: usize) -> [Vector2<f64>; 3] {
        let v = self.mesh.triangle_vertices(t);
        let det = (v[1] - v[0]).x * (v[2] - v[0]).y - (v[2] - v[0]).x * (v[1] - v[0]).y;
        let g1 = Vector2::new((v[2] - v[0]).y, -(v[2] - v[0]).x) / det;
        let g2 = Vector2::new(-(v[1] - v[0]).y, (v[1] - v[0]).x) / det;
        [-(g1 + g2), g1, g2]
    }

    pub fn value_in_tri(&self, t: usize, p: Vector2<f64>, coeffs: &[f64]) -> f64 {
        let lambda = self.barycentric(t, p);
        let idx = self.mesh.triangles[t];
        (0..3).map(|i| coeffs[idx[i]] * lambda[i]).sum()
    }
}
