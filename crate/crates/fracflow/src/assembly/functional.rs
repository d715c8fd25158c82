//! Evaluation of the interface mismatch functional.
//!
//! The authoritative value is computed by quadrature over the clipped
//! interface tiling; the quadratic-form value through the assembled blocks is
//! also available, in both cross-term weightings, for diagnostics.

use crate::geometry::InterfaceQuadrature;
use crate::xfem::{edge_bubble_local, Evaluator2D, Evaluator3D};
use super::blocks::BlockSystem;

/// Per-triangle breakdown of the functional: the piecewise-constant value,
/// the mean trace it chases and the local squared-mismatch contribution.
#[derive(Debug, Clone, Default)]
pub struct TriangleMismatch {
    pub area: f64,
    pub psi_plus: f64,
    pub trace_plus_mean: f64,
    pub j_plus: f64,
    pub psi_minus: f64,
    pub trace_minus_mean: f64,
    pub j_minus: f64,
    pub psi_frac: f64,
    pub h_frac_mean: f64,
    pub j_frac: f64,
}

impl TriangleMismatch {
    pub fn total(&self) -> f64 {
        self.j_plus + self.j_minus + self.j_frac
    }
}

/// Quadrature value of the mismatch functional
/// `||psi_plus - h_plus||^2 + ||psi_minus - h_minus||^2 + ||psi_F - h_F||^2`
/// over the interface, together with its per-triangle decomposition.
pub fn functional_by_quadrature(
    iface: &InterfaceQuadrature,
    ev3: &Evaluator3D,
    ev2: &Evaluator2D,
    h_d: &[f64],
    h_f: &[f64],
    psi_plus: &[f64],
    psi_minus: &[f64],
    psi_frac: &[f64],
) -> (f64, Vec<TriangleMismatch>) {
    let m = psi_frac.len();
    let mut per_tri = vec![TriangleMismatch::default(); m];
    let mut vals = Vec::new();
    for piece in &iface.pieces {
        let t = piece.tet;
        let tri = piece.tri;
        let basis = ev3.local_basis(t);
        let entry = &mut per_tri[tri];
        entry.psi_plus = psi_plus[tri];
        entry.psi_minus = psi_minus[tri];
        entry.psi_frac = psi_frac[tri];
        for (p, w) in piece.points.iter().zip(&piece.weights) {
            let x = ev3.frac.to_global(*p);
            let lambda = ev3.barycentric(t, x);
            let (e_val, _) = edge_bubble_local(*p, ev3.spec, ev3.frac);
            let mut tr_plus = 0.0;
            let mut tr_minus = 0.0;
            ev3.basis_values(t, &lambda, 1.0, e_val, &mut vals);
            for (i, (dof, _)) in basis.iter().enumerate() {
                tr_plus += h_d[*dof] * vals[i];
            }
            ev3.basis_values(t, &lambda, -1.0, e_val, &mut vals);
            for (i, (dof, _)) in basis.iter().enumerate() {
                tr_minus += h_d[*dof] * vals[i];
            }
            let hf = ev2.value_in_tri(tri, *p, h_f);
            entry.area += w;
            entry.trace_plus_mean += w * tr_plus;
            entry.trace_minus_mean += w * tr_minus;
            entry.h_frac_mean += w * hf;
            entry.j_plus += w * (psi_plus[tri] - tr_plus).powi(2);
            entry.j_minus += w * (psi_minus[tri] - tr_minus).powi(2);
            entry.j_frac += w * (psi_frac[tri] - hf).powi(2);
        }
    }
    let mut total = 0.0;
    for entry in &mut per_tri {
        if entry.area > 0.0 {
            entry.trace_plus_mean /= entry.area;
            entry.trace_minus_mean /= entry.area;
            entry.h_frac_mean /= entry.area;
        }
        total += entry.total();
    }
    (total, per_tri)
}

/// Cross-term weighting used when evaluating the quadratic form of `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossWeighting {
    /// Unweighted traces: `G` is the Gram matrix of the L2 mismatch.
    Metric,
    /// Transmissibility-weighted cross terms, as written next to the
    /// constraint-side block definitions.
    Transmissibility,
}

/// Quadratic-form value `chi^T G chi` through the assembled blocks.
#[allow(clippy::too_many_arguments)]
pub fn functional_by_blocks(
    blocks: &BlockSystem,
    weighting: CrossWeighting,
    h_d: &[f64],
    h_f: &[f64],
    psi_plus: &[f64],
    psi_minus: &[f64],
    psi_frac: &[f64],
) -> f64 {
    let (e_plus, e_minus, e_frac) = match weighting {
        CrossWeighting::Metric => (&blocks.e_plus, &blocks.e_minus, &blocks.e_frac),
        CrossWeighting::Transmissibility => {
            (&blocks.e_plus_w, &blocks.e_minus_w, &blocks.e_frac_w)
        }
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut j = dot(h_d, &blocks.g_d.matvec(h_d));
    j += dot(h_f, &blocks.g_f.matvec(h_f));
    j += psi_plus
        .iter()
        .zip(&blocks.g_psi_plus)
        .map(|(p, a)| p * p * a)
        .sum::<f64>();
    j += psi_minus
        .iter()
        .zip(&blocks.g_psi_minus)
        .map(|(p, a)| p * p * a)
        .sum::<f64>();
    j += psi_frac
        .iter()
        .zip(&blocks.g_psi_frac)
        .map(|(p, a)| p * p * a)
        .sum::<f64>();
    j += 2.0 * dot(h_d, &e_plus.matvec(psi_plus));
    j += 2.0 * dot(h_d, &e_minus.matvec(psi_minus));
    j += 2.0 * dot(h_f, &e_frac.matvec(psi_frac));
    j
}
