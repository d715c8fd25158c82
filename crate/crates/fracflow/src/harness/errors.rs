//! Error norms against closed-form solutions and convergence studies.

use crate::assembly::CrossWeighting;
use crate::geometry::{box_mesh::tet_volume, quadrature, CellKind, Side, TetPlaneRelation};
use crate::Result;
use super::cases::{AnalyticSolution, CaseDefinition};
use super::pipeline::{run_case, RunArtifacts};

/// Norms of the 3D error field at one refinement level.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub level: usize,
    /// Maximum element diameter.
    pub h: f64,
    /// Volume-like mesh parameter `h^3`, the convention in which refinement
    /// tables are usually quoted for these meshes.
    pub delta_volume_like: f64,
    pub dofs_3d_free: usize,
    pub dofs_3d_total: usize,
    pub dofs_frac: usize,
    pub iterations: usize,
    pub l2_error: f64,
    pub h1_semi_error: f64,
    pub h1_error: f64,
}

/// L2 and H1 errors of `h_D` against the analytic branches, integrated on the
/// sub-tetrahedron decomposition with side-aware branch selection.
pub fn compute_error_norms(
    art: &RunArtifacts,
    case: &CaseDefinition,
    analytic: &AnalyticSolution,
) -> Result<(f64, f64, f64)> {
    let ev3 = art.evaluator_3d(&case.fracture);
    let rule_lo = quadrature(CellKind::Tet, 4)?;
    let rule_hi = quadrature(CellKind::Tet, 5)?;
    let mut l2 = 0.0;
    let mut h1 = 0.0;
    for t in 0..art.mesh3d.tets.len() {
        let rule = if ev3.has_bubble(t) { &rule_hi } else { &rule_lo };
        let mut accumulate = |cell: &[nalgebra::Vector3<f64>; 4], h_sign: f64| {
            let vol = tet_volume(cell[0], cell[1], cell[2], cell[3]);
            if vol <= 0.0 {
                return;
            }
            let side = if h_sign > 0.0 { Side::Plus } else { Side::Minus };
            let scale = vol / rule.reference_measure();
            for (pt, w) in rule.points.iter().zip(&rule.weights) {
                let x = cell[0]
                    + (cell[1] - cell[0]) * pt[0]
                    + (cell[2] - cell[0]) * pt[1]
                    + (cell[3] - cell[0]) * pt[2];
                let (value, grad) = ev3.value_grad_in_tet(t, x, h_sign, &art.state.h_d);
                let diff = value - (analytic.value)(x, side);
                let gdiff = grad - (analytic.gradient)(x, side);
                l2 += w * scale * diff * diff;
                h1 += w * scale * gdiff.norm_squared();
            }
        };
        match &art.cut.relation[t] {
            TetPlaneRelation::Split(split) => {
                for sub in &split.sub_plus {
                    accumulate(sub, 1.0);
                }
                for sub in &split.sub_minus {
                    accumulate(sub, -1.0);
                }
            }
            TetPlaneRelation::Untouched { side } | TetPlaneRelation::FaceOnPlane { side } => {
                accumulate(&art.mesh3d.tet_vertices(t), side.sign());
            }
        }
    }
    let l2 = l2.sqrt();
    let h1_semi = h1.sqrt();
    Ok((l2, h1_semi, (l2 * l2 + h1_semi * h1_semi).sqrt()))
}

#[derive(Debug)]
pub struct StudyResult {
    pub reports: Vec<ErrorReport>,
    /// Least-squares slope of log error against log diameter.
    pub l2_rate: f64,
    pub h1_rate: f64,
}

/// Runs `levels` refinements of a case with an analytic solution and fits
/// convergence rates against the element diameter.
pub fn convergence_study(case: &CaseDefinition, levels: usize) -> Result<StudyResult> {
    let analytic = case
        .analytic
        .as_ref()
        .expect("convergence study requires an analytic solution");
    let mut reports = Vec::new();
    for level in 0..levels.min(case.levels.len()) {
        let art = run_case(case, level, CrossWeighting::Metric)?;
        let (l2, h1s, h1f) = compute_error_norms(&art, case, analytic)?;
        let h = (0..art.mesh3d.tets.len())
            .map(|t| art.mesh3d.tet_diameter(t))
            .fold(0.0f64, f64::max);
        reports.push(ErrorReport {
            level,
            h,
            delta_volume_like: h.powi(3),
            dofs_3d_free: art.dofmap.n_free_3d,
            dofs_3d_total: art.dofmap.n_dofs_3d,
            dofs_frac: art.dofmap.n_dofs_frac,
            iterations: art.report.iterations,
            l2_error: l2,
            h1_semi_error: h1s,
            h1_error: h1f,
        });
    }
    let l2_rate = fit_rate(&reports, |r| r.l2_error);
    let h1_rate = fit_rate(&reports, |r| r.h1_error);
    Ok(StudyResult {
        reports,
        l2_rate,
        h1_rate,
    })
}

/// Least-squares slope of log(err) vs log(h).
pub fn fit_rate(reports: &[ErrorReport], err: impl Fn(&ErrorReport) -> f64) -> f64 {
    let points: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| (r.h.ln(), err(r).ln()))
        .collect();
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Rates between consecutive refinements.
pub fn pairwise_rates(reports: &[ErrorReport], err: impl Fn(&ErrorReport) -> f64) -> Vec<f64> {
    reports
        .windows(2)
        .map(|w| (err(&w[0]) / err(&w[1])).ln() / (w[0].h / w[1].h).ln())
        .collect()
}
