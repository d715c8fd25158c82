//! Full solve pipeline: mesh, cut, spaces, assembly, optimization.

use std::time::Instant;

use nalgebra::Vector2;

use crate::assembly::{
    functional_by_blocks, functional_by_quadrature, Assembler, BlockSystem, CrossWeighting,
};
use crate::geometry::{
    box_mesh::{generate_box_tet_mesh_from_lines, offset_gridlines},
    build_interface_quadrature, classify_and_cut, generate_rectangle_grid, CutClassification,
    FractureGeometry, InterfaceQuadrature, Mesh2D, Mesh3D,
};
use crate::optimizer::{FiveFieldState, ReducedSystem, SolveReport};
use crate::xfem::{build_dof_map, DofMap, EnrichmentSpec, Evaluator2D, Evaluator3D};
use crate::{Error, Result};
use super::cases::CaseDefinition;

/// Everything produced by a case run, owned so evaluators can be rebuilt.
pub struct RunArtifacts {
    pub level: usize,
    pub mesh3d: Mesh3D,
    pub mesh2d: Mesh2D,
    pub cut: CutClassification,
    pub spec: EnrichmentSpec,
    pub dofmap: DofMap,
    pub iface: InterfaceQuadrature,
    pub blocks: BlockSystem,
    pub state: FiveFieldState,
    pub report: SolveReport,
}

impl RunArtifacts {
    pub fn evaluator_3d<'a>(&'a self, frac: &'a FractureGeometry) -> Evaluator3D<'a> {
        Evaluator3D::new(&self.mesh3d, &self.cut, &self.dofmap, frac, &self.spec)
    }

    pub fn evaluator_2d(&self) -> Evaluator2D<'_> {
        Evaluator2D::new(&self.mesh2d)
    }
}

/// Builds the meshes of one level.
pub fn build_meshes(case: &CaseDefinition, level: usize) -> Result<(Mesh3D, Mesh2D)> {
    let spec = case
        .levels
        .get(level)
        .ok_or_else(|| Error::InvalidMesh(format!("case has no level {level}")))?;
    let (nx, ny, nz) = spec.grid;
    let (ox, oy, oz) = spec.offsets;
    let lo = case.domain.min_corner;
    let hi = case.domain.max_corner;
    let mesh3d = generate_box_tet_mesh_from_lines(
        &case.domain,
        &offset_gridlines(lo.x, hi.x, nx, ox),
        &offset_gridlines(lo.y, hi.y, ny, oy),
        &offset_gridlines(lo.z, hi.z, nz, oz),
    )?;
    // fracture polygon bounding box in the local frame (rectangle cases)
    let poly = &case.fracture.polygon;
    let mut plo = poly[0];
    let mut phi = poly[0];
    for p in poly {
        plo = Vector2::new(plo.x.min(p.x), plo.y.min(p.y));
        phi = Vector2::new(phi.x.max(p.x), phi.y.max(p.y));
    }
    let mesh2d = generate_rectangle_grid(plo, phi, spec.frac_grid.0, spec.frac_grid.1)?;
    Ok((mesh3d, mesh2d))
}

/// Runs the full pipeline for one case level. `weighting` selects the cross
/// blocks entering the gradient algebra.
pub fn run_case(
    case: &CaseDefinition,
    level: usize,
    weighting: CrossWeighting,
) -> Result<RunArtifacts> {
    run_case_with(case, level, weighting, None)
}

/// As [`run_case`], optionally overriding the solver tolerance.
pub fn run_case_with(
    case: &CaseDefinition,
    level: usize,
    weighting: CrossWeighting,
    tol_override: Option<f64>,
) -> Result<RunArtifacts> {
    let start = Instant::now();
    let (mesh3d, mesh2d) =
        build_meshes(case, level).map_err(|e| e.in_stage("mesh generation"))?;
    let cut = classify_and_cut(&mesh3d, &case.fracture);
    let spec = EnrichmentSpec::new(&case.fracture);
    let dofmap = build_dof_map(&mesh3d, &mesh2d, &cut, &case.fracture, &spec, &|tag| {
        case.domain.condition_for_tag(tag)
    });
    let iface = build_interface_quadrature(&mesh2d, &cut, 2, 5)
        .map_err(|e| e.in_stage("interface quadrature"))?;

    let assembler = Assembler {
        mesh3d: &mesh3d,
        mesh2d: &mesh2d,
        frac: &case.fracture,
        spec: &spec,
        cut: &cut,
        dofmap: &dofmap,
        materials: &case.materials,
        iface: &iface,
    };
    let blocks = assembler.assemble().map_err(|e| e.in_stage("assembly"))?;

    let reduced = ReducedSystem::new(&blocks, &dofmap, weighting)
        .map_err(|e| e.in_stage("factorization"))?;
    let tol = tol_override.unwrap_or(case.solver.tol);
    let psi0 = vec![0.0; reduced.layout.total()];
    let (state, outcome) = reduced.solve_cg(psi0, tol, case.solver.max_iters, |_, _| {});

    let ev3 = Evaluator3D::new(&mesh3d, &cut, &dofmap, &case.fracture, &spec);
    let ev2 = Evaluator2D::new(&mesh2d);
    let (j_delta, _) = functional_by_quadrature(
        &iface,
        &ev3,
        &ev2,
        &state.h_d,
        &state.h_f,
        &state.psi_plus,
        &state.psi_minus,
        &state.psi_frac,
    );
    let j_gram = |w| {
        functional_by_blocks(
            &blocks,
            w,
            &state.h_d,
            &state.h_f,
            &state.psi_plus,
            &state.psi_minus,
            &state.psi_frac,
        )
    };
    let report = SolveReport {
        iterations: outcome.iterations,
        relative_residual: outcome.relative_residual,
        converged: outcome.converged,
        j_delta,
        j_gram_metric: j_gram(CrossWeighting::Metric),
        j_gram_transmissibility: j_gram(CrossWeighting::Transmissibility),
        lambda: outcome.lambda,
        wall_time: start.elapsed().as_secs_f64(),
    };
    drop(reduced);
    Ok(RunArtifacts {
        level,
        mesh3d,
        mesh2d,
        cut,
        spec,
        dofmap,
        iface,
        blocks,
        state,
        report,
    })
}
