//! Validation cases, error norms, convergence studies and artifact export.

pub mod cases;
pub mod errors;
pub mod export;
pub mod pipeline;

pub use cases::{case_by_name, AnalyticSolution, CaseDefinition, MeshLevel, SolverSpec};
pub use errors::{compute_error_norms, convergence_study, ErrorReport, StudyResult};
pub use export::{
    LineSample,
    dump_blocks, exchange_flux_at, export_comparison, export_interface_comparison,
    export_line_samples, export_slice_plot, export_vtk_fracture, export_vtk_matrix,
    sample_segments, Segment,
};
pub use pipeline::{build_meshes, run_case, run_case_with, RunArtifacts};
