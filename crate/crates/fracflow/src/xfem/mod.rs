//! Enriched finite element spaces on meshes not conforming to the fracture.

pub mod dofmap;
pub mod enrichment;
pub mod eval;

pub use dofmap::{build_dof_map, DofMap, EnrichKind, EnrichedDof};
pub use enrichment::{edge_bubble, edge_bubble_local, heaviside, EnrichmentSpec};
pub use eval::{Evaluator2D, Evaluator3D, LocalBasis};
