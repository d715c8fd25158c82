//! Equi-dimensional conforming reference solutions on the cross-section
//! plane, with the fracture represented as a strip of physical width.

pub mod cases;
pub mod equidim;

pub use cases::{test2_lines, test2_reference, test3_lines, test3_reference};
pub use equidim::{graded_lines, sample_on_lines, solve_equidim_2d, EquiDim2DCase, EquiDimSolution};
