//! Assembly of the sparse blocks of the discrete five-field problem.

pub mod blocks;
pub mod functional;
pub mod materials;

pub use blocks::{restrict_2d, restrict_3d, Assembler, BlockSystem};
pub use functional::{
    functional_by_blocks, functional_by_quadrature, CrossWeighting, TriangleMismatch,
};
pub use materials::MaterialFields;
